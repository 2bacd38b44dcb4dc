use clap::Parser;
use expmap_cli::commands::{execute, Cli, Format};

fn main() {
    let cli = Cli::parse();
    let report = execute(&cli);
    match cli.format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json()),
    }
    if report.exit_code == 2 {
        if let Some(r) = report.results.last() {
            eprintln!("error: {}", r.value.as_deref().unwrap_or("invalid input"));
        }
    }
    std::process::exit(report.exit_code);
}
