//! Session files: one algebra, its weight vectors and its candidate maps.
//!
//! ```text
//! field char = 0
//! ring vars = x, y, z, t
//! relation = x + x^2*y + z^2 + t^3
//! solve = y
//! order = lex(y, z, t, x)
//! weights w1: x = -1, y = 2, z = 0, t = 0
//! map phi1: y -> y + 2*z*U - x^2*U^2, z -> z - x^2*U
//! ```

use std::fmt;
use std::sync::Arc;

use expmap_core::algebra::{Algebra, AlgebraElement, AlgebraPresentation};
use expmap_core::coeff::{Coefficient, FieldSpec};
use expmap_core::expmap::ExponentialMap;
use expmap_core::grading::FiltrationContext;
use expmap_core::poly::{MonomialOrder, PolyRing, Polynomial, VarList, WeightVector};
use num_bigint::BigInt;
use num_rational::BigRational;

const KEYWORDS: &[&str] = &["field", "char", "ring", "vars", "relation", "solve", "order", "lex", "weights", "map"];
const RESERVED: &[&str] = &["U", "S"];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SessionError {
    #[error("{line}:{col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("{line}:{col}: unknown variable `{name}`")]
    UnknownVariable { line: usize, col: usize, name: String },
    #[error("{line}:{col}: `{name}` is reserved")]
    ReservedName { line: usize, col: usize, name: String },
    #[error("{0}")]
    Invalid(String),
}

impl From<expmap_core::Error> for SessionError {
    fn from(e: expmap_core::Error) -> Self {
        SessionError::Invalid(e.to_string())
    }
}

pub type SessionResult<T> = std::result::Result<T, SessionError>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapDecl {
    pub name: String,
    /// `(generator, image)`; images live in the ring with `U` appended.
    pub images: Vec<(String, Polynomial)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Session {
    pub field: FieldSpec,
    pub vars: Vec<String>,
    pub relation: Option<Polynomial>,
    pub solve: Option<String>,
    pub order: Option<Vec<String>>,
    pub weights: Vec<(String, WeightVector)>,
    pub maps: Vec<MapDecl>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(&'static str),
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> SessionResult<Vec<Token>> {
    let mut out = Vec::new();
    for (li, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            let push = |tok, out: &mut Vec<Token>| out.push(Token { tok, line: li + 1, col });
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                push(Tok::Int(s.parse().expect("digits")), &mut out);
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                push(Tok::Ident(chars[start..i].iter().collect()), &mut out);
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                push(Tok::Sym("->"), &mut out);
                i += 2;
            } else {
                let sym = match c {
                    '=' => "=",
                    ',' => ",",
                    ':' => ":",
                    '+' => "+",
                    '-' => "-",
                    '*' => "*",
                    '/' => "/",
                    '^' => "^",
                    '(' => "(",
                    ')' => ")",
                    _ => {
                        return Err(SessionError::Parse {
                            line: li + 1,
                            col,
                            message: format!("unexpected character `{c}`"),
                        })
                    }
                };
                push(Tok::Sym(sym), &mut out);
                i += 1;
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    last: (usize, usize),
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.last, |t| (t.line, t.col))
    }

    fn err<T>(&self, message: impl Into<String>) -> SessionResult<T> {
        let (line, col) = self.here();
        Err(SessionError::Parse { line, col, message: message.into() })
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        if let Some(t) = &t {
            self.last = (t.line, t.col + 1);
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> SessionResult<()> {
        if self.eat(sym) {
            Ok(())
        } else {
            self.err(format!("expected `{sym}`"))
        }
    }

    fn keyword(&mut self, kw: &str) -> SessionResult<()> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.next();
                Ok(())
            }
            _ => self.err(format!("expected `{kw}`")),
        }
    }

    /// A plain identifier (not a keyword).
    fn ident(&mut self) -> SessionResult<(String, usize, usize)> {
        let (line, col) = self.here();
        match self.peek().cloned() {
            Some(Tok::Ident(s)) if !KEYWORDS.contains(&s.as_str()) => {
                self.next();
                Ok((s, line, col))
            }
            _ => self.err("expected an identifier"),
        }
    }

    fn int(&mut self) -> SessionResult<BigInt> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.next();
                Ok(n)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn rational(&mut self) -> SessionResult<BigRational> {
        let neg = self.eat("-");
        let n = self.int()?;
        let d = if self.eat("/") { self.int()? } else { BigInt::from(1) };
        if d == BigInt::from(0) {
            return self.err("zero denominator");
        }
        let q = BigRational::new(n, d);
        Ok(if neg { -q } else { q })
    }
}

/// Expression context: the ring to build in and whether `U` is allowed.
struct ExprCtx<'a> {
    ring: &'a Arc<PolyRing>,
    allow_u: bool,
}

impl Parser {
    fn expr(&mut self, cx: &ExprCtx) -> SessionResult<Polynomial> {
        let mut acc = self.term(cx)?;
        loop {
            if self.eat("+") {
                acc = &acc + &self.term(cx)?;
            } else if self.eat("-") {
                acc = &acc - &self.term(cx)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self, cx: &ExprCtx) -> SessionResult<Polynomial> {
        let mut acc = self.unary(cx)?;
        while self.eat("*") {
            acc = &acc * &self.unary(cx)?;
        }
        Ok(acc)
    }

    fn unary(&mut self, cx: &ExprCtx) -> SessionResult<Polynomial> {
        if self.eat("-") {
            return Ok(-&self.unary(cx)?);
        }
        let base = self.atom(cx)?;
        if self.eat("^") {
            let e = self.int()?;
            let e: u32 = e.try_into().map_err(|_| ()).or_else(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self, cx: &ExprCtx) -> SessionResult<Polynomial> {
        let (line, col) = self.here();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.next();
                let field = cx.ring.field();
                let c = if self.eat("/") {
                    let d = self.int()?;
                    Coefficient::from_ratio(&n, &d, field).map_err(|e| SessionError::Parse {
                        line,
                        col,
                        message: e.to_string(),
                    })?
                } else {
                    Coefficient::from_bigint(&n, field)
                };
                Ok(Polynomial::constant(cx.ring, c))
            }
            Some(Tok::Ident(name)) => {
                self.next();
                if name == "U" && cx.allow_u {
                    return Ok(Polynomial::var(cx.ring, "U")?);
                }
                if RESERVED.contains(&name.as_str()) || KEYWORDS.contains(&name.as_str()) {
                    return Err(SessionError::ReservedName { line, col, name });
                }
                Polynomial::var(cx.ring, &name).map_err(|_| SessionError::UnknownVariable { line, col, name })
            }
            Some(Tok::Sym("(")) => {
                self.next();
                let e = self.expr(cx)?;
                self.expect(")")?;
                Ok(e)
            }
            _ => self.err("expected a number, a variable or `(`"),
        }
    }
}

/// Parses and validates a session.
pub fn parse_session(text: &str) -> SessionResult<Session> {
    let mut p = Parser { toks: lex(text)?, pos: 0, last: (1, 1) };
    let mut field: Option<FieldSpec> = None;
    let mut ring: Option<(Arc<PolyRing>, Arc<PolyRing>)> = None;
    let mut vars: Vec<String> = Vec::new();
    let mut relation = None;
    let mut solve = None;
    let mut order: Option<Vec<String>> = None;
    let mut weights: Vec<(String, WeightVector)> = Vec::new();
    let mut maps: Vec<MapDecl> = Vec::new();

    while let Some(tok) = p.peek().cloned() {
        let Tok::Ident(kw) = tok else {
            return p.err("expected a declaration");
        };
        let (line, col) = p.here();
        let need_ring = |ring: &Option<(Arc<PolyRing>, Arc<PolyRing>)>| {
            ring.clone().ok_or(SessionError::Parse { line, col, message: format!("`{kw}` before `ring`") })
        };
        let dup = |what: &str| SessionError::Parse { line, col, message: format!("duplicate `{what}` declaration") };
        p.next();
        match kw.as_str() {
            "field" => {
                if field.is_some() {
                    return Err(dup("field"));
                }
                p.keyword("char")?;
                p.expect("=")?;
                let n = p.int()?;
                let n: u64 = n.try_into().map_err(|_| ()).or_else(|_| p.err("characteristic too large"))?;
                field =
                    Some(FieldSpec::new(n).map_err(|e| SessionError::Parse { line, col, message: e.to_string() })?);
            }
            "ring" => {
                if ring.is_some() {
                    return Err(dup("ring"));
                }
                let Some(f) = field else {
                    return p.err("`field` must be declared before `ring`");
                };
                p.keyword("vars")?;
                p.expect("=")?;
                loop {
                    let (line, col) = p.here();
                    let name = match p.peek().cloned() {
                        Some(Tok::Ident(s)) => {
                            p.next();
                            s
                        }
                        _ => return p.err("expected a variable name"),
                    };
                    if RESERVED.contains(&name.as_str()) || KEYWORDS.contains(&name.as_str()) {
                        return Err(SessionError::ReservedName { line, col, name });
                    }
                    if vars.contains(&name) {
                        return Err(SessionError::Parse {
                            line,
                            col,
                            message: format!("variable `{name}` declared twice"),
                        });
                    }
                    vars.push(name);
                    if !p.eat(",") {
                        break;
                    }
                }
                let r = PolyRing::new(f, VarList::new(&vars)?);
                let ur = r.adjoin(&["U"])?;
                ring = Some((r, ur));
            }
            "relation" => {
                let (r, _) = need_ring(&ring)?;
                if relation.is_some() {
                    return Err(dup("relation"));
                }
                p.expect("=")?;
                relation = Some(p.expr(&ExprCtx { ring: &r, allow_u: false })?);
            }
            "solve" => {
                need_ring(&ring)?;
                if solve.is_some() {
                    return Err(dup("solve"));
                }
                p.expect("=")?;
                let (name, l, c) = p.ident()?;
                if !vars.contains(&name) {
                    return Err(SessionError::UnknownVariable { line: l, col: c, name });
                }
                solve = Some(name);
            }
            "order" => {
                need_ring(&ring)?;
                if order.is_some() {
                    return Err(dup("order"));
                }
                p.expect("=")?;
                p.keyword("lex")?;
                p.expect("(")?;
                let mut names = Vec::new();
                loop {
                    let (name, l, c) = p.ident()?;
                    if !vars.contains(&name) {
                        return Err(SessionError::UnknownVariable { line: l, col: c, name });
                    }
                    if names.contains(&name) {
                        return Err(SessionError::Parse { line: l, col: c, message: format!("`{name}` listed twice") });
                    }
                    names.push(name);
                    if !p.eat(",") {
                        break;
                    }
                }
                p.expect(")")?;
                order = Some(names);
            }
            "weights" => {
                need_ring(&ring)?;
                let (name, ..) = p.ident()?;
                if weights.iter().any(|(n, _)| *n == name) {
                    return Err(dup(&format!("weights {name}")));
                }
                p.expect(":")?;
                let mut w: Vec<Option<BigRational>> = vec![None; vars.len()];
                loop {
                    let (v, l, c) = p.ident()?;
                    let Some(i) = vars.iter().position(|x| *x == v) else {
                        return Err(SessionError::UnknownVariable { line: l, col: c, name: v });
                    };
                    if w[i].is_some() {
                        return Err(SessionError::Parse {
                            line: l,
                            col: c,
                            message: format!("weight of `{v}` given twice"),
                        });
                    }
                    p.expect("=")?;
                    w[i] = Some(p.rational()?);
                    if !p.eat(",") {
                        break;
                    }
                }
                if let Some(i) = w.iter().position(|x| x.is_none()) {
                    return Err(SessionError::Parse {
                        line,
                        col,
                        message: format!("weights `{name}` miss `{}`", vars[i]),
                    });
                }
                weights.push((name, WeightVector::new(w.into_iter().map(|x| x.unwrap()).collect())));
            }
            "map" => {
                let (_, ur) = need_ring(&ring)?;
                let (name, ..) = p.ident()?;
                if maps.iter().any(|m| m.name == name) {
                    return Err(dup(&format!("map {name}")));
                }
                p.expect(":")?;
                let mut images: Vec<(String, Polynomial)> = Vec::new();
                loop {
                    let (v, l, c) = p.ident()?;
                    if !vars.contains(&v) {
                        let err = if RESERVED.contains(&v.as_str()) {
                            SessionError::ReservedName { line: l, col: c, name: v }
                        } else {
                            SessionError::UnknownVariable { line: l, col: c, name: v }
                        };
                        return Err(err);
                    }
                    if images.iter().any(|(g, _)| *g == v) {
                        return Err(SessionError::Parse {
                            line: l,
                            col: c,
                            message: format!("image of `{v}` given twice"),
                        });
                    }
                    p.expect("->")?;
                    images.push((v, p.expr(&ExprCtx { ring: &ur, allow_u: true })?));
                    if !p.eat(",") {
                        break;
                    }
                }
                maps.push(MapDecl { name, images });
            }
            _ => {
                p.pos -= 1;
                return p.err(format!("unknown declaration `{kw}`"));
            }
        }
    }
    let Some(field) = field else {
        return Err(SessionError::Parse { line: 1, col: 1, message: "missing `field` declaration".into() });
    };
    if ring.is_none() {
        return Err(SessionError::Parse { line: 1, col: 1, message: "missing `ring` declaration".into() });
    }
    if solve.is_some() && relation.is_none() {
        return Err(SessionError::Invalid("`solve` needs a `relation`".into()));
    }
    let session = Session { field, vars, relation, solve, order, weights, maps };
    session.load()?;
    Ok(session)
}

/// A session with its algebra and maps built.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub algebra: Algebra,
    pub maps: Vec<(String, ExponentialMap)>,
    pub weights: Vec<(String, WeightVector)>,
}

impl Loaded {
    pub fn map(&self, name: &str) -> SessionResult<&ExponentialMap> {
        self.maps
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| SessionError::Invalid(format!("no map named `{name}`")))
    }

    pub fn weight(&self, name: &str) -> SessionResult<&WeightVector> {
        self.weights
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, w)| w)
            .ok_or_else(|| SessionError::Invalid(format!("no weights named `{name}`")))
    }

    /// Parses an expression over the algebra's variables (no `U`).
    pub fn element(&self, text: &str) -> SessionResult<AlgebraElement> {
        let poly = parse_expression(text, self.algebra.ring(), false)?;
        Ok(self.algebra.element(&poly)?)
    }

    /// Comma-separated list of expressions.
    pub fn elements(&self, text: &str) -> SessionResult<Vec<AlgebraElement>> {
        text.split(',').filter(|s| !s.trim().is_empty()).map(|s| self.element(s)).collect()
    }
}

/// Parses a standalone expression in `ring` (plus `U` when allowed).
pub fn parse_expression(text: &str, ring: &Arc<PolyRing>, allow_u: bool) -> SessionResult<Polynomial> {
    let mut p = Parser { toks: lex(text)?, pos: 0, last: (1, 1) };
    let target = if allow_u { ring.adjoin(&["U"])? } else { ring.clone() };
    let e = p.expr(&ExprCtx { ring: &target, allow_u })?;
    if p.peek().is_some() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

impl Session {
    pub fn ring(&self) -> SessionResult<Arc<PolyRing>> {
        Ok(PolyRing::new(self.field, VarList::new(&self.vars)?))
    }

    pub fn monomial_order(&self) -> SessionResult<MonomialOrder> {
        let ring = self.ring()?;
        Ok(match &self.order {
            Some(names) => MonomialOrder::lex(ring.vars(), names)?,
            None => MonomialOrder::natural(ring.nvars()),
        })
    }

    pub fn load(&self) -> SessionResult<Loaded> {
        let ring = self.ring()?;
        let relation = self.relation.clone().unwrap_or_else(|| Polynomial::zero(&ring));
        let mut pres = AlgebraPresentation::new(&ring, relation, self.monomial_order()?)?;
        if let Some(v) = &self.solve {
            pres = pres.solve_for(v)?;
        }
        let algebra = pres.shared();
        for (name, w) in &self.weights {
            FiltrationContext::new(&algebra, w.clone())
                .map_err(|e| SessionError::Invalid(format!("weights `{name}`: {e}")))?;
        }
        let maps = self
            .maps
            .iter()
            .map(|m| {
                let images: Vec<(&str, Polynomial)> = m.images.iter().map(|(g, p)| (g.as_str(), p.clone())).collect();
                Ok((m.name.clone(), ExponentialMap::from_named(&algebra, &images)?))
            })
            .collect::<SessionResult<Vec<_>>>()?;
        Ok(Loaded { algebra, maps, weights: self.weights.clone() })
    }
}

fn fraction(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Canonical text; parsing it back gives an equal session.
impl fmt::Display for Session {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let order = self.monomial_order().map_err(|_| fmt::Error)?;
        writeln!(f, "field char = {}", self.field.characteristic())?;
        writeln!(f, "ring vars = {}", self.vars.join(", "))?;
        if let Some(r) = &self.relation {
            writeln!(f, "relation = {}", r.render(&order))?;
        }
        if let Some(s) = &self.solve {
            writeln!(f, "solve = {s}")?;
        }
        if let Some(o) = &self.order {
            writeln!(f, "order = lex({})", o.join(", "))?;
        }
        for (name, w) in &self.weights {
            let entries: Vec<String> =
                self.vars.iter().zip(w.weights()).map(|(v, q)| format!("{v} = {}", fraction(q))).collect();
            writeln!(f, "weights {name}: {}", entries.join(", "))?;
        }
        let u_order = order.extended(self.vars.len() + 1);
        for m in &self.maps {
            let entries: Vec<String> = m.images.iter().map(|(g, p)| format!("{g} -> {}", p.render(&u_order))).collect();
            writeln!(f, "map {}: {}", m.name, entries.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const RUSSELL: &str = "\
field char = 0
ring vars = x, y, z, t
relation = x + x^2*y + z^2 + t^3
solve = y
order = lex(y, z, t, x)
weights w1: x = -1, y = 2, z = 0, t = 0
map phi1: y -> y + 2*z*U - x^2*U^2, z -> z - x^2*U
";

    #[test]
    fn parses_and_round_trips() {
        let s = parse_session(RUSSELL).unwrap();
        assert_eq!(s.vars, vec!["x", "y", "z", "t"]);
        assert_eq!(s.maps[0].images.len(), 2);
        let printed = s.to_string();
        assert!(printed.contains("weights w1: x = -1/1, y = 2/1, z = 0/1, t = 0/1"));
        assert_eq!(parse_session(&printed).unwrap(), s);
    }

    #[test]
    fn error_kinds() {
        let bad = RUSSELL.replace("z - x^2*U", "z + v*U");
        assert!(matches!(parse_session(&bad), Err(SessionError::UnknownVariable { name, .. }) if name == "v"));
        let bad = RUSSELL.replace("relation = x +", "relation = U +");
        assert!(matches!(parse_session(&bad), Err(SessionError::ReservedName { name, .. }) if name == "U"));
        let bad = RUSSELL.replace("x, y, z, t\n", "x, y, z, t, S\n");
        assert!(matches!(parse_session(&bad), Err(SessionError::ReservedName { .. })));
        let bad = RUSSELL.replace("x^2*y", "x^^2*y");
        assert!(matches!(parse_session(&bad), Err(SessionError::Parse { line: 3, .. })));
        let bad = RUSSELL.replace("field char = 0\n", "");
        assert!(parse_session(&bad).is_err());
        let bad = RUSSELL.replace("t = 0\n", "t = 0, x = 1\n");
        assert!(parse_session(&bad).is_err());
        assert!(parse_session("field char = 4\nring vars = a").is_err());
        // weights on a quotient need the Laurent model and must match it
        assert!(matches!(parse_session(&RUSSELL.replace("solve = y\n", "")), Err(SessionError::Invalid(_))));
        let bad = RUSSELL.replace("y = 2, z = 0", "y = 3, z = 0");
        assert!(matches!(parse_session(&bad), Err(SessionError::Invalid(m)) if m.contains("w1")));
    }

    #[test]
    fn comments_and_rationals() {
        let s = parse_session("# a line\nfield char = 5 # F_5\nring vars = a, b\nmap m: a -> a + 1/2*U\n").unwrap();
        assert_eq!(s.maps[0].images[0].1.to_string(), "a + 3*U");
        let s = parse_session("field char = 0\nring vars = a\nweights w: a = -3/6\n").unwrap();
        assert_eq!(s.weights[0].1.weights()[0], BigRational::new((-1).into(), 2.into()));
    }
}
