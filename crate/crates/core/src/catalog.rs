//! Built-in algebras and maps with executable facts about them.

use std::fmt;

use num_rational::BigRational;
use rand::Rng;

use crate::algebra::{
    bounded_span, subalgebra_intersection_bounded, subalgebra_membership_bounded, Algebra, AlgebraElement,
    AlgebraPresentation,
};
use crate::coeff::FieldSpec;
use crate::error::{Error, Result};
use crate::expmap::{invariant_subspace_bounded, ExponentialMap};
use crate::grading::FiltrationContext;
use crate::linalg;
use crate::poly::{fmt_fraction, MonomialOrder, PolyRing, Polynomial, VarList, WeightVector};
use crate::sample;

/// A machine-checkable claim about a catalog entry.
#[derive(Clone, Debug)]
pub enum Fact {
    /// `verify()` passes (or fails with the given canonical witness).
    Verification {
        map: String,
        passes: bool,
        witness: Option<String>,
    },
    Invariant {
        map: String,
        element: AlgebraElement,
        invariant: bool,
    },
    PhiDegree {
        map: String,
        element: AlgebraElement,
        degree: Option<u32>,
    },
    GrdegU {
        map: String,
        weights: String,
        value: BigRational,
    },
    GradedRelation {
        weights: String,
        relation: Polynomial,
    },
    /// The homogenized map verifies on the graded model.
    Homogenizes {
        map: String,
        weights: String,
    },
    /// Invariants of degree `<= degree` are exactly the bounded span of `generators`.
    InvariantsSpannedBy {
        map: String,
        generators: Vec<AlgebraElement>,
        degree: u32,
    },
    /// The common invariants of `maps` in degree `<= degree` have this basis.
    CommonInvariants {
        maps: Vec<String>,
        degree: u32,
        basis: Vec<AlgebraElement>,
    },
    /// Bounded span intersection of two generator sets has this basis.
    SpanIntersection {
        left: Vec<AlgebraElement>,
        right: Vec<AlgebraElement>,
        degree: u32,
        basis: Vec<AlgebraElement>,
    },
}

fn list(xs: &[AlgebraElement]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fact::Verification { map, passes: true, .. } => write!(f, "{map} is an exponential map"),
            Fact::Verification { map, passes: false, witness } => {
                write!(f, "{map} fails verification")?;
                if let Some(w) = witness {
                    write!(f, " with witness {w}")?;
                }
                Ok(())
            }
            Fact::Invariant { map, element, invariant } => {
                write!(f, "{element} is {}{map}-invariant", if *invariant { "" } else { "not " })
            }
            Fact::PhiDegree { map, element, degree } => match degree {
                Some(d) => write!(f, "deg_{map}({element}) = {d}"),
                None => write!(f, "deg_{map}({element}) = -inf"),
            },
            Fact::GrdegU { map, weights, value } => {
                write!(f, "grdeg(U) for ({map}, {weights}) = {}", fmt_fraction(value))
            }
            Fact::GradedRelation { weights, relation } => write!(f, "graded relation for {weights} is {relation}"),
            Fact::Homogenizes { map, weights } => write!(f, "homogenization of {map} for {weights} verifies"),
            Fact::InvariantsSpannedBy { map, generators, degree } => {
                write!(f, "{map}-invariants of degree <= {degree} = span of products of {{{}}}", list(generators))
            }
            Fact::CommonInvariants { maps, degree, basis } => {
                write!(f, "common invariants of {} in degree <= {degree} = span{{{}}}", maps.join(", "), list(basis))
            }
            Fact::SpanIntersection { left, right, degree, basis } => {
                write!(f, "k[{}] meets k[{}] in degree <= {degree} in span{{{}}}", list(left), list(right), list(basis))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactResult {
    pub fact: String,
    pub passed: bool,
    pub detail: Option<String>,
}

impl fmt::Display for FactResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", if self.passed { "PASS" } else { "FAIL" }, self.fact)?;
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub algebra: Algebra,
    pub maps: Vec<(String, ExponentialMap)>,
    pub weights: Vec<(String, WeightVector)>,
    pub facts: Vec<Fact>,
}

impl CatalogEntry {
    pub fn map(&self, name: &str) -> Result<&ExponentialMap> {
        self.maps
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::InvalidArgs(format!("entry `{}` has no map `{name}`", self.name)))
    }

    pub fn weight(&self, name: &str) -> Result<&WeightVector> {
        self.weights
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, w)| w)
            .ok_or_else(|| Error::InvalidArgs(format!("entry `{}` has no weights `{name}`", self.name)))
    }

    pub fn var(&self, name: &str) -> AlgebraElement {
        self.algebra.var(name).expect("catalog variable")
    }

    /// Runs every documented fact.
    pub fn check_facts(&self) -> Vec<FactResult> {
        self.facts.iter().map(|f| self.check(f)).collect()
    }

    pub fn check(&self, fact: &Fact) -> FactResult {
        let (passed, detail) = match self.evaluate(fact) {
            Ok(r) => r,
            Err(e) => (false, Some(format!("error: {e}"))),
        };
        FactResult { fact: fact.to_string(), passed, detail }
    }

    fn evaluate(&self, fact: &Fact) -> Result<(bool, Option<String>)> {
        Ok(match fact {
            Fact::Verification { map, passes, witness } => {
                let report = self.map(map)?.verify();
                let got = report.checks.iter().find(|c| !c.passed).and_then(|c| c.witness_text.clone());
                let ok = report.passed() == *passes && (witness.is_none() || got == *witness);
                (ok, got.map(|w| format!("witness {w}")))
            }
            Fact::Invariant { map, element, invariant } => {
                let got = self.map(map)?.is_invariant(element)?;
                (got == *invariant, None)
            }
            Fact::PhiDegree { map, element, degree } => {
                let got = self.map(map)?.phi_degree(element)?;
                let shown = got.map_or("-inf".to_string(), |d| d.to_string());
                (got == *degree, Some(format!("got {shown}")))
            }
            Fact::GrdegU { map, weights, value } => {
                let ctx = FiltrationContext::new(&self.algebra, self.weight(weights)?.clone())?;
                let got = ctx.grade(self.map(map)?)?.grdeg_u().clone();
                (got == *value, Some(format!("got {}", fmt_fraction(&got))))
            }
            Fact::GradedRelation { weights, relation } => {
                let ctx = FiltrationContext::new(&self.algebra, self.weight(weights)?.clone())?;
                (ctx.graded_model().relation() == relation, None)
            }
            Fact::Homogenizes { map, weights } => {
                let ctx = FiltrationContext::new(&self.algebra, self.weight(weights)?.clone())?;
                ctx.grade(self.map(map)?)?.homogenize_map()?;
                (true, None)
            }
            Fact::InvariantsSpannedBy { map, generators, degree } => {
                let m = self.map(map)?;
                let inv = invariant_subspace_bounded(m, *degree)?;
                let inside = inv
                    .iter()
                    .map(|b| subalgebra_membership_bounded(b, generators, *degree).map(|r| r.member))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .all(|x| x);
                let span = bounded_span(generators, *degree);
                let span_invariant =
                    span.iter().map(|s| m.is_invariant(s)).collect::<Result<Vec<_>>>()?.into_iter().all(|x| x);
                (
                    inside && span_invariant && span.len() == inv.len(),
                    Some(format!("dimension {}, bounded check", inv.len())),
                )
            }
            Fact::CommonInvariants { maps, degree, basis } => {
                let got = self.common_invariants(maps, *degree)?;
                (same_span(&self.algebra, &got, basis), Some(format!("basis {{{}}}", list(&got))))
            }
            Fact::SpanIntersection { left, right, degree, basis } => {
                let got = subalgebra_intersection_bounded(left, right, *degree)?;
                (same_span(&self.algebra, &got, basis), Some(format!("basis {{{}}}", list(&got))))
            }
        })
    }

    /// Basis of the elements of degree `<= d` fixed by every named map.
    pub fn common_invariants(&self, maps: &[String], d: u32) -> Result<Vec<AlgebraElement>> {
        let ring = self.algebra.ring();
        let order = self.algebra.order();
        let mut acc: Option<Vec<Polynomial>> = None;
        for name in maps {
            let inv: Vec<Polynomial> =
                invariant_subspace_bounded(self.map(name)?, d)?.iter().map(|e| e.rep().clone()).collect();
            acc = Some(match acc {
                None => inv,
                Some(prev) => {
                    let a: Vec<&Polynomial> = prev.iter().collect();
                    let b: Vec<&Polynomial> = inv.iter().collect();
                    linalg::intersection(ring, &a, &b, order)
                }
            });
        }
        acc.unwrap_or_default().iter().map(|p| self.algebra.element(p)).collect()
    }
}

fn same_span(algebra: &Algebra, a: &[AlgebraElement], b: &[AlgebraElement]) -> bool {
    let canon = |xs: &[AlgebraElement]| {
        let reps: Vec<&Polynomial> = xs.iter().map(|x| x.rep()).collect();
        linalg::span_basis(algebra.ring(), &reps, algebra.order())
    };
    canon(a) == canon(b)
}

fn field(p: u64) -> Result<FieldSpec> {
    FieldSpec::new(p)
}

fn u_vars(algebra: &Algebra) -> impl Fn(&str) -> Polynomial {
    let ur = ExponentialMap::u_ring_for(algebra);
    move |n: &str| Polynomial::var(&ur, n).expect("variable of A[U]")
}

/// The Russell ring `k[x,y,z,t]/(x + x^2 y + z^2 + t^3)` with its two maps and weights.
pub fn russell(p: u64) -> Result<CatalogEntry> {
    let ring = PolyRing::new(field(p)?, VarList::new(&["x", "y", "z", "t"])?);
    let v = |n: &str| Polynomial::var(&ring, n).expect("ring variable");
    let rel = &(&(&v("x") + &(&v("x").pow(2) * &v("y"))) + &v("z").pow(2)) + &v("t").pow(3);
    let order = MonomialOrder::lex(ring.vars(), &["y", "z", "t", "x"])?;
    let r = AlgebraPresentation::new(&ring, rel, order)?.solve_for("y")?.shared();

    let u = u_vars(&r);
    let k = |c: i64| Polynomial::from_int(&ExponentialMap::u_ring_for(&r), c);
    let (x, y, z, t, uu) = (u("x"), u("y"), u("z"), u("t"), u("U"));
    let x2 = x.pow(2);
    let phi1 = ExponentialMap::from_named(
        &r,
        &[("y", &(&y + &(&(&k(2) * &z) * &uu)) - &(&x2 * &uu.pow(2))), ("z", &z - &(&x2 * &uu))],
    )?;
    let y2 =
        &(&(&y + &(&(&k(3) * &t.pow(2)) * &uu)) - &(&(&(&k(3) * &x2) * &t) * &uu.pow(2))) + &(&x.pow(4) * &uu.pow(3));
    let phi2 = ExponentialMap::from_named(&r, &[("y", y2), ("t", &t - &(&x2 * &uu))])?;

    let w1 = WeightVector::from_ints(&[-1, 2, 0, 0]);
    let w2 = WeightVector::from_ints(&[6, -6, 3, 2]);
    let [ex, ey, ez, et] = ["x", "y", "z", "t"].map(|n| r.var(n).expect("ring variable"));
    let graded_rel = &(&(&v("x").pow(2) * &v("y")) + &v("z").pow(2)) + &v("t").pow(3);
    let two = BigRational::from_integer(2.into());
    let s = |x: &str| x.to_string();
    let mut facts = vec![
        Fact::Verification { map: s("phi1"), passes: true, witness: None },
        Fact::Verification { map: s("phi2"), passes: true, witness: None },
    ];
    for (m, yes, no) in [("phi1", [&ex, &et], [&ez, &ey]), ("phi2", [&ex, &ez], [&et, &ey])] {
        for e in yes {
            facts.push(Fact::Invariant { map: s(m), element: e.clone(), invariant: true });
        }
        for e in no {
            facts.push(Fact::Invariant { map: s(m), element: e.clone(), invariant: false });
        }
    }
    facts.extend([
        Fact::PhiDegree { map: s("phi1"), element: ez.clone(), degree: Some(1) },
        Fact::PhiDegree { map: s("phi1"), element: ey.clone(), degree: Some(2) },
        Fact::PhiDegree { map: s("phi2"), element: ey.clone(), degree: Some(3) },
        Fact::GradedRelation { weights: s("w1"), relation: graded_rel },
        Fact::GrdegU { map: s("phi1"), weights: s("w1"), value: two.clone() },
        Fact::GrdegU { map: s("phi2"), weights: s("w1"), value: two },
        Fact::Homogenizes { map: s("phi1"), weights: s("w1") },
        Fact::Homogenizes { map: s("phi2"), weights: s("w1") },
    ]);
    Ok(CatalogEntry {
        name: "russell".into(),
        algebra: r,
        maps: vec![(s("phi1"), phi1), (s("phi2"), phi2)],
        weights: vec![(s("w1"), w1), (s("w2"), w2)],
        facts,
    })
}

/// Bounded-degree checks behind "the invariant rings are k[x,t] and k[x,z]
/// and they meet in k[x]". Only a degree-`d` shadow; it proves nothing about
/// higher degrees.
pub fn russell_invariant_suite(entry: &CatalogEntry, d: u32) -> Result<Vec<FactResult>> {
    if d < 3 {
        return Err(Error::InvalidArgs("the invariant suite needs degree >= 3".into()));
    }
    let [x, y, z, t] = ["x", "y", "z", "t"].map(|n| entry.var(n));
    let powers: Vec<AlgebraElement> = (0..=d).map(|i| x.pow(i)).collect();
    let s = |x: &str| x.to_string();
    let mut facts = Vec::new();
    for (m, yes, no) in [("phi1", [&x, &t], [&z, &y]), ("phi2", [&x, &z], [&t, &y])] {
        for e in yes {
            facts.push(Fact::Invariant { map: s(m), element: e.clone(), invariant: true });
        }
        for e in no {
            facts.push(Fact::Invariant { map: s(m), element: e.clone(), invariant: false });
        }
    }
    facts.extend([
        Fact::InvariantsSpannedBy { map: s("phi1"), generators: vec![x.clone(), t.clone()], degree: d },
        Fact::InvariantsSpannedBy { map: s("phi2"), generators: vec![x.clone(), z.clone()], degree: d },
        Fact::SpanIntersection {
            left: vec![x.clone(), t],
            right: vec![x.clone(), z],
            degree: d,
            basis: powers.clone(),
        },
        Fact::CommonInvariants { maps: vec![s("phi1"), s("phi2")], degree: d, basis: powers },
    ]);
    Ok(facts.iter().map(|f| entry.check(f)).collect())
}

/// The free ring `k[X1..Xn]` with the translations `Xj -> Xj + delta_ij U`.
pub fn coordinate_maps(n: usize, p: u64) -> Result<CatalogEntry> {
    if !(1..=4).contains(&n) {
        return Err(Error::InvalidArgs("coordinate maps are built for 1 <= n <= 4".into()));
    }
    let names: Vec<String> = (1..=n).map(|i| format!("X{i}")).collect();
    let ring = PolyRing::new(field(p)?, VarList::new(&names)?);
    let a = AlgebraPresentation::free(&ring).shared();
    let u = u_vars(&a);
    let mut maps = Vec::new();
    for (i, name) in names.iter().enumerate() {
        let m = ExponentialMap::from_named(&a, &[(name, &u(name) + &u("U"))])?;
        maps.push((format!("phi{}", i + 1), m));
    }
    let mut facts: Vec<Fact> =
        maps.iter().map(|(m, _)| Fact::Verification { map: m.clone(), passes: true, witness: None }).collect();
    for (i, (m, _)) in maps.iter().enumerate() {
        for (j, name) in names.iter().enumerate() {
            facts.push(Fact::Invariant { map: m.clone(), element: a.var(name)?, invariant: i != j });
        }
    }
    facts.push(Fact::CommonInvariants {
        maps: maps.iter().map(|(m, _)| m.clone()).collect(),
        degree: 5,
        basis: vec![a.one()],
    });
    Ok(CatalogEntry { name: format!("coordinate-{n}"), algebra: a, maps, weights: Vec::new(), facts })
}

/// `k[X,Y]` over F_2 with `Y -> Y + X U^2`, whose positive degrees are all even.
pub fn char2_plane() -> Result<CatalogEntry> {
    let ring = PolyRing::new(field(2)?, VarList::new(&["X", "Y"])?);
    let a = AlgebraPresentation::free(&ring).shared();
    let u = u_vars(&a);
    let m = ExponentialMap::from_named(&a, &[("Y", &u("Y") + &(&u("X") * &u("U").pow(2)))])?;
    let (x, y) = (a.var("X")?, a.var("Y")?);
    let facts = vec![
        Fact::Verification { map: "phi".into(), passes: true, witness: None },
        Fact::Invariant { map: "phi".into(), element: x, invariant: true },
        Fact::PhiDegree { map: "phi".into(), element: y.clone(), degree: Some(2) },
        Fact::PhiDegree { map: "phi".into(), element: y.pow(3), degree: Some(6) },
    ];
    Ok(CatalogEntry {
        name: "char2-plane".into(),
        algebra: a,
        maps: vec![("phi".into(), m)],
        weights: Vec::new(),
        facts,
    })
}

/// `k[X,Y]` in characteristic `p` with `Y -> Y + U + X U^p` and weights `(alpha, beta)`.
pub fn p_shift_entry(p: u64, alpha: BigRational, beta: BigRational) -> Result<CatalogEntry> {
    if p == 0 {
        return Err(Error::InvalidCharacteristic(0));
    }
    let ring = PolyRing::new(field(p)?, VarList::new(&["X", "Y"])?);
    let a = AlgebraPresentation::free(&ring).shared();
    let u = u_vars(&a);
    let img = &(&u("Y") + &u("U")) + &(&u("X") * &u("U").pow(p as u32));
    let m = ExponentialMap::from_named(&a, &[("Y", img)])?;
    let facts = vec![
        Fact::Verification { map: "phi".into(), passes: true, witness: None },
        Fact::Homogenizes { map: "phi".into(), weights: "w".into() },
    ];
    Ok(CatalogEntry {
        name: "p-shift".into(),
        algebra: a,
        maps: vec![("phi".into(), m)],
        weights: vec![("w".into(), WeightVector::new(vec![alpha, beta]))],
        facts,
    })
}

/// `grdeg(U)` and the homogenized map for the characteristic-`p` example.
pub fn p_shift(p: u64, alpha: BigRational, beta: BigRational) -> Result<(BigRational, ExponentialMap)> {
    let entry = p_shift_entry(p, alpha, beta)?;
    let ctx = FiltrationContext::new(&entry.algebra, entry.weight("w")?.clone())?;
    let h = ctx.grade(entry.map("phi")?)?;
    Ok((h.grdeg_u().clone(), h.homogenize_map()?))
}

/// The three closed forms for the homogenized image of `Y`, chosen by
/// comparing `beta` with `(beta - alpha)/p`.
pub fn p_shift_expected(p: u64, alpha: &BigRational, beta: &BigRational) -> Result<(BigRational, Polynomial)> {
    let entry = p_shift_entry(p, alpha.clone(), beta.clone())?;
    let u = u_vars(&entry.algebra);
    let other = (beta - alpha) / BigRational::from_integer((p as i64).into());
    let xup = &u("X") * &u("U").pow(p as u32);
    Ok(match beta.cmp(&other) {
        std::cmp::Ordering::Less => (beta.clone(), &u("Y") + &u("U")),
        std::cmp::Ordering::Equal => (beta.clone(), &(&u("Y") + &u("U")) + &xup),
        std::cmp::Ordering::Greater => (other, &u("Y") + &xup),
    })
}

/// Hypotheses and conclusion of the "sum of powers is invariant" statement for one instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PowerSumOutcome {
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
}

impl PowerSumOutcome {
    pub fn is_violation(&self) -> bool {
        self.hypotheses_hold && !self.conclusion_holds
    }
}

/// Evaluates whether `c1 a^n + c2 b^m` is a nonzero invariant and whether `a`, `b` are invariant.
pub fn power_sum_check(
    map: &ExponentialMap,
    c1: &AlgebraElement,
    c2: &AlgebraElement,
    a: &AlgebraElement,
    b: &AlgebraElement,
    n: u32,
    m: u32,
) -> Result<PowerSumOutcome> {
    if n < 2 || m < 2 {
        return Err(Error::InvalidExponents(n, m));
    }
    for c in [c1, c2] {
        if c.is_zero() || !map.is_invariant(c)? {
            return Err(Error::NonInvariantScalars);
        }
    }
    let s = &(c1 * &a.pow(n)) + &(c2 * &b.pow(m));
    let hypotheses_hold = !s.is_zero() && map.is_invariant(&s)?;
    let conclusion_holds = map.is_invariant(a)? && map.is_invariant(b)?;
    Ok(PowerSumOutcome { hypotheses_hold, conclusion_holds })
}

pub fn is_power_of(k: u32, p: u64) -> bool {
    if p < 2 || k == 0 {
        return false;
    }
    let mut k = k as u64;
    while k.is_multiple_of(p) {
        k /= p;
    }
    k == 1
}

/// One instance found by the explorer where the hypotheses hold and the conclusion fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumWitness {
    pub a: AlgebraElement,
    pub b: AlgebraElement,
    pub n: u32,
    pub m: u32,
}

/// Random instances with `n` or `m` a power of the characteristic. Pairs are
/// drawn as `b = a + i` or `b` independent, where `i` is a random polynomial
/// in `invariants`; `c1 = c2 = 1`. Reports what it finds and asserts nothing.
pub fn power_sum_explore<R: Rng>(
    map: &ExponentialMap,
    invariants: &[AlgebraElement],
    trials: usize,
    rng: &mut R,
) -> Result<Vec<PowerSumWitness>> {
    let algebra = map.algebra();
    let p = algebra.field().characteristic();
    if p == 0 {
        return Ok(Vec::new());
    }
    let one = algebra.one();
    let mut found = Vec::new();
    for _ in 0..trials {
        let a = sample::random_nonzero(algebra, 2, 2, rng);
        let b = if rng.random_bool(0.5) && !invariants.is_empty() {
            &a + &sample::random_in_subalgebra(invariants, 2, 2, rng)
        } else {
            sample::random_nonzero(algebra, 2, 2, rng)
        };
        let n = p as u32;
        let m = if rng.random_bool(0.5) { n } else { rng.random_range(2..=3) };
        let out = power_sum_check(map, &one, &one, &a, &b, n, m)?;
        if out.is_violation() {
            found.push(PowerSumWitness { a, b, n, m });
        }
    }
    Ok(found)
}

/// Verification of the shipped non-examples plus the trivial inclusion.
pub fn nonexample_suite() -> Result<Vec<FactResult>> {
    let mut out = Vec::new();
    for entry in nonexample_entries()? {
        out.extend(entry.check_facts());
    }
    Ok(out)
}

/// `psi(X) = X + XU` over Q, and `Y -> Y + U^2` on `k[X,Y]` in each listed characteristic.
pub fn nonexample_entries() -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    let ring = PolyRing::new(FieldSpec::rationals(), VarList::new(&["X"])?);
    let a = AlgebraPresentation::free(&ring).shared();
    let u = u_vars(&a);
    let psi = ExponentialMap::from_named(&a, &[("X", &u("X") + &(&u("X") * &u("U")))])?;
    out.push(CatalogEntry {
        name: "psi".into(),
        algebra: a.clone(),
        maps: vec![("psi".into(), psi), ("id".into(), ExponentialMap::inclusion(&a))],
        weights: Vec::new(),
        facts: vec![
            Fact::Verification { map: "psi".into(), passes: false, witness: Some("X*S*U".into()) },
            Fact::Verification { map: "id".into(), passes: true, witness: None },
        ],
    });
    for p in [0, 2, 3, 5] {
        let ring = PolyRing::new(field(p)?, VarList::new(&["X", "Y"])?);
        let a = AlgebraPresentation::free(&ring).shared();
        let u = u_vars(&a);
        let m = ExponentialMap::from_named(&a, &[("Y", &u("Y") + &u("U").pow(2))])?;
        let fact = if p == 2 {
            Fact::Verification { map: "square".into(), passes: true, witness: None }
        } else {
            Fact::Verification { map: "square".into(), passes: false, witness: Some("2*S*U".into()) }
        };
        out.push(CatalogEntry {
            name: format!("square-shift-{p}"),
            algebra: a,
            maps: vec![("square".into(), m)],
            weights: Vec::new(),
            facts: vec![fact],
        });
    }
    Ok(out)
}

/// Names accepted by [`entry`].
pub const ENTRY_NAMES: &[&str] = &["russell", "coordinate", "char2-plane", "p-shift", "nonexamples"];

/// Catalog entries by name for characteristic `p`.
pub fn entry(name: &str, p: u64) -> Result<Vec<CatalogEntry>> {
    match name {
        "russell" => Ok(vec![russell(p)?]),
        "coordinate" => Ok(vec![coordinate_maps(3, p)?]),
        "char2-plane" => Ok(vec![char2_plane()?]),
        "p-shift" => {
            let p = if p == 0 { 2 } else { p };
            let q = |n: i64| BigRational::from_integer(n.into());
            Ok(vec![p_shift_entry(p, q(-1), q(1))?])
        }
        "nonexamples" => nonexample_entries(),
        _ => Err(Error::InvalidArgs(format!("unknown catalog entry `{name}`"))),
    }
}
