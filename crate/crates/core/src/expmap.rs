//! Exponential maps `phi: A -> A[U]` and their higher-derivation view.
//!
//! `D^n(a)` is the `U^n`-coefficient of `phi(a)`. A map is an exponential map
//! when `phi(relation) = 0` in `A[U]`, setting `U = 0` recovers every
//! generator, and `phi_S phi_U = phi_{S+U}` on every generator. All three are
//! checked symbolically.

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::algebra::{make_element, Algebra, AlgebraElement};
use crate::coeff::{binom_residue, Coefficient};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{PolyRing, Polynomial};

pub const WELL_DEFINED: &str = "well-defined";
pub const IDENTITY: &str = "identity";
pub const COMPOSITION: &str = "composition";

#[derive(Clone, Debug)]
pub struct ExponentialMap {
    algebra: Algebra,
    u_ring: Arc<PolyRing>,
    images: Vec<Polynomial>,
}

impl PartialEq for ExponentialMap {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.images == other.images
    }
}

impl ExponentialMap {
    /// The ring `A`'s polynomial ring with `U` appended; images must live there.
    pub fn u_ring_for(algebra: &Algebra) -> Arc<PolyRing> {
        algebra.ring().adjoin(&["U"]).expect("ring variables never include U")
    }

    /// Builds a map from generator images (one per variable, in `A[U]`).
    /// Images are reduced modulo the relation; nothing else is checked here.
    pub fn new(algebra: &Algebra, images: Vec<Polynomial>) -> Result<Self> {
        let u_ring = Self::u_ring_for(algebra);
        if images.len() != algebra.nvars() {
            return Err(Error::InvalidArgs(format!(
                "expected {} generator images, got {}",
                algebra.nvars(),
                images.len()
            )));
        }
        let images = images
            .iter()
            .map(|p| {
                let p = p.embed(&u_ring)?;
                algebra.reduce(&p)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ExponentialMap { algebra: algebra.clone(), u_ring, images })
    }

    /// Builds a map from `(generator name, image)` pairs; unnamed generators are fixed.
    pub fn from_named(algebra: &Algebra, images: &[(&str, Polynomial)]) -> Result<Self> {
        let u_ring = Self::u_ring_for(algebra);
        let mut all: Vec<Polynomial> = (0..algebra.nvars()).map(|i| Polynomial::var_at(&u_ring, i)).collect();
        for (name, img) in images {
            let i = algebra
                .ring()
                .vars()
                .index_of(name)
                .ok_or_else(|| Error::InvalidVariables(format!("unknown variable `{name}`")))?;
            all[i] = img.clone();
        }
        Self::new(algebra, all)
    }

    /// The standard inclusion `a -> a`.
    pub fn inclusion(algebra: &Algebra) -> Self {
        let u_ring = Self::u_ring_for(algebra);
        let images = (0..algebra.nvars()).map(|i| Polynomial::var_at(&u_ring, i)).collect();
        ExponentialMap { algebra: algebra.clone(), u_ring, images }
    }

    /// Verifies and returns the map, or the failing report as an error.
    pub fn checked(algebra: &Algebra, images: Vec<Polynomial>) -> Result<Self> {
        let map = Self::new(algebra, images)?;
        let report = map.verify();
        if report.passed() {
            Ok(map)
        } else {
            Err(Error::NotExponential(report.to_string()))
        }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn u_ring(&self) -> &Arc<PolyRing> {
        &self.u_ring
    }

    pub fn u_index(&self) -> usize {
        self.algebra.nvars()
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Polynomial {
        &self.images[i]
    }

    /// Image text for generator `i`, in the algebra's order.
    pub fn render_image(&self, i: usize) -> String {
        self.images[i].render(self.algebra.order())
    }

    /// Differs from the inclusion on no generator.
    pub fn is_trivial(&self) -> bool {
        self.images.iter().enumerate().all(|(i, img)| *img == Polynomial::var_at(&self.u_ring, i))
    }

    fn check_owner(&self, a: &AlgebraElement) -> Result<()> {
        if Arc::ptr_eq(a.owner(), &self.algebra) || **a.owner() == *self.algebra {
            Ok(())
        } else {
            Err(Error::MixedRing)
        }
    }

    /// `phi(a)` in `A[U]`, every `U`-coefficient in normal form.
    pub fn apply(&self, a: &AlgebraElement) -> Result<Polynomial> {
        self.check_owner(a)?;
        self.apply_poly(a.rep())
    }

    fn apply_poly(&self, f: &Polynomial) -> Result<Polynomial> {
        let img = f.substitute(&self.images, &self.u_ring)?;
        self.algebra.reduce(&img)
    }

    /// Splits a polynomial of `A[U]` into its `U`-coefficients `D^0, D^1, ...`.
    pub fn u_coefficients(&self, f: &Polynomial) -> Result<Vec<AlgebraElement>> {
        let by_power = f.coefficients_in(self.u_index(), self.algebra.ring())?;
        let top = by_power.keys().next_back().copied().unwrap_or(0);
        let mut out = vec![self.algebra.zero(); top as usize + 1];
        for (k, c) in by_power {
            if k < 0 {
                return Err(Error::InvalidArgs("negative power of U".into()));
            }
            out[k as usize] = make_element(&self.algebra, &c)?;
        }
        Ok(out)
    }

    /// `[D^0(a), ..., D^deg(a)]`; a single zero for `a = 0`.
    pub fn derivatives(&self, a: &AlgebraElement) -> Result<Vec<AlgebraElement>> {
        let img = self.apply(a)?;
        self.u_coefficients(&img)
    }

    pub fn derivation(&self) -> DerivationView<'_> {
        DerivationView { map: self }
    }

    /// `D^n(a)`, zero beyond the `U`-support.
    pub fn coefficient_d(&self, n: u32, a: &AlgebraElement) -> Result<AlgebraElement> {
        self.derivation().d(n, a)
    }

    /// `deg_U(phi(a))`; `None` stands for minus infinity (a = 0).
    pub fn phi_degree(&self, a: &AlgebraElement) -> Result<Option<u32>> {
        let img = self.apply(a)?;
        Ok(img.degree_in(self.u_index()).map(|d| d as u32))
    }

    pub fn is_invariant(&self, a: &AlgebraElement) -> Result<bool> {
        let img = self.apply(a)?;
        Ok(img == a.rep().embed(&self.u_ring)?)
    }

    /// Indices `i >= 1` with `D^i(a) != 0`.
    pub fn d_support(&self, a: &AlgebraElement) -> Result<Vec<u32>> {
        Ok(self
            .derivatives(a)?
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, _)| i as u32)
            .collect())
    }

    pub fn verify(&self) -> VerificationReport {
        let checks = vec![self.check_well_defined(), self.check_identity(), self.check_composition()];
        VerificationReport { checks, trivial: self.is_trivial() }
    }

    fn witness(&self, name: &'static str, generator: Option<usize>, w: Polynomial) -> AxiomCheck {
        let text = w.render(self.algebra.order());
        AxiomCheck {
            name,
            passed: false,
            generator: generator.map(|g| self.algebra.ring().vars().name(g).to_string()),
            witness: Some(w),
            witness_text: Some(text),
        }
    }

    fn check_well_defined(&self) -> AxiomCheck {
        let rel = self.algebra.relation();
        if rel.is_zero() {
            return AxiomCheck::pass(WELL_DEFINED);
        }
        match self.apply_poly(rel) {
            Ok(img) if img.is_zero() => AxiomCheck::pass(WELL_DEFINED),
            Ok(img) => self.witness(WELL_DEFINED, None, img),
            Err(e) => AxiomCheck::error(WELL_DEFINED, e),
        }
    }

    fn check_identity(&self) -> AxiomCheck {
        let u = self.u_index();
        for (i, img) in self.images.iter().enumerate() {
            let at_zero =
                img.evaluate_var(u, &self.algebra.field().zero()).and_then(|p| p.restrict(self.algebra.ring()));
            let g = Polynomial::var_at(self.algebra.ring(), i);
            match at_zero.and_then(|p| self.algebra.reduce(&(&p - &g))) {
                Ok(diff) if diff.is_zero() => {}
                Ok(diff) => return self.witness(IDENTITY, Some(i), diff),
                Err(e) => return AxiomCheck::error(IDENTITY, e),
            }
        }
        AxiomCheck::pass(IDENTITY)
    }

    /// `phi_S(phi_U(g)) = phi(g)|_{U = S + U}` for every generator `g`.
    fn check_composition(&self) -> AxiomCheck {
        match self.composition_witnesses() {
            Ok(None) => AxiomCheck::pass(COMPOSITION),
            Ok(Some((i, w))) => self.witness(COMPOSITION, Some(i), w),
            Err(e) => AxiomCheck::error(COMPOSITION, e),
        }
    }

    fn composition_witnesses(&self) -> Result<Option<(usize, Polynomial)>> {
        let n = self.algebra.nvars();
        let su_ring = self.algebra.ring().adjoin(&["S", "U"])?;
        let (s_idx, u_idx) = (n, n + 1);
        let s = Polynomial::var_at(&su_ring, s_idx);
        let u = Polynomial::var_at(&su_ring, u_idx);
        // A[U] -> A[S, U] renaming U to S
        let mut rename: Vec<Polynomial> = (0..n).map(|i| Polynomial::var_at(&su_ring, i)).collect();
        rename.push(s.clone());
        let images_s: Vec<Polynomial> =
            self.images.iter().map(|img| img.substitute(&rename, &su_ring)).collect::<Result<_>>()?;
        let mut outer = images_s;
        outer.push(u.clone());
        let mut shift: Vec<Polynomial> = (0..n).map(|i| Polynomial::var_at(&su_ring, i)).collect();
        shift.push(&s + &u);
        for (i, img) in self.images.iter().enumerate() {
            let lhs = self.algebra.reduce(&img.substitute(&outer, &su_ring)?)?;
            let rhs = self.algebra.reduce(&img.substitute(&shift, &su_ring)?)?;
            let mut diff = &rhs - &lhs;
            if diff.is_zero() {
                continue;
            }
            // witnesses are defined up to sign; over Q print a positive leading coefficient
            let order = self.algebra.order().extended(su_ring.nvars());
            if diff.lead_term(&order).is_some_and(|(_, c)| c.is_negative()) {
                diff = -&diff;
            }
            return Ok(Some((i, diff)));
        }
        Ok(None)
    }

    /// Reinterprets the images over another presentation with the same
    /// variable names (e.g. the same integer formulas over a different field).
    pub fn transfer(&self, target: &Algebra) -> Result<Self> {
        let u_ring = Self::u_ring_for(target);
        let images = self
            .images
            .iter()
            .map(|img| {
                let terms = img.terms().map(|(e, c)| {
                    let c = match c.as_rational() {
                        Some(q) => Coefficient::from_rational(q, target.field()),
                        None => Err(Error::InvalidArgs("only rational images can be transferred".into())),
                    };
                    c.map(|c| (e.clone(), c))
                });
                Polynomial::from_terms(&u_ring, terms.collect::<Result<Vec<_>>>()?)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(target, images)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub passed: bool,
    pub generator: Option<String>,
    pub witness: Option<Polynomial>,
    pub witness_text: Option<String>,
}

impl AxiomCheck {
    fn pass(name: &'static str) -> Self {
        AxiomCheck { name, passed: true, generator: None, witness: None, witness_text: None }
    }

    fn error(name: &'static str, e: Error) -> Self {
        AxiomCheck { name, passed: false, generator: None, witness: None, witness_text: Some(format!("error: {e}")) }
    }
}

impl fmt::Display for AxiomCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed {
            return write!(f, "{}: PASS", self.name);
        }
        write!(f, "{}: FAIL", self.name)?;
        if let Some(w) = &self.witness_text {
            write!(f, " witness {w}")?;
        }
        if let Some(g) = &self.generator {
            write!(f, " (generator {g})")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<AxiomCheck>,
    pub trivial: bool,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        if self.trivial {
            writeln!(f, "note: map is the trivial inclusion")?;
        }
        Ok(())
    }
}

/// The sequence `D = {D^0, D^1, ...}` attached to an exponential map.
#[derive(Clone, Copy, Debug)]
pub struct DerivationView<'a> {
    map: &'a ExponentialMap,
}

impl DerivationView<'_> {
    pub fn d(&self, n: u32, a: &AlgebraElement) -> Result<AlgebraElement> {
        let ds = self.map.derivatives(a)?;
        Ok(ds.get(n as usize).cloned().unwrap_or_else(|| a.owner().zero()))
    }

    /// `D^i(D^j(a)) = C(i+j, i) D^{i+j}(a)`.
    pub fn check_iterative(&self, i: u32, j: u32, a: &AlgebraElement) -> Result<bool> {
        let lhs = self.d(i, &self.d(j, a)?)?;
        let binom = binom_residue((i + j) as u64, i as u64, a.owner().field())?;
        let rhs = self.d(i + j, a)?.scale(&binom);
        Ok(lhs == rhs)
    }

    /// `D^n(ab) = sum_{i+j=n} D^i(a) D^j(b)`.
    pub fn check_leibniz(&self, n: u32, a: &AlgebraElement, b: &AlgebraElement) -> Result<bool> {
        let lhs = self.d(n, &a.try_mul(b)?)?;
        let da = self.map.derivatives(a)?;
        let db = self.map.derivatives(b)?;
        let zero = a.owner().zero();
        let get = |v: &Vec<AlgebraElement>, k: u32| v.get(k as usize).cloned().unwrap_or_else(|| zero.clone());
        let rhs = (0..=n).fold(zero.clone(), |acc, i| &acc + &(&get(&da, i) * &get(&db, n - i)));
        Ok(lhs == rhs)
    }
}

/// Candidate search for an element of minimal positive phi-degree. This is a
/// heuristic: generators, then their derivatives, then `search_bound` random
/// combinations of those candidates. Ties keep the earliest candidate.
pub fn min_positive_degree<R: Rng>(
    map: &ExponentialMap,
    search_bound: usize,
    rng: &mut R,
) -> Result<(AlgebraElement, u32)> {
    let algebra = map.algebra();
    let mut base: Vec<AlgebraElement> = algebra.generators();
    for g in algebra.generators() {
        base.extend(map.derivatives(&g)?.into_iter().skip(1).filter(|d| !d.is_zero()));
    }
    let mut best: Option<(AlgebraElement, u32)> = None;
    let consider = |a: AlgebraElement, best: &mut Option<(AlgebraElement, u32)>| -> Result<()> {
        if let Some(d) = map.phi_degree(&a)? {
            if d > 0 && best.as_ref().is_none_or(|(_, b)| d < *b) {
                *best = Some((a, d));
            }
        }
        Ok(())
    };
    for a in &base {
        consider(a.clone(), &mut best)?;
    }
    if best.is_none() {
        return Err(Error::TrivialMap);
    }
    let field = algebra.field();
    for _ in 0..search_bound {
        let mut combo = algebra.zero();
        for a in &base {
            if rng.random_bool(0.5) {
                let c = Coefficient::from_i64(rng.random_range(-3..=3), field);
                combo = &combo + &a.scale(&c);
            }
        }
        if rng.random_bool(0.3) {
            let a = &base[rng.random_range(0..base.len())];
            let b = &base[rng.random_range(0..base.len())];
            combo = &combo + &(a * b);
        }
        if !combo.is_zero() {
            consider(combo, &mut best)?;
        }
    }
    Ok(best.unwrap())
}

fn is_power_of(mut i: u64, p: u64) -> bool {
    while i.is_multiple_of(p) {
        i /= p;
    }
    i == 1
}

/// Nonzero `D^i(x_min)`, `i >= 1`, occur only at powers of `p` (only at
/// `i = 1` in characteristic 0), and each of them is invariant.
pub fn check_power_support(map: &ExponentialMap, x_min: &AlgebraElement) -> Result<bool> {
    let p = map.algebra().field().characteristic();
    let ds = map.derivatives(x_min)?;
    for (i, d) in ds.iter().enumerate().skip(1) {
        if d.is_zero() {
            continue;
        }
        let allowed = if p == 0 { i == 1 } else { is_power_of(i as u64, p) };
        if !allowed || !map.is_invariant(d)? {
            return Ok(false);
        }
    }
    Ok(ds.len() > 1)
}

/// `n` divides the phi-degree of every nonzero sample.
pub fn check_degree_divisibility(map: &ExponentialMap, n: u32, samples: &[AlgebraElement]) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidArgs("minimal positive degree must be positive".into()));
    }
    for s in samples.iter().filter(|s| !s.is_zero()) {
        if let Some(d) = map.phi_degree(s)? {
            if d % n != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `a = c^{-exponent} * sum_i coefficients[i] * x_min^i` with invariant
/// coefficients and `c = D^n(x_min)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalizedExpression {
    pub x_min: AlgebraElement,
    pub c: AlgebraElement,
    pub exponent: u32,
    pub coefficients: Vec<AlgebraElement>,
}

impl LocalizedExpression {
    /// `sum_i h_i x_min^i`, which should equal `c^exponent * a`.
    pub fn scaled_value(&self) -> AlgebraElement {
        let algebra = self.c.owner();
        let mut acc = algebra.zero();
        let mut power = algebra.one();
        for h in &self.coefficients {
            acc = &acc + &(h * &power);
            power = &power * &self.x_min;
        }
        acc
    }

    /// Substitution oracle: `c^exponent * a == sum h_i x_min^i`.
    pub fn reconstructs(&self, a: &AlgebraElement) -> bool {
        &self.c.pow(self.exponent) * a == self.scaled_value()
    }
}

/// Writes `a` over `A^phi[c^{-1}][x_min]` by the degree-lowering recursion
/// `y = c^l a - D^{ln}(a) x_min^l`.
pub fn express_in_localization(
    map: &ExponentialMap,
    x_min: &AlgebraElement,
    a: &AlgebraElement,
) -> Result<LocalizedExpression> {
    let n = map.phi_degree(x_min)?.filter(|&n| n > 0).ok_or(Error::TrivialMap)?;
    let c = map.derivation().d(n, x_min)?;
    let (exponent, coefficients) = localize_rec(map, x_min, &c, n, a)?;
    Ok(LocalizedExpression { x_min: x_min.clone(), c, exponent, coefficients })
}

fn localize_rec(
    map: &ExponentialMap,
    x: &AlgebraElement,
    c: &AlgebraElement,
    n: u32,
    a: &AlgebraElement,
) -> Result<(u32, Vec<AlgebraElement>)> {
    let Some(d) = map.phi_degree(a)? else {
        return Ok((0, Vec::new()));
    };
    if d == 0 {
        return Ok((0, vec![a.clone()]));
    }
    if d % n != 0 {
        return Err(Error::NonDivisibleDegree { degree: d, n });
    }
    let l = d / n;
    let lead = map.derivation().d(d, a)?;
    let y = &(&c.pow(l) * a) - &(&lead * &x.pow(l));
    if map.phi_degree(&y)?.is_some_and(|dy| dy >= d) {
        return Err(Error::RecursionNoProgress(d));
    }
    let (m, mut h) = localize_rec(map, x, c, n, &y)?;
    let zero = a.owner().zero();
    if h.len() < l as usize + 1 {
        h.resize(l as usize + 1, zero);
    }
    h[l as usize] = &h[l as usize] + &(&c.pow(m) * &lead);
    Ok((l + m, h))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FractionInvariance {
    /// `a/b` is invariant; `a * D^n(b) = b * D^n(a)` with both entries invariant.
    Invariant {
        n: u32,
        numerator: AlgebraElement,
        denominator: AlgebraElement,
    },
    NotInvariant,
}

/// Decides invariance of `a/b` through `a * phi(b) = b * phi(a)` and returns
/// the leading-coefficient witness.
pub fn fraction_invariant_witness(
    map: &ExponentialMap,
    a: &AlgebraElement,
    b: &AlgebraElement,
) -> Result<FractionInvariance> {
    if b.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let u_ring = map.u_ring();
    let pa = map.apply(a)?;
    let pb = map.apply(b)?;
    let lhs = map.algebra().reduce(&(&a.rep().embed(u_ring)? * &pb))?;
    let rhs = map.algebra().reduce(&(&b.rep().embed(u_ring)? * &pa))?;
    if lhs != rhs {
        return Ok(FractionInvariance::NotInvariant);
    }
    let n = pb.degree_in(map.u_index()).unwrap_or(0) as u32;
    let da = map.u_coefficients(&pa)?;
    let db = map.u_coefficients(&pb)?;
    let numerator = da.get(n as usize).cloned().unwrap_or_else(|| a.owner().zero());
    Ok(FractionInvariance::Invariant { n, numerator, denominator: db[n as usize].clone() })
}

/// Basis of the invariants among normal forms of total degree `<= d`
/// (kernel of `phi - id` on the standard monomials).
pub fn invariant_subspace_bounded(map: &ExponentialMap, d: u32) -> Result<Vec<AlgebraElement>> {
    let algebra = map.algebra();
    let ring = algebra.ring();
    let monos = algebra.standard_monomials(d);
    let field = algebra.field();
    let diffs: Vec<Polynomial> = monos
        .iter()
        .map(|e| {
            let m = Polynomial::monomial(ring, e.clone(), field.one())?;
            let img = map.apply_poly(&m)?;
            Ok(&img - &m.embed(map.u_ring())?)
        })
        .collect::<Result<_>>()?;
    let refs: Vec<&Polynomial> = diffs.iter().collect();
    let deps = linalg::dependencies(field, &refs, &algebra.order().extended(map.u_ring().nvars()));
    let invariants: Vec<Polynomial> = deps
        .iter()
        .map(|dep| {
            let terms = monos.iter().zip(dep).filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e.clone(), c.clone()));
            Polynomial::from_terms(ring, terms)
        })
        .collect::<Result<_>>()?;
    let refs: Vec<&Polynomial> = invariants.iter().collect();
    linalg::span_basis(ring, &refs, algebra.order()).into_iter().map(|p| make_element(algebra, &p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraPresentation;
    use crate::coeff::FieldSpec;
    use crate::poly::{MonomialOrder, VarList};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    struct Russell {
        r: Algebra,
        phi1: ExponentialMap,
        phi2: ExponentialMap,
    }

    fn russell(p: u64) -> Russell {
        let ring = PolyRing::new(FieldSpec::new(p).unwrap(), VarList::new(&["x", "y", "z", "t"]).unwrap());
        let v = |n: &str| Polynomial::var(&ring, n).unwrap();
        let rel = &(&(&v("x") + &(&v("x").pow(2) * &v("y"))) + &v("z").pow(2)) + &v("t").pow(3);
        let order = MonomialOrder::lex(ring.vars(), &["y", "z", "t", "x"]).unwrap();
        let r = AlgebraPresentation::new(&ring, rel, order).unwrap().solve_for("y").unwrap().shared();
        let ur = ExponentialMap::u_ring_for(&r);
        let u = |n: &str| Polynomial::var(&ur, n).unwrap();
        let k = |c: i64| Polynomial::from_int(&ur, c);
        let (x, y, z, t, uu) = (u("x"), u("y"), u("z"), u("t"), u("U"));
        let x2 = x.pow(2);
        let phi1 = ExponentialMap::from_named(
            &r,
            &[("y", &(&y + &(&(&k(2) * &z) * &uu)) - &(&x2 * &uu.pow(2))), ("z", &z - &(&x2 * &uu))],
        )
        .unwrap();
        let y2 = &(&(&y + &(&(&k(3) * &t.pow(2)) * &uu)) - &(&(&(&k(3) * &x2) * &t) * &uu.pow(2)))
            + &(&x.pow(4) * &uu.pow(3));
        let phi2 = ExponentialMap::from_named(&r, &[("y", y2), ("t", &t - &(&x2 * &uu))]).unwrap();
        Russell { r, phi1, phi2 }
    }

    fn char2_plane() -> ExponentialMap {
        let ring = PolyRing::new(FieldSpec::new(2).unwrap(), VarList::new(&["X", "Y"]).unwrap());
        let a = AlgebraPresentation::free(&ring).shared();
        let ur = ExponentialMap::u_ring_for(&a);
        let img = &Polynomial::var(&ur, "Y").unwrap()
            + &(&Polynomial::var(&ur, "X").unwrap() * &Polynomial::var(&ur, "U").unwrap().pow(2));
        ExponentialMap::from_named(&a, &[("Y", img)]).unwrap()
    }

    #[test]
    fn russell_maps_verify_in_every_characteristic() {
        for p in [0, 2, 3, 5] {
            let r = russell(p);
            assert!(r.phi1.verify().passed(), "phi1 char {p}:\n{}", r.phi1.verify());
            assert!(r.phi2.verify().passed(), "phi2 char {p}:\n{}", r.phi2.verify());
            assert!(!r.phi1.is_trivial());
        }
    }

    #[test]
    fn images_reduce_mod_p() {
        let r = russell(2);
        assert_eq!(r.phi1.render_image(1), "y + x^2*U^2");
        let r = russell(3);
        assert_eq!(r.phi2.render_image(1), "y + x^4*U^3");
    }

    #[test]
    fn phi_degree_examples() {
        for p in [0, 2, 3, 5] {
            let r = russell(p);
            assert_eq!(r.phi1.phi_degree(&r.r.var("z").unwrap()).unwrap(), Some(1));
            assert_eq!(r.phi2.phi_degree(&r.r.var("y").unwrap()).unwrap(), Some(3));
            assert_eq!(r.phi1.phi_degree(&r.r.var("x").unwrap()).unwrap(), Some(0));
            assert_eq!(r.phi1.phi_degree(&r.r.zero()).unwrap(), None);
        }
    }

    #[test]
    fn invariance_examples() {
        let r = russell(0);
        let v = |n: &str| r.r.var(n).unwrap();
        assert!(r.phi1.is_invariant(&v("t")).unwrap());
        assert!(r.phi2.is_invariant(&v("z")).unwrap());
        assert!(!r.phi1.is_invariant(&v("z")).unwrap());
        assert!(r.phi1.is_invariant(&r.r.from_int(17)).unwrap());
        assert!(r.phi2.is_invariant(&r.r.from_int(-4)).unwrap());
    }

    #[test]
    fn iterative_examples() {
        let r = russell(0);
        let dv = r.phi1.derivation();
        let y = r.r.var("y").unwrap();
        let d1 = dv.d(1, &y).unwrap();
        assert_eq!(d1, r.r.var("z").unwrap().scale(&Coefficient::from_i64(2, r.r.field())));
        assert_eq!(dv.d(1, &d1).unwrap(), r.r.var("x").unwrap().pow(2).scale(&Coefficient::from_i64(-2, r.r.field())));
        assert!(dv.check_iterative(1, 1, &y).unwrap());
        for j in 0..4 {
            assert!(dv.check_iterative(0, j, &y).unwrap());
        }

        let m = char2_plane();
        let yy = m.algebra().var("Y").unwrap().pow(2);
        let dv = m.derivation();
        assert!(dv.d(2, &dv.d(2, &yy).unwrap()).unwrap().is_zero());
        assert!(dv.check_iterative(2, 2, &yy).unwrap());
    }

    #[test]
    fn leibniz_examples() {
        let r = russell(0);
        let z = r.r.var("z").unwrap();
        let dv = r.phi1.derivation();
        assert_eq!(dv.d(2, &z.pow(2)).unwrap(), r.r.var("x").unwrap().pow(4));
        assert!(dv.check_leibniz(2, &z, &z).unwrap());
        assert!(dv.check_leibniz(3, &r.r.one(), &r.r.var("y").unwrap()).unwrap());
        let r5 = russell(5);
        assert!(r5.phi2.derivation().check_leibniz(4, &r5.r.var("y").unwrap(), &r5.r.var("t").unwrap()).unwrap());
    }

    #[test]
    fn min_positive_degree_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = russell(0);
        let (x, n) = min_positive_degree(&r.phi1, 20, &mut rng).unwrap();
        assert_eq!((x, n), (r.r.var("z").unwrap(), 1));
        let m = char2_plane();
        let (x, n) = min_positive_degree(&m, 20, &mut rng).unwrap();
        assert_eq!((x, n), (m.algebra().var("Y").unwrap(), 2));
        let ring = PolyRing::new(FieldSpec::rationals(), VarList::new(&["X"]).unwrap());
        let a = AlgebraPresentation::free(&ring).shared();
        let ur = ExponentialMap::u_ring_for(&a);
        let m = ExponentialMap::from_named(
            &a,
            &[("X", &Polynomial::var(&ur, "X").unwrap() + &Polynomial::var(&ur, "U").unwrap())],
        )
        .unwrap();
        assert_eq!(min_positive_degree(&m, 5, &mut rng).unwrap(), (a.var("X").unwrap(), 1));
        assert_eq!(min_positive_degree(&ExponentialMap::inclusion(&a), 5, &mut rng), Err(Error::TrivialMap));
    }

    #[test]
    fn power_support_examples() {
        let m = char2_plane();
        let y = m.algebra().var("Y").unwrap();
        assert_eq!(m.d_support(&y).unwrap(), vec![2]);
        assert!(m.is_invariant(&m.derivation().d(2, &y).unwrap()).unwrap());
        assert!(check_power_support(&m, &y).unwrap());
        let r = russell(0);
        assert!(check_power_support(&r.phi1, &r.r.var("z").unwrap()).unwrap());
        let r3 = russell(3);
        let t = r3.r.var("t").unwrap();
        assert_eq!(r3.phi2.d_support(&t).unwrap(), vec![1]);
        assert!(check_power_support(&r3.phi2, &t).unwrap());
        // y has phi2-degree 3 and is not of minimal degree: D^1(y) = 3t^2 is not invariant in char 0
        assert!(!check_power_support(&russell(0).phi2, &russell(0).r.var("y").unwrap()).unwrap());
    }

    #[test]
    fn degree_divisibility_examples() {
        let m = char2_plane();
        let a = m.algebra();
        let [x, y] = ["X", "Y"].map(|n| a.var(n).unwrap());
        let samples = vec![y.clone(), y.pow(2), &(&x * &y) + &y.pow(3), x.clone()];
        let degs: Vec<u32> = samples.iter().map(|s| m.phi_degree(s).unwrap().unwrap()).collect();
        assert_eq!(degs, vec![2, 4, 6, 0]);
        assert!(check_degree_divisibility(&m, 2, &samples).unwrap());
        assert!(check_degree_divisibility(&m, 1, &samples).unwrap());
        assert!(!check_degree_divisibility(&m, 4, &samples).unwrap());
    }

    #[test]
    fn localization_examples() {
        let m = char2_plane();
        let a = m.algebra();
        let y = a.var("Y").unwrap();
        let x = a.var("X").unwrap();
        let inv = express_in_localization(&m, &y, &x).unwrap();
        assert_eq!((inv.exponent, inv.coefficients.clone()), (0, vec![x.clone()]));
        let target = &y.pow(2) + &y;
        let e = express_in_localization(&m, &y, &target).unwrap();
        assert!(e.reconstructs(&target));
        for h in &e.coefficients {
            assert!(m.is_invariant(h).unwrap());
        }

        let r = russell(0);
        let z = r.r.var("z").unwrap();
        let yy = r.r.var("y").unwrap();
        let e = express_in_localization(&r.phi1, &z, &yy).unwrap();
        assert_eq!(e.c, -&r.r.var("x").unwrap().pow(2));
        assert_eq!(e.exponent, 2);
        assert!(e.reconstructs(&yy));
        assert!(e.coefficients.iter().all(|h| r.phi1.is_invariant(h).unwrap()));
    }

    #[test]
    fn localization_rejects_non_minimal() {
        // y has phi1-degree 2; a = z has degree 1 which 2 does not divide
        let r = russell(0);
        let err = express_in_localization(&r.phi1, &r.r.var("y").unwrap(), &r.r.var("z").unwrap());
        assert_eq!(err, Err(Error::NonDivisibleDegree { degree: 1, n: 2 }));
    }

    #[test]
    fn fraction_examples() {
        let r = russell(0);
        let [x, _, z, t] = ["x", "y", "z", "t"].map(|n| r.r.var(n).unwrap());
        let x2 = x.pow(2);
        match fraction_invariant_witness(&r.phi1, &(&z * &t), &z).unwrap() {
            FractionInvariance::Invariant { n, numerator, denominator } => {
                assert_eq!(n, 1);
                assert_eq!(numerator, -&(&x2 * &t));
                assert_eq!(denominator, -&x2);
                assert_eq!(&(&z * &t) * &denominator, &z * &numerator);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(fraction_invariant_witness(&r.phi1, &z, &t).unwrap(), FractionInvariance::NotInvariant);
        assert_eq!(
            fraction_invariant_witness(&r.phi1, &t, &r.r.one()).unwrap(),
            FractionInvariance::Invariant { n: 0, numerator: t.clone(), denominator: r.r.one() }
        );
        assert_eq!(fraction_invariant_witness(&r.phi1, &t, &r.r.zero()), Err(Error::ZeroDenominator));
    }

    #[test]
    fn nonexample_witnesses() {
        let ring = PolyRing::new(FieldSpec::rationals(), VarList::new(&["X"]).unwrap());
        let a = AlgebraPresentation::free(&ring).shared();
        let ur = ExponentialMap::u_ring_for(&a);
        let xv = Polynomial::var(&ur, "X").unwrap();
        let psi = ExponentialMap::new(&a, vec![&xv + &(&xv * &Polynomial::var(&ur, "U").unwrap())]).unwrap();
        let rep = psi.verify();
        assert!(!rep.passed());
        assert_eq!(rep.check(COMPOSITION).unwrap().witness_text.as_deref(), Some("X*S*U"));
        assert!(rep.check(IDENTITY).unwrap().passed);

        for (p, pass) in [(0, false), (2, true), (3, false), (5, false)] {
            let ring = PolyRing::new(FieldSpec::new(p).unwrap(), VarList::new(&["X", "Y"]).unwrap());
            let a = AlgebraPresentation::free(&ring).shared();
            let ur = ExponentialMap::u_ring_for(&a);
            let img = &Polynomial::var(&ur, "Y").unwrap() + &Polynomial::var(&ur, "U").unwrap().pow(2);
            let rep = ExponentialMap::from_named(&a, &[("Y", img)]).unwrap().verify();
            assert_eq!(rep.passed(), pass, "char {p}");
            if !pass {
                assert_eq!(rep.check(COMPOSITION).unwrap().witness_text.as_deref(), Some("2*S*U"), "char {p}");
            }
        }
    }

    #[test]
    fn identity_and_relation_failures() {
        let r = russell(0);
        let ur = r.phi1.u_ring().clone();
        // z -> z + U + 1 breaks the identity axiom; z -> z + U breaks the relation
        let bad = ExponentialMap::from_named(
            &r.r,
            &[(
                "z",
                &(&Polynomial::var(&ur, "z").unwrap() + &Polynomial::var(&ur, "U").unwrap()) + &Polynomial::one(&ur),
            )],
        )
        .unwrap();
        let rep = bad.verify();
        assert!(!rep.check(IDENTITY).unwrap().passed);
        let bad = ExponentialMap::from_named(
            &r.r,
            &[("z", &Polynomial::var(&ur, "z").unwrap() + &Polynomial::var(&ur, "U").unwrap())],
        )
        .unwrap();
        assert!(!bad.verify().check(WELL_DEFINED).unwrap().passed);
        assert!(ExponentialMap::inclusion(&r.r).verify().trivial);
    }

    #[test]
    fn invariant_subspace_small_degree() {
        let r = russell(0);
        let basis = invariant_subspace_bounded(&r.phi1, 2).unwrap();
        // 1, x, t, x^2, x t, t^2
        assert_eq!(basis.len(), 6);
        let [x, _, _, t] = ["x", "y", "z", "t"].map(|n| r.r.var(n).unwrap());
        for b in &basis {
            assert!(crate::algebra::subalgebra_membership_bounded(b, &[x.clone(), t.clone()], 2).unwrap().member);
        }
    }
}
