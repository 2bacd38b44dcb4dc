//! Finitely presented algebras `k[X_1..X_n]/(f)` with elements kept in
//! normal form, plus the Laurent model used for weight filtrations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::coeff::{Coefficient, FieldSpec};
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{normal_form, same_ring, Degree, MonomialOrder, PolyRing, Polynomial, WeightVector};

/// An embedding of the algebra into a Laurent polynomial ring obtained by
/// solving the relation for one variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentModel {
    solved: usize,
    expression: Polynomial,
    ring: Arc<PolyRing>,
    images: Vec<Polynomial>,
}

impl LaurentModel {
    pub fn solved_var(&self) -> usize {
        self.solved
    }

    pub fn expression(&self) -> &Polynomial {
        &self.expression
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraPresentation {
    ring: Arc<PolyRing>,
    relation: Polynomial,
    order: MonomialOrder,
    laurent: Option<LaurentModel>,
}

pub type Algebra = Arc<AlgebraPresentation>;

impl AlgebraPresentation {
    /// The polynomial ring itself (zero relation).
    pub fn free(ring: &Arc<PolyRing>) -> Self {
        AlgebraPresentation {
            ring: ring.clone(),
            relation: Polynomial::zero(ring),
            order: MonomialOrder::natural(ring.nvars()),
            laurent: None,
        }
    }

    /// A principal presentation. The relation is assumed irreducible; only
    /// cheap necessary conditions are checked (nonconstant, no monomial factor).
    pub fn new(ring: &Arc<PolyRing>, relation: Polynomial, order: MonomialOrder) -> Result<Self> {
        if !same_ring(relation.ring(), ring) {
            return Err(Error::MixedRing);
        }
        if (0..ring.nvars()).any(|i| ring.vars().is_laurent(i)) {
            return Err(Error::InvalidPresentation("presentations use non-Laurent variables".into()));
        }
        let order = order.extended(ring.nvars());
        if !relation.is_zero() {
            if relation.is_constant() {
                return Err(Error::InvalidPresentation(format!("constant relation `{relation}`")));
            }
            if let Some(i) = (0..ring.nvars()).find(|&i| relation.terms().all(|(e, _)| e[i] > 0)) {
                return Err(Error::InvalidPresentation(format!(
                    "relation `{relation}` is divisible by `{}`",
                    ring.vars().name(i)
                )));
            }
        }
        Ok(AlgebraPresentation { ring: ring.clone(), relation, order, laurent: None })
    }

    /// Derives the Laurent model by solving the relation for `var`, which
    /// must occur linearly with a monomial coefficient.
    pub fn solve_for(self, var: &str) -> Result<Self> {
        let v = self
            .ring
            .vars()
            .index_of(var)
            .ok_or_else(|| Error::InvalidVariables(format!("unknown variable `{var}`")))?;
        if self.relation.is_zero() {
            return Err(Error::InvalidPresentation("cannot solve a zero relation".into()));
        }
        let linear: Vec<_> = self.relation.terms().filter(|(e, _)| e[v] != 0).collect();
        let [(lead_e, lead_c)] = linear.as_slice() else {
            return Err(Error::InvalidPresentation(format!("`{var}` does not occur in a single term of the relation")));
        };
        if lead_e[v] != 1 {
            return Err(Error::InvalidPresentation(format!("relation is not linear in `{var}`")));
        }
        let mut vars = self.ring.vars().clone();
        for (i, &k) in lead_e.iter().enumerate() {
            if i != v && k > 0 {
                vars = vars.with_laurent(self.ring.vars().name(i))?;
            }
        }
        let lring = PolyRing::new(self.ring.field(), vars);
        let scale = -lead_c.inverse()?;
        let terms = self.relation.terms().filter(|(e, _)| e[v] == 0).map(|(e, c)| {
            let shifted: Vec<i32> =
                e.iter().zip(lead_e.iter()).enumerate().map(|(i, (a, b))| if i == v { 0 } else { a - b }).collect();
            (shifted, c * &scale)
        });
        let expression = Polynomial::from_terms(&lring, terms)?;
        self.with_laurent_solution(var, expression)
    }

    /// Installs an explicit Laurent solution `var = expression`, checked by substitution.
    pub fn with_laurent_solution(mut self, var: &str, expression: Polynomial) -> Result<Self> {
        let v = self
            .ring
            .vars()
            .index_of(var)
            .ok_or_else(|| Error::InvalidVariables(format!("unknown variable `{var}`")))?;
        let lring = expression.ring().clone();
        if lring.nvars() != self.ring.nvars() || lring.vars().names() != self.ring.vars().names() {
            return Err(Error::MixedRing);
        }
        if expression.uses_var(v) {
            return Err(Error::InvalidPresentation(format!("solution for `{var}` mentions `{var}`")));
        }
        let images: Vec<Polynomial> = (0..self.ring.nvars())
            .map(|i| if i == v { expression.clone() } else { Polynomial::var_at(&lring, i) })
            .collect();
        let check = self.relation.substitute(&images, &lring)?;
        if !check.is_zero() {
            return Err(Error::InvalidPresentation(format!("substituting `{var} = {expression}` leaves `{check}`")));
        }
        self.laurent = Some(LaurentModel { solved: v, expression, ring: lring, images });
        Ok(self)
    }

    pub fn shared(self) -> Algebra {
        Arc::new(self)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> FieldSpec {
        self.ring.field()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn relation(&self) -> &Polynomial {
        &self.relation
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn laurent(&self) -> Option<&LaurentModel> {
        self.laurent.as_ref()
    }

    pub fn is_free(&self) -> bool {
        self.relation.is_zero()
    }

    /// Normal form modulo the relation in any ring whose leading variables
    /// are this algebra's variables (e.g. `A[U]`).
    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial> {
        if self.relation.is_zero() {
            return Ok(f.clone());
        }
        if same_ring(f.ring(), &self.ring) {
            return normal_form(f, &self.relation, &self.order);
        }
        let rel = self.relation.embed(f.ring())?;
        normal_form(f, &rel, &self.order.extended(f.ring().nvars()))
    }

    /// Monomials of total degree `<= d` not divisible by the leading monomial of the relation.
    pub fn standard_monomials(&self, d: u32) -> Vec<Vec<i32>> {
        let n = self.nvars();
        let lead = self.relation.lead_term(&self.order).map(|(e, _)| e.clone());
        let mut out = Vec::new();
        let mut cur = vec![0i32; n];
        fn rec(i: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>, lead: &Option<Vec<i32>>) {
            if i == cur.len() {
                if lead.as_ref().is_none_or(|l| !cur.iter().zip(l).all(|(a, b)| a >= b)) {
                    out.push(cur.clone());
                }
                return;
            }
            for k in 0..=left {
                cur[i] = k;
                rec(i + 1, left - k, cur, out, lead);
            }
            cur[i] = 0;
        }
        rec(0, d as i32, &mut cur, &mut out, &lead);
        out
    }

    pub fn element(self: &Arc<Self>, f: &Polynomial) -> Result<AlgebraElement> {
        make_element(self, f)
    }

    pub fn var(self: &Arc<Self>, name: &str) -> Result<AlgebraElement> {
        make_element(self, &Polynomial::var(&self.ring, name)?)
    }

    pub fn var_at(self: &Arc<Self>, i: usize) -> AlgebraElement {
        AlgebraElement { owner: self.clone(), rep: Polynomial::var_at(&self.ring, i) }
    }

    pub fn scalar(self: &Arc<Self>, c: Coefficient) -> AlgebraElement {
        AlgebraElement { owner: self.clone(), rep: Polynomial::constant(&self.ring, c) }
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> AlgebraElement {
        self.scalar(Coefficient::from_i64(n, self.field()))
    }

    pub fn zero(self: &Arc<Self>) -> AlgebraElement {
        self.from_int(0)
    }

    pub fn one(self: &Arc<Self>) -> AlgebraElement {
        self.from_int(1)
    }

    /// All generators (the presentation's variables) as elements.
    pub fn generators(self: &Arc<Self>) -> Vec<AlgebraElement> {
        (0..self.nvars()).map(|i| self.var_at(i)).collect()
    }
}

/// An element of a presented algebra; `rep` is always in normal form.
#[derive(Clone, Debug)]
pub struct AlgebraElement {
    owner: Algebra,
    rep: Polynomial,
}

impl PartialEq for AlgebraElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.owner, &other.owner) || self.owner == other.owner) && self.rep == other.rep
    }
}

impl Eq for AlgebraElement {}

pub fn make_element(algebra: &Algebra, f: &Polynomial) -> Result<AlgebraElement> {
    if !same_ring(f.ring(), algebra.ring()) {
        return Err(Error::MixedRing);
    }
    Ok(AlgebraElement { owner: algebra.clone(), rep: algebra.reduce(f)? })
}

impl AlgebraElement {
    pub fn owner(&self) -> &Algebra {
        &self.owner
    }

    pub fn rep(&self) -> &Polynomial {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn is_scalar(&self) -> bool {
        self.rep.is_constant()
    }

    fn same_owner(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.owner, &other.owner) || self.owner == other.owner {
            Ok(())
        } else {
            Err(Error::MixedRing)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_owner(other)?;
        Ok(AlgebraElement { owner: self.owner.clone(), rep: &self.rep + &other.rep })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_owner(other)?;
        Ok(AlgebraElement { owner: self.owner.clone(), rep: &self.rep - &other.rep })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_owner(other)?;
        make_element(&self.owner, &(&self.rep * &other.rep))
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        AlgebraElement { owner: self.owner.clone(), rep: self.rep.scale(c) }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(self.owner.one(), |acc, _| &acc * self)
    }

    /// Image in the Laurent model.
    pub fn laurent_embed(&self) -> Result<Polynomial> {
        let model = self.owner.laurent.as_ref().ok_or(Error::NoLaurentModel)?;
        self.rep.substitute(&model.images, &model.ring)
    }

    /// Weighted degree through the Laurent model (or directly for free algebras).
    pub fn filtration_degree(&self, w: &WeightVector) -> Result<Degree> {
        if self.owner.is_free() {
            return Ok(self.rep.weighted_degree(w));
        }
        Ok(self.laurent_embed()?.weighted_degree(w))
    }

    /// Total degree of the normal-form representative (0 for zero).
    pub fn rep_degree(&self) -> u32 {
        self.rep.total_degree().unwrap_or(0).max(0) as u32
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep.render(&self.owner.order))
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(rhs).expect("elements of different algebras")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_sub(rhs).expect("elements of different algebras")
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_mul(rhs).expect("elements of different algebras")
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement { owner: self.owner.clone(), rep: -&self.rep }
    }
}

/// A product of generators, `prod gens[i]^exponents[i]`, with its coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateTerm {
    pub coefficient: Coefficient,
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub member: bool,
    pub certificate: Vec<CertificateTerm>,
}

/// Products of `gens` with exponent sum `<= d`, as `(exponents, normal form)`.
pub fn bounded_products(gens: &[AlgebraElement], d: u32) -> Vec<(Vec<u32>, AlgebraElement)> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let algebra = first.owner.clone();
    let mut out = vec![(vec![0u32; gens.len()], algebra.one())];
    // extend monomials one generator at a time, keeping exponents sorted by index
    let mut frontier: Vec<(Vec<u32>, AlgebraElement, usize)> = vec![(vec![0; gens.len()], algebra.one(), 0)];
    for _ in 0..d {
        let mut next = Vec::new();
        for (e, p, last) in &frontier {
            for (i, g) in gens.iter().enumerate().skip(*last) {
                let mut e2 = e.clone();
                e2[i] += 1;
                let p2 = p * g;
                out.push((e2.clone(), p2.clone()));
                next.push((e2, p2, i));
            }
        }
        frontier = next;
    }
    out
}

/// Decides whether `a` is a k-linear combination of products of `gens` with
/// at most `d` factors, by exact linear algebra on normal forms.
pub fn subalgebra_membership_bounded(a: &AlgebraElement, gens: &[AlgebraElement], d: u32) -> Result<Membership> {
    for g in gens {
        a.same_owner(g)?;
    }
    let degree = a.rep_degree();
    if degree > d {
        return Err(Error::BoundTooSmall { bound: d, degree });
    }
    let products = if gens.is_empty() { vec![(vec![], a.owner.one())] } else { bounded_products(gens, d) };
    let reps: Vec<&Polynomial> = products.iter().map(|(_, p)| &p.rep).collect();
    match linalg::solve(&a.rep, &reps, &a.owner.order) {
        None => Ok(Membership { member: false, certificate: Vec::new() }),
        Some(coeffs) => {
            let certificate = products
                .iter()
                .zip(coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|((e, _), c)| CertificateTerm { coefficient: c, exponents: e.clone() })
                .collect();
            Ok(Membership { member: true, certificate })
        }
    }
}

/// Canonical basis of the span of bounded products of `gens`.
pub fn bounded_span(gens: &[AlgebraElement], d: u32) -> Vec<AlgebraElement> {
    let Some(first) = gens.first() else {
        return Vec::new();
    };
    let algebra = first.owner.clone();
    let products = bounded_products(gens, d);
    let reps: Vec<&Polynomial> = products.iter().map(|(_, p)| &p.rep).collect();
    linalg::span_basis(algebra.ring(), &reps, &algebra.order)
        .into_iter()
        .map(|rep| AlgebraElement { owner: algebra.clone(), rep })
        .collect()
}

/// Basis of the intersection of the two bounded spans.
pub fn subalgebra_intersection_bounded(
    gens1: &[AlgebraElement],
    gens2: &[AlgebraElement],
    d: u32,
) -> Result<Vec<AlgebraElement>> {
    let Some(first) = gens1.first().or(gens2.first()) else {
        return Ok(Vec::new());
    };
    let algebra = first.owner.clone();
    for g in gens1.iter().chain(gens2) {
        first.same_owner(g)?;
    }
    let span = |gens: &[AlgebraElement]| {
        if gens.is_empty() {
            vec![algebra.one()]
        } else {
            bounded_products(gens, d).into_iter().map(|(_, p)| p).collect()
        }
    };
    let s1 = span(gens1);
    let s2 = span(gens2);
    let r1: Vec<&Polynomial> = s1.iter().map(|p| &p.rep).collect();
    let r2: Vec<&Polynomial> = s2.iter().map(|p| &p.rep).collect();
    Ok(linalg::intersection(algebra.ring(), &r1, &r2, &algebra.order)
        .into_iter()
        .map(|rep| AlgebraElement { owner: algebra.clone(), rep })
        .collect())
}
