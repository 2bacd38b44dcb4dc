//! Sparse multivariate polynomials with optional Laurent variables.
//!
//! Terms are stored in a `BTreeMap` keyed by dense exponent vectors, one
//! entry per variable of the owning [`PolyRing`]. Zero coefficients are never
//! stored, so structurally equal maps mean equal polynomials.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coeff::{Coefficient, FieldSpec};
use crate::error::{Error, Result};

/// Names adjoined by exponential maps; never part of a ring's own variables.
pub const RESERVED_NAMES: [&str; 2] = ["U", "S"];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarList {
    names: Vec<String>,
    laurent: Vec<bool>,
}

impl VarList {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        if let Some(r) = names.iter().find(|n| RESERVED_NAMES.contains(&n.as_str())) {
            return Err(Error::InvalidVariables(format!("`{r}` is reserved")));
        }
        Self::build(names)
    }

    fn build(names: Vec<String>) -> Result<Self> {
        for (i, n) in names.iter().enumerate() {
            let valid = n.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidVariables(format!("`{n}` is not an identifier")));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidVariables(format!("`{n}` appears twice")));
            }
        }
        let laurent = vec![false; names.len()];
        Ok(VarList { names, laurent })
    }

    /// Appends formal indeterminates (such as `U`, `S`) that are exempt from
    /// the reserved-name rule.
    pub(crate) fn adjoin(&self, extra: &[&str]) -> Result<Self> {
        let mut names = self.names.clone();
        names.extend(extra.iter().map(|s| s.to_string()));
        let mut out = Self::build(names)?;
        out.laurent[..self.laurent.len()].copy_from_slice(&self.laurent);
        Ok(out)
    }

    pub fn with_laurent(mut self, name: &str) -> Result<Self> {
        let i = self.index_of(name).ok_or_else(|| Error::InvalidVariables(format!("unknown variable `{name}`")))?;
        self.laurent[i] = true;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_laurent(&self, i: usize) -> bool {
        self.laurent[i]
    }
}

/// A coefficient field together with a variable list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    field: FieldSpec,
    vars: VarList,
}

impl PolyRing {
    pub fn new(field: FieldSpec, vars: VarList) -> Arc<Self> {
        Arc::new(PolyRing { field, vars })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn vars(&self) -> &VarList {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// The same ring with `extra` formal indeterminates appended.
    pub fn adjoin(&self, extra: &[&str]) -> Result<Arc<Self>> {
        Ok(PolyRing::new(self.field, self.vars.adjoin(extra)?))
    }
}

pub(crate) fn same_ring(a: &Arc<PolyRing>, b: &Arc<PolyRing>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Lexicographic order over a priority sequence of variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    priority: Vec<usize>,
}

impl MonomialOrder {
    /// Lex with variables in declaration order.
    pub fn natural(nvars: usize) -> Self {
        MonomialOrder { priority: (0..nvars).collect() }
    }

    /// Lex with the listed variables first; unlisted ones follow in declaration order.
    pub fn lex<S: AsRef<str>>(vars: &VarList, priority: &[S]) -> Result<Self> {
        let mut idx = Vec::with_capacity(vars.len());
        for name in priority {
            let i = vars
                .index_of(name.as_ref())
                .ok_or_else(|| Error::InvalidVariables(format!("unknown variable `{}`", name.as_ref())))?;
            if idx.contains(&i) {
                return Err(Error::InvalidVariables(format!("`{}` listed twice in order", name.as_ref())));
            }
            idx.push(i);
        }
        Ok(MonomialOrder { priority: idx }.extended(vars.len()))
    }

    /// Completes the priority to `nvars` variables by appending missing indices.
    pub fn extended(&self, nvars: usize) -> Self {
        let mut priority: Vec<usize> = self.priority.iter().copied().filter(|&i| i < nvars).collect();
        for i in 0..nvars {
            if !priority.contains(&i) {
                priority.push(i);
            }
        }
        MonomialOrder { priority }
    }

    pub fn priority(&self) -> &[usize] {
        &self.priority
    }

    fn key(&self, exps: &[i32]) -> Vec<i32> {
        self.priority.iter().map(|&i| exps[i]).collect()
    }

    fn unkey(&self, key: &[i32]) -> Vec<i32> {
        let mut out = vec![0; key.len()];
        for (k, &i) in self.priority.iter().enumerate() {
            out[i] = key[k];
        }
        out
    }

    pub fn cmp(&self, a: &[i32], b: &[i32]) -> Ordering {
        self.priority.iter().map(|&i| a[i].cmp(&b[i])).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
    }
}

/// Weighted degree value; `NegInfinity` is the degree of zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(BigRational),
}

impl Degree {
    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(q) => Some(q),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Degree::Finite(BigRational::from_integer(n.into()))
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(q) => write!(f, "{}", fmt_fraction(q)),
        }
    }
}

/// Always `n/d`, also for integers.
pub fn fmt_fraction(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// One exact rational weight per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector {
    weights: Vec<BigRational>,
}

impl WeightVector {
    pub fn new(weights: Vec<BigRational>) -> Self {
        WeightVector { weights }
    }

    pub fn from_ints(weights: &[i64]) -> Self {
        WeightVector { weights: weights.iter().map(|&w| BigRational::from_integer(w.into())).collect() }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weight(&self, i: usize) -> &BigRational {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn monomial_degree(&self, exps: &[i32]) -> BigRational {
        exps.iter()
            .zip(&self.weights)
            .filter(|(e, _)| **e != 0)
            .fold(BigRational::zero(), |acc, (e, w)| acc + w * BigRational::from_integer((*e).into()))
    }

    /// Extends with extra weights, e.g. a weight for `U`.
    pub fn with_extra(&self, extra: &[BigRational]) -> Self {
        let mut weights = self.weights.clone();
        weights.extend_from_slice(extra);
        WeightVector { weights }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Vec<i32>, Coefficient>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_ring(&self.ring, &other.ring) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(ring: &Arc<PolyRing>, c: Coefficient) -> Self {
        let mut p = Self::zero(ring);
        p.add_term(vec![0; ring.nvars()], c);
        p
    }

    pub fn from_int(ring: &Arc<PolyRing>, n: i64) -> Self {
        Self::constant(ring, Coefficient::from_i64(n, ring.field()))
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::from_int(ring, 1)
    }

    pub fn var_at(ring: &Arc<PolyRing>, i: usize) -> Self {
        let mut exps = vec![0; ring.nvars()];
        exps[i] = 1;
        let mut p = Self::zero(ring);
        p.add_term(exps, ring.field().one());
        p
    }

    pub fn var(ring: &Arc<PolyRing>, name: &str) -> Result<Self> {
        let i =
            ring.vars().index_of(name).ok_or_else(|| Error::InvalidVariables(format!("unknown variable `{name}`")))?;
        Ok(Self::var_at(ring, i))
    }

    pub fn monomial(ring: &Arc<PolyRing>, exps: Vec<i32>, c: Coefficient) -> Result<Self> {
        if exps.len() != ring.nvars() {
            return Err(Error::MixedRing);
        }
        if c.field() != ring.field() {
            return Err(Error::MixedField(c.field().characteristic(), ring.field().characteristic()));
        }
        for (i, &e) in exps.iter().enumerate() {
            if e < 0 && !ring.vars().is_laurent(i) {
                return Err(Error::NegativeExponent(ring.vars().name(i).to_string()));
            }
        }
        let mut p = Self::zero(ring);
        p.add_term(exps, c);
        Ok(p)
    }

    pub fn from_terms(ring: &Arc<PolyRing>, terms: impl IntoIterator<Item = (Vec<i32>, Coefficient)>) -> Result<Self> {
        let mut p = Self::zero(ring);
        for (e, c) in terms {
            p = p.try_add(&Self::monomial(ring, e, c)?)?;
        }
        Ok(p)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> FieldSpec {
        self.ring.field()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &Coefficient)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[i32]) -> Coefficient {
        self.terms.get(exps).cloned().unwrap_or_else(|| self.field().zero())
    }

    pub fn constant_term(&self) -> Coefficient {
        self.coefficient(&vec![0; self.ring.nvars()])
    }

    /// Largest exponent sum over the terms; `None` for zero.
    pub fn total_degree(&self) -> Option<i32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<i32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn uses_var(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] != 0)
    }

    pub fn lead_term(&self, order: &MonomialOrder) -> Option<(&Vec<i32>, &Coefficient)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub(crate) fn add_term(&mut self, exps: Vec<i32>, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(Error::MixedRing)
        }
    }

    pub fn poly_arith(&self, other: &Self, op: PolyOp) -> Result<Self> {
        match op {
            PolyOp::Add => self.try_add(other),
            PolyOp::Sub => self.try_sub(other),
            PolyOp::Mul => self.try_mul(other),
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut acc: HashMap<Vec<i32>, Coefficient> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(e, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        let terms =
            if c.is_zero() { BTreeMap::new() } else { self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() };
        Polynomial { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Maximum weighted exponent sum over the terms.
    pub fn weighted_degree(&self, w: &WeightVector) -> Degree {
        self.terms.keys().map(|e| w.monomial_degree(e)).max().map_or(Degree::NegInfinity, Degree::Finite)
    }

    /// Sum of the terms of maximal weighted degree.
    pub fn top_component(&self, w: &WeightVector) -> Result<Self> {
        let Degree::Finite(top) = self.weighted_degree(w) else {
            return Err(Error::ZeroPolynomial);
        };
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| w.monomial_degree(e) == top)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Ok(Polynomial { ring: self.ring.clone(), terms })
    }

    pub fn is_homogeneous(&self, w: &WeightVector) -> bool {
        let mut degs = self.terms.keys().map(|e| w.monomial_degree(e));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    /// Ring homomorphism sending variable `i` to `images[i]` (all in `target`).
    /// Negative exponents require a monomial image.
    pub fn substitute(&self, images: &[Polynomial], target: &Arc<PolyRing>) -> Result<Self> {
        if images.len() != self.ring.nvars() {
            return Err(Error::MixedRing);
        }
        if images.iter().any(|p| !same_ring(&p.ring, target)) || target.field() != self.field() {
            return Err(Error::MixedRing);
        }
        let mut cache: HashMap<(usize, i32), Polynomial> = HashMap::new();
        let mut out = Polynomial::zero(target);
        for (e, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let factor = match cache.get(&(i, k)) {
                    Some(f) => f.clone(),
                    None => {
                        let f = if k > 0 {
                            images[i].pow(k as u32)
                        } else {
                            images[i].monomial_inverse()?.pow(k.unsigned_abs())
                        };
                        cache.insert((i, k), f.clone());
                        f
                    }
                };
                term = &term * &factor;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    fn monomial_inverse(&self) -> Result<Self> {
        let mut it = self.terms.iter();
        match (it.next(), it.next()) {
            (Some((e, c)), None) => {
                let inv: Vec<i32> = e.iter().map(|x| -x).collect();
                Polynomial::monomial(&self.ring, inv, c.inverse()?)
            }
            _ => Err(Error::InvalidArgs(format!("`{self}` is not an invertible monomial"))),
        }
    }

    /// Reinterprets the terms in a ring with the same number of variables
    /// (e.g. the same names with Laurent flags set).
    pub fn to_ring(&self, target: &Arc<PolyRing>) -> Result<Self> {
        if target.nvars() != self.ring.nvars() || target.field() != self.field() {
            return Err(Error::MixedRing);
        }
        Polynomial::from_terms(target, self.terms.iter().map(|(e, c)| (e.clone(), c.clone())))
    }

    /// Embeds into a ring whose variables extend this ring's variables.
    pub fn embed(&self, target: &Arc<PolyRing>) -> Result<Self> {
        let n = self.ring.nvars();
        if target.nvars() < n
            || target.vars().names()[..n] != self.ring.vars().names()[..]
            || target.field() != self.field()
        {
            return Err(Error::MixedRing);
        }
        let pad = target.nvars() - n;
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut e = e.clone();
                e.extend(std::iter::repeat_n(0, pad));
                (e, c.clone())
            })
            .collect();
        Ok(Polynomial { ring: target.clone(), terms })
    }

    /// Inverse of [`Polynomial::embed`] for polynomials not involving the extra variables.
    pub fn restrict(&self, target: &Arc<PolyRing>) -> Result<Self> {
        let n = target.nvars();
        if self.terms.keys().any(|e| e[n..].iter().any(|&x| x != 0)) {
            return Err(Error::MixedRing);
        }
        let terms = self.terms.iter().map(|(e, c)| (e[..n].to_vec(), c.clone())).collect();
        let p = Polynomial { ring: target.clone(), terms };
        p.embed(&self.ring)?;
        Ok(p)
    }

    /// Groups by powers of variable `var`; coefficients live in `target`, the
    /// ring with that variable removed.
    pub fn coefficients_in(&self, var: usize, target: &Arc<PolyRing>) -> Result<BTreeMap<i32, Polynomial>> {
        if target.nvars() + 1 != self.ring.nvars() {
            return Err(Error::MixedRing);
        }
        let mut out: BTreeMap<i32, Polynomial> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let k = rest.remove(var);
            out.entry(k).or_insert_with(|| Polynomial::zero(target)).add_term(rest, c.clone());
        }
        Ok(out)
    }

    /// Sets variable `var` to the constant `value` (must be nonzero if negative powers occur).
    pub fn evaluate_var(&self, var: usize, value: &Coefficient) -> Result<Self> {
        let mut out = Polynomial::zero(&self.ring);
        for (e, c) in &self.terms {
            let k = e[var];
            if k == 0 {
                out.add_term(e.clone(), c.clone());
                continue;
            }
            let f = value.powi(k)?;
            let mut e = e.clone();
            e[var] = 0;
            out.add_term(e, c * &f);
        }
        Ok(out)
    }

    /// Division by a single polynomial under `order`: returns `(q, r)` with
    /// `self = q * divisor + r` and no term of `r` divisible by the leading
    /// monomial of `divisor`.
    pub fn divide(&self, divisor: &Polynomial, order: &MonomialOrder) -> Result<(Polynomial, Polynomial)> {
        self.check_ring(divisor)?;
        if divisor.is_zero() {
            return Err(Error::ZeroRelation);
        }
        let n = self.ring.nvars();
        for p in [self, divisor] {
            if p.terms.keys().any(|e| e.iter().any(|&x| x < 0)) {
                return Err(Error::InvalidArgs("division needs nonnegative exponents".into()));
            }
        }
        let order = order.extended(n);
        let (lead_e, lead_c) = divisor.lead_term(&order).unwrap();
        let lead_key = order.key(lead_e);
        let lead_inv = lead_c.inverse()?;
        let tail: Vec<(Vec<i32>, Coefficient)> =
            divisor.terms.iter().filter(|(e, _)| *e != lead_e).map(|(e, c)| (order.key(e), c.clone())).collect();

        let mut work: BTreeMap<Vec<i32>, Coefficient> =
            self.terms.iter().map(|(e, c)| (order.key(e), c.clone())).collect();
        let mut quot = Polynomial::zero(&self.ring);
        let mut rem = Polynomial::zero(&self.ring);
        while let Some((key, c)) = work.pop_last() {
            if key.iter().zip(&lead_key).all(|(a, b)| a >= b) {
                let shift: Vec<i32> = key.iter().zip(&lead_key).map(|(a, b)| a - b).collect();
                let factor = &c * &lead_inv;
                for (te, tc) in &tail {
                    let k: Vec<i32> = te.iter().zip(&shift).map(|(a, b)| a + b).collect();
                    let v = -(&factor * tc);
                    match work.get_mut(&k) {
                        Some(x) => {
                            *x = &*x + &v;
                            if x.is_zero() {
                                work.remove(&k);
                            }
                        }
                        None => {
                            work.insert(k, v);
                        }
                    }
                }
                quot.add_term(order.unkey(&shift), factor);
            } else {
                rem.add_term(order.unkey(&key), c);
            }
        }
        Ok((quot, rem))
    }

    /// Canonical text: terms in descending `order`, exact coefficients.
    pub fn render(&self, order: &MonomialOrder) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let order = order.extended(self.ring.nvars());
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.cmp(b.0, a.0));
        let mut out = String::new();
        for (k, (e, c)) in terms.into_iter().enumerate() {
            let t = render_term(self.ring.vars(), e, c);
            if k == 0 {
                out.push_str(&t);
            } else if let Some(rest) = t.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&t);
            }
        }
        out
    }
}

fn render_term(vars: &VarList, exps: &[i32], c: &Coefficient) -> String {
    let mono: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, e)| **e != 0)
        .map(|(i, &e)| if e == 1 { vars.name(i).to_string() } else { format!("{}^{}", vars.name(i), e) })
        .collect();
    if mono.is_empty() {
        return c.to_string();
    }
    let mono = mono.join("*");
    if c.is_one() {
        mono
    } else if c.as_rational().is_some_and(|q| (-q).is_one()) {
        format!("-{mono}")
    } else {
        format!("{c}*{mono}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&MonomialOrder::natural(self.ring.nvars())))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomials from different rings")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomials from different rings")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomials from different rings")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(&-self.field().one())
    }
}

/// Division by a single relation; zero iff `f` lies in the principal ideal.
pub fn normal_form(f: &Polynomial, rel: &Polynomial, order: &MonomialOrder) -> Result<Polynomial> {
    if rel.is_zero() {
        return Err(Error::ZeroRelation);
    }
    if (0..f.ring.nvars()).any(|i| f.ring.vars().is_laurent(i)) {
        return Err(Error::InvalidArgs("normal forms need a non-Laurent ring".into()));
    }
    Ok(f.divide(rel, order)?.1)
}

/// Result of factoring a weighted-homogeneous binary form as
/// `lambda * z^n * t^m * prod (z^a + mu * t^b)^mult`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogFactorization {
    pub lambda: Coefficient,
    pub n: u32,
    pub m: u32,
    /// `(a, b)`: the exponents of the binomial factors `z^a + mu t^b`.
    pub binomial_exponents: (u32, u32),
    /// `(mu, multiplicity)`, sorted by `mu`'s text.
    pub factors: Vec<(Coefficient, u32)>,
    z: usize,
    t: usize,
}

impl HomogFactorization {
    pub fn expand(&self, ring: &Arc<PolyRing>) -> Polynomial {
        let nv = ring.nvars();
        let mono = |zi: i32, ti: i32| {
            let mut e = vec![0; nv];
            e[self.z] += zi;
            e[self.t] += ti;
            e
        };
        let mut acc = Polynomial::monomial(ring, mono(self.n as i32, self.m as i32), self.lambda.clone()).unwrap();
        let (a, b) = self.binomial_exponents;
        for (mu, mult) in &self.factors {
            let f = Polynomial::from_terms(
                ring,
                [(mono(a as i32, 0), ring.field().one()), (mono(0, b as i32), mu.clone())],
            )
            .unwrap();
            acc = &acc * &f.pow(*mult);
        }
        acc
    }

    pub fn mu_multiset(&self) -> Vec<Coefficient> {
        self.factors.iter().flat_map(|(mu, k)| std::iter::repeat_n(mu.clone(), *k as usize)).collect()
    }
}

/// Factors a nonzero `w`-homogeneous polynomial in the variables `z`, `t`
/// (positive weights) as `lambda z^n t^m prod(z^a + mu_i t^b)`, where
/// `a w(z) = b w(t)` is the primitive balancing pair. The residual
/// univariate polynomial in `s = z^a / t^b` is split by exhaustive search
/// over F_p or by rational-root candidates over Q.
pub fn weighted_homog_factor(g: &Polynomial, z: usize, t: usize, w: &WeightVector) -> Result<HomogFactorization> {
    if g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let ring = g.ring();
    if z == t || z >= ring.nvars() || t >= ring.nvars() {
        return Err(Error::InvalidArgs("z and t must be two distinct variables".into()));
    }
    if g.terms.keys().any(|e| e.iter().enumerate().any(|(i, &x)| i != z && i != t && x != 0)) {
        return Err(Error::InvalidArgs(format!("`{g}` involves variables other than z, t")));
    }
    let (wz, wt) = (w.weight(z), w.weight(t));
    if *wz <= BigRational::zero() || *wt <= BigRational::zero() {
        return Err(Error::InvalidArgs("weights of z and t must be positive".into()));
    }
    if !g.is_homogeneous(w) {
        return Err(Error::NotHomogeneous(g.to_string()));
    }
    // a * wz = b * wt with (a, b) coprime
    let ratio = wt / wz;
    let a = ratio.numer().clone();
    let b = ratio.denom().clone();
    let a: u32 =
        num_traits::ToPrimitive::to_u32(&a).ok_or_else(|| Error::InvalidArgs("weight ratio too large".into()))?;
    let b: u32 =
        num_traits::ToPrimitive::to_u32(&b).ok_or_else(|| Error::InvalidArgs("weight ratio too large".into()))?;
    let n = g.terms.keys().map(|e| e[z]).min().unwrap();
    let m = g.terms.keys().map(|e| e[t]).min().unwrap();
    let top_z = g.terms.keys().map(|e| e[z]).max().unwrap();
    let big_k = ((top_z - n) as u32) / a;
    let field = g.field();
    // coefficient of s^k is the term z^(n + a k) t^(m + b (K - k))
    let mut univ = vec![field.zero(); big_k as usize + 1];
    for (e, c) in &g.terms {
        let k = ((e[z] - n) as u32) / a;
        debug_assert_eq!((e[z] - n) as u32 % a, 0);
        univ[k as usize] = c.clone();
    }
    let lambda = univ[big_k as usize].clone();
    let lam_inv = lambda.inverse()?;
    let mut monic: Vec<Coefficient> = univ.iter().map(|c| c * &lam_inv).collect();
    let roots = find_roots(&mut monic)?;
    if monic.len() > 1 {
        let residual = render_binary(&monic, a, b, ring.vars().name(z), ring.vars().name(t));
        return Err(Error::DoesNotSplit { residual });
    }
    // root r of the monic polynomial in s gives the factor s - r, i.e. mu = -r
    let mut factors: Vec<(Coefficient, u32)> = roots.into_iter().map(|(r, k)| (-r, k)).collect();
    factors.sort_by_key(|(mu, _)| mu.to_string());
    Ok(HomogFactorization { lambda, n: n as u32, m: m as u32, binomial_exponents: (a, b), factors, z, t })
}

fn render_binary(coeffs: &[Coefficient], a: u32, b: u32, z: &str, t: &str) -> String {
    let field = coeffs[0].field();
    let ring = PolyRing::new(field, VarList::new(&[z, t]).unwrap_or_else(|_| VarList::new(&["z", "t"]).unwrap()));
    let deg = coeffs.len() as i32 - 1;
    let terms =
        coeffs.iter().enumerate().map(|(k, c)| (vec![a as i32 * k as i32, b as i32 * (deg - k as i32)], c.clone()));
    Polynomial::from_terms(&ring, terms).map(|p| p.to_string()).unwrap_or_default()
}

/// Synthetic division of `p` (ascending coefficients) by `s - r`; returns the remainder.
fn deflate(p: &mut Vec<Coefficient>, r: &Coefficient) -> Coefficient {
    let deg = p.len() - 1;
    let mut carry = r.field().zero();
    let mut q = vec![r.field().zero(); deg];
    for k in (0..=deg).rev() {
        let v = &p[k] + &carry;
        if k == 0 {
            let rem = v;
            *p = q;
            return rem;
        }
        q[k - 1] = v.clone();
        carry = &v * r;
    }
    unreachable!()
}

fn eval_univ(p: &[Coefficient], x: &Coefficient) -> Coefficient {
    p.iter().rev().fold(x.field().zero(), |acc, c| &(&acc * x) + c)
}

/// Removes every root of `p` (deflating in place) and returns `(root, multiplicity)`.
fn find_roots(p: &mut Vec<Coefficient>) -> Result<Vec<(Coefficient, u32)>> {
    let field = p[0].field();
    let candidates: Vec<Coefficient> = match field.elements() {
        Some(it) => it.filter(|c| !c.is_zero()).collect(),
        None => rational_root_candidates(p)?,
    };
    let mut roots = Vec::new();
    for r in candidates {
        let mut mult = 0;
        while p.len() > 1 && eval_univ(p, &r).is_zero() {
            let mut q = p.clone();
            let rem = deflate(&mut q, &r);
            debug_assert!(rem.is_zero());
            *p = q;
            mult += 1;
        }
        if mult > 0 {
            roots.push((r, mult));
        }
    }
    Ok(roots)
}

fn rational_root_candidates(p: &[Coefficient]) -> Result<Vec<Coefficient>> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let field = p[0].field();
    let qs: Vec<&BigRational> = p.iter().map(|c| c.as_rational().unwrap()).collect();
    let lcm = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| (*q * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let a0 = ints[0].clone();
    let an = ints.last().unwrap().clone();
    if a0.is_zero() {
        return Err(Error::InvalidArgs("residual has a zero root".into()));
    }
    let nums = divisors(&a0)?;
    let dens = divisors(&an)?;
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for d in &dens {
        for n in &nums {
            for sign in [1i64, -1] {
                let q = BigRational::new(BigInt::from(sign) * n, d.clone());
                if seen.insert(q.clone()) {
                    out.push(Coefficient::from_rational(&q, field)?);
                }
            }
        }
    }
    Ok(out)
}

fn divisors(n: &num_bigint::BigInt) -> Result<Vec<num_bigint::BigInt>> {
    use num_traits::{Signed, ToPrimitive};
    let n =
        n.abs().to_u64().ok_or_else(|| Error::InvalidArgs("coefficient too large for rational root search".into()))?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d.into());
            if d * d != n {
                out.push((n / d).into());
            }
        }
        d += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(names: &[&str], p: u64) -> Arc<PolyRing> {
        PolyRing::new(FieldSpec::new(p).unwrap(), VarList::new(names).unwrap())
    }

    fn mono(r: &Arc<PolyRing>, e: &[i32], c: i64) -> Polynomial {
        Polynomial::monomial(r, e.to_vec(), Coefficient::from_i64(c, r.field())).unwrap()
    }

    fn sum(ps: &[Polynomial]) -> Polynomial {
        ps.iter().skip(1).fold(ps[0].clone(), |a, b| &a + b)
    }

    /// Brute-force convolution over the dense exponent box.
    fn convolve(f: &Polynomial, g: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(f.ring());
        for (ea, ca) in f.terms() {
            for (eb, cb) in g.terms() {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out = &out + &Polynomial::monomial(f.ring(), e, ca * cb).unwrap();
            }
        }
        out
    }

    #[test]
    fn varlist_rules() {
        assert!(VarList::new(&["x", "x"]).is_err());
        assert!(VarList::new(&["x", "U"]).is_err());
        assert!(VarList::new(&["S"]).is_err());
        assert!(VarList::new(&["1x"]).is_err());
        let v = VarList::new(&["x", "z"]).unwrap();
        assert!(v.adjoin(&["S", "U"]).is_ok());
    }

    #[test]
    fn square_expansion_q_and_f2() {
        for p in [0u64, 2] {
            let r = ring(&["x", "z", "u"], p);
            let f = &mono(&r, &[0, 1, 0], 1) - &mono(&r, &[2, 0, 1], 1);
            let sq = f.poly_arith(&f, PolyOp::Mul).unwrap();
            assert_eq!(sq, convolve(&f, &f));
            let expected = if p == 0 {
                sum(&[mono(&r, &[0, 2, 0], 1), mono(&r, &[2, 1, 1], -2), mono(&r, &[4, 0, 2], 1)])
            } else {
                sum(&[mono(&r, &[0, 2, 0], 1), mono(&r, &[4, 0, 2], 1)])
            };
            assert_eq!(sq, expected);
            assert_eq!(f.poly_arith(&Polynomial::zero(&r), PolyOp::Add).unwrap(), f);
        }
    }

    #[test]
    fn mixed_ring_rejected() {
        let a = ring(&["x"], 0);
        let b = ring(&["y"], 0);
        let c = ring(&["x"], 5);
        let f = Polynomial::var(&a, "x").unwrap();
        assert_eq!(f.poly_arith(&Polynomial::var(&b, "y").unwrap(), PolyOp::Add), Err(Error::MixedRing));
        assert_eq!(f.poly_arith(&Polynomial::var(&c, "x").unwrap(), PolyOp::Mul), Err(Error::MixedRing));
    }

    #[test]
    fn laurent_flags_enforced() {
        let r = ring(&["x", "z"], 0);
        assert!(matches!(Polynomial::monomial(&r, vec![-1, 0], r.field().one()), Err(Error::NegativeExponent(_))));
        let lr = PolyRing::new(r.field(), r.vars().clone().with_laurent("x").unwrap());
        assert!(Polynomial::monomial(&lr, vec![-1, 0], lr.field().one()).is_ok());
    }

    #[test]
    fn weighted_degree_examples() {
        let lr =
            PolyRing::new(FieldSpec::rationals(), VarList::new(&["x", "z", "t"]).unwrap().with_laurent("x").unwrap());
        let w1 = WeightVector::from_ints(&[-1, 0, 0]);
        // x^-2 (x + z^2 + t^3)
        let f = sum(&[mono(&lr, &[-1, 0, 0], 1), mono(&lr, &[-2, 2, 0], 1), mono(&lr, &[-2, 0, 3], 1)]);
        assert_eq!(f.weighted_degree(&w1), Degree::from_int(2));
        assert_eq!(Polynomial::zero(&lr).weighted_degree(&w1), Degree::NegInfinity);
        let r = ring(&["z", "t"], 0);
        let w2 = WeightVector::from_ints(&[3, 2]);
        assert_eq!(mono(&r, &[2, 1], 1).weighted_degree(&w2), Degree::from_int(8));
        assert!(Degree::NegInfinity < Degree::from_int(-1000));
    }

    #[test]
    fn top_component_examples() {
        let r = ring(&["x", "y", "z", "t"], 0);
        let w1 = WeightVector::from_ints(&[-1, 2, 0, 0]);
        let rel = sum(&[
            mono(&r, &[1, 0, 0, 0], 1),
            mono(&r, &[2, 1, 0, 0], 1),
            mono(&r, &[0, 0, 2, 0], 1),
            mono(&r, &[0, 0, 0, 3], 1),
        ]);
        let top = sum(&[mono(&r, &[2, 1, 0, 0], 1), mono(&r, &[0, 0, 2, 0], 1), mono(&r, &[0, 0, 0, 3], 1)]);
        assert_eq!(rel.top_component(&w1).unwrap(), top);
        assert_eq!(top.top_component(&w1).unwrap(), top);
        let f = &mono(&r, &[1, 0, 0, 0], 1) + &mono(&r, &[0, 0, 2, 0], 1);
        assert_eq!(f.top_component(&w1).unwrap(), mono(&r, &[0, 0, 2, 0], 1));
        assert_eq!(Polynomial::zero(&r).top_component(&w1), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(&["x", "y", "z", "t"], 0);
        let order = MonomialOrder::lex(r.vars(), &["y", "z", "t", "x"]).unwrap();
        let rel = sum(&[
            mono(&r, &[1, 0, 0, 0], 1),
            mono(&r, &[2, 1, 0, 0], 1),
            mono(&r, &[0, 0, 2, 0], 1),
            mono(&r, &[0, 0, 0, 3], 1),
        ]);
        assert!(normal_form(&rel, &rel, &order).unwrap().is_zero());
        let f = mono(&r, &[2, 1, 0, 0], 1);
        let nf = normal_form(&f, &rel, &order).unwrap();
        let expected = sum(&[mono(&r, &[1, 0, 0, 0], -1), mono(&r, &[0, 0, 2, 0], -1), mono(&r, &[0, 0, 0, 3], -1)]);
        assert_eq!(nf, expected);
        // f - nf is a multiple of rel: here exactly rel
        assert_eq!(&f - &nf, rel);
        let g = &mono(&r, &[1, 1, 0, 0], 3) + &mono(&r, &[0, 0, 1, 4], 1);
        assert_eq!(normal_form(&g, &rel, &order).unwrap(), g);
        assert_eq!(normal_form(&g, &Polynomial::zero(&r), &order), Err(Error::ZeroRelation));
    }

    #[test]
    fn divide_reconstructs() {
        let r = ring(&["x", "y", "z", "t"], 3);
        let order = MonomialOrder::lex(r.vars(), &["y", "z", "t", "x"]).unwrap();
        let rel = sum(&[
            mono(&r, &[1, 0, 0, 0], 1),
            mono(&r, &[2, 1, 0, 0], 1),
            mono(&r, &[0, 0, 2, 0], 1),
            mono(&r, &[0, 0, 0, 3], 1),
        ]);
        let f = sum(&[mono(&r, &[5, 3, 1, 0], 2), mono(&r, &[2, 2, 0, 1], 1), mono(&r, &[0, 1, 0, 0], 1)]);
        let (q, rem) = f.divide(&rel, &order).unwrap();
        assert_eq!(&(&q * &rel) + &rem, f);
    }

    #[test]
    fn rendering() {
        let lr =
            PolyRing::new(FieldSpec::rationals(), VarList::new(&["x", "z", "t"]).unwrap().with_laurent("x").unwrap());
        let c = Coefficient::from_ratio(&(-3).into(), &2.into(), lr.field()).unwrap();
        let f = Polynomial::monomial(&lr, vec![2, 0, 1], c).unwrap();
        assert_eq!(f.to_string(), "-3/2*x^2*t");
        assert_eq!(mono(&lr, &[-2, 0, 0], 1).to_string(), "x^-2");
        let g = sum(&[mono(&lr, &[-2, 0, 0], -1), mono(&lr, &[0, 1, 0], 1), Polynomial::from_int(&lr, 4)]);
        assert_eq!(g.to_string(), "z + 4 - x^-2");
        assert_eq!(Polynomial::zero(&lr).to_string(), "0");
    }

    #[test]
    fn substitution_with_inverse_monomial() {
        let r = ring(&["x", "y"], 0);
        let lr = PolyRing::new(r.field(), r.vars().clone().with_laurent("x").unwrap());
        let f = &mono(&r, &[2, 1], 1) + &mono(&r, &[1, 0], 1);
        let images = [mono(&lr, &[1, 0], 1), mono(&lr, &[-2, 1], 1)];
        assert_eq!(f.substitute(&images, &lr).unwrap(), &mono(&lr, &[0, 1], 1) + &mono(&lr, &[1, 0], 1));
    }

    #[test]
    fn factor_examples() {
        let r = ring(&["z", "t"], 0);
        let w = WeightVector::from_ints(&[3, 2]);
        let g = &mono(&r, &[2, 1], 1) + &mono(&r, &[0, 4], 1);
        let f = weighted_homog_factor(&g, 0, 1, &w).unwrap();
        assert_eq!((f.lambda.clone(), f.n, f.m), (r.field().one(), 0, 1));
        assert_eq!(f.mu_multiset(), vec![r.field().one()]);
        assert_eq!(f.expand(&r), g);

        let g = mono(&r, &[3, 0], 1);
        let f = weighted_homog_factor(&g, 0, 1, &w).unwrap();
        assert_eq!((f.n, f.m, f.factors.len()), (3, 0, 0));

        let r5 = ring(&["z", "t"], 5);
        let g = sum(&[mono(&r5, &[4, 0], 1), mono(&r5, &[2, 3], 3), mono(&r5, &[0, 6], 2)]);
        // brute force: roots of s^2 + 3s + 2 in F_5
        let roots: Vec<u64> = (0..5).filter(|s| (s * s + 3 * s + 2) % 5 == 0).collect();
        assert_eq!(roots, vec![3, 4]);
        let f = weighted_homog_factor(&g, 0, 1, &w).unwrap();
        let mus: Vec<Coefficient> = roots.iter().map(|&s| -Coefficient::from_i64(s as i64, r5.field())).collect();
        let mut got = f.mu_multiset();
        got.sort_by_key(|c| c.to_string());
        let mut want = mus;
        want.sort_by_key(|c| c.to_string());
        assert_eq!(got, want);
        assert_eq!(want, vec![r5.field().one(), Coefficient::from_i64(2, r5.field())]);
        assert_eq!(f.expand(&r5), g);
    }

    #[test]
    fn factor_errors() {
        let r = ring(&["z", "t"], 0);
        let w = WeightVector::from_ints(&[3, 2]);
        let g = &mono(&r, &[2, 0], 1) + &mono(&r, &[0, 1], 1);
        assert!(matches!(weighted_homog_factor(&g, 0, 1, &w), Err(Error::NotHomogeneous(_))));
        // z^4 + t^6 = (z^2)^2 + (t^3)^2 has no rational root in s
        let g = &mono(&r, &[4, 0], 1) + &mono(&r, &[0, 6], 1);
        assert!(matches!(weighted_homog_factor(&g, 0, 1, &w), Err(Error::DoesNotSplit { .. })));
        assert_eq!(weighted_homog_factor(&Polynomial::zero(&r), 0, 1, &w), Err(Error::ZeroPolynomial));
    }
}
