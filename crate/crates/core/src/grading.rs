//! Weight filtrations, the associated graded model and homogenized exponential maps.
//!
//! Filtration degrees of elements are computed through the Laurent model, so
//! `grdeg(a)` is the weighted degree of the image of `a` there. The graded
//! model keeps the variables and replaces the relation by its top component.

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::Zero;

use crate::algebra::{make_element, Algebra, AlgebraElement, AlgebraPresentation};
use crate::error::{Error, Result};
use crate::expmap::ExponentialMap;
use crate::poly::{fmt_fraction, Degree, Polynomial, WeightVector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationContext {
    algebra: Algebra,
    weights: WeightVector,
    graded: Algebra,
}

impl FiltrationContext {
    /// Builds the graded model. For a quotient, the solved variable's weight
    /// must equal the weighted degree of its Laurent expression; otherwise the
    /// variables would not be homogeneous for the induced filtration.
    pub fn new(algebra: &Algebra, weights: WeightVector) -> Result<Self> {
        if weights.len() != algebra.nvars() {
            return Err(Error::InconsistentWeights(format!(
                "{} weights for {} variables",
                weights.len(),
                algebra.nvars()
            )));
        }
        if algebra.is_free() {
            return Ok(FiltrationContext { algebra: algebra.clone(), weights, graded: algebra.clone() });
        }
        let model = algebra.laurent().ok_or(Error::NoLaurentModel)?;
        let v = model.solved_var();
        let name = algebra.ring().vars().name(v).to_string();
        let expr_deg = model.expression().weighted_degree(&weights);
        if expr_deg != Degree::Finite(weights.weight(v).clone()) {
            return Err(Error::InconsistentWeights(format!(
                "weight of `{name}` is {} but its Laurent expression has degree {expr_deg}",
                fmt_fraction(weights.weight(v))
            )));
        }
        let top = algebra.relation().top_component(&weights)?;
        let graded = AlgebraPresentation::new(algebra.ring(), top, algebra.order().clone())?
            .solve_for(&name)
            .map_err(|e| Error::InconsistentWeights(format!("graded relation cannot be solved for `{name}`: {e}")))?
            .shared();
        Ok(FiltrationContext { algebra: algebra.clone(), weights, graded })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn graded_model(&self) -> &Algebra {
        &self.graded
    }

    /// Filtration degree of an element of the algebra or of the graded model.
    pub fn grdeg(&self, a: &AlgebraElement) -> Result<Degree> {
        a.filtration_degree(&self.weights)
    }

    /// The class of `a` in the graded model.
    ///
    /// Takes the top weighted component of the representative; while that
    /// component vanishes in the graded model it is a multiple `q * top(f)` of
    /// the top relation, and `q * f` is subtracted to lower the degree.
    pub fn top_part(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        if self.algebra.is_free() {
            return make_element(&self.graded, &a.rep().top_component(&self.weights)?);
        }
        let rel = self.algebra.relation();
        let top_rel = self.graded.relation();
        let order = self.graded.order();
        let mut p = a.rep().clone();
        let top = loop {
            let pd = p.top_component(&self.weights)?;
            let (q, r) = pd.divide(top_rel, order)?;
            if !r.is_zero() {
                break r;
            }
            p = &p - &(&q * rel);
        };
        let top = make_element(&self.graded, &top)?;
        let expected = a.laurent_embed()?.top_component(&self.weights)?;
        if top.laurent_embed()? != expected {
            return Err(Error::InconsistentWeights(format!("top part of `{a}` disagrees with its Laurent image")));
        }
        Ok(top)
    }

    /// Computes `grdeg(U)` for `map`.
    pub fn grade(&self, map: &ExponentialMap) -> Result<Homogenization> {
        if map.algebra() != &self.algebra && **map.algebra() != *self.algebra {
            return Err(Error::MixedRing);
        }
        let mut best: Option<BigRational> = None;
        for g in self.algebra.generators() {
            let dg = finite(&self.grdeg(&g)?);
            for (i, d) in map.derivatives(&g)?.iter().enumerate().skip(1) {
                if d.is_zero() {
                    continue;
                }
                let cand = (&dg - finite(&self.grdeg(d)?)) / BigRational::from_integer((i as i64).into());
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        let grdeg_u = best.ok_or(Error::TrivialMap)?;
        Ok(Homogenization { ctx: self.clone(), map: map.clone(), grdeg_u })
    }
}

fn finite(d: &Degree) -> BigRational {
    d.finite().cloned().expect("nonzero elements have finite degree")
}

/// An exponential map together with its filtration context and `grdeg(U)`.
#[derive(Clone, Debug)]
pub struct Homogenization {
    ctx: FiltrationContext,
    map: ExponentialMap,
    grdeg_u: BigRational,
}

impl Homogenization {
    pub fn context(&self) -> &FiltrationContext {
        &self.ctx
    }

    pub fn map(&self) -> &ExponentialMap {
        &self.map
    }

    pub fn grdeg_u(&self) -> &BigRational {
        &self.grdeg_u
    }

    fn shifted(&self, d: &AlgebraElement, n: usize) -> Result<Degree> {
        Ok(match self.ctx.grdeg(d)? {
            Degree::NegInfinity => Degree::NegInfinity,
            Degree::Finite(q) => Degree::Finite(q + &self.grdeg_u * BigRational::from_integer((n as i64).into())),
        })
    }

    /// `S(a) = {n : grdeg(D^n a) + n grdeg(U) = grdeg(a)}`.
    pub fn support_set(&self, a: &AlgebraElement) -> Result<BTreeSet<u32>> {
        if a.is_zero() {
            return Ok(BTreeSet::from([0]));
        }
        let target = self.ctx.grdeg(a)?;
        let mut out = BTreeSet::new();
        for (n, d) in self.map.derivatives(a)?.iter().enumerate() {
            if !d.is_zero() && self.shifted(d, n)? == target {
                out.insert(n as u32);
            }
        }
        Ok(out)
    }

    /// `grdeg(D^n(a)) + n grdeg(U) <= grdeg(a)` for every `n`.
    pub fn degree_bound_holds(&self, a: &AlgebraElement) -> Result<bool> {
        let target = self.ctx.grdeg(a)?;
        for (n, d) in self.map.derivatives(a)?.iter().enumerate() {
            if self.shifted(d, n)? > target {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `sum_{n in S(a)} top(D^n a) U^n` in the graded model's `A[U]`.
    pub fn homogenized_image(&self, a: &AlgebraElement) -> Result<Polynomial> {
        let graded = self.ctx.graded_model();
        let u_ring = ExponentialMap::u_ring_for(graded);
        let u = Polynomial::var_at(&u_ring, graded.nvars());
        let ds = self.map.derivatives(a)?;
        let mut img = Polynomial::zero(&u_ring);
        for n in self.support_set(a)? {
            let top = self.ctx.top_part(&ds[n as usize])?;
            img = &img + &(&top.rep().embed(&u_ring)? * &u.pow(n));
        }
        Ok(img)
    }

    /// Per-generator support sets, in variable order.
    pub fn generator_support_sets(&self) -> Result<Vec<BTreeSet<u32>>> {
        self.ctx.algebra().generators().iter().map(|g| self.support_set(g)).collect()
    }

    /// The homogenized map on the graded model, verified and checked nontrivial.
    pub fn homogenize_map(&self) -> Result<ExponentialMap> {
        let graded = self.ctx.graded_model();
        let images =
            self.ctx.algebra().generators().iter().map(|g| self.homogenized_image(g)).collect::<Result<Vec<_>>>()?;
        let bar = ExponentialMap::new(graded, images)?;
        let report = bar.verify();
        if !report.passed() || report.trivial {
            let mut dump = format!("grdeg(U) = {}\n", fmt_fraction(&self.grdeg_u));
            for (i, s) in self.generator_support_sets()?.iter().enumerate() {
                dump += &format!("{}: S = {s:?}, image {}\n", graded.ring().vars().name(i), bar.render_image(i));
            }
            dump += &report.to_string();
            return Err(Error::HomogenizationNotExponential(dump));
        }
        Ok(bar)
    }

    /// Every top part of a (nonzero) sampled invariant is fixed by the homogenized map.
    pub fn check_invariant_top_parts(&self, bar: &ExponentialMap, samples: &[AlgebraElement]) -> Result<bool> {
        for s in samples.iter().filter(|s| !s.is_zero()) {
            if !bar.is_invariant(&self.ctx.top_part(s)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `grdeg(U)` is attained with equality by some generator and some `n >= 1`.
pub fn bound_is_sharp(h: &Homogenization) -> Result<bool> {
    for g in h.context().algebra().generators() {
        if h.support_set(&g)?.iter().any(|&n| n > 0) {
            return Ok(true);
        }
    }
    Ok(h.grdeg_u().is_zero() && h.map().is_trivial())
}
