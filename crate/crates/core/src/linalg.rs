//! Exact Gaussian elimination on spans of polynomials.
//!
//! Polynomials are treated as coefficient vectors over the monomials that
//! occur in them.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::coeff::{Coefficient, FieldSpec};
use crate::poly::{MonomialOrder, PolyRing, Polynomial};

/// Dense matrix over a field, reduced in place.
struct Matrix {
    field: FieldSpec,
    rows: Vec<Vec<Coefficient>>,
    ncols: usize,
}

impl Matrix {
    /// Reduced row echelon form; returns pivot columns.
    fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            let Some(p) = (r..self.rows.len()).find(|&i| !self.rows[i][c].is_zero()) else {
                continue;
            };
            self.rows.swap(r, p);
            let inv = self.rows[r][c].inverse().unwrap();
            for v in self.rows[r].iter_mut() {
                *v = &*v * &inv;
            }
            let pivot_row = self.rows[r].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    if !pv.is_zero() {
                        *v = &*v - &(&f * pv);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows.len() {
                break;
            }
        }
        self.rows.truncate(r);
        pivots
    }

    /// Basis of `{v : M v = 0}`.
    fn kernel(mut self) -> Vec<Vec<Coefficient>> {
        let n = self.ncols;
        let pivots = self.rref();
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.field.zero(); n];
                v[f] = self.field.one();
                for (row, &pc) in self.rows.iter().zip(&pivots) {
                    v[pc] = -&row[f];
                }
                v
            })
            .collect()
    }
}

/// Monomial index shared by a set of polynomials, descending in `order`.
fn monomial_index(polys: &[&Polynomial], order: &MonomialOrder) -> Vec<Vec<i32>> {
    let mut all: Vec<Vec<i32>> = polys
        .iter()
        .flat_map(|p| p.terms().map(|(e, _)| e.clone()))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    all.sort_by(|a, b| order.cmp(b, a));
    all
}

/// Linear relations among `polys`: each returned vector `c` has `sum c_i polys_i = 0`.
pub fn dependencies(field: FieldSpec, polys: &[&Polynomial], order: &MonomialOrder) -> Vec<Vec<Coefficient>> {
    let monos = monomial_index(polys, order);
    let pos: BTreeMap<&Vec<i32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = vec![vec![field.zero(); polys.len()]; monos.len()];
    for (j, p) in polys.iter().enumerate() {
        for (e, c) in p.terms() {
            rows[pos[e]][j] = c.clone();
        }
    }
    Matrix { field, rows, ncols: polys.len() }.kernel()
}

/// Canonical (reduced echelon) basis of the span, leading monomials descending.
pub fn span_basis(ring: &Arc<PolyRing>, polys: &[&Polynomial], order: &MonomialOrder) -> Vec<Polynomial> {
    let field = ring.field();
    let monos = monomial_index(polys, order);
    let pos: BTreeMap<&Vec<i32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let rows = polys
        .iter()
        .map(|p| {
            let mut row = vec![field.zero(); monos.len()];
            for (e, c) in p.terms() {
                row[pos[e]] = c.clone();
            }
            row
        })
        .collect();
    let mut m = Matrix { field, rows, ncols: monos.len() };
    m.rref();
    m.rows
        .iter()
        .map(|row| {
            let terms =
                row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (monos[i].clone(), c.clone()));
            Polynomial::from_terms(ring, terms).expect("monomials come from the same ring")
        })
        .collect()
}

/// Coefficients expressing `target` as a combination of `polys`, if possible.
pub fn solve(target: &Polynomial, polys: &[&Polynomial], order: &MonomialOrder) -> Option<Vec<Coefficient>> {
    let field = target.field();
    let mut cols: Vec<&Polynomial> = polys.to_vec();
    cols.push(target);
    // a dependency with nonzero last entry gives target = -sum(c_i / c_last) polys_i
    let deps = dependencies(field, &cols, order);
    let dep = deps.into_iter().find(|d| !d.last().unwrap().is_zero())?;
    let last_inv = dep.last().unwrap().inverse().ok()?;
    Some(dep[..polys.len()].iter().map(|c| -(c * &last_inv)).collect())
}

/// Basis of `span(a) ∩ span(b)`.
pub fn intersection(
    ring: &Arc<PolyRing>,
    a: &[&Polynomial],
    b: &[&Polynomial],
    order: &MonomialOrder,
) -> Vec<Polynomial> {
    let field = ring.field();
    let mut cols: Vec<&Polynomial> = a.to_vec();
    cols.extend_from_slice(b);
    let deps = dependencies(field, &cols, order);
    let common: Vec<Polynomial> = deps
        .iter()
        .map(|d| a.iter().zip(d).fold(Polynomial::zero(ring), |acc, (p, c)| &acc + &p.scale(c)))
        .filter(|p| !p.is_zero())
        .collect();
    let refs: Vec<&Polynomial> = common.iter().collect();
    span_basis(ring, &refs, order)
}
