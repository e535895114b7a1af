//! Closure of `{H_i, H_j} = g_ij^k H_k` checked coefficient by coefficient.
//!
//! Residual monomials are sorted by type: linear (relation 1), `xx` (2),
//! `xy` (3), `yy` (4). The quantum check reads the `hbar^2` constant of
//! `[H_i, H_j] - hbar g_ij^k H_k` for the normal-ordered operators.

use super::weyl::quantized;
use super::AiryTensors;
use crate::algebra::mpoly::MPoly;
use crate::algebra::{ri, Rat};
use num_traits::{One, Zero};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    /// 1..=4 for the classical relations, 5 for the quantum one.
    pub relation: u8,
    pub i: i64,
    pub j: i64,
    /// Mode labels of the residual monomial (`x` then `y`).
    pub x_modes: Vec<i64>,
    pub y_modes: Vec<i64>,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub pass: bool,
    pub first_violation: Option<Violation>,
    pub violations: usize,
    /// Pairs `i < j` examined in full.
    pub pairs_checked: usize,
    /// Pairs or monomials the truncation cannot see.
    pub unverifiable: usize,
}

impl ConstraintReport {
    fn new() -> Self {
        ConstraintReport {
            pass: true,
            first_violation: None,
            violations: 0,
            pairs_checked: 0,
            unverifiable: 0,
        }
    }

    fn record(&mut self, v: Violation) {
        self.pass = false;
        self.violations += 1;
        if self.first_violation.is_none() {
            self.first_violation = Some(v);
        }
    }
}

struct Visibility<'a> {
    t: &'a AiryTensors,
}

impl Visibility<'_> {
    fn weight(&self, p: usize) -> Option<i64> {
        self.t.grading().map(|g| g.weights[p])
    }

    fn pair_ok(&self, i: usize, j: usize) -> bool {
        match self.t.grading() {
            None => true,
            Some(g) => {
                let (wi, wj) = (g.weights[i], g.weights[j]);
                wi.max(wj).max(wi + wj - g.shift).max(g.shift) <= g.max_weight
            }
        }
    }

    fn monomial_ok(&self, vars: &[usize]) -> bool {
        match self.t.grading() {
            None => true,
            Some(g) => vars
                .iter()
                .filter_map(|&p| self.weight(p))
                .all(|w| w + g.shift <= g.max_weight),
        }
    }
}

/// `H_i` as a polynomial in `x_m = m`, `y_m = n + m`.
fn hamiltonian(t: &AiryTensors, i: usize) -> MPoly {
    let n = t.dim();
    let mut h = MPoly::zero();
    h.add_term(vec![n + i], -Rat::one());
    for (j, k, v) in t.a_pairs(i) {
        h.add_term(vec![j, k], v);
    }
    for (j, k, v) in t.b_row(i) {
        h.add_term(vec![j, n + k], v * ri(2));
    }
    for (j, k, v) in t.c_pairs(i) {
        h.add_term(vec![n + j, n + k], v);
    }
    h
}

/// `{f, g} = sum_m df/dy_m dg/dx^m - df/dx^m dg/dy_m`.
pub(crate) fn poisson(f: &MPoly, g: &MPoly, n: usize) -> MPoly {
    let mut r = MPoly::zero();
    for m in 0..n {
        r = r.add(&f.derivative(n + m).mul_trunc(&g.derivative(m), usize::MAX));
        r = r.sub(&f.derivative(m).mul_trunc(&g.derivative(n + m), usize::MAX));
    }
    r
}

pub fn check_classical_constraints(t: &AiryTensors) -> ConstraintReport {
    let n = t.dim();
    let vis = Visibility { t };
    let hs: Vec<MPoly> = (0..n).map(|i| hamiltonian(t, i)).collect();
    let mut rep = ConstraintReport::new();
    for i in 0..n {
        for j in i + 1..n {
            if !vis.pair_ok(i, j) {
                rep.unverifiable += 1;
                continue;
            }
            rep.pairs_checked += 1;
            let mut r = poisson(&hs[i], &hs[j], n);
            for (k, g) in t.g_row(i, j) {
                r = r.sub(&hs[k].scale(&g));
            }
            for (m, c) in r.terms() {
                let xs: Vec<usize> = m.iter().copied().filter(|&v| v < n).collect();
                let ys: Vec<usize> = m.iter().filter(|&&v| v >= n).map(|v| v - n).collect();
                let all: Vec<usize> = xs.iter().chain(ys.iter()).copied().collect();
                if !vis.monomial_ok(&all) {
                    rep.unverifiable += 1;
                    continue;
                }
                let relation = match (xs.len(), ys.len()) {
                    (2, 0) => 2,
                    (1, 1) => 3,
                    (0, 2) => 4,
                    _ => 1,
                };
                let lab = |v: &[usize]| v.iter().map(|&p| t.labels()[p]).collect();
                rep.record(Violation {
                    relation,
                    i: t.labels()[i],
                    j: t.labels()[j],
                    x_modes: lab(&xs),
                    y_modes: lab(&ys),
                    residual: c.to_string(),
                });
            }
        }
    }
    rep
}

/// `hbar^2` constant of `[H_i, H_j] - hbar g_ij^k H_k`.
pub(crate) fn quantum_defect(t: &AiryTensors, i: usize, j: usize) -> Rat {
    let hi = quantized(t, i);
    let hj = quantized(t, j);
    let mut r = hi.commutator(&hj);
    for (k, g) in t.g_row(i, j) {
        let mut hk = quantized(t, k);
        // multiply by hbar
        hk.terms = hk.terms.into_iter().map(|((h, x, d), c)| ((h + 1, x, d), c)).collect();
        r.add_scaled(&hk, &-g);
    }
    r.terms.get(&(2, vec![], vec![])).cloned().unwrap_or_else(Rat::zero)
}

pub fn check_quantum_constraint(t: &AiryTensors) -> ConstraintReport {
    let n = t.dim();
    let vis = Visibility { t };
    let mut rep = ConstraintReport::new();
    for i in 0..n {
        for j in i + 1..n {
            if !vis.pair_ok(i, j) {
                rep.unverifiable += 1;
                continue;
            }
            rep.pairs_checked += 1;
            let d = quantum_defect(t, i, j);
            if !d.is_zero() {
                rep.record(Violation {
                    relation: 5,
                    i: t.labels()[i],
                    j: t.labels()[j],
                    x_modes: vec![],
                    y_modes: vec![],
                    residual: d.to_string(),
                });
            }
        }
    }
    rep
}
