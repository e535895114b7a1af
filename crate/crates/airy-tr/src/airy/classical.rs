//! The Lagrangian as a graph `y_i(x)` and its generating function `S_0`.

use super::AiryTensors;
use crate::algebra::mpoly::MPoly;
use crate::algebra::{ri, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct LagrangianExpansion {
    pub degree: usize,
    pub labels: Vec<i64>,
    /// `y[p]` is a polynomial in the `x` positions.
    pub y: Vec<MPoly>,
}

fn step(t: &AiryTensors, y: &[MPoly], d: usize) -> Vec<MPoly> {
    (0..t.dim())
        .map(|i| {
            let mut r = MPoly::zero();
            for (j, k, v) in t.a_pairs(i) {
                r.add_term(vec![j, k], v);
            }
            for (j, k, v) in t.b_row(i) {
                r = r.add(&y[k].times_var(j).scale(&(v * ri(2))).truncate(d));
            }
            for (j, k, v) in t.c_pairs(i) {
                r = r.add(&y[j].mul_trunc(&y[k], d).scale(&v));
            }
            r
        })
        .collect()
}

/// Fixed-point iteration `y^(n+1) = Hhat(x, y^(n))` to total degree `d`.
pub fn classical_expand(t: &AiryTensors, d: usize) -> Result<LagrangianExpansion> {
    if d < 2 {
        return Err(Error::Invalid("degree must be at least 2".into()));
    }
    let mut y = vec![MPoly::zero(); t.dim()];
    // y^(1) = 0; y^(n) is exact through degree n
    for n in 1..d {
        let next = step(t, &y, d);
        for (a, b) in next.iter().zip(&y) {
            let low = a.sub(b).min_degree().unwrap_or(usize::MAX);
            assert!(low > n, "iteration did not stabilize through degree {n}");
        }
        y = next;
    }
    Ok(LagrangianExpansion {
        degree: d,
        labels: t.labels().to_vec(),
        y,
    })
}

/// `S_0` of degree `d + 1` with `dS_0 = y_i dx^i` through degree `d`.
pub fn potential_s0(t: &AiryTensors, d: usize) -> Result<MPoly> {
    let ex = classical_expand(t, d)?;
    // Euler: S_0 = sum_deg (1/deg) x^i [y_i]_{deg-1}
    let mut s = MPoly::zero();
    for (i, yi) in ex.y.iter().enumerate() {
        for (m, c) in yi.terms() {
            let mut mm = m.clone();
            mm.push(i);
            s.add_term(mm, c / ri(m.len() as i64 + 1));
        }
    }
    for (i, yi) in ex.y.iter().enumerate() {
        if &s.derivative(i) != yi {
            return Err(Error::NonIntegrable(format!("dS_0/dx^{} differs from y_{}", t.labels()[i], t.labels()[i])));
        }
    }
    Ok(s)
}

/// Catalan numbers read off the conic expansion, degree 2 up to `d`.
pub fn conic_coefficients(d: usize) -> Result<Vec<Rat>> {
    let ex = classical_expand(&super::conic(), d)?;
    Ok((2..=d).map(|k| ex.y[0].coeff(&vec![0; k])).collect())
}
