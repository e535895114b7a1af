//! Local expansions at a branch point in the coordinate `s = y`.

use super::{QuarticCurve, C};

fn mul(a: &[C], b: &[C], n: usize) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); n];
    for (i, x) in a.iter().enumerate().take(n) {
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn inverse(a: &[C], n: usize) -> Vec<C> {
    let mut out = vec![C::new(0.0, 0.0); n];
    out[0] = a[0].inv();
    for k in 1..n {
        let s: C = (1..=k.min(a.len() - 1)).map(|j| a[j] * out[k - j]).sum();
        out[k] = -s * out[0];
    }
    out
}

/// `x(s) - b` as a series in `s`, from `s^2 = q(b + w)` by Lagrange
/// inversion: `[sigma^n] w = (1/n) [w^{n-1}] (w/Q(w))^n`.
#[derive(Clone, Debug)]
pub struct BranchExpansion {
    pub point: C,
    /// `x(s) - b`, coefficients of `s^0 .. s^{len-1}`.
    pub x: Vec<C>,
}

impl BranchExpansion {
    pub fn new(curve: &QuarticCurve, point: C, order: usize) -> Self {
        let t = curve.taylor(point);
        // Q(w)/w = q1 + q2 w + q3 w^2 + q4 w^3
        let qw: Vec<C> = t[1..].to_vec();
        let m = order / 2 + 1;
        let base = inverse(&qw, m);
        let mut x = vec![C::new(0.0, 0.0); 2 * m + 1];
        let mut pw = vec![C::new(1.0, 0.0)];
        for n in 1..=m {
            pw = mul(&pw, &base, m);
            x[2 * n] = pw[n - 1] / n as f64;
        }
        x.truncate(order + 1);
        BranchExpansion { point, x }
    }

    /// `dx/ds`.
    pub fn dx(&self) -> Vec<C> {
        self.x.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
    }

    /// `[s^{-1}] x'(s)^2 / s^3`, i.e. `A^3 Res omega^3/(dx dy)`.
    pub fn res_cubic(&self) -> C {
        let d = self.dx();
        mul(&d, &d, 3)[2]
    }

    /// `[s^{-1}] x'(s) / s^2`, i.e. `A^2 Res omega^2/dx`.
    pub fn res_quadratic(&self) -> C {
        self.dx()[1]
    }

    /// `[s^{-1}] F(s) x'(s) / s^3` with `F = \int x'(s)/s ds`: the
    /// residue appearing in the bilinear relation for `d tau/dt`.
    pub fn res_bilinear(&self) -> C {
        let d = self.dx();
        // x'(s)/s has only even powers; integrate termwise
        let f: Vec<C> = (0..d.len()).map(|k| if k == 0 { C::new(0.0, 0.0) } else { d[k] / k as f64 }).collect();
        mul(&f, &d, 3)[2]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expansion_solves_the_curve() {
        let c = QuarticCurve::family([4.0, 0.3, -5.0, 0.1, 1.0]).unwrap();
        for &b in &c.roots {
            let e = BranchExpansion::new(&c, b, 14);
            let s = C::new(0.02, 0.01);
            let x: C = b + e.x.iter().enumerate().map(|(k, v)| v * s.powu(k as u32)).sum::<C>();
            assert!((c.q(x) - s * s).norm() < 1e-13, "{}", (c.q(x) - s * s).norm());
        }
    }

    #[test]
    fn leading_coefficient_is_inverse_derivative() {
        let c = QuarticCurve::family([4.0, 0.0, -5.0, 0.0, 1.0]).unwrap();
        for &b in &c.roots {
            let e = BranchExpansion::new(&c, b, 8);
            let c2 = c.dq(b).inv();
            assert!((e.x[2] - c2).norm() < 1e-14);
            assert!((e.res_cubic() - c2 * c2 * 4.0).norm() < 1e-13);
            assert!((e.res_quadratic() - c2 * 2.0).norm() < 1e-13);
        }
    }
}
