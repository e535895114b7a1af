//! Bergman kernel of a quartic genus-one curve through its uniformization
//! by `C / (Z + tau Z)` and Jacobi theta functions.

use super::{gauss_legendre, CycleSet, PeriodData, QuarticCurve, C};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Theta functions with nome `exp(i pi tau)`.
#[derive(Clone, Copy, Debug)]
pub struct Torus {
    pub tau: C,
    /// `pi^2 theta_2(0)^2 theta_3(0)^2`.
    scale: C,
}

const TERMS: usize = 40;

impl Torus {
    pub fn new(tau: C) -> Result<Self> {
        if tau.im <= 0.0 {
            return Err(Error::Numeric("Im tau must be positive".into()));
        }
        let mut t2 = C::new(0.0, 0.0);
        let mut t3 = C::new(1.0, 0.0);
        for n in 0..TERMS {
            let h = n as f64 + 0.5;
            t2 += (C::i() * PI * tau * h * h).exp() * 2.0;
            if n > 0 {
                t3 += (C::i() * PI * tau * (n * n) as f64).exp() * 2.0;
            }
        }
        Ok(Torus {
            tau,
            scale: t2 * t2 * t3 * t3 * PI * PI,
        })
    }

    pub fn theta1(&self, z: C) -> C {
        let mut s = C::new(0.0, 0.0);
        for n in 0..TERMS {
            let h = n as f64 + 0.5;
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            s += (C::i() * PI * self.tau * h * h).exp() * (z * (2 * n + 1) as f64).sin() * (2.0 * sign);
        }
        s
    }

    pub fn theta4(&self, z: C) -> C {
        let mut s = C::new(1.0, 0.0);
        for n in 1..TERMS {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            s += (C::i() * PI * self.tau * (n * n) as f64).exp() * (z * (2 * n) as f64).cos() * (2.0 * sign);
        }
        s
    }

    /// `u` moved into the period parallelogram centred at the origin.
    pub fn reduce(&self, u: C) -> C {
        let beta = (u.im / self.tau.im).round();
        let u = u - self.tau * beta;
        u - u.re.round()
    }

    /// Lattice coordinates `(alpha, beta)` with `u = alpha + beta tau`.
    pub fn coordinates(&self, u: C) -> (f64, f64) {
        let beta = u.im / self.tau.im;
        (u.re - beta * self.tau.re, beta)
    }

    /// Weierstrass `p(u)` up to an additive constant; `P(u) = 1/u^2 + O(1)`.
    pub fn p(&self, u: C) -> C {
        let z = self.reduce(u) * PI;
        let r = self.theta4(z) / self.theta1(z);
        self.scale * r * r
    }
}

/// `B(p,q) = (P(u_p - u_q) + c) du_p du_q` with `c` fixed by a vanishing
/// a-period.
#[derive(Clone, Debug)]
pub struct BergmanKernel {
    pub curve: QuarticCurve,
    pub periods: PeriodData,
    pub torus: Torus,
    pub constant: C,
    /// Abel images of the branch points, based at `b0`.
    pub branch_u: [C; 4],
}

impl BergmanKernel {
    pub fn new(curve: &QuarticCurve, cycles: &CycleSet) -> Result<Self> {
        let periods = cycles.periods(curve)?;
        let torus = Torus::new(periods.tau)?;
        let m = 128;
        let shift = torus.tau * 0.5;
        let mean: C = (0..m).map(|j| torus.p(shift + j as f64 / m as f64)).sum::<C>() / m as f64;
        let mut k = BergmanKernel {
            curve: curve.clone(),
            periods,
            torus,
            constant: -mean,
            branch_u: [C::new(0.0, 0.0); 4],
        };
        let mut acc = C::new(0.0, 0.0);
        for i in 1..4 {
            acc += k.segment(i - 1, i);
            k.branch_u[i] = acc;
        }
        Ok(k)
    }

    /// `\int \omega` between two branch points along the straight segment.
    fn segment(&self, i: usize, j: usize) -> C {
        let (b1, b2) = (self.curve.roots[i], self.curve.roots[j]);
        let others: Vec<C> = (0..4).filter(|&k| k != i && k != j).map(|k| self.curve.roots[k]).collect();
        let c4 = self.curve.coeffs[4];
        let (gx, gw) = gauss_legendre(48);
        let mut prev: Option<C> = None;
        let mut s = C::new(0.0, 0.0);
        // x = m - d cos(th): dx/y = g(th) dth with g^2 = -1/(c4 (x-b)(x-b'))
        for (k, node) in gx.iter().enumerate() {
            let th = 0.5 * PI * (node + 1.0);
            let x = (b1 + b2) * 0.5 - (b2 - b1) * 0.5 * th.cos();
            let g = (-(c4 * (x - others[0]) * (x - others[1])).inv()).sqrt();
            let g = match prev {
                Some(p) if (g - p).norm() > (g + p).norm() => -g,
                _ => g,
            };
            prev = Some(g);
            s += g * gw[k] * 0.5 * PI;
        }
        s / self.periods.a
    }

    /// Abel map of `(x, y)` based at `b0`, through the nearest branch point.
    pub fn abel(&self, x: C, y: C) -> C {
        let i = (0..4)
            .min_by(|&i, &j| (x - self.curve.roots[i]).norm().partial_cmp(&(x - self.curve.roots[j]).norm()).unwrap())
            .unwrap();
        let b0 = self.curve.roots[i];
        let delta = x - b0;
        let t = self.curve.taylor(b0);
        // x(s) = b0 + delta s^2, y/s = sqrt(sum_k t_k delta^k s^{2k-2})
        let y_over_s = |s: f64| (1..5).map(|k| t[k] * delta.powu(k as u32) * s.powi(2 * k as i32 - 2)).sum::<C>();
        let (gx, gw) = gauss_legendre(16);
        let panels = 8;
        let mut prev = y;
        let mut total = C::new(0.0, 0.0);
        for p in (0..panels).rev() {
            let (lo, hi) = (p as f64 / panels as f64, (p + 1) as f64 / panels as f64);
            for k in (0..gx.len()).rev() {
                let s = lo + (hi - lo) * 0.5 * (gx[k] + 1.0);
                let r = y_over_s(s).sqrt();
                let r = if (r - prev).norm() <= (-r - prev).norm() { r } else { -r };
                prev = r;
                total += delta * 2.0 / (self.periods.a * r) * gw[k] * 0.5 * (hi - lo);
            }
        }
        self.branch_u[i] + total
    }

    /// Coefficient of `du_p du_q`.
    pub fn in_u(&self, up: C, uq: C) -> C {
        self.torus.p(up - uq) + self.constant
    }

    /// Coefficient of `dx_p dx_q`.
    pub fn kernel(&self, xp: C, yp: C, xq: C, yq: C) -> C {
        let a = self.periods.a;
        self.in_u(self.abel(xp, yp), self.abel(xq, yq)) / (a * a * yp * yq)
    }

    /// `\oint B(., q)` over a loop, in units of `du_q`.
    pub fn loop_period(&self, lp: &super::Loop, ys: &[C], orientation: f64, uq: C) -> C {
        let a = self.periods.a;
        let g: Vec<C> = ys.iter().map(|y| (a * y).inv()).collect();
        let u0 = self.abel(lp.x[0], ys[0]);
        let u = lp.antiderivative(&g);
        let s: C = (0..ys.len()).map(|j| self.in_u(u0 + u[j], uq) * g[j] * lp.dx[j]).sum();
        s * orientation
    }
}

#[cfg(test)]
mod tests {
    use super::super::{Family, LOOP_NODES, LOOP_RADIUS};
    use super::*;

    #[test]
    fn p_has_unit_double_pole_and_lattice_periodicity() {
        let t = Torus::new(C::new(0.3, 1.1)).unwrap();
        let e = C::new(1e-5, 2e-5);
        assert!((t.p(e) * e * e - 1.0).norm() < 1e-7);
        let u = C::new(0.17, 0.23);
        assert!((t.p(u) - t.p(u + 1.0)).norm() < 1e-10);
        assert!((t.p(u) - t.p(u + t.tau)).norm() < 1e-10);
        assert!((t.p(u) - t.p(-u)).norm() < 1e-10);
    }

    #[test]
    fn branch_points_map_to_half_periods() {
        let f = Family::standard();
        let k = BergmanKernel::new(&f.base, &f.cycles).unwrap();
        for u in k.branch_u {
            let (a, b) = k.torus.coordinates(u * 2.0);
            assert!((a - a.round()).abs() < 1e-10 && (b - b.round()).abs() < 1e-10, "{u}");
        }
        let distinct: std::collections::BTreeSet<(i64, i64)> = k
            .branch_u
            .iter()
            .map(|u| {
                let (a, b) = k.torus.coordinates(*u * 2.0);
                ((a.round() as i64).rem_euclid(2), (b.round() as i64).rem_euclid(2))
            })
            .collect();
        assert_eq!(distinct.len(), 4);
    }

    #[test]
    fn abel_map_differentiates_to_omega() {
        let c = QuarticCurve::family([4.0, 0.3, -5.0, 0.1, 1.0]).unwrap();
        let cs = CycleSet::for_curve(&c, LOOP_RADIUS, LOOP_NODES).unwrap();
        let k = BergmanKernel::new(&c, &cs).unwrap();
        let x = C::new(0.2, 0.9);
        let y = c.y(x);
        let h = 1e-4;
        let xp = x + h;
        let up = k.abel(xp, c.y_near(xp, y));
        let um = k.abel(x - h, c.y_near(x - h, y));
        let d = (up - um) / (2.0 * h);
        let want = (k.periods.a * y).inv();
        assert!((d - want).norm() < 1e-7 * want.norm(), "{d} {want}");
    }

    #[test]
    fn kernel_is_normalized_and_symmetric() {
        let c = QuarticCurve::family([4.0, 0.3, -5.0, 0.1, 1.0]).unwrap();
        let cs = CycleSet::for_curve(&c, LOOP_RADIUS, LOOP_NODES).unwrap();
        let k = BergmanKernel::new(&c, &cs).unwrap();
        let (xp, xq) = (C::new(0.3, 0.8), C::new(-0.5, 1.1));
        let (yp, yq) = (c.y(xp), c.y(xq));
        let b1 = k.kernel(xp, yp, xq, yq);
        let b2 = k.kernel(xq, yq, xp, yp);
        assert!((b1 - b2).norm() < 1e-10 * b1.norm());
        let uq = k.abel(xq, yq);
        let a = k.loop_period(&cs.a, &cs.ya, 1.0, uq);
        assert!(a.norm() < 1e-8, "{a}");
        let b = k.loop_period(&cs.b, &cs.yb, cs.b_sign, uq);
        assert!((b - C::new(0.0, 2.0 * PI)).norm() < 1e-8, "{b}");
    }
}
