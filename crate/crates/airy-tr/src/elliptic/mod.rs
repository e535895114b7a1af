//! Floating-point checks on the genus-one family `y^2 = q(x) - t`.
//!
//! Conventions: branch points are ordered `b0..b3`, the global branch of
//! `y` has cuts `[b0,b1]` and `[b2,b3]` and behaves like `sqrt(c4) x^2` at
//! infinity. The a-cycle encircles `[b2,b3]`, the b-cycle encircles `b1`
//! and `b2`, oriented so that `Im tau > 0`; then `\oint_b B = 2 pi i omega`
//! and `\hat b` periods are `\oint_b / (2 pi i)`, so `\oint_{\hat b} B =
//! omega`. Deformations are compared at equal `x`: `theta = (y_t - y_0) dx`
//! and `z = \oint_a theta`, so `dz/dt = -A/2`.

pub mod bergman;
pub mod checks;
pub mod series;

use crate::error::{Error, Result};
pub use num_complex::Complex64 as C;
use serde::Serialize;

pub use bergman::{BergmanKernel, Torus};
pub use checks::{
    dm_cubic_by_finite_difference, dm_cubic_by_residue, rauch_check, relation_check_relat, theta_series_check, DmFiniteDifference,
    DmResidue, RauchReport, RelatPoint, RelatReport, ThetaSeriesReport,
};

pub(crate) fn cx(z: C) -> [f64; 2] {
    [z.re, z.im]
}

/// Roots of `sum c_k x^k` (Durand-Kerner, then Newton polish).
pub fn poly_roots(coeffs: &[C]) -> Result<Vec<C>> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    if lead.norm() == 0.0 {
        return Err(Error::Degenerate("leading coefficient vanishes".into()));
    }
    let a: Vec<C> = coeffs.iter().map(|c| c / lead).collect();
    let eval = |x: C| a.iter().rev().fold(C::new(0.0, 0.0), |acc, c| acc * x + c);
    let deval = |x: C| {
        (1..=n)
            .rev()
            .fold(C::new(0.0, 0.0), |acc, k| acc * x + a[k] * k as f64)
    };
    let radius = 1.0 + a[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = C::new(0.4, 0.9);
    let mut z: Vec<C> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..1000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = C::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    for r in z.iter_mut() {
        for _ in 0..3 {
            let d = deval(*r);
            if d.norm() > 0.0 {
                *r -= eval(*r) / d;
            }
        }
    }
    Ok(z)
}

/// `y^2 = c0 + c1 x + ... + c4 x^4` with ordered branch points.
#[derive(Clone, Debug, PartialEq)]
pub struct QuarticCurve {
    pub coeffs: [C; 5],
    pub roots: [C; 4],
}

fn pair_sqrt(x: C, b1: C, b2: C) -> C {
    let m = (b1 + b2) * 0.5;
    let d = (b2 - b1) * 0.5;
    let w = x - m;
    w * (C::new(1.0, 0.0) - d * d / (w * w)).sqrt()
}

impl QuarticCurve {
    /// Branch points sorted by real, then imaginary part.
    pub fn new(coeffs: [C; 5]) -> Result<Self> {
        let mut r = poly_roots(&coeffs)?;
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        Self::checked(coeffs, [r[0], r[1], r[2], r[3]])
    }

    /// Branch points matched to `reference` by proximity.
    pub fn with_reference(coeffs: [C; 5], reference: &[C; 4]) -> Result<Self> {
        let mut r = poly_roots(&coeffs)?;
        let mut out = [C::new(0.0, 0.0); 4];
        for (i, rf) in reference.iter().enumerate() {
            let (k, _) = r
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1 - rf).norm().partial_cmp(&(b.1 - rf).norm()).unwrap())
                .unwrap();
            out[i] = r.remove(k);
        }
        Self::checked(coeffs, out)
    }

    fn checked(coeffs: [C; 5], roots: [C; 4]) -> Result<Self> {
        let c = QuarticCurve { coeffs, roots };
        let scale = c.scale();
        for i in 0..4 {
            for j in i + 1..4 {
                if (roots[i] - roots[j]).norm() <= 1e-8 * scale.max(1e-300) {
                    return Err(Error::Degenerate(format!("branch points {i} and {j} collide")));
                }
            }
        }
        Ok(c)
    }

    /// The family curve `y^2 = q_0(x) - t` used in the finite-difference
    /// stencils.
    pub fn family(c: [f64; 5]) -> Result<Self> {
        Self::new(c.map(|v| C::new(v, 0.0)))
    }

    pub fn shifted(&self, t: C) -> Result<Self> {
        let mut c = self.coeffs;
        c[0] -= t;
        Self::with_reference(c, &self.roots)
    }

    /// `x -> lam x`, `y -> mu y`.
    pub fn rescaled(&self, lam: C, mu: C) -> Result<Self> {
        let mut c = self.coeffs;
        for (k, v) in c.iter_mut().enumerate() {
            *v *= mu * mu / lam.powu(k as u32);
        }
        Self::with_reference(c, &self.roots.map(|r| r * lam))
    }

    pub fn scale(&self) -> f64 {
        let mut s = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                s = s.max((self.roots[i] - self.roots[j]).norm());
            }
        }
        s
    }

    pub fn q(&self, x: C) -> C {
        self.coeffs.iter().rev().fold(C::new(0.0, 0.0), |acc, c| acc * x + c)
    }

    pub fn dq(&self, x: C) -> C {
        (1..5).rev().fold(C::new(0.0, 0.0), |acc, k| acc * x + self.coeffs[k] * k as f64)
    }

    /// Taylor coefficients of `q` at `x0`.
    pub fn taylor(&self, x0: C) -> [C; 5] {
        let mut out = [C::new(0.0, 0.0); 5];
        let binom = |n: usize, k: usize| (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64);
        for (n, cn) in self.coeffs.iter().enumerate() {
            for (k, o) in out.iter_mut().enumerate().take(n + 1) {
                *o += cn * binom(n, k) * x0.powu((n - k) as u32);
            }
        }
        out
    }

    /// Global branch of `y`, cut along `[b0,b1]` and `[b2,b3]`.
    pub fn y(&self, x: C) -> C {
        self.coeffs[4].sqrt() * pair_sqrt(x, self.roots[0], self.roots[1]) * pair_sqrt(x, self.roots[2], self.roots[3])
    }

    /// The root of `q` with `y` nearest to `near`.
    pub fn y_near(&self, x: C, near: C) -> C {
        let s = self.q(x).sqrt();
        if (s - near).norm() <= (-s - near).norm() {
            s
        } else {
            -s
        }
    }
}

/// Closed loop `x(phi) = m + d (w + 1/w)/2`, `w = R e^{i phi}`, around the
/// segment between two branch points; trapezoid weights `dx`.
#[derive(Clone, Debug)]
pub struct Loop {
    pub x: Vec<C>,
    pub dx: Vec<C>,
}

impl Loop {
    pub fn around(b1: C, b2: C, radius: f64, n: usize) -> Self {
        let m = (b1 + b2) * 0.5;
        let d = (b2 - b1) * 0.5;
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let mut x = Vec::with_capacity(n);
        let mut dx = Vec::with_capacity(n);
        for j in 0..n {
            // offset start keeps the first node off the real line
            let phi = (j as f64 + 0.25) * h;
            let w = C::from_polar(radius, phi);
            x.push(m + d * (w + w.inv()) * 0.5);
            dx.push(d * (w - w.inv()) * 0.5 * C::i() * h);
        }
        Loop { x, dx }
    }

    /// `y` continued along the loop from `seed` at the first node.
    pub fn continued(&self, curve: &QuarticCurve, seed: C) -> Vec<C> {
        let mut out = Vec::with_capacity(self.x.len());
        let mut prev = seed;
        for &x in &self.x {
            let y = curve.y_near(x, prev);
            out.push(y);
            prev = y;
        }
        out
    }

    /// `\oint f(x, y) dx` with `y` the given values on the nodes.
    pub fn integrate(&self, ys: &[C], f: impl Fn(C, C) -> C) -> C {
        self.x.iter().zip(&self.dx).zip(ys).map(|((&x, &w), &y)| f(x, y) * w).sum()
    }

    /// Periodic antiderivative of `g dx` along the loop, zero at node 0
    /// (spectral, so the values inherit the trapezoid accuracy).
    pub fn antiderivative(&self, g: &[C]) -> Vec<C> {
        let n = self.x.len();
        let h = 2.0 * std::f64::consts::PI / n as f64;
        // f(phi) = g dx/dphi
        let f: Vec<C> = g.iter().zip(&self.dx).map(|(g, w)| g * w / h).collect();
        let phi: Vec<f64> = (0..n).map(|j| (j as f64 + 0.25) * h).collect();
        let mean: C = f.iter().sum::<C>() / n as f64;
        let mut out = vec![C::new(0.0, 0.0); n];
        let kmax = (n / 2) as i64 - 1;
        for k in (-kmax..=kmax).filter(|&k| k != 0) {
            let ck: C = f
                .iter()
                .zip(&phi)
                .map(|(v, p)| v * C::from_polar(1.0, -(k as f64) * p))
                .sum::<C>()
                / n as f64;
            let coef = ck / (C::i() * k as f64);
            for j in 0..n {
                out[j] += coef * (C::from_polar(1.0, k as f64 * phi[j]) - C::from_polar(1.0, k as f64 * phi[0]));
            }
        }
        for j in 0..n {
            out[j] += mean * (phi[j] - phi[0]);
        }
        out
    }

    pub fn min_distance(&self, pts: &[C]) -> f64 {
        self.x
            .iter()
            .flat_map(|x| pts.iter().map(move |p| (x - p).norm()))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Fixed cycle representatives for a family, with `y` on the base curve.
#[derive(Clone, Debug)]
pub struct CycleSet {
    pub a: Loop,
    pub b: Loop,
    pub ya: Vec<C>,
    pub yb: Vec<C>,
    /// Orientation of the b-loop giving `Im tau > 0`.
    pub b_sign: f64,
    pub guard: f64,
    /// Base distances from each loop to the branch points it encloses.
    pub inner: [f64; 2],
}

impl CycleSet {
    pub fn for_curve(curve: &QuarticCurve, radius: f64, n: usize) -> Result<Self> {
        let r = curve.roots;
        let a = Loop::around(r[2], r[3], radius, n);
        let b = Loop::around(r[1], r[2], radius, n);
        let guard = 0.05 * curve.scale();
        if a.min_distance(&[r[0], r[1]]) < guard || b.min_distance(&[r[0], r[3]]) < guard {
            return Err(Error::Degenerate("cycle representative passes too close to a branch point".into()));
        }
        let ya = a.continued(curve, curve.y(a.x[0]));
        let yb = b.continued(curve, curve.y(b.x[0]));
        let mut cs = CycleSet {
            a,
            b,
            ya,
            yb,
            b_sign: 1.0,
            guard,
            inner: [0.0; 2],
        };
        cs.inner = [cs.a.min_distance(&[r[2], r[3]]), cs.b.min_distance(&[r[1], r[2]])];
        let p = cs.periods(curve)?;
        if p.tau.im < 0.0 {
            cs.b_sign = -1.0;
        }
        Ok(cs)
    }

    /// `y` of `curve` on both loops, continued from the base values.
    pub fn ys(&self, curve: &QuarticCurve) -> Result<(Vec<C>, Vec<C>)> {
        let r = curve.roots;
        if self.a.min_distance(&[r[0], r[1]]) < self.guard
            || self.b.min_distance(&[r[0], r[3]]) < self.guard
            || self.a.min_distance(&[r[2], r[3]]) < 0.5 * self.inner[0]
            || self.b.min_distance(&[r[1], r[2]]) < 0.5 * self.inner[1]
        {
            return Err(Error::Degenerate("stencil curve has a branch point near a cycle".into()));
        }
        Ok((self.a.continued(curve, self.ya[0]), self.b.continued(curve, self.yb[0])))
    }

    pub fn periods(&self, curve: &QuarticCurve) -> Result<PeriodData> {
        let (ya, yb) = self.ys(curve)?;
        let a = self.a.integrate(&ya, |_, y| y.inv());
        let b = self.b.integrate(&yb, |_, y| y.inv()) * self.b_sign;
        if a.norm() == 0.0 {
            return Err(Error::Degenerate("vanishing a-period".into()));
        }
        // the same a-period on every other node as a convergence probe
        let half: C = self.a.dx.iter().zip(&ya).step_by(2).map(|(w, y)| w / y).sum::<C>() * 2.0;
        Ok(PeriodData {
            a,
            b,
            tau: b / a,
            a_period_of_normalized: half / a,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodData {
    /// `\oint_a dx/y`.
    pub a: C,
    /// `\oint_b dx/y`.
    pub b: C,
    pub tau: C,
    /// `\oint_a dx/(A y)` re-integrated with half the nodes.
    pub a_period_of_normalized: C,
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodReport {
    pub a: [f64; 2],
    pub b: [f64; 2],
    pub tau: [f64; 2],
    pub a_period_residual: f64,
}

impl PeriodData {
    pub fn report(&self) -> PeriodReport {
        PeriodReport {
            a: cx(self.a),
            b: cx(self.b),
            tau: cx(self.tau),
            a_period_residual: (self.a_period_of_normalized - 1.0).norm(),
        }
    }
}

/// One-parameter family `q_t = q - t` with fixed cycles.
#[derive(Clone, Debug)]
pub struct Family {
    pub base: QuarticCurve,
    pub cycles: CycleSet,
    /// Finite-difference step, default `1e-3 * scale`.
    pub step: f64,
}

pub const LOOP_RADIUS: f64 = 2.0;
pub const LOOP_NODES: usize = 256;

impl Family {
    pub fn new(base: QuarticCurve) -> Result<Self> {
        let cycles = CycleSet::for_curve(&base, LOOP_RADIUS, LOOP_NODES)?;
        let step = 1e-3 * base.scale();
        Ok(Family { base, cycles, step })
    }

    /// The test family `y^2 = x^4 - 5x^2 + 4 - t`.
    pub fn standard() -> Self {
        Family::new(QuarticCurve::family([4.0, 0.0, -5.0, 0.0, 1.0]).unwrap()).unwrap()
    }

    pub fn curve(&self, t: C) -> Result<QuarticCurve> {
        self.base.shifted(t)
    }

    pub fn periods(&self, t: C) -> Result<PeriodData> {
        let p = self.cycles.periods(&self.curve(t)?)?;
        if p.tau.im <= 0.0 {
            return Err(Error::Numeric(format!("Im tau <= 0 at t = {t}")));
        }
        Ok(p)
    }

    /// `z(t) = \oint_a (y_t - y_0) dx` and `w(t) = \oint_b (y_t - y_0) dx`.
    pub fn theta_periods(&self, t: C) -> Result<(C, C)> {
        let (ya, yb) = self.cycles.ys(&self.curve(t)?)?;
        let z: C = self.cycles.a.dx.iter().zip(&self.cycles.ya).zip(&ya).map(|((w, y0), yt)| (yt - y0) * w).sum();
        let w: C = self.cycles.b.dx.iter().zip(&self.cycles.yb).zip(&yb).map(|((w, y0), yt)| (yt - y0) * w).sum::<C>() * self.cycles.b_sign;
        Ok((z, w))
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}
