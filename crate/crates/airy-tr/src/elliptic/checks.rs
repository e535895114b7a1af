//! Period-variation checks: the cubic `d tau/dz` by residues and by finite
//! differences, the quadratic relation at the branch points, the Taylor
//! model of the b-period of `theta`, and the Rauch variation of `B`.

use super::series::BranchExpansion;
use super::{cx, gauss_legendre, BergmanKernel, CycleSet, Family, PeriodData, QuarticCurve, C};
use crate::error::Result;
use serde::Serialize;
use std::f64::consts::PI;

fn two_pi_i() -> C {
    C::new(0.0, 2.0 * PI)
}

fn rel(a: C, b: C) -> f64 {
    (a - b).norm() / b.norm().max(a.norm()).max(1e-300)
}

const SERIES_ORDER: usize = 12;

#[derive(Clone, Debug, Serialize)]
pub struct DmResidue {
    pub value: [f64; 2],
    /// Residue of `omega^3/(dx dy)` at each branch point.
    pub per_point: Vec<[f64; 2]>,
    /// Same sum from the bilinear relation, `Res F dx/y^3` with `F = \int dx/y`.
    pub bilinear: [f64; 2],
    /// With four more series orders.
    pub refined: [f64; 2],
    /// `-2 pi i sum 4/(q'(b)^2 A^3)`.
    pub closed_form: [f64; 2],
    pub route_residual: f64,
    pub refinement_shift: f64,
    #[serde(skip)]
    pub c: C,
}

/// `d tau/dz = -2 pi i \oint_{\hat b}^3 omega_{0,3}`, which is
/// `-2 pi i sum_alpha Res omega^3/(dx dy)` since `\oint_{\hat b} B = omega`.
pub fn dm_cubic_by_residue(curve: &QuarticCurve, periods: &PeriodData) -> DmResidue {
    let a3 = periods.a.powu(3);
    let sum_with = |order: usize, f: fn(&BranchExpansion) -> C| -> (C, Vec<C>) {
        let per: Vec<C> = curve.roots.iter().map(|&b| f(&BranchExpansion::new(curve, b, order)) / a3).collect();
        (per.iter().sum(), per)
    };
    let (s, per) = sum_with(SERIES_ORDER, BranchExpansion::res_cubic);
    let (sb, _) = sum_with(SERIES_ORDER, BranchExpansion::res_bilinear);
    let (sr, _) = sum_with(SERIES_ORDER + 4, BranchExpansion::res_cubic);
    let closed: C = curve.roots.iter().map(|&b| curve.dq(b).powu(2).inv() * 4.0 / a3).sum();
    let c = -two_pi_i() * s;
    DmResidue {
        value: cx(c),
        per_point: per.iter().map(|&v| cx(v)).collect(),
        bilinear: cx(-two_pi_i() * sb),
        refined: cx(-two_pi_i() * sr),
        closed_form: cx(-two_pi_i() * closed),
        route_residual: rel(sb, s).max(rel(closed, s)),
        refinement_shift: rel(sr, s),
        c,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DmFiniteDifference {
    pub value: [f64; 2],
    pub step: f64,
    pub dtau_dt: [f64; 2],
    /// `-A/2`.
    pub dz_dt: [f64; 2],
    /// `dz/dt` from differencing `\oint_a theta`.
    pub dz_dt_numeric: [f64; 2],
    /// Same quotient at half the step.
    pub half_step: [f64; 2],
    pub step_shift: f64,
    #[serde(skip)]
    pub c: C,
}

fn stencil(f: impl Fn(f64) -> Result<C>, h: f64) -> Result<C> {
    Ok((f(-2.0 * h)? - f(2.0 * h)? + (f(h)? - f(-h)?) * 8.0) / (12.0 * h))
}

/// `(d tau/dt)/(dz/dt)` with a five-point central stencil in `t`.
pub fn dm_cubic_by_finite_difference(family: &Family, h: f64) -> Result<DmFiniteDifference> {
    let tau = |t: f64| family.periods(C::new(t, 0.0)).map(|p| p.tau);
    let a = family.periods(C::new(0.0, 0.0))?.a;
    let dz = -a * 0.5;
    let dtau = stencil(tau, h)?;
    let dtau_half = stencil(tau, h / 2.0)?;
    let dz_num = stencil(|t| family.theta_periods(C::new(t, 0.0)).map(|p| p.0), h)?;
    let c = dtau / dz;
    Ok(DmFiniteDifference {
        value: cx(c),
        step: h,
        dtau_dt: cx(dtau),
        dz_dt: cx(dz),
        dz_dt_numeric: cx(dz_num),
        half_step: cx(dtau_half / dz),
        step_shift: rel(dtau_half, dtau),
        c,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RelatPoint {
    pub branch_point: [f64; 2],
    /// `Res omega^2/dx`.
    pub lhs: [f64; 2],
    /// `-Res y \oint_{\hat b}\oint_{\hat b} omega_{0,3}`.
    pub rhs: [f64; 2],
    pub residual: f64,
    /// `|lhs + rhs| / |lhs|`: the residual with the opposite overall sign.
    pub opposite_sign_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RelatReport {
    /// `\oint_{\hat b} B(., q) / omega(q)`, measured on the b-loop.
    pub kappa: [f64; 2],
    pub a_period_of_b: f64,
    pub points: Vec<RelatPoint>,
    pub max_residual: f64,
    pub max_opposite_sign_residual: f64,
}

/// `Res_alpha omega^2/dx = -Res_alpha y \oint_{\hat b}\oint_{\hat b}
/// omega_{0,3}` at each branch point. The double period is built from the
/// theta-function kernel with `\oint_{\hat b} B` measured numerically and
/// the residue on the right is a contour integral in the local coordinate.
pub fn relation_check_relat(curve: &QuarticCurve, cycles: &CycleSet) -> Result<RelatReport> {
    let k = BergmanKernel::new(curve, cycles)?;
    let a = k.periods.a;
    let center: C = curve.roots.iter().sum::<C>() / 4.0;
    let xq = center + C::new(0.0, 0.325 * curve.scale());
    let uq = k.abel(xq, curve.y(xq));
    let kappa = k.loop_period(&cycles.b, &cycles.yb, cycles.b_sign, uq) / two_pi_i();
    let a_period = k.loop_period(&cycles.a, &cycles.ya, 1.0, uq).norm();

    let exps: Vec<BranchExpansion> = curve.roots.iter().map(|&b| BranchExpansion::new(curve, b, 40)).collect();
    // simple-pole coefficient of omega^2/(dx dy) and du/ds at each point
    let g: Vec<C> = exps.iter().map(|e| e.res_quadratic() / (a * a)).collect();
    let du0: Vec<C> = exps.iter().map(|e| e.dx()[1] / a).collect();
    let psi = |u: C| -> C { (0..4).map(|b| g[b] * du0[b] * k.in_u(k.branch_u[b], u)).sum::<C>() * kappa * kappa };

    let mut points = Vec::new();
    for (i, e) in exps.iter().enumerate() {
        let dmin = (0..4).filter(|&j| j != i).map(|j| (curve.roots[j] - curve.roots[i]).norm()).fold(f64::INFINITY, f64::min);
        let rho = 0.25 * (curve.dq(curve.roots[i]).norm() * dmin).sqrt();
        let d = e.dx();
        let m = 128;
        let mut res = C::new(0.0, 0.0);
        for j in 0..m {
            let s = C::from_polar(rho, 2.0 * PI * j as f64 / m as f64);
            let du: C = d.iter().enumerate().map(|(n, c)| c * s.powi(n as i32 - 1)).sum::<C>() / a;
            let u: C = k.branch_u[i] + d.iter().enumerate().skip(1).map(|(n, c)| c * s.powu(n as u32) / n as f64).sum::<C>() / a;
            // (1/2 pi i) \oint y psi(u) du, with y = s
            res += s * psi(u) * du * s / m as f64;
        }
        let lhs = g[i];
        let rhs = -res;
        points.push(RelatPoint {
            branch_point: cx(curve.roots[i]),
            lhs: cx(lhs),
            rhs: cx(rhs),
            residual: (lhs - rhs).norm() / lhs.norm(),
            opposite_sign_residual: (lhs + rhs).norm() / lhs.norm(),
        });
    }
    Ok(RelatReport {
        kappa: cx(kappa),
        a_period_of_b: a_period,
        max_residual: points.iter().map(|p| p.residual).fold(0.0, f64::max),
        max_opposite_sign_residual: points.iter().map(|p| p.opposite_sign_residual).fold(0.0, f64::max),
        points,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaSeriesReport {
    pub t: Vec<f64>,
    pub z: Vec<[f64; 2]>,
    /// `|\oint_a theta + \int_0^t A/2|` relative to `|z|`.
    pub z_residual: f64,
    /// `|\oint_b theta - tau z - c z^2/2|`.
    pub taylor_residuals: Vec<f64>,
    /// `log2` of successive residual ratios; three for cubic decay.
    pub observed_orders: Vec<f64>,
    /// `d^2 F_0/dz^2` at the base point from `F_0 = \int \oint_b theta dz`.
    pub prepotential_second_derivative: [f64; 2],
    pub tau: [f64; 2],
    pub prepotential_residual: f64,
    /// `|d^3 F_0/dz^3 - c|/|c|` from the same samples.
    pub prepotential_third_residual: f64,
}

impl ThetaSeriesReport {
    pub fn orders_ok(&self) -> bool {
        self.observed_orders.iter().all(|o| (2.5..=3.5).contains(o))
    }
}

/// `\oint_b theta` against `z tau + z^2 c/2` on `t0, t0/2, t0/4, t0/8`.
pub fn theta_series_check(family: &Family, t0: f64) -> Result<ThetaSeriesReport> {
    let base = family.periods(C::new(0.0, 0.0))?;
    let c = dm_cubic_by_residue(&family.base, &base).c;
    let (gx, gw) = gauss_legendre(16);
    // \int_0^t g(t') dt' along the straight segment
    let integrate = |t: C, g: &dyn Fn(C) -> Result<C>| -> Result<C> {
        let mut s = C::new(0.0, 0.0);
        for (x, w) in gx.iter().zip(&gw) {
            s += g(t * (0.5 * (x + 1.0)))? * (w * 0.5);
        }
        Ok(s * t)
    };
    let dz_dt = |t: C| family.periods(t).map(|p| -p.a * 0.5);

    let mut ts = Vec::new();
    let mut zs = Vec::new();
    let mut z_residual = 0.0f64;
    let mut taylor = Vec::new();
    for k in 0..4 {
        let t = t0 / f64::powi(2.0, k);
        let (z, w) = family.theta_periods(C::new(t, 0.0))?;
        let z_int = integrate(C::new(t, 0.0), &dz_dt)?;
        z_residual = z_residual.max((z - z_int).norm() / z.norm());
        taylor.push((w - base.tau * z - c * z * z * 0.5).norm());
        ts.push(t);
        zs.push(cx(z));
    }
    let observed_orders = taylor.windows(2).map(|r| (r[0] / r[1]).log2()).collect();

    // F_0 on z_k = k hz, k = -2..2, with dF_0/dz = \oint_b theta
    let hz = -base.a * 0.5 * (t0 / 8.0);
    let mut f = Vec::new();
    for k in -2i32..=2 {
        let target = hz * k as f64;
        let mut t = C::new(t0 / 8.0 * k as f64, 0.0);
        for _ in 0..30 {
            let z = family.theta_periods(t)?.0;
            let step = (z - target) / dz_dt(t)?;
            t -= step;
            if step.norm() < 1e-15 * t0 {
                break;
            }
        }
        let wdz = |s: C| -> Result<C> { Ok(family.theta_periods(s)?.1 * dz_dt(s)?) };
        f.push(if k == 0 { C::new(0.0, 0.0) } else { integrate(t, &wdz)? });
    }
    let second = (-f[4] + f[3] * 16.0 - f[2] * 30.0 + f[1] * 16.0 - f[0]) / (hz * hz * 12.0);
    let third = (f[4] - f[3] * 2.0 + f[1] * 2.0 - f[0]) / (hz * hz * hz * 2.0);
    Ok(ThetaSeriesReport {
        t: ts,
        z: zs,
        z_residual,
        taylor_residuals: taylor,
        observed_orders,
        prepotential_second_derivative: cx(second),
        tau: cx(base.tau),
        prepotential_residual: (second - base.tau).norm() / base.tau.norm(),
        prepotential_third_residual: (third - c).norm() / c.norm(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RauchReport {
    pub p: [f64; 2],
    pub q: [f64; 2],
    /// `dB(p,q)/dz` at fixed `x(p), x(q)`, coefficient of `dx_p dx_q`.
    pub finite_difference: [f64; 2],
    /// `-sum_alpha Res omega B(.,p) B(.,q)/(dx dy)`.
    pub residue: [f64; 2],
    pub residual: f64,
    pub symmetry_residual: f64,
    pub a_period_residual: f64,
    /// `\oint_b B(., q)/(2 pi i omega(q))`.
    pub b_period_ratio: [f64; 2],
    pub double_pole_residual: f64,
}

/// Rauch variation at fixed `x` against the residue formula.
pub fn rauch_check(family: &Family, xp: C, xq: C, h: f64) -> Result<RauchReport> {
    let base = &family.base;
    let k0 = BergmanKernel::new(base, &family.cycles)?;
    let (yp, yq) = (base.y(xp), base.y(xq));
    let b_at = |t: f64| -> Result<C> {
        let c = family.curve(C::new(t, 0.0))?;
        let k = BergmanKernel::new(&c, &family.cycles)?;
        Ok(k.kernel(xp, c.y_near(xp, yp), xq, c.y_near(xq, yq)))
    };
    let a = k0.periods.a;
    let fd = stencil(b_at, h)? / (-a * 0.5);

    let (up, uq) = (k0.abel(xp, yp), k0.abel(xq, yq));
    let mut res = C::new(0.0, 0.0);
    for (i, &b) in base.roots.iter().enumerate() {
        let c2 = base.dq(b).inv();
        res += c2 * c2 * 4.0 / a.powu(3) * k0.in_u(k0.branch_u[i], up) * k0.in_u(k0.branch_u[i], uq);
    }
    let residue = -res / (a * a * yp * yq);

    let b_pq = k0.kernel(xp, yp, xq, yq);
    let b_qp = k0.kernel(xq, yq, xp, yp);
    let eps = C::new(1e-4, 0.0) * base.scale();
    let near = k0.kernel(xp, yp, xp + eps, base.y_near(xp + eps, yp)) * eps * eps;
    Ok(RauchReport {
        p: cx(xp),
        q: cx(xq),
        finite_difference: cx(fd),
        residue: cx(residue),
        residual: rel(fd, residue),
        symmetry_residual: rel(b_pq, b_qp),
        a_period_residual: k0.loop_period(&family.cycles.a, &family.cycles.ya, 1.0, uq).norm() / k0.constant.norm().max(1.0),
        b_period_ratio: cx(k0.loop_period(&family.cycles.b, &family.cycles.yb, family.cycles.b_sign, uq) / two_pi_i()),
        double_pole_residual: (near - 1.0).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn generic() -> Family {
        Family::new(QuarticCurve::family([4.0, 0.3, -5.0, 0.1, 1.0]).unwrap()).unwrap()
    }

    #[test]
    fn residue_routes_agree() {
        for f in [Family::standard(), generic()] {
            let p = f.periods(C::new(0.0, 0.0)).unwrap();
            let r = dm_cubic_by_residue(&f.base, &p);
            assert!(r.route_residual < 1e-12, "{r:?}");
            assert!(r.refinement_shift < 1e-14);
        }
    }

    #[test]
    fn residue_matches_finite_difference() {
        for f in [Family::standard(), generic()] {
            let p = f.periods(C::new(0.0, 0.0)).unwrap();
            let r = dm_cubic_by_residue(&f.base, &p);
            let d = dm_cubic_by_finite_difference(&f, f.step).unwrap();
            assert!(rel(d.c, r.c) < 1e-6, "{} {}", d.c, r.c);
            assert!(rel(C::new(d.dz_dt_numeric[0], d.dz_dt_numeric[1]), -p.a * 0.5) < 1e-9);
        }
    }

    #[test]
    fn residue_is_independent_of_branch_point_order() {
        let f = generic();
        let p = f.periods(C::new(0.0, 0.0)).unwrap();
        let mut c = f.base.clone();
        c.roots.reverse();
        let a = dm_cubic_by_residue(&f.base, &p).c;
        let b = dm_cubic_by_residue(&c, &p).c;
        assert!(rel(a, b) < 1e-14);
    }

    #[test]
    fn cubic_scales_inversely_with_z() {
        let f = generic();
        let (lam, mu) = (C::new(1.3, 0.2), C::new(0.7, -0.4));
        let c0 = dm_cubic_by_residue(&f.base, &f.periods(C::new(0.0, 0.0)).unwrap()).c;
        let s = Family::new(f.base.rescaled(lam, mu).unwrap()).unwrap();
        let c1 = dm_cubic_by_residue(&s.base, &s.periods(C::new(0.0, 0.0)).unwrap()).c;
        // z -> lam mu z, tau unchanged
        assert!(rel(c1 * lam * mu, c0) < 1e-10, "{c0} {}", c1 * lam * mu);
    }

    #[test]
    fn relat_holds_up_to_overall_sign() {
        let f = generic();
        let r = relation_check_relat(&f.base, &f.cycles).unwrap();
        assert!((C::new(r.kappa[0], r.kappa[1]) - 1.0).norm() < 1e-8, "{r:?}");
        assert!(r.a_period_of_b < 1e-8);
        assert!(r.max_opposite_sign_residual < 1e-8, "{r:?}");
        assert!((r.max_residual - 2.0).abs() < 1e-8);
    }

    #[test]
    fn theta_series_orders() {
        let r = theta_series_check(&Family::standard(), 0.2).unwrap();
        assert!(r.z_residual < 1e-10, "{r:?}");
        assert!(r.orders_ok(), "{r:?}");
        assert!(r.prepotential_residual < 1e-6, "{r:?}");
    }

    #[test]
    fn rauch_variation() {
        let f = generic();
        let r = rauch_check(&f, C::new(0.3, 0.8), C::new(-0.5, 1.1), f.step).unwrap();
        assert!(r.symmetry_residual < 1e-10, "{r:?}");
        assert!(r.a_period_residual < 1e-8, "{r:?}");
        assert!(r.double_pole_residual < 1e-6, "{r:?}");
        assert!(r.residual < 1e-5, "{r:?}");
    }
}
