//! `family check`: every elliptic-family check with its residual and
//! tolerance in one JSON report.

use crate::elliptic::{
    dm_cubic_by_finite_difference, dm_cubic_by_residue, relation_check_relat, rauch_check, theta_series_check, DmFiniteDifference,
    DmResidue, Family, PeriodReport, QuarticCurve, RauchReport, RelatReport, ThetaSeriesReport, C,
};
use crate::error::{Error, Result};
use serde::Serialize;

/// Smallest tolerance the binary64 quadratures can honour.
pub const TOLERANCE_FLOOR: f64 = 1e-13;

pub const CHECK_NAMES: [&str; 5] = ["periods", "dm", "relat", "theta", "rauch"];

#[derive(Clone, Debug)]
pub struct FamilySpec {
    pub coeffs: [f64; 5],
    pub roots: Option<[C; 4]>,
    /// Relative to the curve scale.
    pub step: f64,
    pub tol: Option<f64>,
    pub skip: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub residual: f64,
    pub relative: bool,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyInfo {
    pub coeffs: Vec<[f64; 2]>,
    pub roots: Vec<[f64; 2]>,
    pub scale: f64,
    pub step: f64,
    pub deformation: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Details {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub periods: Option<PeriodReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dm_residue: Option<DmResidue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dm_finite_difference: Option<DmFiniteDifference>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub relat: Option<RelatReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<ThetaSeriesReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rauch: Option<RauchReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub family: FamilyInfo,
    pub checks: Vec<CheckLine>,
    pub skipped: Vec<String>,
    pub details: Details,
    pub pass: bool,
}

struct Lines {
    tol: Option<f64>,
    out: Vec<CheckLine>,
}

impl Lines {
    fn push(&mut self, name: &str, residual: f64, relative: bool, default_tol: f64) {
        let tolerance = self.tol.unwrap_or(default_tol);
        let mut note = None;
        let mut pass = residual.is_finite() && residual <= tolerance;
        if tolerance < TOLERANCE_FLOOR {
            pass = false;
            note = Some(format!(
                "requested tolerance {tolerance:e} is below the numeric floor {TOLERANCE_FLOOR:e} of binary64 quadrature"
            ));
        }
        self.out.push(CheckLine {
            name: name.into(),
            residual,
            relative,
            tolerance,
            pass,
            note,
        });
    }
}

fn rel(a: [f64; 2], b: [f64; 2]) -> f64 {
    let d = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
    d / (b[0].powi(2) + b[1].powi(2)).sqrt()
}

/// Sample point `center + scale * offset`, pushed away from branch points.
fn sample(curve: &QuarticCurve, offset: C) -> C {
    let center = curve.roots.iter().sum::<C>() / 4.0;
    let s = curve.scale();
    let mut off = offset;
    for _ in 0..8 {
        let x = center + off * s;
        if curve.roots.iter().all(|r| (x - r).norm() >= 0.05 * s) {
            return x;
        }
        off *= C::new(1.0, 0.0) + C::new(0.0, 0.25);
    }
    center + off * s
}

pub fn family_check(spec: &FamilySpec) -> Result<FamilyReport> {
    for s in &spec.skip {
        if !CHECK_NAMES.contains(&s.as_str()) {
            return Err(Error::Invalid(format!("unknown check `{s}` (known: {})", CHECK_NAMES.join(", "))));
        }
    }
    if !(spec.step > 0.0 && spec.step < 0.1) {
        return Err(Error::Invalid("step must lie in (0, 0.1)".into()));
    }
    if let Some(t) = spec.tol {
        if t.is_nan() || t <= 0.0 {
            return Err(Error::Invalid("tolerance must be positive".into()));
        }
    }
    let base = match spec.roots {
        Some(r) => {
            // constant-first coefficients of (x - r0)(x - r1)(x - r2)(x - r3)
            let mut c = [C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)];
            for root in r {
                for k in (1..5).rev() {
                    c[k] = c[k - 1] - root * c[k];
                }
                c[0] = -root * c[0];
            }
            QuarticCurve::with_reference(c, &r)?
        }
        None => QuarticCurve::family(spec.coeffs)?,
    };
    let mut family = Family::new(base)?;
    family.step = spec.step * family.base.scale();
    let skip = |n: &str| spec.skip.iter().any(|s| s == n);
    let mut lines = Lines { tol: spec.tol, out: Vec::new() };
    let mut details = Details::default();

    let periods = family.periods(C::new(0.0, 0.0))?;
    if !skip("periods") {
        let r = periods.report();
        lines.push("periods.a_normalization", r.a_period_residual, false, 1e-10);
        details.periods = Some(r);
    }
    if !skip("dm") {
        let res = dm_cubic_by_residue(&family.base, &periods);
        let fd = dm_cubic_by_finite_difference(&family, family.step)?;
        lines.push("dm.fd_vs_residue", rel(fd.value, res.value), true, 1e-6);
        lines.push("dm.residue_routes", res.route_residual, true, 1e-10);
        details.dm_residue = Some(res);
        details.dm_finite_difference = Some(fd);
    }
    if !skip("relat") {
        let r = relation_check_relat(&family.base, &family.cycles)?;
        lines.push("relat.per_point", r.max_residual, true, 1e-8);
        details.relat = Some(r);
    }
    if !skip("theta") {
        let r = theta_series_check(&family, 0.05 * family.base.scale())?;
        lines.push("theta.a_period_is_z", r.z_residual, true, 1e-10);
        let worst = r.observed_orders.iter().map(|o| (o - 3.0).abs()).fold(0.0, f64::max);
        // the order window is a shape test, not a precision; --tol leaves it alone
        let tol = lines.tol.take();
        lines.push("theta.cubic_remainder_order", worst, false, 0.5);
        lines.tol = tol;
        lines.push("theta.prepotential_second_derivative", r.prepotential_residual, true, 1e-6);
        details.theta = Some(r);
    }
    if !skip("rauch") {
        let p = sample(&family.base, C::new(0.075, 0.2));
        let q = sample(&family.base, C::new(-0.125, 0.275));
        let r = rauch_check(&family, p, q, family.step)?;
        lines.push("rauch.variation", r.residual, true, 1e-5);
        lines.push("rauch.kernel_symmetry", r.symmetry_residual, true, 1e-10);
        lines.push("rauch.kernel_a_period", r.a_period_residual, false, 1e-8);
        details.rauch = Some(r);
    }
    let pass = lines.out.iter().all(|l| l.pass);
    Ok(FamilyReport {
        family: FamilyInfo {
            coeffs: family.base.coeffs.iter().map(|c| [c.re, c.im]).collect(),
            roots: family.base.roots.iter().map(|r| [r.re, r.im]).collect(),
            scale: family.base.scale(),
            step: family.step,
            deformation: "additive: q_t = q - t".into(),
        },
        checks: lines.out,
        skipped: spec.skip.clone(),
        details,
        pass,
    })
}
