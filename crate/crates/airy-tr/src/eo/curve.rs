//! Local spectral curves: one chart `u = z^2` per branch point, the local
//! expansion of `v`, and the regular part `phi` of the Bergman kernel.

use super::bivar::Bivar;
use crate::algebra::rational_fn::RationalFn;
use crate::algebra::{rat_sqrt, ri, BiSeriesSym, EXACT, LaurentDifferential, Rat, TruncSeries};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use serde::Serialize;

/// Basis label `(chart, k)` for `e^{chart,k}`.
pub type Label = (usize, u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ChartKind {
    /// Odd part of `v` starts at `z`.
    Airy,
    /// Odd part of `v` starts at `1/z`.
    Bessel,
}

/// How a chart sits in a global rational curve `zeta`.
#[derive(Clone, Debug, PartialEq)]
pub struct GlobalChart {
    /// Critical point `zeta = center`.
    pub center: Rat,
    /// `zeta - center` as a series in `z`.
    pub zeta: TruncSeries,
    /// `u_chart = rescale * (u - u(center))`, `v_chart = v / rescale`.
    pub rescale: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointChart {
    pub name: String,
    pub v: TruncSeries,
    pub kind: ChartKind,
    pub global: Option<GlobalChart>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LocalSpectralCurve {
    pub points: Vec<PointChart>,
    /// `phi^{ab}_{kl}`, known for `k + l <= phi.order()` unless `phi_exact`.
    pub phi: BiSeriesSym,
    pub phi_exact: bool,
    pub order: i64,
}

/// Chart kind from the odd part of `v`.
pub fn classify(v: &TruncSeries, chart: usize) -> Result<ChartKind> {
    let (_, odd) = v.parity_split();
    match odd.valuation() {
        None => Err(Error::DegenerateDenominator(chart)),
        Some(1) => Ok(ChartKind::Airy),
        Some(-1) => Ok(ChartKind::Bessel),
        Some(e) => Err(Error::NonSimpleRamification(format!(
            "odd part of v starts at z^{e} in chart {chart}; need z^1 or z^-1"
        ))),
    }
}

impl LocalSpectralCurve {
    /// Charts given by their `v` expansions; kinds are inferred.
    pub fn from_charts(vs: Vec<(String, TruncSeries)>, phi: BiSeriesSym, phi_exact: bool, order: i64) -> Result<Self> {
        let mut points = Vec::new();
        for (i, (name, v)) in vs.into_iter().enumerate() {
            let kind = classify(&v, i)?;
            points.push(PointChart {
                name,
                v,
                kind,
                global: None,
            });
        }
        Ok(LocalSpectralCurve {
            points,
            phi,
            phi_exact,
            order,
        })
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    /// Coefficient of `dz` in the expansion of `e^{label}` in chart `at`:
    /// `delta z^{-k-1} + (1/k) sum_l phi^{at,a}_{l,k-1} z^l`.
    pub fn basis_series(&self, at: usize, label: Label) -> TruncSeries {
        let (a, k) = label;
        let km1 = k as i64 - 1;
        let order = if self.phi_exact {
            EXACT
        } else {
            self.phi.order() as i64 - km1
        };
        let top = if self.phi_exact { self.phi.order() as i64 } else { order };
        let low = -(k as i64) - 1;
        let mut terms = Vec::new();
        if at == a {
            terms.push((low, Rat::one()));
        }
        let inv_k = Rat::one() / ri(k as i64);
        for l in 0..=top.max(-1) {
            let p = self.phi.get(at, a, l as u32, km1 as u32);
            if !p.is_zero() {
                terms.push((l, p * &inv_k));
            }
        }
        TruncSeries::from_terms(&terms, order)
    }

    /// `e^{a,k}` expanded at every chart.
    pub fn basis_expansion(&self, a: usize, k: u32) -> Result<BasisDifferential> {
        if k == 0 || a >= self.points.len() {
            return Err(Error::Invalid(format!("no basis differential ({a},{k})")));
        }
        let expansions = (0..self.points.len())
            .map(|b| LaurentDifferential::from_dz(&self.basis_series(b, (a, k))))
            .collect::<Result<Vec<_>>>()?;
        Ok(BasisDifferential { label: (a, k), expansions })
    }

    /// `B(z, -z) / dz^2` in chart `a`.
    pub fn bergman_antidiagonal(&self, a: usize) -> TruncSeries {
        let t = self.phi.order() as i64;
        let order = if self.phi_exact { EXACT } else { t };
        let mut terms = vec![(-2, Rat::new((-1).into(), 4.into()))];
        for d in 0..=t {
            let mut acc = Rat::zero();
            for k in 0..=d {
                let l = d - k;
                let p = self.phi.get(a, a, k as u32, l as u32);
                if !p.is_zero() {
                    if l % 2 == 0 {
                        acc -= p;
                    } else {
                        acc += p;
                    }
                }
            }
            if !acc.is_zero() {
                terms.push((d, acc));
            }
        }
        TruncSeries::from_terms(&terms, order)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BasisDifferential {
    pub label: Label,
    /// One expansion per chart, in the `dz/z` convention.
    pub expansions: Vec<LaurentDifferential>,
}

/// Kernel data at one chart: `K(p1, p) = sum_k e^{a,k}(p1) kappa_k(z) / dz`
/// with `kappa_k = -z^k / ((v(z) - v(-z)) 2z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelData {
    pub chart: usize,
    /// `(v(z) - v(-z)) * 2z`, the coefficient of `dz` in `(v - sigma^* v) du`.
    pub denominator: TruncSeries,
    inv_den: TruncSeries,
}

impl KernelData {
    pub fn kappa(&self, k: u32) -> TruncSeries {
        self.inv_den.shift(k as i64).neg()
    }

    pub fn inverse_denominator(&self) -> &TruncSeries {
        &self.inv_den
    }
}

pub fn kernel_expansion(curve: &LocalSpectralCurve, a: usize) -> Result<KernelData> {
    let v = &curve.points[a].v;
    let (_, odd) = v.parity_split();
    if odd.is_known_zero() {
        return Err(Error::DegenerateDenominator(a));
    }
    let mut den = odd.scale(&ri(4)).shift(1);
    if den.is_exact() && den.terms().count() > 1 {
        den = den.truncate(curve.order);
    }
    let inv_den = den.inverse()?;
    Ok(KernelData {
        chart: a,
        denominator: den,
        inv_den,
    })
}

pub fn builtin_airy(order: i64) -> LocalSpectralCurve {
    LocalSpectralCurve::from_charts(
        vec![("airy".into(), TruncSeries::monomial(Rat::one(), 1, EXACT))],
        BiSeriesSym::zero(0),
        true,
        order,
    )
    .unwrap()
}

pub fn builtin_bessel(order: i64) -> LocalSpectralCurve {
    LocalSpectralCurve::from_charts(
        vec![("bessel".into(), TruncSeries::monomial(Rat::one(), -1, EXACT))],
        BiSeriesSym::zero(0),
        true,
        order,
    )
    .unwrap()
}

/// Two uncoupled Airy charts (`phi = 0`).
pub fn builtin_two_airy(order: i64) -> LocalSpectralCurve {
    let v = TruncSeries::monomial(Rat::one(), 1, EXACT);
    LocalSpectralCurve::from_charts(
        vec![("airy0".into(), v.clone()), ("airy1".into(), v)],
        BiSeriesSym::zero(0),
        true,
        order,
    )
    .unwrap()
}

/// Global genus-zero curve `zeta -> (u(zeta), v(zeta))`.
///
/// Each simple rational critical point of `u` becomes a chart with
/// `u_chart = z^2` after an exact square root. When the normalization
/// constant `u''/2` is not a rational square, `allow_rescale` replaces
/// `(u, v)` locally by `(c (u - u_0), v / c)`, which leaves `du` times the
/// odd part of `v` and hence the recursion unchanged.
pub fn from_global_rational(u: &RationalFn, v: &RationalFn, order: i64, allow_rescale: bool) -> Result<LocalSpectralCurve> {
    let crit = u.derivative().num;
    if crit.is_zero() {
        return Err(Error::Degenerate("u is constant".into()));
    }
    let (roots, complete) = crit.rational_roots()?;
    if !complete {
        return Err(Error::NonRationalCriticalPoint);
    }
    if roots.is_empty() {
        return Err(Error::Degenerate("u has no finite critical point".into()));
    }
    if let Some((r, _)) = roots.iter().find(|(_, m)| *m > 1) {
        return Err(Error::NonSimpleRamification(format!("du has a multiple zero at {r}")));
    }
    // roots of the numerator of u' that are poles of u are not critical
    let roots: Vec<Rat> = roots
        .into_iter()
        .map(|(r, _)| r)
        .filter(|r| !u.den.eval(r).is_zero())
        .collect();
    let mut points = Vec::new();
    let t = order + 2;
    for (idx, alpha) in roots.iter().enumerate() {
        let uw = u.expand_at(alpha, t + 2)?;
        let c0 = uw.coeff_checked(2)?;
        if c0.is_zero() {
            return Err(Error::NonSimpleRamification(format!("u'' vanishes at {alpha}")));
        }
        let u0 = uw.coeff_checked(0)?;
        let rest = uw.sub(&TruncSeries::monomial(u0, 0, EXACT));
        let (lead, rescale) = match rat_sqrt(&c0) {
            Some(s) => (s, Rat::one()),
            None if allow_rescale => (c0.clone(), c0.clone()),
            None => return Err(Error::NonSquareNormalization(alpha.to_string())),
        };
        // z(w) = lead * w * sqrt((u - u0) / (c0 w^2))
        let q = rest.shift(-2).scale(&(Rat::one() / &c0)).truncate(t);
        let z_of_w = q.sqrt()?.shift(1).scale(&lead);
        let zeta = z_of_w.revert()?;
        let vw = v.expand_at(alpha, t)?;
        if vw.valuation().is_some_and(|e| e < 0) {
            return Err(Error::NonSimpleRamification(format!("v has a pole at the branch point {alpha}")));
        }
        let vz = vw.compose(&zeta)?.scale(&(Rat::one() / &rescale)).truncate(order);
        let kind = classify(&vz, idx)?;
        points.push(PointChart {
            name: format!("zeta={alpha}"),
            v: vz,
            kind,
            global: Some(GlobalChart {
                center: alpha.clone(),
                zeta,
                rescale,
            }),
        });
    }
    let tphi = (order - 3).max(0) as usize;
    let phi = global_phi(&points, tphi)?;
    Ok(LocalSpectralCurve {
        points,
        phi,
        phi_exact: false,
        order,
    })
}

/// `phi^{ab} = d1 d2 log((zeta_a(z1) - zeta_b(z2)) / (z1 - z2)^delta_ab)`.
fn global_phi(points: &[PointChart], t: usize) -> Result<BiSeriesSym> {
    let mut phi = BiSeriesSym::zero(t as u32);
    let charts: Vec<&GlobalChart> = points.iter().map(|p| p.global.as_ref().unwrap()).collect();
    for a in 0..charts.len() {
        for b in a..charts.len() {
            let f = if a == b {
                let z = &charts[a].zeta;
                let mut q = Bivar::zero(t + 2);
                for i in 0..=t + 2 {
                    for l in 0..=t + 2 - i {
                        q.set(i, l, z.coeff_checked((i + l + 1) as i64)?);
                    }
                }
                // d2 (d1 Q / Q)
                q.d1().mul(&q.truncated(t + 1).inverse()?).d2()
            } else {
                let d = &charts[a].center - &charts[b].center;
                let za = Bivar::from_univariate(&charts[a].zeta, false, t + 1)?;
                let zb = Bivar::from_univariate(&charts[b].zeta, true, t + 1)?;
                let mut g = za.add(&zb.scale(&-Rat::one()));
                g.set(0, 0, d);
                let l = g.inverse()?;
                let dzb = Bivar::from_univariate(&charts[b].zeta.derivative(), true, t)?;
                dzb.mul(&l.d1()).scale(&-Rat::one())
            };
            for i in 0..=t {
                for l in 0..=t - i {
                    phi.set(a, b, i as u32, l as u32, f.get(i, l));
                }
            }
        }
    }
    Ok(phi)
}

/// Tail of `e^{a,k}` at chart `b` from the closed form
/// `e^{a,k} = sum_{m=1}^k [z^k](Z_a^m) dzeta / (zeta - a)^{m+1}`,
/// independent of `phi`. Coefficient of `dz`, known through `order`.
pub fn global_basis_series(curve: &LocalSpectralCurve, a: usize, k: u32, b: usize, order: i64) -> Result<TruncSeries> {
    let ga = curve.points[a].global.as_ref().ok_or(Error::Invalid("chart is not global".into()))?;
    let gb = curve.points[b].global.as_ref().ok_or(Error::Invalid("chart is not global".into()))?;
    let work = order + 2 * k as i64 + 4;
    let za = ga.zeta.truncate(work);
    // zeta - a in chart b, and dzeta/dz
    let offset = &gb.center - &ga.center;
    let x = gb.zeta.truncate(work).add(&TruncSeries::monomial(offset, 0, EXACT));
    let dx = gb.zeta.truncate(work).derivative();
    let mut acc = TruncSeries::zero(order);
    let mut zpow = TruncSeries::one();
    for m in 1..=k as i64 {
        zpow = zpow.mul(&za);
        let c = zpow.coeff_checked(k as i64)?;
        if c.is_zero() {
            continue;
        }
        let term = dx.mul(&x.powi(-(m + 1))?).scale(&c);
        acc = acc.add(&term);
    }
    Ok(acc.truncate(order))
}

/// `u(z)` for chart construction tests: the local `u` rebuilt from `zeta`.
pub fn chart_u(u: &RationalFn, chart: &GlobalChart, order: i64) -> Result<TruncSeries> {
    let uw = u.expand_at(&chart.center, order + 2)?;
    let u0 = uw.coeff_checked(0)?;
    let shifted = uw.sub(&TruncSeries::monomial(u0, 0, EXACT));
    Ok(shifted.compose(&chart.zeta.truncate(order))?.scale(&chart.rescale).truncate(order))
}
