//! The recursion itself. Correlators are stored in the basis `e^{a,k}`:
//! `omega_{h,n} = sum W[L_1..L_n] e^{L_1}(z_1) ... e^{L_n}(z_n)`, with `W`
//! symmetric and keyed by the sorted label multiset.

use super::curve::{kernel_expansion, KernelData, Label, LocalSpectralCurve};
use crate::algebra::{binomial, ri, Rat, TruncSeries, EXACT};
use crate::error::{Error, Result};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet, HashMap};

pub type Key = Vec<Label>;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CorrelatorTable {
    pub tables: BTreeMap<(usize, usize), BTreeMap<Key, Rat>>,
    /// Number of entries confirmed from a second distinguished slot.
    pub symmetry_checks: usize,
}

impl CorrelatorTable {
    /// `W_{h,n}` at the labels (any order); zero when absent.
    pub fn get(&self, h: usize, labels: &[Label]) -> Rat {
        let mut k = labels.to_vec();
        k.sort_unstable();
        self.tables
            .get(&(h, k.len()))
            .and_then(|m| m.get(&k))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn entries(&self, h: usize, n: usize) -> Option<&BTreeMap<Key, Rat>> {
        self.tables.get(&(h, n))
    }

    pub fn contains(&self, h: usize, n: usize) -> bool {
        self.tables.contains_key(&(h, n))
    }
}

/// Largest label `k` that can carry a pole of `omega_{h,n}` at a chart.
pub fn pole_bound(h: usize, n: usize) -> u32 {
    (2 * (3 * h + n - 3) + 2) as u32
}

/// Labels are computed (and must vanish) up to this cap.
fn label_cap(h: usize, n: usize) -> u32 {
    pole_bound(h, n) + 2
}

/// Every `(h, n)` with `1 <= 2h - 2 + n <= chi_max`, `n >= 1`.
pub fn compute_correlators(curve: &LocalSpectralCurve, chi_max: usize) -> Result<CorrelatorTable> {
    let mut targets = Vec::new();
    for chi in 1..=chi_max {
        for h in 0..=chi.div_ceil(2) {
            if let Some(n) = (chi + 2).checked_sub(2 * h) {
                if n >= 1 {
                    targets.push((h, n));
                }
            }
        }
    }
    compute_correlators_for(curve, &targets)
}

fn dependencies(h: usize, nn: usize) -> Vec<(usize, usize)> {
    let n = nn - 1;
    let mut out = Vec::new();
    if h >= 1 {
        out.push((h - 1, n + 2));
    }
    for h1 in 0..=h {
        for m1 in 0..=n {
            let (h2, m2) = (h - h1, n - m1);
            if (h1, m1) == (0, 0) || (h2, m2) == (0, 0) {
                continue;
            }
            out.push((h1, m1 + 1));
            out.push((h2, m2 + 1));
        }
    }
    out.retain(|&d| d != (0, 2));
    out
}

/// The given `(h, n)` and everything they depend on.
pub fn compute_correlators_for(curve: &LocalSpectralCurve, targets: &[(usize, usize)]) -> Result<CorrelatorTable> {
    let mut need = BTreeSet::new();
    let mut stack: Vec<(usize, usize)> = targets.to_vec();
    while let Some((h, n)) = stack.pop() {
        if n == 0 || 2 * h + n < 3 {
            return Err(Error::Invalid(format!("omega_({h},{n}) is not produced by the recursion")));
        }
        if need.insert((h, n)) {
            stack.extend(dependencies(h, n));
        }
    }
    let mut order: Vec<(usize, usize)> = need.into_iter().collect();
    order.sort_by_key(|&(h, n)| (2 * h + n, h));
    let mut eng = Engine::new(curve)?;
    for (h, n) in order {
        let t = eng.step(h, n)?;
        eng.table.tables.insert((h, n), t);
        eng.views.clear();
    }
    Ok(eng.table)
}

type View = BTreeMap<Key, TruncSeries>;

struct Engine<'a> {
    curve: &'a LocalSpectralCurve,
    kernels: Vec<KernelData>,
    basis: HashMap<(usize, Label), TruncSeries>,
    views: HashMap<(usize, usize, usize, bool), View>,
    table: CorrelatorTable,
}

fn remove_one(key: &[Label], idx: usize) -> Key {
    let mut r = key.to_vec();
    r.remove(idx);
    r
}

fn merged(a: &[Label], b: &[Label]) -> Key {
    let mut r = [a, b].concat();
    r.sort_unstable();
    r
}

fn multiplicities(key: &[Label]) -> BTreeMap<Label, u64> {
    let mut m = BTreeMap::new();
    for l in key {
        *m.entry(*l).or_insert(0) += 1;
    }
    m
}

fn accumulate(map: &mut View, key: Key, s: TruncSeries) {
    match map.get_mut(&key) {
        Some(acc) => *acc = acc.add(&s),
        None => {
            map.insert(key, s);
        }
    }
}

impl<'a> Engine<'a> {
    fn new(curve: &'a LocalSpectralCurve) -> Result<Self> {
        let kernels = (0..curve.num_points())
            .map(|a| kernel_expansion(curve, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(Engine {
            curve,
            kernels,
            basis: HashMap::new(),
            views: HashMap::new(),
            table: CorrelatorTable::default(),
        })
    }

    fn basis(&mut self, at: usize, l: Label) -> TruncSeries {
        let curve = self.curve;
        self.basis.entry((at, l)).or_insert_with(|| curve.basis_series(at, l)).clone()
    }

    /// First-slot expansion of `omega_{h,m}` at chart `at`, keyed by the
    /// remaining labels; `sigma` gives the pullback by `z -> -z`.
    fn view(&mut self, h: usize, m: usize, at: usize, sigma: bool, cap: u32) -> View {
        if (h, m) == (0, 2) {
            // B(z, z1) = sum_k k z^{k-1} dz e^{at,k}(z1) + ...
            return (1..=cap)
                .map(|k| {
                    let s = TruncSeries::monomial(ri(k as i64), k as i64 - 1, EXACT);
                    let s = if sigma { s.reflect().neg() } else { s };
                    (vec![(at, k)], s)
                })
                .collect();
        }
        if let Some(v) = self.views.get(&(h, m, at, sigma)) {
            return v.clone();
        }
        let entries: Vec<(Key, Rat)> = self
            .table
            .entries(h, m)
            .map(|t| t.iter().map(|(k, v)| (k.clone(), v.clone())).collect())
            .unwrap_or_default();
        let mut out = View::new();
        for (key, w) in entries {
            for i in 0..key.len() {
                if i > 0 && key[i] == key[i - 1] {
                    continue;
                }
                let e = self.basis(at, key[i]).scale(&w);
                accumulate(&mut out, remove_one(&key, i), e);
            }
        }
        if sigma {
            for s in out.values_mut() {
                *s = s.reflect().neg();
            }
        }
        self.views.insert((h, m, at, sigma), out.clone());
        out
    }

    /// Recursion kernel numerators `P[L_S]` at chart `at` for `omega_{h,n+1}`.
    fn numerators(&mut self, h: usize, nn: usize, at: usize, cap: u32) -> View {
        let n = nn - 1;
        let mut p = View::new();
        if h >= 1 {
            if (h, n) == (1, 0) {
                p.insert(Vec::new(), self.curve.bergman_antidiagonal(at));
            } else {
                let g = self.view(h - 1, n + 2, at, false, cap);
                for (r, s) in &g {
                    for i in 0..r.len() {
                        if i > 0 && r[i] == r[i - 1] {
                            continue;
                        }
                        let se = self.basis(at, r[i]).reflect().neg();
                        accumulate(&mut p, remove_one(r, i), s.mul(&se));
                    }
                }
            }
        }
        for h1 in 0..=h {
            for m1 in 0..=n {
                let (h2, m2) = (h - h1, n - m1);
                if (h1, m1) == (0, 0) || (h2, m2) == (0, 0) {
                    continue;
                }
                let g1 = self.view(h1, m1 + 1, at, false, cap);
                let g2 = self.view(h2, m2 + 1, at, true, cap);
                for (a, sa) in &g1 {
                    let ma = multiplicities(a);
                    for (b, sb) in &g2 {
                        let key = merged(a, b);
                        let mk = multiplicities(&key);
                        let mut coef = Rat::from_integer(1.into());
                        for (x, &c) in &ma {
                            coef *= binomial(mk[x], c);
                        }
                        accumulate(&mut p, key, sa.mul(sb).scale(&coef));
                    }
                }
            }
        }
        p
    }

    fn step(&mut self, h: usize, nn: usize) -> Result<BTreeMap<Key, Rat>> {
        let cap = label_cap(h, nn);
        let bound = pole_bound(h, nn);
        // value of W at key I for each distinguished label
        let mut found: BTreeMap<Key, BTreeMap<Label, Rat>> = BTreeMap::new();
        for at in 0..self.curve.num_points() {
            let p = self.numerators(h, nn, at, cap);
            let inv = self.kernels[at].inverse_denominator().clone();
            for (rest, s) in p {
                let q = inv.mul(&s);
                for k in 1..=cap {
                    let w = match q.coeff_checked(-1 - k as i64) {
                        Ok(c) => -c,
                        Err(Error::TruncationTooShort { needed, .. }) => {
                            return Err(Error::TruncationExhausted { h, n: nn, required: needed })
                        }
                        Err(e) => return Err(e),
                    };
                    if w.is_zero() {
                        continue;
                    }
                    let key = merged(&[(at, k)], &rest);
                    found.entry(key).or_default().insert((at, k), w);
                }
            }
        }
        let mut out = BTreeMap::new();
        for (key, vals) in found {
            let first = vals.values().next().unwrap().clone();
            for (i, l) in key.iter().enumerate() {
                if i > 0 && key[i - 1] == *l {
                    continue;
                }
                if i > 0 {
                    self.table.symmetry_checks += 1;
                }
                if vals.get(l).is_none_or(|v| *v != first) {
                    return Err(Error::SymmetryViolation {
                        h,
                        n: nn,
                        index: key.iter().map(|&(a, k)| label_code(a, k)).collect(),
                    });
                }
            }
            if key.iter().any(|&(_, k)| k > bound) {
                return Err(Error::PoleBound { h, n: nn });
            }
            out.insert(key, first);
        }
        Ok(out)
    }
}

/// Flat integer code of a label: `chart * 1000 + k`.
pub fn label_code(chart: usize, k: u32) -> i64 {
    chart as i64 * POINT_STRIDE + k as i64
}

pub const POINT_STRIDE: i64 = 1000;

#[cfg(test)]
mod tests {
    use super::super::curve::{builtin_airy, builtin_bessel, builtin_two_airy, from_global_rational};
    use super::*;
    use crate::algebra::rat;
    use crate::algebra::rational_fn::RationalFn;

    #[test]
    fn airy_seeds() {
        let t = compute_correlators(&builtin_airy(20), 1).unwrap();
        assert_eq!(t.get(0, &[(0, 1); 3]), rat(1, 2));
        assert_eq!(t.get(1, &[(0, 3)]), rat(1, 16));
        assert_eq!(t.entries(0, 3).unwrap().len(), 1);
        assert_eq!(t.entries(1, 1).unwrap().len(), 1);
    }

    #[test]
    fn bessel_seeds() {
        let t = compute_correlators(&builtin_bessel(20), 2).unwrap();
        assert!(t.entries(0, 3).unwrap().is_empty());
        assert!(t.entries(0, 4).unwrap().is_empty());
        assert_eq!(t.get(1, &[(0, 1)]), rat(1, 16));
    }

    #[test]
    fn airy_genus_zero_four_point() {
        // <tau_0^3 tau_1> = 1 with the 2^{-chi} (2k+1)!! dictionary
        let t = compute_correlators(&builtin_airy(20), 2).unwrap();
        assert_eq!(t.get(0, &[(0, 1), (0, 1), (0, 1), (0, 3)]), rat(3, 4));
    }

    #[test]
    fn two_airy_is_block_diagonal() {
        let t2 = compute_correlators(&builtin_two_airy(20), 3).unwrap();
        let t1 = compute_correlators(&builtin_airy(20), 3).unwrap();
        for ((h, n), m) in &t2.tables {
            for (k, v) in m {
                assert!(k.iter().all(|l| l.0 == k[0].0), "mixed key {k:?}");
                let single: Vec<Label> = k.iter().map(|&(_, j)| (0, j)).collect();
                assert_eq!(&t1.get(*h, &single), v);
            }
            assert_eq!(m.len(), 2 * t1.entries(*h, *n).unwrap().len());
        }
    }

    #[test]
    fn global_curve_is_symmetric() {
        let u = RationalFn::parse("z + 1/z").unwrap();
        let v = RationalFn::parse("z").unwrap();
        let c = from_global_rational(&u, &v, 24, true).unwrap();
        let t = compute_correlators(&c, 3).unwrap();
        assert!(t.entries(0, 4).unwrap().keys().any(|k| k.iter().any(|l| l.0 == 0) && k.iter().any(|l| l.0 == 1)));
    }

    #[test]
    fn short_truncation_is_reported() {
        let u = RationalFn::parse("z + 1/z").unwrap();
        let v = RationalFn::parse("z").unwrap();
        let c = from_global_rational(&u, &v, 6, true).unwrap();
        let e = compute_correlators(&c, 4).unwrap_err();
        assert!(matches!(e, Error::TruncationExhausted { .. }), "{e:?}");
    }

    #[test]
    fn dependency_closure() {
        let t = compute_correlators_for(&builtin_airy(10), &[(1, 2)]).unwrap();
        let keys: Vec<_> = t.tables.keys().copied().collect();
        assert_eq!(keys, vec![(0, 3), (1, 1), (1, 2)]);
    }
}
