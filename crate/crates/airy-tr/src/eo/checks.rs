//! Checks on computed correlators: structure, dilaton, free energies and
//! the dictionaries to abstract TR and to the Virasoro solutions.

use super::curve::{Label, LocalSpectralCurve};
use super::recursion::{label_code, pole_bound, CorrelatorTable, Key};
use crate::airy::FreeEnergyTable;
use crate::algebra::{double_factorial_odd, factorial, ri, Rat, TruncSeries};
use crate::error::{Error, Result};
use crate::virasoro::FockPolynomial;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// `psi_a`, a primitive of `v du = 2 z v_a(z) dz` in each chart, plus an
/// optional even perturbation (a function of `u`).
pub fn dilaton_primitive(curve: &LocalSpectralCurve, even_shift: &[Rat]) -> Vec<TruncSeries> {
    curve
        .points
        .iter()
        .map(|p| {
            let integrand = p.v.truncate(curve.order).shift(1).scale(&ri(2));
            let mut terms = Vec::new();
            for (e, c) in integrand.terms() {
                if e == -1 {
                    // log term, even under z -> -z, drops out of every residue
                    continue;
                }
                terms.push((e + 1, c / ri(e + 1)));
            }
            for (j, c) in even_shift.iter().enumerate() {
                terms.push((2 * j as i64, c.clone()));
            }
            let order = if integrand.is_exact() { integrand.order() } else { integrand.order() + 1 };
            let mut acc = TruncSeries::zero(order);
            for (e, c) in terms {
                acc = acc.add(&TruncSeries::monomial(c, e, order));
            }
            acc
        })
        .collect()
}

/// `d_l = sum_a Res_a psi e^l` for the given labels.
pub fn dilaton_pairings(curve: &LocalSpectralCurve, psi: &[TruncSeries], labels: &[Label]) -> Result<BTreeMap<Label, Rat>> {
    let mut out = BTreeMap::new();
    for &l in labels {
        let mut acc = Rat::zero();
        for (a, ps) in psi.iter().enumerate() {
            let e = curve.basis_series(a, l);
            acc += ps.mul(&e).coeff_checked(-1)?;
        }
        out.insert(l, acc);
    }
    Ok(out)
}

fn labels_of(table: &CorrelatorTable) -> Vec<Label> {
    let mut v: Vec<Label> = table.tables.values().flat_map(|m| m.keys().flatten().copied()).collect();
    v.sort_unstable();
    v.dedup();
    v
}

/// Whether `sum_l W_{h,n+1}[I, l] d_l = (2h - 2 + n) W_{h,n}[I]` for every
/// `I`. For `(0,2)` the right side is zero; `(1,0)` is excluded.
pub fn dilaton_check(curve: &LocalSpectralCurve, table: &CorrelatorTable, h: usize, n: usize, even_shift: &[Rat]) -> Result<bool> {
    let upper = table
        .entries(h, n + 1)
        .ok_or_else(|| Error::Invalid(format!("omega_({h},{}) not computed", n + 1)))?;
    if (h, n) == (1, 0) {
        return Err(Error::Invalid("no dilaton equation for omega_(1,1)".into()));
    }
    if !(table.contains(h, n) || (h, n) == (0, 2)) {
        return Err(Error::Invalid(format!("omega_({h},{n}) not computed")));
    }
    let psi = dilaton_primitive(curve, even_shift);
    let d = dilaton_pairings(curve, &psi, &labels_of(table))?;
    let mut lhs: BTreeMap<Key, Rat> = BTreeMap::new();
    for (key, w) in upper {
        for i in 0..key.len() {
            if i > 0 && key[i] == key[i - 1] {
                continue;
            }
            let dl = &d[&key[i]];
            if dl.is_zero() {
                continue;
            }
            let mut rest = key.clone();
            rest.remove(i);
            *lhs.entry(rest).or_insert_with(Rat::zero) += w * dl;
        }
    }
    let factor = ri(2 * h as i64 + n as i64 - 2);
    let empty = BTreeMap::new();
    let rhs = if factor.is_zero() { &empty } else { table.entries(h, n).unwrap_or(&empty) };
    for (k, v) in &lhs {
        let want = rhs.get(k).map(|r| r * &factor).unwrap_or_else(Rat::zero);
        if *v != want {
            return Ok(false);
        }
    }
    Ok(rhs.keys().all(|k| lhs.contains_key(k)))
}

/// `F_h = (1/(2h-2)) sum_a Res psi omega_{h,1}` for `h >= 2`.
pub fn free_energy(curve: &LocalSpectralCurve, table: &CorrelatorTable, h: usize, even_shift: &[Rat]) -> Result<Rat> {
    if h < 2 {
        return Err(Error::FreeEnergyUndefined);
    }
    let w = table
        .entries(h, 1)
        .ok_or_else(|| Error::Invalid(format!("omega_({h},1) not computed")))?;
    let psi = dilaton_primitive(curve, even_shift);
    let labels: Vec<Label> = w.keys().map(|k| k[0]).collect();
    let d = dilaton_pairings(curve, &psi, &labels)?;
    let mut acc = Rat::zero();
    for (k, v) in w {
        acc += v * &d[&k[0]];
    }
    Ok(acc / ri(2 * h as i64 - 2))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructuralReport {
    pub correlators: usize,
    pub entries: usize,
    /// Every stored key is a sorted multiset and every distinguished slot
    /// reproduced the same value during the computation.
    pub symmetric: bool,
    /// Entries confirmed from a second distinguished slot (keys with a single
    /// distinct label have nothing to compare).
    pub symmetry_comparisons: usize,
    pub zero_residues: bool,
    pub skew_principal_parts: bool,
    pub pole_bound: bool,
    /// `(h, n)` pairs whose dilaton equation was checked, and the failures.
    pub dilaton_checked: Vec<(usize, usize)>,
    pub dilaton_failures: Vec<(usize, usize)>,
}

impl StructuralReport {
    pub fn pass(&self) -> bool {
        self.symmetric && self.zero_residues && self.skew_principal_parts && self.pole_bound && self.dilaton_failures.is_empty()
    }
}

pub fn structural_checks(curve: &LocalSpectralCurve, table: &CorrelatorTable) -> Result<StructuralReport> {
    let mut rep = StructuralReport {
        correlators: table.tables.len(),
        entries: table.tables.values().map(|m| m.len()).sum(),
        symmetric: true,
        symmetry_comparisons: table.symmetry_checks,
        zero_residues: true,
        skew_principal_parts: true,
        pole_bound: true,
        dilaton_checked: Vec::new(),
        dilaton_failures: Vec::new(),
    };
    for ((h, n), m) in &table.tables {
        for key in m.keys() {
            if key.windows(2).any(|w| w[0] > w[1]) || key.len() != *n {
                rep.symmetric = false;
            }
            if key.iter().any(|&(_, k)| k > pole_bound(*h, *n)) {
                rep.pole_bound = false;
            }
        }
    }
    for l in labels_of(table) {
        // principal part z^{-k} dz/z is skew under z -> -z iff k is odd
        if l.1 % 2 == 0 {
            rep.skew_principal_parts = false;
        }
        let e = curve.basis_expansion(l.0, l.1)?;
        if e.expansions.iter().any(|x| x.series().coeff(0).is_some_and(|c| !c.is_zero())) {
            rep.zero_residues = false;
        }
        let p = &e.expansions[l.0];
        let principal: Vec<(i64, Rat)> = p.series().terms().filter(|(e, _)| *e < 0).map(|(e, c)| (e, c.clone())).collect();
        let refl = p.reflect();
        for (e, c) in &principal {
            if refl.series().coeff(*e) != Some(-c.clone()) {
                rep.skew_principal_parts = false;
            }
        }
    }
    for &(h, nn) in table.tables.keys() {
        let n = nn - 1;
        if table.contains(h, n) || (h, n) == (0, 2) {
            rep.dilaton_checked.push((h, n));
            if !dilaton_check(curve, table, h, n, &[])? {
                rep.dilaton_failures.push((h, n));
            }
        }
    }
    Ok(rep)
}

/// Constant `c` with `<tau_{k_1}..tau_{k_n}>_h = c^{2h-2+n} W / prod (2k_i+1)!!`,
/// fixed by `<tau_0^3>_0 = 1`.
pub fn intersection_normalization(table: &CorrelatorTable) -> Result<Rat> {
    let w = table.get(0, &[(0, 1); 3]);
    if w.is_zero() {
        return Err(Error::DictionaryViolation("omega_(0,3) vanishes at (1,1,1)".into()));
    }
    Ok(Rat::one() / w)
}

/// Intersection numbers `(h, [k_i]) -> <tau_{k_1} .. tau_{k_n}>_h` from a
/// table computed on the Airy curve.
pub fn intersection_numbers_from_airy(table: &CorrelatorTable) -> Result<BTreeMap<(u32, Vec<u32>), Rat>> {
    let c = intersection_normalization(table)?;
    let mut out = BTreeMap::new();
    for ((h, n), m) in &table.tables {
        let chi = 2 * *h as i32 - 2 + *n as i32;
        let scale = num_traits::pow::Pow::pow(&c, chi);
        for (key, w) in m {
            let mut ks = Vec::new();
            let mut df = Rat::one();
            for &(a, k) in key {
                if a != 0 || k % 2 == 0 {
                    return Err(Error::DictionaryViolation(format!("label ({a},{k}) has no tau counterpart")));
                }
                ks.push((k - 1) / 2);
                df *= double_factorial_odd(((k - 1) / 2) as u64);
            }
            out.insert((*h as u32, ks), w * &scale / df);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mismatch {
    pub h: usize,
    pub labels: Vec<i64>,
    pub left: String,
    pub right: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub compared: usize,
    pub mismatches: Vec<Mismatch>,
}

impl ComparisonReport {
    pub fn pass(&self) -> bool {
        self.mismatches.is_empty() && self.compared > 0
    }
}

fn compare_maps(pairs: impl IntoIterator<Item = (usize, Vec<i64>, Rat, Rat)>) -> ComparisonReport {
    let mut rep = ComparisonReport {
        compared: 0,
        mismatches: Vec::new(),
    };
    for (h, labels, l, r) in pairs {
        rep.compared += 1;
        if l != r {
            rep.mismatches.push(Mismatch {
                h,
                labels,
                left: l.to_string(),
                right: r.to_string(),
            });
        }
    }
    rep
}

fn codes(key: &[Label]) -> Vec<i64> {
    key.iter().map(|&(a, k)| label_code(a, k)).collect()
}

/// `W_{h,n}` against the symmetric tensor `F_{h,n}` (= `n! S_{h,n}`) of
/// abstract TR, with `(a, k)` read as mode `a * 1000 + k`. Every label
/// must exist in the tensors; every `(h, n)` present on both sides with
/// `2h - 2 + n <= chi_max` is compared entry by entry.
pub fn compare_with_abstract_tr(table: &CorrelatorTable, free: &FreeEnergyTable, chi_max: usize) -> Result<ComparisonReport> {
    for l in labels_of(table) {
        if !free.labels.contains(&label_code(l.0, l.1)) {
            return Err(Error::DictionaryViolation(format!("label {} missing from the tensors", label_code(l.0, l.1))));
        }
    }
    let mut pairs = Vec::new();
    for (&(h, n), m) in &table.tables {
        if 2 * h + n - 2 > chi_max || !free.tables.contains_key(&(h, n)) {
            continue;
        }
        let mut keys: BTreeMap<Vec<i64>, ()> = m.keys().map(|k| (codes(k), ())).collect();
        for (labs, _) in free.entries(h, n) {
            keys.insert(labs, ());
        }
        for labs in keys.into_keys() {
            let lk: Option<Vec<Label>> = labs
                .iter()
                .map(|&c| {
                    let (a, k) = (c.div_euclid(super::recursion::POINT_STRIDE), c.rem_euclid(super::recursion::POINT_STRIDE));
                    (k > 0).then_some((a as usize, k as u32))
                })
                .collect();
            let left = lk.map(|k| table.get(h, &k)).unwrap_or_else(Rat::zero);
            let right = free.coefficient(h, &labs);
            pairs.push((h, labs, left, right));
        }
    }
    Ok(compare_maps(pairs))
}

/// `W_{h,n}` against a Virasoro solution under `W = 2^{-chi} |Aut| c_M`,
/// where `c_M` is the coefficient of `hbar^{h-1} x^M` in `log Z` and label
/// `k` stands for `x^{2k+1}`. Covers every monomial of weight `<= weight_cap`.
pub fn compare_with_virasoro(table: &CorrelatorTable, s: &FockPolynomial, chi_max: usize) -> ComparisonReport {
    let mut keys: BTreeMap<(usize, Vec<u32>), ()> = BTreeMap::new();
    for (&(h, n), m) in &table.tables {
        if 2 * h + n - 2 > chi_max {
            continue;
        }
        for k in m.keys() {
            if k.iter().all(|&(a, j)| a == 0 && j % 2 == 1) {
                keys.insert((h, k.iter().map(|&(_, j)| (j - 1) / 2).collect()), ());
            }
        }
    }
    for ((p, mon), _) in s.terms() {
        let h = (p + 1) as usize;
        if !mon.is_empty() && 2 * h as i64 + mon.len() as i64 - 2 <= chi_max as i64 && table.contains(h, mon.len()) {
            keys.insert((h, mon.clone()), ());
        }
    }
    let pairs = keys.into_keys().map(|(h, mon)| {
        let chi = 2 * h as i32 - 2 + mon.len() as i32;
        let key: Vec<Label> = mon.iter().map(|&k| (0, 2 * k + 1)).collect();
        let left = table.get(h, &key);
        let right = s.log_coefficient(h as u32, &mon) * aut(&mon) / num_traits::pow::Pow::pow(&ri(2), chi);
        (h, key.iter().map(|&(a, k)| label_code(a, k)).collect(), left, right)
    });
    compare_maps(pairs)
}

fn aut(mon: &[u32]) -> Rat {
    let mut m: BTreeMap<u32, u64> = BTreeMap::new();
    for &k in mon {
        *m.entry(k).or_insert(0) += 1;
    }
    m.values().fold(Rat::one(), |acc, &e| acc * factorial(e))
}

#[cfg(test)]
mod tests {
    use super::super::curve::{builtin_airy, builtin_bessel, builtin_two_airy, from_global_rational};
    use super::super::recursion::compute_correlators;
    use super::*;
    use crate::airy::{abstract_tr, build_bgw, build_kw, product_structure};
    use crate::algebra::rat;
    use crate::algebra::rational_fn::RationalFn;
    use crate::virasoro::{solve_by_recursion, Variant};

    #[test]
    fn dilaton_on_airy() {
        let c = builtin_airy(20);
        let t = compute_correlators(&c, 4).unwrap();
        assert!(dilaton_check(&c, &t, 0, 3, &[]).unwrap());
        assert!(dilaton_check(&c, &t, 1, 1, &[]).unwrap());
        assert!(dilaton_check(&c, &t, 1, 0, &[]).is_err());
        assert!(dilaton_check(&c, &t, 1, 2, &[rat(3, 1), rat(-5, 7), ri(2)]).unwrap());
    }

    #[test]
    fn broken_table_fails_dilaton() {
        let c = builtin_airy(20);
        let mut t = compute_correlators(&c, 3).unwrap();
        let e = t.tables.get_mut(&(0, 4)).unwrap();
        *e.values_mut().next().unwrap() += ri(1);
        assert!(!dilaton_check(&c, &t, 0, 3, &[]).unwrap());
    }

    #[test]
    fn free_energies() {
        for c in [builtin_airy(20), builtin_bessel(20)] {
            let t = compute_correlators(&c, 3).unwrap();
            assert_eq!(free_energy(&c, &t, 2, &[]).unwrap(), ri(0));
            assert_eq!(free_energy(&c, &t, 2, &[ri(1), ri(4)]).unwrap(), ri(0));
            assert_eq!(free_energy(&c, &t, 1, &[]).unwrap_err(), Error::FreeEnergyUndefined);
        }
    }

    #[test]
    fn intersection_numbers() {
        let t = compute_correlators(&builtin_airy(20), 3).unwrap();
        assert_eq!(intersection_normalization(&t).unwrap(), ri(2));
        let m = intersection_numbers_from_airy(&t).unwrap();
        assert_eq!(m[&(0, vec![0, 0, 0])], ri(1));
        assert_eq!(m[&(1, vec![1])], rat(1, 24));
        assert_eq!(m[&(0, vec![0, 0, 0, 1])], ri(1));
        assert_eq!(m[&(1, vec![1, 1])], rat(1, 24));
    }

    #[test]
    fn bessel_labels_are_rejected_by_the_airy_dictionary() {
        let t = compute_correlators(&builtin_bessel(20), 2).unwrap();
        assert!(intersection_numbers_from_airy(&t).is_err());
    }

    #[test]
    fn airy_and_bessel_match_half_scaled_tensors() {
        let half = rat(1, 2);
        let t = compute_correlators(&builtin_airy(24), 3).unwrap();
        let f = abstract_tr(&build_kw(15).unwrap().scaled(&half), 3).unwrap();
        let r = compare_with_abstract_tr(&t, &f, 3).unwrap();
        assert!(r.pass(), "{r:?}");
        let t = compute_correlators(&builtin_bessel(24), 3).unwrap();
        let f = abstract_tr(&build_bgw(15).unwrap().scaled(&half), 3).unwrap();
        assert!(compare_with_abstract_tr(&t, &f, 3).unwrap().pass());
        // unscaled tensors differ by 2^chi
        let f = abstract_tr(&build_bgw(15).unwrap(), 3).unwrap();
        assert!(!compare_with_abstract_tr(&t, &f, 3).unwrap().pass());
    }

    #[test]
    fn two_airy_matches_product() {
        let half = rat(1, 2);
        let kw = build_kw(11).unwrap().scaled(&half);
        let p = product_structure(&[kw.clone(), kw.relabeled(1000)]).unwrap();
        let f = abstract_tr(&p, 3).unwrap();
        let t = compute_correlators(&builtin_two_airy(20), 3).unwrap();
        let r = compare_with_abstract_tr(&t, &f, 3).unwrap();
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn virasoro_dictionary() {
        let t = compute_correlators(&builtin_airy(24), 3).unwrap();
        let s = solve_by_recursion(Variant::Kw, 8, 2).unwrap();
        let r = compare_with_virasoro(&t, &s, 3);
        assert!(r.pass(), "{r:?}");
        let t = compute_correlators(&builtin_bessel(24), 3).unwrap();
        let s = solve_by_recursion(Variant::Bgw, 8, 2).unwrap();
        let r = compare_with_virasoro(&t, &s, 3);
        assert!(r.pass(), "{r:?}");
    }

    #[test]
    fn structure_on_builtin_curves() {
        for c in [builtin_airy(20), builtin_bessel(20)] {
            let t = compute_correlators(&c, 3).unwrap();
            let r = structural_checks(&c, &t).unwrap();
            assert!(r.pass(), "{r:?}");
            assert!(!r.dilaton_checked.is_empty());
        }
        let c = builtin_airy(20);
        let t = compute_correlators(&c, 3).unwrap();
        assert!(structural_checks(&c, &t).unwrap().symmetry_comparisons > 0);
        {
        }
    }

    #[test]
    fn structure_on_two_point_curve() {
        let u = RationalFn::parse("z + 1/z").unwrap();
        let v = RationalFn::parse("z").unwrap();
        let c = from_global_rational(&u, &v, 24, true).unwrap();
        let t = compute_correlators(&c, 3).unwrap();
        let r = structural_checks(&c, &t).unwrap();
        assert!(r.pass(), "{r:?}");
    }
}
