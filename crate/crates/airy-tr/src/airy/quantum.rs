//! Abstract topological recursion: the coefficients of
//! `S = sum_h hbar^(h-1) sum_n (1/n!) F_{h,n;I} x^I` with `H_i e^S = 0`.

use super::AiryTensors;
use crate::algebra::{factorial, ri, Rat};
use crate::error::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Symmetric tensors `F_{h,n}` keyed by sorted position multisets; absent
/// entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeEnergyTable {
    pub labels: Vec<i64>,
    pub chi_max: usize,
    pub tables: BTreeMap<(usize, usize), BTreeMap<Vec<usize>, Rat>>,
}

impl FreeEnergyTable {
    fn get(&self, h: usize, idx: &[usize]) -> Option<&Rat> {
        self.tables.get(&(h, idx.len()))?.get(idx)
    }

    /// `F_{h,n}` at the given mode labels (any order).
    pub fn coefficient(&self, h: usize, labels: &[i64]) -> Rat {
        let mut idx: Vec<usize> = match labels
            .iter()
            .map(|l| self.labels.iter().position(|m| m == l))
            .collect::<Option<Vec<_>>>()
        {
            Some(v) => v,
            None => return Rat::zero(),
        };
        idx.sort_unstable();
        self.get(h, &idx).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficient of the monomial `x^I` in `S_h`: `F / |Aut I|`.
    pub fn monomial_coefficient(&self, h: usize, labels: &[i64]) -> Rat {
        let mut sorted = labels.to_vec();
        sorted.sort_unstable();
        let mut aut = Rat::from_integer(1.into());
        let mut run = 1u64;
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                run += 1;
            } else {
                aut *= factorial(run);
                run = 1;
            }
        }
        aut *= factorial(run);
        self.coefficient(h, labels) / aut
    }

    /// Nonzero entries of `F_{h,n}` as label tuples (sorted ascending).
    pub fn entries(&self, h: usize, n: usize) -> Vec<(Vec<i64>, Rat)> {
        self.tables
            .get(&(h, n))
            .map(|m| {
                m.iter()
                    .map(|(k, v)| (k.iter().map(|&p| self.labels[p]).collect(), v.clone()))
                    .collect()
            })
            .unwrap_or_default()
    }
}

/// Sorted multisets of `n` positions out of `dim`.
fn multisets(dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(dim: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for p in start..dim {
            cur.push(p);
            rec(dim, n, p, cur, out);
            cur.pop();
        }
    }
    rec(dim, n, 0, &mut cur, &mut out);
    out
}

fn sorted_with(extra: &[usize], rest: &[usize]) -> Vec<usize> {
    let mut v = [extra, rest].concat();
    v.sort_unstable();
    v
}

struct Recursion<'a> {
    t: &'a AiryTensors,
    /// `b_row` of each `i`, grouped by `j`.
    b_by_j: Vec<BTreeMap<usize, Vec<(usize, Rat)>>>,
    c_pairs: Vec<Vec<(usize, usize, Rat)>>,
}

impl Recursion<'_> {
    fn value(&self, tab: &FreeEnergyTable, h: usize, i: usize, j: &[usize]) -> Rat {
        let n = j.len() + 1;
        let mut acc = Rat::zero();
        if h == 0 && n == 3 {
            acc += self.t.a(i, j[0], j[1]) * ri(2);
        }
        if h == 1 && n == 1 {
            acc += self.t.eps(i);
        }
        // b: one index replaced
        for alpha in 0..j.len() {
            if let Some(row) = self.b_by_j[i].get(&j[alpha]) {
                let mut rest = j.to_vec();
                rest.remove(alpha);
                for (k, v) in row {
                    if let Some(f) = tab.get(h, &sorted_with(&[*k], &rest)) {
                        acc += v * f * ri(2);
                    }
                }
            }
        }
        if self.c_pairs[i].is_empty() {
            return acc;
        }
        // c: handle cut
        if h >= 1 {
            for (a, b, v) in &self.c_pairs[i] {
                if let Some(f) = tab.get(h - 1, &sorted_with(&[*a, *b], j)) {
                    acc += v * f;
                }
            }
        }
        // c: separating cut
        let m = j.len();
        for mask in 0u32..(1 << m) {
            let (mut j1, mut j2) = (Vec::new(), Vec::new());
            for (p, &e) in j.iter().enumerate() {
                if mask & (1 << p) != 0 {
                    j1.push(e);
                } else {
                    j2.push(e);
                }
            }
            for h1 in 0..=h {
                let h2 = h - h1;
                if (h1 == 0 && j1.len() < 2) || (h2 == 0 && j2.len() < 2) {
                    continue;
                }
                let (Some(t1), Some(t2)) = (tab.tables.get(&(h1, j1.len() + 1)), tab.tables.get(&(h2, j2.len() + 1))) else {
                    continue;
                };
                for (a, b, v) in &self.c_pairs[i] {
                    if let (Some(f1), Some(f2)) = (t1.get(&sorted_with(&[*a], &j1)), t2.get(&sorted_with(&[*b], &j2))) {
                        acc += v * f1 * f2;
                    }
                }
            }
        }
        acc
    }
}

/// All `F_{h,n}` with `2h - 2 + n <= chi_max`; each entry is computed once
/// per distinct choice of the distinguished slot and the results must agree.
pub fn abstract_tr(t: &AiryTensors, chi_max: usize) -> Result<FreeEnergyTable> {
    abstract_tr_for(t, chi_max, |_, _| true)
}

/// As [`abstract_tr`] but only for the `(h, n)` accepted by `keep`, which
/// must be closed under the dependencies of the recursion.
pub fn abstract_tr_for(t: &AiryTensors, chi_max: usize, keep: impl Fn(usize, usize) -> bool) -> Result<FreeEnergyTable> {
    if chi_max < 1 {
        return Err(Error::Invalid("chi_max must be at least 1".into()));
    }
    let dim = t.dim();
    let rec = Recursion {
        t,
        b_by_j: (0..dim)
            .map(|i| {
                let mut m: BTreeMap<usize, Vec<(usize, Rat)>> = BTreeMap::new();
                for (j, k, v) in t.b_row(i) {
                    m.entry(j).or_default().push((k, v));
                }
                m
            })
            .collect(),
        c_pairs: (0..dim).map(|i| t.c_pairs(i)).collect(),
    };
    let mut tab = FreeEnergyTable {
        labels: t.labels().to_vec(),
        chi_max,
        tables: BTreeMap::new(),
    };
    for chi in 1..=chi_max {
        for h in 0..=(chi + 2) / 2 {
            let Some(n) = (chi + 2).checked_sub(2 * h) else { continue };
            if n == 0 || (h == 0 && n < 3) || !keep(h, n) {
                continue;
            }
            let mut out = BTreeMap::new();
            for idx in multisets(dim, n) {
                if let Some(g) = t.grading() {
                    let total: i64 = idx.iter().map(|&p| g.weights[p]).sum();
                    if total != g.shift * chi as i64 {
                        continue;
                    }
                }
                let mut value: Option<Rat> = None;
                for p in 0..n {
                    if p > 0 && idx[p] == idx[p - 1] {
                        continue;
                    }
                    let mut rest = idx.clone();
                    let i = rest.remove(p);
                    let v = rec.value(&tab, h, i, &rest);
                    match &value {
                        None => value = Some(v),
                        Some(w) if *w != v => {
                            return Err(Error::SymmetryViolation {
                                h,
                                n,
                                index: idx.iter().map(|&q| t.labels()[q]).collect(),
                            })
                        }
                        _ => {}
                    }
                }
                let v = value.unwrap();
                if !v.is_zero() {
                    out.insert(idx, v);
                }
            }
            tab.tables.insert((h, n), out);
        }
    }
    Ok(tab)
}

#[cfg(test)]
mod tests {
    use super::super::{build_bgw, build_kdv, build_kw, conic, product_structure, KdvFamily};
    use super::*;
    use crate::algebra::{binomial, rat};

    #[test]
    fn quantum_conic_u1() {
        let tab = abstract_tr(&conic(), 9).unwrap();
        for n in 1..=8u64 {
            let u1 = tab.coefficient(1, &vec![1; n as usize + 1]) / factorial(n);
            let want = ri(4i64.pow(n as u32)) - binomial(2 * n, n);
            assert_eq!(u1, want, "n = {n}");
        }
    }

    #[test]
    fn kw_seeds() {
        let tab = abstract_tr(&build_kw(11).unwrap(), 2).unwrap();
        assert_eq!(tab.coefficient(0, &[1, 1, 1]), ri(1));
        assert_eq!(tab.coefficient(1, &[3]), rat(1, 8));
    }

    #[test]
    fn even_modes_decouple() {
        let t = build_kdv(KdvFamily::Kw, 11, true).unwrap();
        let tab = abstract_tr(&t, 3).unwrap();
        for ((_, _), m) in &tab.tables {
            for k in m.keys() {
                assert!(k.iter().all(|&p| t.labels()[p] % 2 == 1));
            }
        }
        let odd = abstract_tr(&build_kw(11).unwrap(), 3).unwrap();
        assert_eq!(tab.entries(1, 2), odd.entries(1, 2));
        let t = build_kdv(KdvFamily::Bgw, 9, true).unwrap();
        let tab = abstract_tr(&t, 3).unwrap();
        assert!(tab.tables.values().all(|m| m.keys().all(|k| k.iter().all(|&p| t.labels()[p] % 2 == 1))));
    }

    #[test]
    fn product_blocks_agree_with_factors() {
        let kw = build_kw(9).unwrap();
        let bgw = build_bgw(9).unwrap().relabeled(100);
        let p = product_structure(&[kw.clone(), bgw.clone()]).unwrap();
        assert!(p.grading().is_none());
        let tp = abstract_tr(&p, 3).unwrap();
        let t1 = abstract_tr(&kw, 3).unwrap();
        let t2 = abstract_tr(&bgw, 3).unwrap();
        for ((h, n), m) in &tp.tables {
            for (k, v) in m {
                let labs: Vec<i64> = k.iter().map(|&q| p.labels()[q]).collect();
                let single = if labs.iter().all(|&l| l < 100) {
                    t1.coefficient(*h, &labs)
                } else if labs.iter().all(|&l| l > 100) {
                    t2.coefficient(*h, &labs)
                } else {
                    Rat::zero()
                };
                assert_eq!(&single, v, "({h},{n}) {labs:?}");
            }
            assert_eq!(m.len(), t1.entries(*h, *n).len() + t2.entries(*h, *n).len());
        }
    }
}
