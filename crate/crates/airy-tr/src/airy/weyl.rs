//! Polynomial differential operators `hbar^h x^a d^b`, normal ordered
//! (all `x` to the left), enough to commute the quantized `H_i`.

use super::AiryTensors;
use crate::algebra::{ri, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// `(hbar power, sorted x indices, sorted d indices)`.
pub(crate) type WKey = (u32, Vec<usize>, Vec<usize>);

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct WeylPoly {
    pub terms: BTreeMap<WKey, Rat>,
}

fn counts(v: &[usize]) -> BTreeMap<usize, u32> {
    let mut m = BTreeMap::new();
    for &i in v {
        *m.entry(i).or_insert(0) += 1;
    }
    m
}

fn merged(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut m = [a, b].concat();
    m.sort_unstable();
    m
}

fn falling(n: u32, k: u32) -> i64 {
    (0..k).map(|j| (n - j) as i64).product()
}

fn choose(n: u32, k: u32) -> i64 {
    falling(n, k) / falling(k, k)
}

/// `d^beta x^gamma` rewritten as `sum coef x^.. d^..`.
fn reorder(ds: &[usize], xs: &[usize]) -> Vec<(Vec<usize>, Vec<usize>, i64)> {
    let beta = counts(ds);
    let gamma = counts(xs);
    let common: Vec<(usize, u32, u32)> = beta
        .iter()
        .filter_map(|(&v, &b)| gamma.get(&v).map(|&g| (v, b, g)))
        .collect();
    let mut out = Vec::new();
    let mut kappa = vec![0u32; common.len()];
    loop {
        let mut coef = 1i64;
        let mut x = xs.to_vec();
        let mut d = ds.to_vec();
        for (slot, &(v, b, g)) in common.iter().enumerate() {
            let k = kappa[slot];
            coef *= choose(b, k) * falling(g, k);
            for _ in 0..k {
                x.remove(x.iter().position(|&e| e == v).unwrap());
                d.remove(d.iter().position(|&e| e == v).unwrap());
            }
        }
        out.push((x, d, coef));
        // next kappa
        let mut slot = 0;
        loop {
            if slot == common.len() {
                return out;
            }
            let (_, b, g) = common[slot];
            if kappa[slot] < b.min(g) {
                kappa[slot] += 1;
                break;
            }
            kappa[slot] = 0;
            slot += 1;
        }
    }
}

impl WeylPoly {
    pub fn add_term(&mut self, k: WKey, c: Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k.clone()).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add_scaled(&mut self, o: &WeylPoly, s: &Rat) {
        for (k, c) in &o.terms {
            self.add_term(k.clone(), c * s);
        }
    }

    pub fn mul(&self, o: &WeylPoly) -> WeylPoly {
        let mut r = WeylPoly::default();
        for ((h1, x1, d1), c1) in &self.terms {
            for ((h2, x2, d2), c2) in &o.terms {
                let c = c1 * c2;
                for (xr, dr, k) in reorder(d1, x2) {
                    r.add_term((h1 + h2, merged(x1, &xr), merged(&dr, d2)), &c * ri(k));
                }
            }
        }
        r
    }

    pub fn commutator(&self, o: &WeylPoly) -> WeylPoly {
        let mut r = self.mul(o);
        r.add_scaled(&o.mul(self), &-Rat::one());
        r
    }
}

/// `-hbar d_i + a_ijk x^j x^k + 2 hbar b_ij^k x^j d_k + hbar^2 c_i^jk d_j d_k + hbar eps_i`.
pub(crate) fn quantized(t: &AiryTensors, i: usize) -> WeylPoly {
    let mut w = WeylPoly::default();
    w.add_term((1, vec![], vec![i]), -Rat::one());
    for (j, k, v) in t.a_pairs(i) {
        w.add_term((0, merged(&[j], &[k]), vec![]), v);
    }
    for (j, k, v) in t.b_row(i) {
        w.add_term((1, vec![j], vec![k]), v * ri(2));
    }
    for (j, k, v) in t.c_pairs(i) {
        w.add_term((2, vec![], merged(&[j], &[k])), v);
    }
    w.add_term((1, vec![], vec![]), t.eps(i));
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(h: u32, x: &[usize], d: &[usize]) -> WeylPoly {
        let mut w = WeylPoly::default();
        w.add_term((h, x.to_vec(), d.to_vec()), Rat::one());
        w
    }

    #[test]
    fn canonical_commutator() {
        let c = op(0, &[], &[0]).commutator(&op(0, &[0], &[]));
        assert_eq!(c, op(0, &[], &[]));
    }

    #[test]
    fn second_order_reordering() {
        // d^2 x^2 = x^2 d^2 + 4 x d + 2
        let p = op(0, &[], &[0, 0]).mul(&op(0, &[0, 0], &[]));
        assert_eq!(p.terms.len(), 3);
        assert_eq!(p.terms[&(0, vec![0], vec![0])], ri(4));
        assert_eq!(p.terms[&(0, vec![], vec![])], ri(2));
    }
}
