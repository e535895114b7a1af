//! Independent oracles for the acceptance suite. Nothing here calls the
//! library's recursion code.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::collections::HashMap;

pub type Q = BigRational;

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// `(2m - 1)!!` with `(-1)!! = 1`.
fn odd_df(m: i64) -> Q {
    let mut r = Q::one();
    let mut k = 2 * m - 1;
    while k > 1 {
        r *= q(k);
        k -= 2;
    }
    r
}

/// `<tau_{k_1} ... tau_{k_n}>_g` by the DVV recursion, memoized.
pub struct Dvv {
    memo: HashMap<(u32, Vec<u32>), Q>,
}

impl Default for Dvv {
    fn default() -> Self {
        Self::new()
    }
}

impl Dvv {
    pub fn new() -> Self {
        Dvv { memo: HashMap::new() }
    }

    pub fn get(&mut self, g: u32, ks: &[u32]) -> Q {
        let mut key = ks.to_vec();
        key.sort_unstable();
        if let Some(v) = self.memo.get(&(g, key.clone())) {
            return v.clone();
        }
        let v = self.compute(g, &key);
        self.memo.insert((g, key), v.clone());
        v
    }

    fn compute(&mut self, g: u32, ks: &[u32]) -> Q {
        let n = ks.len() as i64;
        let sum: i64 = ks.iter().map(|&k| k as i64).sum();
        if n == 0 || sum != 3 * g as i64 - 3 + n {
            return Q::zero();
        }
        if ks.iter().all(|&k| k == 0) {
            return if g == 0 && n == 3 { Q::one() } else { Q::zero() };
        }
        if g == 1 && ks == [1] {
            return Q::new(BigInt::from(1), BigInt::from(24));
        }
        // ks sorted: peel off the largest index as tau_{k+1}
        let kp1 = *ks.last().unwrap() as i64;
        let k = kp1 - 1;
        let rest = &ks[..ks.len() - 1];
        let mut acc = Q::zero();
        for j in 0..rest.len() {
            let kj = rest[j] as i64;
            let mut s: Vec<u32> = rest.to_vec();
            s[j] = (k + kj) as u32;
            acc += odd_df(k + kj + 1) / odd_df(kj) * self.get(g, &s);
        }
        for r in 0..k {
            let s = k - 1 - r;
            let w = odd_df(r + 1) * odd_df(s + 1) / q(2);
            if g > 0 {
                let mut v = rest.to_vec();
                v.push(r as u32);
                v.push(s as u32);
                acc += &w * self.get(g - 1, &v);
            }
            let m = rest.len();
            for mask in 0u32..(1 << m) {
                let (mut i, mut j) = (vec![r as u32], vec![s as u32]);
                for (t, &kt) in rest.iter().enumerate() {
                    if mask & (1 << t) != 0 {
                        i.push(kt);
                    } else {
                        j.push(kt);
                    }
                }
                for g1 in 0..=g {
                    let a = self.get(g1, &i);
                    if a.is_zero() {
                        continue;
                    }
                    acc += &w * a * self.get(g - g1, &j);
                }
            }
        }
        acc / odd_df(k + 2)
    }
}

/// Multisets `k_1 <= ... <= k_n` with `sum k = 3g - 3 + n`.
pub fn dimension_multisets(g: u32, n: usize) -> Vec<Vec<u32>> {
    let d = 3 * g as i64 - 3 + n as i64;
    let mut out = Vec::new();
    if d < 0 {
        return out;
    }
    fn rec(n: usize, left: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in min..=left {
            cur.push(k);
            rec(n - 1, left - k, k, cur, out);
            cur.pop();
        }
    }
    rec(n, d as u32, 0, &mut Vec::new(), &mut out);
    out
}

/// `(2n)! / ((n+1)! n!)`.
pub fn catalan(n: u64) -> BigInt {
    let mut c = BigInt::one();
    for i in 0..n {
        c = c * BigInt::from(2 * (2 * i + 1)) / BigInt::from(i + 2);
    }
    c
}

/// `4^n - (2n)!/(n!)^2`.
pub fn quantum_conic(n: u64) -> BigInt {
    let mut central = BigInt::one();
    for i in 0..n {
        central = central * BigInt::from(2 * (2 * i + 1)) / BigInt::from(i + 1);
    }
    BigInt::from(4).pow(n as u32) - central
}

#[cfg(test)]
mod frozen {
    use super::*;

    fn r(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn dvv_reproduces_published_values() {
        let mut o = Dvv::new();
        assert_eq!(o.get(0, &[0, 0, 0]), r(1, 1));
        assert_eq!(o.get(0, &[0, 0, 0, 1]), r(1, 1));
        assert_eq!(o.get(0, &[0, 0, 0, 1, 1, 1]), r(6, 1));
        assert_eq!(o.get(1, &[1]), r(1, 24));
        assert_eq!(o.get(1, &[1, 1]), r(1, 24));
        assert_eq!(o.get(2, &[4]), r(1, 1152));
        assert_eq!(o.get(2, &[2, 3]), r(29, 5760));
        assert_eq!(o.get(2, &[1, 4]), r(1, 384));
        assert_eq!(o.get(3, &[7]), r(1, 82944));
    }

    #[test]
    fn closed_forms() {
        let c: Vec<i64> = (1..=8).map(|n| catalan(n).try_into().unwrap()).collect();
        assert_eq!(c, [1, 2, 5, 14, 42, 132, 429, 1430]);
        assert_eq!(quantum_conic(1), BigInt::from(2));
        assert_eq!(quantum_conic(2), BigInt::from(10));
    }
}
