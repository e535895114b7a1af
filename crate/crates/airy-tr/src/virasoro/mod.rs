//! KW and BGW Virasoro constraints on `log Z`, truncated by weight
//! (`deg x^{2k+1} = k + 1`) and genus. Variables are stored by `k`.

use crate::algebra::{double_factorial_odd, factorial, rat, ri, Rat};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    Kw,
    Bgw,
}

impl Variant {
    /// `L_m` differentiates `x^{2(m + offset) + 1}` in its leading term.
    fn offset(self) -> i64 {
        match self {
            Variant::Kw => 1,
            Variant::Bgw => 0,
        }
    }

    pub fn min_mode(self) -> i64 {
        match self {
            Variant::Kw => -1,
            Variant::Bgw => 0,
        }
    }
}

/// Sorted multiset of `k` (standing for `x^{2k+1}`).
pub type FockMonomial = Vec<u32>;

pub fn weight(m: &[u32]) -> u32 {
    m.iter().map(|k| k + 1).sum()
}

fn mult(m: &[u32], k: u32) -> u32 {
    m.iter().filter(|&&x| x == k).count() as u32
}

fn with(m: &[u32], extra: &[u32]) -> FockMonomial {
    let mut v = [m, extra].concat();
    v.sort_unstable();
    v
}

fn without(m: &[u32], k: u32) -> Option<FockMonomial> {
    let p = m.iter().position(|&x| x == k)?;
    let mut v = m.to_vec();
    v.remove(p);
    Some(v)
}

/// `sum hbar^p c_{p,M} x^M` within a weight and genus window. For `log Z`,
/// `p = h - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockPolynomial {
    terms: BTreeMap<(i32, FockMonomial), Rat>,
    pub weight_cap: u32,
    pub genus_cap: u32,
}

impl FockPolynomial {
    pub fn zero(weight_cap: u32, genus_cap: u32) -> Self {
        FockPolynomial {
            terms: BTreeMap::new(),
            weight_cap,
            genus_cap,
        }
    }

    pub fn get(&self, p: i32, m: &[u32]) -> Rat {
        self.terms.get(&(p, m.to_vec())).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, p: i32, mut m: FockMonomial, v: Rat) {
        m.sort_unstable();
        if v.is_zero() {
            self.terms.remove(&(p, m));
        } else {
            self.terms.insert((p, m), v);
        }
    }

    fn add(&mut self, p: i32, m: FockMonomial, v: Rat) {
        if v.is_zero() {
            return;
        }
        let k = (p, m);
        let e = self.terms.entry(k.clone()).or_insert_with(Rat::zero);
        *e += v;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, FockMonomial), &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `hbar^(h-1) x^M` in `log Z`.
    pub fn log_coefficient(&self, h: u32, m: &[u32]) -> Rat {
        let mut m = m.to_vec();
        m.sort_unstable();
        self.get(h as i32 - 1, &m)
    }

    fn check_window(&self) -> Result<()> {
        for (p, m) in self.terms.keys() {
            if weight(m) > self.weight_cap || *p + 1 > self.genus_cap as i32 {
                return Err(Error::Invalid(format!("cutoff overflow at hbar^{p} x^{m:?}")));
            }
        }
        Ok(())
    }
}

/// Sub-multisets of `m` as (part, complement).
fn splits(m: &[u32]) -> Vec<(FockMonomial, FockMonomial)> {
    let mut distinct: Vec<(u32, u32)> = Vec::new();
    for &k in m {
        match distinct.last_mut() {
            Some((x, c)) if *x == k => *c += 1,
            _ => distinct.push((k, 1)),
        }
    }
    let mut out = vec![(Vec::new(), Vec::new())];
    for (k, c) in distinct {
        let mut next = Vec::new();
        for (a, b) in &out {
            for take in 0..=c {
                let mut a2: FockMonomial = a.clone();
                let mut b2: FockMonomial = b.clone();
                a2.extend(std::iter::repeat_n(k, take as usize));
                b2.extend(std::iter::repeat_n(k, (c - take) as usize));
                next.push((a2, b2));
            }
        }
        out = next;
    }
    out
}

/// Coefficient of `hbar^p x^M` in `e^{-S} L_m e^{S}`.
pub fn residual_coefficient(v: Variant, m: i64, s: &FockPolynomial, p: i32, mon: &[u32]) -> Rat {
    let mut acc = Rat::zero();
    // -1/2 d_a
    let a = m + v.offset();
    if a >= 0 {
        let a = a as u32;
        acc -= ri(mult(mon, a) as i64 + 1) * s.get(p, &with(mon, &[a])) / ri(2);
    }
    // hbar/4 (dd S + dS dS) over i + j = 2m, i.e. k1 + k2 = m - 1
    if m >= 1 {
        let quarter = rat(1, 4);
        for k1 in 0..m as u32 {
            let k2 = m as u32 - 1 - k1;
            let n = with(mon, &[k1, k2]);
            let c = mult(&n, k1) * (mult(&n, k2) - u32::from(k1 == k2));
            acc += &quarter * ri(c as i64) * s.get(p - 1, &n);
            for (m1, m2) in splits(mon) {
                let c1 = ri(mult(&m1, k1) as i64 + 1);
                let c2 = ri(mult(&m2, k2) as i64 + 1);
                let n1 = with(&m1, &[k1]);
                let n2 = with(&m2, &[k2]);
                for p1 in -1..=p {
                    let f1 = s.get(p1, &n1);
                    if f1.is_zero() {
                        continue;
                    }
                    let f2 = s.get(p - 1 - p1, &n2);
                    if !f2.is_zero() {
                        acc += &quarter * &c1 * &c2 * f1 * f2;
                    }
                }
            }
        }
    }
    // 1/2 sum (2k+1) x^{2k+1} d/dx^{2(k+m)+1}
    let mut prev = None;
    for &k in mon {
        if prev == Some(k) {
            continue;
        }
        prev = Some(k);
        let t = k as i64 + m;
        if t < 0 {
            continue;
        }
        let n = with(&without(mon, k).unwrap(), &[t as u32]);
        acc += ri(2 * k as i64 + 1) * ri(mult(&n, t as u32) as i64) * s.get(p, &n) / ri(2);
    }
    if m == 0 && p == 0 && mon.is_empty() {
        acc += rat(1, 16);
    }
    if v == Variant::Kw && m == -1 && p == -1 && mon == [0, 0] {
        acc += rat(1, 4);
    }
    acc
}

/// `e^{-S} L_m e^{S}` on the window where every input it reads lies inside
/// the cutoffs of `s`.
pub fn apply_virasoro(v: Variant, m: i64, s: &FockPolynomial) -> Result<FockPolynomial> {
    if m < v.min_mode() {
        return Err(Error::Invalid(format!("L_{m} is not part of the constraint set")));
    }
    s.check_window()?;
    let mut out = FockPolynomial::zero(s.weight_cap, s.genus_cap);
    let reach = m + v.offset() + 1;
    for w in 0..=s.weight_cap {
        if w as i64 + reach > s.weight_cap as i64 {
            break;
        }
        for mon in monomials_of_weight(w) {
            for p in -1..s.genus_cap as i32 {
                out.add(p, mon.clone(), residual_coefficient(v, m, s, p, &mon));
            }
        }
    }
    Ok(out)
}

/// Multisets of `k` with `sum (k+1) = w`, ascending.
pub fn monomials_of_weight(w: u32) -> Vec<FockMonomial> {
    fn rec(rem: u32, min: u32, cur: &mut FockMonomial, out: &mut Vec<FockMonomial>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for k in min..rem {
            cur.push(k);
            rec(rem - k - 1, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(w, 0, &mut Vec::new(), &mut out);
    out
}

/// The unique truncation of `log Z` (weight `<= w_cap`, genus `<= h_cap`)
/// annihilated by the constraints. Each coefficient is read off the
/// `L_m` whose leading derivative hits its largest variable; all other
/// residuals inside the window are then required to vanish.
pub fn solve_by_recursion(v: Variant, w_cap: u32, h_cap: u32) -> Result<FockPolynomial> {
    if w_cap < 1 {
        return Err(Error::Invalid("weight cutoff must be at least 1".into()));
    }
    let mut s = FockPolynomial::zero(w_cap, h_cap);
    for w in 1..=w_cap {
        let mons = monomials_of_weight(w);
        for h in 0..=h_cap {
            for mon in &mons {
                let kmax = *mon.last().unwrap();
                let m = kmax as i64 - v.offset();
                if m < v.min_mode() {
                    continue;
                }
                let rest = residual_coefficient(v, m, &s, h as i32 - 1, &without(mon, kmax).unwrap());
                let c = rest * ri(2) / ri(mult(mon, kmax) as i64);
                s.set(h as i32 - 1, mon.clone(), c);
            }
        }
    }
    for m in v.min_mode()..=w_cap as i64 {
        let r = apply_virasoro(v, m, &s)?;
        let bad = r.terms().next().map(|((p, mon), c)| format!("L_{m} leaves {c} at hbar^{p} x^{mon:?}"));
        if let Some(msg) = bad {
            return Err(Error::InconsistentSystem(msg));
        }
    }
    Ok(s)
}

/// `L_m f` as a plain operator (no conjugation).
pub fn operator_action(v: Variant, m: i64, f: &FockPolynomial) -> FockPolynomial {
    let mut out = FockPolynomial::zero(u32::MAX, u32::MAX);
    for ((p, mon), c) in f.terms() {
        let a = m + v.offset();
        if a >= 0 {
            let k = a as u32;
            let e = mult(mon, k);
            if e > 0 {
                out.add(*p, without(mon, k).unwrap(), -c * ri(e as i64) / ri(2));
            }
        }
        if m >= 1 {
            for k1 in 0..m as u32 {
                let k2 = m as u32 - 1 - k1;
                let e1 = mult(mon, k1);
                if let Some(r1) = without(mon, k1) {
                    let e2 = mult(&r1, k2);
                    if let Some(r2) = without(&r1, k2) {
                        out.add(p + 1, r2, c * ri((e1 * e2) as i64) / ri(4));
                    }
                }
            }
        }
        let mut prev = None;
        for &k in mon {
            if prev == Some(k) {
                continue;
            }
            prev = Some(k);
            let e = mult(mon, k);
            let t = k as i64 - m;
            if t < 0 {
                continue;
            }
            // x^{2t+1} d/dx^{2k+1}, with 2t + 1 + 2m = 2k + 1
            let n = with(&without(mon, k).unwrap(), &[t as u32]);
            out.add(*p, n, c * ri(e as i64) * ri(2 * t + 1) / ri(2));
        }
        if m == 0 {
            out.add(*p, mon.clone(), c / ri(16));
        }
        if v == Variant::Kw && m == -1 {
            out.add(p - 1, with(mon, &[0, 0]), c / ri(4));
        }
    }
    out
}

/// `[L_m, L_n] = (m - n) L_{m+n}` on every monomial of weight `<= window`
/// and `hbar` power in `-1..=1`.
pub fn commutator_check(v: Variant, m: i64, n: i64, window: u32) -> bool {
    if m < v.min_mode() || n < v.min_mode() {
        return false;
    }
    for w in 0..=window {
        for mon in monomials_of_weight(w) {
            for p in -1..=1 {
                let mut f = FockPolynomial::zero(u32::MAX, u32::MAX);
                f.set(p, mon.clone(), Rat::one());
                let lhs = {
                    let mut a = operator_action(v, m, &operator_action(v, n, &f));
                    for ((q, mm), c) in operator_action(v, n, &operator_action(v, m, &f)).terms() {
                        a.add(*q, mm.clone(), -c.clone());
                    }
                    a
                };
                let mut rhs = FockPolynomial::zero(u32::MAX, u32::MAX);
                for ((q, mm), c) in operator_action(v, m + n, &f).terms() {
                    rhs.add(*q, mm.clone(), c * ri(m - n));
                }
                if lhs.terms != rhs.terms {
                    return false;
                }
            }
        }
    }
    true
}

/// `<tau_{k_1} ... tau_{k_n}>_h` read from a KW solution:
/// `log Z` coefficient times `|Aut| / prod (2k_i + 1)!!`.
pub fn intersection_numbers(s: &FockPolynomial) -> BTreeMap<(u32, FockMonomial), Rat> {
    let mut out = BTreeMap::new();
    for ((p, mon), c) in s.terms() {
        out.insert(((p + 1) as u32, mon.clone()), c * aut(mon) / df(mon));
    }
    out
}

pub(crate) fn aut(mon: &[u32]) -> Rat {
    let mut a = Rat::one();
    let mut i = 0;
    while i < mon.len() {
        let e = mult(mon, mon[i]);
        a *= factorial(e as u64);
        i += e as usize;
    }
    a
}

fn df(mon: &[u32]) -> Rat {
    mon.iter().fold(Rat::one(), |acc, &k| acc * double_factorial_odd(k as u64))
}

/// Dimension constraint `sum k_i = 3h - 3 + n` (KW) or `h - 1` (BGW) on
/// every nonzero coefficient; returns the first offender.
pub fn dimension_violation(v: Variant, s: &FockPolynomial) -> Option<(u32, FockMonomial)> {
    s.terms().map(|((p, m), _)| ((p + 1) as u32, m.clone())).find(|(h, m)| {
        let sum: i64 = m.iter().map(|&k| k as i64).sum();
        let want = match v {
            Variant::Kw => 3 * *h as i64 - 3 + m.len() as i64,
            Variant::Bgw => *h as i64 - 1,
        };
        sum != want
    })
}

/// Coefficients of `(x^1)^n` in the genus sum of `log Z`, `n = 1..=order`.
pub fn x1_specialization(s: &FockPolynomial, order: u32) -> Vec<Rat> {
    (1..=order)
        .map(|n| {
            let mon = vec![0; n as usize];
            (0..=s.genus_cap).map(|h| s.log_coefficient(h, &mon)).sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sources_from_zero() {
        let z = FockPolynomial::zero(6, 2);
        let r = apply_virasoro(Variant::Kw, -1, &z).unwrap();
        assert_eq!(r.get(-1, &[0, 0]), rat(1, 4));
        let r = apply_virasoro(Variant::Bgw, 0, &z).unwrap();
        assert_eq!(r.get(0, &[]), rat(1, 16));
    }

    #[test]
    fn kw_low_numbers() {
        let s = solve_by_recursion(Variant::Kw, 8, 2).unwrap();
        let t = intersection_numbers(&s);
        assert_eq!(t[&(0, vec![0, 0, 0])], ri(1));
        assert_eq!(t[&(1, vec![1])], rat(1, 24));
        assert_eq!(t[&(0, vec![0, 0, 0, 1])], ri(1));
        assert_eq!(t[&(1, vec![1, 1])], rat(1, 24));
        assert_eq!(t[&(2, vec![4])], rat(1, 1152));
        assert_eq!(t[&(2, vec![2, 3])], rat(29, 5760));
        assert_eq!(dimension_violation(Variant::Kw, &s), None);
    }

    #[test]
    fn bgw_low_coefficients() {
        let s = solve_by_recursion(Variant::Bgw, 8, 3).unwrap();
        // genus one: -(1/8) log(1 - x^1)
        let sp = x1_specialization(&s, 8);
        for (n, c) in sp.iter().enumerate() {
            assert_eq!(c, &rat(1, 8 * (n as i64 + 1)));
        }
        assert_eq!(dimension_violation(Variant::Bgw, &s), None);
        // genus two, x^3: 3!! times the Theta-class number 3/128
        assert_eq!(s.log_coefficient(2, &[1]), rat(9, 128));
    }

    #[test]
    fn window_overflow_is_reported() {
        let mut s = FockPolynomial::zero(2, 1);
        s.set(0, vec![5], ri(1));
        assert!(apply_virasoro(Variant::Kw, 0, &s).is_err());
    }

    #[test]
    fn commutators() {
        assert!(commutator_check(Variant::Kw, 0, 1, 4));
        assert!(commutator_check(Variant::Kw, -1, 1, 4));
        assert!(commutator_check(Variant::Kw, -1, 2, 4));
        assert!(commutator_check(Variant::Bgw, 0, 0, 4));
        assert!(commutator_check(Variant::Bgw, 1, 2, 4));
        assert!(!commutator_check(Variant::Bgw, -1, 0, 4));
    }

    #[test]
    fn weight_enumeration() {
        assert_eq!(monomials_of_weight(3).len(), 3);
        assert!(monomials_of_weight(5).iter().all(|m| weight(m) == 5));
    }
}
