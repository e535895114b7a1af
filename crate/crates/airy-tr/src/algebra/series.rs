use super::{ri, Rat};
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::fmt;

/// Truncated Laurent series in one variable.
///
/// Exponents below `low` are known to vanish, exponents in `low..=order` are
/// known, exponents above `order` are unknown (not zero). Stored coefficients
/// may stop early; known exponents past the stored ones are zero, so exact
/// polynomials use `order = EXACT` without materializing the window.
#[derive(Clone, Debug)]
pub struct TruncSeries {
    low: i64,
    coeffs: Vec<Rat>,
    order: i64,
}

/// Truncation order meaning "known to all orders".
pub const EXACT: i64 = i64::MAX / 8;

impl PartialEq for TruncSeries {
    fn eq(&self, other: &Self) -> bool {
        if self.order != other.order {
            return false;
        }
        let lo = self.low.min(other.low);
        let hi = self.top().max(other.top());
        (lo..=hi).all(|e| self.coeff(e) == other.coeff(e))
    }
}

impl Eq for TruncSeries {}

impl TruncSeries {
    /// Coefficients for exponents `low, low+1, ...`; entries past `order`
    /// are dropped, missing ones are zero.
    pub fn new(low: i64, mut coeffs: Vec<Rat>, order: i64) -> Self {
        // saturate: `order` may be EXACT, which overflows a 32-bit usize
        let len = usize::try_from((order - low + 1).max(0)).unwrap_or(usize::MAX);
        coeffs.truncate(len);
        let mut s = TruncSeries {
            low: low.min(order + 1),
            coeffs,
            order,
        };
        s.trim();
        s
    }

    pub fn from_ints(low: i64, coeffs: &[i64], order: i64) -> Self {
        Self::new(low, coeffs.iter().map(|&c| ri(c)).collect(), order)
    }

    /// The zero series known through `order`.
    pub fn zero(order: i64) -> Self {
        TruncSeries {
            low: order.saturating_add(1),
            coeffs: Vec::new(),
            order,
        }
    }

    pub fn one() -> Self {
        Self::new(0, vec![Rat::one()], EXACT)
    }

    pub fn monomial(c: Rat, e: i64, order: i64) -> Self {
        if e > order {
            return Self::zero(order);
        }
        Self::new(e, vec![c], order)
    }

    /// Finite sum of terms, known through `order`.
    pub fn from_terms(terms: &[(i64, Rat)], order: i64) -> Self {
        let kept: Vec<_> = terms.iter().filter(|t| t.0 <= order).collect();
        let low = kept.iter().map(|t| t.0).min().unwrap_or(0);
        let high = kept.iter().map(|t| t.0).max().unwrap_or(low - 1);
        let mut coeffs = vec![Rat::zero(); (high - low + 1).max(0) as usize];
        for (e, c) in kept {
            coeffs[(e - low) as usize] += c;
        }
        Self::new(low, coeffs, order)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = self.order.saturating_add(1);
        }
    }

    /// Highest stored exponent.
    fn top(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn order(&self) -> i64 {
        self.order
    }

    pub fn is_exact(&self) -> bool {
        self.order >= EXACT / 2
    }

    /// `None` when the exponent lies beyond the truncation.
    pub fn coeff(&self, e: i64) -> Option<Rat> {
        if e > self.order {
            None
        } else if e < self.low || e > self.top() {
            Some(Rat::zero())
        } else {
            Some(self.coeffs[(e - self.low) as usize].clone())
        }
    }

    pub fn coeff_checked(&self, e: i64) -> Result<Rat> {
        self.coeff(e).ok_or(Error::TruncationTooShort {
            needed: e,
            known: self.order,
        })
    }

    /// Nonzero known terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    /// Lowest exponent with a nonzero known coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.terms().next().map(|(e, _)| e)
    }

    pub fn is_known_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, order: i64) -> Self {
        Self::new(self.low, self.coeffs.clone(), order.min(self.order))
    }

    pub fn add(&self, b: &Self) -> Self {
        self.combine(b, false)
    }

    pub fn sub(&self, b: &Self) -> Self {
        self.combine(b, true)
    }

    fn combine(&self, b: &Self, negate: bool) -> Self {
        let order = self.order.min(b.order);
        if self.coeffs.is_empty() && !negate {
            return b.truncate(order);
        }
        if b.coeffs.is_empty() {
            return self.truncate(order);
        }
        let low = self.low.min(b.low);
        let high = self.top().max(b.top()).min(order);
        let mut coeffs = vec![Rat::zero(); (high - low + 1).max(0) as usize];
        for (e, c) in self.terms() {
            if e <= high {
                coeffs[(e - low) as usize] += c;
            }
        }
        for (e, c) in b.terms() {
            if e <= high {
                if negate {
                    coeffs[(e - low) as usize] -= c;
                } else {
                    coeffs[(e - low) as usize] += c;
                }
            }
        }
        Self::new(low, coeffs, order)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::new(self.low, self.coeffs.iter().map(|x| x * c).collect(), self.order)
    }

    /// Product; known through `min(a.order + b.low, b.order + a.low)`, where
    /// `low` is the valuation (or the known-zero bound for zero series).
    pub fn mul(&self, b: &Self) -> Self {
        let order = self.order.saturating_add(b.low).min(b.order.saturating_add(self.low)).min(EXACT);
        if self.coeffs.is_empty() || b.coeffs.is_empty() {
            return TruncSeries::zero(order);
        }
        let low = self.low + b.low;
        let high = (self.top() + b.top()).min(order);
        if high < low {
            return TruncSeries::zero(order);
        }
        let mut coeffs = vec![Rat::zero(); (high - low + 1) as usize];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= coeffs.len() {
                    break;
                }
                if !y.is_zero() {
                    coeffs[k] += x * y;
                }
            }
        }
        Self::new(low, coeffs, order)
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        TruncSeries {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
            order: if self.is_exact() { self.order } else { self.order + k },
        }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * ri(self.low + i as i64))
            .collect();
        let order = if self.is_exact() { self.order } else { self.order - 1 };
        Self::new(self.low - 1, coeffs, order)
    }

    /// `1/b`, provided the lowest known coefficient of `b` is nonzero.
    pub fn inverse(&self) -> Result<Self> {
        let m = self.valuation().ok_or(Error::NonUnitDivisor)?;
        let b0 = self.coeff(m).unwrap();
        let inv0 = Rat::one() / &b0;
        if self.coeffs.len() == 1 {
            let order = if self.is_exact() { EXACT } else { self.order - 2 * m };
            return Ok(Self::new(-m, vec![inv0], order));
        }
        if self.is_exact() {
            return Err(Error::Invalid("inverse of a non-monomial exact series needs a truncation".into()));
        }
        let rel = self.order - m;
        let mut q: Vec<Rat> = Vec::with_capacity(rel as usize + 1);
        q.push(inv0.clone());
        for j in 1..=rel {
            let mut acc = Rat::zero();
            for i in 1..=j.min(self.coeffs.len() as i64 - 1) {
                let bi = &self.coeffs[i as usize];
                if !bi.is_zero() {
                    acc += bi * &q[(j - i) as usize];
                }
            }
            q.push(-acc * &inv0);
        }
        Ok(Self::new(-m, q, self.order - 2 * m))
    }

    pub fn div(&self, b: &Self) -> Result<Self> {
        Ok(self.mul(&b.inverse()?))
    }

    /// Integer power; negative powers go through `inverse`.
    pub fn powi(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.inverse()?.powi(-n);
        }
        let mut acc = TruncSeries::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(acc)
    }

    /// `z -> -z`.
    pub fn reflect(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| if (self.low + i as i64) % 2 == 0 { c.clone() } else { -c })
            .collect();
        Self::new(self.low, coeffs, self.order)
    }

    /// `(even, odd)` parts under `z -> -z`.
    pub fn parity_split(&self) -> (Self, Self) {
        let pick = |want_even: bool| {
            let coeffs = self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if ((self.low + i as i64).rem_euclid(2) == 0) == want_even {
                        c.clone()
                    } else {
                        Rat::zero()
                    }
                })
                .collect();
            Self::new(self.low, coeffs, self.order)
        };
        (pick(true), pick(false))
    }

    /// `f(g(z))` for `f` without negative exponents and `g` vanishing at 0.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if self.valuation().is_some_and(|v| v < 0) {
            return Err(Error::Invalid("compose: outer series has a pole".into()));
        }
        let gv = match g.valuation() {
            Some(v) if v >= 1 => v,
            None if g.low >= 1 => g.order + 1,
            _ => return Err(Error::Invalid("compose: inner series must vanish at 0".into())),
        };
        let mut order = if self.is_exact() {
            EXACT
        } else {
            (self.order + 1).saturating_mul(gv) - 1
        };
        if self.top() >= 1 {
            order = order.min(g.order);
        }
        let mut acc = TruncSeries::zero(order);
        let mut power = TruncSeries::one();
        for e in 0..=self.top().max(0) {
            if e > 0 {
                power = power.mul(g).truncate(order);
            }
            if let Some(c) = self.coeff(e) {
                if !c.is_zero() {
                    acc = acc.add(&power.scale(&c));
                }
            }
        }
        Ok(acc.truncate(order))
    }

    /// Compositional inverse of `a1 w + a2 w^2 + ...` with `a1 != 0`.
    pub fn revert(&self) -> Result<Self> {
        let a1 = self
            .coeff(1)
            .filter(|c| !c.is_zero() && self.valuation() == Some(1))
            .ok_or(Error::Invalid("revert: series must start at a nonzero linear term".into()))?;
        let _ = a1;
        let n = self.order;
        if n >= EXACT / 2 {
            return Err(Error::Invalid("revert needs a truncation".into()));
        }
        // Lagrange: [z^k] W = (1/k) [w^{k-1}] (w / f(w))^k
        let q = self.truncate(n).shift(-1).inverse()?;
        let mut coeffs = vec![Rat::zero(); n as usize];
        let mut pw = TruncSeries::one();
        for k in 1..=n {
            pw = pw.mul(&q).truncate(n);
            coeffs[(k - 1) as usize] = pw.coeff_checked(k - 1)? / Rat::from_integer(k.into());
        }
        Ok(Self::new(1, coeffs, n))
    }

    /// Square root of a series led by `c z^{2m}` with `c` a rational square.
    pub fn sqrt(&self) -> Result<Self> {
        let m = self.valuation().ok_or(Error::Invalid("sqrt of zero series".into()))?;
        if m % 2 != 0 {
            return Err(Error::Invalid("sqrt: odd leading exponent".into()));
        }
        let c = self.coeff(m).unwrap();
        let r0 = super::rat_sqrt(&c).ok_or(Error::Invalid("sqrt: leading coefficient not a square".into()))?;
        let rel = self.order - m;
        let mut r: Vec<Rat> = vec![r0.clone()];
        let two_r0 = &r0 + &r0;
        for j in 1..=rel {
            let mut acc = self.coeff(m + j).unwrap();
            for i in 1..j {
                acc -= &r[i as usize] * &r[(j - i) as usize];
            }
            r.push(acc / &two_r0);
        }
        Ok(Self::new(m / 2, r, m / 2 + rel))
    }
}

impl fmt::Display for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})z^{e}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    fn s(low: i64, c: &[i64], order: i64) -> TruncSeries {
        TruncSeries::from_ints(low, c, order)
    }

    #[test]
    fn exact_series_keep_their_coefficients() {
        // EXACT - low + 1 does not fit a 32-bit usize; this once emptied every exact series on wasm32
        let e = s(-2, &[1, 0, 3], EXACT);
        assert_eq!(e.coeff(-2), Some(rat(1, 1)));
        assert_eq!(e.coeff(0), Some(rat(3, 1)));
        assert_eq!(TruncSeries::monomial(rat(5, 1), 0, EXACT).coeff(0), Some(rat(5, 1)));
    }

    #[test]
    fn difference_of_squares() {
        let p = s(0, &[1, 1], 5).mul(&s(0, &[1, -1], 5));
        assert_eq!(p, s(0, &[1, 0, -1], 5));
    }

    #[test]
    fn derivative_of_cube() {
        assert_eq!(s(3, &[1], 8).derivative(), s(2, &[3], 7));
    }

    #[test]
    fn geometric_series() {
        let q = s(0, &[1], 3).div(&s(0, &[1, -1], 3)).unwrap();
        assert_eq!(q, s(0, &[1, 1, 1, 1], 3));
    }

    #[test]
    fn zero_divisor_is_rejected() {
        let e = s(0, &[1], 3).div(&s(0, &[0, 0], 3)).unwrap_err();
        assert_eq!(e.to_string(), "non-unit divisor");
    }

    #[test]
    fn order_tracks_pessimistically() {
        let a = s(-2, &[1, 0, 0, 0], 1);
        let b = s(1, &[1, 1], 5);
        let p = a.mul(&b);
        assert_eq!(p.order(), 2);
        assert_eq!(p.coeff(3), None);
    }

    #[test]
    fn parity_examples() {
        let (e, o) = s(0, &[1, 1, 1], 4).parity_split();
        assert_eq!(e, s(0, &[1, 0, 1], 4));
        assert_eq!(o, s(0, &[0, 1], 4));
        let (e, o) = s(-2, &[1, 1], 3).parity_split();
        assert_eq!(e.valuation(), Some(-2));
        assert_eq!(o.valuation(), Some(-1));
    }

    #[test]
    fn revert_and_compose_roundtrip() {
        // z = w + w^2  =>  w = z - z^2 + 2 z^3 - 5 z^4 + ...
        let f = s(1, &[1, 1], 6);
        let w = f.revert().unwrap();
        assert_eq!(w.coeff(4), Some(rat(-5, 1)));
        let id = f.compose(&w).unwrap();
        assert_eq!(id.truncate(6), s(1, &[1], 6));
    }

    #[test]
    fn sqrt_of_shifted_square() {
        let f = s(2, &[4, 4, 1], 8); // (2z + z^2)^2
        assert_eq!(f.sqrt().unwrap().truncate(7), s(1, &[2, 1], 7));
    }

    #[test]
    fn negative_powers() {
        let f = s(1, &[1, 1], 6).powi(-2).unwrap();
        // (z + z^2)^{-2} = z^{-2} (1 - 2z + 3z^2 - ...)
        assert_eq!(f.coeff(-2), Some(rat(1, 1)));
        assert_eq!(f.coeff(0), Some(rat(3, 1)));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::algebra::rat;
    use proptest::prelude::*;

    fn series_strategy() -> impl Strategy<Value = TruncSeries> {
        (-3i64..3, proptest::collection::vec(-7i64..8, 0..8), 0i64..9).prop_map(|(low, cs, extra)| {
            let coeffs = cs.iter().map(|&c| rat(c, 2)).collect();
            TruncSeries::new(low, coeffs, low + extra)
        })
    }

    proptest! {
        #[test]
        fn mul_commutes(a in series_strategy(), b in series_strategy()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
        }

        #[test]
        fn mul_associates_on_common_window(a in series_strategy(), b in series_strategy(), c in series_strategy()) {
            let l = a.mul(&b).mul(&c);
            let r = a.mul(&b.mul(&c));
            let o = l.order().min(r.order());
            prop_assert_eq!(l.truncate(o), r.truncate(o));
        }

        #[test]
        fn division_undoes_multiplication(a in series_strategy(), b in series_strategy()) {
            prop_assume!(b.valuation().is_some());
            let q = a.mul(&b).div(&b).unwrap();
            let o = q.order().min(a.order());
            prop_assert_eq!(q.truncate(o), a.truncate(o));
        }

        #[test]
        fn parity_split_recombines(a in series_strategy()) {
            let (e, o) = a.parity_split();
            prop_assert_eq!(e.add(&o), a.clone());
            prop_assert_eq!(e.reflect(), e.clone());
            prop_assert_eq!(o.reflect(), o.neg());
        }
    }
}
