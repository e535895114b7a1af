//! Exact rationals, truncated Laurent series and the residue calculus on them.

mod bivariate;
mod differential;
pub mod mpoly;
pub mod rational_fn;
mod series;

pub use bivariate::BiSeriesSym;
pub use differential::{antiderivative, residue_at0, symplectic_pair, LaurentDifferential};
pub use series::{TruncSeries, EXACT};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn ri(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u64) -> Rat {
    (1..=n).fold(Rat::one(), |acc, k| acc * ri(k as i64))
}

/// (2k+1)!! with (-1)!! = 1.
pub fn double_factorial_odd(k: u64) -> Rat {
    (0..=k).fold(Rat::one(), |acc, j| acc * ri(2 * j as i64 + 1))
}

pub fn binomial(n: u64, k: u64) -> Rat {
    if k > n {
        return Rat::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rat_sqrt(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Parse "p/q" or "p".
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                return None;
            }
            Some(BigRational::new(a, b))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

pub fn rat_to_f64(q: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_squares_only() {
        assert_eq!(rat_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rat_sqrt(&rat(2, 1)), None);
        assert_eq!(rat_sqrt(&rat(-1, 1)), None);
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial_odd(0), ri(1));
        assert_eq!(double_factorial_odd(2), ri(15));
    }

    #[test]
    fn parses() {
        assert_eq!(parse_rat("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rat("1/0"), None);
    }
}
