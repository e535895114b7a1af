//! Dense bivariate power series truncated at total degree `t`.

use crate::algebra::{ri, Rat, TruncSeries};
use crate::error::{Error, Result};
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Bivar {
    /// `c[i][j]` for `i + j <= t`.
    c: Vec<Vec<Rat>>,
    t: usize,
}

impl Bivar {
    pub fn zero(t: usize) -> Self {
        Bivar {
            c: (0..=t).map(|i| vec![Rat::zero(); t - i + 1]).collect(),
            t,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Rat {
        if i + j <= self.t {
            self.c[i][j].clone()
        } else {
            Rat::zero()
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        if i + j <= self.t {
            self.c[i][j] = v;
        }
    }

    /// `f(z1)` or `f(z2)` from a power series known through degree `t`.
    pub fn from_univariate(f: &TruncSeries, second: bool, t: usize) -> Result<Self> {
        let mut b = Bivar::zero(t);
        for e in 0..=t {
            let v = f.coeff_checked(e as i64)?;
            if second {
                b.c[0][e] = v;
            } else {
                b.c[e][0] = v;
            }
        }
        Ok(b)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for i in 0..=self.t {
            for j in 0..=self.t - i {
                r.c[i][j] += &o.c[i][j];
            }
        }
        r
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let mut r = self.clone();
        for row in r.c.iter_mut() {
            for v in row.iter_mut() {
                *v *= s;
            }
        }
        r
    }

    fn nonzero(&self) -> Vec<(usize, usize, &Rat)> {
        let mut v = Vec::new();
        for (i, row) in self.c.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    v.push((i, j, x));
                }
            }
        }
        v
    }

    pub fn mul(&self, o: &Self) -> Self {
        let t = self.t.min(o.t);
        let mut r = Bivar::zero(t);
        let rhs = o.nonzero();
        for (i, j, a) in self.nonzero() {
            for &(k, l, b) in &rhs {
                if i + j + k + l <= t {
                    r.c[i + k][j + l] += a * b;
                }
            }
        }
        r
    }

    /// `1/self`, needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.c[0][0].clone();
        if c0.is_zero() {
            return Err(Error::NonUnitDivisor);
        }
        let inv0 = Rat::one() / &c0;
        let t = self.t;
        let terms: Vec<(usize, usize, &Rat)> = self.nonzero().into_iter().filter(|&(a, b, _)| a + b > 0).collect();
        let mut r = Bivar::zero(t);
        r.c[0][0] = inv0.clone();
        for d in 1..=t {
            for i in 0..=d {
                let j = d - i;
                let mut acc = Rat::zero();
                for &(a, b, s) in &terms {
                    if a <= i && b <= j {
                        acc += s * &r.c[i - a][j - b];
                    }
                }
                r.c[i][j] = -acc * &inv0;
            }
        }
        Ok(r)
    }

    /// `d/dz1`, dropping the top degree.
    pub fn d1(&self) -> Self {
        let t = self.t;
        let mut r = Bivar::zero(t);
        for i in 1..=t {
            for j in 0..=t - i {
                r.c[i - 1][j] = &self.c[i][j] * ri(i as i64);
            }
        }
        r.truncated(t.saturating_sub(1))
    }

    pub fn d2(&self) -> Self {
        let t = self.t;
        let mut r = Bivar::zero(t);
        for i in 0..=t {
            for j in 1..=t - i {
                r.c[i][j - 1] = &self.c[i][j] * ri(j as i64);
            }
        }
        r.truncated(t.saturating_sub(1))
    }

    pub fn truncated(&self, t: usize) -> Self {
        let t = t.min(self.t);
        let mut r = Bivar::zero(t);
        for i in 0..=t {
            for j in 0..=t - i {
                r.c[i][j] = self.c[i][j].clone();
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn inverse_of_separable() {
        // 1/(1 - z1 - z2) has binomial coefficients
        let mut g = Bivar::zero(6);
        g.set(0, 0, ri(1));
        g.set(1, 0, ri(-1));
        g.set(0, 1, ri(-1));
        let inv = g.inverse().unwrap();
        assert_eq!(inv.get(2, 3), ri(10));
        assert_eq!(g.mul(&inv).get(3, 2), rat(0, 1));
        assert_eq!(inv.d1().get(1, 3), ri(2 * 10));
    }
}
