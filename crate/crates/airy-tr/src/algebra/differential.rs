use super::{ri, Rat, TruncSeries};
use crate::error::{Error, Result};
use num_traits::Zero;

/// `S(z) dz/z` with no `dz/z` term. `pole(k)` is the coefficient of
/// `z^{-k} dz/z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentDifferential {
    series: TruncSeries,
}

impl LaurentDifferential {
    pub fn new(series: TruncSeries) -> Result<Self> {
        match series.coeff(0) {
            Some(c) if !c.is_zero() => Err(Error::Invalid("differential has a nonzero dz/z term".into())),
            _ => Ok(LaurentDifferential { series }),
        }
    }

    /// From an expansion `f(z) dz`.
    pub fn from_dz(f: &TruncSeries) -> Result<Self> {
        Self::new(f.shift(1))
    }

    /// Single term `c z^{e} dz/z`, `e != 0`.
    pub fn monomial(c: Rat, e: i64, order: i64) -> Result<Self> {
        Self::new(TruncSeries::monomial(c, e, order))
    }

    pub fn series(&self) -> &TruncSeries {
        &self.series
    }

    /// Coefficient `f` with `self = f(z) dz`.
    pub fn dz_coefficients(&self) -> TruncSeries {
        self.series.shift(-1)
    }

    pub fn pole(&self, k: i64) -> Option<Rat> {
        self.series.coeff(-k)
    }

    pub fn add(&self, other: &Self) -> Self {
        LaurentDifferential {
            series: self.series.add(&other.series),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        LaurentDifferential {
            series: self.series.scale(c),
        }
    }

    /// Pullback under `z -> -z`; `dz/z` is invariant.
    pub fn reflect(&self) -> Self {
        LaurentDifferential {
            series: self.series.reflect(),
        }
    }
}

/// Primitive with zero constant term.
pub fn antiderivative(d: &LaurentDifferential) -> TruncSeries {
    let s = d.series();
    let terms: Vec<(i64, Rat)> = s.terms().map(|(e, c)| (e, c / ri(e))).collect();
    TruncSeries::from_terms(&terms, s.order())
}

/// `Res_{z=0} f d`.
pub fn residue_at0(f: &TruncSeries, d: &LaurentDifferential) -> Result<Rat> {
    f.mul(d.series()).coeff_checked(0)
}

/// `Res f1 eta2` with `d f1 = eta1`.
pub fn symplectic_pair(eta1: &LaurentDifferential, eta2: &LaurentDifferential) -> Result<Rat> {
    residue_at0(&antiderivative(eta1), eta2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, TruncSeries};

    fn dz(e: i64, c: Rat) -> LaurentDifferential {
        LaurentDifferential::monomial(c, e, 20).unwrap()
    }

    #[test]
    fn antiderivative_examples() {
        assert_eq!(antiderivative(&dz(2, rat(1, 1))), TruncSeries::from_terms(&[(2, rat(1, 2))], 20));
        assert_eq!(antiderivative(&dz(-2, rat(1, 1))), TruncSeries::from_terms(&[(-2, rat(-1, 2))], 20));
        let d = dz(1, rat(3, 1)).add(&dz(3, rat(4, 1)));
        assert_eq!(antiderivative(&d), TruncSeries::from_terms(&[(1, rat(3, 1)), (3, rat(4, 3))], 20));
    }

    #[test]
    fn residue_examples() {
        let inv_z = TruncSeries::from_terms(&[(-1, rat(1, 1))], 20);
        assert_eq!(residue_at0(&inv_z, &dz(1, rat(1, 1))).unwrap(), rat(1, 1));
        assert_eq!(residue_at0(&TruncSeries::one(), &dz(2, rat(1, 1))).unwrap(), rat(0, 1));
        let f = TruncSeries::from_terms(&[(-3, rat(1, 1))], 20);
        let d = dz(1, rat(2, 1)).add(&dz(3, rat(5, 1)));
        assert_eq!(residue_at0(&f, &d).unwrap(), rat(5, 1));
    }

    #[test]
    fn residue_outside_window_fails() {
        let f = TruncSeries::from_terms(&[(-3, rat(1, 1))], 20);
        let d = LaurentDifferential::new(TruncSeries::from_terms(&[(1, rat(1, 1))], 2)).unwrap();
        let e = residue_at0(&f, &d).unwrap_err();
        assert!(e.to_string().starts_with("truncation too short"));
    }

    #[test]
    fn pairing_examples() {
        for n in 1..6 {
            let v = symplectic_pair(&dz(-n, rat(1, 1)), &dz(n, rat(1, 1))).unwrap();
            assert_eq!(v, rat(-1, n));
        }
        assert_eq!(symplectic_pair(&dz(1, rat(1, 1)), &dz(1, rat(1, 1))).unwrap(), rat(0, 1));
        assert_eq!(symplectic_pair(&dz(2, rat(1, 1)), &dz(3, rat(1, 1))).unwrap(), rat(0, 1));
    }

    #[test]
    fn dz_over_z_term_rejected() {
        assert!(LaurentDifferential::monomial(rat(1, 1), 0, 5).is_err());
    }
}
