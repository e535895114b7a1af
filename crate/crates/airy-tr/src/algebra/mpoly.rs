//! Sparse commutative polynomials with rational coefficients.
//! A monomial is the sorted multiset of its variable indices.

use super::{ri, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;

pub type Monomial = Vec<usize>;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Rat>,
}

fn merge(a: &[usize], b: &[usize]) -> Monomial {
    let mut m = Vec::with_capacity(a.len() + b.len());
    m.extend_from_slice(a);
    m.extend_from_slice(b);
    m.sort_unstable();
    m
}

impl MPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn var(i: usize) -> Self {
        let mut p = Self::zero();
        p.add_term(vec![i], Rat::from_integer(1.into()));
        p
    }

    pub fn add_term(&mut self, mut m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        m.sort_unstable();
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn coeff(&self, m: &[usize]) -> Rat {
        let mut k = m.to_vec();
        k.sort_unstable();
        self.terms.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, o: &MPoly) -> MPoly {
        self.add(&o.scale(&-ri(1)))
    }

    pub fn scale(&self, c: &Rat) -> MPoly {
        if c.is_zero() {
            return MPoly::zero();
        }
        MPoly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Product keeping only total degree `<= max_deg`.
    pub fn mul_trunc(&self, o: &MPoly, max_deg: usize) -> MPoly {
        let mut r = MPoly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &o.terms {
                if a.len() + b.len() <= max_deg {
                    r.add_term(merge(a, b), x * y);
                }
            }
        }
        r
    }

    pub fn derivative(&self, i: usize) -> MPoly {
        let mut r = MPoly::zero();
        for (m, c) in &self.terms {
            let k = m.iter().filter(|&&v| v == i).count();
            if k > 0 {
                let mut mm = m.clone();
                let pos = mm.iter().position(|&v| v == i).unwrap();
                mm.remove(pos);
                r.add_term(mm, c * ri(k as i64));
            }
        }
        r
    }

    pub fn truncate(&self, max_deg: usize) -> MPoly {
        MPoly {
            terms: self.terms.iter().filter(|(m, _)| m.len() <= max_deg).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn homogeneous_part(&self, d: usize) -> MPoly {
        MPoly {
            terms: self.terms.iter().filter(|(m, _)| m.len() == d).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.len()).min()
    }

    /// Multiply by the variable `i`.
    pub fn times_var(&self, i: usize) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (merge(m, &[i]), c.clone())).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn product_and_derivative() {
        let x = MPoly::var(0);
        let y = MPoly::var(1);
        let s = x.add(&y);
        let sq = s.mul_trunc(&s, 4);
        assert_eq!(sq.coeff(&[0, 1]), rat(2, 1));
        assert_eq!(sq.derivative(0).coeff(&[0]), rat(2, 1));
        assert_eq!(sq.mul_trunc(&s, 2).len(), 0);
    }

    #[test]
    fn cancellation_removes_terms() {
        let x = MPoly::var(3);
        assert!(x.sub(&x).is_empty());
    }
}
