use super::Rat;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Regular part of a Bergman kernel in local charts:
/// `B = [delta_ab / (z1 - z2)^2 + sum phi^{ab}_{kl} z1^k z2^l] dz1 dz2`.
///
/// Only one of each symmetric pair `(a,k) <-> (b,l)` is stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiSeriesSym {
    entries: BTreeMap<(usize, u32, usize, u32), Rat>,
    order: u32,
}

impl BiSeriesSym {
    pub fn zero(order: u32) -> Self {
        BiSeriesSym {
            entries: BTreeMap::new(),
            order,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn key(a: usize, k: u32, b: usize, l: u32) -> (usize, u32, usize, u32) {
        if (a, k) <= (b, l) {
            (a, k, b, l)
        } else {
            (b, l, a, k)
        }
    }

    /// Sets `phi^{ab}_{kl}` and, implicitly, `phi^{ba}_{lk}`.
    pub fn set(&mut self, a: usize, b: usize, k: u32, l: u32, v: Rat) {
        let key = Self::key(a, k, b, l);
        if v.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, v);
        }
    }

    pub fn get(&self, a: usize, b: usize, k: u32, l: u32) -> Rat {
        self.entries
            .get(&Self::key(a, k, b, l))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn symmetric_lookup() {
        let mut p = BiSeriesSym::zero(4);
        p.set(1, 0, 3, 2, rat(5, 7));
        assert_eq!(p.get(0, 1, 2, 3), rat(5, 7));
        assert_eq!(p.get(1, 0, 3, 2), rat(5, 7));
        assert_eq!(p.get(0, 1, 3, 2), rat(0, 1));
    }
}
