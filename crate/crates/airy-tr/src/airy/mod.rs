//! Airy structures: tensors `(A, B, C, eps)`, the standard KW/BGW examples,
//! constraint checking, the classical Lagrangian expansion and the quantum
//! (abstract) recursion.

mod classical;
mod constraints;
mod quantum;
mod weyl;

pub use classical::{classical_expand, conic_coefficients, potential_s0, LagrangianExpansion};
pub use constraints::{check_classical_constraints, check_quantum_constraint, ConstraintReport, Violation};
pub use quantum::{abstract_tr, abstract_tr_for, FreeEnergyTable};

use crate::algebra::{rat, Rat};
use crate::error::{Error, Result};
use num_traits::Zero;
use std::collections::BTreeMap;

/// Degree bookkeeping for the infinite KW/BGW families truncated at a
/// maximal mode: `deg x^k = shift - k`, `deg y_k = k + shift`,
/// `deg hbar = 2 shift`, so every `H_k` is homogeneous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub shift: i64,
    /// Weight (the KdV index `k`) of each mode position.
    pub weights: Vec<i64>,
    /// Largest weight kept by the truncation.
    pub max_weight: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AiryTensors {
    labels: Vec<i64>,
    /// Keys are sorted position triples.
    a: BTreeMap<[usize; 3], Rat>,
    /// `(i, j, k)` holds `b_ij^k`.
    b: BTreeMap<(usize, usize, usize), Rat>,
    /// `(i, j, k)` with `j <= k` holds `c_i^jk`.
    c: BTreeMap<(usize, usize, usize), Rat>,
    eps: BTreeMap<usize, Rat>,
    grading: Option<Grading>,
    /// Even KdV modes whose `H_k = -y_k` are left out of the label set.
    pub implicit_even_modes: bool,
}

fn sort3(i: usize, j: usize, k: usize) -> [usize; 3] {
    let mut t = [i, j, k];
    t.sort_unstable();
    t
}

impl AiryTensors {
    pub fn new(labels: Vec<i64>) -> Result<Self> {
        let mut seen = labels.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != labels.len() {
            return Err(Error::LabelClash("repeated mode label".into()));
        }
        Ok(AiryTensors {
            labels,
            a: BTreeMap::new(),
            b: BTreeMap::new(),
            c: BTreeMap::new(),
            eps: BTreeMap::new(),
            grading: None,
            implicit_even_modes: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn position(&self, label: i64) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn grading(&self) -> Option<&Grading> {
        self.grading.as_ref()
    }

    pub fn set_grading(&mut self, g: Option<Grading>) {
        self.grading = g;
    }

    /// Adds to the symmetric entry `a_ijk`.
    pub fn add_a(&mut self, i: usize, j: usize, k: usize, v: Rat) {
        insert_add(&mut self.a, sort3(i, j, k), v);
    }

    pub fn add_b(&mut self, i: usize, j: usize, k: usize, v: Rat) {
        insert_add(&mut self.b, (i, j, k), v);
    }

    /// Adds to `c_i^jk` (and so to `c_i^kj`).
    pub fn add_c(&mut self, i: usize, j: usize, k: usize, v: Rat) {
        insert_add(&mut self.c, (i, j.min(k), j.max(k)), v);
    }

    pub fn add_eps(&mut self, i: usize, v: Rat) {
        insert_add(&mut self.eps, i, v);
    }

    pub fn a(&self, i: usize, j: usize, k: usize) -> Rat {
        self.a.get(&sort3(i, j, k)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn b(&self, i: usize, j: usize, k: usize) -> Rat {
        self.b.get(&(i, j, k)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> Rat {
        self.c.get(&(i, j.min(k), j.max(k))).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eps(&self, i: usize) -> Rat {
        self.eps.get(&i).cloned().unwrap_or_else(Rat::zero)
    }

    /// `g_ij^k = 2 (b_ji^k - b_ij^k)`.
    pub fn g(&self, i: usize, j: usize, k: usize) -> Rat {
        (self.b(j, i, k) - self.b(i, j, k)) * rat(2, 1)
    }

    /// Nonzero `g_ij^k` as `(k, value)`.
    pub fn g_row(&self, i: usize, j: usize) -> Vec<(usize, Rat)> {
        let mut ks: Vec<usize> = self
            .b
            .keys()
            .filter(|&&(p, q, _)| (p == i && q == j) || (p == j && q == i))
            .map(|&(_, _, k)| k)
            .collect();
        ks.sort_unstable();
        ks.dedup();
        ks.into_iter()
            .map(|k| (k, self.g(i, j, k)))
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    /// Ordered pairs `(j, k)` with `a_ijk != 0`.
    pub fn a_pairs(&self, i: usize) -> Vec<(usize, usize, Rat)> {
        let mut out = Vec::new();
        for (t, v) in &self.a {
            if !t.contains(&i) {
                continue;
            }
            let pos = t.iter().position(|&x| x == i).unwrap();
            let rest: Vec<usize> = (0..3).filter(|&p| p != pos).map(|p| t[p]).collect();
            out.push((rest[0], rest[1], v.clone()));
            if rest[0] != rest[1] {
                out.push((rest[1], rest[0], v.clone()));
            }
        }
        out
    }

    /// `(j, k, b_ij^k)`.
    pub fn b_row(&self, i: usize) -> Vec<(usize, usize, Rat)> {
        self.b.range((i, 0, 0)..(i + 1, 0, 0)).map(|(&(_, j, k), v)| (j, k, v.clone())).collect()
    }

    /// Ordered pairs `(j, k, c_i^jk)`.
    pub fn c_pairs(&self, i: usize) -> Vec<(usize, usize, Rat)> {
        let mut out = Vec::new();
        for (&(_, j, k), v) in self.c.range((i, 0, 0)..(i + 1, 0, 0)) {
            out.push((j, k, v.clone()));
            if j != k {
                out.push((k, j, v.clone()));
            }
        }
        out
    }

    pub fn a_entries(&self) -> impl Iterator<Item = (&[usize; 3], &Rat)> {
        self.a.iter()
    }

    pub fn b_entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Rat)> {
        self.b.iter()
    }

    pub fn c_entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Rat)> {
        self.c.iter()
    }

    pub fn eps_entries(&self) -> impl Iterator<Item = (&usize, &Rat)> {
        self.eps.iter()
    }

    pub fn a_is_zero(&self) -> bool {
        self.a.is_empty()
    }

    /// All tensors and `eps` multiplied by `lambda`; the relations are
    /// homogeneous so this is again an Airy structure.
    pub fn scaled(&self, lambda: &Rat) -> Self {
        fn sc<K: Ord + Clone>(m: &BTreeMap<K, Rat>, l: &Rat) -> BTreeMap<K, Rat> {
            m.iter().map(|(k, v)| (k.clone(), v * l)).collect()
        }
        AiryTensors {
            labels: self.labels.clone(),
            a: sc(&self.a, lambda),
            b: sc(&self.b, lambda),
            c: sc(&self.c, lambda),
            eps: self.eps.iter().map(|(k, v)| (*k, v * lambda)).collect(),
            grading: self.grading.clone(),
            implicit_even_modes: self.implicit_even_modes,
        }
    }

    /// Same tensors with every label shifted by `offset`.
    pub fn relabeled(&self, offset: i64) -> Self {
        let mut t = self.clone();
        t.labels = self.labels.iter().map(|l| l + offset).collect();
        t
    }
}

fn insert_add<K: Ord>(m: &mut BTreeMap<K, Rat>, k: K, v: Rat) {
    if v.is_zero() {
        return;
    }
    let e = m.entry(k).or_insert_with(Rat::zero);
    *e += v;
}

/// Which KdV family to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KdvFamily {
    /// Kontsevich-Witten: `H_k ~ hbar L_{(k-3)/2}`.
    Kw,
    /// Brezin-Gross-Witten: `H_k ~ hbar L_{(k-1)/2}`.
    Bgw,
}

impl KdvFamily {
    pub fn shift(self) -> i64 {
        match self {
            KdvFamily::Kw => 3,
            KdvFamily::Bgw => 1,
        }
    }
}

/// The KW Airy structure on odd modes `1..=max_mode`, normalized so that
/// `H_k = -y_k + ...` (twice `hbar L_{(k-3)/2}` with `hbar d = y`).
pub fn build_kw(max_mode: i64) -> Result<AiryTensors> {
    build_kdv(KdvFamily::Kw, max_mode, false)
}

/// The BGW Airy structure on odd modes `1..=max_mode`, same normalization.
pub fn build_bgw(max_mode: i64) -> Result<AiryTensors> {
    build_kdv(KdvFamily::Bgw, max_mode, false)
}

/// KW or BGW tensors. With `with_even` the even modes (`H_k = -y_k`) are
/// listed explicitly instead of being implicit.
pub fn build_kdv(family: KdvFamily, max_mode: i64, with_even: bool) -> Result<AiryTensors> {
    let min = match family {
        KdvFamily::Kw => 3,
        KdvFamily::Bgw => 1,
    };
    if max_mode < min || max_mode % 2 == 0 {
        return Err(Error::Invalid(format!("max mode must be odd and at least {min}")));
    }
    let labels: Vec<i64> = if with_even {
        (1..=max_mode).collect()
    } else {
        (1..=max_mode).step_by(2).collect()
    };
    let mut t = AiryTensors::new(labels.clone())?;
    t.implicit_even_modes = !with_even;
    let s = family.shift();
    let pos = |l: i64| labels.iter().position(|&x| x == l);
    let half = rat(1, 2);
    for k in (1..=max_mode).step_by(2) {
        let pk = pos(k).unwrap();
        // 1/2 sum_{i+j=k-s} y_i y_j
        for i in (1..=max_mode).step_by(2) {
            let j = k - s - i;
            if j >= 1 && j % 2 == 1 && i <= j {
                t.add_c(pk, pos(i).unwrap(), pos(j).unwrap(), half.clone());
            }
        }
        // sum_i i x^i y_{i+k-s} = 2 b_{k i}^{i+k-s} x^i y_{i+k-s}
        for i in (1..=max_mode).step_by(2) {
            let m = i + k - s;
            if m >= 1 && m <= max_mode {
                t.add_b(pk, pos(i).unwrap(), pos(m).unwrap(), rat(i, 2));
            }
        }
    }
    match family {
        KdvFamily::Kw => {
            let p1 = pos(1).unwrap();
            t.add_a(p1, p1, p1, half.clone());
            t.add_eps(pos(3).unwrap(), rat(1, 8));
        }
        KdvFamily::Bgw => {
            t.add_eps(pos(1).unwrap(), rat(1, 8));
        }
    }
    t.grading = Some(Grading {
        shift: s,
        weights: labels.clone(),
        max_weight: max_mode,
    });
    Ok(t)
}

/// Block-diagonal union of structures on disjoint label sets.
pub fn product_structure(parts: &[AiryTensors]) -> Result<AiryTensors> {
    if parts.is_empty() {
        return Err(Error::Invalid("product of no structures".into()));
    }
    let mut labels = Vec::new();
    for p in parts {
        for &l in p.labels() {
            if labels.contains(&l) {
                return Err(Error::LabelClash(format!("mode {l} appears in two factors")));
            }
            labels.push(l);
        }
    }
    let mut t = AiryTensors::new(labels)?;
    let mut off = 0;
    let mut grading: Option<Grading> = None;
    let mut graded = true;
    for p in parts {
        for (k, v) in &p.a {
            t.a.insert([k[0] + off, k[1] + off, k[2] + off], v.clone());
        }
        for (&(i, j, k), v) in &p.b {
            t.b.insert((i + off, j + off, k + off), v.clone());
        }
        for (&(i, j, k), v) in &p.c {
            t.c.insert((i + off, j + off, k + off), v.clone());
        }
        for (&i, v) in &p.eps {
            t.eps.insert(i + off, v.clone());
        }
        match (&p.grading, &mut grading) {
            (Some(g), None) if off == 0 => grading = Some(g.clone()),
            (Some(g), Some(acc)) if g.shift == acc.shift => {
                acc.weights.extend_from_slice(&g.weights);
                acc.max_weight = acc.max_weight.min(g.max_weight);
            }
            _ => graded = false,
        }
        off += p.dim();
    }
    t.grading = if graded { grading } else { None };
    t.implicit_even_modes = parts.iter().any(|p| p.implicit_even_modes);
    Ok(t)
}

/// The conic `H = -y + x^2 + 2xy + y^2` on one mode.
pub fn conic() -> AiryTensors {
    let mut t = AiryTensors::new(vec![1]).unwrap();
    t.add_a(0, 0, 0, rat(1, 1));
    t.add_b(0, 0, 0, rat(1, 1));
    t.add_c(0, 0, 0, rat(1, 1));
    t
}
