//! Correlator export (JSON with rationals as strings, or flat CSV) and the
//! JSON form of Airy tensors.

use crate::airy::{AiryTensors, Grading};
use crate::algebra::{parse_rat, Rat};
use crate::eo::{label_code, CorrelatorTable, Label, LocalSpectralCurve, POINT_STRIDE};
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabelEntry {
    pub point: usize,
    pub name: String,
    pub k: u32,
    pub code: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub index: Vec<i64>,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub h: usize,
    pub n: usize,
    pub entries: Vec<Entry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelatorExport {
    pub curve: String,
    pub chi_max: usize,
    pub order: i64,
    pub labels: Vec<LabelEntry>,
    pub correlators: Vec<Block>,
    pub conventions: BTreeMap<String, String>,
}

pub fn conventions() -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("basis".into(), "label (a,k) is the differential with principal part z_a^{-k} dz_a/z_a at point a, holomorphic elsewhere".into());
    m.insert("index".into(), format!("label code = point * {POINT_STRIDE} + k; entries keyed by sorted codes"));
    m.insert("value".into(), "omega_{h,n} = sum over indices (with multiplicity) of W e(z_1)...e(z_n)".into());
    m.insert("anchor".into(), "Airy curve W_{0,3}[1,1,1] = 1/2, i.e. <tau_0^3>_0 = 1 after the factor 2^{2h-2+n}".into());
    m.insert("epsilon".into(), "quantum term eps_1 = 1/8 for KW in the normalization H_k = -y_k + ...".into());
    m
}

fn rat_strings(v: &Rat) -> (String, String) {
    (v.numer().to_string(), v.denom().to_string())
}

pub fn export(name: &str, curve: &LocalSpectralCurve, table: &CorrelatorTable, chi_max: usize) -> CorrelatorExport {
    let mut used: BTreeSet<Label> = BTreeSet::new();
    let mut blocks = Vec::new();
    for (&(h, n), m) in &table.tables {
        let mut entries = Vec::new();
        for (key, v) in m {
            used.extend(key.iter().copied());
            let (num, den) = rat_strings(v);
            entries.push(Entry {
                index: key.iter().map(|l| label_code(l.0, l.1)).collect(),
                num,
                den,
            });
        }
        blocks.push(Block { h, n, entries });
    }
    CorrelatorExport {
        curve: name.to_string(),
        chi_max,
        order: curve.order,
        labels: used
            .into_iter()
            .map(|(a, k)| LabelEntry {
                point: a,
                name: curve.points[a].name.clone(),
                k,
                code: label_code(a, k),
            })
            .collect(),
        correlators: blocks,
        conventions: conventions(),
    }
}

fn decode(code: i64) -> Label {
    ((code / POINT_STRIDE) as usize, (code % POINT_STRIDE) as u32)
}

pub fn import(doc: &CorrelatorExport) -> Result<CorrelatorTable, String> {
    let mut t = CorrelatorTable::default();
    for b in &doc.correlators {
        let m = t.tables.entry((b.h, b.n)).or_default();
        for e in &b.entries {
            if e.index.len() != b.n {
                return Err(format!("index {:?} has the wrong length for n = {}", e.index, b.n));
            }
            let v = parse_rat(&format!("{}/{}", e.num, e.den)).ok_or_else(|| format!("bad rational {}/{}", e.num, e.den))?;
            let mut key: Vec<Label> = e.index.iter().map(|&c| decode(c)).collect();
            key.sort_unstable();
            m.insert(key, v);
        }
    }
    Ok(t)
}

/// `h,n,index,value` rows; the index is space-separated label codes.
pub fn to_csv(table: &CorrelatorTable) -> String {
    let mut s = String::from("h,n,index,value\n");
    for (&(h, n), m) in &table.tables {
        for (key, v) in m {
            let idx: Vec<String> = key.iter().map(|l| label_code(l.0, l.1).to_string()).collect();
            s.push_str(&format!("{h},{n},{},{v}\n", idx.join(" ")));
        }
    }
    s
}

pub fn from_csv(text: &str) -> Result<CorrelatorTable, String> {
    let mut t = CorrelatorTable::default();
    for (no, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 4 {
            return Err(format!("csv line {}: expected 4 fields", no + 1));
        }
        let h: usize = f[0].parse().map_err(|_| format!("csv line {}: bad h", no + 1))?;
        let n: usize = f[1].parse().map_err(|_| format!("csv line {}: bad n", no + 1))?;
        let mut key: Vec<Label> = f[2]
            .split_whitespace()
            .map(|c| c.parse::<i64>().map(decode).map_err(|_| format!("csv line {}: bad index", no + 1)))
            .collect::<Result<_, _>>()?;
        key.sort_unstable();
        let v = parse_rat(f[3]).ok_or_else(|| format!("csv line {}: bad value", no + 1))?;
        t.tables.entry((h, n)).or_default().insert(key, v);
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradingFile {
    pub shift: i64,
    pub weights: Vec<i64>,
    pub max_weight: i64,
}

/// Tensor entries addressed by mode labels; values are rational strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TensorFile {
    pub labels: Vec<i64>,
    pub a: Vec<(i64, i64, i64, String)>,
    /// `(i, j, k, v)` is `b_ij^k`.
    pub b: Vec<(i64, i64, i64, String)>,
    /// `(i, j, k, v)` is `c_i^jk`.
    pub c: Vec<(i64, i64, i64, String)>,
    pub eps: Vec<(i64, String)>,
    #[serde(default)]
    pub grading: Option<GradingFile>,
    #[serde(default)]
    pub implicit_even_modes: bool,
}

pub fn tensors_to_file(t: &AiryTensors) -> TensorFile {
    let l = |p: usize| t.labels()[p];
    TensorFile {
        labels: t.labels().to_vec(),
        a: t.a_entries().map(|(k, v)| (l(k[0]), l(k[1]), l(k[2]), v.to_string())).collect(),
        b: t.b_entries().map(|(k, v)| (l(k.0), l(k.1), l(k.2), v.to_string())).collect(),
        c: t.c_entries().map(|(k, v)| (l(k.0), l(k.1), l(k.2), v.to_string())).collect(),
        eps: t.eps_entries().map(|(k, v)| (l(*k), v.to_string())).collect(),
        grading: t.grading().map(|g| GradingFile {
            shift: g.shift,
            weights: g.weights.clone(),
            max_weight: g.max_weight,
        }),
        implicit_even_modes: t.implicit_even_modes,
    }
}

pub fn tensors_from_file(f: &TensorFile) -> Result<AiryTensors, String> {
    let mut t = AiryTensors::new(f.labels.clone()).map_err(|e| e.to_string())?;
    let pos = |l: i64| t_pos(&f.labels, l);
    let val = |s: &str| parse_rat(s).ok_or_else(|| format!("bad rational `{s}`"));
    for (i, j, k, v) in &f.a {
        t.add_a(pos(*i)?, pos(*j)?, pos(*k)?, val(v)?);
    }
    for (i, j, k, v) in &f.b {
        t.add_b(pos(*i)?, pos(*j)?, pos(*k)?, val(v)?);
    }
    for (i, j, k, v) in &f.c {
        t.add_c(pos(*i)?, pos(*j)?, pos(*k)?, val(v)?);
    }
    for (i, v) in &f.eps {
        t.add_eps(pos(*i)?, val(v)?);
    }
    if let Some(g) = &f.grading {
        if g.weights.len() != f.labels.len() {
            return Err("grading weights must match the labels".into());
        }
        t.set_grading(Some(Grading {
            shift: g.shift,
            weights: g.weights.clone(),
            max_weight: g.max_weight,
        }));
    }
    t.implicit_even_modes = f.implicit_even_modes;
    Ok(t)
}

fn t_pos(labels: &[i64], l: i64) -> Result<usize, String> {
    labels.iter().position(|&m| m == l).ok_or_else(|| format!("unknown mode label {l}"))
}

/// Largest absolute numerator in the table, for summaries.
pub fn max_height(table: &CorrelatorTable) -> String {
    table
        .tables
        .values()
        .flat_map(|m| m.values())
        .map(|v| v.numer().abs())
        .max()
        .map(|v| v.to_string())
        .unwrap_or_else(|| "0".into())
}
