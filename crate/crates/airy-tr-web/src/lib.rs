//! Browser demo: three operations of `airy-tr` behind `wasm-bindgen`.
//!
//! The plain functions return `Result<String, String>` so they can be
//! tested natively; the exported wrappers turn errors into JS exceptions.

use airy_tr::airy::conic_coefficients;
use airy_tr::cli::family::{family_check, FamilySpec};
use airy_tr::eo::{builtin_airy, compute_correlators, intersection_numbers_from_airy};
use wasm_bindgen::prelude::*;

/// Coefficients of the conic's Lagrangian from degree 2 to `degree`.
pub fn catalan_text(degree: usize) -> Result<String, String> {
    if !(2..=60).contains(&degree) {
        return Err("degree must lie in 2..=60".into());
    }
    let c = conic_coefficients(degree).map_err(|e| e.to_string())?;
    Ok(c.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
}

/// `<tau_{k_1} ... tau_{k_n}>_g` from the recursion on the Airy curve,
/// one per line, for `2g - 2 + n <= chi_max`.
pub fn intersection_text(chi_max: usize) -> Result<String, String> {
    if !(1..=5).contains(&chi_max) {
        return Err("chi_max must lie in 1..=5".into());
    }
    let t = compute_correlators(&builtin_airy(2 * (3 * chi_max as i64) + 6), chi_max).map_err(|e| e.to_string())?;
    let m = intersection_numbers_from_airy(&t).map_err(|e| e.to_string())?;
    let lines: Vec<String> = m
        .iter()
        .filter(|(_, v)| **v != airy_tr::rat(0, 1))
        .map(|((g, ks), v)| {
            let taus: Vec<String> = ks.iter().map(|k| format!("tau_{k}")).collect();
            format!("<{}>_{g} = {v}", taus.join(" "))
        })
        .collect();
    Ok(lines.join("\n"))
}

/// Elliptic-family report (JSON) for `y^2 = c0 + c1 x + ... + c4 x^4 - t`.
pub fn family_json(coeffs: &[f64], step: f64, skip_relat: bool) -> Result<String, String> {
    let coeffs: [f64; 5] = coeffs.try_into().map_err(|_| "need five coefficients c0..c4".to_string())?;
    let spec = FamilySpec {
        coeffs,
        roots: None,
        step,
        tol: None,
        skip: if skip_relat { vec!["relat".into()] } else { Vec::new() },
    };
    let r = family_check(&spec).map_err(|e| e.to_string())?;
    serde_json::to_string_pretty(&r).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn catalan(degree: usize) -> Result<String, JsError> {
    catalan_text(degree).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn intersections(chi_max: usize) -> Result<String, JsError> {
    intersection_text(chi_max).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn family(coeffs: Vec<f64>, step: f64, skip_relat: bool) -> Result<String, JsError> {
    family_json(&coeffs, step, skip_relat).map_err(|e| JsError::new(&e))
}
