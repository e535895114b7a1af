//! The `airytr` command line.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid configuration,
//! 3 a check failed (report printed), 4 truncation exhausted or a
//! degenerate elliptic family.

pub mod config;
pub mod export;
pub mod family;

use crate::airy::{
    abstract_tr, build_bgw, build_kw, check_classical_constraints, check_quantum_constraint, classical_expand, conic,
    conic_coefficients, potential_s0, AiryTensors, ConstraintReport,
};
use crate::algebra::mpoly::MPoly;
use crate::algebra::rational_fn::RationalFn;
use crate::algebra::{parse_rat, rat, rat_to_f64, Rat};
use crate::elliptic::C;
use crate::eo::{
    builtin_airy, builtin_bessel, builtin_two_airy, compare_with_abstract_tr, compare_with_virasoro, compute_correlators,
    from_global_rational, structural_checks, ComparisonReport, CorrelatorTable, LocalSpectralCurve,
};
use crate::error::Error;
use crate::virasoro::{intersection_numbers, solve_by_recursion, x1_specialization, Variant};
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use num_traits::{One, Pow, Zero};
use serde::Serialize;
use std::io::Write;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_CHECK: i32 = 3;
pub const EXIT_TRUNCATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "airytr", version, about = "Exact topological recursion, Airy structures and elliptic period checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Correlators of a spectral curve, with the invariant suite.
    Curve {
        #[command(subcommand)]
        cmd: CurveCmd,
    },
    /// Airy structures: constraint checks and classical expansion.
    Airy {
        #[command(subcommand)]
        cmd: AiryCmd,
    },
    /// Recursion against abstract TR and Virasoro on the Airy and Bessel curves.
    CrossValidate(CrossArgs),
    /// Numeric checks on a genus-one family y^2 = q(x) - t.
    Family {
        #[command(subcommand)]
        cmd: FamilyCmd,
    },
    /// Solve KW or BGW Virasoro constraints.
    Virasoro {
        #[command(subcommand)]
        cmd: VirasoroCmd,
    },
}

#[derive(Subcommand, Debug)]
pub enum CurveCmd {
    Run(CurveArgs),
}

#[derive(Subcommand, Debug)]
pub enum AiryCmd {
    Check(AiryCheckArgs),
    Expand(AiryExpandArgs),
}

#[derive(Subcommand, Debug)]
pub enum FamilyCmd {
    Check(FamilyArgs),
}

#[derive(Subcommand, Debug)]
pub enum VirasoroCmd {
    Solve(VirasoroArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    Airy,
    Bessel,
    TwoAiry,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
pub struct CurveArgs {
    /// Built-in curve.
    #[arg(long, conflicts_with_all = ["u", "v"])]
    pub curve: Option<Builtin>,
    /// Global rational curve: x = u(zeta).
    #[arg(long, requires = "v")]
    pub u: Option<String>,
    /// Global rational curve: y = v(zeta).
    #[arg(long, requires = "u")]
    pub v: Option<String>,
    /// Rescale charts whose normalization is not a rational square.
    #[arg(long)]
    pub allow_rescale: bool,
    #[arg(long, default_value_t = 3)]
    pub chi_max: usize,
    /// Series order of the local expansions.
    #[arg(long, default_value_t = 24)]
    pub order: i64,
    /// Export path; `-` for standard output.
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub config: Option<String>,
}

#[derive(Args, Debug)]
pub struct AiryCheckArgs {
    /// kw, bgw, conic or file:PATH (JSON tensor file).
    #[arg(long, default_value = "kw")]
    pub structure: String,
    /// Largest mode kept by kw and bgw.
    #[arg(long, default_value_t = 21)]
    pub modes: i64,
    /// Also print the classical expansion and S0 to this degree.
    #[arg(long)]
    pub expand: Option<usize>,
    /// Also run abstract TR.
    #[arg(long)]
    pub quantum: bool,
    #[arg(long, default_value_t = 3)]
    pub chi_max: usize,
    /// Write the tensors as JSON.
    #[arg(long)]
    pub dump: Option<String>,
    #[arg(long)]
    pub config: Option<String>,
}

#[derive(Args, Debug)]
pub struct AiryExpandArgs {
    /// The one-mode conic; prints its coefficients.
    #[arg(long)]
    pub conic: bool,
    #[arg(long, default_value = "kw")]
    pub structure: String,
    #[arg(long, default_value_t = 9)]
    pub modes: i64,
    #[arg(long, default_value_t = 6)]
    pub degree: usize,
    #[arg(long)]
    pub config: Option<String>,
}

#[derive(Args, Debug)]
pub struct CrossArgs {
    #[arg(long, default_value_t = 4)]
    pub chi_max: usize,
    #[arg(long, default_value_t = 24)]
    pub order: i64,
    /// Mutation hook: multiply every recursion kernel by this rational.
    #[arg(long, hide = true)]
    pub test_kernel_factor: Option<String>,
    #[arg(long)]
    pub config: Option<String>,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    /// Quartic q(x) with rational coefficients.
    #[arg(long, default_value = "x^4-5x^2+4", conflicts_with = "roots")]
    pub q: String,
    /// Four branch points instead of q; `re` or `re:im`, comma separated.
    #[arg(long)]
    pub roots: Option<String>,
    /// Deformation of q; only `additive` (q - t).
    #[arg(long, default_value = "additive")]
    pub deform: String,
    /// Finite-difference step relative to the curve scale.
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    /// Override every residual tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Checks to leave out: periods, dm, relat, theta, rauch.
    #[arg(long, value_delimiter = ',')]
    pub skip: Vec<String>,
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub config: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Kw,
    Bgw,
}

#[derive(Args, Debug)]
pub struct VirasoroArgs {
    #[arg(long, value_enum, default_value_t = VariantArg::Kw)]
    pub variant: VariantArg,
    /// Weight cap, `deg x^{2k+1} = k + 1`.
    #[arg(long, default_value_t = 9)]
    pub weight: u32,
    #[arg(long, default_value_t = 3)]
    pub genus: u32,
    /// Order of the x^1-only specialization.
    #[arg(long, default_value_t = 8)]
    pub x1_order: u32,
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub config: Option<String>,
}

struct Fail {
    code: i32,
    msg: String,
}

impl Fail {
    fn new(code: i32, msg: impl Into<String>) -> Self {
        Fail { code, msg: msg.into() }
    }
    fn config(msg: impl Into<String>) -> Self {
        Fail::new(EXIT_CONFIG, msg)
    }
}

/// Exit code of a library error raised by the exact engine.
fn exact_code(e: &Error) -> i32 {
    match e {
        Error::TruncationExhausted { .. } | Error::TruncationTooShort { .. } => EXIT_TRUNCATION,
        Error::SymmetryViolation { .. } | Error::PoleBound { .. } | Error::DictionaryViolation(_) | Error::InconsistentSystem(_) => {
            EXIT_CHECK
        }
        _ => EXIT_CONFIG,
    }
}

fn from_exact(e: Error) -> Fail {
    Fail::new(exact_code(&e), e.to_string())
}

type Out<'a> = &'a mut dyn Write;

fn io(e: std::io::Error) -> Fail {
    Fail::new(EXIT_IO, e.to_string())
}

fn emit(path: Option<&str>, text: &str, out: Out) -> Result<(), Fail> {
    match path {
        None | Some("-") => writeln!(out, "{text}").map_err(io),
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Fail::new(EXIT_IO, format!("cannot write {p}: {e}"))),
    }
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}

/// Runs the CLI on `argv` (program name first) and returns the exit code.
pub fn run(argv: Vec<String>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with(argv: Vec<String>, out: Out, err: Out) -> i32 {
    let argv = match config::merge(&Cli::command(), argv) {
        Ok(a) => a,
        Err(m) => {
            let _ = writeln!(err, "error: {m}");
            return EXIT_CONFIG;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    let r = match cli.command {
        Command::Curve { cmd: CurveCmd::Run(a) } => curve_run(&a, out),
        Command::Airy { cmd: AiryCmd::Check(a) } => airy_check(&a, out),
        Command::Airy { cmd: AiryCmd::Expand(a) } => airy_expand(&a, out),
        Command::CrossValidate(a) => cross_validate(&a, out),
        Command::Family { cmd: FamilyCmd::Check(a) } => family_cmd(&a, out),
        Command::Virasoro { cmd: VirasoroCmd::Solve(a) } => virasoro_solve(&a, out),
    };
    match r {
        Ok(c) => c,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn curve_of(a: &CurveArgs) -> Result<(String, LocalSpectralCurve), Fail> {
    if a.order < 4 {
        return Err(Fail::config("--order must be at least 4"));
    }
    match (&a.curve, &a.u, &a.v) {
        (Some(b), _, _) => {
            let c = match b {
                Builtin::Airy => builtin_airy(a.order),
                Builtin::Bessel => builtin_bessel(a.order),
                Builtin::TwoAiry => builtin_two_airy(a.order),
            };
            let name = match b {
                Builtin::Airy => "airy",
                Builtin::Bessel => "bessel",
                Builtin::TwoAiry => "two-airy",
            };
            Ok((name.into(), c))
        }
        (None, Some(u), Some(v)) => {
            let uf = RationalFn::parse(u).map_err(|e| Fail::config(format!("--u: {e}")))?;
            let vf = RationalFn::parse(v).map_err(|e| Fail::config(format!("--v: {e}")))?;
            let c = from_global_rational(&uf, &vf, a.order, a.allow_rescale).map_err(|e| Fail::config(e.to_string()))?;
            Ok((format!("u={u}; v={v}"), c))
        }
        _ => Err(Fail::config("give --curve or both --u and --v")),
    }
}

fn curve_run(a: &CurveArgs, out: Out) -> Result<i32, Fail> {
    if a.chi_max < 1 {
        return Err(Fail::config("--chi-max must be at least 1"));
    }
    let (name, curve) = curve_of(a)?;
    let table = compute_correlators(&curve, a.chi_max).map_err(from_exact)?;
    let report = structural_checks(&curve, &table).map_err(from_exact)?;
    let text = match a.format {
        Format::Json => json(&export::export(&name, &curve, &table, a.chi_max)),
        Format::Csv => export::to_csv(&table).trim_end().to_string(),
    };
    let to_stdout = matches!(a.out.as_deref(), Some("-"));
    if a.out.is_some() {
        emit(a.out.as_deref(), &text, out)?;
    }
    #[derive(Serialize)]
    struct Summary<'a> {
        curve: &'a str,
        chi_max: usize,
        order: i64,
        pass: bool,
        report: &'a crate::eo::StructuralReport,
    }
    let summary = json(&Summary {
        curve: &name,
        chi_max: a.chi_max,
        order: a.order,
        pass: report.pass(),
        report: &report,
    });
    if !to_stdout {
        writeln!(out, "{summary}").map_err(io)?;
    }
    Ok(if report.pass() { EXIT_OK } else { EXIT_CHECK })
}

fn structure(sel: &str, modes: i64) -> Result<AiryTensors, Fail> {
    match sel {
        "kw" => build_kw(modes).map_err(|e| Fail::config(e.to_string())),
        "bgw" => build_bgw(modes).map_err(|e| Fail::config(e.to_string())),
        "conic" => Ok(conic()),
        s => {
            let Some(path) = s.strip_prefix("file:") else {
                return Err(Fail::config(format!("unknown structure `{s}`; use kw, bgw, conic or file:PATH")));
            };
            let text = std::fs::read_to_string(path).map_err(|e| Fail::config(format!("cannot read {path}: {e}")))?;
            let f: export::TensorFile = serde_json::from_str(&text).map_err(|e| Fail::config(format!("{path}: {e}")))?;
            export::tensors_from_file(&f).map_err(|e| Fail::config(format!("{path}: {e}")))
        }
    }
}

fn mpoly_text(p: &MPoly, labels: &[i64]) -> String {
    let mut parts = Vec::new();
    for (m, c) in p.terms() {
        let mut s = c.to_string();
        let mut i = 0;
        while i < m.len() {
            let e = m.iter().filter(|&&v| v == m[i]).count();
            s.push_str(&format!(" x{}", labels[m[i]]));
            if e > 1 {
                s.push_str(&format!("^{e}"));
            }
            i += e;
        }
        parts.push(s);
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[derive(Serialize)]
struct ExpansionOut {
    degree: usize,
    y: Vec<(i64, String)>,
    s0: String,
}

fn expansion(t: &AiryTensors, d: usize) -> Result<ExpansionOut, Fail> {
    let ex = classical_expand(t, d).map_err(|e| Fail::config(e.to_string()))?;
    let s0 = potential_s0(t, d).map_err(|e| Fail::new(EXIT_CHECK, e.to_string()))?;
    Ok(ExpansionOut {
        degree: d,
        y: ex.y.iter().enumerate().map(|(i, p)| (t.labels()[i], mpoly_text(p, t.labels()))).collect(),
        s0: mpoly_text(&s0, t.labels()),
    })
}

fn airy_check(a: &AiryCheckArgs, out: Out) -> Result<i32, Fail> {
    let t = structure(&a.structure, a.modes)?;
    if let Some(p) = &a.dump {
        emit(Some(p), &json(&export::tensors_to_file(&t)), out)?;
    }
    #[derive(Serialize)]
    struct Quantum {
        chi_max: usize,
        tables: Vec<(usize, usize, Vec<(Vec<i64>, String)>)>,
    }
    #[derive(Serialize)]
    struct Report {
        structure: String,
        modes: usize,
        classical: ConstraintReport,
        quantum: ConstraintReport,
        #[serde(skip_serializing_if = "Option::is_none")]
        expansion: Option<ExpansionOut>,
        #[serde(skip_serializing_if = "Option::is_none")]
        abstract_tr: Option<Quantum>,
        pass: bool,
    }
    let classical = check_classical_constraints(&t);
    let quantum = check_quantum_constraint(&t);
    let pass = classical.pass && quantum.pass;
    let expansion = match a.expand {
        Some(d) => Some(expansion(&t, d)?),
        None => None,
    };
    let abstract_tr = if a.quantum {
        if a.chi_max < 1 {
            return Err(Fail::config("--chi-max must be at least 1"));
        }
        let f = abstract_tr(&t, a.chi_max).map_err(from_exact)?;
        let tables = f
            .tables
            .keys()
            .map(|&(h, n)| (h, n, f.entries(h, n).into_iter().map(|(l, v)| (l, v.to_string())).collect()))
            .collect();
        Some(Quantum {
            chi_max: a.chi_max,
            tables,
        })
    } else {
        None
    };
    let rep = Report {
        structure: a.structure.clone(),
        modes: t.dim(),
        classical,
        quantum,
        expansion,
        abstract_tr,
        pass,
    };
    writeln!(out, "{}", json(&rep)).map_err(io)?;
    Ok(if pass { EXIT_OK } else { EXIT_CHECK })
}

fn airy_expand(a: &AiryExpandArgs, out: Out) -> Result<i32, Fail> {
    if a.conic {
        let c = conic_coefficients(a.degree).map_err(|e| Fail::config(e.to_string()))?;
        let s: Vec<String> = c.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", s.join(",")).map_err(io)?;
        return Ok(EXIT_OK);
    }
    let t = structure(&a.structure, a.modes)?;
    writeln!(out, "{}", json(&expansion(&t, a.degree)?)).map_err(io)?;
    Ok(EXIT_OK)
}

/// `W_{h,n} -> lambda^{2h-2+n} W_{h,n}`: what scaling the recursion kernel
/// by `lambda` does to every correlator.
fn scale_kernel(t: &mut CorrelatorTable, lambda: &Rat) {
    for (&(h, n), m) in t.tables.iter_mut() {
        let f: Rat = Pow::pow(lambda, (2 * h + n - 2) as u32);
        for v in m.values_mut() {
            *v *= &f;
        }
    }
}

fn max_label(t: &CorrelatorTable) -> i64 {
    t.tables.values().flat_map(|m| m.keys()).flatten().map(|l| l.1 as i64).max().unwrap_or(1)
}

fn cross_validate(a: &CrossArgs, out: Out) -> Result<i32, Fail> {
    if a.chi_max < 1 {
        return Err(Fail::config("--chi-max must be at least 1"));
    }
    let lambda = match &a.test_kernel_factor {
        Some(s) => parse_rat(s).filter(|v| !v.is_zero()).ok_or_else(|| Fail::config(format!("bad kernel factor `{s}`")))?,
        None => Rat::one(),
    };
    #[derive(Serialize)]
    struct Side {
        curve: &'static str,
        abstract_tr: ComparisonReport,
        virasoro: ComparisonReport,
    }
    #[derive(Serialize)]
    struct Report {
        chi_max: usize,
        curves: Vec<Side>,
        pass: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        first_mismatch: Option<String>,
    }
    let mut sides = Vec::new();
    // chi = 1 has only (0,3) and (1,1): nothing to recurse, nothing to compare
    if a.chi_max >= 2 {
        let half = rat(1, 2);
        for (name, variant) in [("airy", Variant::Kw), ("bessel", Variant::Bgw)] {
            let curve = if variant == Variant::Kw { builtin_airy(a.order) } else { builtin_bessel(a.order) };
            let mut t = compute_correlators(&curve, a.chi_max).map_err(from_exact)?;
            if !lambda.is_one() {
                scale_kernel(&mut t, &lambda);
            }
            let modes = max_label(&t) | 1;
            let tensors = match variant {
                Variant::Kw => build_kw(modes),
                Variant::Bgw => build_bgw(modes),
            }
            .map_err(from_exact)?
            .scaled(&half);
            let free = abstract_tr(&tensors, a.chi_max).map_err(from_exact)?;
            let atr = compare_with_abstract_tr(&t, &free, a.chi_max).map_err(from_exact)?;
            let w_cap = 2 * a.chi_max as u32 + 1;
            let h_cap = a.chi_max as u32 / 2 + 1;
            let s = solve_by_recursion(variant, w_cap, h_cap).map_err(from_exact)?;
            let vir = compare_with_virasoro(&t, &s, a.chi_max);
            sides.push(Side {
                curve: name,
                abstract_tr: atr,
                virasoro: vir,
            });
        }
    }
    let first_mismatch = sides.iter().find_map(|s| {
        [("abstract_tr", &s.abstract_tr), ("virasoro", &s.virasoro)].into_iter().find_map(|(k, r)| {
            r.mismatches
                .first()
                .map(|m| format!("{} vs {k}: h={} labels={:?}: {} != {}", s.curve, m.h, m.labels, m.left, m.right))
        })
    });
    let pass = sides.iter().all(|s| s.abstract_tr.mismatches.is_empty() && s.virasoro.mismatches.is_empty());
    let rep = Report {
        chi_max: a.chi_max,
        curves: sides,
        pass,
        first_mismatch,
    };
    writeln!(out, "{}", json(&rep)).map_err(io)?;
    Ok(if pass { EXIT_OK } else { EXIT_CHECK })
}

fn parse_roots(s: &str) -> Result<[C; 4], Fail> {
    let v: Vec<C> = s
        .split(',')
        .map(|p| {
            let p = p.trim();
            let (re, im) = p.split_once(':').unwrap_or((p, "0"));
            Ok(C::new(
                re.trim().parse().map_err(|_| Fail::config(format!("bad root `{p}`")))?,
                im.trim().parse().map_err(|_| Fail::config(format!("bad root `{p}`")))?,
            ))
        })
        .collect::<Result<_, Fail>>()?;
    v.try_into().map_err(|_| Fail::config("--roots needs exactly four branch points"))
}

fn parse_quartic(s: &str) -> Result<[f64; 5], Fail> {
    let f = RationalFn::parse(s).map_err(|e| Fail::config(format!("--q: {e}")))?;
    if f.den.degree() != Some(0) {
        return Err(Fail::config("--q must be a polynomial"));
    }
    let d = &f.den.coeffs()[0];
    let c = f.num.coeffs();
    if c.len() != 5 {
        return Err(Fail::config("--q must have degree exactly 4"));
    }
    let mut out = [0.0; 5];
    for (o, v) in out.iter_mut().zip(c) {
        *o = rat_to_f64(&(v / d));
    }
    Ok(out)
}

fn family_cmd(a: &FamilyArgs, out: Out) -> Result<i32, Fail> {
    if a.deform != "additive" {
        return Err(Fail::config(format!("unsupported deformation `{}`; only `additive`", a.deform)));
    }
    let spec = family::FamilySpec {
        coeffs: if a.roots.is_some() { [0.0; 5] } else { parse_quartic(&a.q)? },
        roots: a.roots.as_deref().map(parse_roots).transpose()?,
        step: a.step,
        tol: a.tol,
        skip: a.skip.iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
    };
    let rep = family::family_check(&spec).map_err(|e| match e {
        Error::Invalid(m) => Fail::config(m),
        Error::Degenerate(m) => Fail::new(EXIT_TRUNCATION, format!("degenerate family: {m}")),
        e => Fail::new(EXIT_CHECK, e.to_string()),
    })?;
    let text = json(&rep);
    if a.out.as_deref().is_some_and(|p| p != "-") {
        emit(a.out.as_deref(), &text, out)?;
        for l in &rep.checks {
            writeln!(
                out,
                "{} {} residual={:.3e} tol={:.1e}{}",
                if l.pass { "PASS" } else { "FAIL" },
                l.name,
                l.residual,
                l.tolerance,
                l.note.as_deref().map(|n| format!(" ({n})")).unwrap_or_default()
            )
            .map_err(io)?;
        }
    } else {
        writeln!(out, "{text}").map_err(io)?;
    }
    Ok(if rep.pass { EXIT_OK } else { EXIT_CHECK })
}

fn virasoro_solve(a: &VirasoroArgs, out: Out) -> Result<i32, Fail> {
    let variant = match a.variant {
        VariantArg::Kw => Variant::Kw,
        VariantArg::Bgw => Variant::Bgw,
    };
    if a.weight < 1 {
        return Err(Fail::config("--weight must be at least 1"));
    }
    let s = solve_by_recursion(variant, a.weight, a.genus).map_err(from_exact)?;
    #[derive(Serialize)]
    struct Coef {
        h: u32,
        k: Vec<u32>,
        num: String,
        den: String,
    }
    let coef = |h: u32, k: &[u32], v: &Rat| Coef {
        h,
        k: k.to_vec(),
        num: v.numer().to_string(),
        den: v.denom().to_string(),
    };
    #[derive(Serialize)]
    struct Report {
        variant: String,
        weight_cap: u32,
        genus_cap: u32,
        /// `k` stands for `x^{2k+1}`; `h` is the power of `hbar^{h-1}`.
        log_z: Vec<Coef>,
        #[serde(skip_serializing_if = "Option::is_none")]
        intersection_numbers: Option<Vec<Coef>>,
        x1: Vec<String>,
    }
    let rep = Report {
        variant: format!("{:?}", a.variant).to_lowercase(),
        weight_cap: a.weight,
        genus_cap: a.genus,
        log_z: s.terms().map(|((p, m), v)| coef((p + 1) as u32, m, v)).collect(),
        intersection_numbers: (variant == Variant::Kw)
            .then(|| intersection_numbers(&s).iter().map(|((h, m), v)| coef(*h, m, v)).collect()),
        x1: x1_specialization(&s, a.x1_order).iter().map(|v| v.to_string()).collect(),
    };
    emit(a.out.as_deref(), &json(&rep), out)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut o = Vec::new();
        let mut e = Vec::new();
        let mut argv = vec!["airytr".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        let c = run_with(argv, &mut o, &mut e);
        (c, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    fn tmp(name: &str) -> std::path::PathBuf {
        let d = std::env::temp_dir().join(format!("airytr-cli-{}", std::process::id()));
        std::fs::create_dir_all(&d).unwrap();
        d.join(name)
    }

    #[test]
    fn curve_run_airy_writes_the_anchor() {
        let p = tmp("airy.json");
        let (c, _, e) = run_args(&["curve", "run", "--curve", "airy", "--chi-max", "4", "--order", "24", "--out", p.to_str().unwrap()]);
        assert_eq!(c, 0, "{e}");
        let doc: export::CorrelatorExport = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
        let b = doc.correlators.iter().find(|b| b.h == 0 && b.n == 3).unwrap();
        let e = b.entries.iter().find(|e| e.index == [1, 1, 1]).unwrap();
        assert_eq!((e.num.as_str(), e.den.as_str()), ("1", "2"));
    }

    #[test]
    fn curve_run_bessel_and_bad_chi() {
        let (c, o, _) = run_args(&["curve", "run", "--curve", "bessel", "--chi-max", "2", "--out", "-"]);
        assert_eq!(c, 0);
        let doc: export::CorrelatorExport = serde_json::from_str(&o).unwrap();
        assert!(doc.correlators.iter().all(|b| (b.h, b.n) != (0, 3) || b.entries.is_empty()));
        assert_eq!(run_args(&["curve", "run", "--curve", "airy", "--chi-max", "0"]).0, 2);
        assert_eq!(run_args(&["curve", "run"]).0, 2);
        assert_eq!(run_args(&["curve", "run", "--bogus"]).0, 2);
    }

    #[test]
    fn curve_run_global_rational_and_truncation() {
        let (c, o, e) = run_args(&["curve", "run", "--u", "z^2", "--v", "z", "--chi-max", "2", "--format", "csv", "--out", "-"]);
        assert_eq!(c, 0, "{e}");
        assert!(o.starts_with("h,n,index,value\n0,3,1 1 1,1/2\n"), "{o}");
        assert_eq!(run_args(&["curve", "run", "--curve", "airy", "--chi-max", "4", "--order", "6"]).0, 4);
    }

    #[test]
    fn airy_commands() {
        assert_eq!(run_args(&["airy", "check", "--structure", "kw", "--modes", "21"]).0, 0);
        let (c, o, _) = run_args(&["airy", "expand", "--conic", "--degree", "10"]);
        assert_eq!(c, 0);
        assert_eq!(o.trim(), "1,2,5,14,42,132,429,1430,4862");

        let p = tmp("bad.json");
        let mut f = export::tensors_to_file(&build_kw(9).unwrap());
        f.b[0].3 = format!("{}", parse_rat(&f.b[0].3).unwrap() + Rat::one());
        std::fs::write(&p, serde_json::to_string(&f).unwrap()).unwrap();
        let sel = format!("file:{}", p.display());
        assert_eq!(run_args(&["airy", "check", "--structure", &sel]).0, 3);

        let (c, o, _) = run_args(&["airy", "check", "--structure", "conic", "--expand", "4", "--quantum", "--chi-max", "2"]);
        assert_eq!(c, 0);
        assert!(o.contains("\"s0\"") && o.contains("\"abstract_tr\""));
    }

    #[test]
    fn cross_validate_and_mutation() {
        assert_eq!(run_args(&["cross-validate", "--chi-max", "1"]).0, 0);
        assert_eq!(run_args(&["cross-validate", "--chi-max", "2"]).0, 0);
        let (c, o, _) = run_args(&["cross-validate", "--chi-max", "2", "--test-kernel-factor", "2/3"]);
        assert_eq!(c, 3);
        assert!(o.contains("first_mismatch"));
    }

    #[test]
    fn family_exit_codes() {
        assert_eq!(run_args(&["family", "check", "--roots=-1,0,0,1"]).0, 4);
        assert_eq!(run_args(&["family", "check", "--deform", "multiplicative"]).0, 2);
        let (c, o, _) = run_args(&["family", "check", "--skip", "relat,theta,rauch", "--tol", "1e-15"]);
        assert_eq!(c, 3);
        assert!(o.contains("below the numeric floor"));
    }

    #[test]
    fn virasoro_solve_reports_intersections() {
        let (c, o, _) = run_args(&["virasoro", "solve", "--weight", "4", "--genus", "1"]);
        assert_eq!(c, 0);
        let v: serde_json::Value = serde_json::from_str(&o).unwrap();
        let tau03 = v["intersection_numbers"].as_array().unwrap().iter().find(|e| e["h"] == 0 && e["k"] == serde_json::json!([0, 0, 0]));
        assert_eq!(tau03.unwrap()["num"], "1");
    }

    #[test]
    fn config_file_fills_missing_flags() {
        let p = tmp("run.cfg");
        std::fs::write(&p, "curve = airy\nchi_max = 0\n").unwrap();
        let cfg = p.to_str().unwrap();
        assert_eq!(run_args(&["curve", "run", "--config", cfg]).0, 2);
        assert_eq!(run_args(&["curve", "run", "--config", cfg, "--chi-max", "2"]).0, 0);
        std::fs::write(&p, "nonsense = 1\n").unwrap();
        assert_eq!(run_args(&["curve", "run", "--config", cfg]).0, 2);
    }
}
