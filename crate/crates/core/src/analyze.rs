//! Full class sweeps producing [`ClassReportDocument`]s.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::classes;
use crate::error::{Error, Result};
use crate::extensions::{self, ExtensionSpec, SpanMode};
use crate::io::matrix_to_json;
use crate::linalg::{c, ComplexMatrix};
use crate::rational::{self, ExactRational};
use crate::report::{ClassReportDocument, Subject, Tolerances};
use crate::shift::{self, WeightSequence};
use crate::toeplitz::{self, MatrixSymbol, ToeplitzClass};

fn tolerances(tol: f64, settings: Value) -> Tolerances {
    Tolerances {
        tol,
        settings: match settings {
            Value::Object(map) => map,
            _ => Default::default(),
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShiftOptions {
    pub n: usize,
    pub k_max: usize,
    pub truncation: usize,
    pub s_grid: Vec<f64>,
}

impl Default for ShiftOptions {
    fn default() -> Self {
        ShiftOptions {
            n: 2,
            k_max: 3,
            truncation: 40,
            s_grid: shift::default_s_grid(),
        }
    }
}

pub fn analyze_shift(w: &WeightSequence, opts: &ShiftOptions, tol: f64) -> Result<ClassReportDocument> {
    let n = opts.n;
    let mut doc = ClassReportDocument::new(
        Subject::Shift,
        serde_json::to_value(w).expect("weights serialize"),
        tolerances(
            tol,
            json!({"n": n, "k_max": opts.k_max, "truncation": opts.truncation, "s_grid_points": opts.s_grid.len()}),
        ),
    );
    let hypo = shift::is_hyponormal_shift(w);
    doc.push("hyponormal", hypo.holds, &hypo);
    for k in 1..=opts.k_max {
        let v = shift::is_k_hyponormal_shift(w, k, None)?;
        doc.push(format!("{k}-hyponormal"), v.holds, &v);
    }
    let sub = shift::is_subnormal_shift(w);
    doc.push("subnormal", sub.holds, &sub);
    let nsub = shift::is_n_subnormal_shift(w, n)?;
    doc.push(format!("{n}-subnormal"), nsub.holds, &nsub);
    let quasinormal = shift::is_quasinormal_shift(w);
    doc.push("quasinormal", quasinormal, &json!({"constant_weights": quasinormal}));
    let nq = shift::is_n_quasinormal_shift(w, n)?;
    doc.push(format!("{n}-quasinormal"), nq.holds, &nq);
    let qn = shift::is_quasi_n_normal_shift(w, n);
    doc.push(format!("quasi-{n}-normal"), qn.holds, &qn);
    let probe = shift::quadratic_hyponormality_probe(w, &opts.s_grid, opts.truncation, tol)?;
    doc.push("quadratically hyponormal (probe)", !probe.refuted, &probe);
    Ok(doc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationOptions {
    pub n: usize,
    pub steps: usize,
    pub exact: bool,
    pub bound: f64,
    pub horizon: usize,
}

/// Forced continuation of `seed`, the boundedness probe and a periodicity verdict.
pub fn derive_quasinormal(seed: &[ExactRational], opts: &ContinuationOptions, tol: f64) -> Result<ClassReportDocument> {
    let n = opts.n;
    let input = json!({
        "n": n,
        "seed": seed.iter().map(rational::format_rational).collect::<Vec<_>>(),
    });
    let mut doc = ClassReportDocument::new(
        Subject::QuasinormalContinuation,
        input,
        tolerances(
            tol,
            json!({"steps": opts.steps, "exact": opts.exact, "bound": opts.bound, "horizon": opts.horizon}),
        ),
    );
    let (weights, probe, fit) = if opts.exact {
        let weights = shift::derive_quasinormal_continuation(n, seed, opts.steps)?;
        let probe = shift::boundedness_forces_periodicity_probe(n, seed, opts.bound, opts.horizon)?;
        let fit = shift::best_period(&weights, n);
        let text: Vec<Value> = weights
            .iter()
            .map(|x| Value::String(rational::format_rational(x)))
            .collect();
        (text, probe, fit)
    } else {
        let floats: Vec<f64> = seed.iter().map(rational::to_f64).collect();
        let weights = shift::derive_quasinormal_continuation(n, &floats, opts.steps)?;
        let probe = shift::boundedness_forces_periodicity_probe(n, &floats, opts.bound, opts.horizon)?;
        let fit = shift::best_period(&weights, n);
        (weights.into_iter().map(Value::from).collect(), probe, fit)
    };
    doc.push("continuation", true, &json!({"weights": weights}));
    let bounded = probe.escaped_at.is_none();
    doc.push("bounded within horizon", bounded, &probe);
    let periodic = fit.as_ref().is_some_and(|f| f.residual <= tol);
    doc.push(format!("periodic with period <= {n}"), periodic, &fit);
    Ok(doc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixOptions {
    pub n: usize,
    pub k_max: usize,
}

pub fn analyze_matrix(t: &ComplexMatrix, opts: &MatrixOptions, tol: f64) -> Result<ClassReportDocument> {
    crate::linalg::ensure_square(t)?;
    let n = opts.n;
    let mut doc = ClassReportDocument::new(
        Subject::Matrix,
        matrix_to_json(t),
        tolerances(tol, json!({"n": n, "k_max": opts.k_max})),
    );
    let v = classes::is_normal(t, tol)?;
    doc.push("normal", v.holds, &v);
    let v = classes::is_n_normal(t, n, tol)?;
    doc.push(format!("{n}-normal"), v.verdict.holds, &v);
    let v = classes::is_hyponormal(t, tol)?;
    doc.push("hyponormal", v.holds, &v);
    let v = classes::is_quasinormal(t, tol)?;
    doc.push("quasinormal", v.holds, &v);
    let v = classes::is_quasi_n_normal(t, n, tol)?;
    doc.push(format!("quasi-{n}-normal"), v.holds, &v);
    let v = classes::is_n_quasinormal(t, n, tol)?;
    doc.push(format!("{n}-quasinormal"), v.holds, &v);
    let blocks = (1..=opts.k_max)
        .map(|k| classes::bram_halmos_block_psd(t, n, k, tol))
        .collect::<Result<Vec<_>>>()?;
    doc.push(
        format!("{n}-subnormal certificate (k <= {})", opts.k_max),
        blocks.iter().all(|v| v.holds),
        &blocks,
    );
    let identity = classes::power_identity_check(t, n, opts.k_max, tol)?;
    doc.push("power identity", identity.consistent_up_to_k_max, &identity);
    Ok(doc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ToeplitzOptions {
    pub order: usize,
    pub n: usize,
    pub grid_points: usize,
}

pub fn analyze_toeplitz(symbol: &MatrixSymbol, opts: &ToeplitzOptions, tol: f64) -> Result<ClassReportDocument> {
    let n = opts.n;
    let mut doc = ClassReportDocument::new(
        Subject::Toeplitz,
        serde_json::to_value(symbol).expect("symbol serializes"),
        tolerances(
            tol,
            json!({"order": opts.order, "n": n, "grid_points": opts.grid_points}),
        ),
    );
    let normal = toeplitz::symbol_is_normal_ae(symbol, opts.grid_points, tol)?;
    doc.push("symbol normal a.e.", normal.normal, &normal);
    let trunc = toeplitz::assemble(symbol, opts.order)?;
    for (name, class) in [
        ("hyponormal (interior)".to_owned(), ToeplitzClass::Hyponormal),
        (format!("{n}-normal (interior)"), ToeplitzClass::NNormal { n }),
        (format!("{n}-quasinormal (interior)"), ToeplitzClass::NQuasinormal { n }),
    ] {
        let probe = toeplitz::truncated_class_probe(&trunc, class, tol)?;
        doc.push(name, probe.verdict.holds, &probe);
    }
    Ok(doc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionOptions {
    pub i_max: usize,
    pub m: usize,
    pub k_max: usize,
    /// Coefficients of the spectral-set test polynomial, constant term first.
    pub poly: Vec<Complex64>,
}

impl Default for ExtensionOptions {
    fn default() -> Self {
        ExtensionOptions {
            i_max: 4,
            m: 2,
            k_max: 3,
            poly: vec![c(0.0, 0.0), c(1.0, 0.0)],
        }
    }
}

pub fn analyze_extension(spec: &ExtensionSpec, opts: &ExtensionOptions, tol: f64) -> Result<ClassReportDocument> {
    let mut doc = ClassReportDocument::new(
        Subject::Extension,
        serde_json::to_value(spec).expect("spec serializes"),
        tolerances(
            tol,
            json!({
                "i_max": opts.i_max,
                "m": opts.m,
                "k_max": opts.k_max,
                "poly": opts.poly.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>(),
                "spectral_tol": extensions::SPECTRAL_TOL,
            }),
        ),
    );
    spec.validate(tol)?;
    let ext = extensions::minimal_extension_with(spec, tol, SpanMode::Extended)?;
    doc.push(
        "minimal extension",
        ext.contains_h,
        &json!({
            "ambient_dim": spec.ambient_dim(),
            "subspace_dim": spec.subspace_dim(),
            "extension_dim": ext.dim(),
            "contains_H": ext.contains_h,
            "invariance_residual": ext.invariance_residual,
            "extended_span_growth": ext.extended_span_growth,
            "reduced_ambient": matrix_to_json(&ext.reduced_ambient),
        }),
    );
    let spectral = extensions::spectral_inclusions_check(&ext.to_spec(spec.n())?)?;
    doc.push("spectral inclusions (reported)", spectral.within_tolerance, &spectral);
    let set = extensions::spectral_set_check(spec, &opts.poly, tol)?;
    doc.push("spectral set inequality (reported)", set.satisfied, &set);
    let povm = extensions::povm_moment_check(spec, opts.i_max, tol)?;
    doc.push("POVM moments", povm.within_tolerance, &povm);
    let harness = extensions::subn_power_quasinormal_theorem_harness(spec, opts.m, opts.k_max, tol)?;
    doc.push("power quasinormality harness", !harness.flagged, &harness);
    Ok(doc)
}

/// Comma-separated coefficients, each `re` or `re:im`.
pub fn parse_complex_list(text: &str) -> Result<Vec<Complex64>> {
    text.split(',')
        .map(|item| {
            let item = item.trim();
            let (re, im) = item.split_once(':').unwrap_or((item, "0"));
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("bad coefficient {item:?}: {e}")))
            };
            Ok(c(parse(re)?, parse(im)?))
        })
        .collect()
}
