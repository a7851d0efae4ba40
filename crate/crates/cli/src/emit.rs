//! Data emitters: CSV for Fourier work, JSON for everything else.

use std::collections::BTreeMap;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};

use ppsl2::halfplane::{build_tessellation, unit_lambdas};
use ppsl2::harmonic::{hyperfan_fourier, quadrature_oracle, wavelet_fourier, FourierRow, WittPartialSum};
use ppsl2::modular::{commutant_coset, farey_enumeration, farey_edges, format_rat, matrix_to_word, parse_rat, Framing};
use ppsl2::wavelets::{expand_in_basis, hyperfan, normalized_wavelet};
use ppsl2::PiecewiseField;

use crate::suites::word;
use crate::{fmt_f64, SCHEMA};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Series {
    Wavelet,
    Hyperfan,
}

/// Closed form against the oracle for every mode `|n| ≤ nmax` the closed
/// form covers.
pub fn fourier_csv(kind: Series, w: &str, nmax: i64) -> Result<String> {
    let a = word(w)?;
    let f = match kind {
        Series::Wavelet => normalized_wavelet(&a, &Framing::standard()),
        Series::Hyperfan => hyperfan(&a),
    };
    let modes: Vec<i64> = (-nmax..=nmax).filter(|n| kind == Series::Hyperfan || n.abs() > 1).collect();
    let rows: Vec<String> = modes
        .par_iter()
        .map(|n| {
            let closed = match kind {
                Series::Wavelet => wavelet_fourier(&a, *n),
                Series::Hyperfan => hyperfan_fourier(&a, *n),
            };
            FourierRow { word: w.to_string(), n: *n, closed, oracle: quadrature_oracle(&f, *n) }.csv()
        })
        .collect();
    let mut out = String::from(FourierRow::HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    Ok(out)
}

/// Sampled error of the Witt partial sums for `g = 1..=max_gen`.
pub fn witt_csv(n: i64, max_gen: u32, samples: usize) -> String {
    let angles: Vec<f64> = (0..samples).map(|k| (k as f64 + 0.3711) * std::f64::consts::TAU / samples as f64).collect();
    let errs: Vec<f64> = (1..=max_gen).into_par_iter().map(|g| WittPartialSum::new(n, g, 1.0).max_error(&angles)).collect();
    let mut out = String::from("n,g,max_error\n");
    for (g, e) in (1..=max_gen).zip(errs) {
        out.push_str(&format!("{n},{g},{}\n", fmt_f64(e)));
    }
    out
}

pub fn enumerate_farey(count: u64) -> Value {
    let points: Vec<Value> = (0..count)
        .map(|k| {
            let p = farey_enumeration(k);
            json!({"index": k, "point": p.to_string(), "generation": p.generation()})
        })
        .collect();
    json!({"schema": SCHEMA, "points": points})
}

pub fn coset_classify(words: &[String]) -> Result<Value> {
    let mut out = Vec::new();
    for w in words {
        let a = word(w).with_context(|| format!("bad word {w:?}"))?;
        out.push(json!({"word": w, "matrix": a.to_string(), "reduced": matrix_to_word(&a).to_string(), "coset": commutant_coset(&a)}));
    }
    Ok(json!({"schema": SCHEMA, "classes": out}))
}

/// Lambda lengths given as `{"WORD": "p/q", ...}` squared lengths; edges
/// not listed get 1.
pub fn tess_build(max_gen: u32, lambdas: Option<&str>) -> Result<Value> {
    let mut l = unit_lambdas(max_gen);
    if let Some(text) = lambdas {
        let given: BTreeMap<String, String> = serde_json::from_str(text).context("lambda file")?;
        let edges = farey_edges(max_gen);
        for (w, v) in given {
            let a = word(&w)?;
            if !edges.contains(&a) {
                bail!("{w} is not an edge label of generation <= {max_gen}");
            }
            l.insert(a, parse_rat(&v)?);
        }
    }
    // plain tessellation JSON, so the output reads back with `tess-roundtrip --input`
    Ok(build_tessellation(&l, max_gen)?.to_json())
}

pub fn expand_basis(field: &str) -> Result<Value> {
    let f = PiecewiseField::from_json_str(field)?;
    let e = expand_in_basis(&f)?;
    let terms: BTreeMap<String, String> = e.terms.iter().map(|(a, k)| (matrix_to_word(a).to_string(), format_rat(k))).collect();
    Ok(json!({"schema": SCHEMA, "expansion": e.to_json(), "by_word": terms}))
}
