//! Replays the checked-in fuzz seeds with the fuzz targets' assertions, so
//! they run under a stable `cargo test` too.

use std::fs;
use std::path::PathBuf;

use ppsl2::halfplane::DecoratedTessellationTruncation;
use ppsl2::modular::matrix_to_word;
use ppsl2::wavelets::BasisExpansion;
use ppsl2::{ExtendedRational, GroupWord, PiecewiseField};

/// Seeds for `target` as strings, plus how many parsed.
fn replay(target: &str, mut f: impl FnMut(&str) -> bool) -> (usize, usize) {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut seen = (0, 0);
    for e in fs::read_dir(&dir).unwrap() {
        let bytes = fs::read(e.unwrap().path()).unwrap();
        let Ok(s) = std::str::from_utf8(&bytes) else { continue };
        seen.0 += 1;
        if f(s) {
            seen.1 += 1;
        }
    }
    seen
}

#[test]
fn rationals() {
    let (n, ok) = replay("parse_rational", |s| match s.parse::<ExtendedRational>() {
        Ok(x) => {
            assert_eq!(x.to_string().parse::<ExtendedRational>().unwrap(), x);
            true
        }
        Err(_) => false,
    });
    assert!(n >= 10 && ok >= 7 && ok < n, "{ok}/{n}");
}

#[test]
fn words() {
    let (n, ok) = replay("parse_word", |s| match s.parse::<GroupWord>() {
        Ok(w) => {
            let a = w.to_matrix();
            let r = matrix_to_word(&a);
            assert_eq!(r.to_matrix(), a);
            assert_eq!(r.to_string().parse::<GroupWord>().unwrap().to_matrix(), a);
            true
        }
        Err(_) => false,
    });
    assert!(n >= 10 && ok >= 8 && ok < n, "{ok}/{n}");
}

#[test]
fn fields() {
    let (n, ok) = replay("field_json", |s| match PiecewiseField::from_json_str(s) {
        Ok(f) => {
            assert_eq!(PiecewiseField::from_json_str(&f.to_json().to_string()).unwrap(), f);
            true
        }
        Err(_) => false,
    });
    assert_eq!((n, ok), (4, 3));
}

#[test]
fn expansions() {
    let (n, ok) = replay("basis_json", |s| match BasisExpansion::from_json_str(s) {
        Ok(e) => {
            let back = BasisExpansion::from_json_str(&e.to_json().to_string()).unwrap();
            assert_eq!((back.terms, back.global), (e.terms, e.global));
            true
        }
        Err(_) => false,
    });
    assert_eq!((n, ok), (3, 2));
}

#[test]
fn tessellations() {
    let (n, ok) = replay("tess_json", |s| match DecoratedTessellationTruncation::from_json_str(s) {
        Ok(t) => {
            assert_eq!(DecoratedTessellationTruncation::from_json_str(&t.to_json().to_string()).unwrap(), t);
            true
        }
        Err(_) => false,
    });
    assert_eq!((n, ok), (3, 2));
}
