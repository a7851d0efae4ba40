//! The displayed wavelet tables around the doe, as printed but with the
//! misprints corrected (see the README). Rows are the eight subarcs
//! `I-, I+, ..., IV+`; matrices are written row by row.
//!
//! Displayed values are the negatives of the stored fields.

use ppsl2::modular::parse_rat;
use ppsl2::Sl2;

pub type Table = [&'static str; 8];

const ID: &str = "-1 0 0 1";
const NID: &str = "1 0 0 -1";
const SW: &str = "0 1 1 0";
const NSW: &str = "0 -1 -1 0";
const Z: &str = "0 0 0 0";

/// Un-normalized wavelets of `a, b, c, d, e` before the flip.
pub const BEFORE: [(&str, Table); 5] = [
    ("a", ["-1 -4 0 1", "3 4 -2 -3", "-1 0 2 1", "-1 0 2 1", ID, ID, ID, ID]),
    ("b", ["1 2 0 -1", "1 2 0 -1", "-3 -2 4 3", "1 0 -4 -1", NID, NID, NID, NID]),
    ("c", [NID, NID, NID, NID, "1 0 4 -1", "-3 2 -4 3", "1 -2 0 -1", "1 -2 0 -1"]),
    ("d", [ID, ID, ID, ID, "-1 0 -2 1", "-1 0 -2 1", "3 -4 2 -3", "-1 4 0 1"]),
    ("e", ["-1 -2 0 1", "-1 -2 0 1", "1 0 -2 -1", "1 0 -2 -1", "1 0 2 -1", "1 0 2 -1", "-1 2 0 1", "-1 2 0 1"]),
];

/// Normalized wavelets before the flip; also the arc sums before the flip.
pub const BEFORE_NORMALIZED: [(&str, Table); 5] = [
    ("a", ["0 -4 0 0", "4 4 -2 -4", "0 0 2 0", "0 0 2 0", Z, Z, Z, Z]),
    ("b", ["0 2 0 0", "0 2 0 0", "-4 -2 4 4", "0 0 -4 0", Z, Z, Z, Z]),
    BEFORE[2],
    BEFORE[3],
    BEFORE[4],
];

/// Un-normalized wavelets of `a, b, c, d` after the flip.
pub const AFTER: [(&str, Table); 4] = [
    ("a", ["-1 -4 0 1", "3 4 -2 -3", SW, SW, SW, SW, "-1 2 0 1", "-1 2 0 1"]),
    ("b", [SW, SW, "-3 -2 4 3", "1 0 -4 -1", "1 0 2 -1", "1 0 2 -1", SW, SW]),
    ("c", [NSW, NSW, "1 0 -2 -1", "1 0 -2 -1", "1 0 4 -1", "-3 2 -4 3", NSW, NSW]),
    ("d", ["-1 -2 0 1", "-1 -2 0 1", NSW, NSW, NSW, NSW, "3 -4 2 -3", "-1 4 0 1"]),
];

/// Normalized wavelets of `a, b, c, d, f` after the flip, i.e. the arc sums.
pub const AFTER_NORMALIZED: [(&str, Table); 5] = [
    ("a", ["-1/2 -5 0 1/2", "7/2 3 -2 -7/2", "1/2 0 1 -1/2", "1/2 0 1 -1/2", "1/2 0 1 -1/2", "1/2 0 1 -1/2", "-1/2 1 0 1/2", "-1/2 1 0 1/2"]),
    ("b", ["-1/2 1 0 1/2", "-1/2 1 0 1/2", "-7/2 -2 3 7/2", "1/2 0 -5 -1/2", "1/2 0 1 -1/2", "1/2 0 1 -1/2", "-1/2 1 0 1/2", "-1/2 1 0 1/2"]),
    ("c", ["1/2 -1 0 -1/2", "1/2 -1 0 -1/2", "3/2 0 -1 -3/2", "3/2 0 -1 -3/2", "3/2 0 5 -3/2", "-5/2 2 -3 5/2", "1/2 -1 0 -1/2", "1/2 -1 0 -1/2"]),
    ("d", ["-3/2 -1 0 3/2", "-3/2 -1 0 3/2", "-1/2 0 -1 1/2", "-1/2 0 -1 1/2", "-1/2 0 -1 1/2", "-1/2 0 -1 1/2", "5/2 -3 2 -5/2", "-3/2 5 0 3/2"]),
    ("f", ["1 2 0 -1", "1 2 0 -1", "-1 0 2 1", "-1 0 2 1", "-1 0 -2 1", "-1 0 -2 1", "1 -2 0 -1", "1 -2 0 -1"]),
];

/// Parse a row-by-row matrix; `None` unless it is traceless.
pub fn matrix(s: &str) -> Option<Sl2> {
    let v: Vec<_> = s.split_whitespace().map(parse_rat).collect::<Result<_, _>>().ok()?;
    match v.as_slice() {
        [a, b, c, d] => Sl2::from_entries(a.clone(), b.clone(), c.clone(), d.clone()).ok(),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_entry_is_traceless() {
        let all = BEFORE.iter().chain(&BEFORE_NORMALIZED).chain(&AFTER).chain(&AFTER_NORMALIZED);
        for (name, t) in all {
            for s in t {
                assert!(matrix(s).is_some(), "{name}: {s}");
            }
        }
        assert!(matrix("1 2 3 4").is_none());
        assert!(matrix("1 2").is_none());
    }
}
