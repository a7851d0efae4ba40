//! Exact arithmetic for the modular group, the Farey tessellation and the
//! Lie algebra of piecewise `sl₂` vector fields on the circle, plus the
//! numeric harmonic analysis and Eisenstein checks that go with it.

pub mod eisenstein;
pub mod fields;
pub mod forms;
pub mod halfplane;
pub mod harmonic;
pub mod linalg;
pub mod mcform;
pub mod modular;
pub mod wavelets;

pub use fields::{PiecewiseField, Sl2};
pub use modular::{ExtendedRational, Framing, GroupElement, GroupWord, Mat2, Rat};

/// `n/d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// An integer as an exact rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}
