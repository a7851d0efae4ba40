//! Verification suites and data emitters behind the `ppsl2` binary.
//!
//! Each suite returns a [`Report`]; the acceptance target and the `verify`
//! subcommands share them.

use std::sync::OnceLock;

use serde_json::{json, Value};

pub mod display;
pub mod emit;
pub mod suites;

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug)]
pub struct Report {
    pub suite: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub detail: Value,
    /// The first failing case, serialized.
    pub failure: Option<Value>,
}

impl Report {
    pub fn new(suite: &'static str) -> Self {
        Report { suite, passed: true, checked: 0, detail: json!({}), failure: None }
    }

    /// Count one check; keep the first failure.
    pub fn check(&mut self, ok: bool, case: impl FnOnce() -> Value) {
        self.checked += 1;
        if !ok {
            if self.failure.is_none() {
                self.failure = Some(case());
            }
            self.passed = false;
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "suite": self.suite,
            "passed": self.passed,
            "checked": self.checked,
            "convention": convention().clone(),
            "detail": self.detail,
            "failure": self.failure,
        })
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// The conventions every report is measured under.
pub fn convention() -> &'static Value {
    static C: OnceLock<Value> = OnceLock::new();
    C.get_or_init(|| {
        let ratio = ppsl2::forms::ratio_report(2, &[]).ratio.map(|r| ppsl2::modular::format_rat(&r));
        json!({
            "circle": "e^{i theta} = (s - i)/(s + i); increasing s is counterclockwise",
            "action": "right, s.A = (ds - b)/(-cs + a)",
            "composition": "adjoint matrices compose as M_AB = M_B M_A",
            "display_sign": -1,
            "gamma_over_omega": ratio,
        })
    })
}

/// Fixed-precision float formatting for deterministic JSON.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.6e}")
}

/// Cap rayon at `FAREY_PPSL2_THREADS` if set. Safe to call more than once.
pub fn init_threads() {
    if let Some(n) = std::env::var("FAREY_PPSL2_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

pub fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}
