//! High-precision complex evaluation of the nonholomorphic completion
//! apparatus, plus numeric twins of the symbolic series.
//!
//! All series truncations stop on a term-magnitude threshold derived
//! from the working precision (several orders below the user-facing
//! target tolerance), with hard `max_terms` caps; confidence comes from
//! the double-run convention: a result at precision p and truncation N
//! must agree with the run at 2p and the induced deeper truncation to
//! within `target_tol`.

pub mod complex;
pub mod special;
pub mod twins;

use std::fmt;

use rug::ops::Pow;
use rug::Float;
use serde::Deserialize;

pub use complex::{pi, rational_to_float, MpComplex};

/// Errors from the numeric layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumericError {
    /// An input sits within pole_eps of a singular factor.
    PoleProximity { what: String },
    /// A series failed to meet its stopping threshold within max_terms.
    Convergence { what: String },
    /// Input outside the function's domain (|q| >= 1, Im tau too small, ...).
    Domain { what: String },
}

impl fmt::Display for NumericError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumericError::PoleProximity { what } => write!(f, "pole proximity: {what}"),
            NumericError::Convergence { what } => write!(f, "convergence failure: {what}"),
            NumericError::Domain { what } => write!(f, "domain error: {what}"),
        }
    }
}

impl std::error::Error for NumericError {}

pub type NumericResult<T> = Result<T, NumericError>;

/// Working-precision and truncation policy.
#[derive(Clone, Copy, Debug)]
pub struct NumericPolicy {
    /// User-facing absolute tolerance.
    pub target_tol: f64,
    /// Working precision in decimal digits (>= 30).
    pub precision_digits: u32,
    /// Hard cap on summation indices per series.
    pub max_terms: usize,
    /// Inputs closer than this to a singular factor are rejected.
    pub pole_eps: f64,
    /// Minimum Im(tau) accepted for user-supplied points.
    pub min_im: f64,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        NumericPolicy {
            target_tol: 1e-12,
            precision_digits: 50,
            max_terms: 10_000,
            pole_eps: 1e-8,
            min_im: 0.05,
        }
    }
}

impl NumericPolicy {
    pub fn validate(&self) -> NumericResult<()> {
        if self.target_tol <= 0.0 || self.target_tol.is_nan() || self.precision_digits < 30 {
            return Err(NumericError::Domain {
                what: format!(
                    "need target_tol > 0 and precision >= 30 digits; got tol={}, digits={}",
                    self.target_tol, self.precision_digits
                ),
            });
        }
        Ok(())
    }

    /// Binary working precision with guard bits.
    pub fn prec_bits(&self) -> u32 {
        (self.precision_digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 24
    }

    /// Term-magnitude stopping threshold: 10^-(digits+8).
    pub fn stop_eps(&self) -> Float {
        Float::with_val(self.prec_bits(), 10).pow(-(self.precision_digits as i32 + 8))
    }

    /// The double-run twin: twice the digits, twice the index budget.
    pub fn doubled(&self) -> NumericPolicy {
        NumericPolicy {
            precision_digits: self.precision_digits * 2,
            max_terms: self.max_terms * 2,
            ..*self
        }
    }
}

/// A point τ in the upper half-plane, with Im(τ) >= min_im.
#[derive(Clone, Copy, Debug)]
pub struct UhpPoint {
    pub re: f64,
    pub im: f64,
}

impl UhpPoint {
    pub fn new(re: f64, im: f64, policy: &NumericPolicy) -> NumericResult<Self> {
        if im < policy.min_im || im.is_nan() {
            return Err(NumericError::Domain {
                what: format!("Im(tau) = {im} below the minimum {}", policy.min_im),
            });
        }
        Ok(UhpPoint { re, im })
    }

    pub fn to_mp(&self, prec: u32) -> MpComplex {
        MpComplex::from_f64(prec, self.re, self.im)
    }
}

/// Distance from w to the lattice Zτ + Z.
pub fn lattice_distance(w: (f64, f64), tau: (f64, f64)) -> f64 {
    let m0 = (w.1 / tau.1).round() as i64;
    let mut best = f64::INFINITY;
    for m in (m0 - 1)..=(m0 + 1) {
        let rx = w.0 - m as f64 * tau.0;
        let ry = w.1 - m as f64 * tau.1;
        let n = rx.round();
        let d = ((rx - n).powi(2) + ry.powi(2)).sqrt();
        best = best.min(d);
    }
    best
}

/// Elliptic arguments u, v, both at lattice distance > pole_eps.
#[derive(Clone, Copy, Debug)]
pub struct EllipticArgs {
    pub u: (f64, f64),
    pub v: (f64, f64),
}

impl EllipticArgs {
    pub fn new(
        u: (f64, f64),
        v: (f64, f64),
        tau: &UhpPoint,
        policy: &NumericPolicy,
    ) -> NumericResult<Self> {
        for (name, w) in [("u", u), ("v", v)] {
            let d = lattice_distance(w, (tau.re, tau.im));
            if d <= policy.pole_eps {
                return Err(NumericError::PoleProximity {
                    what: format!("{name} = {w:?} is within {d:.3e} of Z*tau + Z"),
                });
            }
        }
        Ok(EllipticArgs { u, v })
    }
}

/// One sample point of a residual grid.
#[derive(Clone, Copy, Debug, Deserialize)]
pub struct GridPoint {
    pub tau_re: f64,
    pub tau_im: f64,
    pub u_re: f64,
    pub u_im: f64,
    pub v_re: f64,
    pub v_im: f64,
}

/// Grid file schema: {"points": [...], "tol": 1e-9}.
#[derive(Clone, Debug, Deserialize)]
pub struct GridSpec {
    pub points: Vec<GridPoint>,
    #[serde(default)]
    pub tol: Option<f64>,
}

/// Ten deterministic sample points with Im(τ) spanning [0.5, 2] and
/// u, v at lattice distance well above 0.05.
pub fn default_grid() -> Vec<GridPoint> {
    (0..10)
        .map(|k| {
            let t = k as f64;
            GridPoint {
                tau_re: 0.03 * t - 0.1,
                tau_im: 0.5 + 1.5 * t / 9.0,
                u_re: 0.23 + 0.011 * t,
                u_im: 0.17 + 0.02 * t,
                v_re: -0.14 + 0.013 * t,
                v_im: 0.31 - 0.01 * t,
            }
        })
        .collect()
}
