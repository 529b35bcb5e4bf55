//! Target -> quadratic -> generator word -> Penner word -> certified conjugates.

mod scan;
mod search;
mod verify;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{ComplexApprox, ExactMatrix, ExactScalar};
use crate::error::{Error, Result};

pub use scan::{density_scan, grid_targets, scan_targets, ScanConfig, ScanReport, TargetOutcome, TargetStatus};
pub use search::{approximate_word, steering_pool, ApproxResult, SearchBudget, SearchStats};
pub use verify::{trace_path, verify_conjugates, ConjugateTrace, KEntry, Verdict};

/// u(x) = x^2 + a x + b with b > 0.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadraticTarget {
    pub a: f64,
    pub b: f64,
    pub theta: ComplexApprox,
}

impl QuadraticTarget {
    /// Required trace of a 2x2 matrix with this characteristic polynomial.
    pub fn trace(&self) -> f64 {
        -self.a
    }

    pub fn det(&self) -> f64 {
        self.b
    }
}

/// (x - theta)(x - conj theta) = x^2 - 2 Re(theta) x + |theta|^2.
pub fn target_to_quadratic(theta: ComplexApprox) -> Result<QuadraticTarget> {
    let z = theta.to_c64();
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidArgument("target must be nonzero".into()));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidArgument("target must be finite".into()));
    }
    Ok(QuadraticTarget { a: -2.0 * z.re, b: z.norm_sqr(), theta })
}

/// C_{n+1} C_n^{-1} for C_n = A1^n A2 A1^{-n}, A1 = diag(a1, 1), A2 = [[a2, 0], [b, 1]].
pub fn shear_refinement(a1: &ExactScalar, a2: &ExactScalar, b: &ExactScalar, n: u32) -> Result<ExactMatrix> {
    let one = ExactScalar::from_integer(1.into());
    let zero = ExactScalar::from_integer(0.into());
    let pow = |x: &ExactScalar, e: i32| -> ExactScalar {
        if e >= 0 {
            (0..e).fold(one.clone(), |acc, _| acc * x)
        } else {
            (0..-e).fold(one.clone(), |acc, _| acc / x)
        }
    };
    let a1m = |e: i32| ExactMatrix::new(2, 2, vec![pow(a1, e), zero.clone(), zero.clone(), one.clone()]);
    let a2m = ExactMatrix::new(2, 2, vec![a2.clone(), zero.clone(), b.clone(), one.clone()])?;
    let c = |m: i32| -> Result<ExactMatrix> { a1m(m)?.mul(&a2m)?.mul(&a1m(-m)?) };
    let n = n as i32;
    c(n + 1)?.mul(&c(n)?.inverse()?)
}
