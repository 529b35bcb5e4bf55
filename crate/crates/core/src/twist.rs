//! Penner twist matrices Q_i = I + E_i Omega, word products and stretch factors.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::algebra::roots::{roots_complex, ComplexApprox};
use crate::algebra::{ExactMatrix, ExactPoly, XFloat};
use crate::error::{Error, Result};
use crate::proj::{omega_i64, ClosedPath};

pub const DEFAULT_K_CAP: u32 = 60;
pub const DEFAULT_PATH_CAP: usize = 512;
pub const STRETCH_ROOT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct TwistMatrixSet {
    pub omega: ExactMatrix,
    pub matrices: Vec<ExactMatrix>,
}

/// Q_i adds (row i of Omega) . x to coordinate i.
pub fn twist_matrices(omega: &ExactMatrix) -> Result<TwistMatrixSet> {
    if !omega.is_square() {
        return Err(Error::NotSquare { rows: omega.rows(), cols: omega.cols() });
    }
    let n = omega.rows();
    let matrices = (0..n)
        .map(|i| {
            let mut q = ExactMatrix::identity(n);
            for c in 0..n {
                q.set(i, c, q.get(i, c) + omega.get(i, c));
            }
            q
        })
        .collect();
    Ok(TwistMatrixSet { omega: omega.clone(), matrices })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PennerWordSpec {
    pub path: ClosedPath,
    pub k: u32,
}

impl PennerWordSpec {
    pub fn new(path: ClosedPath, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("exponent k must be at least 1".into()));
        }
        Ok(PennerWordSpec { path, k })
    }

    /// Beyond the default caps the big integers get slow, but nothing breaks.
    pub fn exceeds_default_caps(&self) -> bool {
        self.k > DEFAULT_K_CAP || self.path.len() > DEFAULT_PATH_CAP
    }
}

/// M = Q_{i_K}^k ... Q_{i_1}^k as a flat row-major integer matrix.
pub(crate) fn word_matrix_int(omega: &[Vec<BigInt>], path: &ClosedPath, k: u32) -> Vec<BigInt> {
    let n = omega.len();
    let mut m = vec![BigInt::zero(); n * n];
    for i in 0..n {
        m[i * n + i] = BigInt::one();
    }
    let k = BigInt::from(k);
    let mut acc = vec![BigInt::zero(); n];
    for &v in path.vertices() {
        // Q_v^k = I + k E_v Omega: row v += k * (Omega[v] . M)
        for a in acc.iter_mut() {
            a.set_zero();
        }
        for (r, w) in omega[v].iter().enumerate() {
            if w.is_zero() {
                continue;
            }
            for c in 0..n {
                acc[c] += w * &m[r * n + c];
            }
        }
        for c in 0..n {
            m[v * n + c] += &k * &acc[c];
        }
    }
    m
}

pub fn word_matrix(spec: &PennerWordSpec, q: &TwistMatrixSet) -> Result<ExactMatrix> {
    let omega = omega_i64(&q.omega)?;
    let n = omega.len();
    for (a, b) in spec.path.edges() {
        if a >= n || b >= n || !omega[a][b].is_positive() {
            return Err(Error::NoEdge(a + 1, b + 1));
        }
    }
    ExactMatrix::from_bigint(n, n, word_matrix_int(&omega, &spec.path, spec.k))
}

/// Reference product through the Q_i matrices themselves (slow; for cross-checks).
pub fn word_matrix_by_products(spec: &PennerWordSpec, q: &TwistMatrixSet) -> Result<ExactMatrix> {
    let n = q.omega.rows();
    let mut m = ExactMatrix::identity(n);
    for &v in spec.path.vertices() {
        for _ in 0..spec.k {
            m = q.matrices[v].mul(&m)?;
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StretchResult {
    pub k: Option<u32>,
    pub u: ExactPoly,
    pub lambda: ComplexApprox,
    pub dominant: bool,
    /// All roots of u, for callers that need the rest of the spectrum.
    pub roots: Vec<ComplexApprox>,
}

impl Serialize for StretchResult {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::algebra::roots::xfloat_json;
        serde_json::json!({
            "k": self.k,
            "u": self.u,
            "lambda": { "re": xfloat_json(&self.lambda.re), "radius": xfloat_json(&self.lambda.radius) },
            "dominant": self.dominant,
        })
        .serialize(s)
    }
}

/// The largest real root of chi(M) and whether it strictly dominates.
pub fn stretch_factor(m: &ExactMatrix) -> Result<StretchResult> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    if m.entries().iter().any(Signed::is_negative) {
        return Err(Error::NotPerronFrobenius("negative entry".into()));
    }
    if *m == ExactMatrix::identity(m.rows()) {
        return Err(Error::NotPerronFrobenius("identity matrix".into()));
    }
    let u = m.charpoly()?;
    stretch_from_charpoly(u)
}

pub(crate) fn stretch_from_charpoly(u: ExactPoly) -> Result<StretchResult> {
    let roots = roots_complex(&u, STRETCH_ROOT_TOL)?;
    let (idx, lambda) = roots
        .iter()
        .enumerate()
        .filter(|(_, r)| r.is_real())
        .max_by(|a, b| a.1.re.partial_cmp(&b.1.re).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(i, r)| (i, *r))
        .ok_or_else(|| Error::NotPerronFrobenius("no real root".into()))?;
    if lambda.re - lambda.radius <= XFloat::ONE {
        return Err(Error::NotPerronFrobenius(format!("leading root {} is not above 1", lambda.re)));
    }
    let lambda = ComplexApprox { im: XFloat::ZERO, ..lambda };
    let low = lambda.re - lambda.radius;
    let dominant = roots.iter().enumerate().all(|(i, z)| i == idx || z.abs() + z.radius < low);
    Ok(StretchResult { k: None, u, lambda, dominant, roots })
}

/// u_k for the Penner word (path, k), with k recorded.
pub fn stretch_for_word(spec: &PennerWordSpec, q: &TwistMatrixSet) -> Result<StretchResult> {
    let m = word_matrix(spec, q)?;
    let mut s = stretch_factor(&m)?;
    s.k = Some(spec.k);
    Ok(s)
}

/// |u(0)| = 1.
pub fn unit_constant_check(u: &ExactPoly) -> bool {
    u.coeff(0).abs().is_one()
}
