//! Complex roots by Aberth-Ehrlich iteration on square-free parts, with error
//! radii from the residual bound 4 |p(r)| / |p'(r)| evaluated exactly.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;

use super::poly::ExactPoly;
use super::xfloat::{XComplex, XFloat};
use super::zpoly::ZPoly;
use crate::error::{Error, Result};

pub const MAX_ITERATIONS: usize = 1000;
const NEWTON_POLISH: usize = 4;

/// A complex root location with an error radius. Components use an extended
/// exponent so stretch factors far beyond 1e308 are representable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexApprox {
    pub re: XFloat,
    pub im: XFloat,
    pub radius: XFloat,
}

impl ComplexApprox {
    pub fn new(re: f64, im: f64, radius: f64) -> Self {
        ComplexApprox { re: re.into(), im: im.into(), radius: radius.into() }
    }

    pub fn exact(z: Complex64) -> Self {
        Self::new(z.re, z.im, 0.0)
    }

    pub fn from_x(z: XComplex, radius: XFloat) -> Self {
        ComplexApprox { re: z.re(), im: z.im(), radius }
    }

    pub fn x(&self) -> XComplex {
        XComplex::new(self.re, self.im)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn abs(&self) -> XFloat {
        self.x().abs()
    }

    pub fn dist(&self, o: &ComplexApprox) -> XFloat {
        (self.x() - o.x()).abs()
    }

    /// True when the disc around the root meets the real axis.
    pub fn is_real(&self) -> bool {
        self.im.abs() <= self.radius
    }

    pub fn conj(&self) -> Self {
        ComplexApprox { re: self.re, im: -self.im, radius: self.radius }
    }

    fn order(&self, o: &Self) -> Ordering {
        self.re
            .partial_cmp(&o.re)
            .unwrap_or(Ordering::Equal)
            .then_with(|| self.im.partial_cmp(&o.im).unwrap_or(Ordering::Equal))
    }
}

/// Serializes as a JSON number when the value fits in `f64`, else as a
/// scientific-notation string.
pub(crate) fn xfloat_json(x: &XFloat) -> serde_json::Value {
    let v = x.to_f64();
    if v.is_finite() && (v != 0.0 || x.is_zero()) {
        serde_json::json!(v)
    } else {
        serde_json::Value::String(x.to_string())
    }
}

pub(crate) fn xfloat_from_json(v: &serde_json::Value) -> Option<XFloat> {
    match v {
        serde_json::Value::Number(n) => n.as_f64().map(XFloat::new),
        serde_json::Value::String(s) => parse_xfloat(s),
        _ => None,
    }
}

fn parse_xfloat(s: &str) -> Option<XFloat> {
    if let Ok(v) = s.parse::<f64>() {
        if v.is_finite() && (v != 0.0 || s.trim_start_matches(['-', '+']).starts_with('0')) {
            return Some(XFloat::new(v));
        }
    }
    let (m, e) = s.split_once(['e', 'E'])?;
    let m: f64 = m.parse().ok()?;
    let e: f64 = e.parse().ok()?;
    if m == 0.0 {
        return Some(XFloat::ZERO);
    }
    let l2 = m.abs().log2() + e * std::f64::consts::LOG2_10;
    Some(XFloat::exp2(l2).mul_f64(m.signum()))
}

impl Serialize for ComplexApprox {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_json::json!({
            "re": xfloat_json(&self.re),
            "im": xfloat_json(&self.im),
            "radius": xfloat_json(&self.radius),
        })
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexApprox {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        let field = |k: &str| -> std::result::Result<XFloat, D::Error> {
            match v.get(k) {
                None => Ok(XFloat::ZERO),
                Some(x) => xfloat_from_json(x).ok_or_else(|| D::Error::custom(format!("bad {k}"))),
            }
        };
        Ok(ComplexApprox { re: field("re")?, im: field("im")?, radius: field("radius")? })
    }
}

/// All complex roots of `p` with multiplicity, sorted by (re, im). Each radius
/// satisfies radius <= tol * max(1, |root|).
pub fn roots_complex(p: &ExactPoly, tol: f64) -> Result<Vec<ComplexApprox>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("roots"));
    }
    if p.degree() == Some(0) {
        return Err(Error::ConstantPolynomial);
    }
    let (z, _) = p.primitive_integer()?;
    let mut out = Vec::new();
    for (part, mult) in z.square_free() {
        for r in roots_square_free(&part, tol)? {
            for _ in 0..mult {
                out.push(r);
            }
        }
    }
    out.sort_by(|a, b| a.order(b));
    Ok(out)
}

/// Roots of a square-free integer polynomial of positive degree.
pub(crate) fn roots_square_free(f: &ZPoly, tol: f64) -> Result<Vec<ComplexApprox>> {
    let mut f = f.clone();
    let mut out = Vec::new();
    if f.coeffs()[0].is_zero() {
        out.push(ComplexApprox::new(0.0, 0.0, 0.0));
        f = f.div_exact(&ZPoly::from_i64(&[0, 1])).expect("x divides f");
    }
    let n = f.degree().unwrap_or(0);
    if n == 0 {
        return Ok(out);
    }
    let approx = if n == 1 {
        let c = f.coeffs();
        vec![XComplex::real(XFloat::from_rational(&BigRational::new(-c[0].clone(), c[1].clone())))]
    } else {
        aberth(&f)?
    };
    for z in approx {
        out.push(certify(&f, z, tol)?);
    }
    out.sort_by(|a, b| a.order(b));
    Ok(out)
}

fn certify(f: &ZPoly, mut z: XComplex, tol: f64) -> Result<ComplexApprox> {
    let mut best: Option<(XComplex, XFloat)> = None;
    for _ in 0..=NEWTON_POLISH {
        let (step, radius) = newton_exact(f, z);
        let scale = XFloat::ONE.max(z.abs());
        if best.is_none_or(|(_, r)| radius < r) {
            best = Some((z, radius));
        }
        if radius <= scale.mul_f64(tol) || step.is_zero() {
            break;
        }
        z = z - step;
    }
    let (z, radius) = best.expect("at least one evaluation");
    let scale = XFloat::ONE.max(z.abs());
    if radius > scale.mul_f64(tol) {
        return Err(Error::Inconclusive(format!(
            "root near {:?} has error radius {radius} above tolerance {tol:e}",
            z
        )));
    }
    Ok(ComplexApprox::from_x(z, radius))
}

/// Exact Newton correction p(z)/p'(z) at the dyadic point z, rounded once,
/// and the radius n |p(z)| / |p'(z)|: some root lies within that distance.
pub(crate) fn newton_exact(f: &ZPoly, z: XComplex) -> (XComplex, XFloat) {
    let (x, y, s) = z.to_dyadic();
    let d = BigInt::from(1) << (s as usize);
    // Homogenized Horner: returns D^n p(z) and D^(n-1) p'(z) as Gaussian integers.
    let c = f.coeffs();
    let n = c.len() - 1;
    let mut pr = c[n].clone();
    let mut pi = BigInt::zero();
    let mut dpow = BigInt::from(1);
    for j in (0..n).rev() {
        dpow *= &d;
        let npr = &pr * &x - &pi * &y + &c[j] * &dpow;
        let npi = &pr * &y + &pi * &x;
        pr = npr;
        pi = npi;
    }
    let (qr, qi) = derivative_homog(c, &x, &y, &d);
    let p_abs = gauss_abs(&pr, &pi);
    let q_abs = gauss_abs(&qr, &qi);
    if q_abs.is_zero() {
        return (XComplex::ZERO, XFloat::new(f64::MAX));
    }
    // p(z)/p'(z) = (D^n p) / (D * D^(n-1) p').
    let dx = XFloat::exp2(s as f64);
    let num = XComplex::new(XFloat::from_bigint(&pr), XFloat::from_bigint(&pi));
    let den = XComplex::new(XFloat::from_bigint(&qr), XFloat::from_bigint(&qi)).scale(dx);
    let step = num / den;
    (step, (p_abs / (q_abs * dx)).mul_f64(n as f64))
}

/// D^(n-1) p'(z) for z = (x + iy)/D.
fn derivative_homog(c: &[BigInt], x: &BigInt, y: &BigInt, d: &BigInt) -> (BigInt, BigInt) {
    let n = c.len() - 1;
    let mut ar = &c[n] * BigInt::from(n);
    let mut ai = BigInt::zero();
    let mut dpow = BigInt::from(1);
    for j in (1..n).rev() {
        dpow *= d;
        let nr = &ar * x - &ai * y + &c[j] * BigInt::from(j) * &dpow;
        let ni = &ar * y + &ai * x;
        ar = nr;
        ai = ni;
    }
    (ar, ai)
}

fn gauss_abs(a: &BigInt, b: &BigInt) -> XFloat {
    let ax = XFloat::from_bigint(a);
    let bx = XFloat::from_bigint(b);
    (ax * ax + bx * bx).sqrt()
}

fn horner(coeffs: &[XComplex], z: XComplex) -> (XComplex, XComplex) {
    let mut p = coeffs[coeffs.len() - 1];
    let mut d = XComplex::ZERO;
    for c in coeffs[..coeffs.len() - 1].iter().rev() {
        d = d * z + p;
        p = p * z + *c;
    }
    (p, d)
}

/// Initial guesses on circles given by the upper convex hull of (j, log2|a_j|).
fn initial_guesses(abs_log: &[f64]) -> Vec<XComplex> {
    let n = abs_log.len() - 1;
    let pts: Vec<(usize, f64)> =
        abs_log.iter().enumerate().filter(|(_, l)| l.is_finite()).map(|(j, &l)| (j, l)).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            let cross = (x2 as f64 - x1 as f64) * (pt.1 - y1) - (y2 - y1) * (pt.0 as f64 - x1 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut out = Vec::with_capacity(n);
    let sigma = 0.7;
    for w in hull.windows(2) {
        let (i, li) = w[0];
        let (k, lk) = w[1];
        let m = k - i;
        let r = XFloat::exp2((li - lk) / m as f64);
        for q in 0..m {
            let angle = std::f64::consts::TAU * (q as f64 / m as f64 + i as f64 / n as f64) + sigma;
            out.push(XComplex::from_polar(r, angle));
        }
    }
    out
}

fn aberth(f: &ZPoly) -> Result<Vec<XComplex>> {
    let c: Vec<XComplex> = f.coeffs().iter().map(|a| XComplex::real(XFloat::from_bigint(a))).collect();
    let abs_c: Vec<XFloat> = f.coeffs().iter().map(|a| XFloat::from_bigint(a).abs()).collect();
    let n = c.len() - 1;
    let abs_log: Vec<f64> = abs_c.iter().map(XFloat::log2).collect();
    let mut z = initial_guesses(&abs_log);
    let mut done = vec![false; n];
    let eps = f64::EPSILON * 4.0 * n as f64;
    for _ in 0..MAX_ITERATIONS {
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = horner(&c, z[i]);
            let za = z[i].abs();
            let bound = abs_c.iter().rev().fold(XFloat::ZERO, |acc, a| acc * za + *a);
            if p.abs() <= bound.mul_f64(eps) {
                done[i] = true;
                continue;
            }
            if dp.is_zero() {
                z[i] = z[i] + XComplex::from_polar(XFloat::ONE.max(za).mul_f64(1e-8), 1.0 + i as f64);
                continue;
            }
            let ratio = p / dp;
            let mut sum = XComplex::ZERO;
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if !diff.is_zero() {
                        sum = sum + XComplex::real(XFloat::ONE) / diff;
                    }
                }
            }
            let denom = XComplex::real(XFloat::ONE) - ratio * sum;
            let w = if denom.is_zero() { ratio } else { ratio / denom };
            z[i] = z[i] - w;
        }
        if done.iter().all(|&d| d) {
            return Ok(z);
        }
    }
    Err(Error::NonConvergence { iterations: MAX_ITERATIONS })
}

/// Radius of a purported root of `p` (exact residual bound).
pub fn residual_radius(p: &ZPoly, z: &ComplexApprox) -> XFloat {
    newton_exact(p, z.x()).1
}

/// Relative residual |p(z)| / sum |c_j| |z|^j in extended floating point.
pub fn relative_residual(p: &ExactPoly, z: XComplex) -> XFloat {
    let c: Vec<XComplex> = p.coeffs().iter().map(|a| XComplex::real(XFloat::from_rational(a))).collect();
    let (v, _) = horner(&c, z);
    let za = z.abs();
    let bound = p.coeffs().iter().rev().fold(XFloat::ZERO, |acc, a| acc * za + XFloat::from_rational(a).abs());
    if bound.is_zero() {
        return XFloat::ZERO;
    }
    v.abs() / bound
}
