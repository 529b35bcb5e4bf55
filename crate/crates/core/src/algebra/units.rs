use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::factor::factor_over_z;
use super::poly::ExactPoly;
use super::roots::{roots_square_free, ComplexApprox};
use super::xfloat::XFloat;
use crate::error::{Error, Result};

/// Root tolerance used when locating roots of individual factors.
pub const FACTOR_ROOT_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnitCertificate {
    pub is_unit: bool,
    /// Irreducible primitive integer polynomial vanishing at the root.
    pub min_poly: ExactPoly,
}

/// Decides whether the algebraic number near `root` is a unit, by locating its
/// irreducible factor in `p`.
pub fn is_algebraic_unit(p: &ExactPoly, root: &ComplexApprox) -> Result<UnitCertificate> {
    let (prim, _) = p.primitive_integer()?;
    let fac = factor_over_z(&prim.to_exact())?;
    let min_poly = select_factor(fac.factors.iter().map(|(f, _)| f), root)?.clone();
    let c = min_poly.coeffs();
    let is_unit = c[0].abs().is_one() && c[c.len() - 1].abs().is_one();
    Ok(UnitCertificate { is_unit, min_poly })
}

/// The unique factor with a root within the combined radii of `root`.
pub(crate) fn select_factor<'a>(
    factors: impl Iterator<Item = &'a ExactPoly>,
    root: &ComplexApprox,
) -> Result<&'a ExactPoly> {
    let slack = XFloat::ONE.max(root.abs()).mul_f64(1e-12) + root.radius;
    let mut scored: Vec<(XFloat, &ExactPoly)> = Vec::new();
    for f in factors {
        let z = f.to_zpoly()?;
        let best = roots_square_free(&z, FACTOR_ROOT_TOL)?
            .iter()
            .map(|r| r.dist(root) - r.radius)
            .fold(None, |acc: Option<XFloat>, d| Some(acc.map_or(d, |a| if d < a { d } else { a })))
            .expect("factor of positive degree");
        scored.push((best, f));
    }
    let hits: Vec<_> = scored.iter().filter(|(d, _)| *d <= slack).collect();
    match hits.as_slice() {
        [(_, f)] => Ok(f),
        [] => Err(Error::Inconclusive(format!("no factor vanishes within {slack} of the root"))),
        _ => Err(Error::Inconclusive(format!(
            "{} factors vanish within {slack} of the root; refine the radius",
            hits.len()
        ))),
    }
}

/// Result of dividing by (x - lambda).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Deflation {
    /// Quotient coefficients, ascending.
    pub quotient: Vec<f64>,
    /// |p(lambda)| / sum |c_j| |lambda|^j, evaluated exactly at the given lambda.
    pub remainder: f64,
}

/// Deflates `p` by a real root near `lambda`. The division is carried out
/// exactly at the dyadic value of `lambda`, forward for |lambda| <= 1 and
/// backward otherwise, so huge roots do not amplify rounding.
pub fn poly_divide_root(p: &ExactPoly, lambda: &ComplexApprox, tol: f64) -> Result<Deflation> {
    let n = p.degree().ok_or(Error::ZeroPolynomial("root"))?;
    if n == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if !lambda.is_real() {
        return Err(Error::InvalidArgument("deflation needs a real root".into()));
    }
    let l = lambda.re.to_rational();
    let a = p.coeffs();
    let mut q = vec![BigRational::zero(); n];
    if l.abs() <= BigRational::one() {
        q[n - 1] = a[n].clone();
        for j in (1..n).rev() {
            q[j - 1] = &a[j] + &l * &q[j];
        }
    } else {
        q[0] = -&a[0] / &l;
        for j in 1..n {
            q[j] = (&q[j - 1] - &a[j]) / &l;
        }
    }
    let value = XFloat::from_rational(&p.eval(&l)).abs();
    let la = XFloat::from_rational(&l).abs();
    let scale = a.iter().rev().fold(XFloat::ZERO, |acc, c| acc * la + XFloat::from_rational(c).abs());
    let remainder = if scale.is_zero() { 0.0 } else { (value / scale).to_f64() };
    if remainder > tol {
        return Err(Error::Deflation { residual: remainder, tol });
    }
    Ok(Deflation { quotient: q.iter().map(super::scalar::to_f64).collect(), remainder })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_examples() {
        let golden = ComplexApprox::new((3.0 + 5f64.sqrt()) / 2.0, 0.0, 1e-12);
        let c = is_algebraic_unit(&ExactPoly::from_i64(&[1, -3, 1]), &golden).unwrap();
        assert!(c.is_unit);
        assert_eq!(c.min_poly, ExactPoly::from_i64(&[1, -3, 1]));

        let c = is_algebraic_unit(&ExactPoly::from_i64(&[-2, -1, 1]), &ComplexApprox::new(2.0, 0.0, 0.0)).unwrap();
        assert!(!c.is_unit);
        assert_eq!(c.min_poly, ExactPoly::from_i64(&[-2, 1]));

        let c = is_algebraic_unit(&ExactPoly::from_i64(&[-2, 3]), &ComplexApprox::new(2.0 / 3.0, 0.0, 0.0)).unwrap();
        assert!(!c.is_unit);
        assert_eq!(c.min_poly, ExactPoly::from_i64(&[-2, 3]));
    }

    #[test]
    fn ambiguous_radius_is_inconclusive() {
        // roots 1 and 1.001, radius covering both
        let p = ExactPoly::from_i64(&[-1, 1]).mul(&ExactPoly::from_i64(&[-1001, 1000]));
        let r = ComplexApprox::new(1.0005, 0.0, 0.01);
        assert!(matches!(is_algebraic_unit(&p, &r), Err(Error::Inconclusive(_))));
    }

    #[test]
    fn deflation_examples() {
        let d = poly_divide_root(
            &ExactPoly::from_i64(&[1, -3, 1]),
            &ComplexApprox::new((3.0 + 5f64.sqrt()) / 2.0, 0.0, 0.0),
            1e-9,
        )
        .unwrap();
        assert!((d.quotient[0] + (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-12);
        assert_eq!(d.quotient[1], 1.0);
        let d = poly_divide_root(&ExactPoly::from_i64(&[2, -3, 1]), &ComplexApprox::new(2.0, 0.0, 0.0), 1e-9).unwrap();
        assert_eq!(d.quotient, vec![-1.0, 1.0]);
        assert_eq!(d.remainder, 0.0);
        let d =
            poly_divide_root(&ExactPoly::from_i64(&[0, 0, 0, 1]), &ComplexApprox::new(0.0, 0.0, 0.0), 1e-9).unwrap();
        assert_eq!(d.quotient, vec![0.0, 0.0, 1.0]);
        let bad = poly_divide_root(&ExactPoly::from_i64(&[2, -3, 1]), &ComplexApprox::new(3.0, 0.0, 0.0), 1e-9);
        assert!(matches!(bad, Err(Error::Deflation { .. })));
    }
}
