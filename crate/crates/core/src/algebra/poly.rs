use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

use super::scalar::{self, ExactScalar};
use super::zpoly::ZPoly;
use crate::error::{Error, Result};

/// Univariate polynomial over the rationals, ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ExactPoly {
    c: Vec<ExactScalar>,
}

impl ExactPoly {
    pub fn new(mut c: Vec<ExactScalar>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        ExactPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| scalar::int(v)).collect())
    }

    pub fn from_bigint(c: &[BigInt]) -> Self {
        Self::new(c.iter().cloned().map(BigRational::from_integer).collect())
    }

    pub fn zero() -> Self {
        ExactPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ExactScalar::one())
    }

    pub fn constant(v: ExactScalar) -> Self {
        Self::new(vec![v])
    }

    /// The monic linear polynomial x - r.
    pub fn linear(r: ExactScalar) -> Self {
        Self::new(vec![-r, ExactScalar::one()])
    }

    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> ExactScalar {
        self.c.get(i).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&ExactScalar> {
        self.c.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn is_integer(&self) -> bool {
        self.c.iter().all(|x| x.is_integer())
    }

    pub fn monic(&self) -> Result<Self> {
        let lc = self.leading().ok_or(Error::ZeroPolynomial("leading coefficient"))?.clone();
        Ok(self.scale(&lc.recip()))
    }

    pub fn scale(&self, k: &ExactScalar) -> Self {
        Self::new(self.c.iter().map(|a| a * k).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![ExactScalar::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Euclidean division over the rationals.
    pub fn divrem(&self, d: &Self) -> Result<(Self, Self)> {
        let dd = d.degree().ok_or(Error::ZeroPolynomial("inverse under division"))?;
        let lc = d.c[dd].clone();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![ExactScalar::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let f = &r[i + dd] / &lc;
            if f.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                r[i + j] -= &f * dj;
            }
            q[i] = f;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    /// Exact quotient when `d` divides `self`, otherwise `None`.
    pub fn exact_div(&self, d: &Self) -> Result<Option<Self>> {
        let (q, r) = self.divrem(d)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.divrem(self)?.1.is_zero())
    }

    /// Monic gcd over the rationals (zero if both inputs are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic().unwrap_or_default()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.c.iter().enumerate().skip(1).map(|(i, a)| a * BigRational::from_integer(BigInt::from(i))).collect(),
        )
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        self.c.iter().rev().fold(ExactScalar::zero(), |acc, a| acc * x + a)
    }

    /// Coefficients as `f64`; values beyond the `f64` range saturate to infinity.
    pub fn to_f64(&self) -> Vec<f64> {
        self.c.iter().map(scalar::to_f64).collect()
    }

    /// Scales by the lcm of denominators and divides out the content, fixing a
    /// positive leading coefficient. Returns (primitive integer poly, factor q)
    /// with `self = q * primitive`.
    pub fn primitive_integer(&self) -> Result<(ZPoly, ExactScalar)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("primitive part"));
        }
        let d = self.c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self.c.iter().map(|x| (x * &d).to_integer()).collect();
        let z = ZPoly::new(ints);
        let (content, prim) = z.content_primitive();
        Ok((prim, BigRational::new(content, d)))
    }

    /// Integer view; fails if some coefficient has a nontrivial denominator.
    pub fn to_zpoly(&self) -> Result<ZPoly> {
        if !self.is_integer() {
            return Err(Error::NotInteger);
        }
        Ok(ZPoly::new(self.c.iter().map(|x| x.to_integer()).collect()))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.c.iter().map(scalar::format_scalar).collect()
    }

    pub fn from_strings<S: AsRef<str>>(s: &[S]) -> Result<Self> {
        Ok(Self::new(s.iter().map(|x| scalar::parse_scalar(x.as_ref())).collect::<Result<_>>()?))
    }
}

impl Serialize for ExactPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: Vec<String> = Vec::deserialize(d)?;
        ExactPoly::from_strings(&raw).map_err(D::Error::custom)
    }
}

impl fmt::Display for ExactPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({mag})")?;
                }
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::ratio;

    #[test]
    fn arithmetic() {
        let a = ExactPoly::from_i64(&[-1, 1]);
        let b = ExactPoly::from_i64(&[1, 1]);
        assert_eq!(a.mul(&b), ExactPoly::from_i64(&[-1, 0, 1]));
        let (q, r) = ExactPoly::from_i64(&[-1, 0, 1]).divrem(&a).unwrap();
        assert_eq!((q, r), (b.clone(), ExactPoly::zero()));
        let (q, r) = ExactPoly::from_i64(&[1, 0, 1]).divrem(&ExactPoly::from_i64(&[0, 2])).unwrap();
        assert_eq!(q, ExactPoly::new(vec![ratio(0, 1), ratio(1, 2)]));
        assert_eq!(r, ExactPoly::from_i64(&[1]));
        assert_eq!(a.sub(&a), ExactPoly::zero());
        assert_eq!(ExactPoly::from_i64(&[1, 2, 3]).derivative(), ExactPoly::from_i64(&[2, 6]));
    }

    #[test]
    fn gcd_and_eval() {
        let p = ExactPoly::from_i64(&[-1, 0, 1]);
        let q = ExactPoly::from_i64(&[1, 2, 1]);
        assert_eq!(p.gcd(&q), ExactPoly::from_i64(&[1, 1]));
        assert_eq!(p.eval(&ratio(3, 2)), ratio(5, 4));
    }

    #[test]
    fn display_and_json() {
        let p = ExactPoly::new(vec![ratio(1, 1), ratio(-3, 1), ratio(0, 1), ratio(2, 3)]);
        assert_eq!(p.to_string(), "(2/3)x^3 - 3x + 1");
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"["1/1","-3/1","0/1","2/3"]"#);
        assert_eq!(serde_json::from_str::<ExactPoly>(&s).unwrap(), p);
    }

    #[test]
    fn primitive_integer_part() {
        let p = ExactPoly::new(vec![ratio(-2, 3), ratio(4, 3)]);
        let (z, q) = p.primitive_integer().unwrap();
        assert_eq!(z.coeffs(), &[BigInt::from(-1), BigInt::from(2)]);
        assert_eq!(q, ratio(2, 3));
    }
}
