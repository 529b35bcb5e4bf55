use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::ExactPoly;

/// Polynomial with integer coefficients, ascending, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ZPoly {
    c: Vec<BigInt>,
}

impl ZPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        ZPoly { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.c.last()
    }

    /// Content with the sign of the leading coefficient, and the primitive part
    /// (positive leading coefficient). The zero polynomial has content 0.
    pub fn content_primitive(&self) -> (BigInt, ZPoly) {
        let Some(lc) = self.leading() else {
            return (BigInt::zero(), ZPoly::default());
        };
        let mut g = self.c.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if lc.is_negative() {
            g = -g;
        }
        (g.clone(), ZPoly { c: self.c.iter().map(|x| x / &g).collect() })
    }

    pub fn primitive(&self) -> ZPoly {
        self.content_primitive().1
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::default();
        }
        let mut out = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
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

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.c.iter().map(|a| a * k).collect())
    }

    /// Quotient if `d` divides `self` over the integers.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        if self.is_zero() {
            return Some(Self::default());
        }
        let n = self.degree()?;
        if n < dd {
            return None;
        }
        let lc = &d.c[dd];
        let mut r = self.c.clone();
        let mut q = vec![BigInt::zero(); n - dd + 1];
        for i in (0..q.len()).rev() {
            let top = &r[i + dd];
            if top.is_zero() {
                continue;
            }
            let (f, rem) = top.div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (j, dj) in d.c.iter().enumerate() {
                r[i + j] -= &f * dj;
            }
            q[i] = f;
        }
        r.iter().all(Zero::is_zero).then(|| Self::new(q))
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.c.iter().rev().fold(BigInt::zero(), |acc, a| acc * x + a)
    }

    pub fn max_abs(&self) -> BigInt {
        self.c.iter().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn to_exact(&self) -> ExactPoly {
        ExactPoly::from_bigint(&self.c)
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        let g = self.to_exact().gcd(&o.to_exact());
        if g.is_zero() {
            return Self::default();
        }
        g.primitive_integer().expect("nonzero").0
    }

    /// Yun's square-free decomposition of a primitive polynomial:
    /// returns (a_i, i) with self = prod a_i^i, each a_i square-free, primitive.
    pub fn square_free(&self) -> Vec<(ZPoly, u32)> {
        let f = self.to_exact();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.divrem(&a0).expect("nonzero").0;
        let c = df.divrem(&a0).expect("nonzero").0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let nb = b.divrem(&a).expect("nonzero").0;
            let nc = d.divrem(&a).expect("nonzero").0;
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.primitive_integer().expect("nonzero").0, i));
            }
            d = nc.sub(&nb.derivative());
            b = nb;
            i += 1;
        }
        out
    }

    pub fn is_monic_up_to_sign(&self) -> bool {
        self.leading().is_some_and(|x| x.abs().is_one())
    }
}
