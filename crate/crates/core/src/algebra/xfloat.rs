//! Extended-exponent floating point.
//!
//! An `f64` mantissa paired with an `i64` binary exponent. Stretch factors of
//! long Penner words routinely exceed the `f64` range while only ~16 significant
//! digits are needed, so the root finder runs on these instead of plain `f64`.

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

/// Exact decomposition of a finite `f64` as `mant * 2^exp`.
pub(crate) fn decompose(x: f64) -> (i64, i64) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let exp_bits = ((bits >> 52) & 0x7ff) as i64;
    let frac = (bits & 0x000f_ffff_ffff_ffff) as i64;
    let (mant, exp) = if exp_bits == 0 { (frac, -1074) } else { (frac | (1 << 52), exp_bits - 1075) };
    let tz = mant.trailing_zeros() as i64;
    (sign * (mant >> tz), exp + tz)
}

/// Splits a finite nonzero `f64` into `m * 2^e` with `0.5 <= |m| < 1`.
fn frexp(x: f64) -> (f64, i64) {
    if x == 0.0 || !x.is_finite() {
        return (x, 0);
    }
    let (mant, exp) = decompose(x);
    let bits = 64 - mant.unsigned_abs().leading_zeros() as i64;
    // mant has `bits` significant bits, so |mant| / 2^bits lies in [0.5, 1).
    let m = mant as f64 / 2f64.powi(bits as i32);
    (m, exp + bits)
}

fn ldexp(m: f64, e: i64) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    if e > 2100 {
        return m.signum() * f64::INFINITY;
    }
    if e < -2200 {
        return 0.0 * m.signum();
    }
    let mut x = m;
    let mut e = e;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

#[derive(Clone, Copy, PartialEq)]
pub struct XFloat {
    m: f64,
    e: i64,
}

impl XFloat {
    pub const ZERO: XFloat = XFloat { m: 0.0, e: 0 };
    pub const ONE: XFloat = XFloat { m: 0.5, e: 1 };

    pub fn new(x: f64) -> Self {
        assert!(x.is_finite(), "XFloat from non-finite value {x}");
        let (m, e) = frexp(x);
        XFloat { m, e }
    }

    fn from_parts(m: f64, e: i64) -> Self {
        if m == 0.0 {
            return Self::ZERO;
        }
        let (mm, ee) = frexp(m);
        XFloat { m: mm, e: e + ee }
    }

    pub fn is_zero(&self) -> bool {
        self.m == 0.0
    }

    pub fn to_f64(&self) -> f64 {
        ldexp(self.m, self.e)
    }

    pub fn abs(&self) -> Self {
        XFloat { m: self.m.abs(), e: self.e }
    }

    pub fn signum(&self) -> f64 {
        if self.m == 0.0 {
            0.0
        } else {
            self.m.signum()
        }
    }

    /// log2 |x|; `-inf` for zero.
    pub fn log2(&self) -> f64 {
        if self.m == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.m.abs().log2() + self.e as f64
        }
    }

    pub fn exp2(l: f64) -> Self {
        let e = l.floor();
        Self::from_parts(2f64.powf(l - e), e as i64)
    }

    pub fn sqrt(&self) -> Self {
        assert!(self.m >= 0.0, "sqrt of negative XFloat");
        if self.m == 0.0 {
            return Self::ZERO;
        }
        if self.e % 2 == 0 {
            Self::from_parts(self.m.sqrt(), self.e / 2)
        } else {
            Self::from_parts((2.0 * self.m).sqrt(), (self.e - 1) / 2)
        }
    }

    pub fn recip(&self) -> Self {
        Self::from_parts(1.0 / self.m, -self.e)
    }

    pub fn mul_f64(&self, k: f64) -> Self {
        Self::from_parts(self.m * k, self.e)
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        let bits = n.bits() as i64;
        if bits <= 1000 {
            return Self::new(n.to_f64().unwrap());
        }
        let shift = bits - 64;
        let top: BigInt = n.abs() >> (shift as usize);
        let v = top.to_f64().unwrap();
        let v = if n.sign() == Sign::Minus { -v } else { v };
        Self::from_parts(v, shift)
    }

    pub fn from_rational(q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::ZERO;
        }
        let nb = q.numer().bits() as i64;
        let db = q.denom().bits() as i64;
        // Scale so the integer quotient carries about 66 bits.
        let s = 66 - nb + db;
        let quo =
            if s >= 0 { (q.numer() << (s as usize)) / q.denom() } else { q.numer() / (q.denom() << ((-s) as usize)) };
        let x = Self::from_bigint(&quo);
        XFloat { m: x.m, e: x.e - s }
    }

    /// Exact value as a rational.
    pub fn to_rational(&self) -> BigRational {
        let (mant, exp) = decompose(self.m);
        let exp = exp + self.e;
        let mant = BigInt::from(mant);
        if exp >= 0 {
            BigRational::from_integer(mant << (exp as usize))
        } else {
            BigRational::new(mant, BigInt::from(1) << ((-exp) as usize))
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl Default for XFloat {
    fn default() -> Self {
        Self::ZERO
    }
}

impl From<f64> for XFloat {
    fn from(x: f64) -> Self {
        XFloat::new(x)
    }
}

impl PartialOrd for XFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let (sa, sb) = (self.signum(), other.signum());
        if sa != sb {
            return sa.partial_cmp(&sb);
        }
        if sa == 0.0 {
            return Some(Ordering::Equal);
        }
        let mag = if self.e != other.e { self.e.cmp(&other.e) } else { self.m.abs().partial_cmp(&other.m.abs())? };
        Some(if sa > 0.0 { mag } else { mag.reverse() })
    }
}

impl std::ops::Mul for XFloat {
    type Output = XFloat;
    fn mul(self, o: XFloat) -> XFloat {
        XFloat::from_parts(self.m * o.m, self.e + o.e)
    }
}

impl std::ops::Div for XFloat {
    type Output = XFloat;
    fn div(self, o: XFloat) -> XFloat {
        assert!(!o.is_zero(), "XFloat division by zero");
        XFloat::from_parts(self.m / o.m, self.e - o.e)
    }
}

impl std::ops::Add for XFloat {
    type Output = XFloat;
    fn add(self, o: XFloat) -> XFloat {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (big, small) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = big.e - small.e;
        if d > 1100 {
            return big;
        }
        XFloat::from_parts(big.m + ldexp(small.m, -d), big.e)
    }
}

impl std::ops::Neg for XFloat {
    type Output = XFloat;
    fn neg(self) -> XFloat {
        XFloat { m: -self.m, e: self.e }
    }
}

impl std::ops::Sub for XFloat {
    type Output = XFloat;
    fn sub(self, o: XFloat) -> XFloat {
        self + (-o)
    }
}

impl fmt::Debug for XFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for XFloat {
    /// Scientific notation that stays valid outside the `f64` range.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 0.0 {
            return write!(f, "0");
        }
        let v = self.to_f64();
        if v.is_finite() && v != 0.0 && v.abs() > 1e-300 && v.abs() < 1e300 {
            return write!(f, "{v:e}");
        }
        let l10 = self.log2() * std::f64::consts::LOG10_2;
        let mut exp10 = l10.floor();
        let mut mant = 10f64.powf(l10 - exp10);
        if mant >= 9.999_999_999_999_99 {
            mant /= 10.0;
            exp10 += 1.0;
        }
        let sign = if self.m < 0.0 { "-" } else { "" };
        write!(f, "{sign}{mant:.15}e{}", exp10 as i64)
    }
}

/// Complex number with a shared extended exponent.
#[derive(Clone, Copy, PartialEq)]
pub struct XComplex {
    re: f64,
    im: f64,
    e: i64,
}

impl XComplex {
    pub const ZERO: XComplex = XComplex { re: 0.0, im: 0.0, e: 0 };

    fn norm(re: f64, im: f64, e: i64) -> Self {
        let big = re.abs().max(im.abs());
        if big == 0.0 {
            return Self::ZERO;
        }
        let (_, be) = frexp(big);
        XComplex { re: ldexp(re, -be), im: ldexp(im, -be), e: e + be }
    }

    pub fn new(re: XFloat, im: XFloat) -> Self {
        let e = match (re.is_zero(), im.is_zero()) {
            (true, true) => return Self::ZERO,
            (false, true) => re.e,
            (true, false) => im.e,
            (false, false) => re.e.max(im.e),
        };
        let r = if re.is_zero() { 0.0 } else { ldexp(re.m, re.e - e) };
        let i = if im.is_zero() { 0.0 } else { ldexp(im.m, im.e - e) };
        Self::norm(r, i, e)
    }

    pub fn from_c64(z: Complex64) -> Self {
        Self::norm(z.re, z.im, 0)
    }

    pub fn real(x: XFloat) -> Self {
        Self::new(x, XFloat::ZERO)
    }

    pub fn from_polar(r: XFloat, angle: f64) -> Self {
        Self::norm(r.m * angle.cos(), r.m * angle.sin(), r.e)
    }

    pub fn re(&self) -> XFloat {
        XFloat::from_parts(self.re, self.e)
    }

    pub fn im(&self) -> XFloat {
        XFloat::from_parts(self.im, self.e)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(ldexp(self.re, self.e), ldexp(self.im, self.e))
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    pub fn abs(&self) -> XFloat {
        XFloat::from_parts(self.re.hypot(self.im), self.e)
    }

    pub fn conj(&self) -> Self {
        XComplex { re: self.re, im: -self.im, e: self.e }
    }

    pub fn scale(&self, k: XFloat) -> Self {
        Self::norm(self.re * k.m, self.im * k.m, self.e + k.e)
    }

    /// Exact dyadic form `(x + i y) / 2^s` with integer x, y and s >= 0.
    pub fn to_dyadic(&self) -> (BigInt, BigInt, u64) {
        let (mr, er) = decompose(self.re);
        let (mi, ei) = decompose(self.im);
        let er = er + self.e;
        let ei = ei + self.e;
        let low = match (mr == 0, mi == 0) {
            (true, true) => return (BigInt::zero(), BigInt::zero(), 0),
            (false, true) => er,
            (true, false) => ei,
            (false, false) => er.min(ei),
        };
        let shift = (-low).max(0);
        let lift = |m: i64, e: i64| -> BigInt {
            if m == 0 {
                BigInt::zero()
            } else {
                BigInt::from(m) << ((e + shift) as usize)
            }
        };
        (lift(mr, er), lift(mi, ei), shift as u64)
    }
}

impl std::ops::Add for XComplex {
    type Output = XComplex;
    fn add(self, o: XComplex) -> XComplex {
        if self.is_zero() {
            return o;
        }
        if o.is_zero() {
            return self;
        }
        let (big, small) = if self.e >= o.e { (self, o) } else { (o, self) };
        let d = big.e - small.e;
        if d > 1100 {
            return big;
        }
        XComplex::norm(big.re + ldexp(small.re, -d), big.im + ldexp(small.im, -d), big.e)
    }
}

impl std::ops::Neg for XComplex {
    type Output = XComplex;
    fn neg(self) -> XComplex {
        XComplex { re: -self.re, im: -self.im, e: self.e }
    }
}

impl std::ops::Sub for XComplex {
    type Output = XComplex;
    fn sub(self, o: XComplex) -> XComplex {
        self + (-o)
    }
}

impl std::ops::Mul for XComplex {
    type Output = XComplex;
    fn mul(self, o: XComplex) -> XComplex {
        XComplex::norm(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re, self.e + o.e)
    }
}

impl std::ops::Div for XComplex {
    type Output = XComplex;
    fn div(self, o: XComplex) -> XComplex {
        assert!(!o.is_zero(), "XComplex division by zero");
        let d = o.re * o.re + o.im * o.im;
        XComplex::norm((self.re * o.re + self.im * o.im) / d, (self.im * o.re - self.re * o.im) / d, self.e - o.e)
    }
}

impl fmt::Debug for XComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {:+}i)", self.re(), self.im().to_f64())
    }
}
