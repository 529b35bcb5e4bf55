use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::ExactPoly;
use super::scalar::{format_scalar, parse_scalar, ExactScalar};
use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ExactScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension("matrix dimensions must be at least 1".into()));
        }
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        Ok(ExactMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Integer matrix from nested literals. Panics on ragged or empty input.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows =
            rows.iter().map(|r| r.as_ref().iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect();
        Self::from_rows(rows).expect("well-formed integer literal")
    }

    pub fn from_bigint(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        Self::new(rows, cols, data.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![ExactScalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ExactScalar::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactScalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExactScalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[ExactScalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<ExactScalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_integer(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("matrix sum of different shapes".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, k: &ExactScalar) -> Self {
        ExactMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn apply(&self, v: &[ExactScalar]) -> Result<Vec<ExactScalar>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("vector of length {} for {} columns", v.len(), self.cols)));
        }
        Ok((0..self.rows).map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum()).collect())
    }

    pub fn trace(&self) -> Result<ExactScalar> {
        self.require_square()?;
        Ok((0..self.rows).map(|i| self.get(i, i).clone()).sum())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Row echelon form by exact elimination; returns (sign-corrected pivot product, rank).
    fn eliminate(&self) -> (ExactScalar, usize) {
        let mut a = self.to_rows();
        let mut det = ExactScalar::one();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(p) = (rank..self.rows).find(|&r| !a[r][c].is_zero()) else {
                det = ExactScalar::zero();
                continue;
            };
            if p != rank {
                a.swap(p, rank);
                det = -det;
            }
            let pivot = a[rank][c].clone();
            det *= &pivot;
            for r in rank + 1..self.rows {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &pivot;
                for cc in c..self.cols {
                    let t = &f * &a[rank][cc];
                    a[r][cc] -= t;
                }
            }
            rank += 1;
        }
        if rank < self.rows {
            det = ExactScalar::zero();
        }
        (det, rank)
    }

    /// Exact determinant (`None` unless square) and rank.
    pub fn det_rank(&self) -> (Option<ExactScalar>, usize) {
        let (det, rank) = self.eliminate();
        (self.is_square().then_some(det), rank)
    }

    pub fn det(&self) -> Result<ExactScalar> {
        self.require_square()?;
        Ok(self.eliminate().0)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().1
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let mut a = self.to_rows();
        let mut inv = Self::identity(n).to_rows();
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a[r][c].is_zero())
                .ok_or_else(|| Error::InvalidArgument("singular matrix has no inverse".into()))?;
            a.swap(p, c);
            inv.swap(p, c);
            let piv = a[c][c].clone();
            for j in 0..n {
                a[c][j] /= &piv;
                inv[c][j] /= &piv;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for j in 0..n {
                    let t = &f * &a[c][j];
                    a[r][j] -= t;
                    let t = &f * &inv[c][j];
                    inv[r][j] -= t;
                }
            }
        }
        Self::from_rows(inv)
    }

    /// Characteristic polynomial det(xI - M).
    ///
    /// Denominators are cleared first so Berkowitz's division-free recurrence
    /// runs over the integers; if N = dM then chi_M(x) = chi_N(dx) / d^n.
    pub fn charpoly(&self) -> Result<ExactPoly> {
        self.require_square()?;
        let n = self.rows;
        let d = self.data.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = self.data.iter().map(|x| (x * &d).to_integer()).collect();
        let desc = berkowitz(n, &ints);
        // desc[j] is the coefficient of x^(n-j).
        let mut asc = vec![ExactScalar::zero(); n + 1];
        let mut dpow = BigInt::one();
        for (j, c) in desc.into_iter().enumerate() {
            asc[n - j] = BigRational::new(c, dpow.clone());
            dpow *= &d;
        }
        Ok(ExactPoly::new(asc))
    }

    /// Evaluates p(M) by Horner's rule.
    pub fn eval_poly(&self, p: &ExactPoly) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let mut acc = Self::zeros(n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self)?;
            for i in 0..n {
                acc.data[i * n + i] += c;
            }
        }
        Ok(acc)
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|r| self.row(r).iter().map(format_scalar).collect()).collect()
    }

    pub fn max_abs(&self) -> ExactScalar {
        self.data.iter().map(|x| x.abs()).max().unwrap_or_else(ExactScalar::zero)
    }
}

/// Berkowitz's algorithm over the integers. Returns the characteristic
/// polynomial in descending order, leading coefficient 1.
fn berkowitz(n: usize, a: &[BigInt]) -> Vec<BigInt> {
    let at = |r: usize, c: usize| &a[r * n + c];
    let mut vect = vec![BigInt::one(), -at(0, 0).clone()];
    for r in 1..n {
        // t = [1, -a_rr, -R C, -R A C, ..., -R A^(r-1) C] for the leading r x r block A.
        let mut t = Vec::with_capacity(r + 2);
        t.push(BigInt::one());
        t.push(-at(r, r).clone());
        let mut col: Vec<BigInt> = (0..r).map(|i| at(i, r).clone()).collect();
        for step in 0..r {
            let rc: BigInt = (0..r).map(|j| at(r, j) * &col[j]).sum();
            t.push(-rc);
            if step + 1 < r {
                col = (0..r).map(|i| (0..r).map(|j| at(i, j) * &col[j]).sum()).collect();
            }
        }
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, v) in vect.iter().enumerate().take(i + 1) {
                *slot += &t[i - j] * v;
            }
        }
        vect = next;
    }
    vect
}

impl Serialize for ExactMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ExactMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw: Vec<Vec<serde_json::Value>> = Vec::deserialize(d)?;
        let rows = raw
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|v| match v {
                        serde_json::Value::String(s) => parse_scalar(&s),
                        serde_json::Value::Number(n) => n
                            .as_i64()
                            .map(super::scalar::int)
                            .ok_or_else(|| Error::Parse(format!("non-integer number {n}"))),
                        other => Err(Error::Parse(format!("bad matrix entry {other}"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        ExactMatrix::from_rows(rows).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{int, ratio};

    #[test]
    fn charpoly_small_cases() {
        let m = ExactMatrix::from_i64(&[[1, 1], [1, 2]]);
        assert_eq!(m.charpoly().unwrap(), ExactPoly::from_i64(&[1, -3, 1]));
        let id = ExactMatrix::identity(3);
        assert_eq!(id.charpoly().unwrap(), ExactPoly::from_i64(&[-1, 3, -3, 1]));
        assert_eq!(ExactMatrix::zeros(4, 4).charpoly().unwrap(), ExactPoly::from_i64(&[0, 0, 0, 0, 1]));
        assert!(ExactMatrix::zeros(2, 3).charpoly().is_err());
    }

    #[test]
    fn charpoly_rational_entries() {
        // [[1/2, 1], [0, 1/3]] has chi = (x - 1/2)(x - 1/3).
        let m = ExactMatrix::new(2, 2, vec![ratio(1, 2), int(1), int(0), ratio(1, 3)]).unwrap();
        let p = m.charpoly().unwrap();
        assert_eq!(p.coeffs(), &[ratio(1, 6), ratio(-5, 6), int(1)]);
    }

    #[test]
    fn det_rank_examples() {
        let y = ExactMatrix::from_i64(&[[12, 8, 4], [8, 8, 4], [4, 4, 4]]);
        assert_eq!(y.det_rank(), (Some(int(64)), 3));
        let p = ExactMatrix::from_i64(&[[1, 2], [2, 4]]);
        assert_eq!(p.det_rank(), (Some(int(0)), 1));
        assert_eq!(ExactMatrix::identity(5).det_rank(), (Some(int(1)), 5));
        assert_eq!(ExactMatrix::from_i64(&[[1, 2, 3], [2, 4, 6]]).det_rank(), (None, 1));
    }

    #[test]
    fn inverse_round_trip() {
        let m = ExactMatrix::from_i64(&[[2, 1, 0], [1, 3, 1], [0, 1, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), ExactMatrix::identity(3));
        assert!(ExactMatrix::from_i64(&[[1, 2], [2, 4]]).inverse().is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = ExactMatrix::new(1, 2, vec![ratio(-2, 3), int(5)]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"[["-2/3","5/1"]]"#);
        let back: ExactMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        let lenient: ExactMatrix = serde_json::from_str("[[0,1],[1,0]]").unwrap();
        assert_eq!(lenient, ExactMatrix::from_i64(&[[0, 1], [1, 0]]));
    }
}
