//! Curve systems as intersection data: built-in seed pairs, the multitwist
//! product, cross-ratio groups and rich-collection checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

use crate::algebra::{ExactMatrix, ExactScalar};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Surface {
    pub genus: u32,
    pub boundary: u32,
}

impl Surface {
    pub const S06: Surface = Surface { genus: 0, boundary: 6 };
    pub const S13: Surface = Surface { genus: 1, boundary: 3 };
    pub const S20: Surface = Surface { genus: 2, boundary: 0 };

    pub fn new(genus: u32, boundary: u32) -> Self {
        Surface { genus, boundary }
    }

    /// 3g - 3 + n.
    pub fn complexity(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.boundary as i64
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{}_{}", self.genus, self.boundary)
    }
}

impl FromStr for Surface {
    type Err = Error;

    /// Accepts `S_g_n`, and `S_g` for a closed surface.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("surface name {s:?}, expected S_g_n"));
        let rest = s.strip_prefix("S_").or_else(|| s.strip_prefix('S')).ok_or_else(bad)?;
        let mut parts = rest.split('_');
        let g = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let n = match parts.next() {
            Some(p) => p.parse().map_err(|_| bad())?,
            None => 0,
        };
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(Surface::new(g, n))
    }
}

impl Serialize for Surface {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Surface {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A pair of multicurves A, B given by i(A, B).
#[derive(Clone, Debug, PartialEq)]
pub struct SeedPair {
    pub surface: Surface,
    pub iab: ExactMatrix,
    pub names_a: Vec<String>,
    pub names_b: Vec<String>,
}

/// The three seed pairs on S_0_6, S_1_3 and S_2_0.
pub fn builtin_seed(surface: Surface) -> Result<SeedPair> {
    let rows: [[i64; 3]; 3] = match (surface.genus, surface.boundary) {
        (0, 6) => [[2, 2, 2], [0, 2, 2], [0, 0, 2]],
        (1, 3) => [[1, 1, 1], [0, 2, 2], [0, 0, 2]],
        (2, 0) => [[1, 1, 0], [0, 2, 0], [0, 1, 1]],
        _ => return Err(Error::UnsupportedSurface(surface.to_string())),
    };
    Ok(SeedPair {
        surface,
        iab: ExactMatrix::from_i64(&rows),
        names_a: (1..=3).map(|i| format!("a{i}")).collect(),
        names_b: (1..=3).map(|i| format!("b{i}")).collect(),
    })
}

/// Twist vector that makes the seed's product matrix rich.
pub fn default_twist(surface: Surface) -> Result<Vec<i64>> {
    match (surface.genus, surface.boundary) {
        (0, 6) | (1, 3) => Ok(vec![1, 1, 1]),
        (2, 0) => Ok(vec![1, 1, 2]),
        _ => Err(Error::UnsupportedSurface(surface.to_string())),
    }
}

/// i(A, T_B^s(A)) = i(A,B) D_|s| i(B,A).
pub fn multitwist_product(iab: &ExactMatrix, s: &[i64]) -> Result<ExactMatrix> {
    if s.len() != iab.cols() {
        return Err(Error::InvalidTwist(format!("{} entries for {} curves in B", s.len(), iab.cols())));
    }
    if s.contains(&0) {
        return Err(Error::InvalidTwist("zero twist exponent".into()));
    }
    if !(s.iter().all(|&x| x > 0) || s.iter().all(|&x| x < 0)) {
        return Err(Error::InvalidTwist("exponents must share one sign".into()));
    }
    let mut d = ExactMatrix::zeros(s.len(), s.len());
    for (i, &x) in s.iter().enumerate() {
        d.set(i, i, ExactScalar::from_integer(BigInt::from(x.abs())));
    }
    iab.mul(&d)?.mul(&iab.transpose())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Filling {
    /// Asserted from the known topology of the construction, not computed.
    Asserted,
    Unknown,
}

/// Labeled curves in two multicurves with their intersection matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveSystem {
    pub surface: Option<Surface>,
    pub labels: Vec<String>,
    pub partition: [Vec<usize>; 2],
    pub omega: ExactMatrix,
    pub filling: Filling,
}

impl CurveSystem {
    pub fn new(
        surface: Option<Surface>,
        labels: Vec<String>,
        partition: [Vec<usize>; 2],
        omega: ExactMatrix,
        filling: Filling,
    ) -> Result<Self> {
        let n = omega.rows();
        if !omega.is_square() {
            return Err(Error::NotSquare { rows: omega.rows(), cols: omega.cols() });
        }
        if labels.len() != n {
            return Err(Error::Dimension(format!("{} labels for {n} curves", labels.len())));
        }
        let mut seen = vec![false; n];
        for &i in partition.iter().flatten() {
            if i >= n || seen[i] {
                return Err(Error::InvalidArgument(format!("partition is not a partition of 0..{n}")));
            }
            seen[i] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidArgument("partition misses a curve".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let v = omega.get(i, j);
                if !v.is_integer() || v.is_negative() {
                    return Err(Error::InvalidArgument(format!("omega[{i}][{j}] must be a nonnegative integer")));
                }
                if v != omega.get(j, i) {
                    return Err(Error::InvalidArgument("omega must be symmetric".into()));
                }
            }
            if !omega.get(i, i).is_zero() {
                return Err(Error::InvalidArgument(format!("omega[{i}][{i}] must be 0")));
            }
            if (0..n).all(|j| omega.get(i, j).is_zero()) {
                return Err(Error::InvalidArgument(format!("curve {} meets no other curve", labels[i])));
            }
        }
        for block in &partition {
            for &i in block {
                for &j in block {
                    if !omega.get(i, j).is_zero() {
                        return Err(Error::InvalidArgument(format!(
                            "curves {} and {} lie in one multicurve but intersect",
                            labels[i], labels[j]
                        )));
                    }
                }
            }
        }
        Ok(CurveSystem { surface, labels, partition, omega, filling })
    }

    pub fn n(&self) -> usize {
        self.omega.rows()
    }

    /// The block i(C1, C2) restricted to the first three curves of each multicurve.
    pub fn cross_block(&self) -> Option<ExactMatrix> {
        let [a, b] = &self.partition;
        if a.len() < 3 || b.len() < 3 {
            return None;
        }
        let data = a[..3]
            .iter()
            .flat_map(|&i| b[..3].iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.omega.get(i, j).clone())
            .collect();
        ExactMatrix::new(3, 3, data).ok()
    }
}

#[derive(Serialize, Deserialize)]
struct CurveSystemJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    surface: Option<Surface>,
    labels: Vec<String>,
    partition: [Vec<usize>; 2],
    omega: Vec<Vec<serde_json::Value>>,
    #[serde(default = "unknown_filling")]
    filling: Filling,
}

fn unknown_filling() -> Filling {
    Filling::Unknown
}

impl Serialize for CurveSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let omega = self
            .omega
            .to_rows()
            .iter()
            .map(|row| row.iter().map(|v| serde_json::Value::String(v.numer().to_string())).collect())
            .collect();
        CurveSystemJson {
            surface: self.surface,
            labels: self.labels.clone(),
            partition: self.partition.clone(),
            omega,
            filling: self.filling,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CurveSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = CurveSystemJson::deserialize(d)?;
        let omega: ExactMatrix = serde_json::from_value(serde_json::Value::Array(
            raw.omega.into_iter().map(serde_json::Value::Array).collect(),
        ))
        .map_err(D::Error::custom)?;
        CurveSystem::new(raw.surface, raw.labels, raw.partition, omega, raw.filling).map_err(D::Error::custom)
    }
}

/// Six-curve system with Omega = [[0, Y], [Y^T, 0]].
pub fn assemble_rich_system(y: &ExactMatrix) -> Result<CurveSystem> {
    assemble_with_surface(y, None)
}

pub fn assemble_with_surface(y: &ExactMatrix, surface: Option<Surface>) -> Result<CurveSystem> {
    if (y.rows(), y.cols()) != (3, 3) {
        return Err(Error::Dimension(format!("Y must be 3x3, got {}x{}", y.rows(), y.cols())));
    }
    for r in 0..3 {
        for c in 0..3 {
            if !y.get(r, c).is_positive() {
                return Err(Error::NonPositiveEntry { row: r, col: c });
            }
        }
    }
    let mut omega = ExactMatrix::zeros(6, 6);
    for r in 0..3 {
        for c in 0..3 {
            omega.set(r, 3 + c, y.get(r, c).clone());
            omega.set(3 + c, r, y.get(r, c).clone());
        }
    }
    let labels = ["a1", "a2", "a3", "t1", "t2", "t3"].map(String::from).to_vec();
    CurveSystem::new(surface, labels, [vec![0, 1, 2], vec![3, 4, 5]], omega, Filling::Asserted)
}

/// The seed's rich system for its default twist vector.
pub fn seed_system(surface: Surface) -> Result<CurveSystem> {
    seed_system_with_twist(surface, &default_twist(surface)?)
}

pub fn seed_system_with_twist(surface: Surface, s: &[i64]) -> Result<CurveSystem> {
    let seed = builtin_seed(surface)?;
    let y = multitwist_product(&seed.iab, s)?;
    assemble_with_surface(&y, Some(surface))
}

/// m11 m22 / (m12 m21).
pub fn cross_ratio(m: &ExactMatrix) -> Result<ExactScalar> {
    if (m.rows(), m.cols()) != (2, 2) {
        return Err(Error::Dimension("cross-ratio needs a 2x2 matrix".into()));
    }
    for r in 0..2 {
        for c in 0..2 {
            if !m.get(r, c).is_positive() {
                return Err(Error::NonPositiveEntry { row: r, col: c });
            }
        }
    }
    Ok(m.get(0, 0) * m.get(1, 1) / (m.get(0, 1) * m.get(1, 0)))
}

/// A 2x2 submatrix given by two rows and two columns, each increasing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SubmatrixPos {
    pub rows: (usize, usize),
    pub cols: (usize, usize),
}

impl SubmatrixPos {
    pub fn extract(&self, m: &ExactMatrix) -> ExactMatrix {
        let (r0, r1) = self.rows;
        let (c0, c1) = self.cols;
        ExactMatrix::new(
            2,
            2,
            vec![m.get(r0, c0).clone(), m.get(r0, c1).clone(), m.get(r1, c0).clone(), m.get(r1, c1).clone()],
        )
        .expect("2x2")
    }
}

impl fmt::Display for SubmatrixPos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "r{}{}c{}{}", self.rows.0 + 1, self.rows.1 + 1, self.cols.0 + 1, self.cols.1 + 1)
    }
}

/// All 2x2 positions in lexicographic order.
pub fn submatrix_positions(rows: usize, cols: usize) -> Vec<SubmatrixPos> {
    let pairs = |n: usize| -> Vec<(usize, usize)> { (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect() };
    let cp = pairs(cols);
    pairs(rows).into_iter().flat_map(|r| cp.iter().map(move |&c| SubmatrixPos { rows: r, cols: c })).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CrgVerdict {
    Trivial,
    Cyclic,
    Dense,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CrgCertificate {
    pub positions: Vec<SubmatrixPos>,
    #[serde(serialize_with = "ser_scalars")]
    pub cross_ratios: Vec<ExactScalar>,
    /// Pairwise coprime integers > 1; every cross-ratio is a product of their powers.
    #[serde(serialize_with = "ser_ints")]
    pub base: Vec<BigInt>,
    pub exponent_vectors: Vec<Vec<i64>>,
    pub verdict: CrgVerdict,
    pub witness_pair: Option<(SubmatrixPos, SubmatrixPos)>,
}

fn ser_scalars<S: Serializer>(v: &[ExactScalar], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(crate::algebra::scalar::format_scalar).collect::<Vec<_>>().serialize(s)
}

fn ser_ints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
}

/// Refines a list of positive integers into a pairwise coprime base.
pub(crate) fn coprime_base(values: impl IntoIterator<Item = BigInt>) -> Vec<BigInt> {
    let mut base: Vec<BigInt> = values.into_iter().filter(|v| v > &BigInt::one()).collect();
    base.sort();
    base.dedup();
    'outer: loop {
        for i in 0..base.len() {
            for j in i + 1..base.len() {
                let g = base[i].gcd(&base[j]);
                if !g.is_one() {
                    let a = &base[i] / &g;
                    let b = &base[j] / &g;
                    base.swap_remove(j);
                    base.swap_remove(i);
                    base.extend([a, b, g].into_iter().filter(|v| v > &BigInt::one()));
                    base.sort();
                    base.dedup();
                    continue 'outer;
                }
            }
        }
        return base;
    }
}

fn exponents(mut n: BigInt, base: &[BigInt]) -> Vec<i64> {
    let out = base
        .iter()
        .map(|b| {
            let mut e = 0;
            loop {
                let (q, r) = n.div_rem(b);
                if !r.is_zero() {
                    break;
                }
                n = q;
                e += 1;
            }
            e
        })
        .collect();
    assert!(n.is_one(), "value does not factor over its own coprime base");
    out
}

pub(crate) fn rational_exponents(q: &BigRational, base: &[BigInt]) -> Vec<i64> {
    let num = exponents(q.numer().clone(), base);
    let den = exponents(q.denom().clone(), base);
    num.iter().zip(&den).map(|(a, b)| a - b).collect()
}

/// Integer vectors are proportional over Q iff every 2x2 minor vanishes.
pub fn proportional(a: &[i64], b: &[i64]) -> bool {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if a[i] as i128 * b[j] as i128 != a[j] as i128 * b[i] as i128 {
                return false;
            }
        }
    }
    true
}

fn is_trivial(v: &[i64]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Cross-ratio group of a positive matrix, decided by exponent vectors.
pub fn crg_density(m: &ExactMatrix) -> Result<CrgCertificate> {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !m.get(r, c).is_positive() {
                return Err(Error::NonPositiveEntry { row: r, col: c });
            }
        }
    }
    let positions = submatrix_positions(m.rows(), m.cols());
    let cross_ratios: Vec<ExactScalar> = positions.iter().map(|p| cross_ratio(&p.extract(m))).collect::<Result<_>>()?;
    let base = coprime_base(cross_ratios.iter().flat_map(|q| [q.numer().clone(), q.denom().clone()]));
    let exponent_vectors: Vec<Vec<i64>> = cross_ratios.iter().map(|q| rational_exponents(q, &base)).collect();

    // Witness: the nontrivial ratio closest to 1 in log scale, then the next
    // closest one independent of it.
    let mut order: Vec<usize> = (0..positions.len()).filter(|&i| !is_trivial(&exponent_vectors[i])).collect();
    order.sort_by(|&a, &b| {
        let la = log_abs(&cross_ratios[a]);
        let lb = log_abs(&cross_ratios[b]);
        la.partial_cmp(&lb).unwrap_or(std::cmp::Ordering::Equal).then(a.cmp(&b))
    });
    let (verdict, witness_pair) = match order.first() {
        None => (CrgVerdict::Trivial, None),
        Some(&first) => {
            let second = order.iter().copied().find(|&j| !proportional(&exponent_vectors[first], &exponent_vectors[j]));
            match second {
                Some(j) => (CrgVerdict::Dense, Some((positions[first], positions[j]))),
                None => (CrgVerdict::Cyclic, None),
            }
        }
    };
    Ok(CrgCertificate { positions, cross_ratios, base, exponent_vectors, verdict, witness_pair })
}

fn log_abs(q: &BigRational) -> f64 {
    let l = |x: &BigInt| x.to_f64().map_or(x.bits() as f64 * std::f64::consts::LN_2, f64::ln);
    (l(q.numer()) - l(q.denom())).abs()
}

/// Two 2x2 submatrices of a rank-3, dense-CRG 3x3 matrix, not in the same two
/// rows nor the same two columns, with multiplicatively independent cross-ratios.
pub fn select_independent_pair(y: &ExactMatrix) -> Result<(SubmatrixPos, SubmatrixPos)> {
    if (y.rows(), y.cols()) != (3, 3) {
        return Err(Error::Dimension("Y must be 3x3".into()));
    }
    if y.rank() != 3 {
        return Err(Error::Hypothesis("Y must have rank 3".into()));
    }
    let cert = crg_density(y)?;
    if cert.verdict != CrgVerdict::Dense {
        return Err(Error::Hypothesis("cross-ratio group is not dense".into()));
    }
    let pos = &cert.positions;
    let ev = &cert.exponent_vectors;
    let first = (0..pos.len()).find(|&i| !is_trivial(&ev[i])).expect("dense implies nontrivial");
    let indep = |j: usize| !proportional(&ev[first], &ev[j]);
    let second = (0..pos.len()).find(|&j| indep(j)).expect("dense implies an independent ratio");
    let (p1, p2) = (pos[first], pos[second]);
    if p1.rows != p2.rows && p1.cols != p2.cols {
        return Ok((p1, p2));
    }
    // Exchange: if the pair shares its columns, move to another submatrix in the
    // rows of the second one (and symmetrically). The cross-ratio identity on the
    // 2x3 block guarantees one of the two alternatives stays independent.
    let alternative = (0..pos.len()).find(|&j| {
        let q = pos[j];
        let in_block = if p1.cols == p2.cols { q.rows == p2.rows } else { q.cols == p2.cols };
        in_block && q != p2 && indep(j)
    });
    match alternative {
        Some(j) => Ok((p1, pos[j])),
        None => Err(Error::Invariant("exchange step found no independent submatrix".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RichnessReport {
    pub curves: usize,
    pub enough_curves: bool,
    pub bipartite: bool,
    pub positive: bool,
    pub rank: Option<usize>,
    pub rank_ok: bool,
    pub crg: Option<CrgVerdict>,
    pub dense: bool,
    pub filling: Filling,
}

impl RichnessReport {
    /// Every computable condition holds (filling is never computed).
    pub fn passes(&self) -> bool {
        self.enough_curves && self.bipartite && self.positive && self.rank_ok && self.dense
    }
}

pub fn richness_check(c: &CurveSystem) -> RichnessReport {
    let n = c.n();
    let bipartite =
        c.partition.iter().all(|block| block.iter().all(|&i| block.iter().all(|&j| c.omega.get(i, j).is_zero())));
    let y = c.cross_block();
    let positive = y.as_ref().is_some_and(|y| y.entries().iter().all(Signed::is_positive));
    let rank = y.as_ref().map(ExactMatrix::rank);
    let crg = if positive { y.as_ref().and_then(|y| crg_density(y).ok()).map(|c| c.verdict) } else { None };
    RichnessReport {
        curves: n,
        enough_curves: n >= 6 && y.is_some(),
        bipartite,
        positive,
        rank,
        rank_ok: rank == Some(3),
        crg,
        dense: crg == Some(CrgVerdict::Dense),
        filling: c.filling,
    }
}
