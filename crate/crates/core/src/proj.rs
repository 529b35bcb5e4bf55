//! Projections between the hyperplanes Z_i, path operators f_gamma, and the
//! 2x2 generator calculus on the line frame X_1 of a bipartite block.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::VecDeque;
use std::fmt;

use crate::algebra::{ExactMatrix, ExactPoly, ExactScalar};
use crate::error::{Error, Result};

/// G(Omega): i ~ j iff omega_ij > 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistGraph {
    n: usize,
    adj: Vec<Vec<bool>>,
}

impl TwistGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && self.adj[i][j]
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&j| self.adj[i][j])
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| self.neighbors(i).filter(|&j| j > i).count()).sum()
    }

    /// BFS parent pointers from `root`; `None` for unreachable vertices.
    fn bfs_parents(&self, root: usize) -> Vec<Option<usize>> {
        let mut parent = vec![None; self.n];
        parent[root] = Some(root);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for w in self.neighbors(v) {
                if parent[w].is_none() {
                    parent[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.bfs_parents(0).iter().all(Option::is_some)
    }
}

pub fn build_graph(omega: &ExactMatrix) -> TwistGraph {
    let n = omega.rows();
    let adj = (0..n).map(|i| (0..n).map(|j| i != j && omega.get(i, j).is_positive()).collect()).collect();
    TwistGraph { n, adj }
}

/// A closed path i_1 ... i_K (back to i_1), 0-based, closing vertex not repeated.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ClosedPath {
    vertices: Vec<usize>,
}

impl ClosedPath {
    pub fn new(vertices: Vec<usize>, graph: &TwistGraph) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPath("a closed path needs at least one edge out and back".into()));
        }
        let k = vertices.len();
        for t in 0..k {
            let (a, b) = (vertices[t], vertices[(t + 1) % k]);
            if a >= graph.n() || b >= graph.n() {
                return Err(Error::InvalidPath(format!("vertex out of range 1..{}", graph.n())));
            }
            if !graph.adjacent(a, b) {
                return Err(Error::NoEdge(a + 1, b + 1));
            }
        }
        Ok(ClosedPath { vertices })
    }

    /// From 1-based vertices; a repeated closing vertex is dropped.
    pub fn from_one_based(vertices: &[usize], graph: &TwistGraph) -> Result<Self> {
        if vertices.contains(&0) {
            return Err(Error::InvalidPath("vertices are numbered from 1".into()));
        }
        let mut v: Vec<usize> = vertices.iter().map(|&x| x - 1).collect();
        if v.len() > 1 && v.first() == v.last() {
            v.pop();
        }
        Self::new(v, graph)
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn base(&self) -> usize {
        self.vertices[0]
    }

    /// Number of edges K.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Consecutive (from, to) pairs including the closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |t| (self.vertices[t], self.vertices[(t + 1) % k]))
    }

    pub fn visits_all(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for &v in &self.vertices {
            seen[v] = true;
        }
        seen.iter().all(|&s| s)
    }

    /// Inserts the spur (v, w, v) at position `pos`, where vertices[pos] = v.
    pub fn insert_spur(&self, pos: usize, w: usize, graph: &TwistGraph) -> Result<Self> {
        let v = *self.vertices.get(pos).ok_or_else(|| Error::InvalidPath("spur position out of range".into()))?;
        let mut out = self.vertices.clone();
        out.splice(pos + 1..pos + 1, [w, v]);
        Self::new(out, graph)
    }

    pub fn concat(&self, other: &ClosedPath, graph: &TwistGraph) -> Result<Self> {
        if self.base() != other.base() {
            return Err(Error::InvalidPath("paths have different base points".into()));
        }
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices);
        Self::new(v, graph)
    }

    pub fn to_one_based(&self) -> Vec<usize> {
        self.vertices.iter().chain(std::iter::once(&self.vertices[0])).map(|v| v + 1).collect()
    }
}

impl fmt::Display for ClosedPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.to_one_based().iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl Serialize for ClosedPath {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_json::json!({ "base": self.base() + 1, "vertices": self.to_one_based() }).serialize(s)
    }
}

/// Unvalidated path as read from JSON; validate with [`RawPath::resolve`].
#[derive(Clone, Debug, Deserialize)]
pub struct RawPath {
    #[serde(default)]
    pub base: Option<usize>,
    pub vertices: Vec<usize>,
}

impl RawPath {
    pub fn resolve(&self, graph: &TwistGraph) -> Result<ClosedPath> {
        let p = ClosedPath::from_one_based(&self.vertices, graph)?;
        if let Some(b) = self.base {
            if b != p.base() + 1 {
                return Err(Error::InvalidPath(format!("base {b} is not the first vertex")));
            }
        }
        Ok(p)
    }
}

fn require_edge(omega: &ExactMatrix, i: usize, j: usize) -> Result<()> {
    if i >= omega.rows() || j >= omega.rows() {
        return Err(Error::InvalidArgument("vertex out of range".into()));
    }
    if !omega.get(i, j).is_positive() {
        return Err(Error::NoEdge(i + 1, j + 1));
    }
    Ok(())
}

/// p_{i<-j}: projection onto Z_i = {x : r_i . x = 0} along e_j (0-based).
pub fn projection_matrix(omega: &ExactMatrix, i: usize, j: usize) -> Result<ExactMatrix> {
    require_edge(omega, i, j)?;
    let n = omega.rows();
    let mut p = ExactMatrix::identity(n);
    let w = omega.get(i, j).clone();
    for c in 0..n {
        let v = p.get(j, c) - omega.get(i, c) / &w;
        p.set(j, c, v);
    }
    Ok(p)
}

/// Replaces M by p_{i<-j} M in place: only row j changes.
fn project_rows(m: &mut [Vec<ExactScalar>], omega: &ExactMatrix, i: usize, j: usize) {
    let n = m.len();
    let w = omega.get(i, j);
    let cols = m[0].len();
    let mut dot = vec![ExactScalar::zero(); cols];
    for (r, row) in m.iter().enumerate().take(n) {
        let coef = omega.get(i, r);
        if coef.is_zero() {
            continue;
        }
        for c in 0..cols {
            if !row[c].is_zero() {
                dot[c] += coef * &row[c];
            }
        }
    }
    for c in 0..cols {
        if !dot[c].is_zero() {
            let t = &dot[c] / w;
            m[j][c] -= t;
        }
    }
}

/// F = p_{i_1<-i_K} ... p_{i_2<-i_1} on the full space.
pub fn path_operator(omega: &ExactMatrix, path: &ClosedPath) -> Result<ExactMatrix> {
    let n = omega.rows();
    let mut m = ExactMatrix::identity(n).to_rows();
    for (a, b) in path.edges() {
        require_edge(omega, b, a)?;
        project_rows(&mut m, omega, b, a);
    }
    ExactMatrix::from_rows(m)
}

/// chi(f_gamma) = chi(F) / x, of degree n - 1.
pub fn f_gamma_charpoly(omega: &ExactMatrix, path: &ClosedPath) -> Result<ExactPoly> {
    let f = path_operator(omega, path)?;
    let chi = f.charpoly()?;
    chi.exact_div(&ExactPoly::x())?.ok_or_else(|| Error::Invariant("chi(F) is not divisible by x".into()))
}

/// Inserts spanning-tree excursions at the base point until every vertex is visited.
pub fn complete_path(omega: &ExactMatrix, path: &ClosedPath) -> Result<ClosedPath> {
    let graph = build_graph(omega);
    let n = graph.n();
    if path.visits_all(n) {
        return Ok(path.clone());
    }
    let base = path.base();
    let parent = graph.bfs_parents(base);
    if parent.iter().any(Option::is_none) {
        return Err(Error::Disconnected);
    }
    let mut seen = vec![false; n];
    for &v in path.vertices() {
        seen[v] = true;
    }
    let mut out = path.vertices().to_vec();
    for v in 0..n {
        if seen[v] {
            continue;
        }
        // base = t_0, t_1, ..., t_m = v along the tree
        let mut chain = vec![v];
        while let Some(p) = parent[*chain.last().expect("nonempty")] {
            if p == *chain.last().expect("nonempty") {
                break;
            }
            chain.push(p);
        }
        chain.reverse();
        for &t in &chain {
            seen[t] = true;
        }
        // base, t_1, ..., v, ..., t_1 and back to base on closing
        out.extend_from_slice(&chain);
        out.extend(chain[1..chain.len() - 1].iter().rev());
    }
    let done = ClosedPath::new(out, &graph)?;
    let before = f_gamma_charpoly(omega, path)?;
    let after = f_gamma_charpoly(omega, &done)?;
    if before != after {
        return Err(Error::Invariant("spur completion changed chi(f_gamma)".into()));
    }
    Ok(done)
}

/// One generator s_{1 i}^{j j'} of the frame; indices 0-based, with i in {1,2}
/// and j != j' in {3,4,5}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub i: usize,
    pub j: usize,
    pub jp: usize,
}

impl Letter {
    /// From 1-based (i, j, j').
    pub fn new(i: usize, j: usize, jp: usize) -> Result<Self> {
        if !(i == 2 || i == 3) || !(4..=6).contains(&j) || !(4..=6).contains(&jp) || j == jp {
            return Err(Error::InvalidArgument(format!(
                "letter ({i},{j},{jp}) needs i in {{2,3}} and distinct j, j' in {{4,5,6}}"
            )));
        }
        Ok(Letter { i: i - 1, j: j - 1, jp: jp - 1 })
    }

    pub fn inverse(&self) -> Self {
        Letter { i: self.i, j: self.jp, jp: self.j }
    }

    /// Position in the canonical enumeration of the twelve letters.
    pub fn index(&self) -> usize {
        let pair = match (self.j, self.jp) {
            (3, 4) => 0,
            (3, 5) => 1,
            (4, 3) => 2,
            (4, 5) => 3,
            (5, 3) => 4,
            (5, 4) => 5,
            _ => unreachable!("validated letter"),
        };
        (self.i - 1) * 6 + pair
    }

    pub fn all() -> Vec<Letter> {
        let pairs = [(4, 5), (4, 6), (5, 4), (5, 6), (6, 4), (6, 5)];
        [2, 3].iter().flat_map(|&i| pairs.iter().map(move |&(j, jp)| Letter::new(i, j, jp).expect("valid"))).collect()
    }

    pub fn to_one_based(&self) -> [usize; 3] {
        [self.i + 1, self.j + 1, self.jp + 1]
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, jp] = self.to_one_based();
        write!(f, "s1{i}^{j}{jp}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GeneratorWord {
    pub letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        GeneratorWord { letters }
    }

    pub fn from_one_based(triples: &[[usize; 3]]) -> Result<Self> {
        Ok(GeneratorWord { letters: triples.iter().map(|t| Letter::new(t[0], t[1], t[2])).collect::<Result<_>>()? })
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        GeneratorWord { letters: self.letters.iter().rev().map(Letter::inverse).collect() }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        GeneratorWord { letters }
    }

    /// Cancels adjacent inverse pairs.
    pub fn reduced(&self) -> Self {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GeneratorWord { letters: out }
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(Letter::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

impl Serialize for GeneratorWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let letters: Vec<[usize; 3]> = self.letters.iter().map(Letter::to_one_based).collect();
        serde_json::json!({ "letters": letters }).serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneratorWord {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            letters: Vec<[usize; 3]>,
        }
        let raw = Raw::deserialize(d)?;
        GeneratorWord::from_one_based(&raw.letters).map_err(serde::de::Error::custom)
    }
}

/// Frame for a six-curve block Omega = [[0, Y], [Y^T, 0]] based at curve 1.
#[derive(Clone, Debug)]
pub struct BipartiteFrame {
    pub omega: ExactMatrix,
    /// b_1, b_2 as 6-vectors spanning X_1 = V cap Z_1.
    pub basis: [Vec<ExactScalar>; 2],
    generators: Vec<ExactMatrix>,
    cross_ratios: Vec<ExactScalar>,
}

impl BipartiteFrame {
    pub fn y(&self) -> ExactMatrix {
        let data =
            (0..3).flat_map(|r| (3..6).map(move |c| (r, c))).map(|(r, c)| self.omega.get(r, c).clone()).collect();
        ExactMatrix::new(3, 3, data).expect("3x3")
    }

    pub fn generator(&self, l: Letter) -> &ExactMatrix {
        &self.generators[l.index()]
    }

    /// c_{1i}^{jj'} = omega_1j omega_ij' / (omega_1j' omega_ij).
    pub fn cross_ratio(&self, l: Letter) -> &ExactScalar {
        &self.cross_ratios[l.index()]
    }

    pub fn letters(&self) -> Vec<Letter> {
        Letter::all()
    }

    /// Coordinates of w in X_1 with respect to (b_1, b_2).
    pub fn coords(&self, w: &[ExactScalar]) -> Result<[ExactScalar; 2]> {
        let w14 = self.omega.get(0, 3);
        let r1 = self.omega.row(0);
        let on_z1: ExactScalar = r1.iter().zip(w).map(|(a, b)| a * b).sum();
        if w.len() != 6 || w[..3].iter().any(|x| !x.is_zero()) || !on_z1.is_zero() {
            return Err(Error::InvalidArgument("vector is not in X_1".into()));
        }
        Ok([-&w[4] / w14, -&w[5] / w14])
    }

    pub fn vector(&self, c: &[ExactScalar; 2]) -> Vec<ExactScalar> {
        (0..6).map(|t| &self.basis[0][t] * &c[0] + &self.basis[1][t] * &c[1]).collect()
    }

    /// Direction of F_i = X_i cap X_1 in frame coordinates (i 0-based, in {1,2}).
    pub fn fixed_direction(&self, i: usize) -> Result<[ExactScalar; 2]> {
        // w in V orthogonal to the J-parts of r_1 and r_i: their cross product.
        let a: Vec<&ExactScalar> = (3..6).map(|c| self.omega.get(0, c)).collect();
        let b: Vec<&ExactScalar> = (3..6).map(|c| self.omega.get(i, c)).collect();
        let cross = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        let mut w = vec![ExactScalar::zero(); 6];
        w[3..6].clone_from_slice(&cross);
        self.coords(&w)
    }

    /// Direction of L_{jj'} = span(omega_1j' e_j - omega_1j e_j') in frame coordinates.
    pub fn stretch_line(&self, j: usize, jp: usize) -> Result<[ExactScalar; 2]> {
        let mut w = vec![ExactScalar::zero(); 6];
        w[j] = self.omega.get(0, jp).clone();
        w[jp] = -self.omega.get(0, j).clone();
        self.coords(&w)
    }

    /// Restriction to X_1 of the path operator of `path`, in frame coordinates.
    pub fn restrict(&self, path: &ClosedPath) -> Result<ExactMatrix> {
        if path.base() != 0 {
            return Err(Error::InvalidPath("frame paths are based at vertex 1".into()));
        }
        let f = path_operator(&self.omega, path)?;
        let mut data = vec![ExactScalar::zero(); 4];
        for (col, b) in self.basis.iter().enumerate() {
            let img = f.apply(b)?;
            let c = self.coords(&img)?;
            data[col] = c[0].clone();
            data[2 + col] = c[1].clone();
        }
        ExactMatrix::new(2, 2, data)
    }
}

/// Builds the X_1 frame and all twelve generators for a 6x6 bipartite Omega
/// whose cross block (rows 1-3, columns 4-6) is positive.
pub fn build_frame(omega: &ExactMatrix) -> Result<BipartiteFrame> {
    if (omega.rows(), omega.cols()) != (6, 6) {
        return Err(Error::Dimension("frame needs a 6x6 omega".into()));
    }
    for r in 0..6 {
        for c in 0..6 {
            let cross = (r < 3) != (c < 3);
            let v = omega.get(r, c);
            if cross && !v.is_positive() {
                return Err(Error::NonPositiveEntry { row: r, col: c });
            }
            if !cross && !v.is_zero() {
                return Err(Error::Hypothesis("omega must vanish on the diagonal blocks".into()));
            }
        }
    }
    let w = |r: usize, c: usize| omega.get(r, c).clone();
    let mut b1 = vec![ExactScalar::zero(); 6];
    b1[3] = w(0, 4);
    b1[4] = -w(0, 3);
    let mut b2 = vec![ExactScalar::zero(); 6];
    b2[3] = w(0, 5);
    b2[5] = -w(0, 3);
    // b1, b2 independent since omega_14 != 0.
    let mut frame =
        BipartiteFrame { omega: omega.clone(), basis: [b1, b2], generators: Vec::new(), cross_ratios: Vec::new() };
    let graph = build_graph(omega);
    for l in Letter::all() {
        let path = letter_path(l, &graph)?;
        frame.generators.push(frame.restrict(&path)?);
        frame.cross_ratios.push(w(0, l.j) * w(l.i, l.jp) / (w(0, l.jp) * w(l.i, l.j)));
    }
    Ok(frame)
}

fn letter_path(l: Letter, graph: &TwistGraph) -> Result<ClosedPath> {
    ClosedPath::new(vec![0, l.j, l.i, l.jp], graph)
}

/// Composite in X_1 coordinates: the first letter acts first, so [g1, g2] gives G2 G1.
pub fn s_word_matrix(word: &GeneratorWord, frame: &BipartiteFrame) -> ExactMatrix {
    let mut m = ExactMatrix::identity(2);
    for &l in &word.letters {
        m = frame.generator(l).mul(&m).expect("2x2");
    }
    m
}

/// Concatenation of the loops (1, j, i, j', 1).
pub fn word_to_path(word: &GeneratorWord, graph: &TwistGraph) -> Result<ClosedPath> {
    if word.is_empty() {
        return Err(Error::InvalidArgument("empty word has no closed path".into()));
    }
    let v = word.letters.iter().flat_map(|l| [0, l.j, l.i, l.jp]).collect();
    ClosedPath::new(v, graph)
}

/// Exact product of letter cross-ratios.
pub fn word_determinant(word: &GeneratorWord, frame: &BipartiteFrame) -> ExactScalar {
    word.letters.iter().fold(ExactScalar::one(), |acc, &l| acc * frame.cross_ratio(l))
}

/// Monic characteristic polynomial of a 2x2 matrix.
pub fn charpoly2(m: &ExactMatrix) -> ExactPoly {
    let t = m.get(0, 0) + m.get(1, 1);
    let d = m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0);
    ExactPoly::new(vec![d, -t, ExactScalar::one()])
}

/// Four-curve system [[0, Y], [Y^T, 0]] for a positive 2x2 block Y.
pub fn line_system(y: &ExactMatrix) -> Result<ExactMatrix> {
    if (y.rows(), y.cols()) != (2, 2) || y.entries().iter().any(|v| !v.is_positive()) {
        return Err(Error::InvalidArgument("Y must be a positive 2x2 matrix".into()));
    }
    let mut omega = ExactMatrix::zeros(4, 4);
    for r in 0..2 {
        for c in 0..2 {
            omega.set(r, 2 + c, y.get(r, c).clone());
            omega.set(2 + c, r, y.get(r, c).clone());
        }
    }
    Ok(omega)
}

/// Scale factor of f_gamma on the line X_1 = V cap Z_1 of a four-curve system.
pub fn line_eigenvalue(omega: &ExactMatrix, path: &ClosedPath) -> Result<ExactScalar> {
    if omega.rows() != 4 || path.base() != 0 {
        return Err(Error::InvalidArgument("line eigenvalue needs a 4-curve system based at vertex 1".into()));
    }
    let f = path_operator(omega, path)?;
    let mut v = vec![ExactScalar::zero(); 4];
    v[2] = omega.get(0, 3).clone();
    v[3] = -omega.get(0, 2).clone();
    let img = f.apply(&v)?;
    let lam = &img[2] / &v[2];
    if img[3] != &lam * &v[3] || !img[0].is_zero() || !img[1].is_zero() {
        return Err(Error::Invariant("X_1 is not invariant".into()));
    }
    Ok(lam)
}

/// Integer omega as i64 rows, for the big-integer fast paths.
pub(crate) fn omega_i64(omega: &ExactMatrix) -> Result<Vec<Vec<BigInt>>> {
    if !omega.is_integer() {
        return Err(Error::NotInteger);
    }
    Ok(omega.to_rows().into_iter().map(|r| r.into_iter().map(|x| x.to_integer()).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{int, ratio};

    fn s06() -> ExactMatrix {
        crate::curves::seed_system(crate::curves::Surface::S06).unwrap().omega
    }

    #[test]
    fn projection_example() {
        let omega = line_system(&ExactMatrix::from_i64(&[[1, 2], [3, 4]])).unwrap();
        let p = projection_matrix(&omega, 0, 2).unwrap();
        let mut expect = ExactMatrix::identity(4);
        expect.set(2, 2, int(0));
        expect.set(2, 3, int(-2));
        assert_eq!(p, expect);
        assert_eq!(p.mul(&p).unwrap(), p);
        assert!(projection_matrix(&omega, 0, 1).is_err());
    }

    #[test]
    fn graph_of_rich_block_is_k33() {
        let g = build_graph(&s06());
        assert_eq!(g.edge_count(), 9);
        assert!(g.adjacent(0, 3) && !g.adjacent(0, 1));
        assert!(g.is_connected());
    }

    #[test]
    fn toy_f_gamma_is_zero() {
        let omega = ExactMatrix::from_i64(&[[0, 1], [1, 0]]);
        let g = build_graph(&omega);
        let path = ClosedPath::from_one_based(&[1, 2, 1], &g).unwrap();
        assert_eq!(f_gamma_charpoly(&omega, &path).unwrap(), ExactPoly::x());
    }

    #[test]
    fn line_example() {
        let omega = line_system(&ExactMatrix::from_i64(&[[1, 2], [3, 4]])).unwrap();
        let g = build_graph(&omega);
        let a = ClosedPath::from_one_based(&[1, 4, 2, 3, 1], &g).unwrap();
        let b = ClosedPath::from_one_based(&[1, 3, 2, 4, 1], &g).unwrap();
        let chi = ExactPoly::x().mul(&ExactPoly::linear(ratio(2, 3))).mul(&ExactPoly::linear(ratio(3, 2)));
        assert_eq!(f_gamma_charpoly(&omega, &a).unwrap(), chi);
        assert_eq!(line_eigenvalue(&omega, &a).unwrap(), ratio(3, 2));
        assert_eq!(line_eigenvalue(&omega, &b).unwrap(), ratio(2, 3));
    }

    #[test]
    fn frame_generators() {
        let frame = build_frame(&s06()).unwrap();
        let g = Letter::new(2, 4, 5).unwrap();
        assert_eq!(frame.cross_ratio(g), &ratio(3, 2));
        assert_eq!(frame.generator(g).det().unwrap(), ratio(3, 2));
        let prod = frame.generator(g.inverse()).mul(frame.generator(g)).unwrap();
        assert_eq!(prod, ExactMatrix::identity(2));
        for l in Letter::all() {
            assert_eq!(&frame.generator(l).det().unwrap(), frame.cross_ratio(l));
            assert_eq!(Letter::all()[l.index()], l);
        }
    }

    #[test]
    fn word_path_and_completion() {
        let omega = s06();
        let g = build_graph(&omega);
        let w = GeneratorWord::from_one_based(&[[2, 4, 5]]).unwrap();
        assert_eq!(word_to_path(&w, &g).unwrap().to_one_based(), vec![1, 4, 2, 5, 1]);
        let short = ClosedPath::from_one_based(&[1, 4, 1], &g).unwrap();
        let full = complete_path(&omega, &short).unwrap();
        assert!(full.visits_all(6));
        assert_eq!(full.to_one_based(), vec![1, 4, 1, 4, 2, 4, 1, 4, 3, 4, 1, 5, 1, 6, 1]);
        assert_eq!(complete_path(&omega, &full).unwrap(), full);
    }

    #[test]
    fn json_shapes() {
        let g = build_graph(&s06());
        let p = ClosedPath::from_one_based(&[1, 4, 2, 5, 1], &g).unwrap();
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"base":1,"vertices":[1,4,2,5,1]}"#);
        let raw: RawPath = serde_json::from_str(r#"{"base":1,"vertices":[1,4,2,5,1]}"#).unwrap();
        assert_eq!(raw.resolve(&g).unwrap(), p);
        let w = GeneratorWord::from_one_based(&[[2, 4, 5], [3, 4, 6]]).unwrap();
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"letters":[[2,4,5],[3,4,6]]}"#);
        assert_eq!(serde_json::from_str::<GeneratorWord>(&s).unwrap(), w);
        assert!(ClosedPath::from_one_based(&[1, 2, 1], &g).is_err());
    }
}
