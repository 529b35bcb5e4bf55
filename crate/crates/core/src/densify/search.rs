//! Bounded word search in the generated subgroup of GL+(X_1).
//!
//! Phase one walks the exponent lattice of the letter cross-ratios (the
//! determinant of a word is exactly their product) until the determinant is
//! close to the target. Phase two keeps the determinant class fixed and steers
//! the trace with det-1 words: shear refinements C_{n+1} C_n^{-1}, balanced
//! letter pairs, c = 1 letters, and conjugations by single letters.

use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::hash::{Hash, Hasher};

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use super::QuadraticTarget;
use crate::algebra::{scalar, ExactPoly, ExactScalar};
use crate::curves::{coprime_base, rational_exponents};
use crate::error::{Error, Result};
use crate::proj::{charpoly2, s_word_matrix, BipartiteFrame, GeneratorWord, Letter};

/// Limits for `approximate_word`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    /// Matrix products evaluated, over both phases.
    pub nodes: usize,
    pub max_len: usize,
    pub beam_width: usize,
    /// Tie-breaking only.
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { nodes: 200_000, max_len: 96, beam_width: 300, seed: 0 }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: usize,
    /// Phase-one depth plus the number of trace steps.
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ApproxResult {
    pub target: QuadraticTarget,
    pub word: GeneratorWord,
    /// chi(s_word), exact.
    pub achieved_poly: ExactPoly,
    /// (|a - a'|, |b - b'|).
    pub coeff_error: (f64, f64),
    pub stats: SearchStats,
}

impl ApproxResult {
    pub fn max_error(&self) -> f64 {
        self.coeff_error.0.max(self.coeff_error.1)
    }
}

type M2 = [f64; 4];

fn mul(a: &M2, b: &M2) -> M2 {
    [a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]]
}

fn inv(a: &M2) -> M2 {
    let d = a[0] * a[3] - a[1] * a[2];
    [a[3] / d, -a[1] / d, -a[2] / d, a[0] / d]
}

fn key(m: &M2) -> [i64; 4] {
    m.map(|x| (x * 1e9).round() as i64)
}

/// Letters as indices into `Letter::all()`.
struct Alphabet {
    letters: Vec<Letter>,
    mats: Vec<M2>,
    inverse: Vec<usize>,
    unit_ratio: Vec<bool>,
    log_ratio: Vec<f64>,
    exps: Vec<Vec<i64>>,
}

impl Alphabet {
    fn new(frame: &BipartiteFrame) -> Self {
        let letters = frame.letters();
        let mats = letters
            .iter()
            .map(|&l| {
                let g = frame.generator(l);
                [g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1)].map(scalar::to_f64)
            })
            .collect();
        let inverse = letters.iter().map(|l| l.inverse().index()).collect();
        let ratios: Vec<&ExactScalar> = letters.iter().map(|&l| frame.cross_ratio(l)).collect();
        let base = coprime_base(ratios.iter().flat_map(|q| [q.numer().clone(), q.denom().clone()]));
        let exps = ratios.iter().map(|q| rational_exponents(q, &base)).collect();
        Alphabet {
            unit_ratio: ratios.iter().map(|q| q.is_one()).collect(),
            log_ratio: ratios.iter().map(|q| scalar::to_f64(q).ln()).collect(),
            letters,
            mats,
            inverse,
            exps,
        }
    }

    fn matrix(&self, w: &[usize]) -> M2 {
        w.iter().fold([1.0, 0.0, 0.0, 1.0], |m, &g| mul(&self.mats[g], &m))
    }

    fn word(&self, w: &[usize]) -> GeneratorWord {
        GeneratorWord::new(w.iter().map(|&g| self.letters[g]).collect())
    }
}

/// Determinant-one words used to move the trace, in a fixed order.
pub fn steering_pool(frame: &BipartiteFrame) -> Vec<GeneratorWord> {
    let al = Alphabet::new(frame);
    pool_indices(&al).iter().map(|w| al.word(w)).collect()
}

fn pool_indices(al: &Alphabet) -> Vec<Vec<usize>> {
    let n = al.letters.len();
    let mut pool: Vec<Vec<usize>> = (0..n).filter(|&g| al.unit_ratio[g]).map(|g| vec![g]).collect();
    // C_{n+1} C_n^{-1} = A^{n+1} B A^{-1} B^{-1} A^{-n}, letters listed in acting order.
    for i in 1..3 {
        let fam: Vec<usize> = (0..n).filter(|&g| al.letters[g].i == i && !al.unit_ratio[g]).collect();
        for &a in &fam {
            for &b in &fam {
                if b == a || b == al.inverse[a] {
                    continue;
                }
                for k in 0..3 {
                    let mut seq = vec![a; k + 1];
                    seq.extend([b, al.inverse[a], al.inverse[b]]);
                    seq.extend(std::iter::repeat_n(al.inverse[a], k));
                    seq.reverse();
                    pool.push(seq);
                }
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if b == al.inverse[a] || al.unit_ratio[a] {
                continue;
            }
            let balanced = al.exps[a].iter().zip(&al.exps[b]).all(|(x, y)| x + y == 0);
            if balanced {
                pool.push(vec![a, b]);
            }
        }
    }
    let mut seen = HashSet::new();
    pool.retain(|w| seen.insert(key(&al.matrix(w))));
    pool
}

struct Node {
    word: Vec<usize>,
    m: M2,
    score: f64,
}

struct Search<'a> {
    al: Alphabet,
    target: &'a QuadraticTarget,
    eps: f64,
    budget: SearchBudget,
    nodes: usize,
    best: Option<(f64, Vec<usize>)>,
}

impl Search<'_> {
    fn errors(&self, m: &M2) -> (f64, f64) {
        let tr = m[0] + m[3];
        let det = m[0] * m[3] - m[1] * m[2];
        ((tr - self.target.trace()).abs(), (det - self.target.det()).abs())
    }

    fn tie(&self, w: &[usize]) -> u64 {
        let mut h = DefaultHasher::new();
        self.budget.seed.hash(&mut h);
        w.hash(&mut h);
        h.finish()
    }

    fn note(&mut self, w: &[usize], m: &M2) {
        if w.is_empty() {
            return;
        }
        let (e0, e1) = self.errors(m);
        let e = e0.max(e1);
        let better = match &self.best {
            None => true,
            Some((b, bw)) => e < *b || (e == *b && (w.len(), w) < (bw.len(), bw)),
        };
        if better {
            self.best = Some((e, w.to_vec()));
        }
    }

    /// Nonempty words from `cands` meeting eps in floating point, best first.
    fn hits(&self, cands: impl Iterator<Item = (Vec<usize>, M2)>) -> Vec<Vec<usize>> {
        let mut hits: Vec<(f64, Vec<usize>)> = cands
            .filter(|(w, _)| !w.is_empty())
            .filter_map(|(w, m)| {
                let (e0, e1) = self.errors(&m);
                (e0 < self.eps && e1 < self.eps).then_some((e0.max(e1), w))
            })
            .collect();
        hits.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| (a.1.len(), &a.1).cmp(&(b.1.len(), &b.1))));
        hits.into_iter().map(|(_, w)| w).collect()
    }

    /// Breadth-first over exponent vectors, at most four words per state.
    fn determinant_phase(&mut self) -> (Vec<Vec<usize>>, usize) {
        let steps: Vec<usize> = (0..self.al.letters.len()).filter(|&g| !self.al.unit_ratio[g]).collect();
        let dim = self.al.exps.first().map_or(0, Vec::len);
        let tol = self.eps / 2.0;
        let b = self.target.det();
        let mut seen: HashMap<Vec<i64>, (usize, usize)> = HashMap::new();
        seen.insert(vec![0; dim], (0, 1));
        let mut layer: Vec<(Vec<usize>, Vec<i64>, f64)> = vec![(Vec::new(), vec![0; dim], 0.0)];
        for depth in 0..=self.budget.max_len {
            let mut hits: Vec<(f64, &Vec<usize>)> =
                layer.iter().map(|(w, _, x)| ((x.exp() - b).abs(), w)).filter(|(e, _)| *e < tol).collect();
            if !hits.is_empty() {
                hits.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
                return (hits.into_iter().take(32).map(|(_, w)| w.clone()).collect(), depth);
            }
            if self.nodes >= self.budget.nodes || layer.is_empty() {
                break;
            }
            let mut next = Vec::new();
            for (w, e, x) in &layer {
                for &g in &steps {
                    self.nodes += 1;
                    let f: Vec<i64> = e.iter().zip(&self.al.exps[g]).map(|(a, d)| a + d).collect();
                    let entry = seen.entry(f.clone()).or_insert((depth + 1, 0));
                    if entry.0 != depth + 1 || entry.1 >= 4 {
                        continue;
                    }
                    entry.1 += 1;
                    let mut v = w.clone();
                    v.push(g);
                    next.push((v, f, x + self.al.log_ratio[g]));
                }
            }
            layer = next;
        }
        (Vec::new(), 0)
    }

    fn trace_phase(&mut self, seeds: Vec<Vec<usize>>, pool: &[Vec<usize>]) -> (Option<Vec<usize>>, usize) {
        let t = self.target.trace();
        let pool: Vec<(Vec<usize>, M2)> = pool.iter().map(|w| (w.clone(), self.al.matrix(w))).collect();
        let conj: Vec<(usize, M2, M2)> =
            (0..self.al.letters.len()).map(|g| (g, self.al.mats[g], inv(&self.al.mats[g]))).collect();
        let mut beam: Vec<Node> = seeds
            .into_iter()
            .map(|w| {
                let m = self.al.matrix(&w);
                Node { score: (m[0] + m[3] - t).abs(), word: w, m }
            })
            .collect();
        let mut depth = 0;
        loop {
            for n in &beam {
                let (w, m) = (n.word.clone(), n.m);
                self.note(&w, &m);
            }
            let found = self.hits(beam.iter().map(|n| (n.word.clone(), n.m)));
            if let Some(w) = found.into_iter().next() {
                return (Some(w), depth);
            }
            if self.nodes >= self.budget.nodes || beam.is_empty() {
                return (None, depth);
            }
            depth += 1;
            let mut cands: Vec<Node> = Vec::new();
            for n in &beam {
                if self.nodes >= self.budget.nodes {
                    break;
                }
                for (p, pm) in &pool {
                    if n.word.len() + p.len() > self.budget.max_len {
                        continue;
                    }
                    self.nodes += 1;
                    let m = mul(pm, &n.m);
                    let mut w = n.word.clone();
                    w.extend_from_slice(p);
                    cands.push(Node { score: (m[0] + m[3] - t).abs(), word: w, m });
                }
                if n.word.is_empty() || n.word.len() + 2 > self.budget.max_len {
                    continue;
                }
                for (g, gm, gi) in &conj {
                    self.nodes += 1;
                    let m = mul(gi, &mul(&n.m, gm));
                    let mut w = Vec::with_capacity(n.word.len() + 2);
                    w.push(*g);
                    w.extend_from_slice(&n.word);
                    w.push(self.al.inverse[*g]);
                    cands.push(Node { score: n.score, word: w, m });
                }
            }
            let mut keyed: Vec<(u64, Node)> = cands.into_iter().map(|c| (self.tie(&c.word), c)).collect();
            keyed.sort_by(|(ha, a), (hb, b)| {
                a.score.total_cmp(&b.score).then(a.word.len().cmp(&b.word.len())).then(ha.cmp(hb))
            });
            let mut seen = HashSet::new();
            beam = keyed
                .into_iter()
                .map(|(_, c)| c)
                .filter(|c| seen.insert(key(&c.m)))
                .take(self.budget.beam_width)
                .collect();
        }
    }
}

fn exact_result(frame: &BipartiteFrame, u: &QuadraticTarget, word: GeneratorWord, stats: SearchStats) -> ApproxResult {
    let achieved_poly = charpoly2(&s_word_matrix(&word, frame));
    let a = BigRational::from_float(u.a).expect("finite target");
    let b = BigRational::from_float(u.b).expect("finite target");
    let ea = scalar::to_f64(&(achieved_poly.coeff(1) - a).abs());
    let eb = scalar::to_f64(&(achieved_poly.coeff(0) - b).abs());
    ApproxResult { target: *u, word, achieved_poly, coeff_error: (ea, eb), stats }
}

/// Finds a nonempty word w with |tr s_w + a| < eps and |det s_w - b| < eps.
/// On exhaustion the error carries the best word seen.
pub fn approximate_word(
    u: &QuadraticTarget,
    frame: &BipartiteFrame,
    eps: f64,
    budget: &SearchBudget,
) -> Result<ApproxResult> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    if u.b.is_nan() || u.b <= 0.0 {
        return Err(Error::InvalidArgument("target constant term must be positive".into()));
    }
    if budget.max_len == 0 || budget.beam_width == 0 {
        return Err(Error::InvalidArgument("budget must allow words and a nonempty beam".into()));
    }
    let mut s = Search { al: Alphabet::new(frame), target: u, eps, budget: *budget, nodes: 0, best: None };
    let accept = |s: &Search, w: &[usize], depth: usize| -> Option<ApproxResult> {
        let stats = SearchStats { nodes: s.nodes, depth };
        let r = exact_result(frame, u, s.al.word(w), stats);
        (r.coeff_error.0 < eps && r.coeff_error.1 < eps).then_some(r)
    };

    let singles: Vec<(Vec<usize>, M2)> = (0..s.al.letters.len()).map(|g| (vec![g], s.al.mats[g])).collect();
    s.nodes += singles.len();
    for (w, m) in &singles {
        s.note(w, m);
    }
    for w in s.hits(singles.into_iter()) {
        if let Some(r) = accept(&s, &w, 1) {
            return Ok(r);
        }
    }

    let (seeds, d1) = s.determinant_phase();
    if !seeds.is_empty() {
        let pool = pool_indices(&s.al);
        let (hit, d2) = s.trace_phase(seeds, &pool);
        if let Some(w) = hit {
            if let Some(r) = accept(&s, &w, d1 + d2) {
                return Ok(r);
            }
        }
    }
    let stats = SearchStats { nodes: s.nodes, depth: d1 };
    let best = s.best.as_ref().map(|(_, w)| w.clone()).unwrap_or_else(|| vec![0]);
    Err(Error::SearchExhausted { best: Box::new(exact_result(frame, u, s.al.word(&best), stats)) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ComplexApprox;
    use crate::algebra::ExactMatrix;
    use crate::curves::assemble_rich_system;
    use crate::densify::target_to_quadratic;
    use crate::proj::{build_frame, word_determinant};

    fn s06() -> BipartiteFrame {
        let y = ExactMatrix::from_i64(&[[12, 8, 4], [8, 8, 4], [4, 4, 4]]);
        build_frame(&assemble_rich_system(&y).unwrap().omega).unwrap()
    }

    #[test]
    fn pool_words_have_unit_determinant() {
        let f = s06();
        let pool = steering_pool(&f);
        assert!(pool.len() > 10);
        for w in &pool {
            assert!(word_determinant(w, &f).is_one(), "{w}");
        }
    }

    #[test]
    fn single_generator_is_exact() {
        let f = s06();
        for l in f.letters() {
            let g = f.generator(l);
            let p = charpoly2(g);
            let u = QuadraticTarget {
                a: scalar::to_f64(&p.coeff(1)),
                b: scalar::to_f64(&p.coeff(0)),
                theta: ComplexApprox::new(0.0, 0.0, 0.0),
            };
            let r = approximate_word(&u, &f, 1e-9, &SearchBudget::default()).unwrap();
            assert_eq!(r.word.len(), 1);
            assert_eq!(r.achieved_poly, p);
        }
    }

    #[test]
    fn one_plus_i_within_tenth() {
        let f = s06();
        let u = target_to_quadratic(ComplexApprox::new(1.0, 1.0, 0.0)).unwrap();
        let budget = SearchBudget { nodes: 100_000, ..Default::default() };
        let r = approximate_word(&u, &f, 0.1, &budget).unwrap();
        assert!(r.coeff_error.0 < 0.1 && r.coeff_error.1 < 0.1);
        assert!(r.stats.nodes <= budget.nodes + 200);
        let again = approximate_word(&u, &f, 0.1, &budget).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn exhaustion_reports_best() {
        let f = s06();
        let u = target_to_quadratic(ComplexApprox::new(1.0, 1.0, 0.0)).unwrap();
        let budget = SearchBudget { nodes: 20, ..Default::default() };
        match approximate_word(&u, &f, 1e-6, &budget) {
            Err(Error::SearchExhausted { best }) => assert!(!best.word.is_empty()),
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }
}
