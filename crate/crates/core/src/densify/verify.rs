//! Convergence runs u_k -> (x - lambda_k) chi(f_gamma) and conjugacy verdicts.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use serde::Serialize;

use crate::algebra::roots::{residual_radius, roots_square_free};
use crate::algebra::units::FACTOR_ROOT_TOL;
use crate::algebra::{factor_over_z, poly_divide_root, ComplexApprox, ExactMatrix, ExactPoly, XFloat};
use crate::error::{Error, Result};
use crate::par::{self, ExecMode};
use crate::proj::{build_graph, complete_path, f_gamma_charpoly, omega_i64, word_to_path, ClosedPath, GeneratorWord};
use crate::twist::{unit_constant_check, word_matrix_int, DEFAULT_K_CAP};

/// Relative residual accepted when deflating u_k at lambda_k.
const DEFLATION_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// One k of a convergence run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KEntry {
    pub k: u32,
    pub u: ExactPoly,
    /// |u(0)| = 1.
    pub unit_constant: bool,
    pub lambda: Option<ComplexApprox>,
    pub dominant: bool,
    pub theta_k: Option<ComplexApprox>,
    /// |theta_k - theta|.
    pub residual: Option<f64>,
    pub conjugate: Verdict,
    /// Degree of the irreducible factor of u vanishing at theta_k.
    pub min_poly_degree: Option<usize>,
    /// The shared factor, when the verdict is yes.
    pub factor: Option<ExactPoly>,
    /// Other roots of the shared factor lie in [1/lambda - delta, lambda + delta].
    pub bi_perron: Option<bool>,
    /// sup-norm of u/(x - lambda) - chi(f_gamma), coefficientwise.
    pub defl_dist: Option<f64>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugateTrace {
    pub word: Option<GeneratorWord>,
    /// Completed path, 0-based internally and 1-based in JSON.
    pub path: ClosedPath,
    pub f_gamma: ExactPoly,
    pub theta: ComplexApprox,
    pub per_k: Vec<KEntry>,
}

impl ConjugateTrace {
    /// Deflation distances over the last `n` entries never increase.
    pub fn defl_tail_monotone(&self, n: usize) -> bool {
        let tail: Vec<f64> = self.per_k.iter().rev().take(n).map(|e| e.defl_dist.unwrap_or(f64::NAN)).collect();
        tail.len() == n.min(self.per_k.len()) && tail.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn min_defl_dist(&self) -> Option<f64> {
        self.per_k.iter().filter_map(|e| e.defl_dist).reduce(f64::min)
    }

    /// Entry with a yes verdict minimizing |theta_k - theta|.
    pub fn best_yes(&self) -> Option<&KEntry> {
        self.per_k
            .iter()
            .filter(|e| e.conjugate == Verdict::Yes)
            .min_by(|a, b| a.residual.unwrap_or(f64::INFINITY).total_cmp(&b.residual.unwrap_or(f64::INFINITY)))
    }

    /// CSV: k,lambda,theta_re,theta_im,residual,conjugate,defl_dist.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,lambda,theta_re,theta_im,residual,conjugate,defl_dist\n");
        let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:e}"));
        for e in &self.per_k {
            let lambda = e.lambda.map_or(String::new(), |l| l.re.to_string());
            let (tr, ti) = e.theta_k.map_or((None, None), |t| (Some(t.re.to_f64()), Some(t.im.to_f64())));
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                e.k,
                lambda,
                opt(tr),
                opt(ti),
                opt(e.residual),
                e.conjugate.as_str(),
                opt(e.defl_dist)
            );
        }
        s
    }
}

fn check_k_range(ks: &RangeInclusive<u32>) -> Result<()> {
    if *ks.start() == 0 || ks.start() > ks.end() || *ks.end() > DEFAULT_K_CAP {
        return Err(Error::InvalidArgument(format!("k range must satisfy 1 <= k_min <= k_max <= {DEFAULT_K_CAP}")));
    }
    Ok(())
}

/// Runs the convergence experiment for the completed path of a generator word.
pub fn verify_conjugates(
    word: &GeneratorWord,
    theta: &ComplexApprox,
    ks: RangeInclusive<u32>,
    omega: &ExactMatrix,
    mode: ExecMode,
) -> Result<ConjugateTrace> {
    if word.is_empty() {
        return Err(Error::InvalidArgument("word must be nonempty".into()));
    }
    let path = word_to_path(word, &build_graph(omega))?;
    let mut t = trace_path(&path, theta, ks, omega, mode)?;
    t.word = Some(word.clone());
    Ok(t)
}

/// Same as `verify_conjugates` for an arbitrary closed path.
pub fn trace_path(
    path: &ClosedPath,
    theta: &ComplexApprox,
    ks: RangeInclusive<u32>,
    omega: &ExactMatrix,
    mode: ExecMode,
) -> Result<ConjugateTrace> {
    check_k_range(&ks)?;
    let gamma = complete_path(omega, path)?;
    let f_gamma = f_gamma_charpoly(omega, &gamma)?;
    let om = omega_i64(omega)?;
    let ks: Vec<u32> = ks.collect();
    let fg = f_gamma.to_f64();
    let per_k = par::map(mode, &ks, |&k| {
        let m = ExactMatrix::from_bigint(om.len(), om.len(), word_matrix_int(&om, &gamma, k)).expect("square");
        entry(k, &m, theta, &fg)
    });
    let per_k = per_k.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ConjugateTrace { word: None, path: gamma, f_gamma, theta: *theta, per_k })
}

struct Located {
    factor: usize,
    root: ComplexApprox,
}

fn entry(k: u32, m: &ExactMatrix, theta: &ComplexApprox, fg: &[f64]) -> Result<KEntry> {
    let u = m.charpoly()?;
    let mut e = KEntry {
        k,
        unit_constant: unit_constant_check(&u),
        u: u.clone(),
        lambda: None,
        dominant: false,
        theta_k: None,
        residual: None,
        conjugate: Verdict::Inconclusive,
        min_poly_degree: None,
        factor: None,
        bi_perron: None,
        defl_dist: None,
        note: None,
    };
    let fac = factor_over_z(&u)?;
    let factors: Vec<&ExactPoly> = fac.factors.iter().map(|(f, _)| f).collect();
    let mut roots = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        match roots_square_free(&f.to_zpoly()?, FACTOR_ROOT_TOL) {
            Ok(rs) => roots.extend(rs.into_iter().map(|root| Located { factor: i, root })),
            Err(err) => {
                e.note = Some(format!("roots of factor {i}: {err}"));
                return Ok(e);
            }
        }
    }

    let lam = roots
        .iter()
        .enumerate()
        .filter(|(_, r)| r.root.is_real())
        .max_by(|a, b| a.1.root.re.partial_cmp(&b.1.root.re).unwrap_or(std::cmp::Ordering::Equal));
    let Some((li, lam)) = lam else {
        e.note = Some("no real root".into());
        return Ok(e);
    };
    let lambda = ComplexApprox { im: XFloat::ZERO, ..lam.root };
    let low = lambda.re - lambda.radius;
    e.lambda = Some(lambda);
    e.dominant =
        low > XFloat::ONE && roots.iter().enumerate().all(|(i, z)| i == li || z.root.abs() + z.root.radius < low);

    match poly_divide_root(&u, &lambda, DEFLATION_TOL) {
        Ok(d) => {
            let n = d.quotient.len().max(fg.len());
            let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
            e.defl_dist = Some((0..n).map(|i| (get(&d.quotient, i) - get(fg, i)).abs()).fold(0.0, f64::max));
        }
        Err(err) => e.note = Some(format!("deflation: {err}")),
    }

    let mut by_dist: Vec<(XFloat, &Located)> = roots.iter().map(|z| (z.root.dist(theta), z)).collect();
    by_dist.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
    let (d1, near) = by_dist[0];
    e.theta_k = Some(near.root);
    e.residual = Some(d1.to_f64());
    e.min_poly_degree = factors[near.factor].degree();
    if let Some(&(d2, second)) = by_dist.get(1) {
        if d2 - d1 <= near.root.radius + second.root.radius {
            e.note = Some("two roots are equidistant from the target within their radii".into());
            return Ok(e);
        }
    }
    if near.factor != lam.factor {
        e.conjugate = Verdict::No;
        return Ok(e);
    }

    // Independent recheck of the shared factor.
    let f = factors[near.factor];
    let divides = u.exact_div(f)?.is_some();
    let z = f.to_zpoly()?;
    let ok_at = |r: &ComplexApprox| residual_radius(&z, r) <= XFloat::ONE.max(r.abs()).mul_f64(FACTOR_ROOT_TOL);
    if !(divides && ok_at(&lambda) && ok_at(&near.root)) {
        e.note = Some("shared factor failed the exact recheck".into());
        return Ok(e);
    }
    e.conjugate = Verdict::Yes;
    e.factor = Some(f.clone());
    e.bi_perron = Some(bi_perron(&roots, near.factor, li, &lambda));
    Ok(e)
}

/// All roots of the factor other than lambda in the closed annulus
/// [1/lambda - delta, lambda + delta], delta ten times the combined radius.
fn bi_perron(roots: &[Located], factor: usize, li: usize, lambda: &ComplexApprox) -> bool {
    let inner = lambda.re.recip();
    roots.iter().enumerate().filter(|(i, z)| z.factor == factor && *i != li).all(|(_, z)| {
        let a = z.root.abs();
        let delta = (z.root.radius + a * lambda.radius / lambda.re).mul_f64(10.0);
        a >= inner - delta && a <= lambda.re + delta
    })
}
