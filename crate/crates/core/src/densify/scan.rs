//! Grid scans: target -> quadratic -> word -> certified conjugate.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use super::search::{approximate_word, SearchBudget};
use super::target_to_quadratic;
use super::verify::verify_conjugates;
use crate::algebra::{is_algebraic_unit, roots_complex, ComplexApprox, ExactMatrix};
use crate::error::{Error, Result};
use crate::par::{self, ExecMode};
use crate::proj::{BipartiteFrame, GeneratorWord};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanConfig {
    /// [x0, x1, y0, y1].
    pub region: [f64; 4],
    pub grid: f64,
    pub eps: f64,
    pub k_min: u32,
    pub k_max: u32,
    pub budget: SearchBudget,
    #[serde(skip)]
    pub mode: ExecMode,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            region: [-2.0, 2.0, -2.0, 2.0],
            grid: 1.0,
            eps: 0.05,
            k_min: 1,
            k_max: 30,
            budget: SearchBudget::default(),
            mode: ExecMode::default(),
        }
    }
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.region.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("region must be bounded".into()));
        }
        if !self.grid.is_finite() || self.grid <= 0.0 {
            return Err(Error::InvalidArgument("grid spacing must be positive".into()));
        }
        if self.eps.is_nan() || self.eps <= 0.0 {
            return Err(Error::InvalidArgument("eps must be positive".into()));
        }
        if self.k_min == 0 || self.k_min > self.k_max || self.k_max > crate::twist::DEFAULT_K_CAP {
            return Err(Error::InvalidArgument("k range must lie in [1, 60]".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TargetStatus {
    /// Certified conjugate within eps.
    Hit,
    /// Word found, but no certified conjugate within eps.
    Miss,
    /// Search budget ran out.
    NoWord,
    ZeroAdjacent,
    UnitAdjacent,
}

impl TargetStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            TargetStatus::Hit => "hit",
            TargetStatus::Miss => "miss",
            TargetStatus::NoWord => "no-word",
            TargetStatus::ZeroAdjacent => "zero-adjacent",
            TargetStatus::UnitAdjacent => "unit-adjacent",
        }
    }

    pub fn skipped(&self) -> bool {
        matches!(self, TargetStatus::ZeroAdjacent | TargetStatus::UnitAdjacent)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TargetOutcome {
    pub target: ComplexApprox,
    pub status: TargetStatus,
    pub best_conjugate: Option<ComplexApprox>,
    /// |best_conjugate - target|.
    pub distance: Option<f64>,
    /// The matching stretch factor, for hits.
    pub lambda: Option<ComplexApprox>,
    pub word: Option<GeneratorWord>,
    pub k: Option<u32>,
    pub search_nodes: usize,
    /// The target was perturbed once because the first word had unit eigenvalues.
    pub retried: bool,
    /// Every certified factor passed the annulus check.
    pub bi_perron: bool,
    /// Every u_k in the run had constant coefficient +-1.
    pub unit_constant: bool,
    pub note: Option<String>,
}

impl TargetOutcome {
    fn skipped(target: Complex64, status: TargetStatus) -> Self {
        TargetOutcome {
            target: ComplexApprox::exact(target),
            status,
            best_conjugate: None,
            distance: None,
            lambda: None,
            word: None,
            k: None,
            search_nodes: 0,
            retried: false,
            bi_perron: true,
            unit_constant: true,
            note: None,
        }
    }

    fn conj(&self) -> Self {
        TargetOutcome {
            target: self.target.conj(),
            best_conjugate: self.best_conjugate.map(|z| z.conj()),
            ..self.clone()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub config: ScanConfig,
    pub per_target: Vec<TargetOutcome>,
    pub evaluated: usize,
    pub hits: usize,
    /// hits / evaluated, and 1 when nothing was evaluated.
    pub coverage: f64,
}

impl ScanReport {
    /// CSV: target_re,target_im,best_re,best_im,dist,word_len,k,verdict.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("target_re,target_im,best_re,best_im,dist,word_len,k,verdict\n");
        for t in &self.per_target {
            let z = t.target.to_c64();
            let (br, bi) = t.best_conjugate.map_or((String::new(), String::new()), |b| {
                let b = b.to_c64();
                (b.re.to_string(), b.im.to_string())
            });
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                z.re,
                z.im,
                br,
                bi,
                t.distance.map_or(String::new(), |d| format!("{d:e}")),
                t.word.as_ref().map_or(String::new(), |w| w.len().to_string()),
                t.k.map_or(String::new(), |k| k.to_string()),
                t.status.as_str()
            );
        }
        s
    }
}

/// Points x0 + i h + (y0 + j h) i inside the region, row by row from y0.
pub fn grid_targets(region: [f64; 4], h: f64) -> Vec<Complex64> {
    let [x0, x1, y0, y1] = region;
    let steps = |a: f64, b: f64| if b < a { 0 } else { ((b - a) / h + 1e-9).floor() as usize + 1 };
    let (nx, ny) = (steps(x0, x1), steps(y0, y1));
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        for i in 0..nx {
            out.push(Complex64::new(x0 + i as f64 * h, y0 + j as f64 * h));
        }
    }
    out
}

/// Within eps of +-1 or of a root of x^2 + s x +- 1.
fn unit_adjacent(theta: Complex64, eps: f64) -> bool {
    if (theta - 1.0).norm() < eps || (theta + 1.0).norm() < eps {
        return true;
    }
    // the other root is -+1/theta, so |s| <= |theta| + 1/|theta|
    let r = theta.norm();
    let s_max = (r + eps + 1.0 / (r - eps).max(1e-6)).ceil().min(1e6) as i64 + 1;
    for s in -s_max..=s_max {
        let s = s as f64;
        for c in [1.0, -1.0] {
            let disc = Complex64::new(s * s - 4.0 * c, 0.0).sqrt();
            for z in [(-s + disc) / 2.0, (-s - disc) / 2.0] {
                if (z - theta).norm() < eps {
                    return true;
                }
            }
        }
    }
    false
}

fn search_eps(theta: Complex64, eps: f64) -> f64 {
    eps * (theta.im.abs() / (1.0 + theta.norm())).clamp(0.05, 0.5)
}

fn process(theta: Complex64, cfg: &ScanConfig, frame: &BipartiteFrame, omega: &ExactMatrix) -> Result<TargetOutcome> {
    if theta.norm() < cfg.eps {
        return Ok(TargetOutcome::skipped(theta, TargetStatus::ZeroAdjacent));
    }
    if unit_adjacent(theta, cfg.eps) {
        return Ok(TargetOutcome::skipped(theta, TargetStatus::UnitAdjacent));
    }
    let mut out = TargetOutcome::skipped(theta, TargetStatus::NoWord);
    let mut aim = theta;
    let approx = loop {
        let u = target_to_quadratic(ComplexApprox::exact(aim))?;
        match approximate_word(&u, frame, search_eps(aim, cfg.eps), &cfg.budget) {
            Ok(r) => {
                out.search_nodes += r.stats.nodes;
                let near = roots_complex(&r.achieved_poly, 1e-12)?
                    .into_iter()
                    .min_by(|a, b| a.dist(&u.theta).partial_cmp(&b.dist(&u.theta)).expect("finite"))
                    .expect("quadratic");
                let unit = is_algebraic_unit(&r.achieved_poly, &near).map(|c| c.is_unit).unwrap_or(false);
                if unit && !out.retried {
                    out.retried = true;
                    aim = theta + cfg.grid / 10.0;
                    continue;
                }
                break r;
            }
            Err(Error::SearchExhausted { best }) => {
                out.search_nodes += best.stats.nodes;
                out.note = Some(format!("search exhausted; best coefficient error {:e}", best.max_error()));
                return Ok(out);
            }
            Err(e) => return Err(e),
        }
    };
    let trace = verify_conjugates(
        &approx.word,
        &ComplexApprox::exact(theta),
        cfg.k_min..=cfg.k_max,
        omega,
        ExecMode::Sequential,
    )?;
    out.word = Some(approx.word.clone());
    out.unit_constant = trace.per_k.iter().all(|e| e.unit_constant);
    out.bi_perron = trace.per_k.iter().all(|e| e.bi_perron != Some(false));
    out.status = TargetStatus::Miss;
    if let Some(best) = trace.best_yes() {
        let d = best.residual.expect("yes entries carry a residual");
        out.best_conjugate = best.theta_k;
        out.distance = Some(d);
        out.lambda = best.lambda;
        out.k = Some(best.k);
        if d < cfg.eps {
            out.status = TargetStatus::Hit;
        }
    } else {
        out.note = Some("no certified conjugate in the k range".into());
    }
    Ok(out)
}

/// Scans explicit targets. Conjugate pairs share one computation.
pub fn scan_targets(
    targets: &[Complex64],
    cfg: &ScanConfig,
    frame: &BipartiteFrame,
    omega: &ExactMatrix,
) -> Result<ScanReport> {
    cfg.validate()?;
    let canon = |z: Complex64| if z.im < 0.0 { z.conj() } else { z };
    let bits = |z: Complex64| (z.re.to_bits(), z.im.to_bits());
    let mut uniq: Vec<Complex64> = Vec::new();
    let mut index = HashMap::new();
    for &t in targets {
        let c = canon(t);
        index.entry(bits(c)).or_insert_with(|| {
            uniq.push(c);
            uniq.len() - 1
        });
    }
    let done = par::map(cfg.mode, &uniq, |&z| process(z, cfg, frame, omega));
    let done = done.into_iter().collect::<Result<Vec<_>>>()?;
    let per_target: Vec<TargetOutcome> = targets
        .iter()
        .map(|&t| {
            let o = &done[index[&bits(canon(t))]];
            if t.im < 0.0 {
                o.conj()
            } else {
                o.clone()
            }
        })
        .collect();
    let evaluated = per_target.iter().filter(|t| !t.status.skipped()).count();
    let hits = per_target.iter().filter(|t| t.status == TargetStatus::Hit).count();
    let coverage = if evaluated == 0 { 1.0 } else { hits as f64 / evaluated as f64 };
    Ok(ScanReport { config: cfg.clone(), per_target, evaluated, hits, coverage })
}

/// Scans the grid of `cfg.region` with spacing `cfg.grid`.
pub fn density_scan(cfg: &ScanConfig, frame: &BipartiteFrame, omega: &ExactMatrix) -> Result<ScanReport> {
    cfg.validate()?;
    scan_targets(&grid_targets(cfg.region, cfg.grid), cfg, frame, omega)
}
