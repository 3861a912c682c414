//! Desk-scale verification harness.
//!
//! - [`mc_iou_oracle`]: Monte Carlo rotated IoU, independent of the clipping path.
//! - [`run_bench`]: synthetic box regression with and without the consistency
//!   term. Each trial samples a unit-scale oriented ground truth, perturbs it
//!   into a horizontal proposal, an oriented proposal and an angle, and runs
//!   fixed-step gradient descent on
//!   `smoothL1(hbb) + smoothL1(obb sides/center) + smoothL1(angle) + lambda * cgc`.
//! - [`proposal_histogram`]: proposal counts per IoU bin.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::assignment::GroundTruthObject;
use crate::consistency::{
    angle_difference, cgc_gradient_params, smooth_l1, smooth_l1_angle, smooth_l1_angle_grad,
    smooth_l1_grad, ProposalPair, SMOOTH_L1_BETA,
};
use crate::geometry::{canonicalize, hbb_iou, o2mer, obb_iou, HorizontalBox, OrientedBox};
use crate::math::{self, FRAC_PI_2};
use crate::{Error, Result};

pub const MIN_ORACLE_SAMPLES: usize = 10_000;

/// Monte Carlo IoU of two oriented boxes: uniform samples over the bounding
/// region of both boxes, classified by point-in-rectangle tests in each box's
/// local frame.
pub fn mc_iou_oracle(a: &OrientedBox, b: &OrientedBox, samples: usize, seed: u64) -> Result<f64> {
    if samples < MIN_ORACLE_SAMPLES {
        return Err(Error::InvalidInput(
            "Monte Carlo oracle needs at least 10^4 samples",
        ));
    }
    let frames = [LocalFrame::new(a), LocalFrame::new(b)];
    let (mut x0, mut y0, mut x1, mut y1) = (
        f64::INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::NEG_INFINITY,
    );
    for f in &frames {
        for (x, y) in f.corners() {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut both, mut either) = (0u64, 0u64);
    for _ in 0..samples {
        let x = x0 + (x1 - x0) * rng.gen::<f64>();
        let y = y0 + (y1 - y0) * rng.gen::<f64>();
        let (in_a, in_b) = (frames[0].contains(x, y), frames[1].contains(x, y));
        both += u64::from(in_a && in_b);
        either += u64::from(in_a || in_b);
    }
    Ok(if either == 0 {
        0.0
    } else {
        both as f64 / either as f64
    })
}

struct LocalFrame {
    cx: f64,
    cy: f64,
    sin: f64,
    cos: f64,
    half_w: f64,
    half_h: f64,
}

impl LocalFrame {
    fn new(b: &OrientedBox) -> Self {
        Self {
            cx: b.cx(),
            cy: b.cy(),
            sin: math::sin(b.theta()),
            cos: math::cos(b.theta()),
            half_w: b.w() / 2.0,
            half_h: b.h() / 2.0,
        }
    }

    fn corners(&self) -> [(f64, f64); 4] {
        [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)].map(|(sx, sy)| {
            let (u, v) = (sx * self.half_w, sy * self.half_h);
            (
                self.cx + u * self.cos - v * self.sin,
                self.cy + u * self.sin + v * self.cos,
            )
        })
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        let (dx, dy) = (x - self.cx, y - self.cy);
        let u = dx * self.cos + dy * self.sin;
        let v = -dx * self.sin + dy * self.cos;
        u.abs() <= self.half_w && v.abs() <= self.half_h
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(default)
)]
pub struct BenchConfig {
    pub seed: u64,
    pub trials: usize,
    pub steps: usize,
    pub step_size: f64,
    /// Weight of the consistency term; 0 disables it.
    pub lambda_cgc: f64,
    /// Standard deviation of the initialization noise, relative to box size.
    pub noise_scale: f64,
    /// Long side over short side of sampled ground truths.
    pub gt_aspect_range: (f64, f64),
    /// Degrees.
    pub gt_angle_range: (f64, f64),
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 200,
            steps: 500,
            step_size: 1e-3,
            lambda_cgc: 1.0,
            noise_scale: 0.15,
            gt_aspect_range: (1.5, 6.0),
            gt_angle_range: (-90.0, 90.0),
        }
    }
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            return Err(Error::InvalidInput("trials must be at least 1"));
        }
        if !(self.step_size > 0.0 && self.step_size.is_finite()) {
            return Err(Error::InvalidInput("step_size must be positive"));
        }
        if !(self.lambda_cgc >= 0.0 && self.lambda_cgc.is_finite()) {
            return Err(Error::InvalidInput("lambda_cgc must be nonnegative"));
        }
        if !(self.noise_scale > 0.0 && self.noise_scale <= 0.5) {
            return Err(Error::InvalidInput("noise_scale must lie in (0, 0.5]"));
        }
        let (a0, a1) = self.gt_aspect_range;
        if !(a0 >= 1.0 && a0 <= a1 && a1.is_finite()) {
            return Err(Error::InvalidInput(
                "gt_aspect_range must satisfy 1 <= min <= max",
            ));
        }
        let (t0, t1) = self.gt_angle_range;
        if !(t0.is_finite() && t1.is_finite() && t0 <= t1) {
            return Err(Error::InvalidInput(
                "gt_angle_range must satisfy min <= max",
            ));
        }
        Ok(())
    }
}

/// Per-trial RNG seed derived from the run seed and trial index (splitmix64).
pub fn trial_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed
        ^ (index as u64)
            .wrapping_add(1)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Smallest side length the descent may shrink a box to.
const MIN_SIDE: f64 = 1e-6;
/// Initialization noise is truncated to this many standard deviations.
const NOISE_CLIP: f64 = 1.9;
const MAX_INIT_ATTEMPTS: usize = 64;

/// One regression problem: the ground truth and the current estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trial {
    pub gt: OrientedBox,
    pub gt_hbb: HorizontalBox,
    /// Horizontal proposal {cx, cy, w, h}.
    pub hbb: [f64; 4],
    /// Oriented proposal {cx, cy, w, h}; sides are not re-canonicalized while descending.
    pub obb: [f64; 4],
    /// Predicted angle, shared by the oriented proposal.
    pub theta: f64,
}

impl Trial {
    /// Ground truth and initialization of trial `index`; identical for every
    /// `lambda_cgc`, so runs with and without the consistency term are paired.
    pub fn sample(cfg: &BenchConfig, index: usize) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.seed, index));
        let uniform = |rng: &mut ChaCha8Rng, lo: f64, hi: f64| lo + (hi - lo) * rng.gen::<f64>();

        let cx = uniform(&mut rng, -1.0, 1.0);
        let cy = uniform(&mut rng, -1.0, 1.0);
        let aspect = uniform(&mut rng, cfg.gt_aspect_range.0, cfg.gt_aspect_range.1);
        let angle = uniform(&mut rng, cfg.gt_angle_range.0, cfg.gt_angle_range.1).to_radians();
        let gt = canonicalize(cx, cy, 1.0, 1.0 / aspect, angle)?;
        let gt_hbb = o2mer(&gt);

        let sigma = cfg.noise_scale;
        for _ in 0..MAX_INIT_ATTEMPTS {
            let mut n = || {
                let z: f64 = rng.sample(StandardNormal);
                sigma * z.clamp(-NOISE_CLIP, NOISE_CLIP)
            };
            let [hx, hy, hw, hh] = gt_hbb.params();
            let hbb = [
                hx + n() * hw,
                hy + n() * hh,
                hw * (1.0 + n()),
                hh * (1.0 + n()),
            ];
            let obb = [
                gt.cx() + n() * hw,
                gt.cy() + n() * hh,
                gt.w() * (1.0 + n()),
                gt.h() * (1.0 + n()),
            ];
            let theta = gt.theta() + n() * FRAC_PI_2;
            let trial = Self {
                gt,
                gt_hbb,
                hbb,
                obb,
                theta,
            };
            if trial.consistency_iou() > 0.0 {
                return Ok(trial);
            }
        }
        Err(Error::InvalidInput(
            "could not draw an overlapping initialization",
        ))
    }

    fn obb_params(&self) -> [f64; 5] {
        [
            self.obb[0],
            self.obb[1],
            self.obb[2],
            self.obb[3],
            self.theta,
        ]
    }

    pub fn pair(&self) -> Result<ProposalPair> {
        let [x, y, w, h] = self.hbb;
        let [ox, oy, ow, oh] = self.obb;
        Ok(ProposalPair::new(
            HorizontalBox::new(x, y, w, h)?,
            canonicalize(ox, oy, ow, oh, self.theta)?,
        ))
    }

    /// `1 - cgc_loss` of the current proposals.
    pub fn consistency_iou(&self) -> f64 {
        1.0 - cgc_gradient_params(self.hbb, self.obb_params()).value
    }

    pub fn loss(&self, lambda_cgc: f64) -> f64 {
        let gh = self.gt_hbb.params();
        let go = [self.gt.cx(), self.gt.cy(), self.gt.w(), self.gt.h()];
        let mut l = 0.0;
        for i in 0..4 {
            l += smooth_l1(self.hbb[i] - gh[i], SMOOTH_L1_BETA);
            l += smooth_l1(self.obb[i] - go[i], SMOOTH_L1_BETA);
        }
        l += smooth_l1_angle(self.theta, self.gt.theta());
        if lambda_cgc > 0.0 {
            l += lambda_cgc * cgc_gradient_params(self.hbb, self.obb_params()).value;
        }
        l
    }

    /// Gradient of [`Trial::loss`] as (hbb, obb, theta) components.
    pub fn gradient(&self, lambda_cgc: f64) -> ([f64; 4], [f64; 4], f64) {
        let gh = self.gt_hbb.params();
        let go = [self.gt.cx(), self.gt.cy(), self.gt.w(), self.gt.h()];
        let mut d_hbb = [0.0; 4];
        let mut d_obb = [0.0; 4];
        for i in 0..4 {
            d_hbb[i] = smooth_l1_grad(self.hbb[i] - gh[i], SMOOTH_L1_BETA);
            d_obb[i] = smooth_l1_grad(self.obb[i] - go[i], SMOOTH_L1_BETA);
        }
        let mut d_theta = smooth_l1_angle_grad(self.theta, self.gt.theta());
        if lambda_cgc > 0.0 {
            let g = cgc_gradient_params(self.hbb, self.obb_params());
            for i in 0..4 {
                d_hbb[i] += lambda_cgc * g.d_hbb[i];
                d_obb[i] += lambda_cgc * g.d_obb[i];
            }
            d_theta += lambda_cgc * g.d_obb[4];
        }
        (d_hbb, d_obb, d_theta)
    }

    /// One fixed-size gradient descent step.
    pub fn step(&mut self, lambda_cgc: f64, step_size: f64) {
        let (d_hbb, d_obb, d_theta) = self.gradient(lambda_cgc);
        for i in 0..4 {
            self.hbb[i] -= step_size * d_hbb[i];
            self.obb[i] -= step_size * d_obb[i];
        }
        for v in self.hbb[2..].iter_mut().chain(self.obb[2..].iter_mut()) {
            *v = v.max(MIN_SIDE);
        }
        self.theta -= step_size * d_theta;
    }

    /// `cfg.steps` steps with the configured weight and step size.
    pub fn descend(&mut self, cfg: &BenchConfig) {
        for _ in 0..cfg.steps {
            self.step(cfg.lambda_cgc, cfg.step_size);
        }
    }

    pub fn metrics(&self) -> Result<TrialMetrics> {
        let pair = self.pair()?;
        Ok(TrialMetrics {
            hbb_iou: hbb_iou(&pair.hbb, &self.gt_hbb),
            obb_iou: obb_iou(&pair.obb, &self.gt),
            consistency_iou: self.consistency_iou(),
            angle_error_deg: angle_difference(self.theta, self.gt.theta())
                .abs()
                .to_degrees(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrialMetrics {
    pub hbb_iou: f64,
    pub obb_iou: f64,
    pub consistency_iou: f64,
    pub angle_error_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TrialRecord {
    pub index: usize,
    pub seed: u64,
    pub initial: TrialMetrics,
    pub last: TrialMetrics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BenchSummary {
    pub mean_hbb_iou: f64,
    pub mean_obb_iou: f64,
    pub mean_consistency_iou: f64,
    pub mean_angle_error_deg: f64,
}

impl BenchSummary {
    fn of<'a>(metrics: impl Iterator<Item = &'a TrialMetrics>) -> Self {
        let mut s = Self {
            mean_hbb_iou: 0.0,
            mean_obb_iou: 0.0,
            mean_consistency_iou: 0.0,
            mean_angle_error_deg: 0.0,
        };
        let mut n = 0usize;
        for m in metrics {
            s.mean_hbb_iou += m.hbb_iou;
            s.mean_obb_iou += m.obb_iou;
            s.mean_consistency_iou += m.consistency_iou;
            s.mean_angle_error_deg += m.angle_error_deg;
            n += 1;
        }
        let n = n.max(1) as f64;
        s.mean_hbb_iou /= n;
        s.mean_obb_iou /= n;
        s.mean_consistency_iou /= n;
        s.mean_angle_error_deg /= n;
        s
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BenchReport {
    pub config: BenchConfig,
    pub trials: Vec<TrialRecord>,
    pub initial: BenchSummary,
    pub summary: BenchSummary,
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let trials = (0..cfg.trials)
        .map(|index| {
            let mut trial = Trial::sample(cfg, index)?;
            let initial = trial.metrics()?;
            trial.descend(cfg);
            Ok(TrialRecord {
                index,
                seed: trial_seed(cfg.seed, index),
                initial,
                last: trial.metrics()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BenchReport {
        config: *cfg,
        initial: BenchSummary::of(trials.iter().map(|t| &t.initial)),
        summary: BenchSummary::of(trials.iter().map(|t| &t.last)),
        trials,
    })
}

/// Paired comparison of a run with the consistency term against one without.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BenchComparison {
    pub cgc_on: BenchReport,
    pub cgc_off: BenchReport,
    /// Fraction of trials whose final consistency IoU is strictly higher with the term on.
    pub win_rate: f64,
}

/// Runs `cfg` as given (term on, `lambda_cgc` must be positive) and with
/// `lambda_cgc = 0`, on the same trial seeds.
pub fn run_comparison(cfg: &BenchConfig) -> Result<BenchComparison> {
    if !(cfg.lambda_cgc > 0.0) {
        return Err(Error::InvalidInput("comparison needs lambda_cgc > 0"));
    }
    let cgc_on = run_bench(cfg)?;
    let cgc_off = run_bench(&BenchConfig {
        lambda_cgc: 0.0,
        ..*cfg
    })?;
    let wins = cgc_on
        .trials
        .iter()
        .zip(&cgc_off.trials)
        .filter(|(a, b)| a.last.consistency_iou > b.last.consistency_iou)
        .count();
    let win_rate = wins as f64 / cgc_on.trials.len() as f64;
    Ok(BenchComparison {
        cgc_on,
        cgc_off,
        win_rate,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IoUHistogram {
    pub bin_edges: Vec<f64>,
    pub counts_hbb: Vec<u64>,
    pub counts_obb: Vec<u64>,
}

impl IoUHistogram {
    pub fn bins(&self) -> usize {
        self.bin_edges.len().saturating_sub(1)
    }

    /// Adds the counts of a histogram over the same edges.
    pub fn merge(&mut self, other: &IoUHistogram) -> Result<()> {
        if other.bin_edges != self.bin_edges {
            return Err(Error::InvalidInput("histograms have different bin edges"));
        }
        for (a, b) in self.counts_hbb.iter_mut().zip(&other.counts_hbb) {
            *a += b;
        }
        for (a, b) in self.counts_obb.iter_mut().zip(&other.counts_obb) {
            *a += b;
        }
        Ok(())
    }
}

/// 0.50, 0.55, ..., 1.00.
pub fn default_bin_edges() -> Vec<f64> {
    (0..=10).map(|i| (50 + 5 * i) as f64 / 100.0).collect()
}

fn bucket(edges: &[f64], v: f64) -> Option<usize> {
    if !(v >= edges[0]) {
        return None;
    }
    let last = edges.len() - 2;
    Some((0..last).find(|&i| v < edges[i + 1]).unwrap_or(last))
}

/// Counts each proposal's best IoU against the ground truths, separately for
/// the horizontal and oriented members.
pub fn proposal_histogram(
    proposals: &[ProposalPair],
    gts: &[GroundTruthObject],
    bin_edges: &[f64],
) -> Result<IoUHistogram> {
    if proposals.is_empty() {
        return Err(Error::InvalidInput("proposal list is empty"));
    }
    if bin_edges.len() < 2 || bin_edges.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput(
            "bin edges must be at least two strictly increasing values",
        ));
    }
    let bins = bin_edges.len() - 1;
    let mut counts_hbb = alloc::vec![0u64; bins];
    let mut counts_obb = alloc::vec![0u64; bins];
    for p in proposals {
        let best_h = gts
            .iter()
            .map(|g| hbb_iou(&p.hbb, g.hbb()))
            .fold(0.0, f64::max);
        let best_o = gts
            .iter()
            .map(|g| obb_iou(&p.obb, g.obb()))
            .fold(0.0, f64::max);
        if let Some(i) = bucket(bin_edges, best_h) {
            counts_hbb[i] += 1;
        }
        if let Some(i) = bucket(bin_edges, best_o) {
            counts_obb[i] += 1;
        }
    }
    Ok(IoUHistogram {
        bin_edges: bin_edges.to_vec(),
        counts_hbb,
        counts_obb,
    })
}
