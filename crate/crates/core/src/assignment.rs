//! Anchor label assignment.
//!
//! [`assign_ocp`] scores every candidate anchor against a ground truth by the
//! mean of its IoU with the horizontal ground truth (`d_gh`) and the fraction of
//! the oriented ground truth it covers (`d_go`). Only anchors whose `d_gh`
//! clears `candidate_iou` are candidates; a candidate is positive when that mean
//! (`t_g`) exceeds `threshold`.
//!
//! Labeling rules beyond the per-object loop:
//! - an anchor positive for several objects keeps the one with the highest
//!   `t_g`, ties going to the lower object id;
//! - negatives are anchors whose best `d_gh` over all objects is below
//!   `candidate_iou`; everything else that is not positive is ignored
//!   (including anchors sitting exactly on `candidate_iou`);
//! - with `force_best_per_gt`, an object left without positives promotes its
//!   best-`t_g` candidate that is not already positive.
//!
//! [`assign_classic`] is the IoU-threshold rule with per-object argmax
//! anchors, using `d_gh` alone.

use alloc::string::String;
use alloc::vec::Vec;

use crate::geometry::{area, clip, corners, hbb_iou, o2mer, HorizontalBox, OrientedBox};
use crate::{Error, Result};

/// Object with its oriented box and the horizontal box enclosing it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroundTruthObject {
    pub id: u64,
    pub category: String,
    obb: OrientedBox,
    hbb: HorizontalBox,
}

/// Allowed per-field mismatch between a supplied horizontal box and the
/// enclosing rectangle of the oriented box.
pub const GT_HBB_TOLERANCE: f64 = 1e-6;

impl GroundTruthObject {
    /// Horizontal box derived as the enclosing rectangle of `obb`.
    pub fn new(id: u64, category: impl Into<String>, obb: OrientedBox) -> Self {
        Self {
            id,
            category: category.into(),
            hbb: o2mer(&obb),
            obb,
        }
    }

    pub fn with_hbb(
        id: u64,
        category: impl Into<String>,
        hbb: HorizontalBox,
        obb: OrientedBox,
    ) -> Result<Self> {
        let mer = o2mer(&obb);
        let mismatch = hbb
            .params()
            .iter()
            .zip(mer.params())
            .any(|(a, b)| (a - b).abs() > GT_HBB_TOLERANCE);
        if mismatch {
            return Err(Error::InvalidInput(
                "horizontal ground truth must enclose the oriented ground truth",
            ));
        }
        Ok(Self {
            id,
            category: category.into(),
            hbb,
            obb,
        })
    }

    pub fn obb(&self) -> &OrientedBox {
        &self.obb
    }

    pub fn hbb(&self) -> &HorizontalBox {
        &self.hbb
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(default)
)]
pub struct AssignmentConfig {
    pub candidate_iou: f64,
    pub threshold: f64,
    pub force_best_per_gt: bool,
}

impl Default for AssignmentConfig {
    fn default() -> Self {
        Self {
            candidate_iou: 0.3,
            threshold: 0.7,
            force_best_per_gt: true,
        }
    }
}

impl AssignmentConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = 0.0 <= self.candidate_iou
            && self.candidate_iou < self.threshold
            && self.threshold <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(
                "require 0 <= candidate_iou < threshold <= 1",
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(rename_all = "lowercase")
)]
pub enum Label {
    Positive,
    Negative,
    Ignored,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::Positive => "positive",
            Label::Negative => "negative",
            Label::Ignored => "ignored",
        }
    }
}

impl core::fmt::Display for Label {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome for one anchor.
///
/// Positives carry the matched object and its scores. Ignored candidates carry
/// the scores of their best candidate object but no match; negatives only the
/// best `d_gh`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnchorAssignment {
    pub anchor_index: usize,
    pub label: Label,
    pub gt_id: Option<u64>,
    pub d_gh: Option<f64>,
    pub d_go: Option<f64>,
    pub t_g: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AssignmentResult {
    pub records: Vec<AnchorAssignment>,
}

impl AssignmentResult {
    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.records.iter().map(|r| r.label)
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels().filter(|l| *l == label).count()
    }

    pub fn positives(&self) -> impl Iterator<Item = &AnchorAssignment> + '_ {
        self.records.iter().filter(|r| r.label == Label::Positive)
    }
}

/// IoU between a candidate anchor and the horizontal ground truth.
pub fn d_gh(candidate: &HorizontalBox, gt: &GroundTruthObject) -> f64 {
    hbb_iou(candidate, &gt.hbb)
}

/// Fraction of the oriented ground truth covered by the candidate.
pub fn d_go(candidate: &HorizontalBox, gt: &GroundTruthObject) -> f64 {
    let target = corners(&gt.obb);
    let covered = area(&clip(&target, &candidate.corners()));
    // shoelace area of the same corners, so full coverage is exactly 1
    (covered / area(&target)).clamp(0.0, 1.0)
}

/// Scores of one (anchor, object) pair.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PairScore {
    pub d_gh: f64,
    pub d_go: f64,
}

impl PairScore {
    pub fn t_g(&self) -> f64 {
        (self.d_gh + self.d_go) / 2.0
    }
}

/// Scores for every anchor (rows) against every object (columns).
pub fn score_matrix(anchors: &[HorizontalBox], gts: &[GroundTruthObject]) -> Vec<Vec<PairScore>> {
    anchors
        .iter()
        .map(|a| {
            gts.iter()
                .map(|g| {
                    let gh = d_gh(a, g);
                    // the oriented box lies inside the horizontal one
                    let go = if gh > 0.0 { d_go(a, g) } else { 0.0 };
                    PairScore { d_gh: gh, d_go: go }
                })
                .collect()
        })
        .collect()
}

pub fn assign_ocp(
    anchors: &[HorizontalBox],
    gts: &[GroundTruthObject],
    cfg: &AssignmentConfig,
) -> Result<AssignmentResult> {
    if anchors.is_empty() {
        return Err(Error::InvalidInput("anchor list is empty"));
    }
    let ids: Vec<u64> = gts.iter().map(|g| g.id).collect();
    assign_ocp_scores(&score_matrix(anchors, gts), &ids, cfg)
}

fn record(
    anchor_index: usize,
    label: Label,
    gt_id: Option<u64>,
    s: Option<PairScore>,
) -> AnchorAssignment {
    AnchorAssignment {
        anchor_index,
        label,
        gt_id,
        d_gh: s.map(|s| s.d_gh),
        d_go: s.map(|s| s.d_go),
        t_g: s.map(|s| s.t_g()),
    }
}

/// Picks the better of two (object column, key) pairs: larger key wins,
/// ties go to the lower object id.
fn better(ids: &[u64], cur: Option<(usize, f64)>, g: usize, key: f64) -> Option<(usize, f64)> {
    match cur {
        Some((c, k)) if k > key || (k == key && ids[c] <= ids[g]) => Some((c, k)),
        _ => Some((g, key)),
    }
}

/// Oriented-center-prior assignment from precomputed scores.
/// `scores[anchor][j]` belongs to the object with id `gt_ids[j]`.
pub fn assign_ocp_scores(
    scores: &[Vec<PairScore>],
    gt_ids: &[u64],
    cfg: &AssignmentConfig,
) -> Result<AssignmentResult> {
    cfg.validate()?;
    if scores.is_empty() {
        return Err(Error::InvalidInput("anchor list is empty"));
    }
    if scores.iter().any(|row| row.len() != gt_ids.len()) {
        return Err(Error::InvalidInput(
            "score matrix width must match the object count",
        ));
    }

    let mut records = Vec::with_capacity(scores.len());
    for (i, row) in scores.iter().enumerate() {
        let mut best_pos = None;
        let mut best_cand = None;
        let mut max_gh: Option<f64> = None;
        for (g, s) in row.iter().enumerate() {
            max_gh = Some(max_gh.map_or(s.d_gh, |m| m.max(s.d_gh)));
            if s.d_gh > cfg.candidate_iou {
                best_cand = better(gt_ids, best_cand, g, s.t_g());
                if s.t_g() > cfg.threshold {
                    best_pos = better(gt_ids, best_pos, g, s.t_g());
                }
            }
        }
        let rec = if let Some((g, _)) = best_pos {
            record(i, Label::Positive, Some(gt_ids[g]), Some(row[g]))
        } else if let Some((g, _)) = best_cand {
            record(i, Label::Ignored, None, Some(row[g]))
        } else {
            let label = match max_gh {
                Some(m) if m >= cfg.candidate_iou => Label::Ignored,
                _ => Label::Negative,
            };
            AnchorAssignment {
                d_gh: max_gh,
                ..record(i, label, None, None)
            }
        };
        records.push(rec);
    }

    if cfg.force_best_per_gt {
        let mut order: Vec<usize> = (0..gt_ids.len()).collect();
        order.sort_by_key(|&g| gt_ids[g]);
        for g in order {
            let id = gt_ids[g];
            if records
                .iter()
                .any(|r| r.label == Label::Positive && r.gt_id == Some(id))
            {
                continue;
            }
            let mut pick: Option<(usize, f64)> = None;
            for (i, row) in scores.iter().enumerate() {
                let s = row[g];
                if s.d_gh > cfg.candidate_iou
                    && records[i].label != Label::Positive
                    && pick.is_none_or(|(_, t)| s.t_g() > t)
                {
                    pick = Some((i, s.t_g()));
                }
            }
            if let Some((i, _)) = pick {
                records[i] = record(i, Label::Positive, Some(id), Some(scores[i][g]));
            }
        }
    }

    Ok(AssignmentResult { records })
}

pub fn assign_classic(
    anchors: &[HorizontalBox],
    gts: &[GroundTruthObject],
    pos_iou: f64,
    neg_iou: f64,
) -> Result<AssignmentResult> {
    if anchors.is_empty() {
        return Err(Error::InvalidInput("anchor list is empty"));
    }
    let ids: Vec<u64> = gts.iter().map(|g| g.id).collect();
    assign_classic_scores(&score_matrix(anchors, gts), &ids, pos_iou, neg_iou)
}

/// Classic IoU-threshold assignment from precomputed scores (`d_go` is only
/// reported, never used for the decision).
pub fn assign_classic_scores(
    scores: &[Vec<PairScore>],
    gt_ids: &[u64],
    pos_iou: f64,
    neg_iou: f64,
) -> Result<AssignmentResult> {
    if !(0.0 <= neg_iou && neg_iou <= pos_iou && pos_iou <= 1.0) {
        return Err(Error::InvalidInput("require 0 <= neg_iou <= pos_iou <= 1"));
    }
    if scores.is_empty() {
        return Err(Error::InvalidInput("anchor list is empty"));
    }
    if scores.iter().any(|row| row.len() != gt_ids.len()) {
        return Err(Error::InvalidInput(
            "score matrix width must match the object count",
        ));
    }

    let mut records: Vec<AnchorAssignment> = scores
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let best = row
                .iter()
                .enumerate()
                .fold(None, |acc, (g, s)| better(gt_ids, acc, g, s.d_gh));
            match best {
                Some((g, m)) if m >= pos_iou => {
                    record(i, Label::Positive, Some(gt_ids[g]), Some(row[g]))
                }
                Some((_, m)) => {
                    let label = if m < neg_iou {
                        Label::Negative
                    } else {
                        Label::Ignored
                    };
                    AnchorAssignment {
                        d_gh: Some(m),
                        ..record(i, label, None, None)
                    }
                }
                None => record(i, Label::Negative, None, None),
            }
        })
        .collect();

    // each object keeps its highest-IoU anchor
    for (g, &id) in gt_ids.iter().enumerate() {
        let mut pick: Option<(usize, f64)> = None;
        for (i, row) in scores.iter().enumerate() {
            if row[g].d_gh > 0.0 && pick.is_none_or(|(_, m)| row[g].d_gh > m) {
                pick = Some((i, row[g].d_gh));
            }
        }
        if let Some((i, _)) = pick {
            if records[i].label != Label::Positive {
                records[i] = record(i, Label::Positive, Some(id), Some(scores[i][g]));
            }
        }
    }

    Ok(AssignmentResult { records })
}
