//! Consistency loss between a horizontal proposal and the enclosing rectangle
//! of an oriented proposal, plus the smooth-L1 angle loss used as baseline.
//!
//! The loss is `1 - IoU(hbb, o2mer(obb))`. Its gradient is computed in closed
//! form through the axis-aligned IoU and the enclosing-rectangle transform.
//!
//! Non-differentiable points use these conventions:
//! - IoU of 0 (disjoint or touching) or exactly 1: all-zero gradient.
//! - An hbb edge coinciding with the matching enclosing-rectangle edge: the
//!   `min`/`max` picks the hbb edge, i.e. the derivative is the one-sided
//!   limit in which the hbb edge is the inner one.
//! - `sin(theta) == 0`: `d|sin|/dtheta` uses the limit from `theta > 0`.

use crate::geometry::{hbb_iou, o2mer, HorizontalBox, OrientedBox};
use crate::math::{self, FRAC_PI_2, PI};

/// Horizontal proposal and oriented proposal regressed for the same object.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProposalPair {
    pub hbb: HorizontalBox,
    pub obb: OrientedBox,
}

impl ProposalPair {
    pub fn new(hbb: HorizontalBox, obb: OrientedBox) -> Self {
        Self { hbb, obb }
    }
}

/// Loss value with partial derivatives for every proposal parameter.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LossGradient {
    pub value: f64,
    /// d/d{cx, cy, w, h} of the horizontal proposal.
    pub d_hbb: [f64; 4],
    /// d/d{cx, cy, w, h, theta} of the oriented proposal.
    pub d_obb: [f64; 5],
}

pub fn cgc_loss(p: &ProposalPair) -> f64 {
    1.0 - hbb_iou(&p.hbb, &o2mer(&p.obb))
}

pub fn cgc_gradient(p: &ProposalPair) -> LossGradient {
    cgc_gradient_params(p.hbb.params(), p.obb.params())
}

/// [`cgc_gradient`] on raw parameters. `obb` may be non-canonical (any
/// angle, either side longer); sides must be positive.
pub fn cgc_gradient_params(hbb: [f64; 4], obb: [f64; 5]) -> LossGradient {
    let [ax, ay, aw, ah] = hbb;
    let [ox, oy, ow, oh, theta] = obb;

    let (sin, cos) = (math::sin(theta), math::cos(theta));
    let (abs_s, abs_c) = (sin.abs(), cos.abs());
    let sign_s = if sin < 0.0 { -1.0 } else { 1.0 };
    let sign_c = if cos < 0.0 { -1.0 } else { 1.0 };
    let (bw, bh) = (ow * abs_c + oh * abs_s, ow * abs_s + oh * abs_c);

    let x = Overlap1d::new(ax, aw, ox, bw);
    let y = Overlap1d::new(ay, ah, oy, bh);
    if x.len <= 0.0 || y.len <= 0.0 {
        return LossGradient {
            value: 1.0,
            ..Default::default()
        };
    }
    let inter = x.len * y.len;
    let union = aw * ah + bw * bh - inter;
    let iou = inter / union;
    if iou >= 1.0 {
        return LossGradient {
            value: 0.0,
            ..Default::default()
        };
    }

    let u2 = union * union;
    let dl_dinter = -(union + inter) / u2;
    let dl_darea = inter / u2;
    let gx = dl_dinter * y.len;
    let gy = dl_dinter * x.len;

    let d_hbb = [
        gx * x.d_a_center,
        gy * y.d_a_center,
        gx * x.d_a_size + dl_darea * ah,
        gy * y.d_a_size + dl_darea * aw,
    ];
    let d_bw = gx * x.d_b_size + dl_darea * bh;
    let d_bh = gy * y.d_b_size + dl_darea * bw;

    let d_abs_c = -sin * sign_c;
    let d_abs_s = cos * sign_s;
    let d_obb = [
        gx * x.d_b_center,
        gy * y.d_b_center,
        d_bw * abs_c + d_bh * abs_s,
        d_bw * abs_s + d_bh * abs_c,
        d_bw * (ow * d_abs_c + oh * d_abs_s) + d_bh * (ow * d_abs_s + oh * d_abs_c),
    ];

    LossGradient {
        value: 1.0 - iou,
        d_hbb,
        d_obb,
    }
}

/// Overlap of two intervals given by center and length, with the derivative
/// of the overlap length with respect to each center and length.
struct Overlap1d {
    len: f64,
    d_a_center: f64,
    d_a_size: f64,
    d_b_center: f64,
    d_b_size: f64,
}

impl Overlap1d {
    fn new(a_c: f64, a_len: f64, b_c: f64, b_len: f64) -> Self {
        let (a_lo, a_hi) = (a_c - a_len / 2.0, a_c + a_len / 2.0);
        let (b_lo, b_hi) = (b_c - b_len / 2.0, b_c + b_len / 2.0);
        let a_right = a_hi <= b_hi;
        let a_left = a_lo >= b_lo;
        let len = a_hi.min(b_hi) - a_lo.max(b_lo);
        let ind = |flag: bool| if flag { 1.0 } else { 0.0 };
        Self {
            len,
            d_a_center: ind(a_right) - ind(a_left),
            d_a_size: 0.5 * (ind(a_right) + ind(a_left)),
            d_b_center: ind(!a_right) - ind(!a_left),
            d_b_size: 0.5 * (ind(!a_right) + ind(!a_left)),
        }
    }
}

/// Transition point of the smooth-L1 losses.
pub const SMOOTH_L1_BETA: f64 = 1.0;

pub fn smooth_l1(x: f64, beta: f64) -> f64 {
    let a = x.abs();
    if a < beta {
        0.5 * a * a / beta
    } else {
        a - 0.5 * beta
    }
}

/// Derivative of [`smooth_l1`] with respect to `x`.
pub fn smooth_l1_grad(x: f64, beta: f64) -> f64 {
    if x.abs() < beta {
        x / beta
    } else if x > 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// `pred - gt` wrapped into `[-pi/2, pi/2)`, the period of a long-side angle.
pub fn angle_difference(pred: f64, gt: f64) -> f64 {
    math::wrap(pred - gt, -FRAC_PI_2, PI)
}

/// Smooth-L1 on the wrapped angular difference.
pub fn smooth_l1_angle(pred_theta: f64, gt_theta: f64) -> f64 {
    smooth_l1(angle_difference(pred_theta, gt_theta), SMOOTH_L1_BETA)
}

/// Derivative of [`smooth_l1_angle`] with respect to `pred_theta`.
pub fn smooth_l1_angle_grad(pred_theta: f64, gt_theta: f64) -> f64 {
    smooth_l1_grad(angle_difference(pred_theta, gt_theta), SMOOTH_L1_BETA)
}
