//! Box representations, convex clipping, areas and IoU.
//!
//! Angles are radians. An [`OrientedBox`] is always canonical: `w >= h`,
//! `theta` in `[-pi/2, pi/2)` measured from the x-axis to the long side, and
//! squares (sides within a relative 1e-9) are further normalized into
//! `[-pi/4, pi/4)` with both sides set to the longer one. Polygons are
//! counter-clockwise in a y-up frame, so shoelace areas are nonnegative.

use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use crate::math::{self, FRAC_PI_2, FRAC_PI_4, PI};
use crate::{Error, Result};

/// Point classification and vertex de-duplication tolerance.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn norm(self) -> f64 {
        math::hypot(self.x, self.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Rotates about the origin by `angle` radians (counter-clockwise).
    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = (math::sin(angle), math::cos(angle));
        Point::new(self.x * c - self.y * s, self.x * s + self.y * c)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        Point::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        Point::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, rhs: f64) -> Point {
        Point::new(self.x * rhs, self.y * rhs)
    }
}

fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidValue { name, value })
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<()> {
    check_finite(name, value)?;
    if value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidDimension { name, value })
    }
}

/// Axis-aligned box given by center and extents.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(try_from = "HorizontalBoxRepr", into = "HorizontalBoxRepr")
)]
pub struct HorizontalBox {
    cx: f64,
    cy: f64,
    w: f64,
    h: f64,
}

impl HorizontalBox {
    pub fn new(cx: f64, cy: f64, w: f64, h: f64) -> Result<Self> {
        check_finite("cx", cx)?;
        check_finite("cy", cy)?;
        check_positive("w", w)?;
        check_positive("h", h)?;
        Ok(Self { cx, cy, w, h })
    }

    /// Builds the box spanning `[x0, x1] x [y0, y1]`.
    pub fn from_extents(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        Self::new((x0 + x1) / 2.0, (y0 + y1) / 2.0, x1 - x0, y1 - y0)
    }

    pub fn cx(&self) -> f64 {
        self.cx
    }

    pub fn cy(&self) -> f64 {
        self.cy
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn center(&self) -> Point {
        Point::new(self.cx, self.cy)
    }

    pub fn params(&self) -> [f64; 4] {
        [self.cx, self.cy, self.w, self.h]
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn min_x(&self) -> f64 {
        self.cx - self.w / 2.0
    }

    pub fn max_x(&self) -> f64 {
        self.cx + self.w / 2.0
    }

    pub fn min_y(&self) -> f64 {
        self.cy - self.h / 2.0
    }

    pub fn max_y(&self) -> f64 {
        self.cy + self.h / 2.0
    }

    pub fn corners(&self) -> ConvexPolygon {
        let (x0, x1, y0, y1) = (self.min_x(), self.max_x(), self.min_y(), self.max_y());
        ConvexPolygon {
            vertices: alloc::vec![
                Point::new(x0, y0),
                Point::new(x1, y0),
                Point::new(x1, y1),
                Point::new(x0, y1),
            ],
        }
    }

    /// Uniform scale about the origin followed by a translation.
    pub fn similarity(&self, scale: f64, shift: Point) -> Result<Self> {
        Self::new(
            self.cx * scale + shift.x,
            self.cy * scale + shift.y,
            self.w * scale,
            self.h * scale,
        )
    }
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct HorizontalBoxRepr {
    cx: f64,
    cy: f64,
    w: f64,
    h: f64,
}

#[cfg(feature = "serde")]
impl TryFrom<HorizontalBoxRepr> for HorizontalBox {
    type Error = Error;
    fn try_from(r: HorizontalBoxRepr) -> Result<Self> {
        Self::new(r.cx, r.cy, r.w, r.h)
    }
}

#[cfg(feature = "serde")]
impl From<HorizontalBox> for HorizontalBoxRepr {
    fn from(b: HorizontalBox) -> Self {
        Self {
            cx: b.cx,
            cy: b.cy,
            w: b.w,
            h: b.h,
        }
    }
}

/// Rotated rectangle in canonical long-side form.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(
    feature = "serde",
    derive(serde::Serialize, serde::Deserialize),
    serde(try_from = "OrientedBoxRepr", into = "OrientedBoxRepr")
)]
pub struct OrientedBox {
    cx: f64,
    cy: f64,
    w: f64,
    h: f64,
    theta: f64,
}

impl OrientedBox {
    /// Same as [`canonicalize`].
    pub fn new(cx: f64, cy: f64, w: f64, h: f64, theta: f64) -> Result<Self> {
        canonicalize(cx, cy, w, h, theta)
    }

    pub fn from_degrees(cx: f64, cy: f64, w: f64, h: f64, theta_deg: f64) -> Result<Self> {
        canonicalize(cx, cy, w, h, theta_deg.to_radians())
    }

    pub fn cx(&self) -> f64 {
        self.cx
    }

    pub fn cy(&self) -> f64 {
        self.cy
    }

    /// Long side.
    pub fn w(&self) -> f64 {
        self.w
    }

    /// Short side.
    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn theta_degrees(&self) -> f64 {
        self.theta.to_degrees()
    }

    pub fn center(&self) -> Point {
        Point::new(self.cx, self.cy)
    }

    pub fn params(&self) -> [f64; 5] {
        [self.cx, self.cy, self.w, self.h, self.theta]
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    pub fn corners(&self) -> ConvexPolygon {
        corners(self)
    }

    /// Uniform scale about the origin, rotation about the origin, then translation.
    pub fn similarity(&self, scale: f64, rotation: f64, shift: Point) -> Result<Self> {
        let c = self.center().rotate(rotation) * scale + shift;
        canonicalize(
            c.x,
            c.y,
            self.w * scale,
            self.h * scale,
            self.theta + rotation,
        )
    }
}

#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
struct OrientedBoxRepr {
    cx: f64,
    cy: f64,
    w: f64,
    h: f64,
    theta: f64,
}

#[cfg(feature = "serde")]
impl TryFrom<OrientedBoxRepr> for OrientedBox {
    type Error = Error;
    fn try_from(r: OrientedBoxRepr) -> Result<Self> {
        canonicalize(r.cx, r.cy, r.w, r.h, r.theta)
    }
}

#[cfg(feature = "serde")]
impl From<OrientedBox> for OrientedBoxRepr {
    fn from(b: OrientedBox) -> Self {
        Self {
            cx: b.cx,
            cy: b.cy,
            w: b.w,
            h: b.h,
            theta: b.theta,
        }
    }
}

/// Brings an arbitrary rectangle `(cx, cy, w, h, theta)` into canonical form
/// without changing the region it covers.
pub fn canonicalize(cx: f64, cy: f64, w: f64, h: f64, theta: f64) -> Result<OrientedBox> {
    check_finite("cx", cx)?;
    check_finite("cy", cy)?;
    check_finite("theta", theta)?;
    check_positive("w", w)?;
    check_positive("h", h)?;

    let (w, h, theta) = if w < h {
        (h, w, theta + FRAC_PI_2)
    } else {
        (w, h, theta)
    };
    // sides equal up to rounding (e.g. a fitted square) are snapped to a square
    let (h, theta) = if w - h <= EPS * w {
        (w, math::wrap(theta, -FRAC_PI_4, FRAC_PI_2))
    } else {
        (h, math::wrap(theta, -FRAC_PI_2, PI))
    };
    Ok(OrientedBox {
        cx,
        cy,
        w,
        h,
        theta,
    })
}

/// The four corners, counter-clockwise, starting at the `(+w/2, +h/2)` local corner.
pub fn corners(b: &OrientedBox) -> ConvexPolygon {
    let (s, c) = (math::sin(b.theta), math::cos(b.theta));
    let (hw, hh) = (b.w / 2.0, b.h / 2.0);
    let local = [(hw, hh), (-hw, hh), (-hw, -hh), (hw, -hh)];
    ConvexPolygon {
        vertices: local
            .iter()
            .map(|&(x, y)| Point::new(b.cx + x * c - y * s, b.cy + x * s + y * c))
            .collect(),
    }
}

/// Axis-aligned minimum enclosing rectangle of an oriented box.
pub fn o2mer(b: &OrientedBox) -> HorizontalBox {
    let (s, c) = (math::sin(b.theta).abs(), math::cos(b.theta).abs());
    HorizontalBox {
        cx: b.cx,
        cy: b.cy,
        w: b.w * c + b.h * s,
        h: b.w * s + b.h * c,
    }
}

/// Overlap width and height of two axis-aligned boxes, each clamped at zero.
pub(crate) fn hbb_overlap(a: &HorizontalBox, b: &HorizontalBox) -> (f64, f64) {
    let ix = a.max_x().min(b.max_x()) - a.min_x().max(b.min_x());
    let iy = a.max_y().min(b.max_y()) - a.min_y().max(b.min_y());
    (ix.max(0.0), iy.max(0.0))
}

pub fn hbb_iou(a: &HorizontalBox, b: &HorizontalBox) -> f64 {
    let (ix, iy) = hbb_overlap(a, b);
    let inter = ix * iy;
    if inter <= 0.0 {
        return 0.0;
    }
    (inter / (a.area() + b.area() - inter)).clamp(0.0, 1.0)
}

/// Rotated IoU through exact convex clipping.
pub fn obb_iou(a: &OrientedBox, b: &OrientedBox) -> f64 {
    let (pa, pb) = (corners(a), corners(b));
    let inter = area(&clip(&pa, &pb));
    if inter <= 0.0 {
        return 0.0;
    }
    // shoelace areas rather than w*h so that identical boxes give exactly 1
    let union = area(&pa) + area(&pb) - inter;
    (inter / union).clamp(0.0, 1.0)
}

/// Convex polygon with counter-clockwise vertices. Empty means no region.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Accepts either orientation and stores counter-clockwise. Rejects
    /// polygons with 1 or 2 vertices and non-convex vertex chains.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        for p in &vertices {
            check_finite("x", p.x)?;
            check_finite("y", p.y)?;
        }
        match vertices.len() {
            0 => return Ok(Self::empty()),
            1 | 2 => {
                return Err(Error::DegenerateGeometry(
                    "polygon needs at least 3 vertices",
                ))
            }
            _ => {}
        }
        if signed_area(&vertices) < 0.0 {
            vertices.reverse();
        }
        let poly = Self { vertices };
        if !poly.is_convex() {
            return Err(Error::DegenerateGeometry("polygon is not convex"));
        }
        Ok(poly)
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn area(&self) -> f64 {
        area(self)
    }

    /// Every turn is a left turn up to [`EPS`] (collinear vertices allowed).
    pub fn is_convex(&self) -> bool {
        let v = &self.vertices;
        let n = v.len();
        if n == 0 {
            return true;
        }
        if n < 3 {
            return false;
        }
        (0..n).all(|i| {
            let (a, b, c) = (v[i], v[(i + 1) % n], v[(i + 2) % n]);
            let (e1, e2) = (b - a, c - b);
            let scale = e1.norm() * e2.norm();
            scale == 0.0 || e1.cross(e2) >= -EPS * scale.max(1.0)
        })
    }

    pub fn is_ccw(&self) -> bool {
        self.is_empty() || signed_area(&self.vertices) >= 0.0
    }
}

fn signed_area(v: &[Point]) -> f64 {
    let n = v.len();
    (0..n).map(|i| v[i].cross(v[(i + 1) % n])).sum::<f64>() / 2.0
}

/// Shoelace area; zero for the empty polygon.
pub fn area(p: &ConvexPolygon) -> f64 {
    if p.len() < 3 {
        return 0.0;
    }
    signed_area(&p.vertices).max(0.0)
}

/// Intersection of two convex polygons by successive half-plane clipping of
/// `subject` against each edge of `clip_poly`.
pub fn clip(subject: &ConvexPolygon, clip_poly: &ConvexPolygon) -> ConvexPolygon {
    if subject.len() < 3 || clip_poly.len() < 3 {
        return ConvexPolygon::empty();
    }
    let mut output = subject.vertices.clone();
    let mut input = Vec::with_capacity(output.len() + clip_poly.len());
    let edges = clip_poly.vertices.len();

    for i in 0..edges {
        if output.is_empty() {
            break;
        }
        let a = clip_poly.vertices[i];
        let edge = clip_poly.vertices[(i + 1) % edges] - a;
        let len = edge.norm();
        if len == 0.0 {
            continue;
        }
        // signed distance to the edge line, positive on the inner (left) side
        let dist = |p: Point| edge.cross(p - a) / len;

        core::mem::swap(&mut input, &mut output);
        output.clear();
        let n = input.len();
        for j in 0..n {
            let prev = input[(j + n - 1) % n];
            let cur = input[j];
            let (dp, dc) = (dist(prev), dist(cur));
            let (prev_in, cur_in) = (dp >= -EPS, dc >= -EPS);
            if cur_in {
                if !prev_in {
                    output.push(crossing(prev, cur, dp, dc));
                }
                output.push(cur);
            } else if prev_in {
                output.push(crossing(prev, cur, dp, dc));
            }
        }
    }

    let vertices = dedup_ring(output);
    if vertices.len() < 3 || signed_area(&vertices) <= 0.0 {
        return ConvexPolygon::empty();
    }
    ConvexPolygon { vertices }
}

fn crossing(p: Point, q: Point, dp: f64, dq: f64) -> Point {
    let t = (dp / (dp - dq)).clamp(0.0, 1.0);
    p + (q - p) * t
}

fn dedup_ring(mut v: Vec<Point>) -> Vec<Point> {
    v.dedup_by(|b, a| a.distance(*b) < EPS);
    while v.len() > 1 && v[0].distance(v[v.len() - 1]) < EPS {
        v.pop();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    fn unit_square(x: f64, y: f64) -> ConvexPolygon {
        HorizontalBox::from_extents(x, y, x + 1.0, y + 1.0)
            .unwrap()
            .corners()
    }

    fn same_point_set(a: &[Point], b: &[Point], tol: f64) -> bool {
        a.len() == b.len() && a.iter().all(|p| b.iter().any(|q| p.distance(*q) <= tol))
    }

    #[test]
    fn canonicalize_swaps_sides() {
        let b = OrientedBox::from_degrees(0.0, 0.0, 2.0, 4.0, 0.0).unwrap();
        assert_eq!((b.w(), b.h()), (4.0, 2.0));
        assert!(close(b.theta_degrees(), -90.0, 1e-12));
    }

    #[test]
    fn canonicalize_wraps_angle() {
        let b = OrientedBox::from_degrees(0.0, 0.0, 4.0, 2.0, 100.0).unwrap();
        assert!(close(b.theta_degrees(), -80.0, 1e-9));
        let b = OrientedBox::from_degrees(0.0, 0.0, 4.0, 2.0, 90.0).unwrap();
        assert!(close(b.theta_degrees(), -90.0, 1e-12));
        let b = OrientedBox::from_degrees(0.0, 0.0, 4.0, 2.0, -90.0).unwrap();
        assert!(close(b.theta_degrees(), -90.0, 1e-12));
    }

    #[test]
    fn canonicalize_square() {
        let b = OrientedBox::from_degrees(1.0, 1.0, 2.0, 2.0, 60.0).unwrap();
        assert_eq!((b.cx(), b.cy(), b.w(), b.h()), (1.0, 1.0, 2.0, 2.0));
        assert!(close(b.theta_degrees(), -30.0, 1e-9));
        let b = OrientedBox::from_degrees(0.0, 0.0, 2.0, 2.0, 45.0).unwrap();
        assert!(close(b.theta_degrees(), -45.0, 1e-9));
        let b = OrientedBox::from_degrees(0.0, 0.0, 5.000000000000001, 5.0, 53.0).unwrap();
        assert_eq!((b.w(), b.h()), (5.000000000000001, 5.000000000000001));
        assert!(close(b.theta_degrees(), -37.0, 1e-9));
    }

    #[test]
    fn canonicalize_rejects_bad_input() {
        assert!(matches!(
            canonicalize(0.0, 0.0, 0.0, 1.0, 0.0),
            Err(Error::InvalidDimension { name: "w", .. })
        ));
        assert!(matches!(
            canonicalize(0.0, 0.0, 1.0, -1.0, 0.0),
            Err(Error::InvalidDimension { name: "h", .. })
        ));
        assert!(matches!(
            canonicalize(f64::NAN, 0.0, 1.0, 1.0, 0.0),
            Err(Error::InvalidValue { .. })
        ));
        assert!(matches!(
            canonicalize(0.0, 0.0, 1.0, 1.0, f64::INFINITY),
            Err(Error::InvalidValue { .. })
        ));
        assert!(HorizontalBox::new(0.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn corners_axis_aligned_and_quarter_turn() {
        let b = OrientedBox::new(0.0, 0.0, 4.0, 2.0, 0.0).unwrap();
        let expect =
            [(2.0, 1.0), (-2.0, 1.0), (-2.0, -1.0), (2.0, -1.0)].map(|(x, y)| Point::new(x, y));
        assert!(same_point_set(corners(&b).vertices(), &expect, 1e-12));

        let b = OrientedBox::from_degrees(0.0, 0.0, 4.0, 2.0, -90.0).unwrap();
        let expect =
            [(1.0, 2.0), (-1.0, 2.0), (-1.0, -2.0), (1.0, -2.0)].map(|(x, y)| Point::new(x, y));
        assert!(same_point_set(corners(&b).vertices(), &expect, 1e-12));
        assert!(close(area(&corners(&b)), 8.0, 1e-9));
        assert!(corners(&b).is_ccw());
    }

    #[test]
    fn corners_match_rotation_matrix() {
        // independent rotation-matrix oracle applied to (+-3, +-1)
        let t = 30f64.to_radians();
        let (s, c) = (t.sin(), t.cos());
        let oracle: Vec<Point> = [(3.0, 1.0), (-3.0, 1.0), (-3.0, -1.0), (3.0, -1.0)]
            .iter()
            .map(|&(x, y)| Point::new(c * x - s * y, s * x + c * y))
            .collect();
        let b = OrientedBox::from_degrees(0.0, 0.0, 6.0, 2.0, 30.0).unwrap();
        let got = corners(&b);
        for (p, q) in got.vertices().iter().zip(&oracle) {
            assert!(p.distance(*q) < 1e-9, "{p:?} vs {q:?}");
        }
        assert!(close(area(&got), 12.0, 1e-9));
    }

    #[test]
    fn o2mer_examples() {
        let m = o2mer(&OrientedBox::new(0.0, 0.0, 4.0, 2.0, 0.0).unwrap());
        assert_eq!(m.params(), [0.0, 0.0, 4.0, 2.0]);

        let m = o2mer(&OrientedBox::from_degrees(0.0, 0.0, 2.0, 2.0, 45.0).unwrap());
        assert!(close(m.w(), 2.0 * 2f64.sqrt(), 1e-12));
        assert!(close(m.h(), 2.0 * 2f64.sqrt(), 1e-12));

        let m = o2mer(&OrientedBox::from_degrees(1.0, 2.0, 6.0, 2.0, 30.0).unwrap());
        let r3 = 3f64.sqrt();
        assert_eq!((m.cx(), m.cy()), (1.0, 2.0));
        assert!(close(m.w(), 3.0 * r3 + 1.0, 1e-12));
        assert!(close(m.h(), 3.0 + r3, 1e-12));
    }

    #[test]
    fn hbb_iou_examples() {
        let a = HorizontalBox::new(0.0, 0.0, 2.0, 2.0).unwrap();
        let b = HorizontalBox::new(1.0, 0.0, 2.0, 2.0).unwrap();
        let far = HorizontalBox::new(10.0, 0.0, 2.0, 2.0).unwrap();
        assert_eq!(hbb_iou(&a, &a), 1.0);
        assert_eq!(hbb_iou(&a, &far), 0.0);
        assert!(close(hbb_iou(&a, &b), 1.0 / 3.0, 1e-15));
        // edge contact has no area
        let touch = HorizontalBox::new(2.0, 0.0, 2.0, 2.0).unwrap();
        assert_eq!(hbb_iou(&a, &touch), 0.0);
    }

    #[test]
    fn clip_examples() {
        let sq = unit_square(0.0, 0.0);
        let same = clip(&sq, &sq);
        assert_eq!(area(&same), 1.0);
        assert!(clip(&sq, &unit_square(3.0, 3.0)).is_empty());
        let quarter = clip(&sq, &unit_square(0.5, 0.5));
        assert!(close(area(&quarter), 0.25, 1e-15));
        assert!(quarter.is_convex() && quarter.is_ccw());
        // shared edge only
        assert_eq!(area(&clip(&sq, &unit_square(1.0, 0.0))), 0.0);
        assert!(clip(&ConvexPolygon::empty(), &sq).is_empty());
    }

    #[test]
    fn clip_merges_near_duplicates() {
        let sq = unit_square(0.0, 0.0);
        // shares the corner (1, 1) with the subject
        let tri = ConvexPolygon::new(alloc::vec![
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        let out = clip(&sq, &tri);
        assert_eq!(out.len(), 3);
        assert!(close(area(&out), 0.5, 1e-15));
        let v = out.vertices();
        for i in 0..v.len() {
            assert!(v[i].distance(v[(i + 1) % v.len()]) >= EPS);
        }
    }

    #[test]
    fn polygon_construction() {
        let tri = ConvexPolygon::new(alloc::vec![
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 0.0),
        ])
        .unwrap();
        assert!(tri.is_ccw());
        assert_eq!(area(&tri), 0.5);
        assert!(
            ConvexPolygon::new(alloc::vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)]).is_err()
        );
        let dart = alloc::vec![
            Point::new(0.0, 0.0),
            Point::new(2.0, 1.0),
            Point::new(0.0, 2.0),
            Point::new(1.0, 1.0),
        ];
        assert!(ConvexPolygon::new(dart).is_err());
        assert_eq!(area(&ConvexPolygon::empty()), 0.0);
    }

    #[test]
    fn obb_iou_examples() {
        let a = OrientedBox::new(0.0, 0.0, 4.0, 2.0, 0.0).unwrap();
        let b = OrientedBox::from_degrees(0.0, 0.0, 4.0, 2.0, -90.0).unwrap();
        assert_eq!(obb_iou(&a, &a), 1.0);
        assert!(close(obb_iou(&a, &b), 1.0 / 3.0, 1e-12));
        let far = OrientedBox::new(100.0, 0.0, 4.0, 2.0, 0.3).unwrap();
        assert_eq!(obb_iou(&a, &far), 0.0);
        let tilted = OrientedBox::from_degrees(3.0, -2.0, 7.0, 1.5, 33.0).unwrap();
        assert_eq!(obb_iou(&tilted, &tilted), 1.0);
    }
}
