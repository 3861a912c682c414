//! Minimum-area enclosing rectangle of a point set, used to turn annotated
//! quadrilaterals into canonical oriented boxes.

use alloc::vec::Vec;

use crate::geometry::{canonicalize, OrientedBox, Point, EPS};
use crate::math;
use crate::{Error, Result};

/// Convex hull, counter-clockwise, without collinear vertices (monotone chain).
pub fn convex_hull(points: &[Point]) -> Vec<Point> {
    let mut pts: Vec<Point> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup_by(|b, a| a.distance(*b) < EPS);
    if pts.len() < 3 {
        return pts;
    }

    let chain = |iter: &mut dyn Iterator<Item = &Point>| {
        let mut out: Vec<Point> = Vec::new();
        for &p in iter {
            while out.len() >= 2 {
                let (o, a) = (out[out.len() - 2], out[out.len() - 1]);
                if (a - o).cross(p - o) > 0.0 {
                    break;
                }
                out.pop();
            }
            out.push(p);
        }
        out.pop();
        out
    };
    let mut hull = chain(&mut pts.iter());
    hull.extend(chain(&mut pts.iter().rev()));
    hull
}

/// Minimum-area rectangle enclosing `points`, by rotating calipers over the
/// convex hull. One side of the optimum is flush with a hull edge.
pub fn min_area_rect(points: &[Point]) -> Result<OrientedBox> {
    if points.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
        return Err(Error::InvalidValue {
            name: "point",
            value: f64::NAN,
        });
    }
    let hull = convex_hull(points);
    let n = hull.len();
    if n < 3 {
        return Err(Error::DegenerateGeometry("points are collinear"));
    }

    let at = |i: usize| hull[i % n];
    let mut best: Option<(f64, [f64; 5])> = None;
    // far-right, top and far-left caliper indices; they only ever move forward
    let (mut right, mut top, mut left) = (0usize, 0usize, 0usize);

    for i in 0..n {
        let origin = at(i);
        let edge = at(i + 1) - origin;
        let len = edge.norm();
        if len < EPS {
            continue;
        }
        let u = edge * (1.0 / len);
        let v = Point::new(-u.y, u.x);
        let pu = |k: usize| (at(k) - origin).dot(u);
        let pv = |k: usize| (at(k) - origin).dot(v);

        if i == 0 {
            right = 1;
        }
        right = right.max(i + 1);
        while pu(right + 1) >= pu(right) && right < i + n {
            right += 1;
        }
        top = top.max(right);
        while pv(top + 1) >= pv(top) && top < i + n {
            top += 1;
        }
        left = left.max(top);
        while pu(left + 1) <= pu(left) && left < i + n {
            left += 1;
        }

        let (lo, hi, height) = (pu(left), pu(right), pv(top));
        let width = hi - lo;
        let rect_area = width * height;
        if best.is_none_or(|(a, _)| rect_area < a) {
            let center = origin + u * ((lo + hi) / 2.0) + v * (height / 2.0);
            best = Some((
                rect_area,
                [center.x, center.y, width, height, math::atan2(u.y, u.x)],
            ));
        }
    }

    let (_, [cx, cy, w, h, theta]) =
        best.ok_or(Error::DegenerateGeometry("no usable hull edge"))?;
    if !(w > EPS && h > EPS) {
        return Err(Error::DegenerateGeometry("enclosing rectangle has no area"));
    }
    canonicalize(cx, cy, w, h, theta)
}

/// Oriented box of an annotated quadrilateral (any vertex order).
pub fn quad_to_obb(quad: &[Point; 4]) -> Result<OrientedBox> {
    min_area_rect(quad)
}
