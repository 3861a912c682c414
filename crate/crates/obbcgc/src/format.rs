//! Text forms of numbers and boxes used on the command line and in reports.
//!
//! Numbers are rounded to 6 decimals with trailing zeros trimmed
//! (`6.196152`, `1`, `-0.5`). Inline boxes are comma-separated:
//! `cx,cy,w,h` for horizontal boxes and `cx,cy,w,h,theta_deg` for oriented ones.

use obbcgc_core::{HorizontalBox, OrientedBox};

use crate::{Error, Result};

pub fn fmt_num(v: f64) -> String {
    let mut s = format!("{v:.6}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    if s == "-0" {
        s = "0".to_owned();
    }
    s
}

pub fn fmt_hbb(b: &HorizontalBox) -> String {
    b.params().map(fmt_num).join(",")
}

pub fn fmt_obb(b: &OrientedBox) -> String {
    [b.cx(), b.cy(), b.w(), b.h(), b.theta_degrees()]
        .map(fmt_num)
        .join(",")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InlineBox {
    Horizontal(HorizontalBox),
    Oriented(OrientedBox),
}

fn numbers(name: &str, text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            t.trim().parse::<f64>().map_err(|_| {
                Error::argument(name, format!("`{}` is not a number in `{text}`", t.trim()))
            })
        })
        .collect()
}

/// Parses `cx,cy,w,h` or `cx,cy,w,h,theta_deg`.
pub fn parse_box(name: &str, text: &str) -> Result<InlineBox> {
    let v = numbers(name, text)?;
    let boxed = match *v.as_slice() {
        [cx, cy, w, h] => HorizontalBox::new(cx, cy, w, h).map(InlineBox::Horizontal),
        [cx, cy, w, h, t] => OrientedBox::from_degrees(cx, cy, w, h, t).map(InlineBox::Oriented),
        _ => {
            return Err(Error::argument(
                name,
                format!("expected 4 or 5 comma-separated numbers, got `{text}`"),
            ))
        }
    };
    boxed.map_err(|e| Error::argument(name, e.to_string()))
}

pub fn parse_obb(name: &str, text: &str) -> Result<OrientedBox> {
    match parse_box(name, text)? {
        InlineBox::Oriented(b) => Ok(b),
        InlineBox::Horizontal(_) => Err(Error::argument(name, "expected cx,cy,w,h,theta_deg")),
    }
}
