//! DOTA v1.0 annotation text.
//!
//! ```text
//! imagesource:GoogleEarth
//! gsd:0.146343590398
//! x1 y1 x2 y2 x3 y3 x4 y4 category difficult
//! ```
//!
//! Metadata lines (`imagesource:` / `gsd:`) may only precede the first object.
//! Every object line has exactly ten whitespace-separated tokens; `difficult`
//! is `0` or `1`. Blank lines are skipped.

use std::path::Path;

use obbcgc_core::assignment::GroundTruthObject;
use obbcgc_core::fit::quad_to_obb;
use obbcgc_core::geometry::{canonicalize, o2mer};
use obbcgc_core::{HorizontalBox, OrientedBox, Point};
use serde::{Deserialize, Serialize};

use crate::format::fmt_num;
use crate::{Error, Result};

const METADATA_PREFIXES: [&str; 2] = ["imagesource:", "gsd:"];

#[derive(Debug, Clone, PartialEq)]
pub struct AnnotatedObject {
    pub quad: [Point; 4],
    pub category: String,
    pub difficult: u8,
    pub obb: OrientedBox,
    pub hbb: HorizontalBox,
}

impl AnnotatedObject {
    /// Ground truth with the given id.
    pub fn to_ground_truth(&self, id: u64) -> GroundTruthObject {
        GroundTruthObject::new(id, self.category.clone(), self.obb)
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_dota(text: &str) -> Result<Vec<AnnotatedObject>> {
    let mut objects = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if METADATA_PREFIXES.iter().any(|p| line.starts_with(p)) {
            if !objects.is_empty() {
                return Err(parse_error(line_no, "metadata line after object lines"));
            }
            continue;
        }

        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 10 {
            return Err(parse_error(
                line_no,
                format!("expected 10 tokens, found {}", tokens.len()),
            ));
        }
        let mut coords = [0.0f64; 8];
        for (slot, tok) in coords.iter_mut().zip(&tokens[..8]) {
            *slot = tok
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    parse_error(line_no, format!("`{tok}` is not a finite coordinate"))
                })?;
        }
        let difficult = match tokens[9] {
            "0" => 0,
            "1" => 1,
            other => {
                return Err(parse_error(
                    line_no,
                    format!("difficult must be 0 or 1, found `{other}`"),
                ))
            }
        };
        let quad = [0, 1, 2, 3].map(|i| Point::new(coords[2 * i], coords[2 * i + 1]));
        let obb = quad_to_obb(&quad).map_err(|e| parse_error(line_no, e.to_string()))?;
        objects.push(AnnotatedObject {
            quad,
            category: tokens[8].to_owned(),
            difficult,
            hbb: o2mer(&obb),
            obb,
        });
    }
    Ok(objects)
}

pub fn read_dota_file(path: &Path) -> Result<Vec<AnnotatedObject>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_dota(&text).map_err(|e| e.in_file(path))
}

/// Canonical box record written by `convert`. Angles in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxRecord {
    pub index: usize,
    pub category: String,
    pub difficult: u8,
    pub cx: String,
    pub cy: String,
    pub w: String,
    pub h: String,
    pub theta_deg: String,
    pub hbb_cx: String,
    pub hbb_cy: String,
    pub hbb_w: String,
    pub hbb_h: String,
}

impl BoxRecord {
    pub fn new(index: usize, obj: &AnnotatedObject) -> Self {
        let (o, h) = (&obj.obb, &obj.hbb);
        Self {
            index,
            category: obj.category.clone(),
            difficult: obj.difficult,
            cx: fmt_num(o.cx()),
            cy: fmt_num(o.cy()),
            w: fmt_num(o.w()),
            h: fmt_num(o.h()),
            theta_deg: fmt_num(o.theta_degrees()),
            hbb_cx: fmt_num(h.cx()),
            hbb_cy: fmt_num(h.cy()),
            hbb_w: fmt_num(h.w()),
            hbb_h: fmt_num(h.h()),
        }
    }

    fn field(&self, name: &'static str, text: &str) -> Result<f64> {
        text.parse()
            .map_err(|_| parse_error(self.index + 2, format!("{name}: `{text}` is not a number")))
    }

    /// Boxes back from the text fields (the oriented box is re-canonicalized).
    pub fn boxes(&self) -> Result<(OrientedBox, HorizontalBox)> {
        let obb = canonicalize(
            self.field("cx", &self.cx)?,
            self.field("cy", &self.cy)?,
            self.field("w", &self.w)?,
            self.field("h", &self.h)?,
            self.field("theta_deg", &self.theta_deg)?.to_radians(),
        )?;
        let hbb = HorizontalBox::new(
            self.field("hbb_cx", &self.hbb_cx)?,
            self.field("hbb_cy", &self.hbb_cy)?,
            self.field("hbb_w", &self.hbb_w)?,
            self.field("hbb_h", &self.hbb_h)?,
        )?;
        Ok((obb, hbb))
    }
}

pub fn write_records(objects: &[AnnotatedObject]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (i, obj) in objects.iter().enumerate() {
        w.serialize(BoxRecord::new(i, obj))?;
    }
    w.into_inner()
        .map_err(|e| Error::io("<memory>", e.into_error()))
}

pub fn read_records(text: &str) -> Result<Vec<BoxRecord>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    r.deserialize()
        .map(|rec| rec.map_err(Error::from))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_aligned_object() {
        let objs = parse_dota("0 0 4 0 4 2 0 2 ship 0").unwrap();
        assert_eq!(objs.len(), 1);
        let o = &objs[0];
        assert_eq!(o.category, "ship");
        assert_eq!(o.difficult, 0);
        assert_eq!(o.quad[2], Point::new(4.0, 2.0));
        let p = o.obb.params();
        for (a, b) in p.iter().zip([2.0, 1.0, 4.0, 2.0, 0.0]) {
            assert!((a - b).abs() < 1e-9, "{p:?}");
        }
        assert_eq!(o.hbb.params(), [2.0, 1.0, 4.0, 2.0]);
    }

    #[test]
    fn metadata_only_and_empty() {
        assert!(parse_dota("imagesource:GoogleEarth\ngsd:0.5\n")
            .unwrap()
            .is_empty());
        assert!(parse_dota("").unwrap().is_empty());
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let err = parse_dota("gsd:1\n0 0 4 0 4 2 ship 0").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = parse_dota("0 0 4 0 4 2 0 2 ship 2").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_dota("0 0 4 0 4 2 0 2 ship 0 extra").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = parse_dota("0 0 4 0 4 x 0 2 ship 0").unwrap_err();
        assert!(err.to_string().contains("`x`"));
        let err = parse_dota("0 0 1 1 2 2 3 3 ship 0").unwrap_err();
        assert!(err.to_string().contains("degenerate"));
        let err = parse_dota("0 0 4 0 4 2 0 2 ship 0\ngsd:1").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn records_round_trip() {
        let objs = parse_dota("10 10 50 20 45 40 5 30 plane 1\n0 0 4 0 4 2 0 2 ship 0").unwrap();
        let bytes = write_records(&objs).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.starts_with(
            "index,category,difficult,cx,cy,w,h,theta_deg,hbb_cx,hbb_cy,hbb_w,hbb_h\n"
        ));
        let back = read_records(&text).unwrap();
        for (rec, obj) in back.iter().zip(&objs) {
            let (obb, hbb) = rec.boxes().unwrap();
            for (a, b) in obb.params().iter().zip(obj.obb.params()) {
                assert!((a - b).abs() < 1e-6);
            }
            for (a, b) in hbb.params().iter().zip(obj.hbb.params()) {
                assert!((a - b).abs() < 1e-6);
            }
        }
    }
}
