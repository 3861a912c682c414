//! Report files: per-anchor assignment CSV, JSON summaries, histogram CSV.
//! Files are written whole via a temporary sibling and a rename.

use std::io::Write;
use std::path::Path;

use obbcgc_core::assignment::{AssignmentResult, Label};
use obbcgc_core::bench::IoUHistogram;
use serde::Serialize;

use crate::format::fmt_num;
use crate::{Error, Result};

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let mut f = std::fs::File::create(&tmp).map_err(|e| Error::io(&tmp, e))?;
    f.write_all(bytes)
        .and_then(|_| f.sync_all())
        .map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::io(path, e))
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_num).unwrap_or_default()
}

/// Columns: `anchor_index,label,gt_id,d_gh,d_go,t_g`; absent values are empty.
pub fn assignment_csv(result: &AssignmentResult) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["anchor_index", "label", "gt_id", "d_gh", "d_go", "t_g"])?;
    for r in &result.records {
        w.write_record([
            r.anchor_index.to_string(),
            r.label.to_string(),
            r.gt_id.map(|g| g.to_string()).unwrap_or_default(),
            opt(r.d_gh),
            opt(r.d_go),
            opt(r.t_g),
        ])?;
    }
    w.into_inner()
        .map_err(|e| Error::io("<memory>", e.into_error()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelCounts {
    pub positive: usize,
    pub negative: usize,
    pub ignored: usize,
}

impl From<&AssignmentResult> for LabelCounts {
    fn from(r: &AssignmentResult) -> Self {
        Self {
            positive: r.count(Label::Positive),
            negative: r.count(Label::Negative),
            ignored: r.count(Label::Ignored),
        }
    }
}

/// Columns: `bin_lo,bin_hi,count_hbb,count_obb`.
pub fn histogram_csv(h: &IoUHistogram) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bin_lo", "bin_hi", "count_hbb", "count_obb"])?;
    for i in 0..h.bins() {
        w.write_record([
            fmt_num(h.bin_edges[i]),
            fmt_num(h.bin_edges[i + 1]),
            h.counts_hbb[i].to_string(),
            h.counts_obb[i].to_string(),
        ])?;
    }
    w.into_inner()
        .map_err(|e| Error::io("<memory>", e.into_error()))
}

pub fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}
