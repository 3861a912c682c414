//! Regular anchor grids.

use alloc::vec::Vec;

use crate::geometry::HorizontalBox;
use crate::math;
use crate::{Error, Result};

/// Grid layout: one anchor per cell, scale and aspect ratio.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnchorGrid {
    pub stride: f64,
    /// Square root of the anchor area.
    pub scales: Vec<f64>,
    /// Height over width.
    pub ratios: Vec<f64>,
}

impl AnchorGrid {
    pub fn validate(&self) -> Result<()> {
        if !(self.stride > 0.0 && self.stride.is_finite()) {
            return Err(Error::InvalidInput("anchor stride must be positive"));
        }
        if self.scales.is_empty() || self.ratios.is_empty() {
            return Err(Error::InvalidInput(
                "anchor scales and ratios must be non-empty",
            ));
        }
        if self
            .scales
            .iter()
            .chain(&self.ratios)
            .any(|v| !(*v > 0.0 && v.is_finite()))
        {
            return Err(Error::InvalidInput(
                "anchor scales and ratios must be positive",
            ));
        }
        Ok(())
    }
}

impl Default for AnchorGrid {
    fn default() -> Self {
        Self {
            stride: 16.0,
            scales: alloc::vec![32.0, 64.0, 128.0],
            ratios: alloc::vec![0.5, 1.0, 2.0],
        }
    }
}

/// Anchors centered at `(i + 0.5) * stride`, ordered row-major, then by
/// scale, then by ratio.
pub fn generate_anchors(
    image_w: f64,
    image_h: f64,
    grid: &AnchorGrid,
) -> Result<Vec<HorizontalBox>> {
    grid.validate()?;
    if !(image_w > 0.0 && image_h > 0.0 && image_w.is_finite() && image_h.is_finite()) {
        return Err(Error::InvalidInput("image dimensions must be positive"));
    }
    let cols = libm::ceil(image_w / grid.stride) as usize;
    let rows = libm::ceil(image_h / grid.stride) as usize;
    let mut out = Vec::with_capacity(rows * cols * grid.scales.len() * grid.ratios.len());
    for row in 0..rows {
        let cy = (row as f64 + 0.5) * grid.stride;
        for col in 0..cols {
            let cx = (col as f64 + 0.5) * grid.stride;
            for &scale in &grid.scales {
                for &ratio in &grid.ratios {
                    let r = math::sqrt(ratio);
                    out.push(HorizontalBox::new(cx, cy, scale / r, scale * r)?);
                }
            }
        }
    }
    Ok(out)
}
