//! Thin wrappers so the crate builds without `std` float methods.

pub(crate) use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// Wraps `x` into `[lo, lo + period)`.
pub(crate) fn wrap(x: f64, lo: f64, period: f64) -> f64 {
    let mut r = x - period * floor((x - lo) / period);
    // rounding can land exactly on the open end
    if r >= lo + period {
        r -= period;
    }
    if r < lo {
        r = lo;
    }
    r
}
