//! `libm` shims so the numerics build without `std`.

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn ln_1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn abs(x: f64) -> f64 {
    libm::fabs(x)
}

/// `ln(x)` clamped to zero for `x ≤ 1`; used for iteration-count logarithms.
#[inline]
pub(crate) fn ln_pos(x: f64) -> f64 {
    if x <= 1.0 {
        0.0
    } else {
        ln(x)
    }
}
