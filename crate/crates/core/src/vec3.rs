//! Small fixed-size vector helpers shared across the crate.

use num_complex::Complex64;

/// Real 3-vector.
pub type Real3 = [f64; 3];
/// Complex 3-vector.
pub type Complex3 = [Complex64; 3];

pub const CZERO3: Complex3 = [Complex64::new(0.0, 0.0); 3];

#[inline]
pub fn dot(a: &Real3, b: &Real3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn norm(a: &Real3) -> f64 {
    dot(a, a).sqrt()
}

/// Bilinear (non-conjugating) product of a real and a complex vector.
#[inline]
pub fn dot_rc(a: &Real3, b: &Complex3) -> Complex64 {
    b[0] * a[0] + b[1] * a[1] + b[2] * a[2]
}

#[inline]
pub fn cnorm_sqr(a: &Complex3) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

#[inline]
pub fn cnorm(a: &Complex3) -> f64 {
    cnorm_sqr(a).sqrt()
}

#[inline]
pub fn cadd(a: &Complex3, b: &Complex3) -> Complex3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn csub(a: &Complex3, b: &Complex3) -> Complex3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn cscale(s: Complex64, a: &Complex3) -> Complex3 {
    [s * a[0], s * a[1], s * a[2]]
}

#[inline]
pub fn cconj(a: &Complex3) -> Complex3 {
    [a[0].conj(), a[1].conj(), a[2].conj()]
}

#[inline]
pub fn to_complex(a: &Real3) -> Complex3 {
    [a[0].into(), a[1].into(), a[2].into()]
}

/// Relative distance `|a - b| / max(|b|, floor)`.
pub fn crel_err(a: &Complex3, b: &Complex3, floor: f64) -> f64 {
    cnorm(&csub(a, b)) / cnorm(b).max(floor)
}
