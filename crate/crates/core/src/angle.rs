//! Degree-based trigonometry helpers.
//!
//! Everything in this crate keeps angles in degrees. The sine and cosine here
//! reduce the argument to a quadrant first so that multiples of 90° give
//! exact results (`sin_deg(180.0) == 0.0`), which keeps grid predictors such
//! as `sin(phi)` free of 1e-16 noise.

/// Sine and cosine of an angle given in degrees.
pub fn sin_cos_deg(deg: f64) -> (f64, f64) {
    let mut d = deg.rem_euclid(360.0);
    if d >= 360.0 {
        d = 0.0;
    }
    let quadrant = (d / 90.0).floor();
    let rest = (d - 90.0 * quadrant).to_radians();
    let (s, c) = if rest == 0.0 { (0.0, 1.0) } else { rest.sin_cos() };
    match quadrant as i32 {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    }
}

pub fn sin_deg(deg: f64) -> f64 {
    sin_cos_deg(deg).0
}

pub fn cos_deg(deg: f64) -> f64 {
    sin_cos_deg(deg).1
}

/// Wraps an angle into `(-180, 180]`.
pub fn wrap_deg(deg: f64) -> f64 {
    let r = deg.rem_euclid(360.0);
    if r > 180.0 {
        r - 360.0
    } else {
        r
    }
}

/// Reduces an angular difference modulo the 90° symmetry of a cube face,
/// returning a value in `[-45, 45]`.
pub fn reduce_cube_symmetry(deg: f64) -> f64 {
    let r = deg - 90.0 * (deg / 90.0).round();
    r.clamp(-45.0, 45.0)
}
