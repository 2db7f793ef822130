use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::determinant::K_MIN;
use crate::error::{Error, Result};

const ANGLE_EPS: f64 = 1e-12;

/// Axis-aligned rectangle [x0, x1] x [y0, y1] in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x1 > x0 && y1 > y0) || ![x0, x1, y0, y1].iter().all(|v| v.is_finite()) {
            return Err(Error::Region(format!("degenerate rectangle [{x0}, {x1}] x [{y0}, {y1}]")));
        }
        Ok(Self { x0, x1, y0, y1 })
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn perimeter(&self) -> f64 {
        2.0 * (self.width() + self.height())
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    /// Corners in counter-clockwise order starting at the lower left.
    pub fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.x0, self.y0),
            Complex64::new(self.x1, self.y0),
            Complex64::new(self.x1, self.y1),
            Complex64::new(self.x0, self.y1),
        ]
    }

    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        z.re >= self.x0 - slack && z.re <= self.x1 + slack && z.im >= self.y0 - slack && z.im <= self.y1 + slack
    }

    /// Grows every side by `delta`.
    pub fn expanded(&self, delta: f64) -> Self {
        Self { x0: self.x0 - delta, x1: self.x1 + delta, y0: self.y0 - delta, y1: self.y1 + delta }
    }

    /// Four children split at fractions `fx`, `fy` of the width and height.
    pub fn split(&self, fx: f64, fy: f64) -> [Rect; 4] {
        let xm = self.x0 + fx * self.width();
        let ym = self.y0 + fy * self.height();
        [
            Rect { x0: self.x0, x1: xm, y0: self.y0, y1: ym },
            Rect { x0: xm, x1: self.x1, y0: self.y0, y1: ym },
            Rect { x0: xm, x1: self.x1, y0: ym, y1: self.y1 },
            Rect { x0: self.x0, x1: xm, y0: ym, y1: self.y1 },
        ]
    }

    /// Smallest and largest modulus over the rectangle.
    pub fn modulus_range(&self) -> (f64, f64) {
        let dx = if self.x0 > 0.0 { self.x0 } else if self.x1 < 0.0 { -self.x1 } else { 0.0 };
        let dy = if self.y0 > 0.0 { self.y0 } else if self.y1 < 0.0 { -self.y1 } else { 0.0 };
        let far = self.corners().iter().map(|c| c.norm()).fold(0.0, f64::max);
        (dx.hypot(dy), far)
    }

    /// Range of arguments (in (-pi, pi]) spanned by the rectangle, or `None`
    /// if it contains the origin or straddles the negative real axis.
    pub fn arg_range(&self) -> Option<(f64, f64)> {
        let straddles_cut = self.x0 <= 0.0 && self.y0 <= 0.0 && self.y1 >= 0.0;
        if straddles_cut {
            return None;
        }
        let args = self.corners().map(|c| c.arg());
        Some((
            args.iter().cloned().fold(f64::INFINITY, f64::min),
            args.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        ))
    }
}

/// Annular sector {r0 <= |k| <= r1, alpha <= arg k <= beta}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WedgeRegion {
    pub r0: f64,
    pub r1: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl WedgeRegion {
    pub fn new(r0: f64, r1: f64, alpha: f64, beta: f64) -> Result<Self> {
        let region = Self { r0, r1, alpha, beta };
        region.validate()?;
        Ok(region)
    }

    /// Symmetric wedge |arg k| <= half_width.
    pub fn about_real_axis(r0: f64, r1: f64, half_width: f64) -> Result<Self> {
        Self::new(r0, r1, -half_width, half_width)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { r0, r1, alpha, beta } = *self;
        if ![r0, r1, alpha, beta].iter().all(|v| v.is_finite()) {
            return Err(Error::Region("non-finite wedge parameters".into()));
        }
        if !(r0 > 0.0 && r1 > r0) {
            return Err(Error::Region(format!("need 0 < r0 < r1, got r0={r0}, r1={r1}")));
        }
        if r0 < K_MIN {
            return Err(Error::Region(format!("r0 = {r0} is below k_min = {K_MIN}")));
        }
        if !(beta > alpha) || beta - alpha > TAU + ANGLE_EPS {
            return Err(Error::Region(format!(
                "need alpha < beta <= alpha + 2 pi, got [{alpha}, {beta}]"
            )));
        }
        Ok(())
    }

    /// Whether `arg z` lies in [alpha, beta] modulo 2 pi.
    pub fn contains_angle(&self, theta: f64) -> bool {
        angle_in(theta, self.alpha, self.beta)
    }

    /// Hull [lo, hi] within [0, pi/2] of the wedge folded by the reflections
    /// z -> -z and z -> conj z.
    pub fn folded_range(&self) -> (f64, f64) {
        folded_hull(self.alpha, self.beta)
    }
}

pub(crate) fn angle_in(theta: f64, alpha: f64, beta: f64) -> bool {
    let width = beta - alpha;
    if width >= TAU - ANGLE_EPS {
        return true;
    }
    let offset = (theta - alpha).rem_euclid(TAU);
    offset <= width + ANGLE_EPS || offset >= TAU - ANGLE_EPS
}

/// Folds an angle into [0, pi/2] under z -> -z, z -> conj z.
pub fn fold_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(PI);
    if t > FRAC_PI_2 {
        PI - t
    } else {
        t
    }
}

pub(crate) fn folded_hull(alpha: f64, beta: f64) -> (f64, f64) {
    if beta - alpha >= PI {
        return (0.0, FRAC_PI_2);
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let mut start = alpha;
    while start < beta {
        let j = (start / FRAC_PI_2).floor();
        let end = ((j + 1.0) * FRAC_PI_2).min(beta);
        // Within one quarter-turn the fold is monotone; endpoints bound it.
        let (pa, pb) = if (j as i64).rem_euclid(2) == 0 {
            (start - j * FRAC_PI_2, end - j * FRAC_PI_2)
        } else {
            ((j + 1.0) * FRAC_PI_2 - end, (j + 1.0) * FRAC_PI_2 - start)
        };
        lo = lo.min(pa.min(pb));
        hi = hi.max(pa.max(pb));
        if end <= start {
            break;
        }
        start = end;
    }
    (lo.clamp(0.0, FRAC_PI_2), hi.clamp(0.0, FRAC_PI_2))
}

/// Distinct points of {z, -z, conj z, -conj z}.
pub fn reflection_orbit(z: Complex64) -> Vec<Complex64> {
    let mut orbit: Vec<Complex64> = Vec::with_capacity(4);
    for w in [z, -z, z.conj(), -z.conj()] {
        if !orbit.iter().any(|o| (o - w).norm() <= 1e-12 * (1.0 + w.norm())) {
            orbit.push(w);
        }
    }
    orbit
}
