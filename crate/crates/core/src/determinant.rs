//! Transmission determinants d_0(k) and d_l(k).
//!
//! d_0 is assembled from the s-wave trace as
//! d_0(k) = (1/a^2) [ sin(ka)/k * y'(a) - cos(ka) * y(a) ],
//! which equals the 2x2 determinant in Y_0 = y/r and j_0 at r = a. For
//! l >= 1 the determinant
//! det [[Y_l(a), -j_l(ka)], [Y_l'(a), -k j_l'(ka)]] is evaluated directly.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::radial::{solve_radial, SolutionTrace, SolverSettings};
use crate::special::{sph_bessel, MAX_ORDER};

/// Below this |ka| the factor sin(ka)/k is taken from its Taylor series.
const SINC_SERIES_RADIUS: f64 = 1e-3;
/// Beyond this |Im z| trigonometric factors are formed from pre-scaled exponentials.
const DIRECT_TRIG_LIMIT: f64 = 300.0;
/// Smallest wavenumber admitted into spectra; excludes the zero at the origin.
pub const K_MIN: f64 = 0.5;

/// A determinant value stored as a mantissa and a natural-log scale:
/// the true value is `mantissa * exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeterminantValue {
    pub k: Complex64,
    pub l: u32,
    pub mantissa: Complex64,
    /// d/dk mantissa on the same scale; l = 0 only.
    pub derivative_mantissa: Option<Complex64>,
    /// Sum of the moduli of the two determinant terms, on the same scale.
    pub term_scale_mantissa: f64,
    pub log_scale: f64,
    /// a^2 k n(0)^(1/4); present for l = 0.
    normalization: Option<Complex64>,
}

impl DeterminantValue {
    fn unscale(&self, v: Complex64) -> Complex64 {
        if self.log_scale == 0.0 {
            v
        } else {
            v * self.log_scale.exp()
        }
    }

    pub fn value(&self) -> Complex64 {
        self.unscale(self.mantissa)
    }

    pub fn derivative(&self) -> Option<Complex64> {
        self.derivative_mantissa.map(|d| self.unscale(d))
    }

    /// a^2 k n(0)^(1/4) d_0(k), whose leading behavior on the real axis is sin(k(a - b)).
    pub fn normalized(&self) -> Option<Complex64> {
        self.normalization.map(|c| c * self.value())
    }

    pub fn term_scale(&self) -> f64 {
        self.term_scale_mantissa * self.log_scale.exp()
    }

    /// ln |d(k)|, finite even where the value itself would overflow.
    pub fn ln_abs(&self) -> f64 {
        self.mantissa.norm().ln() + self.log_scale
    }

    pub fn ln_term_scale(&self) -> f64 {
        self.term_scale_mantissa.ln() + self.log_scale
    }
}

/// sin z and cos z multiplied by exp(-|Im z|), together with |Im z|.
fn scaled_sin_cos(z: Complex64) -> (Complex64, Complex64, f64) {
    let m = z.im.abs();
    if m <= DIRECT_TRIG_LIMIT {
        let damp = (-m).exp();
        (z.sin() * damp, z.cos() * damp, m)
    } else {
        let rot = Complex64::from_polar(1.0, z.re);
        let e_pos = rot * (-z.im - m).exp();
        let e_neg = rot.conj() * (z.im - m).exp();
        let i2 = Complex64::new(0.0, 2.0);
        ((e_pos - e_neg) / i2, (e_pos + e_neg) / 2.0, m)
    }
}

/// sin(ka)/k and its k-derivative, scaled by exp(-m) like `sin_s`, `cos_s`.
fn sinc_factor(k: Complex64, a: f64, sin_s: Complex64, cos_s: Complex64, m: f64) -> (Complex64, Complex64) {
    let ka = k * a;
    if ka.norm() < SINC_SERIES_RADIUS {
        let x2 = ka * ka;
        let damp = (-m).exp();
        let s = a * (1.0 - x2 / 6.0 + x2 * x2 / 120.0) * damp;
        let ds = a * a * ka * (-1.0 / 3.0 + x2 / 30.0 - x2 * x2 / 840.0) * damp;
        (s, ds)
    } else {
        let s = sin_s / k;
        (s, (a * cos_s - s) / k)
    }
}

/// d_0(k) with its k-derivative.
pub fn d0(profile: &Profile, k: Complex64, settings: &SolverSettings) -> Result<DeterminantValue> {
    let trace = solve_radial(profile, k, 0, settings)?;
    Ok(d0_from_trace(profile, &trace))
}

pub fn d0_from_trace(profile: &Profile, trace: &SolutionTrace) -> DeterminantValue {
    let a = profile.radius();
    let k = trace.k;
    let ka = k * a;
    let (sin_s, cos_s, m) = scaled_sin_cos(ka);
    let (sinc_s, dsinc_s) = sinc_factor(k, a, sin_s, cos_s, m);
    let y = trace.y_a;
    let yp = trace.yp_a;
    let inv_a2 = 1.0 / (a * a);
    let first = sinc_s * yp;
    let second = cos_s * y;
    let mantissa = (first - second) * inv_a2;
    let derivative_mantissa = match (trace.dy_a, trace.dyp_a) {
        (Some(dy), Some(dyp)) => {
            Some((dsinc_s * yp + sinc_s * dyp + a * sin_s * y - cos_s * dy) * inv_a2)
        }
        _ => None,
    };
    let n0 = profile.n_unchecked(0.0);
    DeterminantValue {
        k,
        l: 0,
        mantissa,
        derivative_mantissa,
        term_scale_mantissa: (first.norm() + second.norm()) * inv_a2,
        log_scale: trace.log_scale + m,
        normalization: Some(a * a * k * n0.powf(0.25)),
    }
}

/// d_l(k) for 1 <= l <= 8 (no derivative).
pub fn dl(profile: &Profile, k: Complex64, l: u32, settings: &SolverSettings) -> Result<DeterminantValue> {
    if l == 0 {
        return d0(profile, k, settings);
    }
    if l > MAX_ORDER {
        return Err(Error::AngularIndex(l));
    }
    let trace = solve_radial(profile, k, l, settings)?;
    let a = profile.radius();
    let j = sph_bessel(l, k * a)?;
    let first = trace.y_a * k * j.derivative;
    let second = j.value * trace.yp_a;
    Ok(DeterminantValue {
        k,
        l,
        mantissa: second - first,
        derivative_mantissa: None,
        term_scale_mantissa: first.norm() + second.norm(),
        log_scale: trace.log_scale,
        normalization: None,
    })
}

/// |a^2 k n(0)^(1/4) d_0(k) - sin(k(a - b))| on the real axis.
pub fn normalized_residual(profile: &Profile, k: f64, settings: &SolverSettings) -> Result<f64> {
    profile.require_strict()?;
    if !(k >= 50.0) {
        return Err(Error::Parameter(format!(
            "normalized residual needs real k >= 50, got {k}"
        )));
    }
    let scales = profile.travel_time()?;
    let value = d0(profile, Complex64::new(k, 0.0), settings)?;
    let normalized = value.normalized().expect("d0 carries a normalization");
    Ok((normalized - Complex64::new((k * scales.s).sin(), 0.0)).norm())
}
