//! Radial initial-value problems for complex wavenumber.
//!
//! For l = 0 the solver integrates y'' + k^2 n(r) y = 0 with y(0) = 0,
//! y'(0) = 1 together with the variational system for u = dy/dk,
//! u'' + k^2 n u = -2 k n y, u(0) = u'(0) = 0. For l >= 1 it integrates the
//! regular radial equation
//! Y'' + (2/r) Y' + (k^2 n - l(l+1)/r^2) Y = 0 from r0 = 1e-4 a with
//! Y(r0) = j_l(k r0), Y'(r0) = k j_l'(k r0).
//!
//! The state is renormalized whenever it grows large; traces carry the
//! accumulated natural-log scale so that |k| deep in the complex plane does
//! not overflow.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{DormandPrince, State, Tolerances};
use crate::profile::Profile;
use crate::special::{sph_bessel, MAX_ORDER};

pub const DEFAULT_K_MAX: f64 = 500.0;
/// Start of integration for l >= 1, relative to the radius a.
pub const HIGHER_ORDER_START: f64 = 1e-4;
/// Accuracy tier reported for l >= 1 traces (initialization error O(r0^2)).
pub const HIGHER_ORDER_TOLERANCE: f64 = 1e-6;

const RESCALE_ABOVE: f64 = 1e64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverSettings {
    pub rtol: f64,
    pub atol: f64,
    pub k_max: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        let tol = Tolerances::default();
        Self { rtol: tol.rtol, atol: tol.atol, k_max: DEFAULT_K_MAX }
    }
}

impl SolverSettings {
    /// Same settings with both tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self { rtol: self.rtol / factor, atol: self.atol / factor, ..*self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rtol > 0.0 && self.atol >= 0.0 && self.k_max > 0.0) {
            return Err(Error::Parameter(format!(
                "solver settings rtol={}, atol={}, k_max={}",
                self.rtol, self.atol, self.k_max
            )));
        }
        Ok(())
    }

    fn tolerances(&self) -> Tolerances {
        Tolerances { rtol: self.rtol, atol: self.atol }
    }
}

/// Boundary data at r = a, stored as mantissas: the true values are the
/// stored ones times exp(log_scale).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionTrace {
    pub k: Complex64,
    pub l: u32,
    pub y_a: Complex64,
    pub yp_a: Complex64,
    /// dy(a)/dk, l = 0 only.
    pub dy_a: Option<Complex64>,
    /// dy'(a)/dk, l = 0 only.
    pub dyp_a: Option<Complex64>,
    pub log_scale: f64,
    pub tol_used: f64,
    pub steps: usize,
}

impl SolutionTrace {
    fn unscale(&self, v: Complex64) -> Complex64 {
        if self.log_scale == 0.0 {
            v
        } else {
            v * self.log_scale.exp()
        }
    }

    /// y(a; k) (or Y_l(a) for l >= 1).
    pub fn y(&self) -> Complex64 {
        self.unscale(self.y_a)
    }

    /// y'(a; k) (or Y_l'(a) for l >= 1).
    pub fn yp(&self) -> Complex64 {
        self.unscale(self.yp_a)
    }

    pub fn dy(&self) -> Option<Complex64> {
        self.dy_a.map(|v| self.unscale(v))
    }

    pub fn dyp(&self) -> Option<Complex64> {
        self.dyp_a.map(|v| self.unscale(v))
    }
}

fn check_request(k: Complex64, l: u32, settings: &SolverSettings) -> Result<()> {
    settings.validate()?;
    if l > MAX_ORDER {
        return Err(Error::AngularIndex(l));
    }
    if !(k.re.is_finite() && k.im.is_finite()) {
        return Err(Error::NonFinite(format!("wavenumber {k}")));
    }
    if k.norm() > settings.k_max {
        return Err(Error::WavenumberTooLarge { k_abs: k.norm(), k_max: settings.k_max });
    }
    Ok(())
}

fn renormalize<const N: usize>(state: &mut State<N>, log_scale: &mut f64) -> f64 {
    let m = state.iter().map(|v| v.norm()).fold(0.0, f64::max);
    if m > RESCALE_ABOVE {
        let factor = 1.0 / m;
        for v in state.iter_mut() {
            *v *= factor;
        }
        *log_scale += m.ln();
        factor
    } else {
        1.0
    }
}

/// Integrates the radial problem for wavenumber `k` and angular index `l`.
pub fn solve_radial(
    profile: &Profile,
    k: Complex64,
    l: u32,
    settings: &SolverSettings,
) -> Result<SolutionTrace> {
    check_request(k, l, settings)?;
    if l == 0 {
        solve_s_wave(profile, k, settings)
    } else {
        solve_higher(profile, k, l, settings)
    }
}

fn initial_step(profile: &Profile, k: Complex64, span: f64) -> f64 {
    let wave = k.norm() * profile.sqrt_n_unchecked(0.0).max(1.0);
    span * 0.02 / (1.0 + wave * span)
}

fn solve_s_wave(profile: &Profile, k: Complex64, settings: &SolverSettings) -> Result<SolutionTrace> {
    let a = profile.radius();
    let k2 = k * k;
    let two_k = 2.0 * k;
    let zero = Complex64::new(0.0, 0.0);
    let rhs = |r: f64, s: &State<4>| {
        let n = profile.n_unchecked(r);
        let ky = k2 * n;
        [s[1], -ky * s[0], s[3], -ky * s[2] - two_k * n * s[0]]
    };
    let mut log_scale = 0.0;
    let solver = DormandPrince::new(settings.tolerances());
    let (state, stats) = solver.integrate(
        rhs,
        0.0,
        a,
        [zero, Complex64::new(1.0, 0.0), zero, zero],
        initial_step(profile, k, a),
        |s| renormalize(s, &mut log_scale),
    )?;
    Ok(SolutionTrace {
        k,
        l: 0,
        y_a: state[0],
        yp_a: state[1],
        dy_a: Some(state[2]),
        dyp_a: Some(state[3]),
        log_scale,
        tol_used: settings.rtol,
        steps: stats.accepted + stats.rejected,
    })
}

fn solve_higher(
    profile: &Profile,
    k: Complex64,
    l: u32,
    settings: &SolverSettings,
) -> Result<SolutionTrace> {
    let a = profile.radius();
    let r0 = HIGHER_ORDER_START * a;
    let start = sph_bessel(l, k * r0)?;
    let y0 = start.value;
    let yp0 = k * start.derivative;
    let mag = y0.norm().max(yp0.norm() * r0);
    let tol_used = settings.rtol.max(HIGHER_ORDER_TOLERANCE);
    if mag == 0.0 {
        // k = 0: the regular solution vanishes identically for l >= 1.
        let zero = Complex64::new(0.0, 0.0);
        return Ok(SolutionTrace {
            k,
            l,
            y_a: zero,
            yp_a: zero,
            dy_a: None,
            dyp_a: None,
            log_scale: 0.0,
            tol_used,
            steps: 0,
        });
    }
    let mut log_scale = mag.ln();
    let k2 = k * k;
    let centrifugal = (l * (l + 1)) as f64;
    let rhs = |r: f64, s: &State<2>| {
        let q = k2 * profile.n_unchecked(r) - centrifugal / (r * r);
        [s[1], -2.0 / r * s[1] - q * s[0]]
    };
    let solver = DormandPrince::new(settings.tolerances());
    let (state, stats) = solver.integrate(
        rhs,
        r0,
        a,
        [y0 / mag, yp0 / mag],
        0.1 * r0,
        |s| renormalize(s, &mut log_scale),
    )?;
    Ok(SolutionTrace {
        k,
        l,
        y_a: state[0],
        yp_a: state[1],
        dy_a: None,
        dyp_a: None,
        log_scale,
        tol_used,
        steps: stats.accepted + stats.rejected,
    })
}

/// Leading-order approximants of (y(a; k), y'(a; k)) for large |k|:
/// sin(kb) / ([n(0) n(a)]^(1/4) k) and [n(a)/n(0)]^(1/4) cos(kb).
pub fn asymptotic_boundary(profile: &Profile, k: Complex64) -> Result<(Complex64, Complex64)> {
    if k.norm() < 10.0 {
        return Err(Error::AsymptoticRegime(k.norm()));
    }
    let scales = profile.travel_time()?;
    let n_a = profile.n_unchecked(profile.radius());
    let amp_y = 1.0 / (scales.n0 * n_a).powf(0.25);
    let amp_yp = (n_a / scales.n0).powf(0.25);
    let phase = k * scales.b;
    Ok((amp_y * phase.sin() / k, amp_yp * phase.cos()))
}
