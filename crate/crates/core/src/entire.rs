//! Growth and zero-distribution diagnostics for entire functions of
//! exponential type: ray-wise indicator fits, type, angular zero
//! densities and truncated genus-1 products.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::radial::SolverSettings;
use crate::rootfinder::{counting_function, reflection_orbit, Analytic, D0Function, SpectrumReport, WedgeRegion};

/// Rays closer than this to the real axis are treated as bounded (h = 0).
pub const AXIS_EXCLUSION: f64 = 0.05;
pub const MIN_RADII: usize = 30;
pub const DEFAULT_RADII: usize = 40;
/// Largest admissible spacing of a theta grid used for the type.
pub const MAX_THETA_STEP: f64 = PI / 36.0;
/// Minimum number of zeros in a density fit window.
pub const MIN_DENSITY_ZEROS: u64 = 5;
/// Closer than this to a zero, a product is reported as exactly zero.
pub const HADAMARD_ZERO_DISTANCE: f64 = 1e-10;

/// Least-squares fit of ln|f(r e^{i theta})| = h r + c1 ln r + c0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RayFit {
    pub theta: f64,
    pub h: f64,
    pub c1: f64,
    pub c0: f64,
    /// RMS residual of the fit.
    pub residual: f64,
    pub r_lo: f64,
    pub r_hi: f64,
}

fn near_real_axis(theta: f64) -> bool {
    let t = theta.rem_euclid(PI);
    t < AXIS_EXCLUSION || PI - t < AXIS_EXCLUSION
}

/// Solves min |A x - b| for a tall matrix, rejecting rank-deficient designs.
fn least_squares(a: DMatrix<f64>, b: DVector<f64>) -> Result<(DVector<f64>, f64)> {
    let rows = a.nrows();
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > 1e-12 * smax) {
        return Err(Error::DegenerateFit(format!("condition {smax:e}/{smin:e}")));
    }
    let x = svd.solve(&b, 0.0).map_err(|e| Error::DegenerateFit(e.to_string()))?;
    let resid = &a * &x - b;
    Ok((x, (resid.norm_squared() / rows as f64).sqrt()))
}

/// Fits y = slope x + c1 ln x + c0 and returns (slope, c1, c0, rms).
pub(crate) fn fit_growth(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64, f64)> {
    let n = xs.len();
    let a = DMatrix::from_fn(n, 3, |i, j| match j {
        0 => xs[i],
        1 => xs[i].ln(),
        _ => 1.0,
    });
    let (x, rms) = least_squares(a, DVector::from_column_slice(ys))?;
    Ok((x[0], x[1], x[2], rms))
}

/// Fits y = slope x + c0; returns (slope, stderr of slope).
fn fit_line(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let n = xs.len();
    let a = DMatrix::from_fn(n, 2, |i, j| if j == 0 { xs[i] } else { 1.0 });
    let (x, rms) = least_squares(a, DVector::from_column_slice(ys))?;
    let mean = xs.iter().sum::<f64>() / n as f64;
    let sxx: f64 = xs.iter().map(|v| (v - mean).powi(2)).sum();
    let dof = (n as f64 - 2.0).max(1.0);
    let sigma2 = rms * rms * n as f64 / dof;
    Ok((x[0], (sigma2 / sxx).sqrt()))
}

fn geometric_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

/// Growth rate of f along the ray at angle `theta` over [r_lo, r_hi].
pub fn ray_fit<F: Analytic + ?Sized>(
    f: &F,
    theta: f64,
    r_lo: f64,
    r_hi: f64,
    n_radii: usize,
) -> Result<RayFit> {
    if !(r_lo > 0.0 && r_hi > r_lo) {
        return Err(Error::Parameter(format!("fit window [{r_lo}, {r_hi}]")));
    }
    if n_radii < MIN_RADII {
        return Err(Error::Parameter(format!("need at least {MIN_RADII} radii, got {n_radii}")));
    }
    if near_real_axis(theta) {
        return Ok(RayFit { theta, h: 0.0, c1: 0.0, c0: 0.0, residual: 0.0, r_lo, r_hi });
    }
    let radii = geometric_grid(r_lo, r_hi, n_radii);
    let logs = radii
        .par_iter()
        .map(|&r| f.sample(Complex64::from_polar(r, theta)).map(|s| s.ln_abs()))
        .collect::<Result<Vec<_>>>()?;
    if logs.iter().any(|v| !v.is_finite()) {
        return Err(Error::DegenerateFit(format!("f vanishes on the ray theta = {theta}")));
    }
    let (h, c1, c0, residual) = fit_growth(&radii, &logs)?;
    Ok(RayFit { theta, h, c1, c0, residual, r_lo, r_hi })
}

/// Indicator h(theta) of d_0 with the RMS residual of its fit.
pub fn indicator_estimate(
    profile: &Profile,
    theta: f64,
    r_lo: f64,
    r_hi: f64,
    settings: &SolverSettings,
) -> Result<(f64, f64)> {
    profile.require_strict()?;
    if r_hi > settings.k_max {
        return Err(Error::WavenumberTooLarge { k_abs: r_hi, k_max: settings.k_max });
    }
    let fit = ray_fit(&D0Function::new(profile, *settings), theta, r_lo, r_hi, DEFAULT_RADII)?;
    Ok((fit.h, fit.residual))
}

/// Indicator values on a grid of directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorProfile {
    pub theta_grid: Vec<f64>,
    pub h_values: Vec<f64>,
    pub fit_windows: Vec<(f64, f64)>,
    pub fit_residuals: Vec<f64>,
}

impl IndicatorProfile {
    pub fn from_fits(fits: &[RayFit]) -> Self {
        Self {
            theta_grid: fits.iter().map(|f| f.theta).collect(),
            h_values: fits.iter().map(|f| f.h).collect(),
            fit_windows: fits.iter().map(|f| (f.r_lo, f.r_hi)).collect(),
            fit_residuals: fits.iter().map(|f| f.residual).collect(),
        }
    }

    /// h at the grid point nearest to `theta`.
    pub fn h_near(&self, theta: f64) -> Option<f64> {
        self.theta_grid
            .iter()
            .zip(&self.h_values)
            .min_by(|a, b| (a.0 - theta).abs().total_cmp(&(b.0 - theta).abs()))
            .map(|(_, h)| *h)
    }
}

/// Angles 0, then [0.05, pi - 0.05] in steps no larger than pi/36, then pi.
pub fn standard_theta_grid() -> Vec<f64> {
    let (lo, hi) = (AXIS_EXCLUSION, PI - AXIS_EXCLUSION);
    let steps = ((hi - lo) / MAX_THETA_STEP).ceil() as usize;
    let mut grid = vec![0.0];
    grid.extend((0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64));
    grid.push(PI);
    grid
}

pub fn indicator_profile<F: Analytic + ?Sized>(
    f: &F,
    thetas: &[f64],
    r_lo: f64,
    r_hi: f64,
    n_radii: usize,
) -> Result<IndicatorProfile> {
    let fits = thetas
        .par_iter()
        .map(|&t| ray_fit(f, t, r_lo, r_hi, n_radii))
        .collect::<Result<Vec<_>>>()?;
    Ok(IndicatorProfile::from_fits(&fits))
}

/// Indicator profile of d_0 on the standard grid.
pub fn d0_indicator_profile(
    profile: &Profile,
    r_lo: f64,
    r_hi: f64,
    settings: &SolverSettings,
) -> Result<IndicatorProfile> {
    profile.require_strict()?;
    if r_hi > settings.k_max {
        return Err(Error::WavenumberTooLarge { k_abs: r_hi, k_max: settings.k_max });
    }
    let f = D0Function::new(profile, *settings);
    indicator_profile(&f, &standard_theta_grid(), r_lo, r_hi, DEFAULT_RADII)
}

/// Exponential type as the largest indicator value.
///
/// The grid must cover [0.05, pi - 0.05] with spacing at most pi/36.
pub fn type_estimate(indicator: &IndicatorProfile) -> Result<f64> {
    let mut interior: Vec<f64> = indicator
        .theta_grid
        .iter()
        .copied()
        .filter(|t| *t >= AXIS_EXCLUSION - 1e-12 && *t <= PI - AXIS_EXCLUSION + 1e-12)
        .collect();
    interior.sort_by(f64::total_cmp);
    let covers = match (interior.first(), interior.last()) {
        (Some(&first), Some(&last)) => {
            first <= AXIS_EXCLUSION + MAX_THETA_STEP && last >= PI - AXIS_EXCLUSION - MAX_THETA_STEP
        }
        _ => false,
    };
    let fine = interior.windows(2).all(|w| w[1] - w[0] <= MAX_THETA_STEP + 1e-12);
    if !(covers && fine) {
        return Err(Error::Parameter(
            "theta grid must cover [0.05, pi - 0.05] with step at most pi/36".into(),
        ));
    }
    Ok(indicator.h_values.iter().copied().fold(f64::NEG_INFINITY, f64::max))
}

/// Slope of the counting function of a wedge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub wedge: WedgeRegion,
    pub delta: f64,
    pub slope_stderr: f64,
    /// Zeros counted between r1/3 and r1.
    pub zeros_in_window: u64,
    /// Set when the window holds fewer than five zeros.
    pub insufficient_data: bool,
}

/// Number of fit radii used for counting-function slopes.
const DENSITY_SAMPLES: usize = 200;

/// Least-squares slope of n(r, alpha, beta) over r in [r1/3, r1].
pub fn density_estimate(report: &SpectrumReport, wedge: &WedgeRegion) -> Result<DensityEstimate> {
    wedge.validate()?;
    let r1 = wedge.r1;
    let r_lo = r1 / 3.0;
    let radii: Vec<f64> = (0..DENSITY_SAMPLES)
        .map(|i| r_lo + (r1 - r_lo) * i as f64 / (DENSITY_SAMPLES - 1) as f64)
        .collect();
    let counts = radii
        .iter()
        .map(|&r| counting_function(report, r, wedge.alpha, wedge.beta).map(|n| n as f64))
        .collect::<Result<Vec<_>>>()?;
    let zeros_in_window = (counts[DENSITY_SAMPLES - 1] - counting_function(report, r_lo * (1.0 - 1e-12), wedge.alpha, wedge.beta)? as f64) as u64;
    let (delta, slope_stderr) = fit_line(&radii, &counts)?;
    Ok(DensityEstimate {
        wedge: *wedge,
        delta: delta.max(0.0),
        slope_stderr,
        zeros_in_window,
        insufficient_data: zeros_in_window < MIN_DENSITY_ZEROS,
    })
}

/// Zeros together with their reflections, merged and sorted by modulus.
fn orbit_sorted(zeros: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut reps: Vec<Complex64> = Vec::new();
    for &z in zeros {
        if z.norm() == 0.0 {
            return Err(Error::Parameter("product zeros must be nonzero".into()));
        }
        let rep = Complex64::new(z.re.abs(), z.im.abs());
        if !reps.iter().any(|r| (r - rep).norm() <= 1e-12 * (1.0 + rep.norm())) {
            reps.push(rep);
        }
    }
    let mut all: Vec<Complex64> = reps.into_iter().flat_map(reflection_orbit).collect();
    all.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
    Ok(all)
}

/// ln of the genus-1 product over the reflection-closed zero set, or `None`
/// where z coincides with a zero.
pub fn hadamard_log(zeros: &[Complex64], z: Complex64) -> Result<Option<Complex64>> {
    let all = orbit_sorted(zeros)?;
    let mut sum = Complex64::new(0.0, 0.0);
    for zn in all {
        if (z - zn).norm() < HADAMARD_ZERO_DISTANCE {
            return Ok(None);
        }
        let q = z / zn;
        sum += (1.0 - q).ln() + q;
    }
    Ok(Some(sum))
}

/// Truncated genus-1 product prod (1 - z/z_n) exp(z/z_n) over the supplied
/// zeros and their reflections.
pub fn hadamard_truncated(zeros: &[Complex64], z: Complex64) -> Result<Complex64> {
    Ok(match hadamard_log(zeros, z)? {
        Some(log) => log.exp(),
        None => Complex64::new(0.0, 0.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CartwrightOptions {
    /// Off-axis wedge is [margin, pi - margin].
    pub off_axis_margin: f64,
    /// Near-axis wedge is |arg k| <= half_width.
    pub near_half_width: f64,
    pub off_axis_tolerance: f64,
    pub relative_tolerance: f64,
}

impl Default for CartwrightOptions {
    fn default() -> Self {
        Self { off_axis_margin: 0.3, near_half_width: 0.2, off_axis_tolerance: 0.01, relative_tolerance: 0.25 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flag: Option<String>,
}

impl CheckOutcome {
    fn insufficient(name: &str, reason: &str) -> Self {
        Self {
            name: name.into(),
            passed: false,
            measured: f64::NAN,
            expected: f64::NAN,
            tolerance: f64::NAN,
            flag: Some(format!("insufficient data: {reason}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartwrightDiagnostic {
    pub type_estimate: f64,
    pub off_axis_density: Option<DensityEstimate>,
    pub near_axis_density: Option<DensityEstimate>,
    pub product_growth: Option<f64>,
    pub checks: Vec<CheckOutcome>,
}

impl CartwrightDiagnostic {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

const OFF_AXIS: &str = "off-axis density vanishes";
const ON_AXIS: &str = "near-axis density matches type / pi";
const PRODUCT: &str = "product growth on the imaginary axis matches pi * density";

fn relative_check(name: &str, measured: f64, expected: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        passed: (measured - expected).abs() <= tol * expected.abs(),
        measured,
        expected,
        tolerance: tol,
        flag: None,
    }
}

/// Compares the located zeros with the growth of the function.
pub fn cartwright_check(
    report: &SpectrumReport,
    indicator: &IndicatorProfile,
    options: &CartwrightOptions,
) -> CartwrightDiagnostic {
    let sigma = type_estimate(indicator)
        .unwrap_or_else(|_| indicator.h_values.iter().copied().fold(f64::NAN, f64::max));
    let mut diag = CartwrightDiagnostic {
        type_estimate: sigma,
        off_axis_density: None,
        near_axis_density: None,
        product_growth: None,
        checks: Vec::new(),
    };
    if report.zeros.is_empty() {
        diag.checks = [OFF_AXIS, ON_AXIS, PRODUCT]
            .iter()
            .map(|n| CheckOutcome::insufficient(n, "empty spectrum"))
            .collect();
        return diag;
    }
    let r1 = report.region.r1;
    let r0 = report.region.r0;

    let off = WedgeRegion::new(r0, r1, options.off_axis_margin, PI - options.off_axis_margin)
        .and_then(|w| density_estimate(report, &w));
    diag.checks.push(match &off {
        Ok(d) => CheckOutcome {
            name: OFF_AXIS.into(),
            passed: d.delta <= options.off_axis_tolerance,
            measured: d.delta,
            expected: 0.0,
            tolerance: options.off_axis_tolerance,
            flag: None,
        },
        Err(e) => CheckOutcome::insufficient(OFF_AXIS, &e.to_string()),
    });
    diag.off_axis_density = off.ok();

    let near = WedgeRegion::about_real_axis(r0, r1, options.near_half_width)
        .and_then(|w| density_estimate(report, &w));
    diag.checks.push(match &near {
        Ok(d) if d.insufficient_data => {
            CheckOutcome::insufficient(ON_AXIS, &format!("{} zeros in the fit window", d.zeros_in_window))
        }
        Ok(d) => relative_check(ON_AXIS, d.delta, sigma / PI, options.relative_tolerance),
        Err(e) => CheckOutcome::insufficient(ON_AXIS, &e.to_string()),
    });
    diag.near_axis_density = near.as_ref().ok().copied();

    let zeros: Vec<Complex64> = report.zeros.iter().map(|z| z.k).collect();
    let growth = product_growth(&zeros, r1);
    diag.checks.push(match (&near, growth) {
        (Ok(d), Ok(slope)) if !d.insufficient_data => {
            diag.product_growth = Some(slope);
            relative_check(PRODUCT, slope, PI * d.delta, options.relative_tolerance)
        }
        (_, Err(e)) => CheckOutcome::insufficient(PRODUCT, &e.to_string()),
        _ => CheckOutcome::insufficient(PRODUCT, "near-axis density unavailable"),
    });
    diag
}

/// Growth rate of ln|P(it)| over t in [R/20, R/5].
pub fn product_growth(zeros: &[Complex64], r: f64) -> Result<f64> {
    let ts = geometric_grid(r / 20.0, r / 5.0, DEFAULT_RADII);
    let logs = ts
        .par_iter()
        .map(|&t| {
            hadamard_log(zeros, Complex64::new(0.0, t))?
                .map(|l| l.re)
                .ok_or_else(|| Error::DegenerateFit("product vanishes on the imaginary axis".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fit_growth(&ts, &logs)?.0)
}
