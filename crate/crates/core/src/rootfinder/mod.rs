//! Argument-principle zero counting and isolation for analytic functions.
//!
//! Windings are tracked along rectangle boundaries with adaptive sampling;
//! rectangles with nonzero winding are quadrisected until each holds a
//! single zero, which Newton's method then refines.

mod region;
mod report;

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::determinant::{d0, K_MIN};
use crate::error::{Error, Result};
use crate::profile::Profile;
use crate::radial::SolverSettings;

pub use region::{fold_angle, reflection_orbit, Rect, WedgeRegion};
pub use report::{compute_spectrum, counting_function, SpectrumReport, SpectrumSettings, Zero};

/// Perturbation attempts before a boundary zero becomes an error.
pub const PERTURBATION_ATTEMPTS: u32 = 5;
const PERTURBATION_BASE: f64 = 1e-4;

/// A function value carried as mantissas on a shared natural-log scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub value: Complex64,
    pub derivative: Option<Complex64>,
    /// Size of the terms whose cancellation produced `value`.
    pub term_scale: f64,
    pub log_scale: f64,
}

impl Sample {
    pub fn plain(value: Complex64, derivative: Option<Complex64>) -> Self {
        Self { value, derivative, term_scale: value.norm(), log_scale: 0.0 }
    }

    pub fn ln_abs(&self) -> f64 {
        self.value.norm().ln() + self.log_scale
    }

    /// f'/f, independent of the scale.
    pub fn log_derivative(&self) -> Option<Complex64> {
        self.derivative.map(|d| d / self.value)
    }

    /// |f| relative to its term scale.
    pub fn cancellation_ratio(&self) -> f64 {
        if self.term_scale > 0.0 {
            self.value.norm() / self.term_scale
        } else if self.value.norm() == 0.0 {
            0.0
        } else {
            1.0
        }
    }
}

/// An analytic function that can be sampled anywhere in its search region.
pub trait Analytic: Sync {
    fn sample(&self, z: Complex64) -> Result<Sample>;
}

/// Wraps a closure returning a value and optional derivative.
pub struct FnAnalytic<F> {
    f: F,
}

impl<F> FnAnalytic<F>
where
    F: Fn(Complex64) -> (Complex64, Option<Complex64>) + Sync,
{
    pub fn new(f: F) -> Self {
        Self { f }
    }
}

impl<F> Analytic for FnAnalytic<F>
where
    F: Fn(Complex64) -> (Complex64, Option<Complex64>) + Sync,
{
    fn sample(&self, z: Complex64) -> Result<Sample> {
        let (value, derivative) = (self.f)(z);
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::NonFinite(format!("function value at {z}")));
        }
        Ok(Sample::plain(value, derivative))
    }
}

/// d_0 of a profile as an analytic function of k.
pub struct D0Function<'a> {
    profile: &'a Profile,
    settings: SolverSettings,
}

impl<'a> D0Function<'a> {
    pub fn new(profile: &'a Profile, settings: SolverSettings) -> Self {
        Self { profile, settings }
    }
}

impl Analytic for D0Function<'_> {
    fn sample(&self, z: Complex64) -> Result<Sample> {
        let d = d0(self.profile, z, &self.settings)?;
        Ok(Sample {
            value: d.mantissa,
            derivative: d.derivative_mantissa,
            term_scale: d.term_scale_mantissa,
            log_scale: d.log_scale,
        })
    }
}

/// Controls for zero isolation and refinement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Target side of the tiles covering a search region.
    pub tile_size: f64,
    /// Newton stops once the step is below this, relative to max(1, |z|).
    pub newton_tol: f64,
    pub max_newton_iters: u32,
    /// Boxes below this diameter are not split further.
    pub isolation_diameter: f64,
    /// Extra room around the sector so zeros on its edges are interior.
    pub margin: f64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            tile_size: 8.0,
            newton_tol: 1e-10,
            max_newton_iters: 50,
            isolation_diameter: 1e-6,
            margin: 0.25,
        }
    }
}

impl SearchOptions {
    pub fn validate(&self) -> Result<()> {
        let ok = self.tile_size > 0.0
            && self.newton_tol > 0.0
            && self.max_newton_iters > 0
            && self.isolation_diameter > 0.0
            && self.margin >= 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Parameter(format!("invalid search options {self:?}")))
        }
    }
}

/// Winding of f around a rectangle together with boundary statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winding {
    pub count: i64,
    pub samples: usize,
    /// ln max |f| over the boundary samples.
    pub boundary_log_max: f64,
}

struct Walker<'f, F: ?Sized> {
    f: &'f F,
    min_len: f64,
    samples: usize,
    log_max: f64,
}

impl<F: Analytic + ?Sized> Walker<'_, F> {
    fn sample(&mut self, z: Complex64) -> Result<Sample> {
        let s = self.f.sample(z)?;
        if s.value.norm() == 0.0 {
            return Err(Error::BoundaryZero { attempts: 0 });
        }
        self.samples += 1;
        self.log_max = self.log_max.max(s.ln_abs());
        Ok(s)
    }

    /// Phase change of f from `za` to `zb`, bisecting until every piece is resolved.
    fn phase(&mut self, za: Complex64, sa: Sample, zb: Complex64, sb: Sample) -> Result<f64> {
        let mut total = 0.0;
        let mut stack = vec![(za, sa, zb, sb)];
        while let Some((za, sa, zb, sb)) = stack.pop() {
            let ratio = sb.value / sa.value;
            let dphi = ratio.arg();
            if resolved(za, &sa, zb, &sb, dphi) {
                total += dphi;
                continue;
            }
            if (zb - za).norm() < self.min_len {
                return Err(Error::BoundaryZero { attempts: 0 });
            }
            let zm = 0.5 * (za + zb);
            let sm = self.sample(zm)?;
            // Pushed so the first half is processed first.
            stack.push((zm, sm, zb, sb));
            stack.push((za, sa, zm, sm));
        }
        Ok(total)
    }
}

fn resolved(za: Complex64, sa: &Sample, zb: Complex64, sb: &Sample, dphi: f64) -> bool {
    if dphi.abs() >= FRAC_PI_2 {
        return false;
    }
    if (sb.ln_abs() - sa.ln_abs()).abs() > 2.0 {
        return false;
    }
    let h = (zb - za).norm();
    match (sa.log_derivative(), sb.log_derivative()) {
        (Some(ga), Some(gb)) => h * ga.norm() <= 1.0 && h * gb.norm() <= 1.0,
        _ => dphi.abs() < PI / 8.0,
    }
}

/// Number of zeros (with multiplicity) of f inside `rect`.
///
/// Fails with `BoundaryZero` when f vanishes on or numerically next to the
/// boundary; callers perturb the contour in that case.
pub fn winding<F: Analytic + ?Sized>(f: &F, rect: &Rect) -> Result<Winding> {
    let scale = 1.0 + rect.center().norm();
    let min_len = (1e-9 * rect.perimeter()).max(1e-13 * scale);
    let mut walker = Walker { f, min_len, samples: 0, log_max: f64::NEG_INFINITY };
    let corners = rect.corners();
    let corner_samples = corners.iter().map(|&z| walker.sample(z)).collect::<Result<Vec<_>>>()?;
    let mut total = 0.0;
    for i in 0..4 {
        let (za, zb) = (corners[i], corners[(i + 1) % 4]);
        let (mut zp, mut sp) = (za, corner_samples[i]);
        const PIECES: usize = 4;
        for j in 1..=PIECES {
            let (zq, sq) = if j == PIECES {
                (zb, corner_samples[(i + 1) % 4])
            } else {
                let zq = za + (zb - za) * (j as f64 / PIECES as f64);
                (zq, walker.sample(zq)?)
            };
            total += walker.phase(zp, sp, zq, sq)?;
            zp = zq;
            sp = sq;
        }
    }
    let turns = total / TAU;
    let count = turns.round();
    if (turns - count).abs() > 0.25 {
        return Err(Error::PhaseTracking(format!("non-integer winding {turns} around {rect:?}")));
    }
    Ok(Winding { count: count as i64, samples: walker.samples, boundary_log_max: walker.log_max })
}

/// Counts zeros inside `rect`, growing the contour outward slightly when a
/// zero sits on it.
pub fn count_zeros<F: Analytic + ?Sized>(f: &F, rect: &Rect) -> Result<i64> {
    let size = rect.width().max(rect.height());
    let mut attempt = 0;
    let mut current = *rect;
    loop {
        match winding(f, &current) {
            Ok(w) => return Ok(w.count),
            Err(Error::BoundaryZero { .. }) if attempt < PERTURBATION_ATTEMPTS => {
                current = rect.expanded(PERTURBATION_BASE * size * f64::powi(2.0, attempt as i32));
                attempt += 1;
            }
            Err(Error::BoundaryZero { .. }) => {
                return Err(Error::BoundaryZero { attempts: PERTURBATION_ATTEMPTS })
            }
            Err(e) => return Err(e),
        }
    }
}

/// Zeros of f inside `rect` whose winding is `count`.
pub fn isolate<F: Analytic + ?Sized>(
    f: &F,
    rect: &Rect,
    winding: &Winding,
    options: &SearchOptions,
) -> Result<Vec<Zero>> {
    isolate_in_annulus(f, rect, winding, options, (0.0, f64::INFINITY))
}

/// Like `isolate`, but drops boxes lying entirely outside `r_lo <= |z| <= r_hi`.
fn isolate_in_annulus<F: Analytic + ?Sized>(
    f: &F,
    rect: &Rect,
    winding: &Winding,
    options: &SearchOptions,
    annulus: (f64, f64),
) -> Result<Vec<Zero>> {
    if winding.count <= 0 {
        return Ok(Vec::new());
    }
    let (rmin, rmax) = rect.modulus_range();
    if rmax < annulus.0 || rmin > annulus.1 {
        return Ok(Vec::new());
    }
    let small = rect.diameter() < options.isolation_diameter;
    if winding.count == 1 || small {
        if let Some(zero) = refine(f, rect, winding, options)? {
            return Ok(vec![zero]);
        }
        if small {
            return Ok(vec![unrefined(f, rect, winding)]);
        }
    }
    let children = split_with_windings(f, rect, winding.count)?;
    let nested = children
        .par_iter()
        .filter(|(_, w)| w.count > 0)
        .map(|(child, w)| isolate_in_annulus(f, child, w, options, annulus))
        .collect::<Result<Vec<_>>>()?;
    Ok(nested.into_iter().flatten().collect())
}

fn split_with_windings<F: Analytic + ?Sized>(
    f: &F,
    rect: &Rect,
    expected: i64,
) -> Result<Vec<(Rect, Winding)>> {
    let mut last_problem = String::new();
    for attempt in 0..=PERTURBATION_ATTEMPTS + 1 {
        let shift = if attempt == 0 { 0.0 } else { PERTURBATION_BASE * f64::powi(2.0, attempt as i32 - 1) };
        let children = rect.split(0.5 + shift, 0.5 + 0.7 * shift);
        let windings: Vec<Result<Winding>> = children.par_iter().map(|c| winding(f, c)).collect();
        if windings.iter().any(|w| matches!(w, Err(Error::BoundaryZero { .. }))) {
            last_problem = "zero on a split line".into();
            continue;
        }
        let windings = windings.into_iter().collect::<Result<Vec<_>>>()?;
        let sum: i64 = windings.iter().map(|w| w.count).sum();
        if sum != expected {
            last_problem = format!("children sum to {sum}, parent has {expected}");
            continue;
        }
        return Ok(children.into_iter().zip(windings).collect());
    }
    Err(Error::CountMismatch(format!("{last_problem} in {rect:?}")))
}

/// Newton from the box center, with a secant fallback; `None` if the iterate
/// does not settle inside the box.
fn refine<F: Analytic + ?Sized>(
    f: &F,
    rect: &Rect,
    winding: &Winding,
    options: &SearchOptions,
) -> Result<Option<Zero>> {
    let start = rect.center();
    let inside = |z: Complex64| rect.contains(z, 1e-12 * (1.0 + z.norm()));
    let wander = |z: Complex64| !rect.contains(z, rect.diameter());
    let mut z = start;
    let mut iters = 0;
    let mut converged = false;
    let mut use_secant = false;
    while iters < options.max_newton_iters {
        let s = match f.sample(z) {
            Ok(s) => s,
            Err(_) => break,
        };
        if s.value.norm() == 0.0 {
            converged = true;
            break;
        }
        let Some(d) = s.derivative else {
            use_secant = true;
            break;
        };
        if d.norm() == 0.0 {
            break;
        }
        let step = s.value / d;
        z -= step;
        iters += 1;
        if wander(z) || !(z.re.is_finite() && z.im.is_finite()) {
            break;
        }
        if step.norm() <= options.newton_tol * z.norm().max(1.0) {
            converged = true;
            // One more step costs little and lands on the rounding floor.
            if let Ok(s) = f.sample(z) {
                if let Some(d) = s.derivative.filter(|d| d.norm() > 0.0) {
                    let last = z - s.value / d;
                    if (last - z).norm() <= step.norm() {
                        z = last;
                    }
                }
            }
            break;
        }
    }
    if use_secant {
        (z, iters, converged) = secant(f, rect, options);
    }
    if !converged || !inside(z) {
        return Ok(None);
    }
    let residual_sample = f.sample(z)?;
    Ok(Some(Zero {
        k: z,
        multiplicity: winding.count as u32,
        residual: residual_sample.ln_abs().exp(),
        boundary_log_max: winding.boundary_log_max,
        newton_iters: iters,
        refined: true,
        bounding_box: *rect,
    }))
}

fn secant<F: Analytic + ?Sized>(f: &F, rect: &Rect, options: &SearchOptions) -> (Complex64, u32, bool) {
    let value = |z: Complex64| f.sample(z).ok().map(|s| s.value * s.log_scale.exp());
    let mut z0 = rect.center();
    let mut z1 = z0 + Complex64::new(0.1, 0.07) * rect.diameter();
    let (Some(mut f0), Some(mut f1)) = (value(z0), value(z1)) else {
        return (z0, 0, false);
    };
    for iter in 1..=options.max_newton_iters {
        let denom = f1 - f0;
        if denom.norm() == 0.0 {
            return (z1, iter, f1.norm() == 0.0);
        }
        let z2 = z1 - f1 * (z1 - z0) / denom;
        if !rect.contains(z2, rect.diameter()) {
            return (z2, iter, false);
        }
        if (z2 - z1).norm() <= options.newton_tol * z2.norm().max(1.0) {
            return (z2, iter, true);
        }
        let Some(f2) = value(z2) else {
            return (z2, iter, false);
        };
        (z0, f0, z1, f1) = (z1, f1, z2, f2);
    }
    (z1, options.max_newton_iters, false)
}

fn unrefined<F: Analytic + ?Sized>(f: &F, rect: &Rect, winding: &Winding) -> Zero {
    let z = rect.center();
    let residual = f.sample(z).map(|s| s.ln_abs().exp()).unwrap_or(f64::NAN);
    Zero {
        k: z,
        multiplicity: winding.count as u32,
        residual,
        boundary_log_max: winding.boundary_log_max,
        newton_iters: 0,
        refined: false,
        bounding_box: *rect,
    }
}

/// Median cancellation ratio of f over a polar grid of the region.
fn degeneracy_ratio<F: Analytic + ?Sized>(f: &F, region: &WedgeRegion) -> Result<f64> {
    let (lo, hi) = region.folded_range();
    let points: Vec<Complex64> = (0..10)
        .flat_map(|i| {
            let r = region.r0 * (region.r1 / region.r0).powf((i as f64 + 0.5) / 10.0);
            (0..10).map(move |j| Complex64::from_polar(r, lo + (hi - lo) * (j as f64 + 0.5) / 10.0))
        })
        .collect();
    let mut ratios = points
        .par_iter()
        .map(|&z| f.sample(z).map(|s| s.cancellation_ratio()))
        .collect::<Result<Vec<_>>>()?;
    ratios.sort_by(f64::total_cmp);
    Ok(0.5 * (ratios[49] + ratios[50]))
}

pub const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// Tiles covering the first-quadrant part of the folded sector.
fn tiles(region: &WedgeRegion, options: &SearchOptions, jitter: u32) -> Result<Vec<Rect>> {
    let (lo, hi) = region.folded_range();
    // Unequal margins keep grid lines off round values; each retry moves them all.
    let m = options.margin * (1.0 + 0.29 * jitter as f64);
    let m_far = 1.618 * options.margin * (1.0 + 0.23 * jitter as f64);
    let x0 = if hi >= FRAC_PI_2 - 1e-12 { -m } else { region.r0 * hi.cos() - m };
    let x1 = region.r1 * lo.cos() + m_far;
    let y0 = if lo <= 1e-12 { -m } else { region.r0 * lo.sin() - m };
    let y1 = region.r1 * hi.sin() + m_far;
    let bbox = Rect::new(x0, x1, y0, y1)?;
    let nx = (bbox.width() / options.tile_size).ceil().max(1.0) as usize;
    let ny = (bbox.height() / options.tile_size).ceil().max(1.0) as usize;
    let (dx, dy) = (bbox.width() / nx as f64, bbox.height() / ny as f64);
    let mut out = Vec::with_capacity(nx * ny);
    for i in 0..nx {
        for j in 0..ny {
            let tile = Rect {
                x0: x0 + i as f64 * dx,
                x1: if i + 1 == nx { x1 } else { x0 + (i + 1) as f64 * dx },
                y0: y0 + j as f64 * dy,
                y1: if j + 1 == ny { y1 } else { y0 + (j + 1) as f64 * dy },
            };
            let (rmin, rmax) = tile.modulus_range();
            if rmax < region.r0 - m || rmin > region.r1 + m_far {
                continue;
            }
            if let Some((alo, ahi)) = tile.arg_range() {
                if ahi < lo - 1e-9 || alo > hi + 1e-9 {
                    continue;
                }
            }
            out.push(tile);
        }
    }
    Ok(out)
}

/// Zeros of f in the region's reflection-symmetric hull, one per orbit
/// {z, -z, conj z, -conj z}, reported in the closed first quadrant and
/// sorted by modulus.
pub fn find_zeros<F: Analytic + ?Sized>(
    f: &F,
    region: &WedgeRegion,
    options: &SearchOptions,
) -> Result<Vec<Zero>> {
    region.validate()?;
    options.validate()?;
    if degeneracy_ratio(f, region)? < DEGENERACY_THRESHOLD {
        return Err(Error::IdenticallyZero);
    }
    let mut jitter = 0;
    let zeros = loop {
        let tiles = tiles(region, options, jitter)?;
        let result = tiles
            .par_iter()
            .map(|tile| {
                let w = winding(f, tile)?;
                isolate_in_annulus(f, tile, &w, options, (region.r0, region.r1))
            })
            .collect::<Result<Vec<_>>>();
        match result {
            Err(Error::BoundaryZero { .. }) if jitter < PERTURBATION_ATTEMPTS => jitter += 1,
            Err(Error::BoundaryZero { .. }) => {
                return Err(Error::BoundaryZero { attempts: PERTURBATION_ATTEMPTS })
            }
            other => break other?,
        }
    };
    let (lo, hi) = region.folded_range();
    let mut kept: Vec<Zero> = zeros
        .into_iter()
        .flatten()
        .map(snap_to_axes)
        .filter(|z| z.k.re >= 0.0 && z.k.im >= 0.0)
        .filter(|z| {
            let r = z.k.norm();
            let theta = fold_angle(z.k.arg());
            r >= region.r0.max(K_MIN) && r <= region.r1 && theta >= lo - 1e-12 && theta <= hi + 1e-12
        })
        .collect();
    kept.sort_by(|a, b| a.k.norm().total_cmp(&b.k.norm()));
    Ok(kept)
}

/// Zeros within rounding of an axis are placed on it.
fn snap_to_axes(mut zero: Zero) -> Zero {
    let tol = 1e-9 * zero.k.norm().max(1.0);
    if zero.k.im.abs() <= tol {
        zero.k.im = 0.0;
    }
    if zero.k.re.abs() <= tol {
        zero.k.re = 0.0;
    }
    zero
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sine() -> FnAnalytic<impl Fn(Complex64) -> (Complex64, Option<Complex64>) + Sync> {
        FnAnalytic::new(|z: Complex64| (z.sin(), Some(z.cos())))
    }

    #[test]
    fn sine_has_one_zero_near_pi() {
        let rect = Rect::new(2.9, 3.3, -0.2, 0.2).unwrap();
        assert_eq!(count_zeros(&sine(), &rect).unwrap(), 1);
    }

    #[test]
    fn cubic_counts_multiplicity() {
        let f = FnAnalytic::new(|z: Complex64| (z * z * z, Some(3.0 * z * z)));
        let rect = Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        assert_eq!(count_zeros(&f, &rect).unwrap(), 3);
    }

    #[test]
    fn counting_without_derivative() {
        let f = FnAnalytic::new(|z: Complex64| ((z - c(0.3, 0.2)) * (z + c(0.1, 0.4)), None));
        let rect = Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        assert_eq!(count_zeros(&f, &rect).unwrap(), 2);
    }

    #[test]
    fn boundary_zero_is_perturbed_away() {
        // sin vanishes at pi, exactly on the left edge.
        let rect = Rect::new(std::f64::consts::PI, 4.0, -0.5, 0.5).unwrap();
        let n = count_zeros(&sine(), &rect).unwrap();
        assert_eq!(n, 1);
    }

    #[test]
    fn isolation_finds_all_sine_zeros() {
        let rect = Rect::new(0.5, 20.0, -1.0, 1.3).unwrap();
        let w = winding(&sine(), &rect).unwrap();
        assert_eq!(w.count, 6);
        let mut zeros = isolate(&sine(), &rect, &w, &SearchOptions::default()).unwrap();
        zeros.sort_by(|a, b| a.k.re.total_cmp(&b.k.re));
        for (n, z) in zeros.iter().enumerate() {
            let expected = (n + 1) as f64 * PI;
            assert!((z.k - expected).norm() < 1e-12, "{} vs {expected}", z.k);
            assert!(z.refined);
            assert_eq!(z.multiplicity, 1);
        }
    }

    #[test]
    fn double_zero_is_isolated_with_multiplicity() {
        let root = c(0.3, 0.1);
        let f = FnAnalytic::new(move |z: Complex64| {
            let d = z - root;
            (d * d * (z + 2.0), Some(2.0 * d * (z + 2.0) + d * d))
        });
        let rect = Rect::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let w = winding(&f, &rect).unwrap();
        let zeros = isolate(&f, &rect, &w, &SearchOptions::default()).unwrap();
        let total: u32 = zeros.iter().map(|z| z.multiplicity).sum();
        assert_eq!(total, 2);
        for z in &zeros {
            assert!((z.k - root).norm() < 1e-5);
        }
    }

    #[test]
    fn wedge_search_reports_first_quadrant_representatives() {
        // Zeros at n pi on the real axis and i n on the imaginary axis.
        let f = FnAnalytic::new(|z: Complex64| {
            let s = z.sin();
            let t = (PI * z / c(0.0, 1.0)).sin();
            (s * t, Some(z.cos() * t + s * (PI / c(0.0, 1.0)) * (PI * z / c(0.0, 1.0)).cos()))
        });
        let region = WedgeRegion::new(0.5, 10.0, -PI, PI).unwrap();
        let zeros = find_zeros(&f, &region, &SearchOptions::default()).unwrap();
        let real: Vec<f64> = zeros.iter().filter(|z| z.k.im == 0.0).map(|z| z.k.re).collect();
        let imag: Vec<f64> = zeros.iter().filter(|z| z.k.re == 0.0).map(|z| z.k.im).collect();
        assert_eq!(real.len(), 3, "{zeros:?}");
        assert_eq!(imag.len(), 10, "{zeros:?}");
        assert_eq!(zeros.len(), 13);
        for (n, y) in imag.iter().enumerate() {
            assert!((y - (n + 1) as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn identically_zero_is_rejected() {
        let f = FnAnalytic::new(|_: Complex64| (c(0.0, 0.0), Some(c(0.0, 0.0))));
        let region = WedgeRegion::about_real_axis(1.0, 5.0, 0.2).unwrap();
        assert!(matches!(
            find_zeros(&f, &region, &SearchOptions::default()),
            Err(Error::IdenticallyZero)
        ));
    }
}
