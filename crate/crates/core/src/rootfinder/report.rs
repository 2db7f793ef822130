use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::region::{angle_in, fold_angle, folded_hull, reflection_orbit, Rect, WedgeRegion};
use super::{find_zeros, D0Function, SearchOptions};
use crate::determinant::K_MIN;
use crate::error::{Error, Result};
use crate::profile::{DerivedScales, Profile};
use crate::radial::SolverSettings;

/// A located zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "ZeroRecord", from = "ZeroRecord")]
pub struct Zero {
    pub k: Complex64,
    pub multiplicity: u32,
    /// |f(k)| at the reported location.
    pub residual: f64,
    /// ln of the largest |f| seen on the isolating box boundary.
    pub boundary_log_max: f64,
    pub newton_iters: u32,
    /// False when Newton did not settle and `k` is the box center.
    pub refined: bool,
    pub bounding_box: Rect,
}

impl Zero {
    /// Residual relative to 1 + max |f| on the isolating boundary.
    pub fn relative_residual(&self) -> f64 {
        let scale = 1.0 + self.boundary_log_max.exp();
        self.residual / scale
    }
}

#[derive(Clone, Serialize, Deserialize)]
struct ZeroRecord {
    re: f64,
    im: f64,
    multiplicity: u32,
    residual: f64,
    #[serde(default)]
    boundary_log_max: f64,
    #[serde(default)]
    newton_iters: u32,
    #[serde(default = "default_refined")]
    refined: bool,
    #[serde(rename = "box", default)]
    bounding_box: Option<Rect>,
}

fn default_refined() -> bool {
    true
}

impl From<Zero> for ZeroRecord {
    fn from(z: Zero) -> Self {
        Self {
            re: z.k.re,
            im: z.k.im,
            multiplicity: z.multiplicity,
            residual: z.residual,
            boundary_log_max: z.boundary_log_max,
            newton_iters: z.newton_iters,
            refined: z.refined,
            bounding_box: Some(z.bounding_box),
        }
    }
}

impl From<ZeroRecord> for Zero {
    fn from(r: ZeroRecord) -> Self {
        let k = Complex64::new(r.re, r.im);
        Self {
            k,
            multiplicity: r.multiplicity,
            residual: r.residual,
            boundary_log_max: r.boundary_log_max,
            newton_iters: r.newton_iters,
            refined: r.refined,
            bounding_box: r.bounding_box.unwrap_or(Rect { x0: r.re, x1: r.re, y0: r.im, y1: r.im }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SpectrumSettings {
    pub solver: SolverSettings,
    pub search: SearchOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
}

impl Default for Metadata {
    fn default() -> Self {
        Self { tool: env!("CARGO_PKG_NAME").into(), version: env!("CARGO_PKG_VERSION").into() }
    }
}

/// Zeros of d_0 in a wedge, one representative per reflection orbit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub profile_hash: String,
    pub region: WedgeRegion,
    pub k_min_excluded: f64,
    /// Representatives in the closed first quadrant, sorted by modulus.
    pub zeros: Vec<Zero>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<DerivedScales>,
    #[serde(default)]
    pub settings: SpectrumSettings,
    #[serde(default)]
    pub metadata: Metadata,
}

impl SpectrumReport {
    /// Builds a report from arbitrary zero locations, folding each into its
    /// first-quadrant representative and merging repeated orbits.
    pub fn from_zeros(region: WedgeRegion, zeros: &[Complex64]) -> Result<Self> {
        region.validate()?;
        let mut reps: Vec<Zero> = Vec::new();
        for &z in zeros {
            let rep = Complex64::new(z.re.abs(), z.im.abs());
            if reps.iter().any(|r| (r.k - rep).norm() <= 1e-12 * (1.0 + rep.norm())) {
                continue;
            }
            reps.push(Zero {
                k: rep,
                multiplicity: 1,
                residual: 0.0,
                boundary_log_max: 0.0,
                newton_iters: 0,
                refined: true,
                bounding_box: Rect { x0: rep.re, x1: rep.re, y0: rep.im, y1: rep.im },
            });
        }
        reps.sort_by(|a, b| a.k.norm().total_cmp(&b.k.norm()));
        Ok(Self {
            profile_hash: String::new(),
            region,
            k_min_excluded: K_MIN,
            zeros: reps,
            scales: None,
            settings: SpectrumSettings::default(),
            metadata: Metadata::default(),
        })
    }

    /// Every zero of the full reflection orbits, with multiplicity.
    pub fn orbit_points(&self) -> Vec<(Complex64, u32)> {
        self.zeros
            .iter()
            .flat_map(|z| reflection_orbit(z.k).into_iter().map(move |w| (w, z.multiplicity)))
            .collect()
    }

    /// Orbit points lying in the wedge [alpha, beta] with modulus at most r.
    pub fn points_in(&self, r: f64, alpha: f64, beta: f64) -> Result<Vec<(Complex64, u32)>> {
        self.check_coverage(r, alpha, beta)?;
        Ok(self
            .orbit_points()
            .into_iter()
            .filter(|(w, _)| w.norm() <= r && angle_in(w.arg(), alpha, beta))
            .collect())
    }

    fn check_coverage(&self, r: f64, alpha: f64, beta: f64) -> Result<()> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::Parameter(format!("radius {r}")));
        }
        if r > self.region.r1 * (1.0 + 1e-12) {
            return Err(Error::BeyondSearch { r, r1: self.region.r1 });
        }
        if !(beta > alpha) {
            return Err(Error::Region(format!("empty wedge [{alpha}, {beta}]")));
        }
        let (lo, hi) = folded_hull(alpha, beta);
        let (slo, shi) = self.region.folded_range();
        if lo < slo - 1e-9 || hi > shi + 1e-9 {
            return Err(Error::Region(format!(
                "wedge [{alpha}, {beta}] reaches directions outside the searched region"
            )));
        }
        Ok(())
    }

    /// Representatives whose folded argument lies within `half_width` of the real axis.
    pub fn near_real_axis(&self, half_width: f64) -> impl Iterator<Item = &Zero> {
        self.zeros.iter().filter(move |z| fold_angle(z.k.arg()) <= half_width + 1e-12)
    }

    pub fn to_json(&self) -> Result<String> {
        crate::json::to_string(self)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))
    }
}

/// Number of zeros, with multiplicity, in {|k| <= r, alpha <= arg k <= beta}.
pub fn counting_function(report: &SpectrumReport, r: f64, alpha: f64, beta: f64) -> Result<u64> {
    Ok(report.points_in(r, alpha, beta)?.iter().map(|(_, m)| *m as u64).sum())
}

/// Locates the zeros of d_0 for a strict profile.
pub fn compute_spectrum(
    profile: &Profile,
    region: &WedgeRegion,
    settings: &SpectrumSettings,
) -> Result<SpectrumReport> {
    profile.require_strict()?;
    region.validate()?;
    settings.solver.validate()?;
    if region.r1 > settings.solver.k_max {
        return Err(Error::WavenumberTooLarge { k_abs: region.r1, k_max: settings.solver.k_max });
    }
    // Contours and Newton iterates may step slightly past r1.
    let mut eval = settings.solver;
    eval.k_max = eval.k_max.max(region.r1 + settings.search.margin + 3.0 * settings.search.tile_size);
    let f = D0Function::new(profile, eval);
    let zeros = find_zeros(&f, region, &settings.search)?;
    Ok(SpectrumReport {
        profile_hash: profile.identity_hash(),
        region: *region,
        k_min_excluded: K_MIN,
        zeros,
        scales: Some(profile.travel_time()?),
        settings: *settings,
        metadata: Metadata::default(),
    })
}
