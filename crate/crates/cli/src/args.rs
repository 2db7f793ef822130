use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use tte_core::inverse::DEFAULT_MATCH_TOLERANCE;
use tte_core::radial::SolverSettings;
use tte_core::rootfinder::WedgeRegion;

#[derive(Debug, Parser)]
#[command(name = "tte", version, about = "Interior transmission eigenvalues of stratified spheres")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate d_l at given wavenumbers (CSV).
    Eval(EvalArgs),
    /// Locate the zeros of d_0 in a wedge (JSON spectrum report).
    Eigs(EigsArgs),
    /// Indicator function of d_0 on a set of directions (CSV).
    Indicator(IndicatorArgs),
    /// Exponential type of d_0 (JSON).
    Type(TypeArgs),
    /// Counting function and angular density of a spectrum (CSV and JSON).
    Density(DensityArgs),
    /// Consistency of zero densities, type and product growth (JSON).
    Cartwright(CartwrightArgs),
    /// Compare two spectra (JSON verdict).
    Compare(CompareArgs),
    /// Residual of the real-axis asymptotics (CSV).
    CheckAsymptotics(AsymptoticsArgs),
    /// Derived scales and identity hash of a profile.
    ProfileInfo(ProfileInfoArgs),
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Relative tolerance of the radial integrator.
    #[arg(long)]
    pub rtol: Option<f64>,
    /// Absolute tolerance of the radial integrator.
    #[arg(long)]
    pub atol: Option<f64>,
    /// Largest admissible |k|.
    #[arg(long)]
    pub k_max: Option<f64>,
}

impl SolverArgs {
    pub fn settings(&self) -> SolverSettings {
        let base = SolverSettings::default();
        SolverSettings {
            rtol: self.rtol.unwrap_or(base.rtol),
            atol: self.atol.unwrap_or(base.atol),
            k_max: self.k_max.unwrap_or(base.k_max),
        }
    }
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub profile: PathBuf,
    /// Wavenumber as `re` or `re,im`; repeatable.
    #[arg(long = "k", required = true, allow_hyphen_values = true, value_parser = parse_complex)]
    pub k: Vec<Complex64>,
    /// Angular index.
    #[arg(long, default_value_t = 0)]
    pub l: u32,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EigsArgs {
    #[arg(long)]
    pub profile: PathBuf,
    /// Search wedge `r0,r1,alpha,beta`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_wedge)]
    pub wedge: WedgeRegion,
    /// Edge length of the initial search tiles.
    #[arg(long)]
    pub tile_size: Option<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IndicatorArgs {
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long, default_value_t = 50.0)]
    pub r_lo: f64,
    #[arg(long, default_value_t = 300.0)]
    pub r_hi: f64,
    /// Directions to fit; repeatable. Defaults to a grid over [0, pi].
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Vec<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TypeArgs {
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long, default_value_t = 50.0)]
    pub r_lo: f64,
    #[arg(long, default_value_t = 300.0)]
    pub r_hi: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Spectrum report produced by `eigs`.
    #[arg(long)]
    pub spectrum: PathBuf,
    /// Counting wedge `r0,r1,alpha,beta`; the slope is fitted over [r1/3, r1].
    #[arg(long, allow_hyphen_values = true, value_parser = parse_wedge)]
    pub wedge: WedgeRegion,
    /// Counting-function CSV destination.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Summary JSON destination; standard error when omitted.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CartwrightArgs {
    #[arg(long)]
    pub profile: PathBuf,
    /// Precomputed spectrum of the same profile over all directions.
    #[arg(long)]
    pub spectrum: Option<PathBuf>,
    /// Search radius when no spectrum is supplied.
    #[arg(long, default_value_t = 150.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 50.0)]
    pub r_lo: f64,
    #[arg(long, default_value_t = 300.0)]
    pub r_hi: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    /// Relative matching tolerance.
    #[arg(long, default_value_t = DEFAULT_MATCH_TOLERANCE)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AsymptoticsArgs {
    #[arg(long)]
    pub profile: PathBuf,
    #[arg(long, default_value_t = 100.0)]
    pub k_from: f64,
    #[arg(long, default_value_t = 200.0)]
    pub k_to: f64,
    #[arg(long, default_value_t = 10.0)]
    pub k_step: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProfileInfoArgs {
    #[arg(long)]
    pub profile: PathBuf,
    /// Emit JSON instead of text.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_numbers(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|e| format!("`{s}`: {e}")))
        .collect()
}

pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    match parse_numbers(text)?.as_slice() {
        [re] => Ok(Complex64::new(*re, 0.0)),
        [re, im] => Ok(Complex64::new(*re, *im)),
        _ => Err("expected `re` or `re,im`".into()),
    }
}

pub fn parse_wedge(text: &str) -> Result<WedgeRegion, String> {
    match parse_numbers(text)?.as_slice() {
        [r0, r1, alpha, beta] => WedgeRegion::new(*r0, *r1, *alpha, *beta).map_err(|e| e.to_string()),
        _ => Err("expected `r0,r1,alpha,beta`".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("2.5").unwrap(), Complex64::new(2.5, 0.0));
        assert_eq!(parse_complex("-1,3").unwrap(), Complex64::new(-1.0, 3.0));
        assert!(parse_complex("1,2,3").is_err());
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn wedge_forms() {
        let w = parse_wedge("0.5,150,-0.2,0.2").unwrap();
        assert_eq!((w.r0, w.r1, w.alpha, w.beta), (0.5, 150.0, -0.2, 0.2));
        assert!(parse_wedge("0.5,150").is_err());
        assert!(parse_wedge("10,5,0,1").is_err());
    }

    #[test]
    fn cli_is_well_formed() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
