use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use tte_core::determinant::{d0, dl, normalized_residual, K_MIN};
use tte_core::entire::{
    cartwright_check, d0_indicator_profile, density_estimate, indicator_profile, type_estimate,
    CartwrightOptions, DEFAULT_RADII,
};
use tte_core::inverse::compare_spectra;
use tte_core::json::{self, float};
use tte_core::profile::{parse_profile, DerivedScales, Profile};
use tte_core::rootfinder::{
    compute_spectrum, counting_function, D0Function, SearchOptions, SpectrumReport,
    SpectrumSettings, WedgeRegion,
};

use crate::args::*;
use crate::CliError;

type Result<T> = std::result::Result<T, CliError>;

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Eval(args) => eval(args),
        Command::Eigs(args) => eigs(args),
        Command::Indicator(args) => indicator(args),
        Command::Type(args) => exponential_type(args),
        Command::Density(args) => density(args),
        Command::Cartwright(args) => cartwright(args),
        Command::Compare(args) => compare(args),
        Command::CheckAsymptotics(args) => check_asymptotics(args),
        Command::ProfileInfo(args) => profile_info(args),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load_profile(path: &Path) -> Result<Profile> {
    Ok(parse_profile(&read(path)?)?)
}

fn load_spectrum(path: &Path) -> Result<SpectrumReport> {
    Ok(SpectrumReport::from_json(&read(path)?)?)
}

/// Writes to `out`, or to standard output when no path is given.
fn emit(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source })
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&PathBuf>, value: &T) -> Result<()> {
    let mut text = json::to_string(value)?;
    text.push('\n');
    emit(out, &text)
}

fn eval(args: EvalArgs) -> Result<()> {
    let profile = load_profile(&args.profile)?;
    let settings = args.solver.settings();
    settings.validate()?;
    let values = args
        .k
        .par_iter()
        .map(|&k| if args.l == 0 { d0(&profile, k, &settings) } else { dl(&profile, k, args.l, &settings) })
        .collect::<tte_core::Result<Vec<_>>>()?;
    let mut csv = String::from("k_re,k_im,d_re,d_im,normalized_re,normalized_im\n");
    for (k, v) in args.k.iter().zip(&values) {
        let d = v.value();
        let (n_re, n_im) = match v.normalized() {
            Some(n) => (float(n.re), float(n.im)),
            None => (String::new(), String::new()),
        };
        let _ = writeln!(csv, "{},{},{},{},{n_re},{n_im}", float(k.re), float(k.im), float(d.re), float(d.im));
    }
    emit(args.out.as_ref(), &csv)
}

fn eigs(args: EigsArgs) -> Result<()> {
    let profile = load_profile(&args.profile)?;
    let mut search = SearchOptions::default();
    if let Some(tile) = args.tile_size {
        search.tile_size = tile;
    }
    let settings = SpectrumSettings { solver: args.solver.settings(), search };
    let report = compute_spectrum(&profile, &args.wedge, &settings)?;
    eprintln!("{} zero representatives in |k| in [{}, {}]", report.zeros.len(), args.wedge.r0, args.wedge.r1);
    emit_json(args.out.as_ref(), &report)
}

fn indicator(args: IndicatorArgs) -> Result<()> {
    let profile = load_profile(&args.profile)?;
    let settings = args.solver.settings();
    settings.validate()?;
    let ind = if args.theta.is_empty() {
        d0_indicator_profile(&profile, args.r_lo, args.r_hi, &settings)?
    } else {
        profile.require_strict()?;
        if args.r_hi > settings.k_max {
            return Err(tte_core::Error::WavenumberTooLarge { k_abs: args.r_hi, k_max: settings.k_max }.into());
        }
        let f = D0Function::new(&profile, settings);
        indicator_profile(&f, &args.theta, args.r_lo, args.r_hi, DEFAULT_RADII)?
    };
    let mut csv = String::from("theta,h,residual\n");
    for ((t, h), r) in ind.theta_grid.iter().zip(&ind.h_values).zip(&ind.fit_residuals) {
        let _ = writeln!(csv, "{},{},{}", float(*t), float(*h), float(*r));
    }
    emit(args.out.as_ref(), &csv)
}

#[derive(Serialize)]
struct TypeReport {
    type_estimate: f64,
    h_imaginary_axis: Option<f64>,
    r_lo: f64,
    r_hi: f64,
    scales: DerivedScales,
    profile_hash: String,
}

fn exponential_type(args: TypeArgs) -> Result<()> {
    let profile = load_profile(&args.profile)?;
    let settings = args.solver.settings();
    settings.validate()?;
    let ind = d0_indicator_profile(&profile, args.r_lo, args.r_hi, &settings)?;
    let report = TypeReport {
        type_estimate: type_estimate(&ind)?,
        h_imaginary_axis: ind.h_near(FRAC_PI_2),
        r_lo: args.r_lo,
        r_hi: args.r_hi,
        scales: profile.travel_time()?,
        profile_hash: profile.identity_hash(),
    };
    emit_json(args.out.as_ref(), &report)
}

/// Points of the counting-function CSV.
const COUNT_SAMPLES: usize = 200;

#[derive(Serialize)]
struct DensitySummary {
    delta: f64,
    stderr: f64,
    zeros_in_window: u64,
    insufficient_data: bool,
    fit_window: (f64, f64),
    wedge: WedgeRegion,
}

fn density(args: DensityArgs) -> Result<()> {
    let report = load_spectrum(&args.spectrum)?;
    let w = args.wedge;
    let estimate = density_estimate(&report, &w)?;
    let mut csv = String::from("r,count\n");
    for i in 0..COUNT_SAMPLES {
        let r = w.r0 + (w.r1 - w.r0) * i as f64 / (COUNT_SAMPLES - 1) as f64;
        let n = counting_function(&report, r, w.alpha, w.beta)?;
        let _ = writeln!(csv, "{},{n}", float(r));
    }
    emit(args.out.as_ref(), &csv)?;
    let summary = DensitySummary {
        delta: estimate.delta,
        stderr: estimate.slope_stderr,
        zeros_in_window: estimate.zeros_in_window,
        insufficient_data: estimate.insufficient_data,
        fit_window: (w.r1 / 3.0, w.r1),
        wedge: w,
    };
    let mut text = json::to_string(&summary)?;
    text.push('\n');
    match &args.summary {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io { path: path.clone(), source }),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

fn cartwright(args: CartwrightArgs) -> Result<()> {
    let profile = load_profile(&args.profile)?;
    let settings = args.solver.settings();
    settings.validate()?;
    let report = match &args.spectrum {
        Some(path) => {
            let report = load_spectrum(path)?;
            if report.profile_hash != profile.identity_hash() {
                return Err(CliError::Usage(format!(
                    "spectrum {} was computed for a different profile",
                    path.display()
                )));
            }
            report
        }
        None => {
            let region = WedgeRegion::new(K_MIN, args.radius, -PI, PI)?;
            let spectrum = SpectrumSettings { solver: settings, ..Default::default() };
            compute_spectrum(&profile, &region, &spectrum)?
        }
    };
    let ind = d0_indicator_profile(&profile, args.r_lo, args.r_hi, &settings)?;
    let diagnostic = cartwright_check(&report, &ind, &CartwrightOptions::default());
    emit_json(args.out.as_ref(), &diagnostic)
}

fn compare(args: CompareArgs) -> Result<()> {
    let a = load_spectrum(&args.a)?;
    let b = load_spectrum(&args.b)?;
    let verdict = compare_spectra(&a, &b, args.tol)?;
    emit_json(args.out.as_ref(), &verdict)
}

fn check_asymptotics(args: AsymptoticsArgs) -> Result<()> {
    let profile = load_profile(&args.profile)?;
    let settings = args.solver.settings();
    settings.validate()?;
    if !(args.k_step > 0.0 && args.k_to >= args.k_from) {
        return Err(tte_core::Error::Parameter("need k_step > 0 and k_to >= k_from".into()).into());
    }
    let steps = ((args.k_to - args.k_from) / args.k_step + 1e-9).floor() as usize;
    let ks: Vec<f64> = (0..=steps).map(|i| args.k_from + args.k_step * i as f64).collect();
    let residuals = ks
        .par_iter()
        .map(|&k| normalized_residual(&profile, k, &settings))
        .collect::<tte_core::Result<Vec<_>>>()?;
    let mut csv = String::from("k,residual\n");
    for (k, r) in ks.iter().zip(&residuals) {
        let _ = writeln!(csv, "{},{}", float(*k), float(*r));
    }
    emit(args.out.as_ref(), &csv)
}

#[derive(Serialize)]
struct ProfileInfo {
    kind: &'static str,
    strict: bool,
    #[serde(flatten)]
    scales: DerivedScales,
    hash: String,
}

fn profile_info(args: ProfileInfoArgs) -> Result<()> {
    let profile = load_profile(&args.profile)?;
    let scales = profile.travel_time()?;
    let info = ProfileInfo {
        kind: profile.kind().name(),
        strict: profile.is_strict(),
        scales,
        hash: profile.identity_hash(),
    };
    if args.json {
        return emit_json(args.out.as_ref(), &info);
    }
    let text = format!(
        "kind={}\nstrict={}\na={}\nb={}\ns={}\nn0={}\nsign_class={}\nhash={}\n",
        info.kind, info.strict, scales.a, scales.b, scales.s, scales.n0, scales.sign_class, info.hash
    );
    emit(args.out.as_ref(), &text)
}
