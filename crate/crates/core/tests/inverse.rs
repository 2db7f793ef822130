use std::f64::consts::PI;

use tte_core::inverse::{compare_spectra, recover_defect, Verdict, DEFAULT_MATCH_TOLERANCE};
use tte_core::profile::Profile;
use tte_core::radial::SolverSettings;
use tte_core::rootfinder::{compute_spectrum, SpectrumReport, SpectrumSettings, WedgeRegion};
use tte_core::Complex64;

fn spectrum(beta: f64, r1: f64, solver: SolverSettings) -> SpectrumReport {
    let profile = Profile::sqrt_cosine(1.0, beta).unwrap();
    let region = WedgeRegion::about_real_axis(0.5, r1, 0.2).unwrap();
    let settings = SpectrumSettings { solver, ..Default::default() };
    compute_spectrum(&profile, &region, &settings).unwrap()
}

#[test]
fn defect_is_recovered_from_real_zeros() {
    let report = spectrum(0.5, 100.0, SolverSettings::default());
    let est = recover_defect(&report).unwrap();
    assert!(est.zeros_used >= 10);
    assert!((est.defect * PI - 1.0).abs() < 0.03, "{est:?}");
}

#[test]
fn distinct_media_have_distinct_spectra() {
    let a = spectrum(0.5, 100.0, SolverSettings::default());
    let b = spectrum(0.3, 100.0, SolverSettings::default());
    let ab = compare_spectra(&a, &b, DEFAULT_MATCH_TOLERANCE).unwrap();
    let ba = compare_spectra(&b, &a, DEFAULT_MATCH_TOLERANCE).unwrap();
    assert_eq!(ab.verdict, Verdict::Distinct);
    assert_eq!(ba.verdict, Verdict::Distinct);
    assert_eq!(ab.max_mismatch, ba.max_mismatch);
    assert_eq!(ab.swapped().unmatched_first, ba.unmatched_first);
    assert_eq!(ab.matched_pairs.len(), ba.matched_pairs.len());
    // Same sign class, but n(0) differs (2.25 vs 1.69).
    assert_eq!(ab.preconditions.same_sign_class, Some(true));
    assert_eq!(ab.preconditions.equal_n0, Some(false));
}

#[test]
fn tighter_solver_reproduces_the_spectrum() {
    let loose = spectrum(0.5, 60.0, SolverSettings::default());
    let tight = spectrum(0.5, 60.0, SolverSettings::default().tightened(10.0));
    let v = compare_spectra(&loose, &tight, DEFAULT_MATCH_TOLERANCE).unwrap();
    assert_eq!(v.verdict, Verdict::Indistinguishable, "{v:#?}");
    assert!(v.max_mismatch < 1e-6);
}

#[test]
fn unequal_central_index_is_flagged() {
    let a = spectrum(0.5, 30.0, SolverSettings::default());
    let profile = Profile::polynomial(1.0, vec![1.2, 0.0, -0.2]).unwrap();
    let region = WedgeRegion::about_real_axis(0.5, 30.0, 0.2).unwrap();
    let b = compute_spectrum(&profile, &region, &SpectrumSettings::default()).unwrap();
    let v = compare_spectra(&a, &b, DEFAULT_MATCH_TOLERANCE).unwrap();
    assert_eq!(v.preconditions.equal_n0, Some(false));
    assert!(!v.preconditions.met);
}

#[test]
fn spacing_change_of_five_percent_is_detected() {
    let zeros = |s: f64| (1..=12).map(|n| Complex64::new(n as f64 * s, 0.0)).collect::<Vec<_>>();
    let region = WedgeRegion::about_real_axis(0.5, 150.0, 0.2).unwrap();
    let a = SpectrumReport::from_zeros(region, &zeros(PI * PI)).unwrap();
    let b = SpectrumReport::from_zeros(region, &zeros(1.05 * PI * PI)).unwrap();
    assert_eq!(compare_spectra(&a, &b, DEFAULT_MATCH_TOLERANCE).unwrap().verdict, Verdict::Distinct);
}
