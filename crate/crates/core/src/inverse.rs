//! Spectral comparison of two media and recovery of |a - b| from zeros.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::entire::density_estimate;
use crate::error::{Error, Result};
use crate::rootfinder::{fold_angle, SpectrumReport, WedgeRegion};

/// Fewest real zeros accepted by `recover_defect`.
pub const MIN_DEFECT_ZEROS: usize = 8;
/// Default matching tolerance, relative to 1 + |k|.
pub const DEFAULT_MATCH_TOLERANCE: f64 = 1e-4;
/// Half-width of the near-axis wedge used for defect recovery.
pub const DEFECT_WEDGE: f64 = 0.2;

/// |a - b| estimated from the real zeros of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DefectEstimate {
    /// pi divided by the median spacing of consecutive real zeros.
    pub from_spacing: f64,
    /// pi times the slope of the real-zero counting function.
    pub from_density: f64,
    /// Mean of the two estimators.
    pub defect: f64,
    pub zeros_used: usize,
}

/// Recovers |a - b| from the zeros on the real axis.
///
/// Only real zeros enter: the wedge also carries a chain of complex zeros
/// whose density is governed by the full size a + b, not by the defect.
pub fn recover_defect(report: &SpectrumReport) -> Result<DefectEstimate> {
    let (lo, _) = report.region.folded_range();
    if lo > 0.0 {
        return Err(Error::Region("spectrum does not include the real axis".into()));
    }
    let mut real: Vec<f64> = report
        .zeros
        .iter()
        .filter(|z| z.k.im == 0.0)
        .flat_map(|z| std::iter::repeat_n(z.k.re, z.multiplicity as usize))
        .collect();
    real.sort_by(f64::total_cmp);
    if real.len() < MIN_DEFECT_ZEROS {
        return Err(Error::InsufficientData(format!(
            "{} real zeros, need at least {MIN_DEFECT_ZEROS}",
            real.len()
        )));
    }
    let mut spacings: Vec<f64> = real.windows(2).map(|w| w[1] - w[0]).collect();
    spacings.sort_by(f64::total_cmp);
    let mid = spacings.len() / 2;
    let median = if spacings.len().is_multiple_of(2) { 0.5 * (spacings[mid - 1] + spacings[mid]) } else { spacings[mid] };
    if !(median > 0.0) {
        return Err(Error::DegenerateFit("repeated real zeros".into()));
    }
    let from_spacing = PI / median;

    let points: Vec<Complex64> = real.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let wedge = WedgeRegion::about_real_axis(report.region.r0, report.region.r1, DEFECT_WEDGE)?;
    let real_only = SpectrumReport::from_zeros(wedge, &points)?;
    let from_density = PI * density_estimate(&real_only, &wedge)?.delta;

    Ok(DefectEstimate {
        from_spacing,
        from_density,
        defect: 0.5 * (from_spacing + from_density),
        zeros_used: real.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Indistinguishable,
    Distinct,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchedPair {
    pub first: Complex64,
    pub second: Complex64,
    pub distance: f64,
}

/// Whether two spectra satisfy the hypotheses of the uniqueness argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Preconditions {
    /// `None` when a report carries no profile scales.
    pub equal_n0: Option<bool>,
    pub same_sign_class: Option<bool>,
    pub met: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonVerdict {
    pub verdict: Verdict,
    pub matched_pairs: Vec<MatchedPair>,
    /// Largest distance from a zero of either spectrum to the nearest zero of the other.
    pub max_mismatch: f64,
    pub unmatched_first: usize,
    pub unmatched_second: usize,
    /// Unmatched zeros within tolerance of the region's edge; not counted against the verdict.
    pub unmatched_at_edge: usize,
    pub recovered_defect_first: Option<DefectEstimate>,
    pub recovered_defect_second: Option<DefectEstimate>,
    pub preconditions: Preconditions,
    pub tolerance: f64,
}

impl ComparisonVerdict {
    /// Same comparison with the roles of the two spectra exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            matched_pairs: self
                .matched_pairs
                .iter()
                .map(|p| MatchedPair { first: p.second, second: p.first, distance: p.distance })
                .collect(),
            unmatched_first: self.unmatched_second,
            unmatched_second: self.unmatched_first,
            recovered_defect_first: self.recovered_defect_second,
            recovered_defect_second: self.recovered_defect_first,
            ..self.clone()
        }
    }
}

fn same_region(a: &WedgeRegion, b: &WedgeRegion) -> bool {
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs()));
    close(a.r0, b.r0) && close(a.r1, b.r1) && close(a.alpha, b.alpha) && close(a.beta, b.beta)
}

fn near_edge(region: &WedgeRegion, k: Complex64, tol: f64) -> bool {
    let r = k.norm();
    let (lo, hi) = region.folded_range();
    let theta = fold_angle(k.arg());
    let radial = (r - region.r0).abs() <= tol || (r - region.r1).abs() <= tol;
    let at_lo = lo > 0.0 && r * (theta - lo).abs() <= tol;
    let at_hi = hi < FRAC_PI_2 && r * (hi - theta).abs() <= tol;
    radial || at_lo || at_hi
}

fn nearest(k: Complex64, others: &[Complex64]) -> f64 {
    others.iter().map(|o| (k - o).norm()).fold(f64::INFINITY, f64::min)
}

/// Matches the zeros of two spectra of the same region.
///
/// Pairs are formed greedily by increasing distance among candidates within
/// `tol * (1 + |k|)`, which makes the outcome independent of argument order.
pub fn compare_spectra(
    first: &SpectrumReport,
    second: &SpectrumReport,
    tol: f64,
) -> Result<ComparisonVerdict> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::Parameter(format!("matching tolerance {tol}")));
    }
    if !same_region(&first.region, &second.region) {
        return Err(Error::Region(format!(
            "reports cover different regions: {:?} vs {:?}",
            first.region, second.region
        )));
    }
    let a: Vec<Complex64> = first.zeros.iter().map(|z| z.k).collect();
    let b: Vec<Complex64> = second.zeros.iter().map(|z| z.k).collect();
    let limit = |x: Complex64, y: Complex64| tol * (1.0 + x.norm().max(y.norm()));

    let mut candidates: Vec<(f64, usize, usize)> = Vec::new();
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let d = (x - y).norm();
            if d <= limit(*x, *y) {
                candidates.push((d, i, j));
            }
        }
    }
    // Ties broken by modulus order of the pair.
    candidates.sort_by(|p, q| {
        p.0.total_cmp(&q.0).then_with(|| {
            let mp = a[p.1].norm() + b[p.2].norm();
            let mq = a[q.1].norm() + b[q.2].norm();
            mp.total_cmp(&mq)
        })
    });
    let mut used_a = vec![false; a.len()];
    let mut used_b = vec![false; b.len()];
    let mut pairs = Vec::new();
    for (d, i, j) in candidates {
        if !used_a[i] && !used_b[j] {
            used_a[i] = true;
            used_b[j] = true;
            pairs.push(MatchedPair { first: a[i], second: b[j], distance: d });
        }
    }
    pairs.sort_by(|p, q| p.first.norm().total_cmp(&q.first.norm()));

    let edge_tol = |k: Complex64| tol * (1.0 + k.norm());
    let mut unmatched_at_edge = 0;
    let mut count_unmatched = |zs: &[Complex64], used: &[bool]| {
        let mut n = 0;
        for (k, &u) in zs.iter().zip(used) {
            if u {
                continue;
            }
            if near_edge(&first.region, *k, edge_tol(*k)) {
                unmatched_at_edge += 1;
            } else {
                n += 1;
            }
        }
        n
    };
    let unmatched_first = count_unmatched(&a, &used_a);
    let unmatched_second = count_unmatched(&b, &used_b);

    let max_mismatch = a
        .iter()
        .map(|x| nearest(*x, &b))
        .chain(b.iter().map(|y| nearest(*y, &a)))
        .fold(0.0, f64::max);
    let max_mismatch = if a.is_empty() && b.is_empty() { 0.0 } else { max_mismatch };

    let verdict = if unmatched_first == 0 && unmatched_second == 0 {
        Verdict::Indistinguishable
    } else {
        Verdict::Distinct
    };

    let (equal_n0, same_sign_class) = match (&first.scales, &second.scales) {
        (Some(s1), Some(s2)) => (
            Some((s1.n0 - s2.n0).abs() <= 1e-12 * s1.n0.abs().max(s2.n0.abs())),
            Some(s1.sign_class == s2.sign_class),
        ),
        _ => (None, None),
    };
    let preconditions = Preconditions {
        equal_n0,
        same_sign_class,
        met: equal_n0 == Some(true) && same_sign_class == Some(true),
    };

    Ok(ComparisonVerdict {
        verdict,
        matched_pairs: pairs,
        max_mismatch,
        unmatched_first,
        unmatched_second,
        unmatched_at_edge,
        recovered_defect_first: recover_defect(first).ok(),
        recovered_defect_second: recover_defect(second).ok(),
        preconditions,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn region(r1: f64) -> WedgeRegion {
        WedgeRegion::about_real_axis(0.5, r1, DEFECT_WEDGE).unwrap()
    }

    fn real_zeros(spacing: f64, n: usize) -> Vec<Complex64> {
        (1..=n).map(|k| Complex64::new(k as f64 * spacing, 0.0)).collect()
    }

    #[test]
    fn synthetic_defect() {
        let zeros = real_zeros(PI * PI, 12);
        let report = SpectrumReport::from_zeros(region(12.5 * PI * PI), &zeros).unwrap();
        let est = recover_defect(&report).unwrap();
        assert!((est.from_spacing - 1.0 / PI).abs() < 1e-12);
        assert!((est.defect * PI - 1.0).abs() < 0.03, "{est:?}");
    }

    #[test]
    fn too_few_zeros() {
        let report = SpectrumReport::from_zeros(region(100.0), &real_zeros(10.0, 5)).unwrap();
        assert!(matches!(recover_defect(&report), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn complex_zeros_do_not_enter_the_defect() {
        let mut zeros = real_zeros(PI * PI, 12);
        zeros.extend((1..40).map(|n| Complex64::new(3.0 * n as f64, 2.5)));
        let report = SpectrumReport::from_zeros(region(12.5 * PI * PI), &zeros).unwrap();
        assert!((recover_defect(&report).unwrap().from_spacing - 1.0 / PI).abs() < 1e-12);
    }

    #[test]
    fn self_comparison() {
        let report = SpectrumReport::from_zeros(region(100.0), &real_zeros(PI * PI, 10)).unwrap();
        let v = compare_spectra(&report, &report, DEFAULT_MATCH_TOLERANCE).unwrap();
        assert_eq!(v.verdict, Verdict::Indistinguishable);
        assert_eq!(v.max_mismatch, 0.0);
        assert_eq!(v.matched_pairs.len(), 10);
    }

    #[test]
    fn different_spacings_are_distinct() {
        let r1 = SpectrumReport::from_zeros(region(100.0), &real_zeros(PI * PI, 10)).unwrap();
        let r2 = SpectrumReport::from_zeros(region(100.0), &real_zeros(1.05 * PI * PI, 9)).unwrap();
        let v = compare_spectra(&r1, &r2, DEFAULT_MATCH_TOLERANCE).unwrap();
        assert_eq!(v.verdict, Verdict::Distinct);
        assert!(v.max_mismatch > 0.1);
        assert!(v.recovered_defect_first.is_some());
        assert!(v.recovered_defect_second.is_some());
    }

    #[test]
    fn region_mismatch_is_an_error() {
        let r1 = SpectrumReport::from_zeros(region(100.0), &[]).unwrap();
        let r2 = SpectrumReport::from_zeros(region(90.0), &[]).unwrap();
        assert!(matches!(compare_spectra(&r1, &r2, DEFAULT_MATCH_TOLERANCE), Err(Error::Region(_))));
    }

    #[test]
    fn edge_zeros_are_not_held_against_the_verdict() {
        let mut zeros = real_zeros(PI * PI, 10);
        let r1 = SpectrumReport::from_zeros(region(100.0), &zeros).unwrap();
        zeros.push(Complex64::new(99.99999, 0.0));
        let r2 = SpectrumReport::from_zeros(region(100.0), &zeros).unwrap();
        let v = compare_spectra(&r1, &r2, DEFAULT_MATCH_TOLERANCE).unwrap();
        assert_eq!(v.verdict, Verdict::Indistinguishable);
        assert_eq!(v.unmatched_at_edge, 1);
    }

    #[test]
    fn missing_scales_leave_preconditions_unknown() {
        let report = SpectrumReport::from_zeros(region(100.0), &[]).unwrap();
        let v = compare_spectra(&report, &report, DEFAULT_MATCH_TOLERANCE).unwrap();
        assert_eq!(v.preconditions.equal_n0, None);
        assert!(!v.preconditions.met);
        assert_eq!(v.verdict, Verdict::Indistinguishable);
    }
}
