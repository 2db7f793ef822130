//! Spherical Bessel functions of the first kind, j_l(z), for complex z and 0 <= l <= 8.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_ORDER: u32 = 8;

/// Below this modulus j_0 is evaluated from its Taylor series.
const J0_SERIES_RADIUS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub l: u32,
    pub z: Complex64,
    pub value: Complex64,
    pub derivative: Complex64,
}

/// j_l(z) and j_l'(z).
pub fn sph_bessel(l: u32, z: Complex64) -> Result<BesselEval> {
    if l > MAX_ORDER {
        return Err(Error::AngularIndex(l));
    }
    let (value, derivative) = match l {
        0 => j0_with_derivative(z),
        _ if z.norm() <= l as f64 + 2.0 => series(l, z),
        _ => recurrence(l, z),
    };
    Ok(BesselEval { l, z, value, derivative })
}

fn j0_with_derivative(z: Complex64) -> (Complex64, Complex64) {
    if z.norm() <= J0_SERIES_RADIUS {
        let z2 = z * z;
        let value = 1.0 - z2 / 6.0 + z2 * z2 / 120.0 - z2 * z2 * z2 / 5040.0;
        let derivative = z * (-1.0 / 3.0 + z2 / 30.0 - z2 * z2 / 840.0);
        (value, derivative)
    } else {
        let (s, c) = (z.sin(), z.cos());
        (s / z, (z * c - s) / (z * z))
    }
}

/// Ascending series j_l(z) = z^l / (2l+1)!! * sum_m (-z^2/2)^m / (m! (2l+3)(2l+5)...(2l+2m+1)),
/// summed until terms fall below machine precision. Requires l >= 1.
pub(crate) fn series(l: u32, z: Complex64) -> (Complex64, Complex64) {
    debug_assert!(l >= 1);
    let lf = l as f64;
    let double_factorial: f64 = (1..=l).map(|k| (2 * k + 1) as f64).product();
    let half_z2 = -0.5 * z * z;
    let mut term = Complex64::new(1.0, 0.0);
    // Value: sum t_m; derivative: d/dz [z^l sum t_m] = z^(l-1) sum (l + 2m) t_m.
    let mut sum = term;
    let mut dsum = term * lf;
    for m in 1..200 {
        let mf = m as f64;
        term *= half_z2 / (mf * (2.0 * lf + 2.0 * mf + 1.0));
        sum += term;
        dsum += term * (lf + 2.0 * mf);
        if term.norm() <= 1e-17 * sum.norm() && term.norm() * (lf + 2.0 * mf) <= 1e-17 * dsum.norm()
        {
            break;
        }
    }
    let zl1 = z.powu(l - 1);
    let value = z * zl1 * sum / double_factorial;
    let derivative = zl1 * dsum / double_factorial;
    (value, derivative)
}

/// Closed forms for l = 0, 1 followed by upward recurrence
/// j_{l+1} = (2l+1)/z j_l - j_{l-1}; stable for |z| > l + 2.
pub(crate) fn recurrence(l: u32, z: Complex64) -> (Complex64, Complex64) {
    if l == 0 {
        return j0_with_derivative(z);
    }
    let (s, c) = (z.sin(), z.cos());
    let inv = 1.0 / z;
    let mut prev = s * inv;
    let mut cur = s * inv * inv - c * inv;
    for k in 1..l {
        let next = (2 * k + 1) as f64 * inv * cur - prev;
        prev = cur;
        cur = next;
    }
    let derivative = prev - (l + 1) as f64 * inv * cur;
    (cur, derivative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn j0_at_origin() {
        let e = sph_bessel(0, c(0.0, 0.0)).unwrap();
        assert_eq!(e.value, c(1.0, 0.0));
        assert_eq!(e.derivative, c(0.0, 0.0));
    }

    #[test]
    fn j0_at_pi() {
        let e = sph_bessel(0, c(PI, 0.0)).unwrap();
        assert!(e.value.norm() < 1e-15);
        assert!((e.derivative - c(-1.0 / PI, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn j1_at_one() {
        let e = sph_bessel(1, c(1.0, 0.0)).unwrap();
        let expected = 1f64.sin() - 1f64.cos();
        assert!((e.value.re - expected).abs() < 1e-15);
        assert!((expected - 0.3011686789).abs() < 1e-10);
    }

    #[test]
    fn j1_derivative_at_origin() {
        let e = sph_bessel(1, c(0.0, 0.0)).unwrap();
        assert_eq!(e.value, c(0.0, 0.0));
        assert!((e.derivative - c(1.0 / 3.0, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn order_out_of_range() {
        assert!(matches!(sph_bessel(9, c(1.0, 0.0)), Err(Error::AngularIndex(9))));
    }

    #[test]
    fn j0_times_z_is_sine() {
        for &(re, im) in &[(1e-3, 0.0), (0.7, 0.2), (3.0, -4.0), (-12.5, 6.0), (40.0, 0.5)] {
            let z = c(re, im);
            let v = sph_bessel(0, z).unwrap().value * z;
            assert!((v - z.sin()).norm() <= 1e-12 * z.sin().norm());
        }
    }

    #[test]
    fn series_and_recurrence_agree_at_switchover() {
        for l in 1..=MAX_ORDER {
            let radius = l as f64 + 2.0;
            for j in 0..16 {
                let phi = 2.0 * PI * j as f64 / 16.0 + 0.1;
                let z = Complex64::from_polar(radius, phi);
                let (vs, ds) = series(l, z);
                let (vr, dr) = recurrence(l, z);
                assert!((vs - vr).norm() <= 1e-11 * vs.norm(), "l={l} z={z}: {vs} vs {vr}");
                assert!((ds - dr).norm() <= 1e-11 * ds.norm(), "l={l} z={z}: {ds} vs {dr}");
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let h = 1e-6;
        for l in 0..=MAX_ORDER {
            for &z in &[c(0.4, 0.1), c(5.0, 2.0), c(14.0, -3.0)] {
                let d = sph_bessel(l, z).unwrap().derivative;
                let fd = (sph_bessel(l, z + h).unwrap().value - sph_bessel(l, z - h).unwrap().value)
                    / (2.0 * h);
                assert!((d - fd).norm() <= 1e-7 * (1.0 + d.norm()), "l={l} z={z}");
            }
        }
    }

    #[test]
    fn conjugate_symmetry() {
        for l in 0..=MAX_ORDER {
            for &z in &[c(0.3, 0.8), c(7.0, 1.5), c(-2.0, 9.0)] {
                let a = sph_bessel(l, z.conj()).unwrap().value;
                let b = sph_bessel(l, z).unwrap().value.conj();
                assert!((a - b).norm() <= 1e-14 * (1.0 + b.norm()));
            }
        }
    }

    #[test]
    fn j0_growth_on_imaginary_axis() {
        for y in [5.0, 10.0, 20.0, 50.0] {
            let v = sph_bessel(0, c(0.0, y)).unwrap().value.norm_sqr();
            let model = (2.0 * y).exp() / (4.0 * y * y);
            let ratio = v / model;
            assert!(ratio > 0.5 && ratio < 2.0, "y={y}: ratio {ratio}");
        }
    }
}
