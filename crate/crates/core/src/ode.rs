//! Dormand–Prince 5(4) embedded Runge–Kutta integrator for complex linear systems.

use num_complex::Complex64;

use crate::error::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// Difference between the 5th- and 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

pub type State<const N: usize> = [Complex64; N];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { rtol: 1e-11, atol: 1e-13 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

pub struct DormandPrince {
    pub tol: Tolerances,
    /// Smallest permitted step, relative to the integration span.
    pub min_step_fraction: f64,
    pub max_steps: usize,
}

impl DormandPrince {
    pub fn new(tol: Tolerances) -> Self {
        Self { tol, min_step_fraction: 1e-14, max_steps: 5_000_000 }
    }

    /// Integrates y' = rhs(t, y) from t0 to t1 starting with step `h0`.
    ///
    /// `on_accept` runs after every accepted step. It may multiply the state
    /// by a real factor in place (valid for homogeneous linear systems) and
    /// returns that factor, or 1.0.
    pub fn integrate<const N: usize, F, G>(
        &self,
        rhs: F,
        t0: f64,
        t1: f64,
        y0: State<N>,
        h0: f64,
        mut on_accept: G,
    ) -> Result<(State<N>, StepStats)>
    where
        F: Fn(f64, &State<N>) -> State<N>,
        G: FnMut(&mut State<N>) -> f64,
    {
        let span = t1 - t0;
        let h_min = self.min_step_fraction * span.abs();
        let mut stats = StepStats::default();
        let mut t = t0;
        let mut y = y0;
        let mut h = h0.abs().min(span.abs()).max(h_min);
        let mut k1 = rhs(t, &y);
        stats.evaluations += 1;

        while t < t1 {
            if stats.accepted + stats.rejected >= self.max_steps {
                return Err(Error::StepUnderflow { r: t, h });
            }
            let last = t + h >= t1;
            if last {
                h = t1 - t;
            }
            let k2 = rhs(t + C2 * h, &combine(&y, h, &[(A21, &k1)]));
            let k3 = rhs(t + C3 * h, &combine(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = rhs(t + C4 * h, &combine(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = rhs(
                t + C5 * h,
                &combine(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = rhs(
                t + h,
                &combine(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let y_new = combine(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = rhs(t + h, &y_new);
            stats.evaluations += 6;

            let mut err_sq = 0.0;
            for i in 0..N {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let scale = self.tol.atol + self.tol.rtol * y[i].norm().max(y_new[i].norm());
                err_sq += (e.norm() / scale).powi(2);
            }
            let err = (err_sq / N as f64).sqrt();
            if !err.is_finite() {
                return Err(Error::NonFinite(format!("integrator state at t = {t}")));
            }

            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            if err <= 1.0 {
                stats.accepted += 1;
                t = if last { t1 } else { t + h };
                y = y_new;
                k1 = k7;
                let applied = on_accept(&mut y);
                if applied != 1.0 {
                    for v in k1.iter_mut() {
                        *v *= applied;
                    }
                }
                h *= factor;
            } else {
                stats.rejected += 1;
                h *= factor.min(1.0);
                if h < h_min {
                    return Err(Error::StepUnderflow { r: t, h });
                }
            }
        }
        Ok((y, stats))
    }
}

#[inline]
fn combine<const N: usize>(y: &State<N>, h: f64, terms: &[(f64, &State<N>)]) -> State<N> {
    let mut out = *y;
    for (coef, k) in terms {
        let w = h * coef;
        for i in 0..N {
            out[i] += w * k[i];
        }
    }
    out
}
