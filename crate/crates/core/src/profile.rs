//! Spherically symmetric refractive profiles, parameterized through sqrt(n).

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::quadrature::AdaptiveGaussLegendre;

/// Number of grid intervals used for the positivity scan.
pub const POSITIVITY_GRID: usize = 1000;
/// Allowed deviation |n(a) - 1| for strict profiles.
pub const STRICT_BOUNDARY_TOL: f64 = 1e-9;
/// Default absolute tolerance of the travel-time quadrature.
pub const TRAVEL_TIME_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileKind {
    /// n = 1.
    Unit,
    /// sqrt(n) = c.
    Constant { c: f64 },
    /// sqrt(n) = 1 + beta cos(pi r / (2a)).
    SqrtCosine { beta: f64 },
    /// sqrt(n) = sum c_i r^i, ascending powers.
    Polynomial { coefficients: Vec<f64> },
    /// Natural cubic spline through tabulated sqrt(n).
    Table(CubicSpline),
}

impl ProfileKind {
    pub fn name(&self) -> &'static str {
        match self {
            ProfileKind::Unit => "unit",
            ProfileKind::Constant { .. } => "constant",
            ProfileKind::SqrtCosine { .. } => "sqrt_cosine",
            ProfileKind::Polynomial { .. } => "polynomial",
            ProfileKind::Table(_) => "table",
        }
    }
}

/// Natural cubic spline on strictly increasing knots.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    knots: Vec<f64>,
    values: Vec<f64>,
    second: Vec<f64>,
}

impl CubicSpline {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() != values.len() {
            return Err(Error::Schema(format!(
                "table has {} radii but {} sqrt_n values",
                knots.len(),
                values.len()
            )));
        }
        if knots.len() < 2 {
            return Err(Error::Schema("table needs at least two samples".into()));
        }
        if knots.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::Schema("table contains non-finite entries".into()));
        }
        if knots.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Schema("table radii must be strictly increasing".into()));
        }
        let n = knots.len();
        let mut second = vec![0.0; n];
        if n > 2 {
            // Tridiagonal system for interior second derivatives (Thomas algorithm).
            let m = n - 2;
            let mut diag = vec![0.0; m];
            let mut upper = vec![0.0; m];
            let mut rhs = vec![0.0; m];
            for i in 0..m {
                let h0 = knots[i + 1] - knots[i];
                let h1 = knots[i + 2] - knots[i + 1];
                diag[i] = 2.0 * (h0 + h1);
                upper[i] = h1;
                rhs[i] = 6.0 * ((values[i + 2] - values[i + 1]) / h1 - (values[i + 1] - values[i]) / h0);
            }
            for i in 1..m {
                let lower = knots[i + 1] - knots[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            second[m] = rhs[m - 1] / diag[m - 1];
            for i in (0..m - 1).rev() {
                second[i + 1] = (rhs[i] - upper[i] * second[i + 2]) / diag[i];
            }
        }
        Ok(Self { knots, values, second })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.knots.len();
        let i = match self.knots.partition_point(|&k| k <= x) {
            0 => 0,
            p if p >= n => n - 2,
            p => p - 1,
        };
        let (x0, x1) = (self.knots[i], self.knots[i + 1]);
        let h = x1 - x0;
        let t = (x - x0) / h;
        let u = 1.0 - t;
        u * self.values[i]
            + t * self.values[i + 1]
            + h * h / 6.0 * ((u * u * u - u) * self.second[i] + (t * t * t - t) * self.second[i + 1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignClass {
    #[serde(rename = "a>b")]
    RadiusExceedsTravelTime,
    #[serde(rename = "a<b")]
    TravelTimeExceedsRadius,
    #[serde(rename = "a=b")]
    Balanced,
}

impl fmt::Display for SignClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SignClass::RadiusExceedsTravelTime => "a>b",
            SignClass::TravelTimeExceedsRadius => "a<b",
            SignClass::Balanced => "a=b",
        })
    }
}

/// Travel time `b`, signed defect `s = a - b`, and `n(0)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedScales {
    pub a: f64,
    pub b: f64,
    pub s: f64,
    pub n0: f64,
    pub sign_class: SignClass,
}

impl DerivedScales {
    pub fn defect_magnitude(&self) -> f64 {
        self.s.abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    a: f64,
    kind: ProfileKind,
    strict: bool,
}

impl Profile {
    pub fn new(a: f64, kind: ProfileKind, strict: bool) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::Schema(format!("radius a must be positive, got {a}")));
        }
        match &kind {
            ProfileKind::Constant { c } if !c.is_finite() => {
                return Err(Error::Schema("constant c must be finite".into()))
            }
            ProfileKind::SqrtCosine { beta } if !beta.is_finite() => {
                return Err(Error::Schema("sqrt_cosine beta must be finite".into()))
            }
            ProfileKind::Polynomial { coefficients } => {
                if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Schema(
                        "polynomial needs at least one finite coefficient".into(),
                    ));
                }
            }
            ProfileKind::Table(spline) => {
                let knots = spline.knots();
                let span_tol = 1e-12 * a;
                if knots[0].abs() > span_tol || (knots[knots.len() - 1] - a).abs() > span_tol {
                    return Err(Error::Schema(format!(
                        "table radii must cover [0, {a}] exactly, got [{}, {}]",
                        knots[0],
                        knots[knots.len() - 1]
                    )));
                }
            }
            _ => {}
        }
        let profile = Self { a, kind, strict };
        profile.validate()?;
        Ok(profile)
    }

    pub fn unit(a: f64) -> Result<Self> {
        Self::new(a, ProfileKind::Unit, true)
    }

    /// Homogeneous medium with sqrt(n) = c. Non-strict unless c = 1.
    pub fn constant(a: f64, c: f64) -> Result<Self> {
        Self::new(a, ProfileKind::Constant { c }, c == 1.0)
    }

    pub fn sqrt_cosine(a: f64, beta: f64) -> Result<Self> {
        Self::new(a, ProfileKind::SqrtCosine { beta }, true)
    }

    pub fn polynomial(a: f64, coefficients: Vec<f64>) -> Result<Self> {
        Self::new(a, ProfileKind::Polynomial { coefficients }, true)
    }

    pub fn table(a: f64, radii: Vec<f64>, sqrt_n: Vec<f64>) -> Result<Self> {
        Self::new(a, ProfileKind::Table(CubicSpline::new(radii, sqrt_n)?), true)
    }

    fn validate(&self) -> Result<()> {
        let mut points: Vec<f64> = (0..=POSITIVITY_GRID)
            .map(|i| self.a * i as f64 / POSITIVITY_GRID as f64)
            .collect();
        if let ProfileKind::Table(spline) = &self.kind {
            points.extend_from_slice(spline.knots());
        }
        for r in points {
            let v = self.sqrt_n_unchecked(r);
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Positivity { r, sqrt_n: v });
            }
        }
        if self.strict {
            let n_a = self.n_unchecked(self.a);
            if (n_a - 1.0).abs() > STRICT_BOUNDARY_TOL {
                return Err(Error::BoundaryIndex { n_a });
            }
        }
        Ok(())
    }

    pub fn radius(&self) -> f64 {
        self.a
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn require_strict(&self) -> Result<()> {
        if self.strict {
            Ok(())
        } else {
            Err(Error::NotStrict)
        }
    }

    /// sqrt(n(r)) for r in [0, a].
    pub fn sqrt_n(&self, r: f64) -> Result<f64> {
        let slack = 1e-12 * self.a;
        if !(r >= -slack && r <= self.a + slack) {
            return Err(Error::OutOfDomain { r, a: self.a });
        }
        Ok(self.sqrt_n_unchecked(r.clamp(0.0, self.a)))
    }

    pub fn n(&self, r: f64) -> Result<f64> {
        self.sqrt_n(r).map(|v| v * v)
    }

    #[inline]
    pub(crate) fn sqrt_n_unchecked(&self, r: f64) -> f64 {
        match &self.kind {
            ProfileKind::Unit => 1.0,
            ProfileKind::Constant { c } => *c,
            ProfileKind::SqrtCosine { beta } => 1.0 + beta * (0.5 * PI * r / self.a).cos(),
            ProfileKind::Polynomial { coefficients } => {
                coefficients.iter().rev().fold(0.0, |acc, c| acc * r + c)
            }
            ProfileKind::Table(spline) => spline.eval(r),
        }
    }

    #[inline]
    pub(crate) fn n_unchecked(&self, r: f64) -> f64 {
        let v = self.sqrt_n_unchecked(r);
        v * v
    }

    /// Travel time b = integral of sqrt(n) over [0, a], with s = a - b.
    pub fn travel_time(&self) -> Result<DerivedScales> {
        self.travel_time_with_tolerance(TRAVEL_TIME_TOL)
    }

    pub fn travel_time_with_tolerance(&self, tol: f64) -> Result<DerivedScales> {
        let b = match &self.kind {
            ProfileKind::Unit => self.a,
            _ => AdaptiveGaussLegendre::default().integrate(
                |r| self.sqrt_n_unchecked(r),
                0.0,
                self.a,
                tol,
            )?,
        };
        let s = self.a - b;
        let sign_class = if s.abs() <= 1e-12 * self.a {
            SignClass::Balanced
        } else if s > 0.0 {
            SignClass::RadiusExceedsTravelTime
        } else {
            SignClass::TravelTimeExceedsRadius
        };
        Ok(DerivedScales {
            a: self.a,
            b,
            s,
            n0: self.n_unchecked(0.0),
            sign_class,
        })
    }

    /// JSON document in the profile schema.
    pub fn to_document(&self) -> Value {
        let params = match &self.kind {
            ProfileKind::Unit => json!({}),
            ProfileKind::Constant { c } => json!({ "c": c }),
            ProfileKind::SqrtCosine { beta } => json!({ "beta": beta }),
            ProfileKind::Polynomial { coefficients } => json!({ "coefficients": coefficients }),
            ProfileKind::Table(spline) => json!({ "r": spline.knots(), "sqrt_n": spline.values() }),
        };
        json!({
            "a": self.a,
            "kind": self.kind.name(),
            "params": params,
            "strict": self.strict,
        })
    }

    /// SHA-256 of the canonical (key-sorted, compact) profile document.
    pub fn identity_hash(&self) -> String {
        let canonical = serde_json::to_string(&self.to_document()).expect("profile document serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ProfileDocument {
    a: f64,
    kind: String,
    #[serde(default)]
    params: Map<String, Value>,
    #[serde(default)]
    strict: Option<bool>,
    // Kind-specific keys are also accepted next to `kind`.
    #[serde(default)]
    c: Option<f64>,
    #[serde(default)]
    beta: Option<f64>,
    #[serde(default)]
    coefficients: Option<Vec<f64>>,
    #[serde(default)]
    r: Option<Vec<f64>>,
    #[serde(default)]
    sqrt_n: Option<Vec<f64>>,
}

impl ProfileDocument {
    fn number(&self, key: &str, top: Option<f64>) -> Result<f64> {
        match self.params.get(key) {
            Some(v) => v
                .as_f64()
                .ok_or_else(|| Error::Schema(format!("params.{key} must be a number"))),
            None => top.ok_or_else(|| Error::Schema(format!("{} profile needs `{key}`", self.kind))),
        }
    }

    fn array(&self, key: &str, top: &Option<Vec<f64>>) -> Result<Vec<f64>> {
        match self.params.get(key) {
            Some(v) => serde_json::from_value(v.clone())
                .map_err(|e| Error::Schema(format!("params.{key}: {e}"))),
            None => top
                .clone()
                .ok_or_else(|| Error::Schema(format!("{} profile needs `{key}`", self.kind))),
        }
    }
}

/// Parses and validates a profile JSON document.
pub fn parse_profile(document: &str) -> Result<Profile> {
    let doc: ProfileDocument =
        serde_json::from_str(document).map_err(|e| Error::Schema(e.to_string()))?;
    let kind = match doc.kind.as_str() {
        "unit" => ProfileKind::Unit,
        "constant" => ProfileKind::Constant { c: doc.number("c", doc.c)? },
        "sqrt_cosine" => ProfileKind::SqrtCosine { beta: doc.number("beta", doc.beta)? },
        "polynomial" => ProfileKind::Polynomial {
            coefficients: doc.array("coefficients", &doc.coefficients)?,
        },
        "table" => ProfileKind::Table(CubicSpline::new(
            doc.array("r", &doc.r)?,
            doc.array("sqrt_n", &doc.sqrt_n)?,
        )?),
        other => return Err(Error::Schema(format!("unknown profile kind `{other}`"))),
    };
    Profile::new(doc.a, kind, doc.strict.unwrap_or(true))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_unit_profile() {
        let p = parse_profile(r#"{"kind": "unit", "a": 1}"#).unwrap();
        assert_eq!(p.kind(), &ProfileKind::Unit);
        assert_eq!(p.sqrt_n(0.3).unwrap(), 1.0);
        assert!(p.is_strict());
    }

    #[test]
    fn constant_profile_needs_non_strict_mode() {
        let p = parse_profile(r#"{"kind": "constant", "a": 1, "params": {"c": 2}, "strict": false}"#)
            .unwrap();
        assert_eq!(p.n(0.7).unwrap(), 4.0);
        assert_eq!(p.sqrt_n(0.123).unwrap(), 2.0);
        let strict = parse_profile(r#"{"kind": "constant", "a": 1, "c": 2, "strict": true}"#);
        assert!(matches!(strict, Err(Error::BoundaryIndex { .. })));
    }

    #[test]
    fn sqrt_cosine_endpoints() {
        let p = parse_profile(r#"{"kind": "sqrt_cosine", "a": 1, "params": {"beta": 0.5}}"#).unwrap();
        assert!((p.sqrt_n(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((p.n(0.0).unwrap() - 2.25).abs() < 1e-15);
    }

    #[test]
    fn out_of_domain_radius() {
        let p = Profile::unit(1.0).unwrap();
        assert!(matches!(p.sqrt_n(1.5), Err(Error::OutOfDomain { .. })));
        assert!(matches!(p.sqrt_n(-0.1), Err(Error::OutOfDomain { .. })));
    }

    #[test]
    fn schema_errors() {
        assert!(matches!(parse_profile("{}"), Err(Error::Schema(_))));
        assert!(matches!(
            parse_profile(r#"{"kind": "cubic", "a": 1}"#),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            parse_profile(r#"{"kind": "sqrt_cosine", "a": 1}"#),
            Err(Error::Schema(_))
        ));
        assert!(matches!(
            parse_profile(r#"{"kind": "unit", "a": -1}"#),
            Err(Error::Schema(_))
        ));
    }

    #[test]
    fn positivity_violation() {
        // sqrt(n) = 1 - 2 r^2 + r^4 + ... crosses zero inside (0, 1).
        let err = Profile::new(1.0, ProfileKind::Polynomial { coefficients: vec![1.0, -3.0, 3.0] }, true);
        assert!(err.is_ok(), "positive polynomial with p(1)=1 accepted");
        let err = Profile::new(1.0, ProfileKind::Polynomial { coefficients: vec![1.0, -4.0, 4.0] }, true);
        assert!(matches!(err, Err(Error::Positivity { .. })));
    }

    #[test]
    fn table_validation() {
        let ok = Profile::table(1.0, vec![0.0, 0.5, 1.0], vec![1.5, 1.2, 1.0]).unwrap();
        assert!((ok.sqrt_n(0.5).unwrap() - 1.2).abs() < 1e-15);
        assert!(Profile::table(1.0, vec![0.0, 0.5, 0.5, 1.0], vec![1.5, 1.2, 1.1, 1.0]).is_err());
        assert!(Profile::table(1.0, vec![0.1, 0.5, 1.0], vec![1.5, 1.2, 1.0]).is_err());
        assert!(Profile::table(1.0, vec![0.0, 0.5], vec![1.5, 1.2]).is_err());
        // Interpolant undershoot: steep data that a spline drives negative.
        let undershoot = Profile::table(
            1.0,
            vec![0.0, 0.1, 0.2, 0.3, 1.0],
            vec![5.0, 5.0, 0.05, 0.05, 1.0],
        );
        assert!(matches!(undershoot, Err(Error::Positivity { .. })));
    }

    #[test]
    fn spline_reproduces_linear_data() {
        let s = CubicSpline::new(vec![0.0, 0.3, 0.5, 1.0], vec![1.0, 1.3, 1.5, 2.0]).unwrap();
        for x in [0.0, 0.1, 0.4, 0.77, 1.0] {
            assert!((s.eval(x) - (1.0 + x)).abs() < 1e-14);
        }
    }

    #[test]
    fn travel_time_examples() {
        let unit = Profile::unit(1.0).unwrap().travel_time().unwrap();
        assert_eq!(unit.b, 1.0);
        assert_eq!(unit.s, 0.0);
        assert_eq!(unit.sign_class, SignClass::Balanced);

        let c = Profile::constant(1.0, 2.0).unwrap().travel_time().unwrap();
        assert!((c.b - 2.0).abs() < 1e-12);
        assert!((c.s + 1.0).abs() < 1e-12);

        let sc = Profile::sqrt_cosine(1.0, 0.5).unwrap().travel_time().unwrap();
        assert!((sc.b - (1.0 + 1.0 / PI)).abs() < 1e-12);
        assert!((sc.s + 1.0 / PI).abs() < 1e-12);
        assert!((sc.n0 - 2.25).abs() < 1e-15);
        assert_eq!(sc.sign_class, SignClass::TravelTimeExceedsRadius);
        assert_eq!(sc.s, sc.a - sc.b);
    }

    #[test]
    fn travel_time_for_polynomial_matches_antiderivative() {
        // sqrt(n) = 1 + 0.5 (1 - r^2) on [0, 1]: b = 1 + 1/3.
        let p = Profile::polynomial(1.0, vec![1.5, 0.0, -0.5]).unwrap();
        let b = p.travel_time().unwrap().b;
        assert!((b - 4.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn hash_is_stable_and_discriminating() {
        let p1 = Profile::sqrt_cosine(1.0, 0.5).unwrap();
        let p2 = parse_profile(&p1.to_document().to_string()).unwrap();
        assert_eq!(p1.identity_hash(), p2.identity_hash());
        let p3 = Profile::sqrt_cosine(1.0, 0.3).unwrap();
        assert_ne!(p1.identity_hash(), p3.identity_hash());
    }
}
