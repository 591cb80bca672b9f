//! Schoenberg transformations: elementwise maps `φ` with `φ(0) = 0` and a
//! completely monotone derivative. They carry squared Euclidean distances to
//! squared Euclidean distances.
//!
//! The catalog is closed-form; each member carries analytic derivatives up to
//! third order. Measures `g(λ)` behind the closed forms, for reference:
//!
//! | kind          | φ(D)                         | g(λ)                            |
//! |---------------|------------------------------|---------------------------------|
//! | `scaledexp`   | (1 - e^{-aD}) / a            | δ(λ - a)                        |
//! | `truncsine`   | D (D + e^{-πD/2}) / (1 + D²) | λ sin λ on [0, π/2]             |
//! | `log`         | ln(1 + D/a)                  | e^{-aλ}                         |
//! | `rational`    | D / (a (a + D))              | λ e^{-aλ}                       |
//! | `power`       | D^a, 0 < a ≤ 1               | a λ^{-a} / Γ(1 - a)             |
//! | `powrational` | D^a / (1 + D^a), 0 < a < 1   | (composition rational ∘ power)  |
//! | `gaussian`    | 1 - e^{-aD}                  | a δ(λ - a)                      |
//! | `identity`    | D                            | δ(λ)                            |

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use crate::distgeom::SquaredDistanceMatrix;
use crate::error::{Error, Result};
use crate::spectral::DEFAULT_TOLERANCE;

/// A quantity that may diverge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Limit {
    Finite(f64),
    Infinite,
}

impl Limit {
    pub fn is_finite(self) -> bool {
        matches!(self, Limit::Finite(_))
    }

    fn from_f64(x: f64) -> Self {
        if x.is_finite() {
            Limit::Finite(x)
        } else {
            Limit::Infinite
        }
    }
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Limit::Finite(x) => write!(f, "{x}"),
            Limit::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransformClassification {
    pub rectifiable: bool,
    pub bounded: bool,
    pub phi_prime_at_zero: Limit,
    pub phi_at_infinity: Limit,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Identity,
    Gaussian(f64),
    Power(f64),
    Log(f64),
    Rational(f64),
    TruncatedSine,
    PowerRational(f64),
    ScaledExp(f64),
    Compose(Box<SchoenbergTransform>, Box<SchoenbergTransform>),
}

/// A validated member of the transformation catalog, or a composition of two.
#[derive(Debug, Clone, PartialEq)]
pub struct SchoenbergTransform(Kind);

fn require(ok: bool, token: &str, reason: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::TransformSpec {
            token: token.to_string(),
            reason: reason.to_string(),
        })
    }
}

impl SchoenbergTransform {
    pub fn identity() -> Self {
        Self(Kind::Identity)
    }

    /// `1 - exp(-aD)`, `a > 0`.
    pub fn gaussian(a: f64) -> Result<Self> {
        require(a > 0.0 && a.is_finite(), &format!("gaussian:a={a}"), "requires a > 0")?;
        Ok(Self(Kind::Gaussian(a)))
    }

    /// `D^a`, `0 < a ≤ 1`.
    pub fn power(a: f64) -> Result<Self> {
        require(a > 0.0 && a <= 1.0, &format!("power:a={a}"), "requires 0 < a <= 1")?;
        Ok(Self(Kind::Power(a)))
    }

    /// `ln(1 + D/a)`, `a > 0`.
    pub fn log(a: f64) -> Result<Self> {
        require(a > 0.0 && a.is_finite(), &format!("log:a={a}"), "requires a > 0")?;
        Ok(Self(Kind::Log(a)))
    }

    /// `D / (a (a + D))`, `a > 0`.
    pub fn rational(a: f64) -> Result<Self> {
        require(a > 0.0 && a.is_finite(), &format!("rational:a={a}"), "requires a > 0")?;
        Ok(Self(Kind::Rational(a)))
    }

    /// `D (D + exp(-πD/2)) / (1 + D²)`.
    pub fn truncated_sine() -> Self {
        Self(Kind::TruncatedSine)
    }

    /// `D^a / (1 + D^a)`, `0 < a < 1`.
    pub fn power_rational(a: f64) -> Result<Self> {
        require(a > 0.0 && a < 1.0, &format!("powrational:a={a}"), "requires 0 < a < 1")?;
        Ok(Self(Kind::PowerRational(a)))
    }

    /// `(1 - exp(-aD)) / a`, `a ≥ 0`; `a = 0` is the identity.
    pub fn scaled_exp(a: f64) -> Result<Self> {
        require(a >= 0.0 && a.is_finite(), &format!("scaledexp:a={a}"), "requires a >= 0")?;
        Ok(Self(Kind::ScaledExp(a)))
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: SchoenbergTransform, inner: SchoenbergTransform) -> Self {
        Self(Kind::Compose(Box::new(outer), Box::new(inner)))
    }

    pub fn name(&self) -> &'static str {
        match self.0 {
            Kind::Identity => "identity",
            Kind::Gaussian(_) => "gaussian",
            Kind::Power(_) => "power",
            Kind::Log(_) => "log",
            Kind::Rational(_) => "rational",
            Kind::TruncatedSine => "truncsine",
            Kind::PowerRational(_) => "powrational",
            Kind::ScaledExp(_) => "scaledexp",
            Kind::Compose(..) => "compose",
        }
    }

    pub fn parameter(&self) -> Option<f64> {
        match self.0 {
            Kind::Gaussian(a)
            | Kind::Power(a)
            | Kind::Log(a)
            | Kind::Rational(a)
            | Kind::PowerRational(a)
            | Kind::ScaledExp(a) => Some(a),
            _ => None,
        }
    }

    /// `φ(D)` for `D ≥ 0`.
    pub fn value(&self, d: f64) -> Result<f64> {
        check_argument(d)?;
        Ok(self.eval(d))
    }

    /// `φ'(D)`; diverges at `D = 0` for non-rectifiable kinds.
    pub fn derivative(&self, d: f64) -> Result<f64> {
        self.checked_derivative(d, 1, "first derivative")
    }

    /// `φ''(D)`.
    pub fn second_derivative(&self, d: f64) -> Result<f64> {
        self.checked_derivative(d, 2, "second derivative")
    }

    /// `φ'''(D)`.
    pub fn third_derivative(&self, d: f64) -> Result<f64> {
        self.checked_derivative(d, 3, "third derivative")
    }

    fn checked_derivative(&self, d: f64, order: usize, what: &'static str) -> Result<f64> {
        check_argument(d)?;
        let v = self.jet(d)[order];
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Divergent { what })
        }
    }

    /// Elementwise `φ` without argument checks.
    pub(crate) fn eval(&self, d: f64) -> f64 {
        match &self.0 {
            Kind::Identity => d,
            Kind::Gaussian(a) => -(-a * d).exp_m1(),
            Kind::Power(a) => d.powf(*a),
            Kind::Log(a) => (d / a).ln_1p(),
            Kind::Rational(a) => d / (a * (a + d)),
            Kind::TruncatedSine => d * (d + (-FRAC_PI_2 * d).exp()) / (1.0 + d * d),
            Kind::PowerRational(a) => {
                let u = d.powf(*a);
                u / (1.0 + u)
            }
            Kind::ScaledExp(a) => {
                if *a == 0.0 {
                    d
                } else {
                    -(-a * d).exp_m1() / a
                }
            }
            Kind::Compose(outer, inner) => outer.eval(inner.eval(d)),
        }
    }

    /// `[φ, φ', φ'', φ''']` at `d`. Divergent derivatives at zero come out
    /// as infinities of the appropriate sign.
    fn jet(&self, d: f64) -> [f64; 4] {
        const DIVERGENT: [f64; 4] = [0.0, f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY];
        match &self.0 {
            Kind::Identity => [d, 1.0, 0.0, 0.0],
            Kind::Gaussian(a) => {
                let e = (-a * d).exp();
                [-(-a * d).exp_m1(), a * e, -a * a * e, a * a * a * e]
            }
            Kind::Power(a) => {
                let a = *a;
                if a == 1.0 {
                    [d, 1.0, 0.0, 0.0]
                } else if d == 0.0 {
                    DIVERGENT
                } else {
                    [
                        d.powf(a),
                        a * d.powf(a - 1.0),
                        a * (a - 1.0) * d.powf(a - 2.0),
                        a * (a - 1.0) * (a - 2.0) * d.powf(a - 3.0),
                    ]
                }
            }
            Kind::Log(a) => {
                let s = a + d;
                [(d / a).ln_1p(), 1.0 / s, -1.0 / (s * s), 2.0 / (s * s * s)]
            }
            Kind::Rational(a) => {
                let s = a + d;
                let s2 = s * s;
                [d / (a * s), 1.0 / s2, -2.0 / (s2 * s), 6.0 / (s2 * s2)]
            }
            Kind::TruncatedSine => truncated_sine_jet(d),
            Kind::PowerRational(a) => {
                if d == 0.0 {
                    return DIVERGENT;
                }
                let a = *a;
                let u = d.powf(a);
                let inner = [
                    u,
                    a * d.powf(a - 1.0),
                    a * (a - 1.0) * d.powf(a - 2.0),
                    a * (a - 1.0) * (a - 2.0) * d.powf(a - 3.0),
                ];
                let w = 1.0 + u;
                let outer = [u / w, 1.0 / (w * w), -2.0 / (w * w * w), 6.0 / (w * w * w * w)];
                chain(outer, inner)
            }
            Kind::ScaledExp(a) => {
                if *a == 0.0 {
                    [d, 1.0, 0.0, 0.0]
                } else {
                    let e = (-a * d).exp();
                    [-(-a * d).exp_m1() / a, e, -a * e, a * a * e]
                }
            }
            Kind::Compose(outer, inner) => {
                let gi = inner.jet(d);
                if d == 0.0 && !gi[1].is_finite() {
                    return DIVERGENT;
                }
                let fo = outer.jet(gi[0]);
                if !fo[1].is_finite() {
                    return DIVERGENT;
                }
                chain(fo, gi)
            }
        }
    }

    /// Rectifiability (`φ'(0) < ∞`) and boundedness (`φ(∞) < ∞`).
    pub fn classify(&self) -> TransformClassification {
        let phi_prime_at_zero = Limit::from_f64(self.jet(0.0)[1]);
        let phi_at_infinity = self.at_infinity();
        TransformClassification {
            rectifiable: phi_prime_at_zero.is_finite(),
            bounded: phi_at_infinity.is_finite(),
            phi_prime_at_zero,
            phi_at_infinity,
        }
    }

    fn at_infinity(&self) -> Limit {
        match &self.0 {
            Kind::Identity | Kind::Power(_) | Kind::Log(_) => Limit::Infinite,
            Kind::Gaussian(_) | Kind::TruncatedSine | Kind::PowerRational(_) => Limit::Finite(1.0),
            Kind::Rational(a) => Limit::Finite(1.0 / a),
            Kind::ScaledExp(a) => {
                if *a == 0.0 {
                    Limit::Infinite
                } else {
                    Limit::Finite(1.0 / a)
                }
            }
            Kind::Compose(outer, inner) => match inner.at_infinity() {
                Limit::Finite(l) => Limit::Finite(outer.eval(l)),
                Limit::Infinite => outer.at_infinity(),
            },
        }
    }

    /// Applies `φ` entrywise and checks the result is still Euclidean at the
    /// default tolerance.
    pub fn apply(&self, d: &SquaredDistanceMatrix) -> Result<SquaredDistanceMatrix> {
        self.apply_with_tolerance(d, DEFAULT_TOLERANCE)
    }

    pub fn apply_with_tolerance(
        &self,
        d: &SquaredDistanceMatrix,
        tol: f64,
    ) -> Result<SquaredDistanceMatrix> {
        let out = self.apply_unchecked(d)?;
        match out.check_euclidean(tol) {
            Ok(()) => Ok(out),
            Err(Error::NotEuclidean { eigenvalue, .. }) => Err(Error::Internal(format!(
                "`{self}` produced a non-Euclidean matrix (eigenvalue {eigenvalue:e})"
            ))),
            Err(e) => Err(e),
        }
    }

    /// Entrywise `φ` with the structural checks only.
    pub fn apply_unchecked(&self, d: &SquaredDistanceMatrix) -> Result<SquaredDistanceMatrix> {
        SquaredDistanceMatrix::new(d.map_unchecked(|v| self.eval(v)))
    }

    /// Image of a right angle with legs of squared lengths `d1`, `d2`.
    pub fn transformed_right_angle(&self, d1: f64, d2: f64) -> Result<f64> {
        for d in [d1, d2] {
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "squared leg lengths must be positive and finite, got {d}"
                )));
            }
        }
        let (p1, p2, p12) = (self.eval(d1), self.eval(d2), self.eval(d1 + d2));
        if p1 <= 0.0 || p2 <= 0.0 {
            return Err(Error::UndefinedAngle);
        }
        let cos = (p1 + p2 - p12) / (2.0 * (p1 * p2).sqrt());
        Ok(cos.clamp(-1.0, 1.0).acos())
    }

    /// Menger curvature `κ = √(-6 φ''(0)) / φ'(0)` of a transformed straight line.
    pub fn curvature(&self) -> Result<f64> {
        let jet = self.jet(0.0);
        if !jet[1].is_finite() {
            return Err(Error::NotRectifiable(self.to_string()));
        }
        Ok((-6.0 * jet[2]).max(0.0).sqrt() / jet[1])
    }
}

/// Third-order chain rule for `f ∘ g` from the jets of `f` (at `g`) and `g`.
fn chain(f: [f64; 4], g: [f64; 4]) -> [f64; 4] {
    [
        f[0],
        f[1] * g[1],
        f[2] * g[1] * g[1] + f[1] * g[2],
        f[3] * g[1] * g[1] * g[1] + 3.0 * f[2] * g[1] * g[2] + f[1] * g[3],
    ]
}

/// φ₂ written as `1 - R` with `R = N/Q`, `N = 1 - D e^{-cD}`, `Q = 1 + D²`,
/// differentiated through `N = R Q`.
fn truncated_sine_jet(d: f64) -> [f64; 4] {
    let c = FRAC_PI_2;
    let e = (-c * d).exp();
    let n = [
        1.0 - d * e,
        -e * (1.0 - c * d),
        e * (2.0 * c - c * c * d),
        -e * (3.0 * c * c - c * c * c * d),
    ];
    let q = [1.0 + d * d, 2.0 * d, 2.0, 0.0];
    let r0 = n[0] / q[0];
    let r1 = (n[1] - r0 * q[1]) / q[0];
    let r2 = (n[2] - 2.0 * r1 * q[1] - r0 * q[2]) / q[0];
    let r3 = (n[3] - 3.0 * r2 * q[1] - 3.0 * r1 * q[2] - r0 * q[3]) / q[0];
    [d * (d + e) / q[0], -r1, -r2, -r3]
}

fn check_argument(d: f64) -> Result<()> {
    if d >= 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "transformations act on finite nonnegative squared distances, got {d}"
        )))
    }
}

impl fmt::Display for SchoenbergTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Kind::Identity | Kind::TruncatedSine => f.write_str(self.name()),
            Kind::Compose(outer, inner) => write!(f, "compose({outer},{inner})"),
            _ => write!(f, "{}:a={}", self.name(), self.parameter().unwrap_or(f64::NAN)),
        }
    }
}

impl FromStr for SchoenbergTransform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let spec = s.trim();
        if let Some(body) = spec.strip_prefix("compose(") {
            let body = body.strip_suffix(')').ok_or_else(|| Error::TransformSpec {
                token: spec.to_string(),
                reason: "missing closing parenthesis".into(),
            })?;
            let split = top_level_comma(body).ok_or_else(|| Error::TransformSpec {
                token: spec.to_string(),
                reason: "compose expects two comma-separated transforms".into(),
            })?;
            let outer = body[..split].parse()?;
            let inner = body[split + 1..].parse()?;
            return Ok(Self::compose(outer, inner));
        }

        let (name, param) = match spec.split_once(':') {
            Some((name, rest)) => (name.trim(), Some(rest.trim())),
            None => (spec, None),
        };
        let parameter = |param: Option<&str>| -> Result<f64> {
            let p = param.ok_or_else(|| Error::TransformSpec {
                token: spec.to_string(),
                reason: format!("`{name}` needs a parameter, e.g. `{name}:a=1`"),
            })?;
            let value = p.strip_prefix("a=").ok_or_else(|| Error::TransformSpec {
                token: p.to_string(),
                reason: "expected `a=<number>`".into(),
            })?;
            value.trim().parse::<f64>().map_err(|_| Error::TransformSpec {
                token: value.to_string(),
                reason: "not a number".into(),
            })
        };
        let no_parameter = |t: Self| -> Result<Self> {
            match param {
                None => Ok(t),
                Some(p) => Err(Error::TransformSpec {
                    token: p.to_string(),
                    reason: format!("`{name}` takes no parameter"),
                }),
            }
        };

        match name {
            "identity" => no_parameter(Self::identity()),
            "truncsine" => no_parameter(Self::truncated_sine()),
            "gaussian" => Self::gaussian(parameter(param)?),
            "power" => Self::power(parameter(param)?),
            "log" => Self::log(parameter(param)?),
            "rational" => Self::rational(parameter(param)?),
            "powrational" => Self::power_rational(parameter(param)?),
            "scaledexp" => Self::scaled_exp(parameter(param)?),
            other => Err(Error::TransformSpec {
                token: other.to_string(),
                reason: "unknown transformation".into(),
            }),
        }
    }
}

fn top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}
