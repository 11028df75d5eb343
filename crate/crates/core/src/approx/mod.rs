//! Fourier approximations of scalar target functions on `[-1, 1]`.
//!
//! Three routes are provided: the Taylor route ([`taylor`]) with an a-priori
//! query count, the erf-filtered analytic extension ([`filter`]) and the
//! linear periodic extension baseline ([`linear`]). [`compare`] tabulates the
//! query counts of all three for the real exponential.

pub mod compare;
pub mod filter;
pub mod linear;
mod search;
pub mod taylor;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{window_sup_error, FourierSeries, DEFAULT_GRID_POINTS};

pub use compare::{compare_methods, crossover_beta, ComparisonRow};
pub use filter::{analytic_extension_series, choose_filter_params, erf_filter, ChiRule, FilterParams};
pub use linear::linear_extension_series;
pub use taylor::{
    exponential_alpha, subnormalization_alpha, taylor_fourier_series, taylor_order, taylor_route_q,
    taylor_to_fourier, temperature_delta,
};

/// Default ceiling for the searched query count.
pub const DEFAULT_Q_MAX: usize = 4096;

type Callback = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Function to approximate, consumed on `[-1, 1]`.
#[derive(Clone)]
pub enum TargetFunction {
    /// `f(x) = exp(-beta (x + 1))`.
    Exponential { beta: f64 },
    /// `f(x) = sum_l a_l x^l`.
    PowerSeries(Vec<Complex64>),
    /// Arbitrary samples through a callback; only the linear extension accepts it.
    Tabulated { name: String, eval: Callback },
}

impl fmt::Debug for TargetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Exponential { beta } => f.debug_struct("Exponential").field("beta", beta).finish(),
            Self::PowerSeries(a) => f.debug_tuple("PowerSeries").field(a).finish(),
            Self::Tabulated { name, .. } => f.debug_struct("Tabulated").field("name", name).finish(),
        }
    }
}

impl TargetFunction {
    pub fn exponential(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidInput(format!("beta must be positive, got {beta}")));
        }
        Ok(Self::Exponential { beta })
    }

    pub fn power_series(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::InvalidInput("power series needs at least one coefficient".into()));
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite power-series coefficient".into()));
        }
        Ok(Self::PowerSeries(coefficients))
    }

    pub fn tabulated<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        Self::Tabulated {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        match self {
            Self::Exponential { beta } => Complex64::new((-beta * (x + 1.0)).exp(), 0.0),
            Self::PowerSeries(a) => a.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * x + c),
            Self::Tabulated { eval, .. } => eval(x),
        }
    }

    /// True when the function does not depend on its argument.
    pub fn is_constant(&self) -> bool {
        match self {
            Self::PowerSeries(a) => a.iter().skip(1).all(|c| *c == Complex64::new(0.0, 0.0)),
            _ => false,
        }
    }

    /// Bound on `max_{[-1,1]} |f^{(n)}|`, when one is computable.
    pub fn derivative_bound(&self, n: usize) -> Option<f64> {
        match self {
            // the maximum sits at x = -1
            Self::Exponential { beta } => Some(beta.powi(n as i32)),
            Self::PowerSeries(a) => {
                // sum_{l >= n} |a_l| l! / (l - n)!
                let mut total = 0.0;
                for (l, c) in a.iter().enumerate().skip(n) {
                    let falling: f64 = ((l - n + 1)..=l).map(|k| k as f64).product();
                    total += c.norm() * falling;
                }
                Some(total)
            }
            Self::Tabulated { .. } => None,
        }
    }

    /// First `count` Taylor coefficients about zero.
    pub fn taylor_coefficients(&self, count: usize) -> Option<Vec<Complex64>> {
        match self {
            Self::Exponential { beta } => {
                let mut out = Vec::with_capacity(count);
                let mut term = (-beta).exp();
                for l in 0..count {
                    if l > 0 {
                        term *= -beta / l as f64;
                    }
                    out.push(Complex64::new(term, 0.0));
                }
                Some(out)
            }
            Self::PowerSeries(a) => {
                let mut out = a.clone();
                out.resize(count.max(1), Complex64::new(0.0, 0.0));
                out.truncate(count);
                Some(out)
            }
            Self::Tabulated { .. } => None,
        }
    }

    /// Polynomial degree, or `None` for transcendental or tabulated kinds.
    pub fn degree(&self) -> Option<usize> {
        match self {
            Self::PowerSeries(a) => Some(
                a.iter()
                    .rposition(|c| *c != Complex64::new(0.0, 0.0))
                    .unwrap_or(0),
            ),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    TaylorFourier,
    AnalyticExtension,
    LinearExtension,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::TaylorFourier => "taylor_fourier",
            Self::AnalyticExtension => "analytic_extension",
            Self::LinearExtension => "linear_extension",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fourier approximation `g(x) ~ alpha f(x / t)` for `x` in `[-t, t]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproxResult {
    pub method: Method,
    pub q: usize,
    pub alpha: f64,
    pub t: f64,
    pub delta: Option<f64>,
    pub eps_target: f64,
    pub eps_measured: f64,
    pub series: FourierSeries,
}

impl ApproxResult {
    /// Sup error of `series(lambda t)` against `alpha f(lambda)` over `points`
    /// equispaced `lambda` in `[-1, 1]`.
    pub fn error_against(&self, f: &TargetFunction, points: usize) -> f64 {
        target_error(&self.series, f, self.alpha, self.t, points)
    }
}

/// Knobs shared by the search-based methods.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxOptions {
    pub grid_points: usize,
    pub q_max: usize,
    pub chi_rule: ChiRule,
}

impl Default for ApproxOptions {
    fn default() -> Self {
        Self {
            grid_points: DEFAULT_GRID_POINTS,
            q_max: DEFAULT_Q_MAX,
            chi_rule: ChiRule::QueryOptimal,
        }
    }
}

/// Runs `method` with its default parameters: `delta` from
/// [`temperature_delta`] (or `pi/8`) for the Taylor route and `x0 = pi/2`
/// for the linear extension.
pub fn approximate(f: &TargetFunction, method: Method, eps: f64, opts: &ApproxOptions) -> Result<ApproxResult> {
    match method {
        Method::TaylorFourier => taylor_fourier_series(f, eps, None, opts),
        Method::AnalyticExtension => analytic_extension_series(f, eps, opts),
        Method::LinearExtension => linear_extension_series(f, linear::DEFAULT_X0, eps, opts),
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("eps must lie in (0, 1), got {eps}")))
    }
}

pub(crate) fn target_error(series: &FourierSeries, f: &TargetFunction, alpha: f64, t: f64, points: usize) -> f64 {
    window_sup_error(series, |l| f.eval(l) * alpha, t, points)
}

/// Rescales a series whose modulus exceeds one on the circle. Returns the
/// series and the factor applied.
pub(crate) fn enforce_unit_modulus(series: FourierSeries) -> (FourierSeries, f64) {
    let peak = series.max_modulus_refined();
    if peak > 1.0 {
        let factor = 1.0 / (peak + 1e-12);
        (series.scale(Complex64::new(factor, 0.0)), factor)
    } else {
        (series, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_values_and_bounds() {
        let f = TargetFunction::exponential(2.0).unwrap();
        assert_eq!(f.eval(-1.0), Complex64::new(1.0, 0.0));
        assert!((f.eval(0.0).re - (-2.0f64).exp()).abs() < 1e-15);
        assert_eq!(f.derivative_bound(3), Some(8.0));
        assert!(TargetFunction::exponential(0.0).is_err());
    }

    #[test]
    fn power_series_derivative_bound() {
        // f = 1 + 2x + 3x^2: f'' = 6, f''' = 0
        let f = TargetFunction::power_series(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(3.0, 0.0),
        ])
        .unwrap();
        assert_eq!(f.derivative_bound(2), Some(6.0));
        assert_eq!(f.derivative_bound(3), Some(0.0));
        assert_eq!(f.derivative_bound(1), Some(2.0 + 6.0));
        assert_eq!(f.degree(), Some(2));
        assert!((f.eval(0.5) - Complex64::new(2.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn exponential_taylor_coefficients_sum_to_value() {
        let f = TargetFunction::exponential(1.5).unwrap();
        let a = f.taylor_coefficients(40).unwrap();
        let x: f64 = 0.3;
        let sum: Complex64 = a.iter().enumerate().map(|(l, c)| c * x.powi(l as i32)).sum();
        assert!((sum - f.eval(x)).norm() < 1e-14);
    }

    #[test]
    fn method_names() {
        assert_eq!(serde_json::to_string(&Method::AnalyticExtension).unwrap(), "\"analytic_extension\"");
        assert_eq!(Method::TaylorFourier.to_string(), "taylor_fourier");
    }
}
