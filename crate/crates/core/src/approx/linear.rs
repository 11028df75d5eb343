//! Baseline: continuous periodic extension by straight segments of equal
//! slope outside `[-x0, x0]`. Only continuous, so convergence is algebraic.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::search::Search;
use super::{check_eps, enforce_unit_modulus, target_error, ApproxOptions, ApproxResult, Method, TargetFunction};
use crate::error::{Error, Result};

/// Default half-width of the faithful interval.
pub const DEFAULT_X0: f64 = PI / 2.0;

/// Periodic extension of `f(x / x0)`: equal to it on `[-x0, x0]` and linear
/// on each side, meeting the shared value `v = (f(1) + f(-1)) / 2` at `+-pi`.
pub fn linear_extension(f: &TargetFunction, x0: f64) -> impl Fn(f64) -> Complex64 + Sync + '_ {
    let left = f.eval(-1.0);
    let right = f.eval(1.0);
    // both segments span pi - x0, so equal slopes force v to the midpoint
    let v = (left + right) * 0.5;
    let span = PI - x0;
    move |x: f64| {
        if x.abs() <= x0 {
            f.eval(x / x0)
        } else if x > x0 {
            right + (v - right) * ((x - x0) / span)
        } else {
            v + (left - v) * ((x + PI) / span)
        }
    }
}

/// Linear-extension approximation of `f` with oracle time `t = x0`.
pub fn linear_extension_series(f: &TargetFunction, x0: f64, eps: f64, opts: &ApproxOptions) -> Result<ApproxResult> {
    check_eps(eps)?;
    if !(x0 > 0.0 && x0 < PI) {
        return Err(Error::InvalidInput(format!("x0 must lie in (0, pi), got {x0}")));
    }
    let h = linear_extension(f, x0);
    let search = Search::new(&h, |l| f.eval(l), x0, eps, opts.q_max, opts.grid_points);
    let found = search.run_or_ceiling()?;
    log::debug!("linear extension: q = {}, grid error {:e}", found.series.q(), found.error);
    let q = found.series.q();
    let (series, alpha) = enforce_unit_modulus(found.series);
    let eps_measured = target_error(&series, f, alpha, x0, opts.grid_points);
    Ok(ApproxResult {
        method: Method::LinearExtension,
        q,
        alpha,
        t: x0,
        delta: None,
        eps_target: eps,
        eps_measured,
        series,
    })
}
