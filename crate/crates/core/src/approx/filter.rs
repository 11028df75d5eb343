//! Analytic extension: multiply the target by an erf window so its periodic
//! extension is smooth, then truncate the standard Fourier series.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::search::{Outcome, Search};
use super::{check_eps, enforce_unit_modulus, target_error, ApproxOptions, ApproxResult, Method, TargetFunction};
use crate::error::{Error, Result};
use crate::fourier::{linspace, FourierSeries};

/// Grid used to bound `max |f|` on `[-chi, chi]`.
const WINDOW_GRID: usize = 2001;
/// `L` is rounded up to a multiple of this step.
const WIDTH_STEP: f64 = 1.0 / 1024.0;
/// Number of geometrically spaced `chi - 1` values tried by
/// [`ChiRule::QueryOptimal`].
const CHI_CANDIDATES: usize = 48;

/// `(erf(L(x + chi)) - erf(L(x - chi))) / 2`.
///
/// Evaluated through `erfc` of `|x|` so the result is exactly even and keeps
/// relative accuracy in the tails.
pub fn erf_filter(x: f64, l: f64, chi: f64) -> f64 {
    let a = x.abs();
    0.5 * (libm::erfc(l * (a - chi)) - libm::erfc(l * (a + chi)))
}

/// Window half-width `chi` and steepness `L` of the erf filter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterParams {
    pub l: f64,
    pub chi: f64,
}

impl FilterParams {
    /// `exp(-L^2 (chi - 1)^2) / 2`, the bound on `1 - b` over `[-1, 1]`.
    pub fn tail_bound(&self) -> f64 {
        0.5 * (-(self.l * (self.chi - 1.0)).powi(2)).exp()
    }
}

/// How the analytic extension picks the window half-width.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChiRule {
    /// `chi` solves `max_{[-chi, chi]} |f| = 1 + eps/3`, keeping the extension
    /// normalized up to `eps`.
    Normalized,
    /// Scan `chi` and keep the window minimising `q / alpha^2`, the expected
    /// number of queries per successful post-selection.
    QueryOptimal,
}

/// Steepness `L = sqrt(ln(3 / (2 eps))) / (chi - 1)`, rounded up to a
/// multiple of 1/1024.
pub fn filter_steepness(chi: f64, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    if !(chi > 1.0 && chi.is_finite()) {
        return Err(Error::InvalidInput(format!("chi must exceed 1, got {chi}")));
    }
    let raw = (1.5 / eps).ln().sqrt() / (chi - 1.0);
    Ok((raw / WIDTH_STEP).ceil() * WIDTH_STEP)
}

fn window_max(f: &TargetFunction, chi: f64) -> f64 {
    linspace(-chi, chi, WINDOW_GRID)
        .map(|x| f.eval(x).norm())
        .fold(0.0, f64::max)
}

/// Filter parameters from the normalization rule: `chi` by bisection on
/// `[1, pi]`, falling back to the midpoint `(1 + pi)/2` when `|f|` never
/// reaches `1 + eps/3`.
pub fn choose_filter_params(f: &TargetFunction, eps: f64) -> Result<FilterParams> {
    check_eps(eps)?;
    if matches!(f, TargetFunction::Tabulated { .. }) {
        return Err(Error::Unsupported("tabulated functions"));
    }
    let level = 1.0 + eps / 3.0;
    let excess = |chi: f64| window_max(f, chi) - level;
    let chi = if excess(1.0) > 0.0 {
        return Err(Error::FilterSearch(format!(
            "max |f| on [-1, 1] is {} > 1 + eps/3; rescale the target",
            window_max(f, 1.0)
        )));
    } else if excess(PI) <= 0.0 {
        (1.0 + PI) / 2.0
    } else {
        let (mut lo, mut hi) = (1.0, PI);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if excess(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        lo
    };
    if chi <= 1.0 {
        return Err(Error::FilterSearch("window collapsed onto [-1, 1]".into()));
    }
    Ok(FilterParams {
        l: filter_steepness(chi, eps)?,
        chi,
    })
}

fn chi_candidates(literal: f64) -> Vec<f64> {
    let (lo, hi) = (1e-3f64, (PI - 1.0) * 0.98);
    let ratio = (hi / lo).powf(1.0 / (CHI_CANDIDATES - 1) as f64);
    let mut out: Vec<f64> = (0..CHI_CANDIDATES).map(|k| 1.0 + lo * ratio.powi(k as i32)).collect();
    out.push(literal);
    // widest windows first: they need the fewest queries
    out.sort_by(|a, b| b.total_cmp(a));
    out.dedup();
    out
}

struct Candidate {
    params: FilterParams,
    raw: FourierSeries,
    cost: f64,
}

/// Analytic-extension approximation of `f` with `t = 1`; returns the chosen
/// filter parameters alongside the result.
pub fn analytic_extension(
    f: &TargetFunction,
    eps: f64,
    opts: &ApproxOptions,
) -> Result<(ApproxResult, FilterParams)> {
    check_eps(eps)?;
    if f.is_constant() {
        let (series, alpha) = enforce_unit_modulus(FourierSeries::constant(f.eval(0.0)));
        let result = ApproxResult {
            method: Method::AnalyticExtension,
            q: 0,
            alpha,
            t: 1.0,
            delta: None,
            eps_target: eps,
            eps_measured: target_error(&series, f, alpha, 1.0, opts.grid_points),
            series,
        };
        let params = FilterParams {
            l: filter_steepness((1.0 + PI) / 2.0, eps)?,
            chi: (1.0 + PI) / 2.0,
        };
        return Ok((result, params));
    }
    let literal = choose_filter_params(f, eps)?;
    let chis = match opts.chi_rule {
        ChiRule::Normalized => vec![literal.chi],
        ChiRule::QueryOptimal => chi_candidates(literal.chi),
    };

    let mut best: Option<Candidate> = None;
    let mut closest = (0usize, f64::INFINITY);
    for chi in chis {
        let params = if chi == literal.chi {
            literal
        } else {
            FilterParams {
                l: filter_steepness(chi, eps)?,
                chi,
            }
        };
        let g = move |x: f64| {
            let b = erf_filter(x, params.l, params.chi);
            if b == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                f.eval(x) * b
            }
        };
        let search = Search::new(&g, |l| f.eval(l), 1.0, eps, opts.q_max, opts.grid_points);
        let cutoff = best.as_ref().map(|b| b.cost.ceil() as usize);
        match search.run(cutoff)? {
            Outcome::Found(found) => {
                let q = found.series.q();
                let peak = found.series.max_modulus_refined().max(1.0);
                let cost = q as f64 * peak * peak;
                let better = best.as_ref().map_or(true, |b| {
                    cost < b.cost || (cost == b.cost && q < b.raw.q())
                });
                if better {
                    best = Some(Candidate {
                        params,
                        raw: found.series,
                        cost,
                    });
                }
            }
            Outcome::Ceiling { best_q, best_error } => {
                if best_error < closest.1 {
                    closest = (best_q, best_error);
                }
            }
            Outcome::Pruned => {}
        }
    }

    let Some(chosen) = best else {
        return Err(Error::SearchCeiling {
            q_max: opts.q_max,
            eps,
            best_q: closest.0,
            best_error: closest.1,
        });
    };
    let q = chosen.raw.q();
    let (series, alpha) = enforce_unit_modulus(chosen.raw);
    let eps_measured = target_error(&series, f, alpha, 1.0, opts.grid_points);
    Ok((
        ApproxResult {
            method: Method::AnalyticExtension,
            q,
            alpha,
            t: 1.0,
            delta: None,
            eps_target: eps,
            eps_measured,
            series,
        },
        chosen.params,
    ))
}

/// Analytic-extension approximation of `f` on `[-1, 1]` (oracle time `t = 1`).
pub fn analytic_extension_series(f: &TargetFunction, eps: f64, opts: &ApproxOptions) -> Result<ApproxResult> {
    analytic_extension(f, eps, opts).map(|(r, _)| r)
}
