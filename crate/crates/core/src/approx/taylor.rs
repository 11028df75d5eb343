//! Taylor route: truncate a power series, rewrite it as a Fourier series on
//! `[-pi/2 + delta, pi/2 - delta]` and read off an a-priori query count.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_eps, enforce_unit_modulus, target_error, ApproxOptions, ApproxResult, Method, TargetFunction};
use crate::error::{Error, Result};
use crate::fourier::{linspace, FourierSeries};

const MAX_ORDER: usize = 10_000;
const MAX_ARCSIN_DEGREE: usize = 8192;

/// `delta = 2 pi / (sqrt(beta + 4) + sqrt(beta))^2`, the margin that
/// balances query count against sub-normalization for `exp(-beta (x + 1))`.
pub fn temperature_delta(beta: f64) -> f64 {
    2.0 * PI / ((beta + 4.0).sqrt() + beta.sqrt()).powi(2)
}

/// Smallest `L` whose Lagrange remainder bound `alpha max|f^(L+1)| / (L+1)!`
/// is at most `eps / 4` on `[-1, 1]`.
pub fn taylor_order(f: &TargetFunction, eps: f64, alpha: f64) -> Result<usize> {
    check_eps(eps)?;
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidInput(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let budget = eps / 4.0;
    match f {
        TargetFunction::Exponential { beta } => {
            // beta^n / n!, built up incrementally
            let mut term = 1.0;
            for l in 0..MAX_ORDER {
                term *= beta / (l + 1) as f64;
                if alpha * term <= budget {
                    return Ok(l);
                }
            }
            Err(Error::InvalidInput(format!("Taylor order exceeds {MAX_ORDER}")))
        }
        TargetFunction::PowerSeries(a) => {
            for l in 0..a.len() {
                let n = l + 1;
                let bound = f.derivative_bound(n).unwrap_or(0.0);
                let factorial: f64 = (1..=n).map(|k| k as f64).product();
                if alpha * bound / factorial <= budget {
                    return Ok(l);
                }
            }
            Ok(a.len().saturating_sub(1))
        }
        TargetFunction::Tabulated { .. } => Err(Error::Unsupported("tabulated functions")),
    }
}

/// `alpha = 1 / sum_l |a_l| / (1 - 2 delta / pi)^l`, clamped to at most one.
pub fn subnormalization_alpha(a: &[Complex64], delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let shrink = 1.0 - 2.0 * delta / PI;
    let sum: f64 = a
        .iter()
        .enumerate()
        .map(|(l, c)| c.norm() / shrink.powi(l as i32))
        .sum();
    if !sum.is_finite() {
        return Err(Error::DivergentSum(sum));
    }
    if sum <= 1.0 {
        Ok(1.0)
    } else {
        Ok(1.0 / sum)
    }
}

/// Closed form of [`subnormalization_alpha`] for the full exponential series.
pub fn exponential_alpha(beta: f64, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let shrink = 1.0 - 2.0 * delta / PI;
    let exponent = beta * (1.0 / shrink - 1.0);
    if !exponent.is_finite() {
        return Err(Error::DivergentSum(exponent));
    }
    Ok((-exponent).exp().min(1.0))
}

/// Query count `q` (even) sufficient for a power series with coefficient
/// 1-norm `d_l1` in the variable `2x/pi` to be reproduced within `eps` on
/// `[-pi/2 + delta, pi/2 - delta]`.
pub fn taylor_route_q(delta: f64, eps: f64, d_l1: f64) -> Result<usize> {
    check_delta(delta)?;
    check_eps(eps)?;
    if !(d_l1 >= 0.0 && d_l1.is_finite()) {
        return Err(Error::InvalidInput(format!("coefficient norm must be non-negative, got {d_l1}")));
    }
    if d_l1 == 0.0 {
        return Ok(0);
    }
    let raw = (2.0 * PI / delta * (4.0 * d_l1 / eps).ln()).ceil().max(0.0) as usize;
    Ok(raw + raw % 2)
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta < PI / 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("delta must lie in (0, pi/2), got {delta}")))
    }
}

/// Power-series coefficients of `(2/pi) arcsin(y)` up to degree `k_max`.
fn scaled_arcsin(k_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; k_max + 1];
    // (2k)! / (4^k (k!)^2)
    let mut central = 1.0;
    let mut k = 0;
    while 2 * k + 1 <= k_max {
        if k > 0 {
            central *= (2 * k - 1) as f64 / (2 * k) as f64;
        }
        out[2 * k + 1] = 2.0 / PI * central / (2 * k + 1) as f64;
        k += 1;
    }
    out
}

/// Coefficients in `y = sin x` of `sum_l d_l ((2/pi) arcsin y)^l`, truncated
/// at degree `k_max`.
fn compose_with_arcsin(d: &[Complex64], k_max: usize) -> Vec<Complex64> {
    let arc = scaled_arcsin(k_max);
    let mut acc = vec![Complex64::new(0.0, 0.0); k_max + 1];
    for dl in d.iter().rev() {
        let mut next = vec![Complex64::new(0.0, 0.0); k_max + 1];
        for (i, &a) in acc.iter().enumerate() {
            if a == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (j, &s) in arc.iter().enumerate().take(k_max + 1 - i).skip(1).step_by(2) {
                next[i + j] += a * s;
            }
        }
        next[0] += dl;
        acc = next;
    }
    acc
}

/// Expands `sum_k p_k sin^k x` in exponentials, dropping `|m| > half_order`.
fn sine_powers_to_fourier(p: &[Complex64], half_order: usize) -> FourierSeries {
    let n = half_order as i64;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * half_order + 1];
    // row k of the binomial distribution C(k, j) / 2^k
    let mut row = vec![1.0f64];
    let mut minus_i_pow = Complex64::new(1.0, 0.0);
    for (k, &pk) in p.iter().enumerate() {
        if k > 0 {
            let mut next = vec![0.0; k + 1];
            for (j, &r) in row.iter().enumerate() {
                next[j] += 0.5 * r;
                next[j + 1] += 0.5 * r;
            }
            row = next;
            minus_i_pow *= Complex64::new(0.0, -1.0);
        }
        if pk == Complex64::new(0.0, 0.0) {
            continue;
        }
        // sin^k x = (-i)^k 2^-k sum_j C(k,j) (-1)^(k-j) e^{i(2j-k)x}
        let base = pk * minus_i_pow;
        for (j, &w) in row.iter().enumerate() {
            let m = 2 * j as i64 - k as i64;
            if m.abs() > n {
                continue;
            }
            let sign = if (k - j) % 2 == 0 { 1.0 } else { -1.0 };
            coeffs[(m + n) as usize] += base * (sign * w);
        }
    }
    FourierSeries::new(coeffs).expect("finite coefficients")
}

/// Fourier series of half order `q/2` approximating `sum_l d_l (2x/pi)^l`
/// on `[-pi/2 + delta, pi/2 - delta]`.
///
/// `eps_measured` is the sup error against the power series on a `10q`-point
/// grid of that interval; the result keeps `alpha = 1`.
pub fn taylor_to_fourier(d: &[Complex64], delta: f64, eps: f64) -> Result<ApproxResult> {
    check_delta(delta)?;
    check_eps(eps)?;
    if d.is_empty() {
        return Err(Error::InvalidInput("empty power series".into()));
    }
    let d_l1: f64 = d.iter().map(|c| c.norm()).sum();
    let q = taylor_route_q(delta, eps, d_l1)?;
    let x0 = PI / 2.0 - delta;
    let poly = |x: f64| {
        let y = 2.0 * x / PI;
        d.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, c| acc * y + c)
    };
    let budget = 0.75 * eps;
    let grid = (10 * q).max(101);
    let check = |s: &FourierSeries| {
        linspace(-x0, x0, grid)
            .map(|x| (s.evaluate(x) - poly(x)).norm())
            .fold(0.0, f64::max)
    };

    let base = FourierSeries::constant(d[0]);
    if d.len() == 1 || d[1..].iter().all(|c| c.norm() == 0.0) {
        return Ok(ApproxResult {
            method: Method::TaylorFourier,
            q: 0,
            alpha: 1.0,
            t: x0,
            delta: Some(delta),
            eps_target: eps,
            eps_measured: 0.0,
            series: base,
        });
    }

    // degree at which the arcsin tail at y = cos(delta) drops below eps / 16
    let tail = (16.0 / eps).ln() / -(delta.cos().ln());
    let mut k_max = (tail.ceil() as usize).clamp(32, MAX_ARCSIN_DEGREE).max(d.len());
    let mut measured = f64::INFINITY;
    loop {
        let p = compose_with_arcsin(d, k_max);
        let series = sine_powers_to_fourier(&p, q / 2);
        let err = check(&series);
        measured = measured.min(err);
        if err <= budget {
            return Ok(ApproxResult {
                method: Method::TaylorFourier,
                q,
                alpha: 1.0,
                t: x0,
                delta: Some(delta),
                eps_target: eps,
                eps_measured: err,
                series,
            });
        }
        if k_max >= MAX_ARCSIN_DEGREE {
            return Err(Error::VerificationFailed {
                measured,
                tolerance: budget,
            });
        }
        k_max = (2 * k_max).min(MAX_ARCSIN_DEGREE);
    }
}

/// Full Taylor route for `f`: sub-normalization, truncation order, Fourier
/// conversion. The result approximates `alpha f(x / t)` with
/// `t = pi/2 - delta`; `delta` defaults to [`temperature_delta`] for the
/// exponential.
pub fn taylor_fourier_series(
    f: &TargetFunction,
    eps: f64,
    delta: Option<f64>,
    opts: &ApproxOptions,
) -> Result<ApproxResult> {
    check_eps(eps)?;
    let delta = match (delta, f) {
        (Some(d), _) => d,
        (None, TargetFunction::Exponential { beta }) => temperature_delta(*beta),
        (None, _) => PI / 8.0,
    };
    check_delta(delta)?;
    let shrink = 1.0 - 2.0 * delta / PI;
    let alpha = match f {
        TargetFunction::Exponential { beta } => exponential_alpha(*beta, delta)?,
        TargetFunction::PowerSeries(a) => subnormalization_alpha(a, delta)?,
        TargetFunction::Tabulated { .. } => return Err(Error::Unsupported("tabulated functions")),
    };
    let order = taylor_order(f, eps, alpha)?;
    let a = f
        .taylor_coefficients(order + 1)
        .ok_or(Error::Unsupported("tabulated functions"))?;
    let d: Vec<Complex64> = a
        .iter()
        .enumerate()
        .map(|(l, c)| c * (alpha / shrink.powi(l as i32)))
        .collect();
    let mut result = taylor_to_fourier(&d, delta, eps)?;
    let (series, factor) = enforce_unit_modulus(result.series);
    result.series = series;
    result.alpha = alpha * factor;
    result.eps_measured = target_error(&result.series, f, result.alpha, result.t, opts.grid_points);
    if result.eps_measured > eps {
        return Err(Error::VerificationFailed {
            measured: result.eps_measured,
            tolerance: eps,
        });
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn real(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn order_for_unit_exponential() {
        // 1/3! = 0.167 > 0.1 >= 1/4! = 0.042
        let f = TargetFunction::exponential(1.0).unwrap();
        assert_eq!(taylor_order(&f, 0.4, 1.0).unwrap(), 3);
    }

    #[test]
    fn order_for_cubic() {
        let f = TargetFunction::power_series(real(&[0.1, 0.2, 0.3, 1.0])).unwrap();
        assert_eq!(taylor_order(&f, 0.5, 1.0).unwrap(), 3);
        assert_eq!(taylor_order(&f, 1e-6, 1.0).unwrap(), 3);
    }

    #[test]
    fn order_matches_factorial_scan() {
        let f = TargetFunction::exponential(2.0).unwrap();
        let l = taylor_order(&f, 1e-3, 0.5).unwrap();
        let bound = |n: i32| 0.5 * 2f64.powi(n) / (1..=n).map(|k| k as f64).product::<f64>();
        assert!(bound(l as i32 + 1) <= 2.5e-4);
        assert!(bound(l as i32) > 2.5e-4);
        assert_eq!(l, 9);
        let tab = TargetFunction::tabulated("x", |x| Complex64::new(x, 0.0));
        assert!(matches!(taylor_order(&tab, 0.1, 1.0), Err(Error::Unsupported(_))));
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(subnormalization_alpha(&real(&[1.0]), 0.3).unwrap(), 1.0);
        assert_eq!(subnormalization_alpha(&real(&[0.5, 0.25]), PI / 4.0).unwrap(), 1.0);
        let closed = exponential_alpha(2.0, PI / 4.0).unwrap();
        assert!((closed - (-2.0f64).exp()).abs() < 1e-15);
        let f = TargetFunction::exponential(2.0).unwrap();
        let summed = subnormalization_alpha(&f.taylor_coefficients(80).unwrap(), PI / 4.0).unwrap();
        assert!((summed - closed).abs() < 1e-12);
        assert!(subnormalization_alpha(&real(&[1.0]), PI / 2.0).is_err());
        assert!(matches!(
            subnormalization_alpha(&real(&[1e308, 1e308, 1e308]), 1.5),
            Err(Error::DivergentSum(_))
        ));
    }

    #[test]
    fn query_count_examples() {
        assert_eq!(taylor_route_q(PI / 8.0, 0.04, 1.0).unwrap(), 74);
        assert_eq!(taylor_route_q(0.3, 0.04, 0.01).unwrap(), 0);
        assert_eq!(taylor_route_q(0.3, 0.04, 0.0).unwrap(), 0);
        let delta = temperature_delta(4.0);
        assert!((delta - 2.0 * PI / (8f64.sqrt() + 2.0).powi(2)).abs() < 1e-15);
        let raw = (2.0 * PI / delta * 400f64.ln()).ceil() as usize;
        assert_eq!(taylor_route_q(delta, 1e-2, 1.0).unwrap(), raw + raw % 2);
    }

    #[test]
    fn arcsin_series_reproduces_line() {
        let arc = scaled_arcsin(400);
        let y: f64 = 0.7;
        let v: f64 = arc.iter().enumerate().map(|(k, a)| a * y.powi(k as i32)).sum();
        assert!((v - 2.0 / PI * y.asin()).abs() < 1e-12);
        // (2/pi) arcsin(1) = 1 equals the coefficient sum
        let total: f64 = scaled_arcsin(200_000).iter().sum();
        assert!((total - 1.0).abs() < 3e-3);
    }

    #[test]
    fn constant_passes_through() {
        let r = taylor_to_fourier(&real(&[0.7]), 0.4, 0.1).unwrap();
        assert_eq!(r.series, FourierSeries::constant(Complex64::new(0.7, 0.0)));
        assert_eq!(r.q, 0);
    }

    #[test]
    fn line_on_reduced_interval() {
        let delta = PI / 6.0;
        let r = taylor_to_fourier(&real(&[0.0, 1.0]), delta, 1e-3).unwrap();
        let x0 = PI / 2.0 - delta;
        let err = linspace(-x0, x0, 1001)
            .map(|x| (r.series.evaluate(x).re - 2.0 * x / PI).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-3, "{err}");
        assert!(r.series.l1_norm() <= 1.0 + 1e-12);
        assert_eq!(r.q, taylor_route_q(delta, 1e-3, 1.0).unwrap());
        assert_eq!(r.t, x0);
    }

    #[test]
    fn exponential_pipeline() {
        let f = TargetFunction::exponential(1.0).unwrap();
        let r = taylor_fourier_series(&f, 1e-2, None, &ApproxOptions::default()).unwrap();
        assert!(r.eps_measured <= 1e-2);
        assert_eq!(r.q % 2, 0);
        assert_eq!(r.q, 64);
        assert!(r.alpha > 0.0 && r.alpha <= 1.0);
        assert!(r.series.max_modulus_refined() <= 1.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn query_count_monotone(delta in 0.05f64..1.5, eps in 1e-6f64..0.5, norm in 0.1f64..3.0) {
            let q = taylor_route_q(delta, eps, norm).unwrap();
            prop_assert_eq!(q % 2, 0);
            prop_assert!(taylor_route_q(delta, (eps * 2.0).min(0.99), norm).unwrap() <= q);
            prop_assert!(taylor_route_q(delta * 0.5, eps, norm).unwrap() >= q);
        }
    }
}
