//! Complementary series: given `g` with `|g| <= 1`, find `h` of the same
//! order with `|g|^2 + |h|^2 = 1` by splitting the roots of `1 - |g|^2`.

pub mod roots;

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{linspace, FourierSeries, DEFAULT_GRID_POINTS};

pub use roots::poly_roots;

/// Default pre-scale used when `g` touches the unit circle.
pub const DEFAULT_MARGIN: f64 = 1e-6;
const PAIRING_TOLERANCE: f64 = 1e-6;
const UNITARITY_TOLERANCE: f64 = 1e-8;
const ROOT_TOLERANCE: f64 = 1e-10;
const REFINE_STEPS: usize = 30;

/// `G(z) = sum_{k=-q}^{q} a_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPolynomial {
    order: usize,
    coefficients: Vec<Complex64>,
}

impl LaurentPolynomial {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        let q = self.order as i64;
        if k.abs() > q {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[(k + q) as usize]
        }
    }

    /// `G(e^{ix})`.
    pub fn on_circle(&self, x: f64) -> Complex64 {
        FourierSeries::new(self.coefficients.clone())
            .expect("odd length")
            .evaluate(x)
    }

    /// Order after dropping outer coefficients below `1e-14 max|a_k|`.
    pub fn effective_order(&self) -> usize {
        let peak = self.coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let threshold = 1e-14 * peak;
        (0..=self.order)
            .rev()
            .find(|&k| {
                let k = k as i64;
                self.coeff(k).norm() > threshold || self.coeff(-k).norm() > threshold
            })
            .unwrap_or(0)
    }
}

/// Coefficients of `1 - |g(x)|^2` as a Laurent polynomial in `z = e^{ix}`.
pub fn build_g(g: &FourierSeries) -> LaurentPolynomial {
    let n = g.half_order() as i64;
    let q = 2 * n;
    let mut coefficients = vec![Complex64::new(0.0, 0.0); (2 * q + 1) as usize];
    for k in -q..=q {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in (-n).max(k - n)..=n.min(k + n) {
            acc += g.coeff(l) * g.coeff(l - k).conj();
        }
        coefficients[(k + q) as usize] = -acc;
    }
    coefficients[q as usize] += 1.0;
    LaurentPolynomial {
        order: q as usize,
        coefficients,
    }
}

/// Roots of `z^q' G(z)` for the effective order `q'`, sorted by modulus then
/// phase. The first half lies inside or on the unit circle.
pub fn laurent_roots(big_g: &LaurentPolynomial) -> Result<Vec<Complex64>> {
    let q = big_g.effective_order() as i64;
    if q == 0 {
        return Ok(Vec::new());
    }
    let p: Vec<Complex64> = (-q..=q).map(|k| big_g.coeff(k)).collect();
    let mut r = poly_roots(&p, ROOT_TOLERANCE)?;
    roots::sort_roots(&mut r);
    Ok(r)
}

fn check_pairing(roots: &[Complex64]) -> Result<()> {
    for &r in roots {
        let mirror = r.conj().inv();
        let distance = roots.iter().map(|&s| (s - mirror).norm()).fold(f64::INFINITY, f64::min);
        let tolerance = PAIRING_TOLERANCE * mirror.norm().max(1.0);
        if distance > tolerance {
            return Err(Error::RootPairing {
                root: r,
                distance,
                tolerance,
            });
        }
    }
    Ok(())
}

/// `c_k = sum_j p_j conj(p_{j-k})` for `k = 0 ..= deg p`.
fn autocorrelation(p: &[Complex64]) -> Vec<Complex64> {
    (0..p.len())
        .map(|k| (k..p.len()).map(|j| p[j] * p[j - k].conj()).sum())
        .collect()
}

/// Newton iteration on the coefficients of `P` for `|P(e^{ix})|^2 = G`,
/// given `G_0 ..= G_q`. The root product is accurate only to the root
/// conditioning; a few steps restore full precision. The global phase is
/// pinned at the largest coefficient.
fn refine_factor(mut p: Vec<Complex64>, target: &[Complex64]) -> Vec<Complex64> {
    let n = p.len();
    let residual = |p: &[Complex64]| -> Vec<Complex64> {
        autocorrelation(p).iter().zip(target).map(|(c, t)| t - c).collect()
    };
    let size = |r: &[Complex64]| r.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut r = residual(&p);
    let mut best = size(&r);
    let floor = 1e-15 * size(target);
    for _ in 0..REFINE_STEPS {
        if best <= floor {
            break;
        }
        let pin = (0..n).max_by(|&a, &b| p[a].norm().total_cmp(&p[b].norm())).unwrap_or(0);
        let mut jac = DMatrix::<f64>::zeros(2 * n, 2 * n);
        let mut rhs = DVector::<f64>::zeros(2 * n);
        for k in 0..n {
            for j in 0..n {
                // d c_k / d delta_j and d c_k / d conj(delta_j)
                let direct = if j >= k { p[j - k].conj() } else { Complex64::new(0.0, 0.0) };
                let mirror = if j + k < n { p[j + k] } else { Complex64::new(0.0, 0.0) };
                let da = direct + mirror;
                let db = Complex64::new(0.0, 1.0) * (direct - mirror);
                jac[(2 * k, 2 * j)] = da.re;
                jac[(2 * k, 2 * j + 1)] = db.re;
                jac[(2 * k + 1, 2 * j)] = da.im;
                jac[(2 * k + 1, 2 * j + 1)] = db.im;
            }
            rhs[2 * k] = r[k].re;
            rhs[2 * k + 1] = r[k].im;
        }
        // Im c_0 vanishes identically; its row fixes Im(conj(p_pin) delta_pin) = 0
        for col in 0..2 * n {
            jac[(1, col)] = 0.0;
        }
        jac[(1, 2 * pin)] = -p[pin].im;
        jac[(1, 2 * pin + 1)] = p[pin].re;
        rhs[1] = 0.0;
        let Some(step) = jac.lu().solve(&rhs) else {
            break;
        };
        let trial: Vec<Complex64> = (0..n)
            .map(|j| p[j] + Complex64::new(step[2 * j], step[2 * j + 1]))
            .collect();
        let trial_r = residual(&trial);
        let trial_size = size(&trial_r);
        if !(trial_size < best) {
            break;
        }
        p = trial;
        r = trial_r;
        best = trial_size;
    }
    p
}

/// Series `g` (possibly pre-scaled) together with its complement `h`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplementPair {
    pub g: FourierSeries,
    pub h: FourierSeries,
    /// Factor applied to the input `g`: `1` or `1 / (1 + margin)`.
    pub scale: f64,
}

/// Builds the complement of `g`. When `1 - max|g|^2 < 2 margin` the roots
/// crowd the unit circle, and `g` is first scaled by `1 / (1 + margin)`; the
/// returned pair carries the scaled `g`.
pub fn complement_pair(g: &FourierSeries, margin: f64) -> Result<ComplementPair> {
    if !(0.0..=0.1).contains(&margin) {
        return Err(Error::InvalidInput(format!("margin must lie in [0, 0.1], got {margin}")));
    }
    let peak = g.max_modulus_refined();
    if peak > 1.0 + 1e-12 {
        return Err(Error::NotNormalized(peak));
    }
    let scale = if margin > 0.0 && 1.0 - peak * peak < 2.0 * margin {
        1.0 / (1.0 + margin)
    } else {
        1.0
    };
    let g = g.scale(Complex64::new(scale, 0.0));
    let half_order = g.half_order();

    let big_g = build_g(&g);
    let q = big_g.effective_order();
    let product = if g.coefficients().iter().all(|c| c.norm() == 0.0) {
        vec![Complex64::new(1.0, 0.0)]
    } else if q == 0 {
        vec![Complex64::new(big_g.coeff(0).re.max(0.0).sqrt(), 0.0)]
    } else {
        let r = laurent_roots(&big_g)?;
        check_pairing(&r)?;
        // prod_k (1 - conj(r_k) z) over the inner half, sampled on the circle
        // and transformed back; expanding the product directly cancels badly
        let m = (2 * q + 2).next_power_of_two();
        let mut values: Vec<Complex64> = (0..m)
            .map(|j| {
                let z = Complex64::cis(2.0 * PI * j as f64 / m as f64);
                r[..q].iter().map(|root| 1.0 - root.conj() * z).product()
            })
            .collect();
        FftPlanner::new().plan_fft_forward(m).process(&mut values);
        values.truncate(q + 1);
        values.iter().map(|v| v / m as f64).collect()
    };

    // shift to frequencies -floor(q/2) ..= ceil(q/2)
    let shift = (q / 2) as i64;
    let terms: Vec<(i64, Complex64)> = product
        .iter()
        .enumerate()
        .map(|(j, &c)| (j as i64 - shift, c))
        .collect();
    let unscaled = FourierSeries::from_terms(half_order, &terms)?;
    let h = if q == 0 {
        unscaled
    } else {
        let points = 4 * q + 8;
        let (mut num, mut den) = (0.0, 0.0);
        for j in 0..points {
            let x = -PI + 2.0 * PI * j as f64 / points as f64;
            num += big_g.on_circle(x).re;
            den += unscaled.evaluate(x).norm_sqr();
        }
        let start = unscaled.scale(Complex64::new((num / den).sqrt(), 0.0));
        let factor: Vec<Complex64> = (0..=q as i64).map(|j| start.coeff(j - shift)).collect();
        let target: Vec<Complex64> = (0..=q as i64).map(|k| big_g.coeff(k)).collect();
        let refined = refine_factor(factor, &target);
        let terms: Vec<(i64, Complex64)> = refined
            .iter()
            .enumerate()
            .map(|(j, &c)| (j as i64 - shift, c))
            .collect();
        FourierSeries::from_terms(half_order, &terms)?
    };

    let worst = unitarity_error(&g, &h, DEFAULT_GRID_POINTS);
    if worst > UNITARITY_TOLERANCE {
        return Err(Error::VerificationFailed {
            measured: worst,
            tolerance: UNITARITY_TOLERANCE,
        });
    }
    Ok(ComplementPair { g, h, scale })
}

/// Complement `h` of `g` (after the pre-scale described in
/// [`complement_pair`]), with the same half order.
pub fn complementary_series(g: &FourierSeries, margin: f64) -> Result<FourierSeries> {
    complement_pair(g, margin).map(|p| p.h)
}

/// `max | |g|^2 + |h|^2 - 1 |` on `points` equispaced samples of `[-pi, pi]`.
pub fn unitarity_error(g: &FourierSeries, h: &FourierSeries, points: usize) -> f64 {
    linspace(-PI, PI, points)
        .map(|x| (g.evaluate(x).norm_sqr() + h.evaluate(x).norm_sqr() - 1.0).abs())
        .fold(0.0, f64::max)
}

/// Debug dump of a root list as `re,im,modulus` CSV.
pub fn roots_csv(roots: &[Complex64]) -> String {
    let mut out = String::from("re,im,modulus\n");
    for r in roots {
        let _ = writeln!(out, "{},{},{}", r.re, r.im, r.norm());
    }
    out
}
