//! Truncated Fourier series on the circle.
//!
//! A [`FourierSeries`] of half order `n` holds `2n + 1` complex coefficients
//! `c_m` for `m = -n ..= n`, stored in ascending `m`, and represents
//! `g(x) = sum_m c_m e^{imx}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of equispaced points used by error reports.
pub const DEFAULT_GRID_POINTS: usize = 1001;

#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    half_order: usize,
    coefficients: Vec<Complex64>,
}

/// Result of comparing a series against a reference on an equispaced grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    pub grid_points: usize,
    pub interval: (f64, f64),
    pub max_abs_error: f64,
    pub argmax_x: f64,
}

impl FourierSeries {
    /// Builds a series from coefficients in ascending `m`. The length must be odd.
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        if coefficients.len() % 2 == 0 {
            return Err(Error::InvalidInput(format!(
                "coefficient list must have odd length, got {}",
                coefficients.len()
            )));
        }
        if coefficients.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput("non-finite Fourier coefficient".into()));
        }
        Ok(Self {
            half_order: coefficients.len() / 2,
            coefficients,
        })
    }

    pub fn zeros(half_order: usize) -> Self {
        Self {
            half_order,
            coefficients: vec![Complex64::new(0.0, 0.0); 2 * half_order + 1],
        }
    }

    pub fn constant(value: Complex64) -> Self {
        Self {
            half_order: 0,
            coefficients: vec![value],
        }
    }

    /// Builds a series of the given half order from `(m, c_m)` pairs; unset
    /// coefficients are zero.
    pub fn from_terms(half_order: usize, terms: &[(i64, Complex64)]) -> Result<Self> {
        let mut s = Self::zeros(half_order);
        for &(m, c) in terms {
            if m.unsigned_abs() as usize > half_order {
                return Err(Error::InvalidInput(format!(
                    "frequency {m} outside half order {half_order}"
                )));
            }
            s.coefficients[(m + half_order as i64) as usize] = c;
        }
        Self::new(s.coefficients)
    }

    pub fn half_order(&self) -> usize {
        self.half_order
    }

    /// Query complexity `q = 2 * half_order`.
    pub fn q(&self) -> usize {
        2 * self.half_order
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn into_coefficients(self) -> Vec<Complex64> {
        self.coefficients
    }

    /// Coefficient `c_m`; zero outside the stored band.
    pub fn coeff(&self, m: i64) -> Complex64 {
        let n = self.half_order as i64;
        if m < -n || m > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.coefficients[(m + n) as usize]
        }
    }

    /// Evaluates `sum_m c_m e^{imx}` with Horner's rule in `z = e^{ix}`.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        let z = Complex64::cis(x);
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coefficients.iter().rev() {
            acc = acc * z + c;
        }
        acc * Complex64::cis(-(self.half_order as f64) * x)
    }

    pub fn l1_norm(&self) -> f64 {
        self.coefficients.iter().map(|c| c.norm()).sum()
    }

    /// Returns the series padded (or truncated) to another half order.
    pub fn with_half_order(&self, half_order: usize) -> Self {
        let mut out = Self::zeros(half_order);
        let n = half_order as i64;
        for m in -n..=n {
            out.coefficients[(m + n) as usize] = self.coeff(m);
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            half_order: self.half_order,
            coefficients: self.coefficients.iter().map(|c| c * factor).collect(),
        }
    }

    /// Coefficient-wise sum; the result has the larger of the two half orders.
    pub fn add(&self, other: &Self) -> Self {
        let n = self.half_order.max(other.half_order);
        let a = self.with_half_order(n);
        let b = other.with_half_order(n);
        Self {
            half_order: n,
            coefficients: a
                .coefficients
                .iter()
                .zip(&b.coefficients)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    /// Largest `|g(x)|` over `points` equispaced samples of `[-pi, pi]`.
    pub fn max_modulus(&self, points: usize) -> f64 {
        linspace(-PI, PI, points)
            .map(|x| self.evaluate(x).norm())
            .fold(0.0, f64::max)
    }

    /// Values at `x_k = 2 pi k / m`, `k = 0..m`, by an inverse FFT.
    /// `m` must be at least `2n + 1`.
    pub fn circle_samples(&self, m: usize) -> Vec<Complex64> {
        assert!(m > 2 * self.half_order, "circle grid too coarse");
        let mut buf = vec![Complex64::new(0.0, 0.0); m];
        let n = self.half_order as i64;
        for (c, k) in self.coefficients.iter().zip(-n..=n) {
            buf[k.rem_euclid(m as i64) as usize] = *c;
        }
        FftPlanner::new().plan_fft_inverse(m).process(&mut buf);
        buf
    }

    /// Maximum of `|g|` on the circle: a dense grid scan followed by a
    /// golden-section refinement of the largest local maxima.
    pub fn max_modulus_refined(&self) -> f64 {
        let m = (32 * self.half_order + 1).max(DEFAULT_GRID_POINTS).next_power_of_two();
        let step = 2.0 * PI / m as f64;
        let values: Vec<f64> = self.circle_samples(m).iter().map(|v| v.norm()).collect();
        let mut peaks: Vec<usize> = (0..m)
            .filter(|&i| values[i] >= values[(i + m - 1) % m] && values[i] >= values[(i + 1) % m])
            .collect();
        peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
        let mut best = values.iter().copied().fold(0.0, f64::max);
        for &i in peaks.iter().take(8) {
            let centre = step * i as f64;
            best = best.max(golden_max(&|x: f64| self.evaluate(x).norm(), centre - step, centre + step));
        }
        best
    }
}

/// `points` equispaced values from `a` to `b`, both endpoints included.
pub fn linspace(a: f64, b: f64, points: usize) -> impl Iterator<Item = f64> {
    let step = if points > 1 {
        (b - a) / (points - 1) as f64
    } else {
        0.0
    };
    (0..points).map(move |i| if i + 1 == points && points > 1 { b } else { a + step * i as f64 })
}

/// Sup over `lambda` in `[-1, 1]` of `|series(lambda t) - reference(lambda)|`.
///
/// The series is sampled by an inverse FFT on a circle grid fine enough for
/// at least 32 samples per period of its top harmonic (and no coarser than
/// `min_points` across the window), then the largest local maxima are
/// refined by golden-section search. Requires `0 < t <= pi`.
pub fn window_sup_error<F>(series: &FourierSeries, reference: F, t: f64, min_points: usize) -> f64
where
    F: Fn(f64) -> Complex64,
{
    let err = |l: f64| (series.evaluate(l * t) - reference(l)).norm();
    let mut best = err(-1.0).max(err(1.0));
    if !(t > 0.0 && t <= PI) {
        return linspace(-1.0, 1.0, min_points.max(2)).map(err).fold(best, f64::max);
    }
    let want = (32 * series.half_order + 1)
        .max((PI * min_points as f64 / t).ceil() as usize)
        .max(2 * series.half_order + 1);
    let m = want.next_power_of_two();
    let buf = series.circle_samples(m);
    // circle points in the window, ordered by x
    let step = 2.0 * PI / m as f64;
    let reach = (t / step).floor() as i64;
    let errors: Vec<(f64, f64)> = (-reach..=reach)
        .map(|k| {
            let l = (k as f64 * step / t).clamp(-1.0, 1.0);
            (l, (buf[k.rem_euclid(m as i64) as usize] - reference(l)).norm())
        })
        .collect();
    for &(_, e) in &errors {
        best = best.max(e);
    }
    let mut peaks: Vec<usize> = (1..errors.len().saturating_sub(1))
        .filter(|&i| errors[i].1 >= errors[i - 1].1 && errors[i].1 >= errors[i + 1].1)
        .collect();
    peaks.sort_by(|&a, &b| errors[b].1.total_cmp(&errors[a].1));
    let dl = step / t;
    for &i in peaks.iter().take(8) {
        let (l, _) = errors[i];
        best = best.max(golden_max(&err, (l - dl).max(-1.0), (l + dl).min(1.0)));
    }
    best
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// Truncated standard Fourier series of `g` by equispaced trapezoidal
/// quadrature on `[-pi, pi)`.
pub fn coefficients_by_quadrature<F>(g: F, half_order: usize, quad_points: usize) -> Result<FourierSeries>
where
    F: Fn(f64) -> Complex64,
{
    let required = 4 * half_order + 4;
    if quad_points < required {
        return Err(Error::TooFewQuadraturePoints {
            half_order,
            required,
            got: quad_points,
        });
    }
    let h = 2.0 * PI / quad_points as f64;
    let mut samples: Vec<Complex64> = (0..quad_points).map(|j| g(-PI + h * j as f64)).collect();
    FftPlanner::new().plan_fft_forward(quad_points).process(&mut samples);
    // the grid starts at -pi, which contributes (-1)^m
    let inv = 1.0 / quad_points as f64;
    let n = half_order as i64;
    let coeffs = (-n..=n)
        .map(|m| {
            let c = samples[m.rem_euclid(quad_points as i64) as usize] * inv;
            if m % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    FourierSeries::new(coeffs)
}

/// Sup-norm error of `series` against `reference` on `points` equispaced
/// samples of `interval` (endpoints included).
pub fn sup_error_on_grid<F>(
    series: &FourierSeries,
    reference: F,
    interval: (f64, f64),
    points: usize,
) -> GridReport
where
    F: Fn(f64) -> Complex64,
{
    let points = points.max(2);
    let mut max_abs_error = 0.0;
    let mut argmax_x = interval.0;
    for x in linspace(interval.0, interval.1, points) {
        let e = (series.evaluate(x) - reference(x)).norm();
        if e > max_abs_error {
            max_abs_error = e;
            argmax_x = x;
        }
    }
    GridReport {
        grid_points: points,
        interval,
        max_abs_error,
        argmax_x,
    }
}

pub fn l1_norm(series: &FourierSeries) -> f64 {
    series.l1_norm()
}

pub fn evaluate(series: &FourierSeries, x: f64) -> Complex64 {
    series.evaluate(x)
}

/// On-disk form: `{ "half_order": n, "coefficients": [[re, im], ...] }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeriesFile {
    pub half_order: usize,
    pub coefficients: Vec<[f64; 2]>,
}

impl From<&FourierSeries> for SeriesFile {
    fn from(s: &FourierSeries) -> Self {
        Self {
            half_order: s.half_order,
            coefficients: s.coefficients.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl TryFrom<SeriesFile> for FourierSeries {
    type Error = Error;

    fn try_from(f: SeriesFile) -> Result<Self> {
        if f.coefficients.len() != 2 * f.half_order + 1 {
            return Err(Error::InvalidInput(format!(
                "half_order {} needs {} coefficients, found {}",
                f.half_order,
                2 * f.half_order + 1,
                f.coefficients.len()
            )));
        }
        FourierSeries::new(
            f.coefficients
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

impl Serialize for FourierSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesFile::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FourierSeries {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = SeriesFile::deserialize(deserializer)?;
        FourierSeries::try_from(file).map_err(serde::de::Error::custom)
    }
}
