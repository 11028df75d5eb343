//! Smallest even `q` whose truncated series meets a sup-error target.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::{coefficients_by_quadrature, window_sup_error, FourierSeries};

pub(crate) struct Found {
    pub series: FourierSeries,
    pub error: f64,
}

pub(crate) enum Outcome {
    Found(Found),
    /// Every candidate at or below the ceiling failed.
    Ceiling { best_q: usize, best_error: f64 },
    /// The lower bound on `q` reached the caller's cut-off.
    Pruned,
}

pub(crate) struct Search<'a> {
    /// Function whose standard Fourier series is truncated.
    pub extension: &'a (dyn Fn(f64) -> Complex64 + Sync),
    /// Target `f(lambda)` on `[-1, 1]`.
    pub target: Box<dyn Fn(f64) -> Complex64 + 'a>,
    /// Minimum number of error samples across the window.
    pub grid_points: usize,
    /// Oracle time: the series is evaluated at `lambda * t`.
    pub t: f64,
    pub eps: f64,
    pub q_max: usize,
}

impl<'a> Search<'a> {
    pub fn new(
        extension: &'a (dyn Fn(f64) -> Complex64 + Sync),
        target: impl Fn(f64) -> Complex64 + 'a,
        t: f64,
        eps: f64,
        q_max: usize,
        grid_points: usize,
    ) -> Self {
        Self {
            extension,
            target: Box::new(target),
            grid_points,
            t,
            eps,
            q_max,
        }
    }

    fn error(&self, coefficients: &FourierSeries, half_order: usize) -> f64 {
        let s = coefficients.with_half_order(half_order);
        window_sup_error(&s, &self.target, self.t, self.grid_points)
    }

    /// Doubling followed by bisection. `cutoff` abandons the search once the
    /// smallest possible `q` reaches it.
    pub fn run(&self, cutoff: Option<usize>) -> Result<Outcome> {
        let cap = self.q_max / 2;
        let first = cap.min(1);
        let coeffs = coefficients_by_quadrature(self.extension, first, 8 * first + 8)?;
        let e0 = self.error(&coeffs, 0);
        if e0 <= self.eps {
            return Ok(Outcome::Found(Found {
                series: coeffs.with_half_order(0),
                error: e0,
            }));
        }
        let mut best = (0usize, e0);
        let mut failed = 0usize;
        let mut size = first;
        while size > failed {
            let coeffs = coefficients_by_quadrature(self.extension, size, 8 * size + 8)?;
            let e = self.error(&coeffs, size);
            if e < best.1 {
                best = (2 * size, e);
            }
            if e <= self.eps {
                // failed fails, hi passes
                let (mut lo, mut hi, mut hi_err) = (failed + 1, size, e);
                while lo < hi {
                    let mid = (lo + hi) / 2;
                    let em = self.error(&coeffs, mid);
                    if em <= self.eps {
                        hi = mid;
                        hi_err = em;
                    } else {
                        lo = mid + 1;
                    }
                }
                return Ok(Outcome::Found(Found {
                    series: coeffs.with_half_order(hi),
                    error: hi_err,
                }));
            }
            failed = size;
            if cutoff.is_some_and(|c| 2 * (failed + 1) >= c) {
                return Ok(Outcome::Pruned);
            }
            size = (2 * size).min(cap);
        }
        Ok(Outcome::Ceiling {
            best_q: best.0,
            best_error: best.1,
        })
    }

    pub fn run_or_ceiling(&self) -> Result<Found> {
        match self.run(None)? {
            Outcome::Found(f) => Ok(f),
            Outcome::Ceiling { best_q, best_error } => Err(Error::SearchCeiling {
                q_max: self.q_max,
                eps: self.eps,
                best_q,
                best_error,
            }),
            Outcome::Pruned => unreachable!("no cutoff was given"),
        }
    }
}
