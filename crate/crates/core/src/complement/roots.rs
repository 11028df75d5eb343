//! Polynomial roots by Aberth–Ehrlich iteration with Newton polishing.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_ITERATIONS: usize = 1000;
const POLISH_STEPS: usize = 3;

/// `p(z) / p'(z)` for ascending coefficients, evaluated in `1/z` outside the
/// unit disk to avoid overflow.
fn newton_ratio(a: &[Complex64], z: Complex64) -> Complex64 {
    let n = a.len() - 1;
    if z.norm() <= 1.0 {
        let (mut p, mut dp) = (a[n], Complex64::new(0.0, 0.0));
        for c in a[..n].iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        p / dp
    } else {
        // p(z) = z^n r(w), r(w) = sum_k a_{n-k} w^k, w = 1/z
        let w = z.inv();
        let (mut r, mut dr) = (a[0], Complex64::new(0.0, 0.0));
        for c in a[1..].iter() {
            dr = dr * w + r;
            r = r * w + c;
        }
        z * r / (r * n as f64 - w * dr)
    }
}

/// Backward error `|p(z)| / sum_k |a_k| |z|^k`.
pub fn relative_residual(a: &[Complex64], z: Complex64) -> f64 {
    let (value, scale) = if z.norm() <= 1.0 {
        let mut p = Complex64::new(0.0, 0.0);
        let mut s = 0.0;
        for c in a.iter().rev() {
            p = p * z + c;
            s = s * z.norm() + c.norm();
        }
        (p.norm(), s)
    } else {
        let w = z.inv();
        let mut r = Complex64::new(0.0, 0.0);
        let mut s = 0.0;
        for c in a.iter() {
            r = r * w + c;
            s = s * w.norm() + c.norm();
        }
        (r.norm(), s)
    };
    if scale == 0.0 {
        0.0
    } else {
        value / scale
    }
}

/// All roots (with multiplicity) of `sum_k coeffs[k] z^k`.
///
/// Fails when some root's relative residual stays above `tol`.
pub fn poly_roots(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let top = coeffs
        .iter()
        .rposition(|c| *c != zero)
        .ok_or_else(|| Error::InvalidInput("zero polynomial".into()))?;
    if top == 0 {
        return Err(Error::InvalidInput("constant polynomial has no roots".into()));
    }
    let low = coeffs.iter().position(|c| *c != zero).unwrap_or(0);
    let mut roots = vec![zero; low];
    let a = &coeffs[low..=top];
    let n = a.len() - 1;
    if n == 0 {
        return Ok(roots);
    }
    if n == 1 {
        roots.push(-a[0] / a[1]);
        return Ok(roots);
    }

    // starting circle at the geometric-mean modulus
    let radius = (a[0].norm() / a[n].norm()).powf(1.0 / n as f64);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();
    let mut done = vec![false; n];
    let mut iterations = 0;
    while iterations < MAX_ITERATIONS && done.iter().any(|d| !d) {
        iterations += 1;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let ratio = newton_ratio(a, z[i]);
            let repulsion: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                done[i] = true;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            }
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..POLISH_STEPS {
            let step = newton_ratio(a, *zi);
            if step.re.is_finite() && step.im.is_finite() {
                *zi -= step;
            }
        }
    }
    let worst = z.iter().map(|&zi| relative_residual(a, zi)).fold(0.0, f64::max);
    if !(worst <= tol) {
        return Err(Error::RootsNotConverged {
            iterations,
            max_residual: worst,
        });
    }
    roots.extend(z);
    Ok(roots)
}

/// Orders roots by modulus, then phase.
pub fn sort_roots(roots: &mut [Complex64]) {
    roots.sort_by(|a, b| a.norm().total_cmp(&b.norm()).then(a.arg().total_cmp(&b.arg())));
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn plus_minus_one() {
        let mut r = poly_roots(&[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1e-14).unwrap();
        sort_roots(&mut r);
        assert!((r[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((r[1] - c(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn factored_quadratic() {
        let mut r = poly_roots(&[c(1.0, 0.0), c(-2.5, 0.0), c(1.0, 0.0)], 1e-14).unwrap();
        sort_roots(&mut r);
        assert!((r[0] - c(0.5, 0.0)).norm() < 1e-13);
        assert!((r[1] - c(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn zero_roots_and_trailing_zeros() {
        // z^2 (z - 3), padded with a zero leading coefficient
        let r = poly_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(-3.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)], 1e-14).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert!(poly_roots(&[c(2.0, 0.0)], 1e-14).is_err());
    }

    #[test]
    fn random_degree_forty() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let a: Vec<Complex64> = (0..=40).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let r = poly_roots(&a, 1e-8).unwrap();
        assert_eq!(r.len(), 40);
        let norm = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for z in r {
            let p: Complex64 = a.iter().rev().fold(c(0.0, 0.0), |acc, x| acc * z + x);
            let scale = norm * z.norm().max(1.0).powi(40);
            assert!(p.norm() / scale < 1e-8);
        }
    }

    #[test]
    fn double_roots_on_the_circle() {
        // (z - i)^2 (z + 0.5)^2
        let mut p = vec![c(1.0, 0.0)];
        for r in [c(0.0, 1.0), c(0.0, 1.0), c(-0.5, 0.0), c(-0.5, 0.0)] {
            let mut next = vec![c(0.0, 0.0); p.len() + 1];
            for (k, &v) in p.iter().enumerate() {
                next[k + 1] += v;
                next[k] -= v * r;
            }
            p = next;
        }
        let r = poly_roots(&p, 1e-12).unwrap();
        assert_eq!(r.iter().filter(|z| (**z - c(0.0, 1.0)).norm() < 1e-6).count(), 2);
    }
}
