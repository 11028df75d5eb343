//! Quadrature coefficients of a smooth periodic function and their decay.

use std::f64::consts::PI;

use fourier_qsp::fourier::{coefficients_by_quadrature, sup_error_on_grid};
use num_complex::Complex64;

fn main() -> fourier_qsp::Result<()> {
    // e^{cos x} has coefficients I_m(1), decaying like 1 / (2^m m!)
    let g = |x: f64| Complex64::new(x.cos().exp(), 0.0);
    for half_order in [1, 2, 4, 8] {
        let s = coefficients_by_quadrature(g, half_order, 8 * half_order + 8)?;
        let report = sup_error_on_grid(&s, g, (-PI, PI), 1001);
        println!(
            "n = {half_order:2}: c_0 = {:.12}, |c_n| = {:.3e}, sup error = {:.3e}",
            s.coeff(0).re,
            s.coeff(half_order as i64).norm(),
            report.max_abs_error
        );
    }
    Ok(())
}
