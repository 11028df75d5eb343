//! The three approximation routes for e^{-beta (lambda + 1)} at one tolerance.

use fourier_qsp::approx::{approximate, ApproxOptions, Method, TargetFunction};

fn main() -> fourier_qsp::Result<()> {
    let beta = 4.0;
    let eps = 1e-3;
    let f = TargetFunction::exponential(beta)?;
    let opts = ApproxOptions::default();
    println!("f = exp(-{beta} (lambda + 1)), eps = {eps}");
    for method in [Method::TaylorFourier, Method::LinearExtension, Method::AnalyticExtension] {
        match approximate(&f, method, eps, &opts) {
            Ok(r) => println!(
                "{:>20}: q = {:4}, alpha = {:.4}, t = {:.4}, measured error = {:.2e}",
                method.as_str(),
                r.q,
                r.alpha,
                r.t,
                r.eps_measured
            ),
            Err(e) => println!("{:>20}: {e}", method.as_str()),
        }
    }
    Ok(())
}
