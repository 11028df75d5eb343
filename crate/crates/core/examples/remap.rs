//! An operator with spectrum in [0, 3], mapped onto the faithful window of
//! the linear-extension series.

use fourier_qsp::approx::{linear::DEFAULT_X0, Method, TargetFunction};
use fourier_qsp::qsim::{remap_interval, run_pipeline, HermitianOperator, PipelineOptions};

fn main() -> fourier_qsp::Result<()> {
    let (t, shift) = remap_interval(0.0, 3.0, DEFAULT_X0)?;
    println!("[0, 3] -> [{:.6}, {:.6}] with t = {t:.6}, Lambda = {shift:.6}", shift, 3.0 * t + shift);

    let h = HermitianOperator::from_diagonal(&[0.0, 0.5, 1.2, 2.0, 3.0])?;
    let f = TargetFunction::exponential(1.0)?;
    let opts = PipelineOptions {
        remap: Some((0.0, 3.0)),
        ..PipelineOptions::default()
    };
    let r = run_pipeline(&h, &f, 1e-2, Method::LinearExtension, &opts)?;
    println!("q = {}, alpha = {:.4}", r.q, r.alpha);
    for (k, lambda) in [0.0, 0.5, 1.2, 2.0, 3.0].iter().enumerate() {
        let mapped = 2.0 * lambda / 3.0 - 1.0;
        println!(
            "lambda = {lambda}: block {:.5}, alpha f({mapped:+.3}) = {:.5}",
            r.block[(k, k)].re,
            r.alpha * f.eval(mapped).re
        );
    }
    println!("||block - alpha f|| = {:.2e}", r.err_vs_target);
    Ok(())
}
