//! e^{-beta (H + 1)} for a 4-site Ising chain, block-encoded in a simulated
//! circuit and compared against exact diagonalization.

use fourier_qsp::approx::{Method, TargetFunction};
use fourier_qsp::qsim::{eigendecompose, run_pipeline, success_probability, tfim_chain, CVector, PipelineOptions};

fn main() -> fourier_qsp::Result<()> {
    let h = tfim_chain(4, 1.0)?;
    let f = TargetFunction::exponential(2.0)?;
    let r = run_pipeline(&h, &f, 1e-3, Method::AnalyticExtension, &PipelineOptions::default())?;
    println!("q = {}, alpha = {:.6}, t = {}", r.q, r.alpha, r.t);
    println!("||block - g[Ht]||    = {:.2e}", r.err_vs_series);
    println!("||block - alpha f[H]|| = {:.2e}", r.err_vs_target);

    let eig = eigendecompose(&h);
    let ground: CVector = eig.eigenvector(0);
    let p = success_probability(&r.block, &ground)?;
    let ideal = (r.alpha * f.eval(eig.lambdas[0]).norm()).powi(2);
    println!("ground state: lambda = {:.6}, success probability {p:.6} (ideal {ideal:.6})", eig.lambdas[0]);
    Ok(())
}
