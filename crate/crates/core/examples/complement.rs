//! Complementary series h with |g|^2 + |h|^2 = 1 on the circle.

use fourier_qsp::approx::{analytic_extension_series, ApproxOptions, TargetFunction};
use fourier_qsp::complement::{build_g, complement_pair, laurent_roots, unitarity_error};

fn main() -> fourier_qsp::Result<()> {
    let f = TargetFunction::exponential(2.0)?;
    let g = analytic_extension_series(&f, 1e-3, &ApproxOptions::default())?.series;
    let roots = laurent_roots(&build_g(&g))?;
    let closest = roots.iter().map(|z| (z.norm() - 1.0).abs()).fold(f64::INFINITY, f64::min);
    println!("q = {}, {} roots of 1 - |g|^2, closest at {closest:.2e} from the circle", g.q(), roots.len());
    for margin in [0.0, 1e-6, 1e-2] {
        let pair = complement_pair(&g, margin)?;
        println!(
            "margin {margin:e}: scale = {:.8}, max ||g|^2 + |h|^2 - 1| = {:.2e}",
            pair.scale,
            unitarity_error(&pair.g, &pair.h, 1001)
        );
    }
    Ok(())
}
