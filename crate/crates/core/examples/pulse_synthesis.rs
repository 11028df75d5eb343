//! Pulse angles for a random series, and the round trip back to (g, h).

use fourier_qsp::complement::complement_pair;
use fourier_qsp::fourier::FourierSeries;
use fourier_qsp::pulses::{reconstruct, synthesize_pulses, verify_complement, verify_pulses};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> fourier_qsp::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let raw = FourierSeries::new(
        (0..9)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect(),
    )?;
    let g = raw.scale(Complex64::new(0.9 / raw.max_modulus_refined(), 0.0));
    let pair = complement_pair(&g, 1e-6)?;
    let pulses = synthesize_pulses(&pair.g, &pair.h)?;

    println!("q = {}", pulses.q());
    for (k, (omega, xi)) in pulses.omegas().iter().zip(pulses.xis()).enumerate() {
        println!(
            "gate {k}: omega = {omega:+}, zeta = {:+.6}, eta = {:+.6}, phi = {:+.6}, kappa = {:+.6}",
            xi.zeta, xi.eta, xi.phi, xi.kappa
        );
    }
    let u = reconstruct(0.3, &pulses);
    println!("U(0.3)[0][0] = {:.6}, g(0.3) = {:.6}", u.0[0][0], pair.g.evaluate(0.3));
    println!(
        "max error: g {:.2e}, h {:.2e}",
        verify_pulses(&pulses, &pair.g, 1001).max_abs_error,
        verify_complement(&pulses, &pair.h, 1001).max_abs_error
    );
    Ok(())
}
