//! Built-in Hamiltonians, all rescaled to `max |lambda| = 1`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{eigendecompose, CMatrix, HermitianOperator};
use crate::error::{Error, Result};

/// Largest chain accepted by [`tfim_chain`].
pub const MAX_SITES: usize = 10;

fn normalized(m: CMatrix) -> Result<HermitianOperator> {
    let h = HermitianOperator::new(m)?;
    let norm = eigendecompose(&h).norm();
    if norm == 0.0 {
        return Ok(h);
    }
    HermitianOperator::new(h.matrix() / Complex64::new(norm, 0.0))
}

/// `(A + A^dag) / 2` with uniform complex entries in the unit square,
/// normalized.
pub fn random_hermitian<R: Rng>(d: usize, rng: &mut R) -> Result<HermitianOperator> {
    if d == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    let a = CMatrix::from_fn(d, d, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    normalized((&a + a.adjoint()) * Complex64::new(0.5, 0.0))
}

/// Open transverse-field Ising chain `-sum Z_i Z_{i+1} - field sum X_i` on
/// `n` sites, normalized. Site 0 is the most significant bit.
pub fn tfim_chain(n: usize, field: f64) -> Result<HermitianOperator> {
    if n == 0 || n > MAX_SITES {
        return Err(Error::InvalidInput(format!("chain length must lie in 1..={MAX_SITES}, got {n}")));
    }
    let d = 1usize << n;
    let bit = |state: usize, site: usize| (state >> (n - 1 - site)) & 1;
    let mut m = CMatrix::zeros(d, d);
    for s in 0..d {
        let zz: f64 = (0..n - 1)
            .map(|i| if bit(s, i) == bit(s, i + 1) { 1.0 } else { -1.0 })
            .sum();
        m[(s, s)] = Complex64::new(-zz, 0.0);
        for i in 0..n {
            m[(s ^ (1 << (n - 1 - i)), s)] += Complex64::new(-field, 0.0);
        }
    }
    normalized(m)
}

/// Parses `diag:l1,l2,...` (taken as given), `random_hermitian:d` (seeded)
/// or `tfim:n` (unit field).
pub fn parse_hamiltonian(text: &str, seed: u64) -> Result<HermitianOperator> {
    let (kind, arg) = text
        .split_once(':')
        .ok_or_else(|| Error::InvalidInput(format!("expected kind:argument, got '{text}'")))?;
    let bad = |what: &str| Error::InvalidInput(format!("bad {what} in '{text}'"));
    match kind {
        "diag" => {
            let lambdas = arg
                .split(',')
                .map(|v| v.trim().parse::<f64>().map_err(|_| bad("eigenvalue")))
                .collect::<Result<Vec<f64>>>()?;
            HermitianOperator::from_diagonal(&lambdas)
        }
        "random_hermitian" => {
            let d = arg.parse::<usize>().map_err(|_| bad("dimension"))?;
            random_hermitian(d, &mut ChaCha8Rng::seed_from_u64(seed))
        }
        "tfim" => tfim_chain(arg.parse::<usize>().map_err(|_| bad("site count"))?, 1.0),
        _ => Err(Error::InvalidInput(format!("unknown Hamiltonian kind '{kind}'"))),
    }
}
