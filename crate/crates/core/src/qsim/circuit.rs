use num_complex::Complex64;

use super::{CMatrix, EigenDecomposition};
use crate::error::{Error, Result};
use crate::pulses::{basic_gate, zyz_rotation, PulseSequence, Unitary2};

/// `e^{-i shift} e^{-i t H}` from the decomposition.
fn evolution(eig: &EigenDecomposition, t: f64, shift: f64) -> CMatrix {
    eig.apply(|l| Complex64::cis(-(l * t + shift)))
}

/// `O = 1 (x) |0><0| + e^{-i shift} e^{-i t H} (x) |1><1|`.
pub fn oracle_unitary(eig: &EigenDecomposition, t: f64, shift: f64) -> CMatrix {
    let d = eig.dim();
    let e = evolution(eig, t, shift);
    let mut o = CMatrix::zeros(2 * d, 2 * d);
    for i in 0..d {
        o[(2 * i, 2 * i)] = Complex64::new(1.0, 0.0);
        for j in 0..d {
            o[(2 * i + 1, 2 * j + 1)] = e[(i, j)];
        }
    }
    o
}

/// `u <- (1 (x) a) u`.
fn apply_ancilla(u: &mut CMatrix, a: &Unitary2) {
    let m = &a.0;
    for s in 0..u.nrows() / 2 {
        for col in 0..u.ncols() {
            let (r0, r1) = (u[(2 * s, col)], u[(2 * s + 1, col)]);
            u[(2 * s, col)] = m[0][0] * r0 + m[0][1] * r1;
            u[(2 * s + 1, col)] = m[1][0] * r0 + m[1][1] * r1;
        }
    }
}

/// `u <- O u` with the ancilla-one rows multiplied by `e`.
fn apply_controlled(u: &mut CMatrix, e: &CMatrix) {
    let d = e.nrows();
    let rows = CMatrix::from_fn(d, u.ncols(), |s, col| u[(2 * s + 1, col)]);
    let moved = e * rows;
    for s in 0..d {
        for col in 0..u.ncols() {
            u[(2 * s + 1, col)] = moved[(s, col)];
        }
    }
}

/// Full circuit unitary `V_q ... V_1 W_in` on system and ancilla.
///
/// `W_in` is the `omega_0 = 0` gate on the ancilla. Gate `k` is
/// `(1 (x) zyz(xi_k)) O^{+-1} (1 (x) e^{-i kappa_k Y})`, using `O` when
/// `omega_k > 0` and `O^dag` when `omega_k < 0`. Per eigenvalue this is
/// `e^{-+i x/2} R(x, omega_k, xi_k)` with `x = lambda t + shift`, so an
/// alternating sequence of even length carries no residual phase.
pub fn assemble_circuit(eig: &EigenDecomposition, t: f64, shift: f64, pulses: &PulseSequence) -> Result<CMatrix> {
    if pulses.q() % 2 != 0 {
        return Err(Error::InvalidInput(format!("circuit needs an even q, got {}", pulses.q())));
    }
    let d = eig.dim();
    let forward = evolution(eig, t, shift);
    let backward = forward.adjoint();
    let mut u = CMatrix::identity(2 * d, 2 * d);
    apply_ancilla(&mut u, &basic_gate(0.0, 0.0, &pulses.xis()[0]));
    for (omega, xi) in pulses.omegas().iter().zip(pulses.xis()).skip(1) {
        apply_ancilla(&mut u, &Unitary2::ry(xi.kappa));
        apply_controlled(&mut u, if *omega > 0.0 { &forward } else { &backward });
        apply_ancilla(&mut u, &zyz_rotation(xi));
    }
    Ok(u)
}

/// `<0|U|0>` on the ancilla.
pub fn extract_block(u: &CMatrix) -> CMatrix {
    let d = u.nrows() / 2;
    CMatrix::from_fn(d, d, |i, j| u[(2 * i, 2 * j)])
}
