use serde::{Deserialize, Serialize};

use super::circuit::{assemble_circuit, extract_block};
use super::{
    eigendecompose, exact_function_of_h, matrix_deserde, matrix_serde, remap_interval, spectral_norm, CMatrix,
    HermitianOperator, SpectralFunction, NORM_SLACK,
};
use crate::approx::{approximate, ApproxOptions, Method, TargetFunction};
use crate::complement::complement_pair;
use crate::error::{Error, Result};
use crate::fourier::DEFAULT_GRID_POINTS;
use crate::pulses::{synthesize_pulses, verify_pulses, PulseSequence};

/// Tolerance on the pulse round trip and on the block against the series.
pub const SERIES_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    pub approx: ApproxOptions,
    /// Spectral interval mapped onto the faithful window of the series.
    pub remap: Option<(f64, f64)>,
    /// Headroom requested from the complement stage.
    pub margin: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        Self {
            approx: ApproxOptions::default(),
            remap: None,
            margin: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockEncodingResult {
    pub method: Method,
    pub eps: f64,
    pub q: usize,
    /// Sub-normalization of the encoded block, complement scaling included.
    pub alpha: f64,
    pub t: f64,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    /// Spectral distance between the block and `g(H t + Lambda)`.
    pub err_vs_series: f64,
    /// Spectral distance between the block and `alpha f` on the (remapped) spectrum.
    pub err_vs_target: f64,
    pub pulses: PulseSequence,
    #[serde(serialize_with = "matrix_serde", deserialize_with = "matrix_deserde")]
    pub block: CMatrix,
}

impl BlockEncodingResult {
    pub fn passed(&self) -> bool {
        self.err_vs_series <= SERIES_TOLERANCE && self.err_vs_target <= self.eps
    }
}

/// Approximation, complement, pulse synthesis, circuit assembly and block
/// extraction for `f[H]`.
///
/// Without a remap the spectrum must lie in `[-1, 1]` and the block targets
/// `alpha f(lambda)`. With `remap = (lo, hi)` the oracle time and phase send
/// `[lo, hi]` onto the faithful window `[-t, t]` of the series, and the block
/// targets `alpha f` of the rescaled eigenvalue `(lambda - center) / half_width`.
pub fn run_pipeline(
    h: &HermitianOperator,
    f: &TargetFunction,
    eps: f64,
    method: Method,
    opts: &PipelineOptions,
) -> Result<BlockEncodingResult> {
    let eig = eigendecompose(h);
    let (lo, hi) = (eig.lambdas[0], eig.lambdas[eig.dim() - 1]);
    if opts.remap.is_none() && eig.norm() > 1.0 + NORM_SLACK {
        return Err(Error::NormTooLarge(eig.norm()));
    }
    if let Some((a, b)) = opts.remap {
        let slack = 1e-12 * (b - a).abs().max(1.0);
        if lo < a - slack || hi > b + slack {
            return Err(Error::InvalidInput(format!(
                "spectrum [{lo}, {hi}] is not inside the remap interval [{a}, {b}]"
            )));
        }
    }

    let approx = approximate(f, method, eps, &opts.approx).map_err(|e| e.in_stage("approximation"))?;
    let (t, shift) = match opts.remap {
        Some((a, b)) => remap_interval(a, b, approx.t)?,
        None => (approx.t, 0.0),
    };
    let pair = complement_pair(&approx.series, opts.margin).map_err(|e| e.in_stage("complement"))?;
    let pulses = synthesize_pulses(&pair.g, &pair.h).map_err(|e| e.in_stage("pulse synthesis"))?;
    let round_trip = verify_pulses(&pulses, &pair.g, DEFAULT_GRID_POINTS).max_abs_error;
    if round_trip > SERIES_TOLERANCE {
        return Err(Error::VerificationFailed {
            measured: round_trip,
            tolerance: SERIES_TOLERANCE,
        }
        .in_stage("pulse synthesis"));
    }

    let u = assemble_circuit(&eig, t, shift, &pulses).map_err(|e| e.in_stage("circuit"))?;
    let block = extract_block(&u);
    let series_block = exact_function_of_h(&eig, SpectralFunction::Series { series: &pair.g, t, shift });
    let alpha = approx.alpha * pair.scale;
    let rescaled = eig.mapped(|l| (l * t + shift) / approx.t);
    let target_block = exact_function_of_h(&rescaled, SpectralFunction::Target { f, alpha });
    Ok(BlockEncodingResult {
        method,
        eps,
        q: pulses.q(),
        alpha,
        t,
        lambda: shift,
        err_vs_series: spectral_norm(&(&block - series_block)),
        err_vs_target: spectral_norm(&(&block - target_block)),
        pulses,
        block,
    })
}
