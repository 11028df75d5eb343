//! Single-qubit pulse sequences whose `<0|.|0>` entry is a prescribed
//! Fourier series, and the peel-off synthesis that finds them.
//!
//! Gate `k` is `R(x, w_k, xi_k) = e^{i(zeta+eta)Z/2} e^{-i phi Y}
//! e^{i(zeta-eta)Z/2} e^{i w_k x Z} e^{-i kappa Y}` and the sequence is the
//! product `R_q ... R_1 R_0`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::complement::unitarity_error;
use crate::error::{Error, Result};
use crate::fourier::{linspace, FourierSeries, GridReport, DEFAULT_GRID_POINTS};

/// Frequency of gate 1; later gates alternate in sign. Gate 1 then pairs
/// with the forward oracle and gate 2 with its inverse.
pub const FIRST_OMEGA: f64 = 0.5;

/// Largest per-step leakage tolerated by the peel before it gives up.
const PEEL_TOLERANCE: f64 = 1e-6;
/// Below this the leading band counts as absent.
const DEGENERATE_BAND: f64 = 1e-13;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Xi {
    pub zeta: f64,
    pub eta: f64,
    pub phi: f64,
    pub kappa: f64,
}

impl Xi {
    pub fn new(zeta: f64, eta: f64, phi: f64, kappa: f64) -> Self {
        Self { zeta, eta, phi, kappa }
    }

    fn is_finite(&self) -> bool {
        [self.zeta, self.eta, self.phi, self.kappa].iter().all(|v| v.is_finite())
    }
}

/// 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unitary2(pub [[Complex64; 2]; 2]);

impl Unitary2 {
    pub fn identity() -> Self {
        Self([[ONE, ZERO], [ZERO, ONE]])
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Self([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// `max(|U^dag U - 1|_max, |det U - 1|)`.
    pub fn su2_defect(&self) -> f64 {
        let p = self.adjoint() * *self;
        let id = Self::identity();
        let mut worst = (self.det() - ONE).norm();
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((p.0[i][j] - id.0[i][j]).norm());
            }
        }
        worst
    }

    pub fn rz(angle: f64) -> Self {
        // e^{i angle Z}
        Self([[Complex64::cis(angle), ZERO], [ZERO, Complex64::cis(-angle)]])
    }

    pub fn ry(angle: f64) -> Self {
        // e^{-i angle Y}
        let (s, c) = angle.sin_cos();
        Self([[c.into(), (-s).into()], [s.into(), c.into()]])
    }
}

impl Mul for Unitary2 {
    type Output = Unitary2;

    fn mul(self, rhs: Self) -> Self {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Unitary2(out)
    }
}

/// The x-independent part `e^{i(zeta+eta)Z/2} e^{-i phi Y} e^{i(zeta-eta)Z/2}`.
pub fn zyz_rotation(xi: &Xi) -> Unitary2 {
    Unitary2::rz((xi.zeta + xi.eta) / 2.0) * Unitary2::ry(xi.phi) * Unitary2::rz((xi.zeta - xi.eta) / 2.0)
}

/// Basic gate `R(x, omega, xi)` as an explicit product of rotations.
pub fn basic_gate(x: f64, omega: f64, xi: &Xi) -> Unitary2 {
    zyz_rotation(xi) * Unitary2::rz(omega * x) * Unitary2::ry(xi.kappa)
}

/// Coefficients of `e^{+-i omega x}` in the top row of the basic gate:
/// `R_00 = a+ e^{i omega x} + a- e^{-i omega x}`,
/// `R_01 = b+ e^{i omega x} + b- e^{-i omega x}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateCoefficients {
    pub a_plus: Complex64,
    pub a_minus: Complex64,
    pub b_plus: Complex64,
    pub b_minus: Complex64,
}

pub fn gate_coefficients(xi: &Xi) -> GateCoefficients {
    let (sp, cp) = xi.phi.sin_cos();
    let (sk, ck) = xi.kappa.sin_cos();
    let ez = Complex64::cis(xi.zeta);
    let ee = Complex64::cis(xi.eta);
    GateCoefficients {
        a_plus: ez * (cp * ck),
        a_minus: ee * (-sp * sk),
        b_plus: ez * (-cp * sk),
        b_minus: ee * (-sp * ck),
    }
}

/// Frequencies `omega_k` and angles `xi_k` for `k = 0 ..= q`.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    omegas: Vec<f64>,
    xis: Vec<Xi>,
}

impl PulseSequence {
    /// Checks `omega_0 = 0`, `|omega_k| = 1/2` with strictly alternating sign,
    /// and finite angles.
    pub fn new(omegas: Vec<f64>, xis: Vec<Xi>) -> Result<Self> {
        let s = Self::new_unchecked(omegas, xis)?;
        for k in 1..s.omegas.len() {
            if s.omegas[k].abs() != 0.5 {
                return Err(Error::InvalidInput(format!("omega_{k} = {} is not +-1/2", s.omegas[k])));
            }
            if k > 1 && s.omegas[k] != -s.omegas[k - 1] {
                return Err(Error::InvalidInput(format!("omega_{k} does not alternate")));
            }
        }
        Ok(s)
    }

    /// Only checks lengths, `omega_0 = 0` and finiteness; used to explore
    /// non-alternating sequences.
    pub fn new_unchecked(omegas: Vec<f64>, xis: Vec<Xi>) -> Result<Self> {
        if omegas.is_empty() || omegas.len() != xis.len() {
            return Err(Error::InvalidInput(format!(
                "need matching non-empty omega and xi lists, got {} and {}",
                omegas.len(),
                xis.len()
            )));
        }
        if omegas[0] != 0.0 {
            return Err(Error::InvalidInput("omega_0 must be 0".into()));
        }
        if omegas.iter().any(|w| !w.is_finite()) || xis.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite pulse parameter".into()));
        }
        Ok(Self { omegas, xis })
    }

    /// Number of `x`-dependent gates.
    pub fn q(&self) -> usize {
        self.omegas.len() - 1
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn xis(&self) -> &[Xi] {
        &self.xis
    }

    /// Copy with one angle set replaced.
    pub fn with_xi(&self, k: usize, xi: Xi) -> Self {
        let mut out = self.clone();
        out.xis[k] = xi;
        out
    }
}

#[derive(Serialize, Deserialize)]
struct PulseFile {
    q: usize,
    omegas: Vec<f64>,
    xis: Vec<Xi>,
}

impl Serialize for PulseSequence {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        PulseFile {
            q: self.q(),
            omegas: self.omegas.clone(),
            xis: self.xis.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PulseSequence {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = PulseFile::deserialize(deserializer)?;
        if file.omegas.len() != file.q + 1 {
            return Err(serde::de::Error::custom(format!(
                "q = {} needs {} omegas, found {}",
                file.q,
                file.q + 1,
                file.omegas.len()
            )));
        }
        PulseSequence::new(file.omegas, file.xis).map_err(serde::de::Error::custom)
    }
}

/// Ordered product `R_q ... R_1 R_0` at `x`.
pub fn reconstruct(x: f64, pulses: &PulseSequence) -> Unitary2 {
    pulses
        .omegas
        .iter()
        .zip(&pulses.xis)
        .fold(Unitary2::identity(), |acc, (&w, xi)| basic_gate(x, w, xi) * acc)
}

/// `max |reconstruct(x)_00 - g(x)|` over `points` samples of `[-pi, pi]`.
pub fn verify_pulses(pulses: &PulseSequence, g: &FourierSeries, points: usize) -> GridReport {
    entry_error(pulses, g, 0, points)
}

/// As [`verify_pulses`] for the `<0|.|1>` entry against `h`.
pub fn verify_complement(pulses: &PulseSequence, h: &FourierSeries, points: usize) -> GridReport {
    entry_error(pulses, h, 1, points)
}

fn entry_error(pulses: &PulseSequence, s: &FourierSeries, column: usize, points: usize) -> GridReport {
    let points = points.max(2);
    let mut report = GridReport {
        grid_points: points,
        interval: (-PI, PI),
        max_abs_error: 0.0,
        argmax_x: -PI,
    };
    for x in linspace(-PI, PI, points) {
        let e = (reconstruct(x, pulses).0[0][column] - s.evaluate(x)).norm();
        if e > report.max_abs_error {
            report.max_abs_error = e;
            report.argmax_x = x;
        }
    }
    report
}

/// `omega_k` for `k >= 1` under the convention that gate 1 has `first`.
pub fn omega_at(k: usize, first: f64) -> f64 {
    if k == 0 {
        0.0
    } else if k % 2 == 1 {
        first
    } else {
        -first
    }
}

/// Working pair `(g, h)` in half-integer frequency units: index `n` holds
/// the coefficient of `e^{i n x / 2}`.
struct Bands {
    g: Vec<Complex64>,
    h: Vec<Complex64>,
    offset: i64,
}

impl Bands {
    fn get(v: &[Complex64], offset: i64, n: i64) -> Complex64 {
        let i = n + offset;
        if i < 0 || i as usize >= v.len() {
            ZERO
        } else {
            v[i as usize]
        }
    }

    fn g(&self, n: i64) -> Complex64 {
        Self::get(&self.g, self.offset, n)
    }

    fn h(&self, n: i64) -> Complex64 {
        Self::get(&self.h, self.offset, n)
    }

    /// Column of the 2x2 coefficient of `e^{i n x / 2}` in
    /// `[[g, h], [-conj h, conj g]]` with the larger norm.
    fn range_vector(&self, n: i64) -> ([Complex64; 2], f64) {
        let c0 = [self.g(n), -self.h(-n).conj()];
        let c1 = [self.h(n), self.g(-n).conj()];
        let n0 = (c0[0].norm_sqr() + c0[1].norm_sqr()).sqrt();
        let n1 = (c1[0].norm_sqr() + c1[1].norm_sqr()).sqrt();
        if n0 >= n1 {
            (c0, n0)
        } else {
            (c1, n1)
        }
    }
}

/// Angles placing unit vector `v` in the column of the z-y-z rotation that
/// multiplies the raised band: column 0 for positive `omega`, column 1 for
/// negative. `eta = zeta` and `kappa = pi/4`.
fn angles_for(v: [Complex64; 2], sign: f64) -> Xi {
    if sign > 0.0 {
        let phi = v[1].norm().atan2(v[0].norm());
        let zeta = (v[0].arg() - v[1].arg()) / 2.0;
        Xi::new(zeta, zeta, phi, FRAC_PI_4)
    } else {
        let phi = v[0].norm().atan2(v[1].norm());
        let zeta = ((-v[0]).arg() - v[1].arg()) / 2.0;
        Xi::new(zeta, zeta, phi, FRAC_PI_4)
    }
}

/// Pulses realizing `[[g, h], [-conj h, conj g]]` with the default frequency
/// convention.
pub fn synthesize_pulses(g: &FourierSeries, h: &FourierSeries) -> Result<PulseSequence> {
    synthesize_with_convention(g, h, FIRST_OMEGA).map(|(p, _)| p)
}

/// Peel-off synthesis with gate 1 at frequency `first` (`+1/2` or `-1/2`).
/// Also returns the per-step leakage into the eliminated bands, before they
/// are zeroed.
pub fn synthesize_with_convention(g: &FourierSeries, h: &FourierSeries, first: f64) -> Result<(PulseSequence, Vec<f64>)> {
    if first.abs() != 0.5 {
        return Err(Error::InvalidInput(format!("first frequency must be +-1/2, got {first}")));
    }
    if g.half_order() != h.half_order() {
        return Err(Error::InvalidInput(format!(
            "g and h have half orders {} and {}",
            g.half_order(),
            h.half_order()
        )));
    }
    let defect = unitarity_error(g, h, DEFAULT_GRID_POINTS);
    if defect > 1e-8 {
        return Err(Error::InvalidInput(format!("|g|^2 + |h|^2 deviates from 1 by {defect:e}")));
    }
    let q = g.q() as i64;
    let offset = q + 1;
    let width = (2 * offset + 1) as usize;
    let mut bands = Bands {
        g: vec![ZERO; width],
        h: vec![ZERO; width],
        offset,
    };
    for m in -(q / 2)..=(q / 2) {
        bands.g[(2 * m + offset) as usize] = g.coeff(m);
        bands.h[(2 * m + offset) as usize] = h.coeff(m);
    }

    let mut xis = vec![Xi::default(); q as usize + 1];
    let mut leakage = Vec::with_capacity(q as usize);
    for k in (1..=q).rev() {
        let sign = omega_at(k as usize, first).signum();
        let (top, top_norm) = bands.range_vector(k);
        let (bottom, bottom_norm) = bands.range_vector(-k);
        let xi = if top_norm.max(bottom_norm) < DEGENERATE_BAND {
            Xi::default()
        } else if top_norm >= bottom_norm {
            angles_for([top[0] / top_norm, top[1] / top_norm], sign)
        } else {
            // the raised column must be orthogonal to the bottom band's range
            let w = [bottom[0] / bottom_norm, bottom[1] / bottom_norm];
            angles_for([-w[1].conj(), w[0].conj()], sign)
        };
        xis[k as usize] = xi;
        leakage.push(peel(&mut bands, k, sign, &xi));
        if leakage.last().copied().unwrap_or(0.0) > PEEL_TOLERANCE {
            return Err(Error::PeelResidual {
                step: k as usize,
                residual: *leakage.last().unwrap(),
            });
        }
    }

    let (g0, h0) = (bands.g(0), bands.h(0));
    // R_0 = zyz(xi_0) has top row (e^{i zeta} cos phi, -e^{i eta} sin phi)
    xis[0] = Xi::new(g0.arg(), (-h0).arg(), h0.norm().atan2(g0.norm()), 0.0);
    let omegas = (0..=q as usize).map(|k| omega_at(k, first)).collect();
    Ok((PulseSequence::new(omegas, xis)?, leakage))
}

/// Replaces the working pair by the top row of `R^dag U` for the gate of
/// frequency `sign/2` with angles `xi`; returns the leakage into `+-(k+1)`.
fn peel(bands: &mut Bands, k: i64, sign: f64, xi: &Xi) -> f64 {
    let a = zyz_rotation(xi);
    let b = Unitary2::ry(xi.kappa);
    let p0 = Unitary2([[ONE, ZERO], [ZERO, ZERO]]);
    let p1 = Unitary2([[ZERO, ZERO], [ZERO, ONE]]);
    // R = A P0 B e^{i sign x/2} + A P1 B e^{-i sign x/2}
    let up = (a * p0 * b).adjoint();
    let down = (a * p1 * b).adjoint();
    let s = sign as i64;
    // R^dag = up e^{-i sign x/2} + down e^{+i sign x/2}
    let terms = [(up, -s), (down, s)];

    let width = bands.g.len();
    let mut g_new = vec![ZERO; width];
    let mut h_new = vec![ZERO; width];
    for n in -(k + 1)..=(k + 1) {
        let (mut gv, mut hv) = (ZERO, ZERO);
        for (m, shift) in &terms {
            let src = n - shift;
            let (g, h) = (bands.g(src), bands.h(src));
            let (gc, hc) = (bands.g(-src).conj(), bands.h(-src).conj());
            gv += m.0[0][0] * g - m.0[0][1] * hc;
            hv += m.0[0][0] * h + m.0[0][1] * gc;
        }
        g_new[(n + bands.offset) as usize] = gv;
        h_new[(n + bands.offset) as usize] = hv;
    }
    let mut leak: f64 = 0.0;
    for n in [-(k + 1), k + 1] {
        let i = (n + bands.offset) as usize;
        leak = leak.max(g_new[i].norm()).max(h_new[i].norm());
        g_new[i] = ZERO;
        h_new[i] = ZERO;
    }
    let total: f64 = g_new.iter().chain(&h_new).map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if total > 0.0 {
        for c in g_new.iter_mut().chain(h_new.iter_mut()) {
            *c /= total;
        }
    }
    bands.g = g_new;
    bands.h = h_new;
    leak
}
