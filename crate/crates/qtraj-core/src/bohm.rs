//! Comparison quantities against the quantum-potential picture: Bohm's Q,
//! its microstate-dependent classical-limit average, the generalized
//! two-coefficient ansatz transform, and the three-dimensional
//! divergenceless-field identity.
//!
//! Q is fixed as `+(hbar^2/4m) <W;x>`, which by the Hamilton-Jacobi
//! equation equals `E - V - (W')^2/2m`; both routes are returned so every
//! sample doubles as an equation check. The classical-limit average of Q
//! over free motion is
//!
//! ```text
//! <Q> = E (1 - ((a+b)/2) / sqrt(ab - c^2/4))  <=  0,
//! ```
//!
//! zero exactly for a = b, c = 0: any other microstate keeps a finite
//! negative Q average no matter how small hbar becomes.

use num_complex::Complex64;

use crate::basis::SolutionBasis;
use crate::error::{Error, Result};
use crate::numeric::composite_simpson;
use crate::potential::Potential;
use crate::qshje::{momentum_derivatives, Microstate};

/// Bohm's quantum potential at one point, by both routes.
#[derive(Debug, Clone, Copy)]
pub struct QuantumPotentialSample {
    pub x: f64,
    /// `(hbar^2 / 4m) <W;x>`.
    pub q: f64,
    /// `E - V(x) - (W')^2 / 2m`; equals `q` up to the equation residual.
    pub q_cross: f64,
}

/// Bohm's quantum potential from the Schwarzian derivative, with the
/// rearranged-equation value as a built-in cross-check.
pub fn quantum_potential(
    basis: &SolutionBasis,
    micro: &Microstate,
    x: f64,
) -> Result<QuantumPotentialSample> {
    basis.assert_scaled_for(micro)?;
    let s = basis.eval(x, 3)?;
    let (w1, w2, w3) = momentum_derivatives(basis, micro, &s);
    let m = basis.mass();
    let h2 = basis.hbar() * basis.hbar();
    let r = w2 / w1;
    let schwarzian = w3 / w1 - 1.5 * r * r;
    Ok(QuantumPotentialSample {
        x,
        q: h2 / (4.0 * m) * schwarzian,
        q_cross: basis.energy() - s.v - w1 * w1 / (2.0 * m),
    })
}

/// Classical-limit average of Q for free motion:
/// `E (1 - ((a+b)/2)/sqrt(ab - c^2/4))`. Never positive; zero only for the
/// symmetric microstate.
pub fn classical_q_average(micro: &Microstate, e: f64) -> Result<f64> {
    if !(e > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "classical average needs E > 0, got {e}"
        )));
    }
    Ok(e * (1.0 - 0.5 * (micro.a() + micro.b()) / micro.discriminant().sqrt()))
}

/// Fixed averaging window for [`numeric_q_average`]. A whole number of
/// oscillation periods averages to the closed formula *exactly* at any
/// hbar, so a fixed absolute window is used instead: the partial-period
/// remainder then supplies an error that genuinely shrinks with hbar.
const AVERAGE_WINDOW: f64 = 40.0;

/// Average Q over [0, 40] for free motion at finite hbar, through the full
/// basis-and-Schwarzian machinery (64 Simpson samples per oscillation
/// period). Converges to [`classical_q_average`] as hbar decreases.
pub fn numeric_q_average(micro: &Microstate, e: f64, hbar: f64, mass: f64) -> Result<f64> {
    if !(e > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "numeric average needs E > 0, got {e}"
        )));
    }
    let basis =
        SolutionBasis::build(&Potential::Free, e, hbar, mass, 0.0)?.rescale_for_microstate(micro);
    let wavelength = std::f64::consts::PI * hbar / (2.0 * mass * e).sqrt();
    let n = ((AVERAGE_WINDOW / wavelength).ceil() as usize) * 64;
    let mut f = |x: f64| Ok(quantum_potential(&basis, micro, x)?.q);
    Ok(composite_simpson(&mut f, 0.0, AVERAGE_WINDOW, n)? / AVERAGE_WINDOW)
}

/// Rewrite the reduced action through the two-coefficient ansatz:
/// `tan(W~/hbar) = Re[(A-B)/(A+B)] tan(W/hbar)`, branch-matched so W~ is
/// continuous and monotone alongside W.
///
/// Requires |A| != |B| (the equal-magnitude case belongs to the bound-state
/// cosine form) and a real ratio; the transformed action solves the same
/// stationary Hamilton-Jacobi equation as W.
pub fn ansatz_transform(a: Complex64, b: Complex64, w: f64, hbar: f64) -> Result<f64> {
    let (mag_a, mag_b) = (a.norm(), b.norm());
    if (mag_a - mag_b).abs() <= 1e-12 * mag_a.max(mag_b) {
        return Err(Error::DegenerateAnsatz { mag_a, mag_b });
    }
    let ratio = (a - b) / (a + b);
    if ratio.im.abs() > 1e-12 * ratio.norm() {
        return Err(Error::InvalidParameter(format!(
            "ansatz ratio (A-B)/(A+B) = {ratio} must be real"
        )));
    }
    let r = ratio.re;
    let u = w / hbar;
    let n = ((u + std::f64::consts::FRAC_PI_2) / std::f64::consts::PI).floor();
    let centered = u - n * std::f64::consts::PI;
    Ok(hbar * (r.signum() * n * std::f64::consts::PI + (r * centered.tan()).atan()))
}

/// Which trigonometric factor a separable-wave axis carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Harmonic {
    Sin,
    Cos,
}

/// A separable stationary free wave in three dimensions: a product of
/// sin/cos factors, one per axis.
#[derive(Debug, Clone, Copy)]
pub struct SeparableWave {
    axes: [(f64, Harmonic); 3],
}

impl SeparableWave {
    pub fn new(axes: [(f64, Harmonic); 3]) -> Result<Self> {
        for (k, _) in axes {
            if !(k > 0.0) || !k.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "axis wavenumbers must be positive and finite, got {k}"
                )));
            }
        }
        Ok(SeparableWave { axes })
    }

    /// Sum of squared wavenumbers, `2mE/hbar^2` in natural units.
    pub fn energy_scale(&self) -> f64 {
        self.axes.iter().map(|(k, _)| k * k).sum()
    }

    fn factor(&self, i: usize, xi: f64) -> (f64, f64) {
        let (k, h) = self.axes[i];
        let (s, c) = (k * xi).sin_cos();
        match h {
            Harmonic::Sin => (s, k * c),
            Harmonic::Cos => (c, -k * s),
        }
    }

    pub fn value(&self, p: [f64; 3]) -> f64 {
        (0..3).map(|i| self.factor(i, p[i]).0).product()
    }

    pub fn gradient(&self, p: [f64; 3]) -> [f64; 3] {
        let f: Vec<(f64, f64)> = (0..3).map(|i| self.factor(i, p[i])).collect();
        [
            f[0].1 * f[1].0 * f[2].0,
            f[0].0 * f[1].1 * f[2].0,
            f[0].0 * f[1].0 * f[2].1,
        ]
    }
}

/// Outcome of the divergence check: the worst discrete divergence of
/// `u grad v - v grad u` over the lattice, and the field magnitude it
/// should be compared against.
#[derive(Debug, Clone, Copy)]
pub struct DivergenceSummary {
    pub max_divergence: f64,
    pub field_scale: f64,
}

/// Check that `u grad v - v grad u` is divergence-free for two separable
/// waves of one energy, by central differences on an `n^3` lattice of the
/// given spacing around `center`. The field itself is analytic; only the
/// outer divergence is discretized, so the result shrinks as spacing^2
/// (and is exactly zero when u and v share all axis wavenumbers).
pub fn divergence_check(
    u: &SeparableWave,
    v: &SeparableWave,
    n_per_axis: usize,
    spacing: f64,
    center: [f64; 3],
) -> Result<DivergenceSummary> {
    let ku2 = u.energy_scale();
    let kv2 = v.energy_scale();
    if (ku2 - kv2).abs() > 1e-9 * ku2.max(kv2) {
        return Err(Error::EnergyMismatch { ku2, kv2 });
    }
    if n_per_axis < 2 || !(spacing > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need at least a 2^3 lattice with positive spacing, got n = {n_per_axis}, h = {spacing}"
        )));
    }
    let field = |p: [f64; 3]| -> [f64; 3] {
        let (uv, vv) = (u.value(p), v.value(p));
        let (gu, gv) = (u.gradient(p), v.gradient(p));
        [
            uv * gv[0] - vv * gu[0],
            uv * gv[1] - vv * gu[1],
            uv * gv[2] - vv * gu[2],
        ]
    };
    let h = spacing;
    let half = 0.5 * (n_per_axis as f64 - 1.0);
    let mut max_divergence = 0.0_f64;
    let mut field_scale = 0.0_f64;
    for ix in 0..n_per_axis {
        for iy in 0..n_per_axis {
            for iz in 0..n_per_axis {
                let p = [
                    center[0] + (ix as f64 - half) * h,
                    center[1] + (iy as f64 - half) * h,
                    center[2] + (iz as f64 - half) * h,
                ];
                let mut div = 0.0;
                for axis in 0..3 {
                    let mut hi = p;
                    let mut lo = p;
                    hi[axis] += h;
                    lo[axis] -= h;
                    div += (field(hi)[axis] - field(lo)[axis]) / (2.0 * h);
                }
                max_divergence = max_divergence.max(div.abs());
                let uv = u.value(p);
                let gv = v.gradient(p);
                let mag = (uv * uv * (gv[0] * gv[0] + gv[1] * gv[1] + gv[2] * gv[2])).sqrt();
                field_scale = field_scale.max(mag);
            }
        }
    }
    Ok(DivergenceSummary { max_divergence, field_scale })
}
