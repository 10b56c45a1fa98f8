//! Trajectories in the [x, t] domain.
//!
//! Time as a function of position comes from Jacobi's theorem,
//! `t - tau = dW(x; E)/dE`, differentiating the reduced action along the
//! anchored-basis family (the basis exists and varies smoothly for every
//! energy, whether or not E is an eigenvalue). The mechanical velocity is
//! the reciprocal of `dW'/dE`, which is *not* `W'/m`: the conjugate momentum
//! and the mechanical momentum differ in this representation.
//!
//! For free motion the closed-form equation of motion is
//!
//! ```text
//! t - t0 = sqrt(ab - c^2/4) sqrt(2m/E) x
//!          / [a + b + (a - b) cos(2kx) + c sin(2kx)],   k = sqrt(2mE)/hbar
//! ```
//!
//! whose denominator oscillation never dies out as hbar -> 0 unless
//! a = b and c = 0 -- the residual indeterminacy probed by
//! [`classical_limit_sweep`].

use crate::error::{Error, Result};
use crate::numeric::root_increasing;
use crate::potential::Potential;
use crate::qshje::{conjugate_momentum, reduced_action, Microstate};
use crate::basis::SolutionBasis;

/// One point of a trajectory: where, when, and how fast.
#[derive(Debug, Clone, Copy)]
pub struct TrajectorySample {
    pub x: f64,
    pub t: f64,
    /// Conjugate momentum W' at x.
    pub w1: f64,
    /// Mechanical velocity dx/dt at x.
    pub v: f64,
}

/// Result of sweeping hbar toward zero and watching the oscillation of
/// dt/dx: the normalized peak-to-peak amplitude per entry of
/// `hbar_values`, and whether it converged to zero.
#[derive(Debug, Clone)]
pub struct IndeterminacyReport {
    pub hbar_values: Vec<f64>,
    pub envelope_amplitude: Vec<f64>,
    pub converged: bool,
}

/// Reduced action of the anchored family at one (x, E). The anchor is the
/// coordinate origin, giving a family smooth in E wherever E != V(0).
fn family_action(
    potential: &Potential,
    e: f64,
    hbar: f64,
    mass: f64,
    micro: &Microstate,
    x: f64,
) -> Result<f64> {
    let basis = SolutionBasis::build(potential, e, hbar, mass, 0.0)?.rescale_for_microstate(micro);
    reduced_action(&basis, micro, x)
}

fn family_momentum(
    potential: &Potential,
    e: f64,
    hbar: f64,
    mass: f64,
    micro: &Microstate,
    x: f64,
) -> Result<f64> {
    let basis = SolutionBasis::build(potential, e, hbar, mass, 0.0)?.rescale_for_microstate(micro);
    conjugate_momentum(&basis, micro, x)
}

/// Five-point derivative in energy with its own convergence check: the
/// stencil at step dE and at dE/2 must agree to one part in 1e6, otherwise
/// the differentiation is flagged instead of silently trusted. Returns the
/// finer value.
fn energy_derivative<F>(mut f: F, e: f64, x: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let de = (1e-6 * e.abs()).max(1e-8);
    let m2 = f(e - 2.0 * de)?;
    let m1 = f(e - de)?;
    let p1 = f(e + de)?;
    let p2 = f(e + 2.0 * de)?;
    let mh = f(e - 0.5 * de)?;
    let ph = f(e + 0.5 * de)?;
    let coarse = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * de);
    let fine = (m1 - 8.0 * mh + 8.0 * ph - p1) / (6.0 * de);
    let error = (coarse - fine).abs();
    let tolerance = 1e-6 * fine.abs().max(1e-3);
    if error > tolerance {
        return Err(Error::DifferentiationFailure { x, error, tolerance });
    }
    Ok(fine)
}

/// Time at which the trajectory selected by `micro` passes through `x`:
/// `tau + dW(x; E)/dE` (Jacobi's theorem).
pub fn time_of_position(
    potential: &Potential,
    e: f64,
    hbar: f64,
    mass: f64,
    micro: &Microstate,
    x: f64,
    tau: f64,
) -> Result<f64> {
    let dwde = energy_derivative(
        |ee| family_action(potential, ee, hbar, mass, micro, x),
        e,
        x,
    )?;
    Ok(tau + dwde)
}

/// Invert `time_of_position` on a bracket where it is strictly monotone.
///
/// Monotonicity is checked by sampling before any root finding; a detected
/// turning sample is reported rather than stepped over.
#[allow(clippy::too_many_arguments)]
pub fn position_of_time(
    potential: &Potential,
    e: f64,
    hbar: f64,
    mass: f64,
    micro: &Microstate,
    t: f64,
    bracket: (f64, f64),
    tau: f64,
) -> Result<f64> {
    let (lo, hi) = bracket;
    if !(hi > lo) {
        return Err(Error::InvalidParameter(format!(
            "position bracket must satisfy x_lo < x_hi, got ({lo}, {hi})"
        )));
    }
    let time_at = |x: f64| time_of_position(potential, e, hbar, mass, micro, x, tau);
    let n = 16;
    let mut prev = time_at(lo)?;
    let t_lo = prev;
    let mut t_hi = prev;
    for i in 1..=n {
        let x = lo + (hi - lo) * i as f64 / n as f64;
        let ti = time_at(x)?;
        if ti <= prev {
            return Err(Error::NonMonotonicTime { x });
        }
        prev = ti;
        t_hi = ti;
    }
    if t < t_lo || t > t_hi {
        return Err(Error::TimeOutsideBracket { t, lo, hi, t_lo, t_hi });
    }
    root_increasing(|x| Ok(time_at(x)? - t), lo, hi, 1e-9 * t.abs().max(1.0))
}

/// Mechanical velocity `dx/dt = [dW'(x; E)/dE]^{-1}`.
///
/// Not the conjugate momentum over the mass: `W' != m dx/dt` except in the
/// classical reduction.
pub fn mechanical_velocity(
    potential: &Potential,
    e: f64,
    hbar: f64,
    mass: f64,
    micro: &Microstate,
    x: f64,
) -> Result<f64> {
    let dwde = energy_derivative(
        |ee| family_momentum(potential, ee, hbar, mass, micro, x),
        e,
        x,
    )?;
    let scale = family_momentum(potential, e, hbar, mass, micro, x)? / e.abs().max(f64::MIN_POSITIVE);
    if dwde.abs() < 1e-10 * scale.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::TurningPoint { x });
    }
    Ok(1.0 / dwde)
}

/// One fully populated trajectory point.
pub fn trajectory_sample(
    potential: &Potential,
    e: f64,
    hbar: f64,
    mass: f64,
    micro: &Microstate,
    x: f64,
    tau: f64,
) -> Result<TrajectorySample> {
    let t = time_of_position(potential, e, hbar, mass, micro, x, tau)?;
    let w1 = family_momentum(potential, e, hbar, mass, micro, x)?;
    let v = mechanical_velocity(potential, e, hbar, mass, micro, x)?;
    Ok(TrajectorySample { x, t, w1, v })
}

/// Denominator of the free-particle equation of motion and its x-derivative.
fn free_denominator(micro: &Microstate, k: f64, x: f64) -> (f64, f64) {
    let (a, b, c) = (micro.a(), micro.b(), micro.c());
    let (s, cs) = (2.0 * k * x).sin_cos();
    let den = a + b + (a - b) * cs + c * s;
    let dden = 2.0 * k * (c * cs - (a - b) * s);
    (den, dden)
}

/// Closed-form free-particle time of flight
/// `t - t0 = sqrt(ab - c^2/4) sqrt(2m/E) x / [a + b + (a-b) cos 2kx + c sin 2kx]`.
///
/// For a = b, c = 0 the denominator is constant and this reduces to the
/// classical `x sqrt(m/(2E))`.
pub fn free_particle_time(micro: &Microstate, x: f64, e: f64, hbar: f64, mass: f64) -> Result<f64> {
    if !(e > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "free motion needs E > 0, got {e}"
        )));
    }
    let k = (2.0 * mass * e).sqrt() / hbar;
    let (den, _) = free_denominator(micro, k, x);
    if !(den > 0.0) {
        // Unreachable for a valid microstate: a + b exceeds the oscillation
        // amplitude sqrt((a-b)^2 + c^2) exactly when ab - c^2/4 > 0.
        return Err(Error::Numerical {
            context: format!("free-motion denominator {den} not positive"),
            x,
        });
    }
    Ok(micro.discriminant().sqrt() * (2.0 * mass / e).sqrt() * x / den)
}

/// Slope dt/dx of the closed-form free-particle motion.
fn free_time_slope(micro: &Microstate, x: f64, e: f64, hbar: f64, mass: f64) -> f64 {
    let k = (2.0 * mass * e).sqrt() / hbar;
    let (den, dden) = free_denominator(micro, k, x);
    let n = micro.discriminant().sqrt() * (2.0 * mass / e).sqrt();
    n * (1.0 / den - x * dden / (den * den))
}

/// Sweep hbar over `hbar_sequence` (strictly decreasing, positive) and
/// record the normalized peak-to-peak oscillation of dt/dx over the first
/// full cosine period inside `x_window`.
///
/// The amplitude never decays unless a = b and c = 0; shrinking hbar only
/// compresses the wavelength. `converged` reports whether the final
/// amplitude dropped below 1e-10.
pub fn classical_limit_sweep(
    micro: &Microstate,
    e: f64,
    mass: f64,
    hbar_sequence: &[f64],
    x_window: (f64, f64),
) -> Result<IndeterminacyReport> {
    if hbar_sequence.is_empty() {
        return Err(Error::InvalidParameter("hbar sweep needs at least one value".into()));
    }
    for pair in hbar_sequence.windows(2) {
        if !(pair[1] < pair[0]) {
            return Err(Error::InvalidParameter(
                "hbar sweep must be strictly decreasing".into(),
            ));
        }
    }
    if !(hbar_sequence[hbar_sequence.len() - 1] > 0.0) {
        return Err(Error::InvalidParameter("hbar sweep must stay positive".into()));
    }
    if !(e > 0.0) {
        return Err(Error::InvalidParameter(format!("sweep needs E > 0, got {e}")));
    }
    let (w_lo, w_hi) = x_window;
    let mut amplitudes = Vec::with_capacity(hbar_sequence.len());
    for &hbar in hbar_sequence {
        let k = (2.0 * mass * e).sqrt() / hbar;
        let period = std::f64::consts::PI / k;
        if w_lo + period > w_hi {
            return Err(Error::InvalidParameter(format!(
                "window ({w_lo}, {w_hi}) shorter than one oscillation period {period} at hbar = {hbar}"
            )));
        }
        let n = 400;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut sum = 0.0;
        for i in 0..=n {
            let x = w_lo + period * i as f64 / n as f64;
            let s = free_time_slope(micro, x, e, hbar, mass);
            min = min.min(s);
            max = max.max(s);
            sum += s;
        }
        let mean = sum / (n + 1) as f64;
        amplitudes.push((max - min) / mean.abs().max(f64::MIN_POSITIVE));
    }
    let converged = *amplitudes.last().unwrap() < 1e-10;
    Ok(IndeterminacyReport {
        hbar_values: hbar_sequence.to_vec(),
        envelope_amplitude: amplitudes,
        converged,
    })
}
