//! Pinned verification tolerances.
//!
//! Every end-to-end check in the test suite and the CLI verifier compares a
//! computed residual against one of these constants, so the promises the
//! toolkit makes are collected in one place. Each bound is set by the
//! numerics that produce the quantity, not by wishful thinking: closed-form
//! evaluation leaves only rounding noise, series integration leaves the
//! integrator's tail tolerance amplified through classically forbidden
//! regions, and finite-difference probes leave their stencil truncation.

/// Max |(W')²/2m + V − E + (ħ²/4m)⟨W;x⟩| for bases evaluated by closed-form
/// region propagation (free particle, piecewise-constant potentials), where
/// the only error source is f64 rounding in the quadratic form.
pub const RESIDUAL_CLOSED_FORM: f64 = 1e-9;

/// Same residual for series-integrated bases (oscillator). The local
/// Wronskian drift crossing turning points dominates; the quartic growth of
/// the momentum denominator keeps the quotient far below this bound.
pub const RESIDUAL_INTEGRATED: f64 = 1e-7;

/// Max absolute value of the three substitution brackets (two linear
/// ODE residuals and the normalization bracket) after rescaling.
pub const SUBSTITUTION_BRACKETS: f64 = 1e-10;

/// Max |microstate_wave − φ|: the reconstruction is algebraically exact,
/// so only rounding through the angle extraction remains.
pub const MICROSTATE_IDENTITY: f64 = 1e-10;

/// Interface jumps of W, W', W'' and of the logarithmic derivative of the
/// synthesized running wave at the barrier faces.
pub const INTERFACE_JUMP: f64 = 1e-10;

/// Max |ψ''/ψ + (2m/ħ²)(E − V)| · normalization for the synthesized wave,
/// probed by a five-point second-difference confined to one region.
pub const SCHRODINGER_RESIDUAL: f64 = 1e-8;

/// Relative peak-to-peak variation of the probability current along the
/// full line (the current is constant exactly).
pub const CURRENT_VARIATION: f64 = 1e-8;

/// Pointwise error of component resolutions (interior cosh/sinh split,
/// exterior incident/reflected split) against the wave they sum to.
pub const COMPONENT_RESOLUTION: f64 = 1e-10;

/// |R|² + |T|² − 1 for the barrier scattering coefficients.
pub const UNITARITY_GAP: f64 = 1e-10;

/// Round-trip error of the plane-wave ⇄ running-pair change of basis.
pub const ROUND_TRIP: f64 = 1e-10;

/// |J/h − (n_nodes + 1)| for bound states, and the spread of J/h across
/// microstates of one state; limited by the action quadrature tolerance
/// and by how hard the integrand tails are cut off.
pub const ACTION_QUANTIZATION: f64 = 1e-4;

/// |t_numeric − t_closed| for free trajectories over a few wavelengths;
/// dominated by the energy-derivative stencil truncation.
pub const JACOBI_VS_CLOSED: f64 = 1e-6;

/// |t − x√(m/2E)| for the symmetric microstate, where both routes are
/// closed-form and agree to rounding.
pub const CLASSICAL_FLIGHT: f64 = 1e-12;

/// Half-width of the band around 1.0 the ratio of successive dt/dx
/// oscillation amplitudes must stay in while ħ halves: the amplitude is
/// exactly ħ-independent, so only sampling noise moves the ratio.
pub const INDETERMINACY_RATIO_BAND: f64 = 0.01;

/// |numeric average of Q − closed-form classical average| / |E| at
/// ħ = 1e−3 over the fixed averaging window.
pub const CLASSICAL_AVERAGE_MATCH: f64 = 1e-4;

/// Max discrete divergence of u∇v − v∇u for separable waves sharing all
/// axis wavenumbers on the reference lattice (21³ at spacing 0.05).
pub const DIVERGENCE_MAX: f64 = 1e-6;

/// Half-width of the band around 4.0 for the divergence decay ratio under
/// one spacing halving (second-order central differences).
pub const DIVERGENCE_DECAY_BAND: f64 = 0.8;
