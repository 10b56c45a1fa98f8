//! Error types shared by every module of the toolkit.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes surfaced by the toolkit.
///
/// Variants are deliberately specific: callers (and the CLI) map them to
/// distinct diagnostics, and tests assert on the exact variant rather than
/// on message strings.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A constructor or operation was handed a parameter outside its domain
    /// (non-positive width, energy out of range, bad grid, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Microstate coefficients must satisfy a > 0, b > 0 and ab - c^2/4 > 0;
    /// anything else does not define a positive quadratic form.
    #[error("degenerate microstate (a={a}, b={b}, c={c}): ab - c^2/4 = {discriminant} must be positive, with a > 0 and b > 0")]
    DegenerateMicrostate { a: f64, b: f64, c: f64, discriminant: f64 },

    /// Evaluation outside the interval on which the solution pair exists
    /// (hard walls) or outside the integrated table of a numeric basis.
    #[error("x = {x} lies outside the basis domain [{lo}, {hi}]")]
    OutsideDomain { x: f64, lo: f64, hi: f64 },

    /// Derivatives are available analytically through order 3 only.
    #[error("derivative order {order} not available (max 3)")]
    UnsupportedOrder { order: u32 },

    /// A momentum/action query was made on a basis that has not been
    /// Wronskian-normalized for the microstate in use.
    #[error("basis is not rescaled for this microstate (expected discriminant {expected}, basis carries {actual:?})")]
    NormalizationMismatch { expected: f64, actual: Option<f64> },

    /// The two-step Richardson cross-check of an energy derivative failed,
    /// i.e. the quantity being differentiated is not smooth enough in E.
    #[error("energy differentiation failed at x = {x}: stencil disagreement {error:.3e} exceeds {tolerance:.3e}")]
    DifferentiationFailure { x: f64, error: f64, tolerance: f64 },

    /// dW'/dE vanished: the mechanical velocity diverges at a turning point.
    #[error("turning point at x = {x}: dW'/dE vanishes, mechanical velocity undefined")]
    TurningPoint { x: f64 },

    /// position_of_time needs t(x) strictly increasing on the bracket.
    #[error("t(x) is not strictly increasing near x = {x}; cannot invert the trajectory")]
    NonMonotonicTime { x: f64 },

    /// The requested time does not fall inside the sampled bracket.
    #[error("target time {t} is outside t([{lo}, {hi}]) = [{t_lo}, {t_hi}]")]
    TimeOutsideBracket { t: f64, lo: f64, hi: f64, t_lo: f64, t_hi: f64 },

    /// The action integral edge check: W' has not decayed at +-half_width.
    #[error("half-width {half_width} too small: |W'| = {momentum:.3e} at the edge has not decayed below {threshold:.3e}")]
    DomainTooSmall { half_width: f64, momentum: f64, threshold: f64 },

    /// A closed-form eigenstate construction was requested for a potential
    /// that does not support bound states.
    #[error("no bound states: {0}")]
    NoBoundStates(String),

    /// The two 3-D waves handed to the divergence check carry different
    /// energies; the identity requires a common one.
    #[error("wavevector mismatch: |k_u|^2 = {ku2} but |k_v|^2 = {kv2}; the identity needs a common energy")]
    EnergyMismatch { ku2: f64, kv2: f64 },

    /// |A| = |B| makes the two-wave reduced action degenerate.
    #[error("degenerate amplitude pair |A| = {mag_a}, |B| = {mag_b}: the transformed action requires |A| != |B|")]
    DegenerateAnsatz { mag_a: f64, mag_b: f64 },

    /// Catch-all for numeric breakdowns (step underflow, lost bracketing,
    /// non-finite intermediate). Carries the x where it happened.
    #[error("numerical failure at x = {x}: {context}")]
    Numerical { context: String, x: f64 },
}
