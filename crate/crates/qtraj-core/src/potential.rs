//! The one-dimensional potentials the toolkit works with.
//!
//! Everything downstream (solution bases, reduced actions, trajectories)
//! only ever sees this enum, so adding a potential means extending the
//! matches here and the basis construction.

use crate::error::{Error, Result};

/// Supported stationary potentials, all parameterized in natural units
/// (the caller supplies hbar and the mass separately wherever they enter).
#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// V(x) = 0 everywhere.
    Free,
    /// Rectangular barrier: V = `height` for |x| < `half_width`, 0 outside.
    Barrier { height: f64, half_width: f64 },
    /// Infinite square well: V = 0 for |x| < `half_width`, hard walls at
    /// x = +-`half_width`. Evaluation at or beyond a wall is a domain error.
    Well { half_width: f64 },
    /// Harmonic oscillator: V(x) = m omega^2 x^2 / 2.
    Oscillator { omega: f64 },
}

impl Potential {
    /// Rectangular barrier with validated positive height and half-width.
    pub fn barrier(height: f64, half_width: f64) -> Result<Self> {
        if !(height > 0.0) || !height.is_finite() {
            return Err(Error::InvalidParameter(format!("barrier height must be positive, got {height}")));
        }
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidParameter(format!("barrier half-width must be positive, got {half_width}")));
        }
        Ok(Potential::Barrier { height, half_width })
    }

    /// Infinite square well with validated positive half-width.
    pub fn well(half_width: f64) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return Err(Error::InvalidParameter(format!("well half-width must be positive, got {half_width}")));
        }
        Ok(Potential::Well { half_width })
    }

    /// Harmonic oscillator with validated positive frequency.
    pub fn oscillator(omega: f64) -> Result<Self> {
        if !(omega > 0.0) || !omega.is_finite() {
            return Err(Error::InvalidParameter(format!("oscillator frequency must be positive, got {omega}")));
        }
        Ok(Potential::Oscillator { omega })
    }

    /// V(x). The mass enters only the oscillator but is threaded everywhere
    /// so all kinds share one signature.
    pub fn evaluate(&self, x: f64, mass: f64) -> Result<f64> {
        match *self {
            Potential::Free => Ok(0.0),
            Potential::Barrier { height, half_width } => {
                Ok(if x.abs() < half_width { height } else { 0.0 })
            }
            Potential::Well { half_width } => {
                if x.abs() < half_width {
                    Ok(0.0)
                } else {
                    Err(Error::OutsideDomain { x, lo: -half_width, hi: half_width })
                }
            }
            Potential::Oscillator { omega } => Ok(0.5 * mass * omega * omega * x * x),
        }
    }

    /// dV/dx at x, taking the inner-side limit at barrier edges (where the
    /// classical derivative is not defined, piecewise pieces are constant,
    /// so the one-sided value is 0 anyway).
    pub fn derivative(&self, x: f64, mass: f64) -> Result<f64> {
        match *self {
            Potential::Free | Potential::Barrier { .. } => Ok(0.0),
            Potential::Well { half_width } => {
                if x.abs() <= half_width {
                    Ok(0.0)
                } else {
                    Err(Error::OutsideDomain { x, lo: -half_width, hi: half_width })
                }
            }
            Potential::Oscillator { omega } => Ok(mass * omega * omega * x),
        }
    }

    /// Positions where V is discontinuous, in increasing order.
    pub fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Potential::Free | Potential::Oscillator { .. } => vec![],
            Potential::Barrier { half_width, .. } | Potential::Well { half_width } => {
                vec![-half_width, half_width]
            }
        }
    }

    /// The open interval on which solutions exist. Only the hard-walled well
    /// restricts it.
    pub fn domain(&self) -> (f64, f64) {
        match *self {
            Potential::Well { half_width } => (-half_width, half_width),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// True if the spectrum is purely discrete (bound states exist and are
    /// what the eigenstate constructors below produce).
    pub fn has_bound_states(&self) -> bool {
        matches!(self, Potential::Well { .. } | Potential::Oscillator { .. })
    }
}
