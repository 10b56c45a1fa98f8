//! Conjugate momentum, reduced action, and the residual identities of the
//! stationary quantum Hamilton-Jacobi equation.
//!
//! Everything here is algebra on top of a rescaled [`SolutionBasis`]: with
//! the pair normalized so its Wronskian squared equals 2m/(hbar^2 (ab - c^2/4)),
//! the reduced action is
//!
//! ```text
//! W(x) = hbar * arctan[ (b theta/phi + c/2) / sqrt(ab - c^2/4) ]   (unwrapped)
//! W'(x) = sqrt(2m) / (a phi^2 + b theta^2 + c phi theta)
//! ```
//!
//! and W satisfies `(W')^2/2m + V - E = -(hbar^2/4m) <W;x>` with `<W;x>`
//! the Schwarzian derivative. Higher derivatives of W are obtained
//! analytically from the basis samples (never by finite differences): with
//! `D = a phi^2 + b theta^2 + c phi theta`,
//!
//! ```text
//! W''  = -sqrt(2m) D'/D^2
//! W''' =  sqrt(2m) (2 D'^2 - D'' D)/D^3
//! ```

use crate::basis::{BasisSample, SolutionBasis};
use crate::error::{Error, Result};
use crate::numeric::angle_change;

/// The triple of coefficients selecting one solution of the stationary
/// Hamilton-Jacobi equation at fixed energy.
///
/// Validity demands `a > 0`, `b > 0` and a positive discriminant
/// `ab - c^2/4`, which together keep the momentum denominator
/// `a phi^2 + b theta^2 + c phi theta` strictly positive for every
/// non-trivial `(phi, theta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Microstate {
    a: f64,
    b: f64,
    c: f64,
}

impl Microstate {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "microstate coefficients must be finite, got ({a}, {b}, {c})"
            )));
        }
        let discriminant = a * b - 0.25 * c * c;
        if !(a > 0.0 && b > 0.0 && discriminant > 0.0) {
            return Err(Error::DegenerateMicrostate { a, b, c, discriminant });
        }
        Ok(Microstate { a, b, c })
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }

    /// `ab - c^2/4`, the quantity fixing the Wronskian normalization.
    pub fn discriminant(&self) -> f64 {
        self.a * self.b - 0.25 * self.c * self.c
    }

    /// The symmetric microstate `a = b = sqrt(2m)/(hbar k)`, `c = 0`, which
    /// on the pair (cos kx, sin kx) gives the plane-wave action W = hbar k x.
    pub fn symmetric(wavenumber: f64, hbar: f64, mass: f64) -> Result<Self> {
        if !(wavenumber > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "symmetric microstate needs a positive wavenumber, got {wavenumber}"
            )));
        }
        let g = (2.0 * mass).sqrt() / (hbar * wavenumber);
        Microstate::new(g, g, 0.0)
    }

    /// Coefficients equivalent to `self` on a basis rotated by angle `gamma`
    /// in the (phi, theta) plane: if `phi~ = phi cos g + theta sin g` and
    /// `theta~ = theta cos g - phi sin g`, then using `self` with the tilded
    /// pair equals using the returned microstate with the original pair.
    /// The discriminant is preserved exactly.
    pub fn rotated(&self, gamma: f64) -> Microstate {
        let (s, c) = gamma.sin_cos();
        let (cc, ss, sc) = (c * c, s * s, s * c);
        Microstate {
            a: self.a * cc + self.b * ss - self.c * sc,
            b: self.a * ss + self.b * cc + self.c * sc,
            c: 2.0 * (self.a - self.b) * sc + self.c * (cc - ss),
        }
    }
}

/// The reduced action and its first three spatial derivatives at one point.
#[derive(Debug, Clone, Copy)]
pub struct ActionRecord {
    pub w: f64,
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
}

/// The momentum denominator `D = a phi^2 + b theta^2 + c phi theta` and its
/// first two derivatives, assembled from a basis sample.
fn denominator(s: &BasisSample, m: &Microstate) -> (f64, f64, f64) {
    let (a, b, c) = (m.a, m.b, m.c);
    let d0 = a * s.phi * s.phi + b * s.theta * s.theta + c * s.phi * s.theta;
    let d1 = 2.0 * a * s.phi * s.dphi
        + 2.0 * b * s.theta * s.dtheta
        + c * (s.dphi * s.theta + s.phi * s.dtheta);
    let d2 = 2.0 * a * (s.dphi * s.dphi + s.phi * s.d2phi)
        + 2.0 * b * (s.dtheta * s.dtheta + s.theta * s.d2theta)
        + c * (s.d2phi * s.theta + 2.0 * s.dphi * s.dtheta + s.phi * s.d2theta);
    (d0, d1, d2)
}

/// The conjugate momentum `W' = sqrt(2m) / (a phi^2 + b theta^2 + c phi theta)`.
///
/// Strictly positive and finite everywhere, including nodes of phi or theta,
/// because the denominator is a positive-definite quadratic form of the pair.
pub fn conjugate_momentum(basis: &SolutionBasis, micro: &Microstate, x: f64) -> Result<f64> {
    basis.assert_scaled_for(micro)?;
    let s = basis.eval(x, 1)?;
    let (d0, _, _) = denominator(&s, micro);
    Ok((2.0 * basis.mass()).sqrt() / d0)
}

/// The reduced action, fixed to `hbar * atan2(c/2, sqrt(ab - c^2/4))` at the
/// basis anchor and continued continuously from there, so that it increases
/// monotonically through every pole of theta/phi.
///
/// The continuation tracks the polar angle of the curve
/// `x -> (phi sqrt(ab - c^2/4), b theta + c phi / 2)`, whose angle equals
/// W/hbar exactly and which never passes through the origin.
pub fn reduced_action(basis: &SolutionBasis, micro: &Microstate, x: f64) -> Result<f64> {
    basis.assert_scaled_for(micro)?;
    let sqd = micro.discriminant().sqrt();
    let (b, c) = (micro.b, micro.c);
    let plane = |s: &BasisSample| (s.phi * sqd, b * s.theta + 0.5 * c * s.phi);
    let anchor = basis.anchor();
    let s0 = basis.eval(anchor, 1)?;
    let (x0p, y0p) = plane(&s0);
    let alpha0 = y0p.atan2(x0p);
    let steps = angle_step_estimate(basis, micro, anchor, x)?;
    let delta = angle_change(
        |xx| {
            let s = basis.eval(xx, 1)?;
            Ok(plane(&s))
        },
        anchor,
        x,
        steps,
    )?;
    Ok(basis.hbar() * (alpha0 + delta))
}

/// Seed step count for the angle tracker: the endpoint angular rates
/// W'/hbar, inflated by the worst-case wobble of the momentum denominator
/// (the ratio of the quadratic form's eigenvalues), aiming at <~1 rad/step.
fn angle_step_estimate(
    basis: &SolutionBasis,
    micro: &Microstate,
    from: f64,
    to: f64,
) -> Result<usize> {
    let rate = |x: f64| -> Result<f64> {
        Ok(conjugate_momentum(basis, micro, x)? / basis.hbar())
    };
    let r = rate(from)?.max(rate(to)?);
    let p = 0.5 * (micro.a + micro.b);
    let wobble = (p + (p * p - micro.discriminant()).max(0.0).sqrt()).powi(2)
        / micro.discriminant();
    let n = ((to - from).abs() * r * wobble).ceil();
    Ok((n as usize).clamp(8, 1_000_000))
}

/// The reduced action together with its first three derivatives.
///
/// W' comes from the momentum formula; W'' and W''' from analytic
/// differentiation of it, with second and third basis derivatives supplied
/// by the differential equation itself.
pub fn action_derivatives(basis: &SolutionBasis, micro: &Microstate, x: f64) -> Result<ActionRecord> {
    let w = reduced_action(basis, micro, x)?;
    let s = basis.eval(x, 3)?;
    let (w1, w2, w3) = momentum_derivatives(basis, micro, &s);
    Ok(ActionRecord { w, w1, w2, w3 })
}

pub(crate) fn momentum_derivatives(
    basis: &SolutionBasis,
    micro: &Microstate,
    s: &BasisSample,
) -> (f64, f64, f64) {
    let sm = (2.0 * basis.mass()).sqrt();
    let (d0, d1, d2) = denominator(s, micro);
    let w1 = sm / d0;
    let w2 = -sm * d1 / (d0 * d0);
    let w3 = sm * (2.0 * d1 * d1 - d2 * d0) / (d0 * d0 * d0);
    (w1, w2, w3)
}

/// The Schwarzian derivative `W'''/W' - (3/2)(W''/W')^2` of the reduced
/// action at `x`.
pub fn schwarzian(basis: &SolutionBasis, micro: &Microstate, x: f64) -> Result<f64> {
    basis.assert_scaled_for(micro)?;
    let s = basis.eval(x, 3)?;
    let (w1, w2, w3) = momentum_derivatives(basis, micro, &s);
    let r = w2 / w1;
    Ok(w3 / w1 - 1.5 * r * r)
}

/// Residual of the stationary quantum Hamilton-Jacobi equation,
/// `(W')^2/2m + V - E + (hbar^2/4m) <W;x>`, which vanishes identically for
/// an exactly normalized pair. Numerically its size equals the local
/// Wronskian drift of the basis divided by the squared denominator, making
/// it the end-to-end integration-quality gauge.
pub fn qshje_residual(basis: &SolutionBasis, micro: &Microstate, x: f64) -> Result<f64> {
    basis.assert_scaled_for(micro)?;
    let s = basis.eval(x, 3)?;
    let (w1, w2, w3) = momentum_derivatives(basis, micro, &s);
    let r = w2 / w1;
    let sch = w3 / w1 - 1.5 * r * r;
    let m = basis.mass();
    let h2 = basis.hbar() * basis.hbar();
    Ok(w1 * w1 / (2.0 * m) + s.v - basis.energy() + h2 / (4.0 * m) * sch)
}

/// The three bracketed terms whose joint vanishing is equivalent to the
/// Hamilton-Jacobi equation holding: the Schroedinger residual of phi, the
/// Schroedinger residual of theta, and the Wronskian-normalization residual
/// `W_pair^2 hbar^2 (ab - c^2/4)/(2m) - 1`.
///
/// Deliberately callable on a basis that has *not* been rescaled for
/// `micro`: the third bracket is precisely the diagnostic that detects a
/// wrong normalization (a pair scaled by `1+e` reports about `(1+e)^4 - 1`).
pub fn substitution_brackets(
    basis: &SolutionBasis,
    micro: &Microstate,
    x: f64,
) -> Result<(f64, f64, f64)> {
    let s = basis.eval(x, 2)?;
    let m = basis.mass();
    let h2 = basis.hbar() * basis.hbar();
    let ev = basis.energy() - s.v;
    let r_phi = -h2 / (2.0 * m) * s.d2phi - ev * s.phi;
    let r_theta = -h2 / (2.0 * m) * s.d2theta - ev * s.theta;
    let wr = s.phi * s.dtheta - s.dphi * s.theta;
    let r_norm = wr * wr * h2 * micro.discriminant() / (2.0 * m) - 1.0;
    Ok((r_phi, r_theta, r_norm))
}
