//! Bound states: eigenvalues, bound/unbound solution pairs, the microstate
//! reconstruction of the bound wave, and action-variable quantization.
//!
//! For a bound state the pair is chosen with phi the bound solution and
//! theta the unbound companion (it must diverge at both infinities -- two
//! independent solutions cannot both decay). The quadratic-form machinery
//! then reconstructs phi *identically* for every valid microstate,
//!
//! ```text
//! sqrt(a phi^2 + b theta^2 + c phi theta) / sqrt(a - c^2/(4b))
//!     * cos( angle of (phi sqrt(ab - c^2/4), b theta + c phi/2) )  =  phi
//! ```
//!
//! and the action variable J = 2 int W' dx equals (n_nodes + 1) h for every
//! microstate: quantization carries over to the trajectory picture with the
//! (a, b, c) freedom intact.

use crate::basis::SolutionBasis;
use crate::error::{Error, Result};
use crate::numeric::adaptive_simpson;
use crate::potential::Potential;
use crate::qshje::{conjugate_momentum, Microstate};

/// A bound eigenstate with its solution pair (phi bound, theta unbound).
#[derive(Debug, Clone)]
pub struct BoundState {
    potential: Potential,
    n_nodes: u32,
    energy: f64,
    basis: SolutionBasis,
}

impl BoundState {
    pub fn potential(&self) -> &Potential {
        &self.potential
    }
    pub fn n_nodes(&self) -> u32 {
        self.n_nodes
    }
    pub fn energy(&self) -> f64 {
        self.energy
    }
    /// The solution pair; phi is the bound solution. Not yet normalized for
    /// any microstate -- rescale before feeding the momentum machinery.
    pub fn basis(&self) -> &SolutionBasis {
        &self.basis
    }
}

/// Closed-form eigenvalue of the n_nodes-th bound state.
pub fn eigen_energy(potential: &Potential, n_nodes: u32, hbar: f64, mass: f64) -> Result<f64> {
    let n = n_nodes as f64;
    match potential {
        Potential::Well { half_width } => {
            let width = 2.0 * half_width;
            Ok((n + 1.0) * (n + 1.0) * std::f64::consts::PI.powi(2) * hbar * hbar
                / (2.0 * mass * width * width))
        }
        Potential::Oscillator { omega } => Ok((n + 0.5) * hbar * omega),
        other => Err(Error::NoBoundStates(format!(
            "potential {other:?} has no bound spectrum"
        ))),
    }
}

/// Build the bound state with `n_nodes` nodes: phi bound (closed form),
/// theta the unbound second solution, with a positive Wronskian.
pub fn bound_basis(potential: &Potential, n_nodes: u32, hbar: f64, mass: f64) -> Result<BoundState> {
    let energy = eigen_energy(potential, n_nodes, hbar, mass)?;
    let basis = match potential {
        Potential::Well { half_width } => {
            // Interior wavenumber of the eigenstate.
            let kn = (n_nodes as f64 + 1.0) * std::f64::consts::PI / (2.0 * half_width);
            // Parity alternates with n: phi must vanish at both walls.
            let (phi_ic, theta_ic) = if n_nodes.is_multiple_of(2) {
                ((1.0, 0.0), (0.0, kn)) // phi = cos(kn x), theta = sin(kn x)
            } else {
                ((0.0, kn), (-1.0, 0.0)) // phi = sin(kn x), theta = -cos(kn x)
            };
            SolutionBasis::piecewise_with_ics(potential, energy, hbar, mass, 0.0, phi_ic, theta_ic)?
        }
        Potential::Oscillator { omega } => {
            SolutionBasis::osc_eigen_pair(*omega, n_nodes, hbar, mass)?
        }
        other => {
            return Err(Error::NoBoundStates(format!(
                "potential {other:?} has no bound spectrum"
            )))
        }
    };
    Ok(BoundState { potential: potential.clone(), n_nodes, energy, basis })
}

/// Reconstruct the bound wave from the microstate quadratic form.
///
/// Returns exactly phi (at the normalization fixed by `micro`) for every
/// valid microstate; at a node of phi the angle is exactly +-pi/2 and the
/// cosine supplies the analytic limit 0.
pub fn microstate_wave(bound: &BoundState, micro: &Microstate, x: f64) -> Result<f64> {
    let basis = bound.basis.rescale_for_microstate(micro);
    let s = basis.eval(x, 0)?;
    let (a, b, c) = (micro.a(), micro.b(), micro.c());
    let d = micro.discriminant();
    let form = a * s.phi * s.phi + b * s.theta * s.theta + c * s.phi * s.theta;
    let angle = (b * s.theta + 0.5 * c * s.phi).atan2(s.phi * d.sqrt());
    Ok(form.sqrt() / (a - c * c / (4.0 * b)).sqrt() * angle.cos())
}

/// The action variable `J = contour integral of W'`, collapsed onto the
/// real line as twice `int W' dx` over [-half_width, half_width].
///
/// For decaying states the conjugate momentum must already be negligible
/// (below 1e-8) at +-half_width, otherwise the window is reported as too
/// small. For the hard-walled well the integral runs wall to wall and the
/// passed half-width is clamped to the walls, where W' stays finite.
/// J equals (n_nodes + 1) h independently of the microstate.
pub fn action_variable(bound: &BoundState, micro: &Microstate, half_width: f64) -> Result<f64> {
    if !(half_width > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "integration half-width must be positive, got {half_width}"
        )));
    }
    let basis = bound.basis.rescale_for_microstate(micro);
    let hw = match bound.potential {
        Potential::Well { half_width: wall } => wall,
        _ => {
            let threshold = 1e-8;
            for edge in [-half_width, half_width] {
                let momentum = conjugate_momentum(&basis, micro, edge)?;
                if momentum > threshold {
                    return Err(Error::DomainTooSmall { half_width, momentum, threshold });
                }
            }
            half_width
        }
    };
    let mut integrand = |x: f64| conjugate_momentum(&basis, micro, x);
    let j_half = adaptive_simpson(&mut integrand, -hw, hw, 1e-10, 64)?;
    Ok(2.0 * j_half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::adaptive_simpson;
    use crate::qshje::qshje_residual;

    const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

    #[test]
    fn closed_form_eigenvalues() {
        let well = Potential::well(std::f64::consts::FRAC_PI_2).unwrap();
        assert!((eigen_energy(&well, 0, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        let ho = Potential::oscillator(1.0).unwrap();
        assert!((eigen_energy(&ho, 0, 1.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((eigen_energy(&ho, 3, 1.0, 1.0).unwrap() - 3.5).abs() < 1e-15);
        assert!(eigen_energy(&Potential::Free, 0, 1.0, 1.0).is_err());
    }

    #[test]
    fn oscillator_theta_is_the_reduction_of_order_solution() {
        // n = 0: theta(x) = exp(-x^2/2) * int_0^x exp(s^2) ds, the second
        // solution by reduction of order (Wronskian 1). Check against an
        // independent quadrature of that integral.
        let ho = Potential::oscillator(1.0).unwrap();
        let state = bound_basis(&ho, 0, 1.0, 1.0).unwrap();
        for &x in &[-1.6_f64, -0.4, 0.9, 2.1] {
            let s = state.basis().eval(x, 0).unwrap();
            let mut gauss = |t: f64| Ok((t * t).exp());
            let integral = if x >= 0.0 {
                adaptive_simpson(&mut gauss, 0.0, x, 1e-12, 16).unwrap()
            } else {
                -adaptive_simpson(&mut gauss, x, 0.0, 1e-12, 16).unwrap()
            };
            let expect = (-0.5 * x * x).exp() * integral;
            assert!(
                (s.theta - expect).abs() < 1e-10 * (1.0 + expect.abs()),
                "theta({x}) = {} vs quadrature {expect}",
                s.theta
            );
        }
    }

    #[test]
    fn theta_satisfies_the_equation_and_the_pair_is_unit_wronskian() {
        // Odd state: the finite-difference oracle is independent of the
        // equation-derived samples the basis hands back.
        let ho = Potential::oscillator(1.0).unwrap();
        let state = bound_basis(&ho, 1, 1.0, 1.0).unwrap();
        let h = 1e-3;
        let th = |t: f64| state.basis().eval(t, 0).unwrap().theta;
        for &x in &[-1.1, 0.0, 0.6, 1.9] {
            let d2 = (-th(x - 2.0 * h) + 16.0 * th(x - h) - 30.0 * th(x) + 16.0 * th(x + h)
                - th(x + 2.0 * h))
                / (12.0 * h * h);
            let residual = -0.5 * d2 + (0.5 * x * x - state.energy()) * th(x);
            assert!(residual.abs() < 1e-8, "residual {residual} at {x}");
            let w = state.basis().local_wronskian(x).unwrap();
            assert!((w - 1.0).abs() < 1e-12, "Wronskian {w} at {x}");
        }
    }

    #[test]
    fn well_interior_pair_is_trigonometric() {
        let well = Potential::well(2.0).unwrap();
        let state = bound_basis(&well, 0, 1.0, 1.0).unwrap();
        let kn = std::f64::consts::PI / 4.0;
        for &x in &[-1.9, -0.5, 0.0, 1.2, 2.0] {
            let s = state.basis().eval(x, 0).unwrap();
            assert!((s.phi - (kn * x).cos()).abs() < 1e-13);
            assert!((s.theta - (kn * x).sin()).abs() < 1e-13);
        }
        // phi vanishes at the walls and has no interior node for n = 0.
        let wall = state.basis().eval(2.0, 0).unwrap();
        assert!(wall.phi.abs() < 1e-13);
    }

    #[test]
    fn phi_decays_and_has_the_right_node_count() {
        let ho = Potential::oscillator(1.0).unwrap();
        for n in 0..=3 {
            let state = bound_basis(&ho, n, 1.0, 1.0).unwrap();
            // Node count by sign changes on a dense grid.
            let mut nodes = 0;
            let mut prev = state.basis().eval(-6.0, 0).unwrap().phi;
            let mut x = -6.0;
            while x < 6.0 {
                x += 0.01;
                let p = state.basis().eval(x, 0).unwrap().phi;
                if p * prev < 0.0 {
                    nodes += 1;
                }
                prev = p;
            }
            assert_eq!(nodes, n, "node count for n = {n}");
            // Decay at the window edge, relative to the interior peak.
            let mut peak = 0.0_f64;
            let mut xx = -4.0;
            while xx <= 4.0 {
                peak = peak.max(state.basis().eval(xx, 0).unwrap().phi.abs());
                xx += 0.05;
            }
            let edge = state.basis().eval(7.5, 0).unwrap().phi.abs();
            assert!(edge < 1e-8 * peak, "phi(7.5) = {edge} vs peak {peak} for n = {n}");
        }
    }

    #[test]
    fn unbound_companion_dwarfs_phi_at_the_window_edge() {
        let ho = Potential::oscillator(1.0).unwrap();
        let state = bound_basis(&ho, 0, 1.0, 1.0).unwrap();
        let mut peak = 0.0_f64;
        let mut x = -4.0;
        while x <= 4.0 {
            peak = peak.max(state.basis().eval(x, 0).unwrap().phi.abs());
            x += 0.05;
        }
        for &edge in &[-6.0, 6.0] {
            let th = state.basis().eval(edge, 0).unwrap().theta.abs();
            assert!(th > 1e3 * peak, "theta({edge}) = {th} must dwarf phi peak {peak}");
        }
    }

    #[test]
    fn microstate_wave_reproduces_phi_for_every_microstate() {
        let ho = Potential::oscillator(1.0).unwrap();
        let state = bound_basis(&ho, 0, 1.0, 1.0).unwrap();
        let micro = Microstate::new(1.0, 1.0, 0.0).unwrap();
        let scaled = state.basis().rescale_for_microstate(&micro);
        let w = microstate_wave(&state, &micro, 0.7).unwrap();
        let phi = scaled.eval(0.7, 0).unwrap().phi;
        assert!((w - phi).abs() < 1e-12, "{w} vs {phi}");

        let skew = Microstate::new(2.0, 1.0, 0.5).unwrap();
        let scaled = state.basis().rescale_for_microstate(&skew);
        for i in 0..=100 {
            let x = -4.0 + 8.0 * i as f64 / 100.0;
            let w = microstate_wave(&state, &skew, x).unwrap();
            let phi = scaled.eval(x, 0).unwrap().phi;
            assert!((w - phi).abs() < 1e-10, "identity broke at x = {x}: {w} vs {phi}");
        }
    }

    #[test]
    fn microstate_wave_handles_nodes_and_wells() {
        // n = 2 well state has interior nodes; the identity must hold with
        // signs across them, including exactly at a node of phi.
        let well = Potential::well(2.0).unwrap();
        let state = bound_basis(&well, 2, 1.0, 1.0).unwrap();
        let micro = Microstate::new(1.0, 4.0, -1.0).unwrap();
        let scaled = state.basis().rescale_for_microstate(&micro);
        for i in 0..=100 {
            let x = -1.95 + 3.9 * i as f64 / 100.0;
            let w = microstate_wave(&state, &micro, x).unwrap();
            let phi = scaled.eval(x, 0).unwrap().phi;
            assert!((w - phi).abs() < 1e-10, "identity broke at x = {x}");
        }
        // Exactly at a node: phi = cos(3 pi x / 4) vanishes at x = 2/3...
        let node = 2.0 / 3.0;
        let w = microstate_wave(&state, &micro, node).unwrap();
        assert!(w.abs() < 1e-10, "wave at node = {w}");
    }

    #[test]
    fn action_variable_counts_nodes_plus_one() {
        let h = TWO_PI; // hbar = 1
        let ho = Potential::oscillator(1.0).unwrap();
        let state = bound_basis(&ho, 0, 1.0, 1.0).unwrap();
        let micro = Microstate::new(1.0, 1.0, 0.0).unwrap();
        let j = action_variable(&state, &micro, 8.0).unwrap();
        assert!((j / h - 1.0).abs() < 1e-4, "J/h = {}", j / h);

        let state2 = bound_basis(&ho, 2, 1.0, 1.0).unwrap();
        let skew = Microstate::new(2.0, 1.0, 0.5).unwrap();
        let j2 = action_variable(&state2, &skew, 8.0).unwrap();
        assert!((j2 / h - 3.0).abs() < 1e-4, "J/h = {}", j2 / h);

        let well = Potential::well(2.0).unwrap();
        let wstate = bound_basis(&well, 1, 1.0, 1.0).unwrap();
        let jw = action_variable(&wstate, &micro, 2.0).unwrap();
        assert!((jw / h - 2.0).abs() < 1e-6, "well J/h = {}", jw / h);
    }

    #[test]
    fn too_small_windows_are_reported() {
        let ho = Potential::oscillator(1.0).unwrap();
        let state = bound_basis(&ho, 0, 1.0, 1.0).unwrap();
        let micro = Microstate::new(1.0, 1.0, 0.0).unwrap();
        let r = action_variable(&state, &micro, 3.0);
        assert!(matches!(r, Err(Error::DomainTooSmall { .. })), "got {r:?}");
    }

    #[test]
    fn distinct_microstates_are_distinct_trajectories_of_one_state() {
        let ho = Potential::oscillator(1.0).unwrap();
        let state = bound_basis(&ho, 1, 1.0, 1.0).unwrap();
        let m1 = Microstate::new(1.0, 1.0, 0.0).unwrap();
        let m2 = Microstate::new(2.0, 1.0, 0.0).unwrap();
        let b1 = state.basis().rescale_for_microstate(&m1);
        let b2 = state.basis().rescale_for_microstate(&m2);
        let mut max_diff = 0.0_f64;
        for i in 0..=50 {
            let x = -2.5 + 5.0 * i as f64 / 50.0;
            let w1 = conjugate_momentum(&b1, &m1, x).unwrap();
            let w2 = conjugate_momentum(&b2, &m2, x).unwrap();
            max_diff = max_diff.max((w1 - w2).abs());
            // Both stay exact solutions of the same-energy equation.
            assert!(qshje_residual(&b1, &m1, x).unwrap().abs() < 1e-8);
            assert!(qshje_residual(&b2, &m2, x).unwrap().abs() < 1e-8);
        }
        assert!(max_diff > 1e-3, "momenta must differ somewhere, max {max_diff}");
    }
}
