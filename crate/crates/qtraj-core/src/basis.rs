//! Real solution pairs (phi, theta) of the stationary Schroedinger equation.
//!
//! Every quantity in this toolkit is built from one linearly independent
//! pair of real solutions at a fixed energy. The pair produced by
//! [`SolutionBasis::build`] is anchored: phi(x0) = 1, phi'(x0) = 0,
//! theta(x0) = 0, theta'(x0) = W_raw, which makes the pair (and everything
//! derived from it) a smooth function of the energy at fixed x0 -- the
//! property the trajectory module's energy derivatives rely on.
//!
//! W_raw is chosen as the local wavenumber sqrt(2m|E - V(x0)|)/hbar (falling
//! back to 1 when E = V(x0)), so for a free particle the pair is exactly
//! (cos kx, sin kx). Eigenstate pairs with other initial conditions are
//! constructed through the crate-internal helpers at the bottom.
//!
//! Derivatives of order 2 and 3 are never finite differences: they come
//! from the equation itself, psi'' = (2m/hbar^2)(V - E) psi.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::potential::Potential;
use crate::qshje::Microstate;

/// Unscaled point data: (V, (phi, phi'), (theta, theta')).
type RawPointEval = (f64, (f64, f64), (f64, f64));

/// Point sample of the solution pair with derivatives through order 3.
///
/// Values include the common normalization factor applied by
/// [`SolutionBasis::rescale_for_microstate`]. `v` is the potential value
/// used at `x` (the inner-side limit at a wall), recorded so downstream
/// consumers never re-evaluate the potential at boundary points.
#[derive(Debug, Clone, Copy)]
pub struct BasisSample {
    pub x: f64,
    pub v: f64,
    pub phi: f64,
    pub dphi: f64,
    pub d2phi: f64,
    pub d3phi: f64,
    pub theta: f64,
    pub dtheta: f64,
    pub d2theta: f64,
    pub d3theta: f64,
}

/// A pair of real independent solutions at one energy, with an optional
/// common normalization factor fixed by a microstate.
#[derive(Debug, Clone)]
pub struct SolutionBasis {
    potential: Potential,
    energy: f64,
    hbar: f64,
    mass: f64,
    anchor: f64,
    raw_wronskian: f64,
    scale: f64,
    scaled_disc: Option<f64>,
    repr: BasisRepr,
}

#[derive(Debug, Clone)]
enum BasisRepr {
    /// Closed-form propagation through piecewise-constant potentials.
    Piecewise(Arc<PiecewiseBasis>),
    /// Taylor-stepped dense table for both solutions (smooth potentials).
    Taylor(Arc<TaylorTable>),
    /// Oscillator eigenstate: phi in closed form, theta integrated.
    OscEigen(Arc<OscEigenPair>),
}

impl SolutionBasis {
    /// Build the anchored solution pair for `potential` at energy `energy`.
    ///
    /// For a hard-walled well the anchor must lie strictly inside the walls.
    pub fn build(potential: &Potential, energy: f64, hbar: f64, mass: f64, anchor: f64) -> Result<Self> {
        check_phys(energy, hbar, mass)?;
        let (lo, hi) = potential.domain();
        if !(anchor > lo && anchor < hi) {
            return Err(Error::OutsideDomain { x: anchor, lo, hi });
        }
        let g0 = 2.0 * mass * (potential.evaluate(anchor, mass)? - energy) / (hbar * hbar);
        let raw_wronskian = if g0 == 0.0 { 1.0 } else { g0.abs().sqrt() };
        let phi_ic = (1.0, 0.0);
        let theta_ic = (0.0, raw_wronskian);
        let repr = match potential {
            Potential::Free | Potential::Barrier { .. } | Potential::Well { .. } => {
                BasisRepr::Piecewise(Arc::new(PiecewiseBasis::build(
                    potential, energy, hbar, mass, anchor, phi_ic, theta_ic,
                )?))
            }
            Potential::Oscillator { omega } => {
                let span = default_osc_span(*omega, energy, hbar, mass);
                BasisRepr::Taylor(Arc::new(TaylorTable::build(
                    osc_g_poly(*omega, energy, hbar, mass),
                    osc_char_length(*omega, hbar, mass),
                    anchor,
                    phi_ic,
                    theta_ic,
                    anchor - span,
                    anchor + span,
                )?))
            }
        };
        Ok(SolutionBasis {
            potential: potential.clone(),
            energy,
            hbar,
            mass,
            anchor,
            raw_wronskian,
            scale: 1.0,
            scaled_disc: None,
            repr,
        })
    }

    pub fn potential(&self) -> &Potential {
        &self.potential
    }
    pub fn energy(&self) -> f64 {
        self.energy
    }
    pub fn hbar(&self) -> f64 {
        self.hbar
    }
    pub fn mass(&self) -> f64 {
        self.mass
    }
    pub fn anchor(&self) -> f64 {
        self.anchor
    }
    /// Wronskian phi theta' - phi' theta of the unscaled pair (a constant).
    pub fn raw_wronskian(&self) -> f64 {
        self.raw_wronskian
    }
    /// Common factor currently applied to both solutions.
    pub fn scale(&self) -> f64 {
        self.scale
    }
    /// The microstate discriminant ab - c^2/4 this basis is normalized for,
    /// if it has been rescaled.
    pub fn scaled_discriminant(&self) -> Option<f64> {
        self.scaled_disc
    }

    /// Interval on which the pair can be evaluated (finite for hard walls
    /// and for integrated tables; the bounds themselves are valid points).
    pub fn domain(&self) -> (f64, f64) {
        match &self.repr {
            BasisRepr::Piecewise(p) => p.domain,
            BasisRepr::Taylor(t) => (t.lo, t.hi),
            BasisRepr::OscEigen(p) => (p.theta.lo, p.theta.hi),
        }
    }

    /// Return a copy whose pair is multiplied by the common factor giving
    /// the Wronskian demanded by `micro`: W^2 = 2m / (hbar^2 (ab - c^2/4)).
    ///
    /// The factor is recomputed from the raw pair each call, so rescaling
    /// twice with the same microstate changes nothing at all.
    pub fn rescale_for_microstate(&self, micro: &Microstate) -> SolutionBasis {
        let d = micro.discriminant();
        let target = (2.0 * self.mass / (self.hbar * self.hbar * d)).sqrt();
        let scale = (target / self.raw_wronskian).sqrt();
        SolutionBasis {
            scale,
            scaled_disc: Some(d),
            ..self.clone()
        }
    }

    /// Check that this basis has been rescaled for `micro`. Microstates
    /// sharing a discriminant share the normalization, so the discriminant
    /// is the quantity compared.
    pub fn assert_scaled_for(&self, micro: &Microstate) -> Result<()> {
        let d = micro.discriminant();
        match self.scaled_disc {
            Some(sd) if (sd - d).abs() <= 1e-12 * d.abs() => Ok(()),
            other => Err(Error::NormalizationMismatch { expected: d, actual: other }),
        }
    }

    /// Evaluate the pair at `x` with derivatives through `order` (<= 3).
    /// All orders up to 3 are cheap, so the returned sample always carries
    /// them; `order` is validated to keep misuse loud.
    pub fn eval(&self, x: f64, order: u32) -> Result<BasisSample> {
        if order > 3 {
            return Err(Error::UnsupportedOrder { order });
        }
        if !x.is_finite() {
            return Err(Error::InvalidParameter(format!("evaluation point must be finite, got {x}")));
        }
        let (v, phi, theta) = match &self.repr {
            BasisRepr::Piecewise(p) => p.eval(x)?,
            BasisRepr::Taylor(t) => {
                let (phi, theta) = t.eval_pair(x)?;
                (self.potential.evaluate(x, self.mass)?, phi, theta)
            }
            BasisRepr::OscEigen(p) => {
                let phi = p.phi(x);
                let theta = p.theta.eval_first(x)?;
                (self.potential.evaluate(x, self.mass)?, phi, theta)
            }
        };
        let g = 2.0 * self.mass * (v - self.energy) / (self.hbar * self.hbar);
        let dg = 2.0 * self.mass * self.potential.derivative(x, self.mass).unwrap_or(0.0)
            / (self.hbar * self.hbar);
        let s = self.scale;
        Ok(BasisSample {
            x,
            v,
            phi: s * phi.0,
            dphi: s * phi.1,
            d2phi: s * g * phi.0,
            d3phi: s * (g * phi.1 + dg * phi.0),
            theta: s * theta.0,
            dtheta: s * theta.1,
            d2theta: s * g * theta.0,
            d3theta: s * (g * theta.1 + dg * theta.0),
        })
    }

    /// Wronskian of the (scaled) pair evaluated at `x`. Analytically a
    /// constant; numerically this is the integration-drift monitor.
    pub fn local_wronskian(&self, x: f64) -> Result<f64> {
        let s = self.eval(x, 1)?;
        Ok(s.phi * s.dtheta - s.dphi * s.theta)
    }

    // ---- crate-internal constructors for eigenstate pairs ----

    /// Piecewise pair with explicit initial conditions at `x_ref`
    /// (used for well eigenstates, where phi must be the bound solution).
    pub(crate) fn piecewise_with_ics(
        potential: &Potential,
        energy: f64,
        hbar: f64,
        mass: f64,
        x_ref: f64,
        phi_ic: (f64, f64),
        theta_ic: (f64, f64),
    ) -> Result<Self> {
        check_phys(energy, hbar, mass)?;
        let raw = phi_ic.0 * theta_ic.1 - phi_ic.1 * theta_ic.0;
        if !(raw > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "independent pair requires a positive Wronskian, got {raw}"
            )));
        }
        let repr = BasisRepr::Piecewise(Arc::new(PiecewiseBasis::build(
            potential, energy, hbar, mass, x_ref, phi_ic, theta_ic,
        )?));
        Ok(SolutionBasis {
            potential: potential.clone(),
            energy,
            hbar,
            mass,
            anchor: x_ref,
            raw_wronskian: raw,
            scale: 1.0,
            scaled_disc: None,
            repr,
        })
    }

    /// Oscillator eigenstate pair: phi is the closed-form bound solution
    /// (Hermite function), theta the integrated second solution, chosen by
    /// parity so the raw Wronskian is exactly 1.
    pub(crate) fn osc_eigen_pair(omega: f64, n: u32, hbar: f64, mass: f64) -> Result<Self> {
        let energy = (n as f64 + 0.5) * hbar * omega;
        check_phys(energy, hbar, mass)?;
        let pair = OscEigenPair::build(omega, n, energy, hbar, mass)?;
        Ok(SolutionBasis {
            potential: Potential::Oscillator { omega },
            energy,
            hbar,
            mass,
            anchor: 0.0,
            raw_wronskian: 1.0,
            scale: 1.0,
            scaled_disc: None,
            repr: BasisRepr::OscEigen(Arc::new(pair)),
        })
    }
}

fn check_phys(energy: f64, hbar: f64, mass: f64) -> Result<()> {
    if !energy.is_finite() {
        return Err(Error::InvalidParameter(format!("energy must be finite, got {energy}")));
    }
    if !(hbar > 0.0) || !hbar.is_finite() {
        return Err(Error::InvalidParameter(format!("hbar must be positive, got {hbar}")));
    }
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Piecewise-constant propagation
// ---------------------------------------------------------------------------

/// Advance (psi, psi') by `dx` through a region of constant potential `v`.
/// Exact for every sign of E - V; the degenerate E = V case is the linear
/// solution.
fn propagate_const(e: f64, v: f64, hbar: f64, mass: f64, ic: (f64, f64), dx: f64) -> (f64, f64) {
    let g = 2.0 * mass * (v - e) / (hbar * hbar);
    let (y, dy) = ic;
    if g == 0.0 {
        (y + dy * dx, dy)
    } else if g < 0.0 {
        let k = (-g).sqrt();
        let (s, c) = (k * dx).sin_cos();
        (y * c + dy * s / k, -y * k * s + dy * c)
    } else {
        let k = g.sqrt();
        let s = (k * dx).sinh();
        let c = (k * dx).cosh();
        (y * c + dy * s / k, y * k * s + dy * c)
    }
}

#[derive(Debug)]
struct PcRegion {
    hi: f64,
    v: f64,
    x_ref: f64,
    phi: (f64, f64),
    theta: (f64, f64),
}

#[derive(Debug)]
struct PiecewiseBasis {
    energy: f64,
    hbar: f64,
    mass: f64,
    regions: Vec<PcRegion>,
    /// Closed evaluation interval (walls included; values there are the
    /// inner-side limits).
    domain: (f64, f64),
}

impl PiecewiseBasis {
    #[allow(clippy::too_many_arguments)]
    fn build(
        potential: &Potential,
        e: f64,
        hbar: f64,
        mass: f64,
        x_ref: f64,
        phi_ic: (f64, f64),
        theta_ic: (f64, f64),
    ) -> Result<Self> {
        let domain = potential.domain();
        // Region edges: domain bounds plus interior potential jumps.
        let mut edges = vec![domain.0];
        for b in potential.breakpoints() {
            if b > domain.0 && b < domain.1 {
                edges.push(b);
            }
        }
        edges.push(domain.1);

        let mut regions: Vec<PcRegion> = Vec::with_capacity(edges.len() - 1);
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            let inside = region_interior_point(lo, hi);
            regions.push(PcRegion {
                hi,
                v: potential.evaluate(inside, mass)?,
                x_ref: 0.0,
                phi: (0.0, 0.0),
                theta: (0.0, 0.0),
            });
        }
        // Seed the region containing x_ref, then march outward matching
        // value and slope at each shared edge (the wave is C^1 across a
        // finite potential jump).
        let i0 = regions.iter().position(|r| x_ref < r.hi).unwrap_or(regions.len() - 1);
        regions[i0].x_ref = x_ref;
        regions[i0].phi = phi_ic;
        regions[i0].theta = theta_ic;
        for i in (i0 + 1)..regions.len() {
            let edge = edges[i];
            let prev = &regions[i - 1];
            let phi = propagate_const(e, prev.v, hbar, mass, prev.phi, edge - prev.x_ref);
            let theta = propagate_const(e, prev.v, hbar, mass, prev.theta, edge - prev.x_ref);
            regions[i].x_ref = edge;
            regions[i].phi = phi;
            regions[i].theta = theta;
        }
        for i in (0..i0).rev() {
            let edge = edges[i + 1];
            let next = &regions[i + 1];
            let phi = propagate_const(e, next.v, hbar, mass, next.phi, edge - next.x_ref);
            let theta = propagate_const(e, next.v, hbar, mass, next.theta, edge - next.x_ref);
            regions[i].x_ref = edge;
            regions[i].phi = phi;
            regions[i].theta = theta;
        }
        Ok(PiecewiseBasis { energy: e, hbar, mass, regions, domain })
    }

    /// (V, (phi, phi'), (theta, theta')) at x, unscaled.
    fn eval(&self, x: f64) -> Result<RawPointEval> {
        if x < self.domain.0 || x > self.domain.1 {
            return Err(Error::OutsideDomain { x, lo: self.domain.0, hi: self.domain.1 });
        }
        let last = self.regions.len() - 1;
        let idx = self.regions.iter().position(|r| x < r.hi).unwrap_or(last);
        let r = &self.regions[idx];
        let dx = x - r.x_ref;
        let phi = propagate_const(self.energy, r.v, self.hbar, self.mass, r.phi, dx);
        let theta = propagate_const(self.energy, r.v, self.hbar, self.mass, r.theta, dx);
        Ok((r.v, phi, theta))
    }
}

fn region_interior_point(lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo + 1.0,
        (false, true) => hi - 1.0,
        (false, false) => 0.0,
    }
}

// ---------------------------------------------------------------------------
// Taylor-series integration for smooth (polynomial) potentials
// ---------------------------------------------------------------------------

/// psi'' = g(x) psi with g a quadratic polynomial; holds exactly for the
/// oscillator, where g(x) = (2m/hbar^2)(m omega^2 x^2 / 2 - E).
#[derive(Debug, Clone, Copy)]
struct GPoly {
    g0: f64,
    g1: f64,
    g2: f64,
}

impl GPoly {
    fn at(&self, x: f64) -> f64 {
        self.g0 + x * (self.g1 + x * self.g2)
    }
    /// Coefficients of g recentered: g(a + t) as a polynomial in t.
    fn recenter(&self, a: f64) -> (f64, f64, f64) {
        (self.at(a), self.g1 + 2.0 * self.g2 * a, self.g2)
    }
}

fn osc_g_poly(omega: f64, energy: f64, hbar: f64, mass: f64) -> GPoly {
    let h2 = hbar * hbar;
    GPoly {
        g0: -2.0 * mass * energy / h2,
        g1: 0.0,
        g2: mass * mass * omega * omega / h2,
    }
}

fn osc_char_length(omega: f64, hbar: f64, mass: f64) -> f64 {
    (hbar / (mass * omega)).sqrt()
}

/// Default evaluation span for an anchored oscillator basis: well past the
/// classical turning point and a dozen ground-state lengths, whichever is
/// larger. The unbound solution grows like exp(x^2 / (2 l^2)); the builder
/// additionally stops before f64 overflow and records the reachable span.
fn default_osc_span(omega: f64, energy: f64, hbar: f64, mass: f64) -> f64 {
    let l = osc_char_length(omega, hbar, mass);
    let x_turn = if energy > 0.0 { (2.0 * energy / (mass * omega * omega)).sqrt() } else { l };
    (12.0 * l).max(4.0 * x_turn)
}

const TAYLOR_ORDER: usize = 26;
const TAYLOR_TAIL_REL: f64 = 1e-15;
const VALUE_OVERFLOW_GUARD: f64 = 1e280;

/// Coefficients of the power series y(a + t) = sum c_n t^n for a solution
/// of y'' = (g0 + g1 t + g2 t^2) y with y(a) = c0, y'(a) = c1.
fn series_coeffs(g: (f64, f64, f64), ic: (f64, f64)) -> [f64; TAYLOR_ORDER + 1] {
    let (g0, g1, g2) = g;
    let mut c = [0.0_f64; TAYLOR_ORDER + 1];
    c[0] = ic.0;
    c[1] = ic.1;
    for n in 0..(TAYLOR_ORDER - 1) {
        let mut rhs = g0 * c[n];
        if n >= 1 {
            rhs += g1 * c[n - 1];
        }
        if n >= 2 {
            rhs += g2 * c[n - 2];
        }
        c[n + 2] = rhs / (((n + 2) * (n + 1)) as f64);
    }
    c
}

fn series_value(c: &[f64; TAYLOR_ORDER + 1], t: f64) -> (f64, f64) {
    let mut v = c[TAYLOR_ORDER];
    for i in (0..TAYLOR_ORDER).rev() {
        v = v * t + c[i];
    }
    let mut d = c[TAYLOR_ORDER] * TAYLOR_ORDER as f64;
    for i in (1..TAYLOR_ORDER).rev() {
        d = d * t + c[i] * i as f64;
    }
    (v, d)
}

/// Relative size of the last two series terms at step `h`; the acceptance
/// criterion for a Taylor step.
fn series_tail(c: &[f64; TAYLOR_ORDER + 1], h: f64) -> f64 {
    let mut scale = 0.0_f64;
    let mut p = 1.0;
    for ci in c.iter().take(5) {
        scale = scale.max((ci * p).abs());
        p *= h;
    }
    let tail = (c[TAYLOR_ORDER - 1] * h.powi((TAYLOR_ORDER - 1) as i32)).abs()
        + (c[TAYLOR_ORDER] * h.powi(TAYLOR_ORDER as i32)).abs();
    tail / (scale + f64::MIN_POSITIVE)
}

#[derive(Debug)]
struct TaylorNode {
    x: f64,
    phi: (f64, f64),
    theta: (f64, f64),
}

#[derive(Debug)]
struct TaylorTable {
    g: GPoly,
    nodes: Vec<TaylorNode>,
    lo: f64,
    hi: f64,
}

impl TaylorTable {
    /// Integrate both solutions from `x0` over [lo_target, hi_target],
    /// stopping early (and shrinking the recorded domain) if values approach
    /// f64 overflow.
    #[allow(clippy::too_many_arguments)]
    fn build(
        g: GPoly,
        char_len: f64,
        x0: f64,
        phi_ic: (f64, f64),
        theta_ic: (f64, f64),
        lo_target: f64,
        hi_target: f64,
    ) -> Result<Self> {
        let mut right = Self::march(g, char_len, x0, phi_ic, theta_ic, hi_target)?;
        let left = Self::march(g, char_len, x0, phi_ic, theta_ic, lo_target)?;
        let mut nodes: Vec<TaylorNode> = left.into_iter().skip(1).rev().collect();
        nodes.append(&mut right);
        let lo = nodes.first().map(|n| n.x).unwrap_or(x0);
        let hi = nodes.last().map(|n| n.x).unwrap_or(x0);
        Ok(TaylorTable { g, nodes, lo, hi })
    }

    /// March from x0 toward `target`, returning nodes in marching order
    /// (the first node is x0 itself).
    fn march(
        g: GPoly,
        char_len: f64,
        x0: f64,
        phi_ic: (f64, f64),
        theta_ic: (f64, f64),
        target: f64,
    ) -> Result<Vec<TaylorNode>> {
        let dir = if target >= x0 { 1.0 } else { -1.0 };
        let mut nodes = vec![TaylorNode { x: x0, phi: phi_ic, theta: theta_ic }];
        let mut x = x0;
        let mut phi = phi_ic;
        let mut theta = theta_ic;
        let h_min = 1e-12 * char_len;
        while (target - x) * dir > 0.0 {
            let local = 2.0 / (g.at(x).abs().sqrt() + 1.0 / char_len);
            let mut h = (0.35 * char_len).min(local).min((target - x).abs());
            let gc = g.recenter(x);
            let (cp, ct, step) = loop {
                let cp = series_coeffs(gc, phi);
                let ct = series_coeffs(gc, theta);
                let tol = series_tail(&cp, dir * h).max(series_tail(&ct, dir * h));
                if tol <= TAYLOR_TAIL_REL {
                    break (cp, ct, dir * h);
                }
                h *= 0.5;
                if h < h_min {
                    return Err(Error::Numerical {
                        context: "Taylor integration step underflow".into(),
                        x,
                    });
                }
            };
            phi = series_value(&cp, step);
            theta = series_value(&ct, step);
            x += step;
            nodes.push(TaylorNode { x, phi, theta });
            let mag = phi.0.abs().max(phi.1.abs()).max(theta.0.abs()).max(theta.1.abs());
            if mag > VALUE_OVERFLOW_GUARD {
                break; // record what is reachable; evaluation past it errors
            }
            if nodes.len() > 400_000 {
                return Err(Error::Numerical {
                    context: "Taylor integration produced too many nodes".into(),
                    x,
                });
            }
        }
        Ok(nodes)
    }

    fn nearest_node(&self, x: f64) -> Result<&TaylorNode> {
        if x < self.lo || x > self.hi {
            return Err(Error::OutsideDomain { x, lo: self.lo, hi: self.hi });
        }
        let idx = self.nodes.partition_point(|n| n.x < x);
        let right = idx.min(self.nodes.len() - 1);
        let left = idx.saturating_sub(1);
        let n = if (x - self.nodes[left].x).abs() <= (self.nodes[right].x - x).abs() {
            &self.nodes[left]
        } else {
            &self.nodes[right]
        };
        Ok(n)
    }

    /// Both solutions at x: ((phi, phi'), (theta, theta')).
    fn eval_pair(&self, x: f64) -> Result<((f64, f64), (f64, f64))> {
        let n = self.nearest_node(x)?;
        let gc = self.g.recenter(n.x);
        let t = x - n.x;
        let phi = series_value(&series_coeffs(gc, n.phi), t);
        let theta = series_value(&series_coeffs(gc, n.theta), t);
        Ok((phi, theta))
    }

    /// Only the first tracked solution (used when phi has a closed form and
    /// the table carries theta in the phi slot).
    fn eval_first(&self, x: f64) -> Result<(f64, f64)> {
        let n = self.nearest_node(x)?;
        let gc = self.g.recenter(n.x);
        Ok(series_value(&series_coeffs(gc, n.phi), x - n.x))
    }
}

// ---------------------------------------------------------------------------
// Oscillator eigenstate pair
// ---------------------------------------------------------------------------

/// Physicists' Hermite polynomial H_n and its derivative at xi.
fn hermite(n: u32, xi: f64) -> (f64, f64) {
    let mut h_prev = 1.0_f64; // H_0
    if n == 0 {
        return (h_prev, 0.0);
    }
    let mut h = 2.0 * xi; // H_1
    for m in 1..n {
        let next = 2.0 * xi * h - 2.0 * m as f64 * h_prev;
        h_prev = h;
        h = next;
    }
    (h, 2.0 * n as f64 * h_prev)
}

#[derive(Debug)]
struct OscEigenPair {
    n: u32,
    /// sqrt(m omega / hbar): converts x to the dimensionless xi.
    xi_scale: f64,
    /// Second solution table (stored in the phi slot of the table).
    theta: TaylorTable,
}

impl OscEigenPair {
    fn build(omega: f64, n: u32, energy: f64, hbar: f64, mass: f64) -> Result<Self> {
        let xi_scale = (mass * omega / hbar).sqrt();
        let l = osc_char_length(omega, hbar, mass);
        // theta initial conditions by parity, making W = phi theta' - phi' theta = 1.
        let theta_ic = if n.is_multiple_of(2) {
            let phi0 = hermite(n, 0.0).0;
            (0.0, 1.0 / phi0)
        } else {
            let dphi0 = hermite(n, 0.0).1 * xi_scale;
            (-1.0 / dphi0, 0.0)
        };
        // Span to just below f64 overflow of exp(xi^2/2); the builder's own
        // guard trims whatever remains unreachable.
        let span = l * (2.0_f64 * 650.0).sqrt();
        let g = osc_g_poly(omega, energy, hbar, mass);
        // The table integrates only theta; park it in the phi slot and keep
        // a zero pair in the other to reuse the machinery.
        let table = TaylorTable::build(g, l, 0.0, theta_ic, (0.0, 0.0), -span, span)?;
        Ok(OscEigenPair { n, xi_scale, theta: table })
    }

    /// Closed-form bound solution H_n(xi) exp(-xi^2/2) and its x-derivative.
    fn phi(&self, x: f64) -> (f64, f64) {
        let xi = self.xi_scale * x;
        let (h, dh) = hermite(self.n, xi);
        let gauss = (-0.5 * xi * xi).exp();
        let value = h * gauss;
        let slope = (dh - xi * h) * gauss * self.xi_scale;
        (value, slope)
    }
}
