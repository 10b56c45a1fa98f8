//! Scenario files: strict JSON input with parse-time validation, so a
//! scenario that parses is a scenario every mode can trust.

use anyhow::{bail, Context, Result};
use qtraj_core::{Microstate, Potential};
use serde::Deserialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Tunnel,
    Bound,
    Trajectory,
    ClassicalLimit,
    Verify,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Tunnel => "tunnel",
            Mode::Bound => "bound",
            Mode::Trajectory => "trajectory",
            Mode::ClassicalLimit => "classical-limit",
            Mode::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PotentialSpec {
    Free,
    Barrier {
        #[serde(rename = "U")]
        height: f64,
        #[serde(rename = "q")]
        half_width: f64,
    },
    Well {
        #[serde(rename = "L")]
        half_width: f64,
    },
    Oscillator { omega: f64 },
}

impl PotentialSpec {
    pub fn build(&self) -> Result<Potential> {
        let p = match *self {
            PotentialSpec::Free => Potential::Free,
            PotentialSpec::Barrier { height, half_width } => {
                Potential::barrier(height, half_width)?
            }
            PotentialSpec::Well { half_width } => Potential::well(half_width)?,
            PotentialSpec::Oscillator { omega } => Potential::oscillator(omega)?,
        };
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MicrostateSpec {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl MicrostateSpec {
    pub fn build(&self) -> Result<Microstate> {
        if !(self.a > 0.0 && self.b > 0.0) {
            bail!("microstate: a and b must be positive");
        }
        if self.a * self.b - self.c * self.c / 4.0 <= 0.0 {
            bail!("microstate: ab - c\u{b2}/4 must be positive");
        }
        Ok(Microstate::new(self.a, self.b, self.c)?)
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n_points: usize,
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points)
            .map(|i| {
                self.x_min
                    + (self.x_max - self.x_min) * i as f64 / (self.n_points - 1) as f64
            })
            .collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub mode: Mode,
    pub potential: PotentialSpec,
    #[serde(rename = "E", default)]
    pub energy: Option<f64>,
    #[serde(default)]
    pub n_nodes: Option<u32>,
    #[serde(default)]
    pub microstate: Option<MicrostateSpec>,
    pub hbar: f64,
    pub mass: f64,
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub hbar_sweep: Option<Vec<f64>>,
    #[serde(default)]
    pub tau: Option<f64>,
    #[serde(default)]
    pub output: Option<String>,
}

impl Scenario {
    pub fn energy(&self) -> Result<f64> {
        self.energy.context("scenario: field \"E\" is required for this mode")
    }

    pub fn microstate(&self) -> Result<Microstate> {
        self.microstate
            .context("scenario: field \"microstate\" is required for this mode")?
            .build()
    }

    pub fn grid(&self) -> Result<&GridSpec> {
        self.grid
            .as_ref()
            .context("scenario: field \"grid\" is required for this mode")
    }
}

/// Parse and validate a scenario document. Unknown keys are rejected and
/// every cross-field invariant is checked here, before any computation.
pub fn parse_scenario(text: &[u8]) -> Result<Scenario> {
    let scenario: Scenario =
        serde_json::from_slice(text).context("scenario: malformed document")?;
    if !(scenario.hbar > 0.0 && scenario.hbar.is_finite()) {
        bail!("hbar: must be positive and finite, got {}", scenario.hbar);
    }
    if !(scenario.mass > 0.0 && scenario.mass.is_finite()) {
        bail!("mass: must be positive and finite, got {}", scenario.mass);
    }
    if let Some(g) = &scenario.grid {
        if g.n_points < 2 {
            bail!("grid.n_points: must be at least 2, got {}", g.n_points);
        }
        if !(g.x_min < g.x_max) {
            bail!("grid.x_min: must be below x_max, got [{}, {}]", g.x_min, g.x_max);
        }
    }
    if let Some(m) = &scenario.microstate {
        m.build()?;
    }
    match scenario.potential {
        PotentialSpec::Barrier { height, half_width } => {
            if !(height > 0.0) {
                bail!("potential.U: must be positive, got {height}");
            }
            if !(half_width > 0.0) {
                bail!("potential.q: must be positive, got {half_width}");
            }
            if let Some(e) = scenario.energy {
                if !(e > 0.0 && e < height) {
                    bail!("E: sub-barrier energy required (0 < E < U), got E = {e}, U = {height}");
                }
            }
        }
        PotentialSpec::Well { half_width } => {
            if !(half_width > 0.0) {
                bail!("potential.L: must be positive, got {half_width}");
            }
        }
        PotentialSpec::Oscillator { omega } => {
            if !(omega > 0.0) {
                bail!("potential.omega: must be positive, got {omega}");
            }
        }
        PotentialSpec::Free => {}
    }
    if let Some(sweep) = &scenario.hbar_sweep {
        if sweep.is_empty() {
            bail!("hbar_sweep: must not be empty when present");
        }
        for pair in sweep.windows(2) {
            if !(pair[1] < pair[0]) {
                bail!("hbar_sweep: values must be strictly decreasing");
            }
        }
        if !(sweep[sweep.len() - 1] > 0.0) {
            bail!("hbar_sweep: values must stay positive");
        }
    }
    if let Some(e) = scenario.energy {
        if !e.is_finite() {
            bail!("E: must be finite, got {e}");
        }
    }
    Ok(scenario)
}
