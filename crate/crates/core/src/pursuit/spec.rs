use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mdp::DEFAULT_STATE_CAP;

pub type Cell = [i64; 2];

/// Configs shipped with the crate, addressable by name.
pub const BUNDLED_CONFIGS: &[(&str, &str)] = &[
    ("paper-world", include_str!("../../configs/paper-world.toml")),
    ("mini-3x3", include_str!("../../configs/mini-3x3.toml")),
    ("corridor", include_str!("../../configs/corridor.toml")),
];

pub fn bundled_config(name: &str) -> Option<&'static str> {
    BUNDLED_CONFIGS.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AgentDynamics {
    /// Each compass move with probability 1/4; blocked moves stay put.
    UniformNeighbor,
    /// Never moves.
    Static,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub start: Cell,
    #[serde(default = "default_dynamics")]
    pub dynamics: AgentDynamics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltyCell {
    pub cell: Cell,
    #[serde(default = "default_penalty")]
    pub reward: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaptureSpec {
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default = "one")]
    pub prob: f64,
    #[serde(default = "default_capture_reward")]
    pub reward: f64,
}

impl Default for CaptureSpec {
    fn default() -> Self {
        CaptureSpec {
            epsilon: 0.0,
            prob: 1.0,
            reward: default_capture_reward(),
        }
    }
}

/// Validated pursuit-world description.
#[derive(Debug, Clone, PartialEq)]
pub struct GridworldSpec {
    pub width: i64,
    pub height: i64,
    pub walls: Vec<Cell>,
    pub penalties: Vec<PenaltyCell>,
    pub robot_start: Cell,
    pub slip_main: f64,
    pub slip_side: f64,
    pub agents: Vec<AgentSpec>,
    pub capture: CaptureSpec,
    /// One cost per variable: robot first, then each agent.
    pub sensor_costs: Vec<f64>,
    /// Attended variable sets for modes 1..=m.
    pub modes: Vec<Vec<usize>>,
    pub discount: f64,
    pub penalty_on_entry_only: bool,
    pub state_cap: usize,
}

// Raw document layout. Field names here are the config contract.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    grid: RawGrid,
    #[serde(default)]
    walls: Vec<Cell>,
    #[serde(default)]
    penalties: Vec<PenaltyCell>,
    robot: RawRobot,
    agents: Vec<AgentSpec>,
    #[serde(default)]
    capture: CaptureSpec,
    #[serde(default)]
    sensors: Option<RawSensors>,
    #[serde(default)]
    attention: Option<RawAttention>,
    #[serde(default = "default_discount")]
    discount: f64,
    #[serde(default)]
    penalty_on_entry_only: bool,
    #[serde(default = "default_cap")]
    state_cap: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawGrid {
    width: i64,
    height: i64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRobot {
    start: Cell,
    #[serde(default = "default_slip_main")]
    slip_main: f64,
    #[serde(default = "default_slip_side")]
    slip_side: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSensors {
    costs: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAttention {
    modes: Vec<Vec<usize>>,
}

fn default_dynamics() -> AgentDynamics {
    AgentDynamics::UniformNeighbor
}
fn default_penalty() -> f64 {
    -20.0
}
fn one() -> f64 {
    1.0
}
fn default_capture_reward() -> f64 {
    100.0
}
fn default_discount() -> f64 {
    0.95
}
fn default_slip_main() -> f64 {
    0.7
}
fn default_slip_side() -> f64 {
    0.15
}
fn default_cap() -> usize {
    DEFAULT_STATE_CAP
}

/// Parse and validate a TOML pursuit-world config.
pub fn load_spec(text: &str) -> Result<GridworldSpec> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let n_vars = raw.agents.len() + 1;
    let sensor_costs = match raw.sensors {
        Some(s) => s.costs,
        None => vec![5.0; n_vars],
    };
    let modes = match raw.attention {
        Some(a) => a.modes,
        None => (1..n_vars).map(|i| vec![0, i]).collect(),
    };
    let spec = GridworldSpec {
        width: raw.grid.width,
        height: raw.grid.height,
        walls: raw.walls,
        penalties: raw.penalties,
        robot_start: raw.robot.start,
        slip_main: raw.robot.slip_main,
        slip_side: raw.robot.slip_side,
        agents: raw.agents,
        capture: raw.capture,
        sensor_costs,
        modes,
        discount: raw.discount,
        penalty_on_entry_only: raw.penalty_on_entry_only,
        state_cap: raw.state_cap,
    };
    spec.validate()?;
    Ok(spec)
}

impl GridworldSpec {
    pub fn in_bounds(&self, c: Cell) -> bool {
        (0..self.width).contains(&c[0]) && (0..self.height).contains(&c[1])
    }

    pub fn is_wall(&self, c: Cell) -> bool {
        self.walls.contains(&c)
    }

    pub fn num_vars(&self) -> usize {
        self.agents.len() + 1
    }

    /// Copy with every sensor cost set to zero.
    pub fn without_costs(&self) -> Self {
        GridworldSpec {
            sensor_costs: vec![0.0; self.sensor_costs.len()],
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        use Error as E;
        if self.width < 1 || self.height < 1 {
            return Err(E::validation("grid", "width and height must be positive"));
        }
        if self.width.saturating_mul(self.height) > 1_000_000 {
            return Err(E::validation("grid", "grid has more than 10^6 cells"));
        }
        let mut seen = HashSet::new();
        for (i, w) in self.walls.iter().enumerate() {
            if !self.in_bounds(*w) {
                return Err(E::validation(format!("walls[{i}]"), "cell outside the grid"));
            }
            seen.insert(*w);
        }
        if seen.len() as i64 == self.width * self.height {
            return Err(E::validation("walls", "every cell is a wall"));
        }
        for (i, p) in self.penalties.iter().enumerate() {
            if !self.in_bounds(p.cell) || self.is_wall(p.cell) {
                return Err(E::validation(format!("penalties[{i}].cell"), "must be a free cell inside the grid"));
            }
            if !p.reward.is_finite() {
                return Err(E::validation(format!("penalties[{i}].reward"), "must be finite"));
            }
        }
        if !self.in_bounds(self.robot_start) || self.is_wall(self.robot_start) {
            return Err(E::validation("robot.start", "must be a free cell inside the grid"));
        }
        let slips_ok = (0.0..=1.0).contains(&self.slip_main) && (0.0..=1.0).contains(&self.slip_side);
        if !slips_ok || (self.slip_main + 2.0 * self.slip_side - 1.0).abs() > 1e-12 {
            return Err(E::validation(
                "robot.slip_main",
                format!(
                    "slip_main + 2*slip_side must equal 1 (got {} + 2*{})",
                    self.slip_main, self.slip_side
                ),
            ));
        }
        if self.agents.is_empty() {
            return Err(E::validation("agents", "at least one agent is required"));
        }
        for (i, a) in self.agents.iter().enumerate() {
            if !self.in_bounds(a.start) || self.is_wall(a.start) {
                return Err(E::validation(format!("agents[{i}].start"), "must be a free cell inside the grid"));
            }
        }
        let c = &self.capture;
        if !(c.epsilon.is_finite() && c.epsilon >= 0.0) {
            return Err(E::validation("capture.epsilon", "must be >= 0"));
        }
        if !(c.prob > 0.0 && c.prob <= 1.0) {
            return Err(E::validation("capture.prob", "must be in (0, 1]"));
        }
        if !c.reward.is_finite() {
            return Err(E::validation("capture.reward", "must be finite"));
        }
        if self.sensor_costs.len() != self.num_vars() {
            return Err(E::validation(
                "sensors.costs",
                format!("expected {} costs (robot + agents)", self.num_vars()),
            ));
        }
        if let Some(i) = self.sensor_costs.iter().position(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(E::validation(format!("sensors.costs[{i}]"), "must be finite and >= 0"));
        }
        if self.modes.is_empty() {
            return Err(E::validation("attention.modes", "at least one mode is required"));
        }
        for (k, m) in self.modes.iter().enumerate() {
            if m.is_empty() {
                return Err(E::validation(format!("attention.modes[{k}]"), "mode attends no variables"));
            }
            if let Some(v) = m.iter().find(|&&v| v >= self.num_vars()) {
                return Err(E::validation(format!("attention.modes[{k}]"), format!("unknown variable {v}")));
            }
        }
        if !(self.discount > 0.0 && self.discount <= 1.0) {
            return Err(E::validation("discount", "must be in (0, 1]"));
        }
        if self.state_cap == 0 {
            return Err(E::validation("state_cap", "must be positive"));
        }
        Ok(())
    }
}
