use std::collections::HashMap;

use crate::attention::{build_attentional_mdp_factored, solve_mode, uniform_disaggregation, AttentionMode, AttentionalMdp};
use crate::dbn::{Cpt, Dbn, Parent};
use crate::error::Result;
use crate::mdp::{FactoredMdp, Variable};

use super::{AgentDynamics, Cell, GridworldSpec};

pub const ACTIONS: [&str; 4] = ["N", "S", "E", "W"];
pub const CAPTURED_LABEL: &str = "captured";

const DIRS: [(i64, i64); 4] = [(0, -1), (0, 1), (1, 0), (-1, 0)];
// perpendicular directions for N, S, E, W
const LATERAL: [[usize; 2]; 4] = [[2, 3], [2, 3], [0, 1], [0, 1]];

/// Free cells of the grid, numbered row by row.
#[derive(Debug, Clone)]
pub struct GridLayout {
    width: i64,
    cells: Vec<Cell>,
    index: HashMap<Cell, usize>,
    // neighbour[c][d]: cell reached from c moving in direction d (c itself if blocked)
    neighbour: Vec<[usize; 4]>,
}

impl GridLayout {
    fn new(spec: &GridworldSpec) -> Self {
        let mut cells = Vec::new();
        for y in 0..spec.height {
            for x in 0..spec.width {
                if !spec.is_wall([x, y]) {
                    cells.push([x, y]);
                }
            }
        }
        let index: HashMap<Cell, usize> = cells.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let neighbour = cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mut out = [i; 4];
                for (d, (dx, dy)) in DIRS.iter().enumerate() {
                    if let Some(&j) = index.get(&[c[0] + dx, c[1] + dy]) {
                        out[d] = j;
                    }
                }
                out
            })
            .collect();
        GridLayout {
            width: spec.width,
            cells,
            index,
            neighbour,
        }
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn width(&self) -> i64 {
        self.width
    }

    pub fn cell(&self, i: usize) -> Cell {
        self.cells[i]
    }

    pub fn cell_id(&self, c: Cell) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn neighbour(&self, cell: usize, dir: usize) -> usize {
        self.neighbour[cell][dir]
    }

    /// Value index of the captured status for agent variables.
    pub fn captured(&self) -> usize {
        self.cells.len()
    }

    fn distance(&self, a: usize, b: usize) -> f64 {
        let (p, q) = (self.cells[a], self.cells[b]);
        (((p[0] - q[0]).pow(2) + (p[1] - q[1]).pow(2)) as f64).sqrt()
    }
}

/// A compiled pursuit world: the joint MDP, its DBN tables and its modes.
#[derive(Debug, Clone)]
pub struct CompiledWorld {
    pub spec: GridworldSpec,
    pub layout: GridLayout,
    pub mdp: FactoredMdp,
    pub dbn: Dbn,
    /// Modes `1..=m` from the config.
    pub modes: Vec<AttentionMode>,
    pub null_mode: AttentionMode,
}

impl CompiledWorld {
    /// True when every agent has been captured.
    pub fn is_terminal(&self, x: &[usize]) -> bool {
        x[1..].iter().all(|&v| v == self.layout.captured())
    }

    /// Build `M_1..M_m` from the DBN tables with uniform disaggregation and
    /// solve each one.
    pub fn solve_modes(&self, tol: f64) -> Result<Vec<AttentionalMdp>> {
        self.modes
            .iter()
            .map(|mode| {
                let d = uniform_disaggregation(mode, &self.mdp)?;
                solve_mode(build_attentional_mdp_factored(&self.mdp, &self.dbn, mode, &d)?, tol)
            })
            .collect()
    }
}

struct Rules<'a> {
    spec: &'a GridworldSpec,
    layout: &'a GridLayout,
    penalty: Vec<f64>,
}

impl Rules<'_> {
    fn robot_moves(&self, cell: usize, action: usize) -> Vec<(usize, f64)> {
        let s = self.spec;
        let [l1, l2] = LATERAL[action];
        let mut out: Vec<(usize, f64)> = Vec::with_capacity(3);
        for (dir, p) in [(action, s.slip_main), (l1, s.slip_side), (l2, s.slip_side)] {
            if p == 0.0 {
                continue;
            }
            let next = self.layout.neighbour(cell, dir);
            match out.iter_mut().find(|e| e.0 == next) {
                Some(e) => e.1 += p,
                None => out.push((next, p)),
            }
        }
        out
    }

    fn agent_moves(&self, agent: usize, cell: usize) -> Vec<(usize, f64)> {
        match self.spec.agents[agent].dynamics {
            AgentDynamics::Static => vec![(cell, 1.0)],
            AgentDynamics::UniformNeighbor => {
                let mut out: Vec<(usize, f64)> = Vec::with_capacity(4);
                for dir in 0..4 {
                    let next = self.layout.neighbour(cell, dir);
                    match out.iter_mut().find(|e| e.0 == next) {
                        Some(e) => e.1 += 0.25,
                        None => out.push((next, 0.25)),
                    }
                }
                out
            }
        }
    }

    /// Capture probability for an agent at `agent_cell` once the robot is at
    /// `robot_cell`.
    fn capture_prob(&self, robot_cell: usize, agent_cell: usize) -> f64 {
        if self.layout.distance(robot_cell, agent_cell) <= self.spec.capture.epsilon {
            self.spec.capture.prob
        } else {
            0.0
        }
    }

    /// Next-status distribution of one agent: `(value, prob, captured_now)`.
    fn agent_outcomes(&self, agent: usize, status: usize, robot_next: usize) -> Vec<(usize, f64, bool)> {
        let captured = self.layout.captured();
        if status == captured {
            return vec![(captured, 1.0, false)];
        }
        let mut out = Vec::new();
        for (cell, p) in self.agent_moves(agent, status) {
            let q = self.capture_prob(robot_next, cell);
            if q > 0.0 {
                out.push((captured, p * q, true));
            }
            if q < 1.0 {
                out.push((cell, p * (1.0 - q), false));
            }
        }
        out
    }

    fn penalty(&self, from: usize, to: usize) -> f64 {
        if self.spec.penalty_on_entry_only && from == to {
            0.0
        } else {
            self.penalty[to]
        }
    }

    /// Joint next-state distribution and expected reward. Robot and agents
    /// move simultaneously; capture is checked at the new positions.
    fn step(&self, x: &[usize], action: usize) -> (Vec<(Vec<usize>, f64)>, f64) {
        let captured = self.layout.captured();
        let terminal = x[1..].iter().all(|&v| v == captured);
        let mut dist: Vec<(Vec<usize>, f64)> = Vec::new();
        let mut reward = 0.0;
        for (robot_next, pr) in self.robot_moves(x[0], action) {
            if terminal {
                let mut next = x.to_vec();
                next[0] = robot_next;
                dist.push((next, pr));
                continue;
            }
            let penalty = self.penalty(x[0], robot_next);
            // cartesian product over agents
            let mut partial: Vec<(Vec<usize>, f64, usize)> = vec![(vec![robot_next], pr, 0)];
            for (i, &status) in x[1..].iter().enumerate() {
                let outcomes = self.agent_outcomes(i, status, robot_next);
                let mut grown = Vec::with_capacity(partial.len() * outcomes.len());
                for (prefix, p, caught) in &partial {
                    for &(v, q, now) in &outcomes {
                        let mut t = prefix.clone();
                        t.push(v);
                        grown.push((t, p * q, caught + now as usize));
                    }
                }
                partial = grown;
            }
            for (next, p, caught) in partial {
                reward += p * (caught as f64 * self.spec.capture.reward + penalty);
                dist.push((next, p));
            }
        }
        (dist, reward)
    }

    fn dbn(&self) -> Result<Dbn> {
        let n = self.layout.num_cells();
        let captured = self.layout.captured();
        let mut cpts = Vec::with_capacity(ACTIONS.len());
        for a in 0..ACTIONS.len() {
            let mut per_var = Vec::with_capacity(self.spec.num_vars());
            let mut robot = vec![0.0; n * n];
            for c in 0..n {
                for (next, p) in self.robot_moves(c, a) {
                    robot[c * n + next] += p;
                }
            }
            per_var.push(Cpt {
                parents: vec![Parent::Previous(0)],
                table: robot,
            });
            for i in 0..self.spec.agents.len() {
                let d = n + 1;
                let mut table = vec![0.0; d * n * d];
                for status in 0..d {
                    for robot_next in 0..n {
                        let row = (status * n + robot_next) * d;
                        if status == captured {
                            table[row + captured] = 1.0;
                            continue;
                        }
                        for (v, p, _) in self.agent_outcomes(i, status, robot_next) {
                            table[row + v] += p;
                        }
                    }
                }
                per_var.push(Cpt {
                    parents: vec![Parent::Previous(i + 1), Parent::Current(0)],
                    table,
                });
            }
            cpts.push(per_var);
        }
        let mut domains = vec![n];
        domains.extend(std::iter::repeat_n(n + 1, self.spec.agents.len()));
        Dbn::new(domains, cpts)
    }
}

/// Compile a validated spec into its joint MDP, DBN tables and modes.
pub fn compile(spec: &GridworldSpec) -> Result<CompiledWorld> {
    spec.validate()?;
    let layout = GridLayout::new(spec);
    let mut penalty = vec![0.0; layout.num_cells()];
    for p in &spec.penalties {
        penalty[layout.cell_id(p.cell).expect("validated")] += p.reward;
    }
    let rules = Rules {
        spec,
        layout: &layout,
        penalty,
    };

    let cell_labels: Vec<String> = (0..layout.num_cells())
        .map(|i| {
            let c = layout.cell(i);
            format!("{},{}", c[0], c[1])
        })
        .collect();
    let mut variables = vec![Variable::new("robot", cell_labels.clone())];
    for i in 0..spec.agents.len() {
        let mut labels = cell_labels.clone();
        labels.push(CAPTURED_LABEL.to_string());
        variables.push(Variable::new(format!("agent{}", i + 1), labels));
    }
    let mut initial = vec![layout.cell_id(spec.robot_start).expect("validated")];
    initial.extend(spec.agents.iter().map(|a| layout.cell_id(a.start).expect("validated")));

    let mdp = FactoredMdp::enumerate(
        variables,
        ACTIONS.iter().map(|a| a.to_string()).collect(),
        initial,
        spec.discount,
        spec.state_cap,
        |x, a| rules.step(x, a),
    )?;
    let dbn = rules.dbn()?;
    let modes = spec
        .modes
        .iter()
        .enumerate()
        .map(|(k, m)| AttentionMode::new(k + 1, m.clone(), spec.sensor_costs.clone()))
        .collect::<Result<Vec<_>>>()?;
    let null_mode = AttentionMode::null(spec.sensor_costs.clone())?;
    Ok(CompiledWorld {
        spec: spec.clone(),
        layout,
        mdp,
        dbn,
        modes,
        null_mode,
    })
}
