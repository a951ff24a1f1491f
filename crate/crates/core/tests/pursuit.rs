mod common;

use attnplan::dbn::Parent;
use attnplan::mdp::{value_iteration, DEFAULT_MAX_SWEEPS};
use attnplan::pursuit::{bundled_config, compile, load_spec, CompiledWorld, GridworldSpec};
use attnplan::Error;

const TOL: f64 = 1e-6;

fn spec(text: &str) -> GridworldSpec {
    load_spec(text).unwrap()
}

fn mini() -> CompiledWorld {
    compile(&spec(bundled_config("mini-3x3").unwrap())).unwrap()
}

fn one_by_two(dynamics: &str, slip: (f64, f64)) -> CompiledWorld {
    compile(&spec(&format!(
        r#"
        [grid]
        width = 2
        height = 1
        [robot]
        start = [0, 0]
        slip_main = {}
        slip_side = {}
        [[agents]]
        start = [0, 0]
        dynamics = "{dynamics}"
        "#,
        slip.0, slip.1
    )))
    .unwrap()
}

const N: usize = 0;
const E: usize = 2;
const W: usize = 3;

#[test]
fn static_agent_on_the_robot_cell_is_captured_at_once() {
    let w = one_by_two("static", (1.0, 0.0));
    let m = &w.mdp;
    let c = w.layout.captured();
    let x0 = m.initial_state();
    assert_eq!(m.state(x0), &[0, 0]);
    // Staying put (N is blocked) captures; moving east does not.
    assert_eq!(m.transition(x0, N).collect::<Vec<_>>(), vec![(m.state_id(&[0, c]).unwrap(), 1.0)]);
    assert_eq!(m.reward(x0, N), 100.0);
    assert_eq!(m.transition(x0, E).collect::<Vec<_>>(), vec![(m.state_id(&[1, 0]).unwrap(), 1.0)]);
    assert_eq!(m.reward(x0, E), 0.0);
    let (v, _) = value_iteration(m, TOL, DEFAULT_MAX_SWEEPS).unwrap();
    assert!((v[x0] - 100.0).abs() <= TOL);
}

#[test]
fn wandering_agent_rows_match_hand_derivation() {
    let w = one_by_two("uniform-neighbor", (0.7, 0.15));
    let m = &w.mdp;
    let c = w.layout.captured();
    let id = |t: [usize; 2]| m.state_id(&t).unwrap();
    let x0 = id([0, 0]);
    // East: robot reaches cell 1 w.p. 0.7 (laterals are blocked, so it stays
    // w.p. 0.3); the agent stays w.p. 0.75 (three blocked moves) or moves east.
    let expect = [
        (id([1, c]), 0.7 * 0.25),
        (id([0, c]), 0.3 * 0.75),
        (id([1, 0]), 0.7 * 0.75),
        (id([0, 1]), 0.3 * 0.25),
    ];
    for (x, p) in expect {
        assert!((m.probability(x0, E, x) - p).abs() < 1e-12);
    }
    assert!((m.reward(x0, E) - 100.0 * (0.7 * 0.25 + 0.3 * 0.75)).abs() < 1e-12);
    // West is blocked in every direction: the robot stays.
    assert!((m.probability(x0, W, id([0, c])) - 0.75).abs() < 1e-12);
    assert!((m.probability(x0, W, id([0, 1])) - 0.25).abs() < 1e-12);

    assert!(m.num_states() <= 6);
    let (v, _) = value_iteration(m, TOL, DEFAULT_MAX_SWEEPS).unwrap();
    let oracle = common::enumerate_optimal(m);
    for s in 0..m.num_states() {
        assert!((v[s] - oracle[s]).abs() <= 2.0 * TOL);
    }
}

#[test]
fn compiled_rows_are_stochastic() {
    let w = mini();
    let m = &w.mdp;
    for s in 0..m.num_states() {
        for a in 0..m.num_actions() {
            let total: f64 = m.transition(s, a).map(|e| e.1).sum();
            assert!((total - 1.0).abs() <= 1e-9);
        }
    }
}

#[test]
fn walls_block_the_robot() {
    let w = compile(&spec(
        r#"
        walls = [[1, 0]]
        [grid]
        width = 2
        height = 2
        [robot]
        start = [0, 0]
        [[agents]]
        start = [1, 1]
        dynamics = "static"
        "#,
    ))
    .unwrap();
    let m = &w.mdp;
    let here = w.layout.cell_id([0, 0]).unwrap();
    let south = w.layout.cell_id([0, 1]).unwrap();
    let agent = w.layout.cell_id([1, 1]).unwrap();
    let x0 = m.initial_state();
    // East runs into the wall and north into the boundary: 0.7 + 0.15 stay.
    assert!((m.probability(x0, E, m.state_id(&[here, agent]).unwrap()) - 0.85).abs() < 1e-12);
    assert!((m.probability(x0, E, m.state_id(&[south, agent]).unwrap()) - 0.15).abs() < 1e-12);
    // North and both of its laterals are blocked.
    assert_eq!(m.probability(x0, N, m.state_id(&[here, agent]).unwrap()), 1.0);
}

#[test]
fn dbn_tables_reproduce_the_joint_kernel() {
    let w = mini();
    let m = &w.mdp;
    for s in 0..m.num_states() {
        let x = m.state(s).to_vec();
        for a in 0..m.num_actions() {
            let from_dbn = w.dbn.marginal_successors(a, &[0, 1, 2], |v| x[v]);
            let mass: f64 = from_dbn.iter().map(|e| e.1).sum();
            assert!((mass - 1.0).abs() <= 1e-9);
            for (next, p) in from_dbn {
                let id = m.state_id(&next).expect("DBN successor was enumerated");
                assert!((m.probability(s, a, id) - p).abs() <= 1e-9);
                assert!((w.dbn.joint_probability(a, &x, &next) - p).abs() <= 1e-12);
            }
        }
    }
}

#[test]
fn agent_tables_do_not_depend_on_the_action() {
    let w = mini();
    for var in 1..w.dbn.num_vars() {
        let first = w.dbn.cpt(0, var);
        assert_eq!(first.parents, vec![Parent::Previous(var), Parent::Current(0)]);
        for a in 1..w.dbn.num_actions() {
            assert_eq!(w.dbn.cpt(a, var), first);
        }
    }
}

#[test]
fn all_captured_states_form_a_closed_zero_reward_class() {
    let w = mini();
    let m = &w.mdp;
    let mut count = 0;
    for s in 0..m.num_states() {
        if !w.is_terminal(m.state(s)) {
            continue;
        }
        count += 1;
        for a in 0..m.num_actions() {
            assert_eq!(m.reward(s, a), 0.0);
            for (x, _) in m.transition(s, a) {
                assert!(w.is_terminal(m.state(x)));
            }
        }
    }
    assert_eq!(count, w.layout.num_cells());
}

#[test]
fn mirrored_world_has_mirrored_values() {
    let left = r#"
        walls = [[0, 1]]
        penalties = [{ cell = [1, 2] }]
        [grid]
        width = 3
        height = 3
        [robot]
        start = [0, 0]
        [[agents]]
        start = [2, 2]
    "#;
    let right = left
        .replace("[0, 1]", "[2, 1]")
        .replace("[0, 0]", "[2, 0]")
        .replace("[2, 2]", "[0, 2]");
    let a = compile(&spec(left)).unwrap();
    let b = compile(&spec(&right)).unwrap();
    assert_eq!(a.mdp.num_states(), b.mdp.num_states());
    let mirror = |w: &CompiledWorld, to: &CompiledWorld, v: usize| {
        if v == w.layout.captured() {
            return to.layout.captured();
        }
        let [x, y] = w.layout.cell(v);
        to.layout.cell_id([2 - x, y]).unwrap()
    };
    let (va, _) = value_iteration(&a.mdp, TOL, DEFAULT_MAX_SWEEPS).unwrap();
    let (vb, _) = value_iteration(&b.mdp, TOL, DEFAULT_MAX_SWEEPS).unwrap();
    for s in 0..a.mdp.num_states() {
        let t: Vec<usize> = a.mdp.state(s).iter().map(|&v| mirror(&a, &b, v)).collect();
        let sb = b.mdp.state_id(&t).expect("mirror image was enumerated");
        assert!((va[s] - vb[sb]).abs() <= 2.0 * TOL);
        // E and W swap; N and S stay.
        for (act, mirrored) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
            assert!((a.mdp.reward(s, act) - b.mdp.reward(sb, mirrored)).abs() < 1e-12);
        }
    }
}

#[test]
fn penalty_on_entry_only_skips_repeat_charges() {
    let text = r#"
        penalties = [{ cell = [0, 0] }]
        [grid]
        width = 2
        height = 1
        [robot]
        start = [0, 0]
        slip_main = 1.0
        slip_side = 0.0
        [[agents]]
        start = [1, 0]
        dynamics = "static"
    "#;
    let per_step = compile(&spec(text)).unwrap();
    let mut entry = spec(text);
    entry.penalty_on_entry_only = true;
    let entry = compile(&entry).unwrap();
    let x0 = per_step.mdp.initial_state();
    assert_eq!(per_step.mdp.reward(x0, W), -20.0);
    assert_eq!(entry.mdp.reward(entry.mdp.initial_state(), W), 0.0);
}

#[test]
fn modes_come_from_the_config() {
    let w = mini();
    assert_eq!(w.modes.len(), 2);
    assert_eq!(w.modes[0].index(), 1);
    assert_eq!(w.modes[0].attended(), &[0, 1]);
    assert_eq!(w.modes[1].attended(), &[0, 2]);
    for m in &w.modes {
        assert_eq!(m.deactivation_reward(), 5.0);
    }
    assert_eq!(w.null_mode.attended(), &[0, 1, 2]);
    assert_eq!(w.mdp.actions(), &["N", "S", "E", "W"]);
}

#[test]
fn state_cap_is_enforced() {
    let mut s = spec(bundled_config("mini-3x3").unwrap());
    s.state_cap = 100;
    assert!(matches!(compile(&s), Err(Error::StateSpaceTooLarge { cap: 100, .. })));
}
