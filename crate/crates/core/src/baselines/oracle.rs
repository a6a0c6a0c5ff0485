use thiserror::Error;

use crate::model::{Assignment, MecInstance, Placement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance exceeds oracle guards: {0}")]
    TooLarge(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleGuards {
    pub max_tasks: usize,
    pub max_units: u32,
    pub max_power_units: u32,
}

impl Default for OracleGuards {
    fn default() -> Self {
        OracleGuards {
            max_tasks: 6,
            max_units: 8,
            max_power_units: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub assignment: Assignment,
    pub optimum: f64,
    /// Search nodes visited.
    pub explored: u64,
    pub proven_optimal: bool,
}

#[derive(Debug, Clone, Copy)]
struct Choice {
    placement: Placement,
    energy: f64,
}

/// Exact optimum over every integral allocation within the α bounds, each
/// with its minimal integral power.
///
/// Per (task, AP, server, bandwidth) only compute levels that lower the
/// required power are kept: a larger compute share at the same power saves
/// nothing and uses more capacity.
pub fn brute_force_opt(inst: &MecInstance, guards: OracleGuards) -> Result<OracleResult, OracleError> {
    check_guards(inst, guards)?;
    let options: Vec<Vec<Choice>> = (0..inst.num_tasks()).map(|i| task_options(inst, i)).collect();
    // suffix sums of each task's best energy, for bound pruning
    let mut tail = vec![0.0; options.len() + 1];
    for i in (0..options.len()).rev() {
        let best = options[i].iter().map(|o| o.energy).fold(0.0, f64::max);
        tail[i] = tail[i + 1] + best;
    }
    let mut search = Search {
        options: &options,
        tail: &tail,
        ap_free: inst.aps().iter().map(|a| a.bandwidth_units).collect(),
        server_free: inst.servers().iter().map(|s| s.compute_units).collect(),
        current: vec![None; options.len()],
        best: vec![None; options.len()],
        best_value: 0.0,
        explored: 0,
    };
    search.run(0, 0.0);
    let assignment = Assignment::from_placements(inst, &search.best);
    Ok(OracleResult {
        optimum: assignment.objective,
        assignment,
        explored: search.explored,
        proven_optimal: true,
    })
}

fn check_guards(inst: &MecInstance, g: OracleGuards) -> Result<(), OracleError> {
    if inst.num_tasks() > g.max_tasks {
        return Err(OracleError::TooLarge(format!("{} tasks > {}", inst.num_tasks(), g.max_tasks)));
    }
    if let Some(a) = inst.aps().iter().find(|a| a.bandwidth_units > g.max_units) {
        return Err(OracleError::TooLarge(format!("AP {} has {} units > {}", a.id, a.bandwidth_units, g.max_units)));
    }
    if let Some(s) = inst.servers().iter().find(|s| s.compute_units > g.max_units) {
        return Err(OracleError::TooLarge(format!("server {} has {} units > {}", s.id, s.compute_units, g.max_units)));
    }
    if inst.params().max_power_units > g.max_power_units {
        return Err(OracleError::TooLarge(format!(
            "p_max {} > {}",
            inst.params().max_power_units,
            g.max_power_units
        )));
    }
    Ok(())
}

fn task_options(inst: &MecInstance, i: usize) -> Vec<Choice> {
    let mut out = Vec::new();
    for &j in &inst.task(i).accessible_aps {
        for k in 0..inst.servers().len() {
            for b in 1..=inst.ap_alpha_cap(j) {
                let mut last_power = u32::MAX;
                for c in 1..=inst.server_alpha_cap(k) {
                    let Some(eval) = inst.evaluate_placement(i, j, k, b, c) else {
                        continue;
                    };
                    if eval.power_units >= last_power {
                        continue;
                    }
                    last_power = eval.power_units;
                    if eval.saved_energy > 0.0 {
                        out.push(Choice {
                            placement: Placement {
                                ap: j,
                                server: k,
                                bw_units: b,
                                cpu_units: c,
                                power_units: eval.power_units,
                            },
                            energy: eval.saved_energy,
                        });
                    }
                }
            }
        }
    }
    out
}

struct Search<'a> {
    options: &'a [Vec<Choice>],
    tail: &'a [f64],
    ap_free: Vec<u32>,
    server_free: Vec<u32>,
    current: Vec<Option<Placement>>,
    best: Vec<Option<Placement>>,
    best_value: f64,
    explored: u64,
}

impl Search<'_> {
    fn run(&mut self, i: usize, value: f64) {
        self.explored += 1;
        if i == self.options.len() {
            // strict improvement keeps the first optimum in search order
            if value > self.best_value * (1.0 + 1e-12) {
                self.best_value = value;
                self.best.clone_from(&self.current);
            }
            return;
        }
        if value + self.tail[i] <= self.best_value * (1.0 + 1e-12) {
            return;
        }
        for o in &self.options[i] {
            let p = o.placement;
            if p.bw_units > self.ap_free[p.ap] || p.cpu_units > self.server_free[p.server] {
                continue;
            }
            self.ap_free[p.ap] -= p.bw_units;
            self.server_free[p.server] -= p.cpu_units;
            self.current[i] = Some(p);
            self.run(i + 1, value + o.energy);
            self.current[i] = None;
            self.ap_free[p.ap] += p.bw_units;
            self.server_free[p.server] += p.cpu_units;
        }
        self.run(i + 1, value);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{fixtures, validate_assignment};

    #[test]
    fn empty_taskset() {
        let inst = MecInstance::new(
            vec![],
            vec![crate::model::AccessPoint { id: 0, bandwidth_units: 4 }],
            vec![crate::model::Server { id: 0, compute_units: 4 }],
            vec![vec![0.0]],
            fixtures::params(),
        )
        .unwrap();
        let r = brute_force_opt(&inst, OracleGuards::default()).unwrap();
        assert_eq!(r.optimum, 0.0);
        assert!(r.proven_optimal);
    }

    #[test]
    fn single_task_takes_best_option() {
        let inst = fixtures::single(10.0, 8, 8, fixtures::params());
        let r = brute_force_opt(&inst, OracleGuards::default()).unwrap();
        let best = inst.evaluate_placement(0, 0, 0, 4, 1).unwrap().saved_energy;
        assert!((r.optimum - best).abs() < 1e-15);
        assert!(validate_assignment(&inst, &r.assignment).is_feasible());
    }

    #[test]
    fn guards() {
        let big = fixtures::single(10.0, 9, 8, fixtures::params());
        assert!(matches!(brute_force_opt(&big, OracleGuards::default()), Err(OracleError::TooLarge(_))));
    }
}
