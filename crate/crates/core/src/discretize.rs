//! Logarithmic allocation levels and enumeration of feasible
//! task/AP/level/server/level combinations.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::model::{alpha_cap, MecInstance};

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum DiscretizationError {
    #[error("discretization constant must exceed 1, got {0}")]
    BadPhi(f64),
}

/// Allowed per-task allocations on one AP or server, in units.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelSet {
    /// Strictly increasing, each ≥ 1, ending at ⌊α·capacity⌋.
    pub levels: Vec<u32>,
    /// Number of geometric indices ⌊φ^m⌋ generated before deduplication.
    pub raw_index_count: u32,
}

impl LevelSet {
    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }
}

pub fn build_levels(capacity: u32, alpha: f64, phi: f64) -> Result<LevelSet, DiscretizationError> {
    if !(phi > 1.0) || !phi.is_finite() {
        return Err(DiscretizationError::BadPhi(phi));
    }
    let top = alpha_cap(capacity, alpha);
    if top < 1 {
        return Ok(LevelSet {
            levels: Vec::new(),
            raw_index_count: 0,
        });
    }
    let bound = alpha * capacity as f64;
    let mut levels = Vec::new();
    let mut raw = 0u32;
    let mut power = 1.0f64;
    // indices m with φ^m < α·capacity, i.e. m < ⌈log_φ(α·capacity)⌉
    while power < bound - 1e-9 {
        let level = power.floor() as u32;
        if levels.last() != Some(&level) && level < top {
            levels.push(level);
        }
        raw += 1;
        power *= phi;
    }
    if levels.last() != Some(&top) {
        levels.push(top);
    }
    Ok(LevelSet {
        levels,
        raw_index_count: raw,
    })
}

/// A feasible ⟨task, AP, bandwidth level, server, compute level⟩ tuple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Combination {
    pub task: usize,
    pub ap: usize,
    pub bw_level: usize,
    pub server: usize,
    pub cpu_level: usize,
    pub bw_units: u32,
    pub cpu_units: u32,
    /// Upload time left after forwarding and processing, seconds.
    pub offload_budget: f64,
    pub power_units: u32,
    /// Joules saved relative to local execution.
    pub saved_energy: f64,
}

impl Combination {
    pub fn key(&self) -> (usize, usize, usize, usize, usize) {
        (self.task, self.ap, self.bw_level, self.server, self.cpu_level)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Discretization {
    pub phi: f64,
    pub ap_levels: Vec<LevelSet>,
    pub server_levels: Vec<LevelSet>,
    /// Sorted by (task, ap, bw_level, server, cpu_level).
    pub combos: Vec<Combination>,
}

pub fn discretize(inst: &MecInstance, phi: f64) -> Result<Discretization, DiscretizationError> {
    let alpha = inst.alpha();
    let ap_levels = inst
        .aps()
        .iter()
        .map(|a| build_levels(a.bandwidth_units, alpha, phi))
        .collect::<Result<Vec<_>, _>>()?;
    let server_levels = inst
        .servers()
        .iter()
        .map(|s| build_levels(s.compute_units, alpha, phi))
        .collect::<Result<Vec<_>, _>>()?;

    let per_task: Vec<Vec<Combination>> = (0..inst.num_tasks())
        .into_par_iter()
        .map(|i| task_combinations(inst, i, &ap_levels, &server_levels))
        .collect();
    Ok(Discretization {
        phi,
        ap_levels,
        server_levels,
        combos: per_task.into_iter().flatten().collect(),
    })
}

pub fn enumerate_combinations(inst: &MecInstance, phi: f64) -> Result<Vec<Combination>, DiscretizationError> {
    Ok(discretize(inst, phi)?.combos)
}

fn task_combinations(
    inst: &MecInstance,
    task: usize,
    ap_levels: &[LevelSet],
    server_levels: &[LevelSet],
) -> Vec<Combination> {
    let mut out = Vec::new();
    for &ap in &inst.task(task).accessible_aps {
        for (m, &bw) in ap_levels[ap].levels.iter().enumerate() {
            for (server, levels) in server_levels.iter().enumerate() {
                for (n, &cpu) in levels.levels.iter().enumerate() {
                    let Some(eval) = inst.evaluate_placement(task, ap, server, bw, cpu) else {
                        continue;
                    };
                    if eval.saved_energy > 0.0 {
                        out.push(Combination {
                            task,
                            ap,
                            bw_level: m,
                            server,
                            cpu_level: n,
                            bw_units: bw,
                            cpu_units: cpu,
                            offload_budget: eval.budget,
                            power_units: eval.power_units,
                            saved_energy: eval.saved_energy,
                        });
                    }
                }
            }
        }
    }
    out
}

/// CSV dump of combinations: `i,j,m,k,n,B,C,t_budget,p,E`.
pub fn combinations_csv(combos: &[Combination]) -> String {
    let mut out = String::from("i,j,m,k,n,B,C,t_budget,p,E\n");
    for c in combos {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{:e},{},{:e}\n",
            c.task, c.ap, c.bw_level, c.server, c.cpu_level, c.bw_units, c.cpu_units, c.offload_budget,
            c.power_units, c.saved_energy
        ));
    }
    out
}
