//! The graph-matching approximation end to end: discretize, relax, build the
//! hypergraph, round, and turn matched hyperedges into placements.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::discretize::{discretize, DiscretizationError};
use crate::graph::{bg_construct, project, wtg_construct};
use crate::lp::{build_3dm, build_rdp, solve, LpError};
use crate::matching::{kdma, is_matching, KdmaConfig, MatchingError};
use crate::model::{Assignment, MecInstance, Placement};

#[derive(Debug, Error, PartialEq)]
pub enum GmaError {
    #[error("epsilon must be positive and finite, got {0}")]
    BadEpsilon(f64),
    #[error(transparent)]
    Discretization(#[from] DiscretizationError),
    #[error("relaxed program: {0}")]
    Relaxation(LpError),
    #[error("matching program: {0}")]
    MatchingLp(LpError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmaConfig {
    /// Discretization loss ε; levels grow by φ = 1 + ε/2.
    pub epsilon: f64,
    /// Take the least-loaded hyperedge when the elimination stalls instead of failing.
    pub allow_fallback: bool,
}

impl Default for GmaConfig {
    fn default() -> Self {
        GmaConfig {
            epsilon: 0.2,
            allow_fallback: true,
        }
    }
}

impl GmaConfig {
    pub fn phi(&self) -> f64 {
        1.0 + self.epsilon / 2.0
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct StageTimes {
    pub discretize_ms: f64,
    pub relaxation_ms: f64,
    pub graphs_ms: f64,
    pub matching_lp_ms: f64,
    pub rounding_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GmaReport {
    /// Realized saved energy with final integral power, joules.
    pub objective: f64,
    /// Σ u(e) over matched hyperedges.
    pub matching_weight: f64,
    pub opt_rdp: f64,
    pub opt_3dm: f64,
    /// (1−α)/(2+ε).
    pub bound_ratio: f64,
    pub accepted_tasks: usize,
    pub combinations: usize,
    pub hyperedges: usize,
    /// Simplex pivots over both programs.
    pub pivots: u64,
    pub fallbacks: usize,
    pub stage_times: StageTimes,
}

impl GmaReport {
    fn empty(alpha: f64, epsilon: f64) -> Self {
        GmaReport {
            objective: 0.0,
            matching_weight: 0.0,
            opt_rdp: 0.0,
            opt_3dm: 0.0,
            bound_ratio: theorem_bound(alpha, epsilon),
            accepted_tasks: 0,
            combinations: 0,
            hyperedges: 0,
            pivots: 0,
            fallbacks: 0,
            stage_times: StageTimes::default(),
        }
    }

    /// OBJ ≥ ½·OPT_3DM and OPT_3DM ≥ OPT_RDP, each to `rtol` relative.
    pub fn certificate_holds(&self, rtol: f64) -> bool {
        let slack = |x: f64| rtol * x.abs().max(1.0);
        self.objective >= self.matching_weight - slack(self.matching_weight)
            && self.matching_weight >= 0.5 * self.opt_3dm - slack(self.opt_3dm)
            && self.opt_3dm >= self.opt_rdp - slack(self.opt_rdp)
    }
}

/// Worst-case guarantee (1−α)/(2+ε) relative to the optimum.
pub fn theorem_bound(alpha: f64, epsilon: f64) -> f64 {
    (1.0 - alpha) / (2.0 + epsilon)
}

fn ms_since(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

pub fn gma(inst: &MecInstance, cfg: &GmaConfig) -> Result<(Assignment, GmaReport), GmaError> {
    if !(cfg.epsilon > 0.0) || !cfg.epsilon.is_finite() {
        return Err(GmaError::BadEpsilon(cfg.epsilon));
    }
    let mut report = GmaReport::empty(inst.alpha(), cfg.epsilon);
    let n = inst.num_tasks();

    let t = Instant::now();
    let disc = discretize(inst, cfg.phi())?;
    report.stage_times.discretize_ms = ms_since(t);
    report.combinations = disc.combos.len();
    if disc.combos.is_empty() {
        return Ok((Assignment::empty(n), report));
    }

    let t = Instant::now();
    let rdp = solve(&build_rdp(inst, &disc.combos)).map_err(GmaError::Relaxation)?;
    report.stage_times.relaxation_ms = ms_since(t);
    report.opt_rdp = rdp.objective;
    report.pivots += rdp.pivots;

    let t = Instant::now();
    let proj = project(&rdp.values, &disc.combos);
    let bg_x = bg_construct(&proj.x, n, inst.aps().len());
    let bg_y = bg_construct(&proj.y, n, inst.servers().len());
    let graph = wtg_construct(&rdp.values, &disc.combos, &bg_x, &bg_y);
    report.stage_times.graphs_ms = ms_since(t);
    report.hyperedges = graph.edges.len();

    let t = Instant::now();
    let frac = solve(&build_3dm(&graph)).map_err(GmaError::MatchingLp)?;
    report.stage_times.matching_lp_ms = ms_since(t);
    report.opt_3dm = frac.objective;
    report.pivots += frac.pivots;

    let t = Instant::now();
    let outcome = kdma(&graph, &frac, KdmaConfig { allow_fallback: cfg.allow_fallback })?;
    debug_assert!(is_matching(&graph.triples(), &outcome.matching.selected));
    report.fallbacks = outcome.fallbacks;
    report.matching_weight = outcome.matching.weight;

    let mut placements: Vec<Option<Placement>> = vec![None; n];
    for &id in &outcome.matching.selected {
        let e = &graph.edges[id];
        let (ap, server) = (graph.ap_of(e), graph.server_of(e));
        // b(e), c(e) dominate the defining combination's levels, so this
        // always succeeds and never needs more power
        let eval = inst
            .evaluate_placement(e.task, ap, server, e.bw_units, e.cpu_units)
            .expect("hyperedge allocations meet the deadline");
        placements[e.task] = Some(Placement {
            ap,
            server,
            bw_units: e.bw_units,
            cpu_units: e.cpu_units,
            power_units: eval.power_units,
        });
    }
    let assignment = Assignment::from_placements(inst, &placements);
    report.stage_times.rounding_ms = ms_since(t);
    report.objective = assignment.objective;
    report.accepted_tasks = assignment.offloaded_count();
    Ok((assignment, report))
}

/// Fraction of tasks that are offloaded.
pub fn acceptance_ratio(a: &Assignment, inst: &MecInstance) -> f64 {
    if inst.num_tasks() == 0 {
        return 0.0;
    }
    a.offloaded_count() as f64 / inst.num_tasks() as f64
}
