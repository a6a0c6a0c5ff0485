use super::{LinearProgram, Relation};
use crate::discretize::Combination;
use crate::graph::TripartiteGraph;
use crate::model::MecInstance;

/// Relaxed discretized problem with capacities shrunk by `(1 − α)`.
pub fn build_rdp(inst: &MecInstance, combos: &[Combination]) -> LinearProgram<f64> {
    let shrink = 1.0 - inst.alpha();
    combination_lp(inst, combos, shrink)
}

/// The "optimal policy" bound: the same program with capacities scaled by φ.
pub fn build_upper_bound_lp(inst: &MecInstance, combos: &[Combination], phi: f64) -> LinearProgram<f64> {
    combination_lp(inst, combos, phi)
}

fn combination_lp(inst: &MecInstance, combos: &[Combination], capacity_factor: f64) -> LinearProgram<f64> {
    let mut lp = LinearProgram::new(combos.iter().map(|c| c.saved_energy).collect());
    let mut task_rows = vec![Vec::new(); inst.num_tasks()];
    let mut ap_rows = vec![Vec::new(); inst.aps().len()];
    let mut server_rows = vec![Vec::new(); inst.servers().len()];
    for (v, c) in combos.iter().enumerate() {
        task_rows[c.task].push((v, 1.0));
        ap_rows[c.ap].push((v, c.bw_units as f64));
        server_rows[c.server].push((v, c.cpu_units as f64));
    }
    for row in task_rows.into_iter().filter(|r| !r.is_empty()) {
        lp.add_constraint(row, Relation::Le, 1.0);
    }
    for (j, row) in ap_rows.into_iter().enumerate() {
        if !row.is_empty() {
            let cap = capacity_factor * inst.aps()[j].bandwidth_units as f64;
            lp.add_constraint(row, Relation::Le, cap);
        }
    }
    for (k, row) in server_rows.into_iter().enumerate() {
        if !row.is_empty() {
            let cap = capacity_factor * inst.servers()[k].compute_units as f64;
            lp.add_constraint(row, Relation::Le, cap);
        }
    }
    lp
}

/// Fractional matching program over the hyperedges of `graph`.
pub fn build_3dm(graph: &TripartiteGraph) -> LinearProgram<f64> {
    let mut lp = LinearProgram::new(graph.edges.iter().map(|e| e.weight).collect());
    let mut rows = vec![Vec::new(); graph.num_nodes()];
    for (v, e) in graph.edges.iter().enumerate() {
        for node in graph.node_triple(e) {
            rows[node].push((v, 1.0));
        }
    }
    for row in rows.into_iter().filter(|r| !r.is_empty()) {
        lp.add_constraint(row, Relation::Le, 1.0);
    }
    lp
}
