use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::lp::{solve_with_limit, LinearProgram, LpError, Relation};
use crate::model::{Assignment, MecInstance, Placement};

/// Grid and effort settings. Intervals are in allocation units; the search
/// stops once `pivot_budget` simplex pivots are spent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LdmConfig {
    pub bw_interval_units: u32,
    pub cpu_interval_units: u32,
    pub pivot_budget: u64,
}

impl Default for LdmConfig {
    fn default() -> Self {
        LdmConfig {
            bw_interval_units: 1,
            cpu_interval_units: 1,
            pivot_budget: 10_000,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LdmReport {
    pub objective: f64,
    pub columns: usize,
    pub nodes: u64,
    pub pivots: u64,
    pub proven_optimal: bool,
}

#[derive(Debug, Clone, Copy)]
struct Column {
    task: usize,
    placement: Placement,
    energy: f64,
}

/// Equal-interval integer program solved by LP-based branch and bound.
///
/// Columns are (task, AP, server, bandwidth, power) with the least compute
/// on the grid that meets the deadline at that power; a column with more
/// compute at the same power is dominated.
pub fn ldm(inst: &MecInstance, cfg: &LdmConfig) -> (Assignment, LdmReport) {
    assert!(cfg.bw_interval_units > 0 && cfg.cpu_interval_units > 0, "intervals must be positive");
    let columns = build_columns(inst, cfg);
    let mut report = LdmReport {
        columns: columns.len(),
        ..LdmReport::default()
    };
    let mut by_energy: Vec<usize> = (0..columns.len()).collect();
    by_energy.sort_by(|&a, &b| columns[b].energy.total_cmp(&columns[a].energy));

    let bb = BranchAndBound {
        inst,
        columns: &columns,
        by_energy: &by_energy,
    };
    let (best, proven) = bb.run(cfg.pivot_budget, &mut report);
    let mut placements: Vec<Option<Placement>> = vec![None; inst.num_tasks()];
    for &v in &best {
        placements[columns[v].task] = Some(columns[v].placement);
    }
    let assignment = Assignment::from_placements(inst, &placements);
    report.objective = assignment.objective;
    report.proven_optimal = proven;
    (assignment, report)
}

fn grid(cap: u32, step: u32) -> impl Iterator<Item = u32> {
    (1..=cap / step).map(move |m| m * step)
}

fn build_columns(inst: &MecInstance, cfg: &LdmConfig) -> Vec<Column> {
    let p_max = inst.params().max_power_units;
    let mut out = Vec::new();
    for i in 0..inst.num_tasks() {
        let task = inst.task(i);
        for &j in &task.accessible_aps {
            for k in 0..inst.servers().len() {
                let c_cap = inst.server_alpha_cap(k);
                let c_grid: Vec<u32> = grid(c_cap, cfg.cpu_interval_units).collect();
                for b in grid(inst.ap_alpha_cap(j), cfg.bw_interval_units) {
                    let mut last_c = u32::MAX;
                    let mut last_p = 0;
                    for p in 1..=p_max {
                        let room = task.deadline - inst.delay(j, k) - inst.offload_time(i, j, b, p);
                        if !(room > 0.0) {
                            continue;
                        }
                        let need = task.cycles() / (room * inst.params().compute_unit);
                        // first grid point at or above the requirement, then
                        // confirm with the exact evaluation
                        let start = c_grid.partition_point(|&c| (c as f64) < need * (1.0 - 1e-9));
                        let Some(eval_c) = c_grid[start..].iter().copied().take(2).find(|&c| {
                            inst.evaluate_placement(i, j, k, b, c).is_some_and(|e| e.power_units <= p)
                        }) else {
                            continue;
                        };
                        if eval_c >= last_c {
                            continue;
                        }
                        let eval = inst.evaluate_placement(i, j, k, b, eval_c).expect("checked above");
                        if eval.power_units == last_p {
                            continue;
                        }
                        last_c = eval_c;
                        last_p = eval.power_units;
                        if eval.saved_energy > 0.0 {
                            out.push(Column {
                                task: i,
                                placement: Placement {
                                    ap: j,
                                    server: k,
                                    bw_units: b,
                                    cpu_units: eval_c,
                                    power_units: eval.power_units,
                                },
                                energy: eval.saved_energy,
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone)]
struct Node {
    fixed: Vec<usize>,
    excluded: Vec<usize>,
    /// Parent LP bound.
    bound: f64,
    seq: u64,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // max-heap on bound; older nodes first on ties
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

struct BranchAndBound<'a> {
    inst: &'a MecInstance,
    columns: &'a [Column],
    by_energy: &'a [usize],
}

struct Residual {
    task_done: Vec<bool>,
    ap_free: Vec<u32>,
    server_free: Vec<u32>,
    value: f64,
}

impl BranchAndBound<'_> {
    fn residual(&self, fixed: &[usize]) -> Option<Residual> {
        let mut r = Residual {
            task_done: vec![false; self.inst.num_tasks()],
            ap_free: self.inst.aps().iter().map(|a| a.bandwidth_units).collect(),
            server_free: self.inst.servers().iter().map(|s| s.compute_units).collect(),
            value: 0.0,
        };
        for &v in fixed {
            if !r.take(&self.columns[v]) {
                return None;
            }
        }
        Some(r)
    }

    /// Returns the incumbent column set and whether the search completed.
    fn run(&self, budget: u64, report: &mut LdmReport) -> (Vec<usize>, bool) {
        let mut best: Vec<usize> = Vec::new();
        let mut best_value = 0.0f64;
        let mut seq = 0u64;
        let mut dive: Vec<Node> = vec![Node {
            fixed: Vec::new(),
            excluded: Vec::new(),
            bound: f64::INFINITY,
            seq,
        }];
        let mut heap: BinaryHeap<Node> = BinaryHeap::new();
        // depth-first along the x = 1 branches until the first leaf, then best-first
        let mut diving = true;

        loop {
            let node = match dive.pop() {
                Some(n) => n,
                None => {
                    diving = false;
                    match heap.pop() {
                        Some(n) => n,
                        None => return (best, true),
                    }
                }
            };
            if node.bound <= best_value * (1.0 + 1e-9) {
                continue;
            }
            let Some(res) = self.residual(&node.fixed) else {
                continue;
            };
            let (lp, map) = self.node_lp(&res, &node.excluded);
            let remaining = budget - report.pivots;
            if remaining == 0 {
                return (best, false);
            }
            let sol = match solve_with_limit(&lp, remaining) {
                Ok(s) => s,
                Err(LpError::IterationLimit(_)) => {
                    report.pivots = budget;
                    return (best, false);
                }
                // the all-zero point is always feasible, so only numerical
                // trouble lands here; drop the node
                Err(_) => continue,
            };
            report.pivots += sol.pivots;
            report.nodes += 1;
            let bound = res.value + sol.objective;

            // incumbent from rounding down and filling greedily
            let mut sel = node.fixed.clone();
            sel.extend(map.iter().zip(&sol.values).filter(|(_, &x)| x >= 1.0 - 1e-6).map(|(&v, _)| v));
            if let Some((cand, value)) = self.complete(&sel, &node.excluded) {
                if value > best_value * (1.0 + 1e-12) {
                    best_value = value;
                    best = cand;
                }
            }
            if bound <= best_value * (1.0 + 1e-9) {
                continue;
            }
            let frac = map
                .iter()
                .zip(&sol.values)
                .filter(|(_, &x)| x > 1e-6 && x < 1.0 - 1e-6)
                .max_by(|a, b| a.1.total_cmp(b.1).then_with(|| b.0.cmp(a.0)));
            let Some((&v, _)) = frac else {
                // integral: already recorded as the rounded incumbent
                continue;
            };
            let mut up = node.fixed.clone();
            up.push(v);
            let mut down = node.excluded.clone();
            down.push(v);
            let one = Node {
                fixed: up,
                excluded: node.excluded.clone(),
                bound,
                seq: seq + 1,
            };
            let zero = Node {
                fixed: node.fixed,
                excluded: down,
                bound,
                seq: seq + 2,
            };
            seq += 2;
            if diving {
                dive.push(one);
                heap.push(zero);
            } else {
                heap.push(one);
                heap.push(zero);
            }
        }
    }

    fn node_lp(&self, res: &Residual, excluded: &[usize]) -> (LinearProgram<f64>, Vec<usize>) {
        let map: Vec<usize> = (0..self.columns.len())
            .filter(|&v| !excluded.contains(&v) && res.fits(&self.columns[v]))
            .collect();
        let mut lp = LinearProgram::new(map.iter().map(|&v| self.columns[v].energy).collect());
        let n = self.inst.num_tasks();
        let mut task_rows = vec![Vec::new(); n];
        let mut ap_rows = vec![Vec::new(); self.inst.aps().len()];
        let mut server_rows = vec![Vec::new(); self.inst.servers().len()];
        for (x, &v) in map.iter().enumerate() {
            let c = &self.columns[v];
            task_rows[c.task].push((x, 1.0));
            ap_rows[c.placement.ap].push((x, c.placement.bw_units as f64));
            server_rows[c.placement.server].push((x, c.placement.cpu_units as f64));
        }
        for row in task_rows.into_iter().filter(|r| !r.is_empty()) {
            lp.add_constraint(row, Relation::Le, 1.0);
        }
        for (j, row) in ap_rows.into_iter().enumerate() {
            if !row.is_empty() {
                lp.add_constraint(row, Relation::Le, res.ap_free[j] as f64);
            }
        }
        for (k, row) in server_rows.into_iter().enumerate() {
            if !row.is_empty() {
                lp.add_constraint(row, Relation::Le, res.server_free[k] as f64);
            }
        }
        (lp, map)
    }

    /// Takes `sel` as far as it stays feasible, then adds the most valuable
    /// remaining columns that fit.
    fn complete(&self, sel: &[usize], excluded: &[usize]) -> Option<(Vec<usize>, f64)> {
        let mut res = self.residual(&[])?;
        let mut out = Vec::new();
        for &v in sel {
            if res.take(&self.columns[v]) {
                out.push(v);
            }
        }
        for &v in self.by_energy {
            if !excluded.contains(&v) && res.take(&self.columns[v]) {
                out.push(v);
            }
        }
        Some((out, res.value))
    }
}

impl Residual {
    fn fits(&self, c: &Column) -> bool {
        !self.task_done[c.task]
            && c.placement.bw_units <= self.ap_free[c.placement.ap]
            && c.placement.cpu_units <= self.server_free[c.placement.server]
    }

    fn take(&mut self, c: &Column) -> bool {
        if !self.fits(c) {
            return false;
        }
        self.task_done[c.task] = true;
        self.ap_free[c.placement.ap] -= c.placement.bw_units;
        self.server_free[c.placement.server] -= c.placement.cpu_units;
        self.value += c.energy;
        true
    }
}
