#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use std::collections::HashMap;

use gma_core::bench::SplitMix64;
use gma_core::graph::FractionalEntry;
use gma_core::lp::{LinearProgram, Relation};
use gma_core::model::{AccessPoint, MecInstance, Server, SystemParams, Task};

pub fn rat(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn tiny_params(alpha: f64, p_max: u32) -> SystemParams {
    SystemParams {
        bandwidth_unit: 1e6,
        compute_unit: 1e9,
        power_unit: 0.1,
        max_power_units: p_max,
        alpha,
        noise_power: 8e-8,
        local_energy_coeff: 1e-27,
    }
}

/// Up to five tasks on one or two APs and servers with at most eight units
/// each, sized so one unit of bandwidth or compute takes tens of milliseconds.
pub fn tiny_instance(rng: &mut SplitMix64) -> MecInstance {
    let num_aps = rng.int_in(1, 2) as usize;
    let num_servers = rng.int_in(1, 2) as usize;
    let num_tasks = rng.int_in(1, 5) as usize;
    let alpha = [0.25, 1.0 / 3.0, 0.5][rng.int_in(0, 2) as usize];
    let p_max = rng.int_in(2, 4) as u32;
    let aps = (0..num_aps)
        .map(|id| AccessPoint {
            id,
            bandwidth_units: rng.int_in(2, 8) as u32,
        })
        .collect();
    let servers = (0..num_servers)
        .map(|id| Server {
            id,
            compute_units: rng.int_in(2, 8) as u32,
        })
        .collect();
    let delay = (0..num_aps)
        .map(|j| {
            (0..num_servers)
                .map(|k| if j == k { 0.0 } else { rng.uniform_in(0.001, 0.005) })
                .collect()
        })
        .collect();
    let tasks = (0..num_tasks)
        .map(|id| {
            let mut aps: Vec<usize> = (0..num_aps).filter(|_| rng.uniform() < 0.7).collect();
            if aps.is_empty() {
                aps.push(rng.int_in(0, num_aps as u64 - 1) as usize);
            }
            Task {
                id,
                input_size: rng.uniform_in(5e4, 1.5e5),
                cycles_per_bit: 150.0,
                local_cpu: rng.uniform_in(1e9, 2e9),
                deadline: rng.uniform_in(0.02, 0.08),
                gains: vec![1e-5; aps.len()],
                accessible_aps: aps,
            }
        })
        .collect();
    MecInstance::new(tasks, aps, servers, delay, tiny_params(alpha, p_max)).expect("valid tiny instance")
}

/// Random hypergraph over three disjoint node groups of `side` nodes each.
pub fn random_triples(rng: &mut SplitMix64, edges: usize, side: usize) -> Vec<[usize; 3]> {
    (0..edges)
        .map(|_| {
            let s = side as u64 - 1;
            [
                rng.int_in(0, s) as usize,
                side + rng.int_in(0, s) as usize,
                2 * side + rng.int_in(0, s) as usize,
            ]
        })
        .collect()
}

/// Maximum-weight matching by trying every subset.
pub fn exhaustive_matching(triples: &[[usize; 3]], weights: &[f64]) -> f64 {
    let n = triples.len();
    let mut best = 0.0f64;
    'subsets: for mask in 0u32..(1 << n) {
        let mut used = Vec::new();
        let mut w = 0.0;
        for e in (0..n).filter(|e| mask >> e & 1 == 1) {
            for v in triples[e] {
                if used.contains(&v) {
                    continue 'subsets;
                }
                used.push(v);
            }
            w += weights[e];
        }
        best = best.max(w);
    }
    best
}

/// The fractional matching program: one variable per triple, every node
/// covered at most once.
pub fn matching_lp(triples: &[[usize; 3]], weights: &[f64]) -> LinearProgram<f64> {
    let mut lp = LinearProgram::new(weights.to_vec());
    let nodes = triples.iter().flatten().copied().max().map_or(0, |m| m + 1);
    for v in 0..nodes {
        let row: Vec<(usize, f64)> = (0..triples.len())
            .filter(|&e| triples[e].contains(&v))
            .map(|e| (e, 1.0))
            .collect();
        if !row.is_empty() {
            lp.add_constraint(row, Relation::Le, 1.0);
        }
    }
    lp
}

/// Exact optimum of `lp` by visiting every basic solution: each choice of
/// `n` tight rows among the constraints and x ≥ 0 that determines a unique
/// point. `None` when no vertex is feasible.
pub fn vertex_enumeration(lp: &LinearProgram<BigRational>) -> Option<BigRational> {
    let n = lp.num_vars();
    // every row as a dense equation a·x = b
    let mut rows: Vec<(Vec<BigRational>, BigRational)> = lp
        .constraints()
        .iter()
        .map(|c| {
            let mut a = vec![BigRational::zero(); n];
            for (v, coef) in &c.coeffs {
                a[*v] = coef.clone();
            }
            (a, c.rhs.clone())
        })
        .collect();
    for j in 0..n {
        let mut a = vec![BigRational::zero(); n];
        a[j] = BigRational::one();
        rows.push((a, BigRational::zero()));
    }
    let feasible = |x: &[BigRational]| {
        x.iter().all(|v| !v.is_negative())
            && lp.constraints().iter().all(|c| {
                let lhs = c
                    .coeffs
                    .iter()
                    .fold(BigRational::zero(), |acc, (v, a)| acc + a * &x[*v]);
                match c.relation {
                    Relation::Le => lhs <= c.rhs,
                    Relation::Ge => lhs >= c.rhs,
                    Relation::Eq => lhs == c.rhs,
                }
            })
    };
    let mut best: Option<BigRational> = None;
    for subset in combinations(rows.len(), n) {
        let system: Vec<_> = subset.iter().map(|&r| rows[r].clone()).collect();
        let Some(x) = solve_square(system) else { continue };
        if feasible(&x) {
            let v = lp.evaluate(&x);
            if best.as_ref().map_or(true, |b| v > *b) {
                best = Some(v);
            }
        }
    }
    best
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Gauss-Jordan over the rationals; `None` for a singular system.
fn solve_square(mut m: Vec<(Vec<BigRational>, BigRational)>) -> Option<Vec<BigRational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r].0[col].is_zero())?;
        m.swap(col, piv);
        let (pa, pb) = m[col].clone();
        for r in 0..n {
            if r != col && !m[r].0[col].is_zero() {
                let f = &m[r].0[col] / &pa[col];
                for c in col..n {
                    let d = &f * &pa[c];
                    m[r].0[c] -= d;
                }
                let d = &f * &pb;
                m[r].1 -= d;
            }
        }
    }
    Some((0..n).map(|i| &m[i].1 / &m[i].0[i]).collect())
}

/// Random fractional x̃ for `resources` resources that satisfies the relaxed
/// program's rows: each task's mass ≤ 1 and Σ x̃·B ≤ (1−α)·capacity.
pub fn random_projection(rng: &mut SplitMix64) -> (Vec<FractionalEntry>, Vec<u32>, usize, usize) {
    let resources = rng.int_in(1, 3) as usize;
    let tasks = rng.int_in(1, 12) as usize;
    let alpha = [1.0 / 16.0, 1.0 / 12.0, 1.0 / 6.0, 0.5][rng.int_in(0, 3) as usize];
    let caps: Vec<u32> = (0..resources).map(|_| rng.int_in(8, 120) as u32).collect();
    let levels: Vec<Vec<u32>> = caps
        .iter()
        .map(|&c| {
            let top = ((alpha * c as f64).floor() as u32).max(1);
            let mut l: Vec<u32> = (0..rng.int_in(1, 5)).map(|_| rng.int_in(1, top as u64) as u32).collect();
            l.push(top);
            l.sort_unstable();
            l.dedup();
            l
        })
        .collect();
    let mut entries = Vec::new();
    for task in 0..tasks {
        let mut mass = rng.uniform();
        for _ in 0..rng.int_in(1, 3) {
            let resource = rng.int_in(0, resources as u64 - 1) as usize;
            let level = rng.int_in(0, levels[resource].len() as u64 - 1) as usize;
            let value = if rng.uniform() < 0.3 { mass } else { mass * rng.uniform() };
            mass -= value;
            entries.push(FractionalEntry {
                task,
                resource,
                level,
                units: levels[resource][level],
                value,
            });
        }
    }
    // merge repeats, then scale each resource into its shrunk capacity
    let mut merged: HashMap<(usize, usize, usize), FractionalEntry> = HashMap::new();
    for e in entries {
        merged
            .entry((e.resource, e.task, e.level))
            .and_modify(|m| m.value += e.value)
            .or_insert(e);
    }
    let mut entries: Vec<FractionalEntry> = merged.into_values().collect();
    entries.sort_by_key(|e| (e.resource, e.task, e.level));
    for (r, &cap) in caps.iter().enumerate() {
        let load: f64 = entries.iter().filter(|e| e.resource == r).map(|e| e.value * e.units as f64).sum();
        let room = (1.0 - alpha) * cap as f64;
        if load > room {
            for e in entries.iter_mut().filter(|e| e.resource == r) {
                e.value *= room / load;
            }
        }
    }
    (entries, caps, tasks, resources)
}
