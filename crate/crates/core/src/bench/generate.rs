use serde::{Deserialize, Serialize};

use super::randfixedsum::randfixedsum;
use super::rng::SplitMix64;
use crate::model::{offload_rate, AccessPoint, MecInstance, Server, SystemParams, Task, DEFAULT_RHO};

/// Physical settings of the synthetic system. Allocations are counted in
/// units of 1 MHz, 50 Mcycles/s and 0.01 W.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemSpec {
    pub num_aps: usize,
    pub num_servers: usize,
    /// Each AP draws one of these capacities, in bandwidth units.
    pub ap_capacities: Vec<u32>,
    /// Server capacity range in compute units, inclusive.
    pub server_capacity: (u32, u32),
    /// Backhaul delay range between non-co-located pairs, seconds.
    pub delay_range: (f64, f64),
    pub bandwidth_unit: f64,
    pub compute_unit: f64,
    pub power_unit: f64,
    pub max_power_units: u32,
    pub gain_db: f64,
    pub noise_power: f64,
    pub input_bits: (f64, f64),
    pub cycles_per_bit: f64,
    pub local_cpu: (f64, f64),
    /// Mean and standard deviation of the deadline slack term, seconds.
    pub slack: (f64, f64),
    /// Mean and standard deviation of per-AP popularity weights.
    pub ap_weight: (f64, f64),
}

impl Default for SystemSpec {
    fn default() -> Self {
        SystemSpec {
            num_aps: 4,
            num_servers: 5,
            ap_capacities: vec![80, 120],
            server_capacity: (400, 600),
            delay_range: (0.003, 0.030),
            bandwidth_unit: 1e6,
            compute_unit: 50e6,
            power_unit: 0.01,
            max_power_units: 10,
            gain_db: -50.0,
            noise_power: 8e-8,
            input_bits: (1e5, 2e5),
            cycles_per_bit: 150.0,
            local_cpu: (1e9, 2e9),
            slack: (0.008, 0.003),
            ap_weight: (1.0, 0.3),
        }
    }
}

impl SystemSpec {
    pub fn full_scale() -> Self {
        SystemSpec {
            num_aps: 12,
            num_servers: 15,
            ..SystemSpec::default()
        }
    }
}

/// Draws a system and a taskset of `num_tasks` tasks whose targeted demands
/// split `r_b`·Σb_j and `r_c`·Σc_k.
///
/// Servers `k < num_aps` sit at AP `k` and reach it without delay. Each task
/// hears two or three APs, picked without replacement in proportion to
/// per-AP weights drawn once per system. Deadlines are the targeted upload
/// time at full power plus a truncated normal slack plus the targeted
/// processing time.
pub fn generate_instance(spec: &SystemSpec, r_b: f64, r_c: f64, num_tasks: usize, alpha: f64, rng: &mut SplitMix64) -> MecInstance {
    generate(spec, r_b, r_c, num_tasks, alpha, rng).instance
}

/// A generated instance with the targeted per-task demands behind its deadlines.
#[derive(Debug, Clone)]
pub struct Generated {
    pub instance: MecInstance,
    /// R_b^i, bandwidth units.
    pub bw_demands: Vec<f64>,
    /// R_c^i, compute units.
    pub cpu_demands: Vec<f64>,
}

pub fn generate(spec: &SystemSpec, r_b: f64, r_c: f64, num_tasks: usize, alpha: f64, rng: &mut SplitMix64) -> Generated {
    let aps: Vec<AccessPoint> = (0..spec.num_aps)
        .map(|id| AccessPoint {
            id,
            bandwidth_units: spec.ap_capacities[rng.int_in(0, spec.ap_capacities.len() as u64 - 1) as usize],
        })
        .collect();
    let servers: Vec<Server> = (0..spec.num_servers)
        .map(|id| Server {
            id,
            compute_units: rng.int_in(spec.server_capacity.0 as u64, spec.server_capacity.1 as u64) as u32,
        })
        .collect();
    let delay: Vec<Vec<f64>> = (0..spec.num_aps)
        .map(|j| {
            (0..spec.num_servers)
                .map(|k| if j == k { 0.0 } else { rng.uniform_in(spec.delay_range.0, spec.delay_range.1) })
                .collect()
        })
        .collect();
    let weights: Vec<f64> = (0..spec.num_aps)
        .map(|_| rng.truncated_normal(spec.ap_weight.0, spec.ap_weight.1, 0.05, f64::INFINITY))
        .collect();

    let total_b: f64 = aps.iter().map(|a| a.bandwidth_units as f64).sum();
    let total_c: f64 = servers.iter().map(|s| s.compute_units as f64).sum();
    let demand_b = r_b * total_b;
    let demand_c = r_c * total_c;
    let share_b = randfixedsum(num_tasks, demand_b, 0.0, demand_b, rng).expect("bounds contain the total");
    let share_c = randfixedsum(num_tasks, demand_c, 0.0, demand_c, rng).expect("bounds contain the total");

    let gain = crate::model::db_to_linear(spec.gain_db);
    let params = SystemParams {
        bandwidth_unit: spec.bandwidth_unit,
        compute_unit: spec.compute_unit,
        power_unit: spec.power_unit,
        max_power_units: spec.max_power_units,
        alpha,
        noise_power: spec.noise_power,
        local_energy_coeff: DEFAULT_RHO,
    };
    let tasks: Vec<Task> = (0..num_tasks)
        .map(|id| {
            let input_size = rng.uniform_in(spec.input_bits.0, spec.input_bits.1);
            let local_cpu = rng.uniform_in(spec.local_cpu.0, spec.local_cpu.1);
            let reach = (rng.int_in(2, 3) as usize).min(spec.num_aps);
            let mut accessible = pick_weighted(&weights, reach, rng);
            accessible.sort_unstable();

            // rate is linear in bandwidth, so evaluate one unit and scale
            let unit_rate = offload_rate(1, spec.max_power_units, gain, spec.noise_power, spec.bandwidth_unit, spec.power_unit);
            let b = share_b[id].max(1e-9 * demand_b.max(1.0));
            let c = share_c[id].max(1e-9 * demand_c.max(1.0));
            let slack = rng.truncated_normal(spec.slack.0, spec.slack.1, 0.0, f64::INFINITY);
            let deadline =
                input_size / (b * unit_rate) + slack + input_size * spec.cycles_per_bit / (c * spec.compute_unit);
            Task {
                id,
                input_size,
                cycles_per_bit: spec.cycles_per_bit,
                local_cpu,
                deadline,
                gains: vec![gain; accessible.len()],
                accessible_aps: accessible,
            }
        })
        .collect();
    Generated {
        instance: MecInstance::new(tasks, aps, servers, delay, params).expect("generated instances are valid"),
        bw_demands: share_b,
        cpu_demands: share_c,
    }
}

/// `count` distinct indices drawn in proportion to `weights`.
fn pick_weighted(weights: &[f64], count: usize, rng: &mut SplitMix64) -> Vec<usize> {
    let mut left: Vec<usize> = (0..weights.len()).collect();
    let mut out = Vec::with_capacity(count);
    for _ in 0..count.min(weights.len()) {
        let total: f64 = left.iter().map(|&j| weights[j]).sum();
        let mut u = rng.uniform() * total;
        let mut pos = left.len() - 1;
        for (p, &j) in left.iter().enumerate() {
            if u < weights[j] {
                pos = p;
                break;
            }
            u -= weights[j];
        }
        out.push(left.remove(pos));
    }
    out
}
