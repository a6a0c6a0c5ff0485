//! Problem instances, the physical-layer and energy model, and the feasibility
//! validator for offloading decisions.
//!
//! All quantities are held in canonical units: bits, Hz, cycles/s, W, seconds
//! and joules. Resource allocations are integer multiples of the instance's
//! bandwidth, compute and power units.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Relative tolerance used when comparing completion times against deadlines.
pub const DEADLINE_RTOL: f64 = 1e-9;

/// Tolerance used internally when inverting the rate formula for power; much
/// tighter than [`DEADLINE_RTOL`] so anything it accepts the validator accepts.
const POWER_TIME_RTOL: f64 = 1e-12;

/// Default local energy coefficient (J·s²/cycle³).
pub const DEFAULT_RHO: f64 = 1e-27;

#[derive(Debug, Error, PartialEq)]
pub enum ModelError {
    #[error("task {task}: {reason}")]
    BadTask { task: usize, reason: String },
    #[error("instance: {0}")]
    BadInstance(String),
    #[error("malformed instance document: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum PowerError {
    #[error("offloading rate is zero")]
    ZeroRate,
    #[error("no power level up to p_max meets the time budget")]
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub id: usize,
    /// s_i, bits.
    pub input_size: f64,
    /// η_i, cycles per bit.
    pub cycles_per_bit: f64,
    /// f_i, cycles/s.
    pub local_cpu: f64,
    /// d_i, seconds.
    pub deadline: f64,
    /// J_i, ascending AP indices.
    pub accessible_aps: Vec<usize>,
    /// Linear channel gain G_ij, aligned with `accessible_aps`.
    pub gains: Vec<f64>,
}

impl Task {
    /// Total CPU cycles needed to process the task.
    pub fn cycles(&self) -> f64 {
        self.input_size * self.cycles_per_bit
    }

    pub fn can_reach(&self, ap: usize) -> bool {
        self.accessible_aps.binary_search(&ap).is_ok()
    }

    pub fn gain_to(&self, ap: usize) -> Option<f64> {
        self.accessible_aps
            .binary_search(&ap)
            .ok()
            .map(|pos| self.gains[pos])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AccessPoint {
    pub id: usize,
    pub bandwidth_units: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Server {
    pub id: usize,
    pub compute_units: u32,
}

/// Physical units and global parameters shared by every task.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// b̄, Hz per bandwidth unit.
    pub bandwidth_unit: f64,
    /// c̄, cycles/s per compute unit.
    pub compute_unit: f64,
    /// p̄, watts per power unit.
    pub power_unit: f64,
    pub max_power_units: u32,
    /// Resource allocation bound, in [0, 1).
    pub alpha: f64,
    /// σ², watts.
    pub noise_power: f64,
    /// ϱ.
    pub local_energy_coeff: f64,
}

/// An immutable, validated problem instance.
#[derive(Debug, Clone, PartialEq)]
pub struct MecInstance {
    tasks: Vec<Task>,
    aps: Vec<AccessPoint>,
    servers: Vec<Server>,
    /// δ_jk indexed `[ap][server]`, seconds.
    backhaul_delay: Vec<Vec<f64>>,
    params: SystemParams,
}

/// Largest integer allocation allowed to a single task on a resource of the
/// given capacity, ⌊α·capacity⌋.
pub fn alpha_cap(capacity: u32, alpha: f64) -> u32 {
    (alpha * capacity as f64 + 1e-9).floor().max(0.0) as u32
}

impl MecInstance {
    pub fn new(
        tasks: Vec<Task>,
        aps: Vec<AccessPoint>,
        servers: Vec<Server>,
        backhaul_delay: Vec<Vec<f64>>,
        params: SystemParams,
    ) -> Result<Self, ModelError> {
        let inst = MecInstance {
            tasks,
            aps,
            servers,
            backhaul_delay,
            params,
        };
        inst.check()?;
        Ok(inst)
    }

    fn check(&self) -> Result<(), ModelError> {
        let p = &self.params;
        let bad = |s: &str| Err(ModelError::BadInstance(s.to_string()));
        if !(0.0..1.0).contains(&p.alpha) {
            return bad("alpha must lie in [0, 1)");
        }
        for (name, v) in [
            ("bandwidth unit", p.bandwidth_unit),
            ("compute unit", p.compute_unit),
            ("power unit", p.power_unit),
            ("noise power", p.noise_power),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ModelError::BadInstance(format!("{name} must be positive")));
            }
        }
        if !(p.local_energy_coeff.is_finite() && p.local_energy_coeff >= 0.0) {
            return bad("local energy coefficient must be non-negative");
        }
        if self.backhaul_delay.len() != self.aps.len()
            || self
                .backhaul_delay
                .iter()
                .any(|row| row.len() != self.servers.len())
        {
            return bad("delay matrix must be |APs| x |servers|");
        }
        if self
            .backhaul_delay
            .iter()
            .flatten()
            .any(|d| !(d.is_finite() && *d >= 0.0))
        {
            return bad("backhaul delays must be finite and non-negative");
        }
        for (idx, ap) in self.aps.iter().enumerate() {
            if ap.id != idx {
                return bad("AP ids must equal their positions");
            }
        }
        for (idx, s) in self.servers.iter().enumerate() {
            if s.id != idx {
                return bad("server ids must equal their positions");
            }
        }
        for (idx, t) in self.tasks.iter().enumerate() {
            let fail = |reason: &str| {
                Err(ModelError::BadTask {
                    task: idx,
                    reason: reason.to_string(),
                })
            };
            if t.id != idx {
                return fail("id must equal its position");
            }
            for v in [t.input_size, t.cycles_per_bit, t.local_cpu, t.deadline] {
                if !(v.is_finite() && v > 0.0) {
                    return fail("size, cycles per bit, local cpu and deadline must be positive");
                }
            }
            if t.accessible_aps.is_empty() {
                return fail("no accessible AP");
            }
            if t.accessible_aps.windows(2).any(|w| w[0] >= w[1]) {
                return fail("accessible APs must be strictly ascending");
            }
            if t.accessible_aps.iter().any(|&j| j >= self.aps.len()) {
                return fail("accessible AP out of range");
            }
            if t.gains.len() != t.accessible_aps.len() {
                return fail("one channel gain per accessible AP is required");
            }
            if t.gains.iter().any(|g| !(g.is_finite() && *g > 0.0)) {
                return fail("channel gains must be positive");
            }
        }
        Ok(())
    }

    pub fn tasks(&self) -> &[Task] {
        &self.tasks
    }

    pub fn task(&self, i: usize) -> &Task {
        &self.tasks[i]
    }

    pub fn aps(&self) -> &[AccessPoint] {
        &self.aps
    }

    pub fn servers(&self) -> &[Server] {
        &self.servers
    }

    pub fn delay(&self, ap: usize, server: usize) -> f64 {
        self.backhaul_delay[ap][server]
    }

    pub fn delay_matrix(&self) -> &[Vec<f64>] {
        &self.backhaul_delay
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha
    }

    pub fn num_tasks(&self) -> usize {
        self.tasks.len()
    }

    /// Same instance with a different resource allocation bound.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self, ModelError> {
        let mut next = self.clone();
        next.params.alpha = alpha;
        next.check()?;
        Ok(next)
    }

    pub fn ap_alpha_cap(&self, ap: usize) -> u32 {
        alpha_cap(self.aps[ap].bandwidth_units, self.params.alpha)
    }

    pub fn server_alpha_cap(&self, server: usize) -> u32 {
        alpha_cap(self.servers[server].compute_units, self.params.alpha)
    }

    pub fn local_energy(&self, task: usize) -> f64 {
        local_energy(&self.tasks[task], self.params.local_energy_coeff)
    }

    pub fn processing_time(&self, task: usize, cpu_units: u32) -> f64 {
        self.tasks[task].cycles() / (cpu_units as f64 * self.params.compute_unit)
    }

    /// Offloading time s_i / r_ij; infinite when the rate is zero.
    pub fn offload_time(&self, task: usize, ap: usize, bw_units: u32, power_units: u32) -> f64 {
        let t = &self.tasks[task];
        let Some(gain) = t.gain_to(ap) else {
            return f64::INFINITY;
        };
        let rate = offload_rate(
            bw_units,
            power_units,
            gain,
            self.params.noise_power,
            self.params.bandwidth_unit,
            self.params.power_unit,
        );
        if rate > 0.0 {
            t.input_size / rate
        } else {
            f64::INFINITY
        }
    }

    /// Time left for the wireless upload once forwarding and processing on
    /// `server` with `cpu_units` are accounted for.
    pub fn offload_budget(&self, task: usize, ap: usize, server: usize, cpu_units: u32) -> f64 {
        self.tasks[task].deadline - self.delay(ap, server) - self.processing_time(task, cpu_units)
    }

    /// Evaluates a full placement: derives the upload budget, the smallest
    /// integral power meeting it, and the resulting saved energy. Returns
    /// `None` when the deadline cannot be met within p_max.
    pub fn evaluate_placement(
        &self,
        task: usize,
        ap: usize,
        server: usize,
        bw_units: u32,
        cpu_units: u32,
    ) -> Option<PlacementEval> {
        if bw_units == 0 || cpu_units == 0 {
            return None;
        }
        let t = &self.tasks[task];
        let gain = t.gain_to(ap)?;
        let budget = self.offload_budget(task, ap, server, cpu_units);
        if !(budget > 0.0) {
            return None;
        }
        let power = min_power_units(t, bw_units, budget, gain, self).ok()?;
        let energy = offload_energy(t, bw_units, power, gain, self).ok()?;
        Some(PlacementEval {
            budget,
            power_units: power,
            saved_energy: self.local_energy(task) - energy,
        })
    }

    /// Saved energy of a task offloaded with the given allocations: local
    /// energy minus upload energy.
    pub fn saved_energy(&self, task: usize, ap: usize, bw_units: u32, power_units: u32) -> Result<f64, PowerError> {
        let t = &self.tasks[task];
        let gain = t.gain_to(ap).ok_or(PowerError::ZeroRate)?;
        let e = offload_energy(t, bw_units, power_units, gain, self)?;
        Ok(self.local_energy(task) - e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementEval {
    pub budget: f64,
    pub power_units: u32,
    pub saved_energy: f64,
}

/// Energy of processing the task on the device, ϱ·f²·s·η.
pub fn local_energy(task: &Task, coeff: f64) -> f64 {
    coeff * task.local_cpu * task.local_cpu * task.input_size * task.cycles_per_bit
}

/// Shannon rate b·b̄·log₂(1 + p·p̄·G/σ²) in bits/s.
pub fn offload_rate(
    bw_units: u32,
    power_units: u32,
    gain: f64,
    noise: f64,
    bandwidth_unit: f64,
    power_unit: f64,
) -> f64 {
    if bw_units == 0 || power_units == 0 {
        return 0.0;
    }
    let snr = power_units as f64 * power_unit * gain / noise;
    bw_units as f64 * bandwidth_unit * snr.ln_1p() / std::f64::consts::LN_2
}

/// Transmit energy p·p̄·s / r.
pub fn offload_energy(
    task: &Task,
    bw_units: u32,
    power_units: u32,
    gain: f64,
    inst: &MecInstance,
) -> Result<f64, PowerError> {
    let p = inst.params();
    let rate = offload_rate(bw_units, power_units, gain, p.noise_power, p.bandwidth_unit, p.power_unit);
    if rate <= 0.0 {
        return Err(PowerError::ZeroRate);
    }
    Ok(power_units as f64 * p.power_unit * task.input_size / rate)
}

/// Smallest integral power level whose upload finishes within `time_budget`.
pub fn min_power_units(
    task: &Task,
    bw_units: u32,
    time_budget: f64,
    gain: f64,
    inst: &MecInstance,
) -> Result<u32, PowerError> {
    let p = inst.params();
    if bw_units == 0 {
        return Err(PowerError::ZeroRate);
    }
    if !(time_budget > 0.0) {
        return Err(PowerError::Infeasible);
    }
    let time_at = |units: u32| {
        let rate = offload_rate(bw_units, units, gain, p.noise_power, p.bandwidth_unit, p.power_unit);
        task.input_size / rate
    };
    let fits = |units: u32| time_at(units) <= time_budget * (1.0 + POWER_TIME_RTOL);

    // p·p̄ = (2^{s/(t·b·b̄)} − 1)·σ²/G
    let exponent = task.input_size / (time_budget * bw_units as f64 * p.bandwidth_unit);
    let watts = exponent.exp2() - 1.0;
    let real_units = watts * p.noise_power / gain / p.power_unit;
    if !real_units.is_finite() || real_units > p.max_power_units as f64 + 1.0 {
        return Err(PowerError::Infeasible);
    }
    let mut units = (real_units.ceil() as u32).max(1);
    while units > 1 && fits(units - 1) {
        units -= 1;
    }
    while !fits(units) {
        units += 1;
        if units > p.max_power_units {
            return Err(PowerError::Infeasible);
        }
    }
    if units > p.max_power_units {
        return Err(PowerError::Infeasible);
    }
    Ok(units)
}

// ---------------------------------------------------------------------------
// Assignments and validation
// ---------------------------------------------------------------------------

/// Decision for a single task. An offloaded task carries an AP, a server and
/// all three allocations; a locally processed task carries none of them.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskDecision {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub server: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bw_units: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cpu_units: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_units: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Placement {
    pub ap: usize,
    pub server: usize,
    pub bw_units: u32,
    pub cpu_units: u32,
    pub power_units: u32,
}

impl TaskDecision {
    pub fn offloaded(p: Placement) -> Self {
        TaskDecision {
            ap: Some(p.ap),
            server: Some(p.server),
            bw_units: Some(p.bw_units),
            cpu_units: Some(p.cpu_units),
            power_units: Some(p.power_units),
        }
    }

    pub fn is_offloaded(&self) -> bool {
        self.ap.is_some() || self.server.is_some()
    }

    /// The complete placement, if every field is present.
    pub fn placement(&self) -> Option<Placement> {
        Some(Placement {
            ap: self.ap?,
            server: self.server?,
            bw_units: self.bw_units?,
            cpu_units: self.cpu_units?,
            power_units: self.power_units?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Assignment {
    pub tasks: Vec<TaskDecision>,
    /// Total saved energy, joules.
    #[serde(rename = "objective_j")]
    pub objective: f64,
}

impl Assignment {
    pub fn empty(num_tasks: usize) -> Self {
        Assignment {
            tasks: vec![TaskDecision::default(); num_tasks],
            objective: 0.0,
        }
    }

    /// Builds an assignment from placements and fills in the objective from
    /// the energy model.
    pub fn from_placements(inst: &MecInstance, placements: &[Option<Placement>]) -> Self {
        let tasks: Vec<TaskDecision> = placements
            .iter()
            .map(|p| p.map(TaskDecision::offloaded).unwrap_or_default())
            .collect();
        let objective = placements
            .iter()
            .enumerate()
            .filter_map(|(i, p)| {
                let p = (*p)?;
                inst.saved_energy(i, p.ap, p.bw_units, p.power_units).ok()
            })
            .sum();
        Assignment { tasks, objective }
    }

    pub fn offloaded_count(&self) -> usize {
        self.tasks.iter().filter(|d| d.is_offloaded()).count()
    }
}

/// Constraint families of the joint offloading problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstraintFamily {
    /// End-to-end completion within the deadline.
    Deadline,
    /// At most one accessible AP and one server, set together.
    Mapping,
    /// AP bandwidth capacity.
    ApCapacity,
    /// Server compute capacity.
    ServerCapacity,
    /// Per-task share bounded by ⌊α·capacity⌋.
    AllocationBound,
    /// Transmit power at most p_max.
    PowerBound,
    /// Index ranges and integral allocations present exactly when offloaded.
    Domain,
    /// Reported objective disagrees with the energy model.
    Objective,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub family: ConstraintFamily,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub task: Option<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub violations: Vec<Violation>,
    pub recomputed_objective: f64,
}

impl FeasibilityReport {
    pub fn is_feasible(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, family: ConstraintFamily) -> usize {
        self.violations.iter().filter(|v| v.family == family).count()
    }
}

/// Checks `a` against every constraint family and lists each violation.
pub fn validate_assignment(inst: &MecInstance, a: &Assignment) -> FeasibilityReport {
    let mut violations = Vec::new();
    let mut push = |family, task: Option<usize>, detail: String| {
        violations.push(Violation { family, task, detail });
    };
    if a.tasks.len() != inst.num_tasks() {
        push(
            ConstraintFamily::Domain,
            None,
            format!("{} decisions for {} tasks", a.tasks.len(), inst.num_tasks()),
        );
    }
    let params = inst.params();
    let mut ap_load = vec![0u64; inst.aps().len()];
    let mut server_load = vec![0u64; inst.servers().len()];
    let mut recomputed = 0.0;

    for (i, d) in a.tasks.iter().enumerate().take(inst.num_tasks()) {
        if !d.is_offloaded() {
            if d.bw_units.is_some() || d.cpu_units.is_some() || d.power_units.is_some() {
                push(ConstraintFamily::Domain, Some(i), "allocation on a task that is not offloaded".into());
            }
            continue;
        }
        let (Some(j), Some(k)) = (d.ap, d.server) else {
            push(ConstraintFamily::Mapping, Some(i), "AP and server must be chosen together".into());
            continue;
        };
        if j >= inst.aps().len() || k >= inst.servers().len() {
            push(ConstraintFamily::Domain, Some(i), format!("AP {j} or server {k} out of range"));
            continue;
        }
        if !inst.task(i).can_reach(j) {
            push(ConstraintFamily::Mapping, Some(i), format!("AP {j} is not accessible"));
            continue;
        }
        let (Some(b), Some(c), Some(p)) = (d.bw_units, d.cpu_units, d.power_units) else {
            push(ConstraintFamily::Domain, Some(i), "offloaded task is missing an allocation".into());
            continue;
        };
        if b == 0 || c == 0 || p == 0 {
            push(ConstraintFamily::Domain, Some(i), "offloaded task needs positive allocations".into());
            continue;
        }
        ap_load[j] += b as u64;
        server_load[k] += c as u64;
        if b > inst.ap_alpha_cap(j) {
            push(
                ConstraintFamily::AllocationBound,
                Some(i),
                format!("bandwidth {b} exceeds alpha bound {} of AP {j}", inst.ap_alpha_cap(j)),
            );
        }
        if c > inst.server_alpha_cap(k) {
            push(
                ConstraintFamily::AllocationBound,
                Some(i),
                format!("compute {c} exceeds alpha bound {} of server {k}", inst.server_alpha_cap(k)),
            );
        }
        if p > params.max_power_units {
            push(
                ConstraintFamily::PowerBound,
                Some(i),
                format!("power {p} exceeds p_max {}", params.max_power_units),
            );
        }
        let finish = inst.offload_time(i, j, b, p) + inst.delay(j, k) + inst.processing_time(i, c);
        let deadline = inst.task(i).deadline;
        if !(finish <= deadline * (1.0 + DEADLINE_RTOL)) {
            push(
                ConstraintFamily::Deadline,
                Some(i),
                format!("completes at {finish:.6e} s, deadline {deadline:.6e} s"),
            );
        }
        if let Ok(e) = inst.saved_energy(i, j, b, p) {
            recomputed += e;
        }
    }
    for (j, load) in ap_load.iter().enumerate() {
        let cap = inst.aps()[j].bandwidth_units as u64;
        if *load > cap {
            push(ConstraintFamily::ApCapacity, None, format!("AP {j} allocates {load} of {cap} units"));
        }
    }
    for (k, load) in server_load.iter().enumerate() {
        let cap = inst.servers()[k].compute_units as u64;
        if *load > cap {
            push(ConstraintFamily::ServerCapacity, None, format!("server {k} allocates {load} of {cap} units"));
        }
    }
    if (a.objective - recomputed).abs() > 1e-9 * (1.0 + recomputed.abs()) {
        push(
            ConstraintFamily::Objective,
            None,
            format!("reported {:.9e} J, recomputed {:.9e} J", a.objective, recomputed),
        );
    }
    FeasibilityReport {
        violations,
        recomputed_objective: recomputed,
    }
}

// ---------------------------------------------------------------------------
// JSON instance document
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnitsDoc {
    bandwidth_hz: f64,
    compute_cps: f64,
    power_w: f64,
    #[serde(default = "default_rho")]
    rho: f64,
}

fn default_rho() -> f64 {
    DEFAULT_RHO
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ApDoc {
    b_units: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ServerDoc {
    c_units: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaskDoc {
    s_bits: f64,
    eta: f64,
    f_cps: f64,
    d_s: f64,
    aps: Vec<usize>,
    gain: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    units: UnitsDoc,
    alpha: f64,
    p_max: u32,
    aps: Vec<ApDoc>,
    servers: Vec<ServerDoc>,
    delay_s: Vec<Vec<f64>>,
    tasks: Vec<TaskDoc>,
    noise_w: f64,
}

impl MecInstance {
    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| ModelError::Parse(e.to_string()))?;
        let tasks = doc
            .tasks
            .into_iter()
            .enumerate()
            .map(|(id, t)| {
                // Accessible APs are stored sorted; keep gains aligned.
                let mut pairs: Vec<(usize, f64)> = t.aps.iter().copied().zip(t.gain.iter().copied()).collect();
                if t.aps.len() != t.gain.len() {
                    return Err(ModelError::BadTask {
                        task: id,
                        reason: "aps and gain lengths differ".into(),
                    });
                }
                pairs.sort_by_key(|p| p.0);
                Ok(Task {
                    id,
                    input_size: t.s_bits,
                    cycles_per_bit: t.eta,
                    local_cpu: t.f_cps,
                    deadline: t.d_s,
                    accessible_aps: pairs.iter().map(|p| p.0).collect(),
                    gains: pairs.iter().map(|p| p.1).collect(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let aps = doc
            .aps
            .iter()
            .enumerate()
            .map(|(id, a)| AccessPoint {
                id,
                bandwidth_units: a.b_units,
            })
            .collect();
        let servers = doc
            .servers
            .iter()
            .enumerate()
            .map(|(id, s)| Server {
                id,
                compute_units: s.c_units,
            })
            .collect();
        let params = SystemParams {
            bandwidth_unit: doc.units.bandwidth_hz,
            compute_unit: doc.units.compute_cps,
            power_unit: doc.units.power_w,
            max_power_units: doc.p_max,
            alpha: doc.alpha,
            noise_power: doc.noise_w,
            local_energy_coeff: doc.units.rho,
        };
        MecInstance::new(tasks, aps, servers, doc.delay_s, params)
    }

    pub fn to_json(&self) -> String {
        let p = &self.params;
        let doc = InstanceDoc {
            units: UnitsDoc {
                bandwidth_hz: p.bandwidth_unit,
                compute_cps: p.compute_unit,
                power_w: p.power_unit,
                rho: p.local_energy_coeff,
            },
            alpha: p.alpha,
            p_max: p.max_power_units,
            aps: self.aps.iter().map(|a| ApDoc { b_units: a.bandwidth_units }).collect(),
            servers: self.servers.iter().map(|s| ServerDoc { c_units: s.compute_units }).collect(),
            delay_s: self.backhaul_delay.clone(),
            tasks: self
                .tasks
                .iter()
                .map(|t| TaskDoc {
                    s_bits: t.input_size,
                    eta: t.cycles_per_bit,
                    f_cps: t.local_cpu,
                    d_s: t.deadline,
                    aps: t.accessible_aps.clone(),
                    gain: t.gains.clone(),
                })
                .collect(),
            noise_w: p.noise_power,
        };
        serde_json::to_string_pretty(&doc).expect("instance documents always serialize")
    }
}

/// Converts a gain in dB to a linear power ratio.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
