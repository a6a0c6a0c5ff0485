use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{generate_instance, SystemSpec};
use super::rng::SplitMix64;
use crate::baselines::{ldm, ratio_against, upper_bound, zsg, LdmConfig};
use crate::discretize::discretize;
use crate::gma::{acceptance_ratio, gma, GmaConfig, GmaReport};
use crate::model::{validate_assignment, Assignment, MecInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Gma,
    Zsg,
    Ldm,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Gma => "gma",
            Algorithm::Zsg => "zsg",
            Algorithm::Ldm => "ldm",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub seed: u64,
    pub system: SystemSpec,
    /// Utilization range labelled LR.
    pub low_range: (f64, f64),
    /// Utilization range labelled HR.
    pub high_range: (f64, f64),
    /// Taskset size range, inclusive.
    pub tasks: (usize, usize),
    /// (r_b, r_c) samples per range combination.
    pub pairs_per_combo: usize,
    /// Taskset sizes per (r_b, r_c) sample.
    pub sizes_per_pair: usize,
    pub alphas: Vec<f64>,
    pub epsilon: f64,
    pub algorithms: Vec<Algorithm>,
    /// Fill the runtime column; off by default so output is reproducible.
    pub timing: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig::desk()
    }
}

impl BenchConfig {
    /// Four APs, five servers, 10 to 40 tasks, 200 instances.
    pub fn desk() -> Self {
        BenchConfig {
            seed: 20240601,
            system: SystemSpec::default(),
            low_range: (0.7, 1.0),
            high_range: (1.2, 1.5),
            tasks: (10, 40),
            pairs_per_combo: 5,
            sizes_per_pair: 10,
            alphas: vec![1.0 / 16.0, 1.0 / 12.0, 1.0 / 6.0],
            epsilon: 0.2,
            algorithms: vec![Algorithm::Gma, Algorithm::Zsg, Algorithm::Ldm],
            timing: false,
        }
    }

    /// Twelve APs, fifteen servers, 50 to 200 tasks, 30 × 30 samples per combination.
    pub fn full() -> Self {
        BenchConfig {
            system: SystemSpec::full_scale(),
            tasks: (50, 200),
            pairs_per_combo: 30,
            sizes_per_pair: 30,
            ..BenchConfig::desk()
        }
    }

    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn validate(&self) -> Result<(), String> {
        let ok_range = |r: (f64, f64)| r.0 > 0.0 && r.0 <= r.1;
        if !ok_range(self.low_range) || !ok_range(self.high_range) {
            return Err("utilization ranges must be positive and ordered".into());
        }
        if self.tasks.0 == 0 || self.tasks.0 > self.tasks.1 {
            return Err("taskset size range must be positive and ordered".into());
        }
        if self.alphas.iter().any(|&a| !(0.0..1.0).contains(&a)) {
            return Err("alpha values must lie in [0, 1)".into());
        }
        if !(self.epsilon > 0.0) {
            return Err("epsilon must be positive".into());
        }
        if self.system.num_aps == 0 || self.system.num_servers == 0 || self.system.ap_capacities.is_empty() {
            return Err("system needs APs, servers and capacities".into());
        }
        Ok(())
    }
}

/// One planned instance: which range combination it belongs to and its draws.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlannedInstance {
    pub id: usize,
    pub combo: String,
    pub r_b: f64,
    pub r_c: f64,
    pub num_tasks: usize,
}

/// Instances in emission order. The plan stream is the run seed itself; each
/// instance then draws from its own derived stream.
pub fn plan(cfg: &BenchConfig) -> Vec<PlannedInstance> {
    let ranges = [("LR", cfg.low_range), ("HR", cfg.high_range)];
    let mut rng = SplitMix64::new(cfg.seed);
    let mut out = Vec::new();
    for (lb, rb) in ranges {
        for (lc, rc) in ranges {
            for _ in 0..cfg.pairs_per_combo {
                let r_b = rng.uniform_in(rb.0, rb.1);
                let r_c = rng.uniform_in(rc.0, rc.1);
                for _ in 0..cfg.sizes_per_pair {
                    let num_tasks = rng.int_in(cfg.tasks.0 as u64, cfg.tasks.1 as u64) as usize;
                    out.push(PlannedInstance {
                        id: out.len(),
                        combo: format!("{lb}-{lc}"),
                        r_b,
                        r_c,
                        num_tasks,
                    });
                }
            }
        }
    }
    out
}

pub fn build_instance(cfg: &BenchConfig, p: &PlannedInstance, alpha: f64) -> MecInstance {
    let mut rng = SplitMix64::stream(cfg.seed, p.id as u64);
    generate_instance(&cfg.system, p.r_b, p.r_c, p.num_tasks, alpha, &mut rng)
}

/// GMA's certificate values, kept for in-memory checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Certificate {
    pub matching_weight: f64,
    pub opt_3dm: f64,
    pub opt_rdp: f64,
    pub fallbacks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub instance_id: usize,
    pub seed: u64,
    pub r_b: f64,
    pub r_c: f64,
    #[serde(rename = "I")]
    pub num_tasks: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub alg: Algorithm,
    pub objective_j: f64,
    pub upper_bound_j: f64,
    pub ratio: f64,
    pub acceptance: f64,
    pub runtime_ms: Option<f64>,
    pub feasible: bool,
    #[serde(skip)]
    pub combo: String,
    #[serde(skip)]
    pub violations: usize,
    #[serde(skip)]
    pub certificate: Option<Certificate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub instance_id: usize,
    pub alpha: f64,
    pub alg: Algorithm,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchResults {
    pub rows: Vec<Row>,
    pub failures: Vec<Failure>,
}

pub fn run_benchmark(cfg: &BenchConfig) -> BenchResults {
    let planned = plan(cfg);
    let per_instance: Vec<(Vec<Row>, Vec<Failure>)> = planned.par_iter().map(|p| run_instance(cfg, p)).collect();
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for (r, f) in per_instance {
        rows.extend(r);
        failures.extend(f);
    }
    BenchResults { rows, failures }
}

fn timed<T>(on: bool, f: impl FnOnce() -> T) -> (T, Option<f64>) {
    let start = Instant::now();
    let out = f();
    (out, on.then(|| start.elapsed().as_secs_f64() * 1e3))
}

fn run_instance(cfg: &BenchConfig, p: &PlannedInstance) -> (Vec<Row>, Vec<Failure>) {
    let gma_cfg = GmaConfig {
        epsilon: cfg.epsilon,
        ..GmaConfig::default()
    };
    let base = build_instance(cfg, p, cfg.alphas.first().copied().unwrap_or(0.0));
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    for &alpha in &cfg.alphas {
        let inst = base.with_alpha(alpha).expect("alpha validated");
        let fail = |alg, message: String| Failure {
            instance_id: p.id,
            alpha,
            alg,
            message,
        };
        let bound = discretize(&inst, gma_cfg.phi())
            .map_err(|e| e.to_string())
            .and_then(|d| upper_bound(&inst, &d.combos, gma_cfg.phi()).map_err(|e| e.to_string()));
        let bound = match bound {
            Ok(b) => b,
            Err(e) => {
                for &alg in &cfg.algorithms {
                    failures.push(fail(alg, format!("upper bound: {e}")));
                }
                continue;
            }
        };
        let row = |alg, a: &Assignment, runtime_ms, certificate| {
            let report = validate_assignment(&inst, a);
            Row {
                instance_id: p.id,
                seed: cfg.seed,
                r_b: p.r_b,
                r_c: p.r_c,
                num_tasks: p.num_tasks,
                alpha,
                epsilon: cfg.epsilon,
                alg,
                objective_j: a.objective,
                upper_bound_j: bound,
                ratio: ratio_against(a.objective, bound),
                acceptance: acceptance_ratio(a, &inst),
                runtime_ms,
                feasible: report.is_feasible(),
                combo: p.combo.clone(),
                violations: report.violations.len(),
                certificate,
            }
        };

        // GMA always runs: its pivot count is LDM's budget
        let (gma_out, gma_ms) = timed(cfg.timing, || gma(&inst, &gma_cfg));
        let gma_out: Option<(Assignment, GmaReport)> = match gma_out {
            Ok(x) => Some(x),
            Err(e) => {
                failures.push(fail(Algorithm::Gma, e.to_string()));
                None
            }
        };
        for &alg in &cfg.algorithms {
            match alg {
                Algorithm::Gma => {
                    if let Some((a, r)) = &gma_out {
                        let cert = Certificate {
                            matching_weight: r.matching_weight,
                            opt_3dm: r.opt_3dm,
                            opt_rdp: r.opt_rdp,
                            fallbacks: r.fallbacks,
                        };
                        rows.push(row(alg, a, gma_ms, Some(cert)));
                    }
                }
                Algorithm::Zsg => {
                    let (a, ms) = timed(cfg.timing, || zsg(&inst));
                    rows.push(row(alg, &a, ms, None));
                }
                Algorithm::Ldm => {
                    let Some((_, r)) = &gma_out else {
                        failures.push(fail(alg, "no GMA run to set the budget".into()));
                        continue;
                    };
                    let ldm_cfg = LdmConfig {
                        pivot_budget: r.pivots,
                        ..LdmConfig::default()
                    };
                    let ((a, _), ms) = timed(cfg.timing, || ldm(&inst, &ldm_cfg));
                    rows.push(row(alg, &a, ms, None));
                }
            }
        }
    }
    (rows, failures)
}

impl BenchResults {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r).expect("rows serialize");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
    }

    /// Per (range combination, α, algorithm) statistics, in key order.
    pub fn summary(&self) -> Vec<CellSummary> {
        let mut cells: BTreeMap<(String, u64, Algorithm), Vec<&Row>> = BTreeMap::new();
        for r in &self.rows {
            cells.entry((r.combo.clone(), r.alpha.to_bits(), r.alg)).or_default().push(r);
        }
        let mut out: Vec<CellSummary> = cells
            .into_iter()
            .map(|((combo, alpha, alg), rows)| CellSummary::from_rows(combo, f64::from_bits(alpha), alg, &rows))
            .collect();
        out.sort_by(|a, b| {
            a.combo
                .cmp(&b.combo)
                .then(a.alpha.total_cmp(&b.alpha))
                .then(a.alg.cmp(&b.alg))
        });
        out
    }

    /// Same statistics pooled over range combinations.
    pub fn summary_by_alpha(&self) -> Vec<CellSummary> {
        let mut cells: BTreeMap<(u64, Algorithm), Vec<&Row>> = BTreeMap::new();
        for r in &self.rows {
            cells.entry((r.alpha.to_bits(), r.alg)).or_default().push(r);
        }
        let mut out: Vec<CellSummary> = cells
            .into_iter()
            .map(|((alpha, alg), rows)| CellSummary::from_rows("all".into(), f64::from_bits(alpha), alg, &rows))
            .collect();
        out.sort_by(|a, b| a.alpha.total_cmp(&b.alpha).then(a.alg.cmp(&b.alg)));
        out
    }

    pub fn summary_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for s in self.summary().iter().chain(self.summary_by_alpha().iter()) {
            w.serialize(s).expect("summary serializes");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("csv is utf-8")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellSummary {
    pub combo: String,
    pub alpha: f64,
    pub alg: Algorithm,
    pub runs: usize,
    pub infeasible: usize,
    pub ratio_mean: f64,
    pub ratio_q1: f64,
    pub ratio_median: f64,
    pub ratio_q3: f64,
    pub acceptance_mean: f64,
}

impl CellSummary {
    fn from_rows(combo: String, alpha: f64, alg: Algorithm, rows: &[&Row]) -> Self {
        let mut ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
        ratios.sort_by(f64::total_cmp);
        let n = rows.len() as f64;
        CellSummary {
            combo,
            alpha,
            alg,
            runs: rows.len(),
            infeasible: rows.iter().filter(|r| !r.feasible).count(),
            ratio_mean: ratios.iter().sum::<f64>() / n,
            ratio_q1: quantile(&ratios, 0.25),
            ratio_median: quantile(&ratios, 0.5),
            ratio_q3: quantile(&ratios, 0.75),
            acceptance_mean: rows.iter().map(|r| r.acceptance).sum::<f64>() / n,
        }
    }
}

/// Linear interpolation between order statistics of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return f64::NAN;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles() {
        let d = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&d, 0.5), 2.5);
        assert_eq!(quantile(&d, 0.0), 1.0);
        assert_eq!(quantile(&d, 1.0), 4.0);
        assert_eq!(quantile(&[7.0], 0.25), 7.0);
    }

    #[test]
    fn plan_covers_every_combination() {
        let cfg = BenchConfig {
            pairs_per_combo: 2,
            sizes_per_pair: 3,
            ..BenchConfig::desk()
        };
        let p = plan(&cfg);
        assert_eq!(p.len(), 4 * 2 * 3);
        for (combo, chunk) in ["LR-LR", "LR-HR", "HR-LR", "HR-HR"].iter().zip(p.chunks(6)) {
            assert!(chunk.iter().all(|x| x.combo == *combo));
        }
        assert!(p.iter().all(|x| (10..=40).contains(&x.num_tasks)));
        assert!(p[..6].iter().all(|x| (0.7..=1.0).contains(&x.r_b) && (0.7..=1.0).contains(&x.r_c)));
    }

    #[test]
    fn config_roundtrips_through_toml() {
        let cfg = BenchConfig::desk();
        let text = toml::to_string(&cfg).unwrap();
        assert_eq!(BenchConfig::from_toml(&text).unwrap(), cfg);
        let partial = BenchConfig::from_toml("seed = 3\nalgorithms = [\"gma\"]\n").unwrap();
        assert_eq!(partial.seed, 3);
        assert_eq!(partial.tasks, (10, 40));
        assert!(BenchConfig::from_toml("bogus = 1\n").is_err());
    }

    #[test]
    fn tiny_run_is_feasible_and_ordered() {
        let cfg = BenchConfig {
            pairs_per_combo: 1,
            sizes_per_pair: 1,
            tasks: (6, 8),
            ..BenchConfig::desk()
        };
        let res = run_benchmark(&cfg);
        assert!(res.failures.is_empty(), "{:?}", res.failures);
        assert_eq!(res.rows.len(), 4 * 3 * 3);
        assert!(res.rows.iter().all(|r| r.feasible && r.runtime_ms.is_none()));
        let ids: Vec<usize> = res.rows.iter().map(|r| r.instance_id).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
        let csv = res.to_csv();
        assert!(csv.starts_with(
            "instance_id,seed,r_b,r_c,I,alpha,epsilon,alg,objective_j,upper_bound_j,ratio,acceptance,runtime_ms,feasible\n"
        ));
        assert_eq!(csv.lines().count(), res.rows.len() + 1);
    }
}
