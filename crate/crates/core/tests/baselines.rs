mod common;

use common::tiny_instance;
use gma_core::baselines::{brute_force_opt, ldm, upper_bound, zsg, LdmConfig, OracleError, OracleGuards};
use gma_core::bench::{generate_instance, SplitMix64, SystemSpec};
use gma_core::discretize::discretize;
use gma_core::gma::{gma, GmaConfig};
use gma_core::model::{validate_assignment, MecInstance};

/// Every joint choice, one task at a time, like an odometer: each task is
/// local or takes any (AP, server, bandwidth, compute) with its least power.
fn odometer_optimum(inst: &MecInstance) -> f64 {
    let options: Vec<Vec<(usize, usize, u32, u32, f64)>> = (0..inst.num_tasks())
        .map(|i| {
            let mut o = vec![];
            for &j in &inst.task(i).accessible_aps {
                for k in 0..inst.servers().len() {
                    for b in 1..=inst.ap_alpha_cap(j) {
                        for c in 1..=inst.server_alpha_cap(k) {
                            if let Some(e) = inst.evaluate_placement(i, j, k, b, c) {
                                if e.saved_energy > 0.0 {
                                    o.push((j, k, b, c, e.saved_energy));
                                }
                            }
                        }
                    }
                }
            }
            o
        })
        .collect();
    let mut digits = vec![0usize; options.len()];
    let mut best = 0.0f64;
    loop {
        let mut bw = vec![0u32; inst.aps().len()];
        let mut cpu = vec![0u32; inst.servers().len()];
        let mut value = 0.0;
        for (i, &d) in digits.iter().enumerate() {
            if d > 0 {
                let (j, k, b, c, e) = options[i][d - 1];
                bw[j] += b;
                cpu[k] += c;
                value += e;
            }
        }
        let fits = bw.iter().zip(inst.aps()).all(|(u, a)| *u <= a.bandwidth_units)
            && cpu.iter().zip(inst.servers()).all(|(u, s)| *u <= s.compute_units);
        if fits {
            best = best.max(value);
        }
        // advance
        let mut pos = 0;
        loop {
            if pos == digits.len() {
                return best;
            }
            digits[pos] += 1;
            if digits[pos] <= options[pos].len() {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

#[test]
fn oracle_matches_odometer() {
    let mut rng = SplitMix64::new(404);
    let mut checked = 0;
    while checked < 40 {
        let inst = tiny_instance(&mut rng);
        if inst.num_tasks() > 3 {
            continue;
        }
        let r = brute_force_opt(&inst, OracleGuards::default()).unwrap();
        let truth = odometer_optimum(&inst);
        assert!((r.optimum - truth).abs() <= 1e-12 * truth.max(1e-9), "{} vs {truth}", r.optimum);
        assert!(r.proven_optimal);
        assert!(validate_assignment(&inst, &r.assignment).is_feasible());
        assert!((r.assignment.objective - r.optimum).abs() <= 1e-12);
        checked += 1;
    }
}

#[test]
fn oracle_refuses_large_instances() {
    let inst = generate_instance(&SystemSpec::default(), 0.9, 0.9, 10, 0.1, &mut SplitMix64::new(1));
    assert!(matches!(brute_force_opt(&inst, OracleGuards::default()), Err(OracleError::TooLarge(_))));
}

#[test]
fn baselines_against_the_oracle() {
    let mut rng = SplitMix64::new(99);
    let cfg = GmaConfig::default();
    let (mut nonempty, mut accepted) = (0, 0);
    for case in 0..60 {
        let inst = tiny_instance(&mut rng);
        let opt = brute_force_opt(&inst, OracleGuards::default()).unwrap().optimum;
        nonempty += usize::from(opt > 0.0);

        let (a, report) = ldm(&inst, &LdmConfig { pivot_budget: 1_000_000, ..LdmConfig::default() });
        assert!(validate_assignment(&inst, &a).is_feasible());
        assert!(a.objective <= opt * (1.0 + 1e-9) + 1e-15);
        if report.proven_optimal {
            assert!((a.objective - opt).abs() <= 1e-9 * opt.max(1e-12), "case {case}: ldm {} opt {opt}", a.objective);
        }

        let z = zsg(&inst);
        assert!(validate_assignment(&inst, &z).is_feasible(), "case {case}");
        assert!(z.objective <= opt * (1.0 + 1e-9) + 1e-15);

        let combos = discretize(&inst, cfg.phi()).unwrap().combos;
        let ub = upper_bound(&inst, &combos, cfg.phi()).unwrap();
        assert!(ub >= opt * (1.0 - 1e-9), "case {case}: bound {ub} < opt {opt}");

        let (g, r) = gma(&inst, &cfg).unwrap();
        assert!(validate_assignment(&inst, &g).is_feasible());
        assert!(g.objective >= r.bound_ratio * opt * (1.0 - 1e-6));
        assert!((1.0 - inst.alpha()) / cfg.phi() * opt <= r.opt_rdp * (1.0 + 1e-6) + 1e-15, "case {case}");
        accepted += r.accepted_tasks;
    }
    eprintln!("{nonempty} of 60 instances can offload; gma accepted {accepted} tasks");
    assert!(nonempty >= 40);
}

#[test]
fn ldm_objective_grows_with_budget() {
    let inst = generate_instance(&SystemSpec::default(), 0.9, 0.9, 15, 1.0 / 12.0, &mut SplitMix64::new(12));
    let mut last = 0.0;
    for budget in [0, 10, 50, 200, 1000, 5000] {
        let (a, r) = ldm(&inst, &LdmConfig { pivot_budget: budget, ..LdmConfig::default() });
        assert!(r.pivots <= budget);
        assert!(a.objective >= last);
        assert!(validate_assignment(&inst, &a).is_feasible());
        last = a.objective;
    }
}
