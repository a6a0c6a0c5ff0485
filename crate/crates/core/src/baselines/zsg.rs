use crate::model::{Assignment, MecInstance, Placement};

#[derive(Debug, Clone, Copy)]
struct Candidate {
    task: usize,
    placement: Placement,
    ratio: f64,
}

/// Greedy by saved energy per unit of normalized allocation.
///
/// Each (task, AP, server) triple gets the most balanced smallest allocation
/// that meets the deadline at full power: the pair (b, c) minimizing the
/// larger of b and c as shares of their α bounds. Power is then lowered to
/// the least level that still fits.
pub fn zsg(inst: &MecInstance) -> Assignment {
    let mut cands = Vec::new();
    for i in 0..inst.num_tasks() {
        for &j in &inst.task(i).accessible_aps {
            for k in 0..inst.servers().len() {
                if let Some(c) = candidate(inst, i, j, k) {
                    cands.push(c);
                }
            }
        }
    }
    // stable: ties keep (task, AP, server) order
    cands.sort_by(|a, b| b.ratio.total_cmp(&a.ratio));

    let mut ap_free: Vec<u32> = inst.aps().iter().map(|a| a.bandwidth_units).collect();
    let mut server_free: Vec<u32> = inst.servers().iter().map(|s| s.compute_units).collect();
    let mut placements: Vec<Option<Placement>> = vec![None; inst.num_tasks()];
    for c in cands {
        let p = c.placement;
        if placements[c.task].is_some() || p.bw_units > ap_free[p.ap] || p.cpu_units > server_free[p.server] {
            continue;
        }
        ap_free[p.ap] -= p.bw_units;
        server_free[p.server] -= p.cpu_units;
        placements[c.task] = Some(p);
    }
    Assignment::from_placements(inst, &placements)
}

fn candidate(inst: &MecInstance, i: usize, j: usize, k: usize) -> Option<Candidate> {
    let slack = inst.task(i).deadline - inst.delay(j, k);
    let upload_one = inst.offload_time(i, j, 1, inst.params().max_power_units);
    let process_one = inst.processing_time(i, 1);
    let (cap_b, cap_c) = (inst.ap_alpha_cap(j), inst.server_alpha_cap(k));
    if !(slack > 0.0) || !upload_one.is_finite() || cap_b == 0 || cap_c == 0 {
        return None;
    }
    // both durations scale as 1/units
    let mut pick: Option<(f64, u32, u32)> = None;
    for b in 1..=cap_b {
        let room = slack - upload_one / b as f64;
        if !(room > 0.0) {
            continue;
        }
        let c = units_for(process_one / room);
        if c > cap_c {
            continue;
        }
        let share = (b as f64 / cap_b as f64).max(c as f64 / cap_c as f64);
        if pick.map_or(true, |(s, _, _)| share < s) {
            pick = Some((share, b, c));
        }
    }
    let (_, b, c) = pick?;
    let eval = inst.evaluate_placement(i, j, k, b, c)?;
    if eval.saved_energy <= 0.0 {
        return None;
    }
    let share = b as f64 / inst.aps()[j].bandwidth_units as f64 + c as f64 / inst.servers()[k].compute_units as f64;
    Some(Candidate {
        task: i,
        placement: Placement {
            ap: j,
            server: k,
            bw_units: b,
            cpu_units: c,
            power_units: eval.power_units,
        },
        ratio: eval.saved_energy / share,
    })
}

fn units_for(x: f64) -> u32 {
    // absorb rounding when x sits on an integer
    let r = x.round();
    let v = if (x - r).abs() <= 1e-9 * r.max(1.0) { r } else { x.ceil() };
    v.max(1.0).min(u32::MAX as f64) as u32
}
