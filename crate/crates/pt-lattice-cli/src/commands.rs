use anyhow::Result;
use pt_lattice::analysis::{detect_locking, pt_threshold, LockingReport};
use pt_lattice::evolve::{phases, propagate, random_state, PhaseSeries, TimeGrid};
use pt_lattice::invariants::{find_intertwiners, invariant_series};
use pt_lattice::linalg::{eig, eigenbasis_condition};
use pt_lattice::models::parity_matrix;
use pt_lattice::Lattice;
use serde_json::{json, Value};

use crate::args::Resolved;
use crate::output::cell;

fn warn_spec(spec: &Lattice) -> Result<()> {
    for w in spec.validate()? {
        eprintln!("warning: {w}");
    }
    Ok(())
}

fn evolve_phases(spec: &Lattice, resolved: &Resolved, seed: u64) -> Result<PhaseSeries<f64>> {
    let h = spec.hamiltonian()?;
    let grid = TimeGrid::new(resolved.tmax, resolved.dt)?;
    let traj = propagate(&h, &random_state(spec.n, seed), &grid)?;
    Ok(phases(&traj))
}

pub fn spectrum(resolved: &Resolved) -> Result<String> {
    let spec = resolved.lattice()?;
    warn_spec(&spec)?;
    let h = spec.hamiltonian()?;
    let d = eig(&h)?;
    let condition = eigenbasis_condition(&h).ok();
    let eigenvalues: Vec<Value> = d
        .values
        .iter()
        .map(|v| json!({ "re": v.re, "im": v.im }))
        .collect();
    let payload = json!({
        "eigenvalues": eigenvalues,
        "residual": d.residual,
        "condition": condition,
    });
    Ok(format!("{payload}\n"))
}

pub fn evolve(resolved: &Resolved) -> Result<String> {
    let spec = resolved.lattice()?;
    warn_spec(&spec)?;
    let h = spec.hamiltonian()?;
    let grid = TimeGrid::new(resolved.tmax, resolved.dt)?;
    let traj = propagate(&h, &random_state(spec.n, resolved.seed), &grid)?;
    let ps = phases(&traj);
    let series = invariant_series(&traj, &parity_matrix(spec.n).matrix())?;

    let mut out = String::from("t,log_norm,re_pt,im_pt");
    for k in 2..=spec.n {
        out.push_str(&format!(",theta_{k}"));
    }
    out.push('\n');

    for i in 0..traj.states.len() {
        out.push_str(&cell(grid.time_at(i)));
        out.push(',');
        out.push_str(&cell(traj.log_scale[i]));
        out.push(',');
        out.push_str(&cell(series.values[i].re));
        out.push(',');
        out.push_str(&cell(series.values[i].im));
        for bond in 0..ps.n_bonds() {
            out.push(',');
            if !ps.mask[bond][i] {
                out.push_str(&cell(ps.theta[bond][i]));
            }
        }
        out.push('\n');
    }
    Ok(out)
}

pub fn threshold(resolved: &Resolved) -> Result<String> {
    let spec = resolved.lattice()?;
    warn_spec(&spec)?;
    let r = pt_threshold(&spec, resolved.gamma_max, resolved.tol)?;
    let curve: Vec<Value> = r
        .complex_count_curve
        .iter()
        .map(|&(g, count)| json!([g, count]))
        .collect();
    let payload = json!({
        "gamma_pt": r.gamma_pt,
        "gamma_full": r.gamma_full,
        "bracket_width": r.bracket_width,
        "curve": curve,
    });
    Ok(format!("{payload}\n"))
}

fn locking_json(report: &LockingReport<f64>) -> Value {
    let bonds: Vec<Value> = report
        .bonds
        .iter()
        .enumerate()
        .map(|(k, b)| {
            json!({
                "bond": k + 1,
                "saturated": b.saturated,
                "value": b.value,
                "snapped": b.snapped,
                "convergence_time": b.convergence_time,
                "window_spread": b.window_spread,
            })
        })
        .collect();
    json!({
        "window_fraction": report.window_fraction,
        "tolerance": report.tolerance,
        "all_saturated": report.all_saturated(),
        "convergence_time": report.convergence_time(),
        "bonds": bonds,
    })
}

pub fn lock(resolved: &Resolved) -> Result<String> {
    let spec = resolved.lattice()?;
    warn_spec(&spec)?;
    let ps = evolve_phases(&spec, resolved, resolved.seed)?;
    let report = detect_locking(&ps, resolved.window_fraction, resolved.lock_tol)?;
    Ok(format!("{}\n", locking_json(&report)))
}

pub fn intertwiners(resolved: &Resolved) -> Result<(String, Option<String>)> {
    let spec = resolved.lattice()?;
    warn_spec(&spec)?;
    let h = spec.hamiltonian()?;
    let basis = find_intertwiners(&h)?;
    let p = parity_matrix(spec.n).matrix::<f64>();
    let payload = json!({
        "dimension": basis.dimension,
        "residuals": basis.residuals,
        "parity_projection_residual": basis.projection_residual(&p),
    });

    let basis_payload = resolved_basis(&basis);
    Ok((format!("{payload}\n"), basis_payload))
}

fn resolved_basis(basis: &pt_lattice::invariants::IntertwinerBasis<f64>) -> Option<String> {
    let matrices: Vec<Value> = basis
        .basis
        .iter()
        .map(|eta| {
            let n = eta.dim();
            let re: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| eta[(i, j)].re).collect())
                .collect();
            let im: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| eta[(i, j)].im).collect())
                .collect();
            json!({ "re": re, "im": im })
        })
        .collect();
    Some(format!("{}\n", json!({ "basis": matrices })))
}

pub fn sweep(resolved: &Resolved) -> Result<String> {
    let spec = resolved.lattice()?;
    warn_spec(&spec)?;

    let combos: Vec<(f64, u64)> = resolved
        .gammas
        .iter()
        .flat_map(|&g| resolved.seeds.iter().map(move |&s| (g, s)))
        .collect();

    let threads = std::env::var("PT_LATTICE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&t| t >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|p| p.get())
                .unwrap_or(1)
        })
        .min(combos.len().max(1));

    let run_one = |&(gamma, seed): &(f64, u64)| -> Result<Value, pt_lattice::Error> {
        let spec = spec.clone().with_gamma(gamma);
        let h = spec.hamiltonian()?;
        let grid = TimeGrid::new(resolved.tmax, resolved.dt)?;
        let traj = propagate(&h, &random_state(spec.n, seed), &grid)?;
        let report = detect_locking(&phases(&traj), resolved.window_fraction, resolved.lock_tol)?;
        Ok(json!({
            "gamma": gamma,
            "seed": seed,
            "all_saturated": report.all_saturated(),
            "values": report.bonds.iter().map(|b| b.value).collect::<Vec<_>>(),
            "snapped": report.snapped_values(),
            "convergence_time": report.convergence_time(),
        }))
    };

    // Contiguous chunks per thread; slots are indexed, so the output order
    // is the input order no matter how the work is scheduled.
    let mut slots: Vec<Option<Result<Value, pt_lattice::Error>>> =
        (0..combos.len()).map(|_| None).collect();
    let chunk = combos.len().div_ceil(threads).max(1);
    std::thread::scope(|scope| {
        for (slot_chunk, combo_chunk) in slots.chunks_mut(chunk).zip(combos.chunks(chunk)) {
            let run_one = &run_one;
            scope.spawn(move || {
                for (slot, combo) in slot_chunk.iter_mut().zip(combo_chunk) {
                    *slot = Some(run_one(combo));
                }
            });
        }
    });

    let mut elements = Vec::with_capacity(combos.len());
    for slot in slots {
        elements.push(slot.expect("every combo ran")?);
    }
    Ok(format!("{}\n", Value::Array(elements)))
}
