use rayon::prelude::*;

use pnn_training::semisup::Method;

use crate::exit::Failure;
use crate::output::Trial;
use crate::spec::{Dataset, RunSpec};

/// Runs `methods` on every trial seed of `spec`: each seed gets one split,
/// shared by all methods. Trials run in parallel; results keep seed order.
pub fn run_trials(
    spec: &RunSpec,
    dataset: &Dataset,
    methods: &[(Method, &RunSpec)],
) -> Result<Vec<Vec<Trial>>, Failure> {
    let seeds: Vec<u64> = spec.trial_seeds().collect();
    let per_seed: Vec<Vec<Trial>> = seeds
        .par_iter()
        .map(|&seed| {
            let split = dataset.split(spec.amount, seed)?;
            methods
                .iter()
                .map(|(m, s)| {
                    let config = s.config(split.dim(), seed);
                    let run = m.run(&split, &config, s.self_training).map_err(Failure::running)?;
                    Ok(Trial {
                        seed,
                        split: split.clone(),
                        run,
                    })
                })
                .collect::<Result<Vec<_>, Failure>>()
        })
        .collect::<Result<_, _>>()?;
    // regroup by method
    let mut by_method: Vec<Vec<Trial>> = methods.iter().map(|_| Vec::with_capacity(seeds.len())).collect();
    for trials in per_seed {
        for (slot, t) in by_method.iter_mut().zip(trials) {
            slot.push(t);
        }
    }
    Ok(by_method)
}

/// Fails in strict mode if any solve stopped at its iteration limit; warns otherwise.
pub fn check_convergence(strict: bool, trials: &[Vec<Trial>]) -> Result<(), Failure> {
    let stalled: Vec<String> = trials
        .iter()
        .flatten()
        .filter(|t| !t.run.report.solver.converged)
        .map(|t| format!("{} seed {}", t.run.report.method, t.seed))
        .collect();
    if stalled.is_empty() {
        return Ok(());
    }
    let msg = format!("SVM solver hit its iteration limit: {}", stalled.join(", "));
    if strict {
        Err(Failure::NonConvergence(msg))
    } else {
        eprintln!("warning: {msg}");
        Ok(())
    }
}
