use std::fmt::Write as _;
use std::fs;

use crate::exit::Failure;
use crate::output::{display_name, reference_rows, write_method, Summary};
use crate::run::{check_convergence, run_trials};
use crate::spec::{Dataset, RunSpec};

/// Checks that `specs` describe one paired comparison.
pub fn check_paired(specs: &[RunSpec]) -> Result<(), Failure> {
    let first = specs
        .first()
        .ok_or_else(|| Failure::BadArgs("compare needs at least one method".into()))?;
    for s in &specs[1..] {
        if s.experiment != first.experiment {
            return Err(Failure::BadArgs(format!(
                "mismatched datasets: {} vs {}",
                first.experiment.name(),
                s.experiment.name()
            )));
        }
        if s.seed != first.seed {
            return Err(Failure::BadArgs(format!("mismatched seeds: {} vs {}", first.seed, s.seed)));
        }
        if s.repeats != first.repeats {
            return Err(Failure::BadArgs(format!(
                "mismatched repeats: {} vs {}",
                first.repeats, s.repeats
            )));
        }
        if s.split_key() != first.split_key() {
            return Err(Failure::BadArgs("specs differ in dataset or labeled amount, so splits would not be paired".into()));
        }
        if s.out_dir != first.out_dir {
            return Err(Failure::BadArgs("specs differ in --out-dir".into()));
        }
    }
    for (i, s) in specs.iter().enumerate() {
        if specs[..i].iter().any(|t| t.method == s.method) {
            return Err(Failure::BadArgs(format!("method {} given twice", s.method.name())));
        }
    }
    Ok(())
}

pub fn compare(specs: &[RunSpec]) -> Result<String, Failure> {
    check_paired(specs)?;
    let first = &specs[0];
    let dataset = Dataset::load(&first.data)?;
    let methods: Vec<_> = specs.iter().map(|s| (s.method, s)).collect();
    let trials = run_trials(first, &dataset, &methods)?;

    let mut summaries = Vec::new();
    for (s, t) in specs.iter().zip(&trials) {
        summaries.push(write_method(&first.out_dir, first.experiment, s.method, t)?);
    }
    let table = render(first, specs, &summaries);
    let name = format!("compare-{}", first.experiment.name());
    let mut csv = String::from("method,seed,error_percent,split_digest\n");
    for t in trials.iter().flatten() {
        let r = &t.run.report;
        let _ = writeln!(csv, "{},{},{},{}", r.method, t.seed, r.test_error_percent, r.split_digest);
    }
    for (file, body) in [(format!("{name}.txt"), &table), (format!("{name}.csv"), &csv)] {
        let path = first.out_dir.join(file);
        fs::write(&path, body).map_err(|e| Failure::write(&path, e))?;
    }
    check_convergence(specs.iter().any(|s| s.strict), &trials)?;
    Ok(table)
}

fn render(first: &RunSpec, specs: &[RunSpec], summaries: &[Summary]) -> String {
    let last = first.seed.wrapping_add(first.repeats as u64 - 1);
    let mut out = format!(
        "{} ({} trial{}, seeds {}..={})\n",
        first.experiment.name(),
        first.repeats,
        if first.repeats == 1 { "" } else { "s" },
        first.seed,
        last
    );
    let _ = writeln!(out, "{:<32}Test error (%)", "Method");
    for (s, sum) in specs.iter().zip(summaries) {
        let value = if sum.trials > 1 {
            format!("{:.2} ± {:.2}", sum.mean, sum.std)
        } else {
            format!("{:.2}", sum.mean)
        };
        let _ = writeln!(out, "{:<32}{value}", display_name(s.method));
    }
    let refs = reference_rows(first.experiment);
    for (name, v) in refs {
        let _ = writeln!(out, "{:<32}{v:.2}", format!("{name} (published)*"));
    }
    if !refs.is_empty() {
        out.push_str("* published value, not recomputed\n");
    }
    out
}
