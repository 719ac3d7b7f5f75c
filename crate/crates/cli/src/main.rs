//! `pnn-train`: runs the PNN-Training, self-training and supervised SVM
//! experiments on two-moons, USPS or a custom dataset file.
//!
//! Exit codes: 0 success, 2 bad arguments, 3 dataset I/O failure, 4 solver
//! non-convergence under `--strict`.

mod compare;
mod exit;
mod options;
mod output;
mod run;
mod spec;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::Parser;

use exit::Failure;
use options::{read_spec_file, CompareCli, RunCli};
use output::{summary_line, write_method};
use spec::{Dataset, RunSpec};

fn run_command(args: Vec<OsString>) -> Result<(), Failure> {
    let cli = RunCli::parse_from(args);
    let (mut experiment, mut method, mut options) = (cli.experiment, cli.method, cli.options);
    if let Some(path) = &cli.spec_file {
        let file = read_spec_file(path)?;
        experiment = experiment.or(file.experiment);
        method = method.or(file.method);
        options = options.or(file.options);
    }
    let (Some(experiment), Some(method)) = (experiment, method) else {
        return Err(Failure::BadArgs(
            "an experiment and a method are required (positionally or in --spec-file)".into(),
        ));
    };
    let spec = RunSpec::resolve(experiment, method, options)?;
    let dataset = Dataset::load(&spec.data)?;
    let trials = run::run_trials(&spec, &dataset, &[(spec.method, &spec)])?;
    let summary = write_method(&spec.out_dir, spec.experiment, spec.method, &trials[0])?;
    println!("{}", summary_line(spec.experiment, spec.method, &summary));
    run::check_convergence(spec.strict, &trials)
}

fn compare_command(args: Vec<OsString>) -> Result<(), Failure> {
    let cli = CompareCli::parse_from(args);
    let specs = if cli.spec_file.is_empty() {
        let Some(experiment) = cli.experiment else {
            return Err(Failure::BadArgs("compare needs an experiment or --spec-file".into()));
        };
        let methods = if cli.methods.is_empty() {
            vec![
                options::MethodArg::PnnTraining,
                options::MethodArg::SelfTraining,
                options::MethodArg::Supervised,
            ]
        } else {
            cli.methods
        };
        methods
            .into_iter()
            .map(|m| RunSpec::resolve(experiment, m, cli.options.clone()))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        if cli.experiment.is_some() || !cli.methods.is_empty() {
            return Err(Failure::BadArgs("give either positional methods or --spec-file, not both".into()));
        }
        cli.spec_file
            .iter()
            .map(|path| {
                let file = read_spec_file(path)?;
                match (file.experiment, file.method) {
                    (Some(e), Some(m)) => RunSpec::resolve(e, m, cli.options.clone().or(file.options)),
                    _ => Err(Failure::BadArgs(format!(
                        "{}: spec file must set experiment and method",
                        path.display()
                    ))),
                }
            })
            .collect::<Result<Vec<_>, _>>()?
    };
    print!("{}", compare::compare(&specs)?);
    Ok(())
}

fn main() -> ExitCode {
    let mut args: Vec<OsString> = std::env::args_os().collect();
    let result = if args.get(1).is_some_and(|a| a == "compare") {
        args.remove(1);
        compare_command(args)
    } else {
        run_command(args)
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
