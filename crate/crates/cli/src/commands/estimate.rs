use serde_json::json;
use soiltherm::estimators::table::{
    estimate_records, read_metrics_file, read_reported, write_estimates, EstimateOptions, EstimateStatus,
    PeriodTable,
};
use soiltherm::estimators::Convention;
use soiltherm::fixtures;
use soiltherm::units::minutes;

use crate::cli::{Cli, EstimateArgs};
use crate::exit::{classify, io_error, CliError, CliResult, Stage};
use crate::manifest::{CommandKind, RunManifest};
use crate::output::OutputDir;

pub fn run(cli: &Cli, args: &EstimateArgs) -> CliResult<()> {
    let data = classify(Stage::Data);
    let metrics_path = args.metrics.clone().unwrap_or_else(|| cli.out.join("ingest").join("metrics.csv"));
    let (records, mut periods, mut reference) = if args.bundled {
        (fixtures::surface_metrics(), fixtures::experiment_periods(), Some(fixtures::reported_inertia()))
    } else {
        if !metrics_path.exists() {
            return Err(CliError::input(format!(
                "{} not found (run `ingest` first, or pass --metrics or --bundled)",
                metrics_path.display()
            )));
        }
        (read_metrics_file(&metrics_path).map_err(&data)?, PeriodTable::default(), None)
    };
    if let Some(p) = args.period_min {
        if !(p.is_finite() && p > 0.0) {
            return Err(CliError::config(format!("--period-min must be > 0, got {p}")));
        }
        periods.fallback = Some(minutes(p));
    }
    if let Some(path) = &args.reference_table {
        let f = std::fs::File::open(path).map_err(io_error(path))?;
        reference = Some(read_reported(f).map_err(&data)?);
    }
    let opts = EstimateOptions {
        albedo: args.albedo,
        conventions: vec![Convention::InitBased, Convention::MinmaxBased],
        reference_convention: args.convention,
        ..Default::default()
    };
    if !(0.0..1.0).contains(&opts.albedo) {
        return Err(CliError::config(format!("--albedo must lie in [0, 1), got {}", opts.albedo)));
    }
    let rows = estimate_records(&records, &periods, reference.as_deref(), &opts).map_err(classify(Stage::Config))?;

    let mut out = OutputDir::create(cli.out.join("estimate"))?;
    let mut buf = Vec::new();
    write_estimates(&mut buf, &rows).map_err(&data)?;
    out.write("estimates.csv", &buf)?;

    let mut run = RunManifest::new(
        CommandKind::Estimate,
        &out.dir,
        cli.seed,
        json!({
            "bundled": args.bundled,
            "period_min": args.period_min,
            "reference_convention": args.convention.to_string(),
            "albedo": args.albedo,
            "i_sin_tolerance": opts.i_sin_tolerance,
        }),
    );
    if !args.bundled {
        run.input(&metrics_path)?;
    }
    if let Some(p) = &args.reference_table {
        run.input(p)?;
    }
    run.finish(&out.dir, &out.written)?;

    let count = |s: EstimateStatus| rows.iter().filter(|r| r.status == s).count();
    eprintln!(
        "{} estimates: {} agree, {} discrepant, {} degenerate; outputs in {}",
        rows.len(),
        count(EstimateStatus::Agrees),
        count(EstimateStatus::Discrepant),
        count(EstimateStatus::Degenerate),
        out.dir.display()
    );
    for r in rows.iter().filter(|r| r.status == EstimateStatus::Degenerate) {
        log::info!("{:?} exp {} {}: {}", r.estimator, r.experiment, r.soil, r.note);
    }
    Ok(())
}
