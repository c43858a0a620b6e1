use serde_json::json;
use soiltherm::config::SimulationConfig;
use soiltherm::Error;

use crate::cli::{Cli, SimulateArgs};
use crate::exit::{classify, CliError, CliResult, Stage};
use crate::manifest::{CommandKind, RunManifest};
use crate::output::OutputDir;

pub fn run(cli: &Cli, args: &SimulateArgs) -> CliResult<()> {
    let config = SimulationConfig::read(&args.config).map_err(|e| match e {
        Error::Io { .. } => CliError::config(e.to_string()),
        other => classify(Stage::Config)(other),
    })?;
    let result = config.simulate().map_err(classify(Stage::Config))?;
    let summary = result.summary().map_err(classify(Stage::Config))?;

    let mut out = OutputDir::create(cli.out.join("simulate"))?;
    out.write("config.toml", config.to_toml().as_bytes())?;
    let mut csv = Vec::new();
    result.write_csv(&mut csv).map_err(classify(Stage::Config))?;
    out.write("series.csv", &csv)?;
    let mut json = serde_json::to_string_pretty(&summary).expect("summary serialises");
    json.push('\n');
    out.write("summary.json", json.as_bytes())?;

    let mut manifest = RunManifest::new(
        CommandKind::Simulate,
        &out.dir,
        cli.seed,
        json!({ "config": serde_json::to_value(&config).expect("config serialises") }),
    );
    manifest.config_path = Some(args.config.display().to_string());
    manifest.input(&args.config)?;
    manifest.finish(&out.dir, &out.written)?;
    eprintln!(
        "simulated {} samples of `{}`; surface amplitude {:.3} K; outputs in {}",
        result.len(),
        config.sample.name,
        summary.surface_temperature.amplitude,
        out.dir.display()
    );
    Ok(())
}
