use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::json;
use soiltherm::config::SimulationConfig;
use soiltherm::estimators::table::{read_estimates, read_metrics_file, EstimateRow, Estimator, MetricsRecord};
use soiltherm::imaging::RoiSeries;

use crate::cli::Cli;
use crate::exit::{classify, io_error, CliError, CliResult, Stage};
use crate::manifest::{CommandKind, RunManifest};
use crate::output::OutputDir;

struct Inputs {
    simulation: Option<(SimulationConfig, serde_json::Value, PathBuf)>,
    series: Vec<(PathBuf, RoiSeries)>,
    metrics: Option<(PathBuf, Vec<MetricsRecord>)>,
    estimates: Option<(PathBuf, Vec<EstimateRow>)>,
}

fn load(root: &Path) -> CliResult<Inputs> {
    let data = classify(Stage::Data);
    let sim_dir = root.join("simulate");
    let simulation = if sim_dir.join("summary.json").exists() {
        let cfg = SimulationConfig::read(&sim_dir.join("config.toml")).map_err(&data)?;
        let path = sim_dir.join("summary.json");
        let text = std::fs::read_to_string(&path).map_err(io_error(&path))?;
        let summary = serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        Some((cfg, summary, sim_dir.join("series.csv")))
    } else {
        None
    };

    let ingest_dir = root.join("ingest");
    let mut series = Vec::new();
    if ingest_dir.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(&ingest_dir)
            .map_err(io_error(&ingest_dir))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| {
                let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
                name.starts_with("series_") && name.ends_with(".csv")
            })
            .collect();
        files.sort();
        for f in files {
            let soil = f.file_stem().unwrap().to_string_lossy().trim_start_matches("series_").to_string();
            let file = std::fs::File::open(&f).map_err(io_error(&f))?;
            series.push((f.clone(), RoiSeries::read_csv(soil, file).map_err(&data)?));
        }
    }
    let metrics_path = ingest_dir.join("metrics.csv");
    let metrics = if metrics_path.exists() {
        Some((metrics_path.clone(), read_metrics_file(&metrics_path).map_err(&data)?))
    } else {
        None
    };
    let est_path = root.join("estimate").join("estimates.csv");
    let estimates = if est_path.exists() {
        let f = std::fs::File::open(&est_path).map_err(io_error(&est_path))?;
        Some((est_path.clone(), read_estimates(f).map_err(&data)?))
    } else {
        None
    };
    Ok(Inputs { simulation, series, metrics, estimates })
}

fn fmt_opt(v: Option<f64>, decimals: usize) -> String {
    v.map(|x| format!("{x:.decimals$}")).unwrap_or_else(|| "n/a".into())
}

pub fn run(cli: &Cli) -> CliResult<()> {
    let inputs = load(&cli.out)?;
    if inputs.simulation.is_none() && inputs.series.is_empty() && inputs.metrics.is_none() && inputs.estimates.is_none() {
        return Err(CliError::input(format!(
            "no simulate, ingest or estimate outputs under {}",
            cli.out.display()
        )));
    }
    let mut out = OutputDir::create(cli.out.join("report"))?;
    let mut md = String::from("# soiltherm report\n");
    let mut used = Vec::new();

    if let Some((cfg, summary, series_path)) = &inputs.simulation {
        let s = &cfg.sample;
        let e = &cfg.environment;
        let _ = write!(
            md,
            "\n## Simulation\n\nSample `{}` at {} mbar, {:?} forcing, period {} min.\n\n",
            s.name, e.pressure_mbar, e.mode, e.period_min
        );
        let surf = &summary["surface_temperature"];
        let flux = &summary["net_flux"];
        md.push_str("| series | min | max | amplitude |\n|---|---|---|---|\n");
        for (name, v, unit) in [("surface temperature", surf, "K"), ("net flux", flux, "W/m²")] {
            let _ = writeln!(
                md,
                "| {name} ({unit}) | {:.3} | {:.3} | {:.3} |",
                v["min"].as_f64().unwrap_or(f64::NAN),
                v["max"].as_f64().unwrap_or(f64::NAN),
                v["amplitude"].as_f64().unwrap_or(f64::NAN)
            );
        }
        let bytes = std::fs::read(series_path).map_err(io_error(series_path))?;
        out.write("fig_simulated_series.csv", &bytes)?;
        used.push(series_path.clone());
    }

    if !inputs.series.is_empty() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["soil", "time_s", "mean_C", "std_K", "flux_Wm2"]).unwrap();
        md.push_str("\n## Surface series\n\n| soil | frames | mean range (°C) | max std (K) |\n|---|---|---|---|\n");
        for (path, s) in &inputs.series {
            for i in 0..s.times.len() {
                let flux = s.net_flux.as_ref().map(|f| f[i].to_string()).unwrap_or_default();
                w.write_record([s.soil.clone(), s.times[i].to_string(), s.mean_temp[i].to_string(), s.std_temp[i].to_string(), flux])
                    .unwrap();
            }
            let lo = s.mean_temp.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = s.mean_temp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let sd = s.std_temp.iter().cloned().fold(0.0, f64::max);
            let _ = writeln!(md, "| {} | {} | {lo:.2} to {hi:.2} | {sd:.3} |", s.soil, s.times.len());
            used.push(path.clone());
        }
        out.write("fig_surface_series.csv", &w.into_inner().unwrap())?;
    }

    if let Some((path, metrics)) = &inputs.metrics {
        md.push_str("\n## Surface metrics\n\n| experiment | soil | T_init (°C) | ΔT (K) | T_tran std (K) | ΔG (W/m²) |\n|---|---|---|---|---|---|\n");
        for m in metrics {
            let _ = writeln!(
                md,
                "| {} | {} | {:.1} | {:.1} | {} | {:.0} |",
                m.experiment,
                m.soil,
                m.t_init_c,
                m.delta_t_k,
                fmt_opt(m.t_tran_k, 2),
                m.delta_g_wm2
            );
        }
        used.push(path.clone());
    }

    if let Some((path, rows)) = &inputs.estimates {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["estimator", "experiment", "soil", "convention", "value", "reported", "status"]).unwrap();
        for r in rows {
            w.write_record([
                format!("{:?}", r.estimator),
                r.experiment.clone(),
                r.soil.clone(),
                r.convention.to_string(),
                fmt_opt(r.value, 6),
                fmt_opt(r.reported, 6),
                format!("{:?}", r.status),
            ])
            .unwrap();
        }
        out.write("fig_estimates.csv", &w.into_inner().unwrap())?;

        // one row per (experiment, soil, convention), one column per estimator
        let mut grid: BTreeMap<(String, String, String), [Option<&EstimateRow>; 2]> = BTreeMap::new();
        for r in rows {
            let key = (r.experiment.clone(), r.soil.clone(), r.convention.to_string());
            let slot = match r.estimator {
                Estimator::ISin => 0,
                Estimator::Ati => 1,
            };
            grid.entry(key).or_default()[slot] = Some(r);
        }
        let soils: std::collections::BTreeSet<&str> = rows.iter().map(|r| r.soil.as_str()).collect();
        let _ = write!(
            md,
            "\n## Thermal inertia estimates\n\n{} soils × 2 estimators (I_sin, ATI).\n\n| experiment | soil | convention | I_sin (tiu) | ATI | status |\n|---|---|---|---|---|---|\n",
            soils.len()
        );
        for ((exp, soil, conv), [isin, ati]) in &grid {
            let cell = |r: &Option<&EstimateRow>, d: usize| {
                r.map(|r| match r.reported {
                    Some(rep) => format!("{} (ref {rep:.0})", fmt_opt(r.value, d)),
                    None => fmt_opt(r.value, d),
                })
                .unwrap_or_default()
            };
            let status: Vec<String> = [isin, ati]
                .iter()
                .filter_map(|r| r.map(|r| format!("{:?}", r.status).to_lowercase()))
                .collect();
            let _ = writeln!(md, "| {exp} | {soil} | {conv} | {} | {} | {} |", cell(isin, 1), cell(ati, 0), status.join(" / "));
        }
        used.push(path.clone());
    }

    out.write("summary.md", md.as_bytes())?;
    let mut run = RunManifest::new(CommandKind::Report, &out.dir, cli.seed, json!({}));
    for p in &used {
        run.input(p)?;
    }
    run.finish(&out.dir, &out.written)?;
    eprintln!("report written to {}", out.dir.join("summary.md").display());
    Ok(())
}
