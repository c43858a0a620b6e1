use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use soiltherm::estimators::net_flux;
use soiltherm::estimators::table::write_metrics;
use soiltherm::fixtures::table_i_samples;
use soiltherm::imaging::{
    rasterize, transient_end_time, AuxChannels, Manifest, ManifestEntry, RoiFile, RoiPolygon, RoiSeries, ThermalFrame,
    DEFAULT_SMOOTHING_WINDOW,
};
use soiltherm::simulator::{run_diurnal, ColumnDepth, ForcingKind, ForcingProfile, GridOptions, RunOptions, SimGrid};
use soiltherm::{celsius_to_kelvin, kelvin_to_celsius, EnvironmentConfig, ForcingMode, GasKind};

use crate::cli::{Cli, SynthesizeArgs};
use crate::exit::{classify, CliError, CliResult, Stage};
use crate::manifest::{CommandKind, RunManifest};
use crate::output::OutputDir;

const SPECIFIC_HEAT: f64 = 800.0;
const AMBIENT_C: f64 = 20.0;
const HEATER_SWING_K: f64 = 60.0;
const SENSOR_NOISE_K: f64 = 0.05;
/// Relative per-pixel swing spread per unit of relative grain-size range.
const HETEROGENEITY: f64 = 0.3;
const SUBSURFACE_DEPTH_M: f64 = 0.03;
const AUX_INTERVAL_S: f64 = 60.0;

pub fn run(cli: &Cli, args: &SynthesizeArgs) -> CliResult<()> {
    if args.frames < 2 {
        return Err(CliError::config("--frames must be at least 2"));
    }
    if args.width < 8 || args.height < 8 {
        return Err(CliError::config("frames must be at least 8x8 pixels"));
    }
    let solver = classify(Stage::Config);
    let period = args.period_min * 60.0;
    let env = EnvironmentConfig::new(args.pressure_mbar, GasKind::Co2_95, ForcingMode::Chamber, period).map_err(&solver)?;

    // one heating and cooling cycle from ambient: 20 °C up to 80 °C and back
    let heater = ForcingProfile::new(
        ForcingKind::HeaterTemperature,
        (0..720)
            .map(|i| {
                let t = period * i as f64 / 720.0;
                let c = AMBIENT_C + 0.5 * HEATER_SWING_K * (1.0 - (std::f64::consts::TAU * t / period).cos());
                Ok((t, celsius_to_kelvin(c)?))
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(&solver)?,
        period,
    )
    .map_err(&solver)?;

    let per_frame = (period / args.frames as f64 / 5.0).ceil() as usize;
    let dt = period / (args.frames * per_frame) as f64;
    let opts = RunOptions {
        cycles: 1,
        discard_cycles: 0,
        dt,
        probe_depths: vec![SUBSURFACE_DEPTH_M],
        ..Default::default()
    };
    let soils = table_i_samples();
    let mut runs = Vec::new();
    for s in &soils {
        let soil = s.clone().with_specific_heat(SPECIFIC_HEAT);
        let grid_opts = GridOptions {
            depth: ColumnDepth::Layer,
            initial_temperature_k: celsius_to_kelvin(AMBIENT_C).map_err(&solver)?,
            ..Default::default()
        };
        let mut grid = SimGrid::build(&soil, &env, &grid_opts, &Default::default()).map_err(&solver)?;
        runs.push(run_diurnal(&mut grid, &heater, &env, &opts).map_err(&solver)?);
    }

    let (w, h) = (args.width, args.height);
    let rois: Vec<RoiPolygon> = soils
        .iter()
        .enumerate()
        .map(|(n, s)| {
            let (col, row) = ((n % 2) as f64, (n / 2) as f64);
            let x = |f: f64| (w as f64 * f).round();
            let y = |f: f64| (h as f64 * f).round();
            RoiPolygon::rectangle(&s.name, x(0.05 + 0.5 * col), y(0.05 + 0.5 * row), x(0.45 + 0.5 * col), y(0.45 + 0.5 * row))
        })
        .collect();
    let masks = rois.iter().map(|r| rasterize(r, w, h)).collect::<Result<Vec<_>, _>>().map_err(&solver)?;

    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let textures: Vec<Vec<f64>> = soils
        .iter()
        .zip(&masks)
        .map(|(s, m)| {
            let (lo, hi) = s.granularity_mm;
            let spread = HETEROGENEITY * (hi - lo) / (0.5 * (hi + lo));
            (0..m.count())
                .map(|_| if args.uniform { 0.0 } else { spread * rng.gen_range(-1.0..1.0) })
                .collect()
        })
        .collect();

    let mut out = OutputDir::create(cli.out.join("synthetic"))?;
    let noise = if args.uniform { 0.0 } else { SENSOR_NOISE_K };
    let mut entries = Vec::new();
    for k in 0..args.frames {
        let idx = k * per_frame;
        let t = runs[0].times[idx];
        let mut temps: Vec<f64> = (0..w * h).map(|_| AMBIENT_C + noise * rng.gen_range(-1.0..1.0)).collect();
        for ((run, mask), tex) in runs.iter().zip(&masks).zip(&textures) {
            let ts = run.surface_temperature[idx];
            let swing = ts - run.surface_temperature[0];
            for (&i, &hp) in mask.indices().iter().zip(tex) {
                temps[i as usize] = kelvin_to_celsius(ts + swing * hp).map_err(&solver)? + noise * rng.gen_range(-1.0..1.0);
            }
        }
        let frame = ThermalFrame::new(w, h, temps, t, "synthetic").map_err(&solver)?;
        let name = format!("frames/frame_{k:04}.txt");
        out.write(&name, frame.to_text(2).as_bytes())?;
        entries.push(ManifestEntry { path: name.into(), timestamp_s: t });
    }

    let mut buf = Vec::new();
    Manifest { entries }.write_csv(&mut buf).map_err(&solver)?;
    out.write("manifest.csv", &buf)?;
    out.write("rois.toml", RoiFile { roi: rois.clone() }.to_toml().as_bytes())?;

    let step = ((AUX_INTERVAL_S / dt).floor() as usize).max(1);
    let last = runs[0].len() - 1;
    let mut picks: Vec<usize> = (0..=last).step_by(step).collect();
    if picks.last() != Some(&last) {
        picks.push(last);
    }
    let c = |k: f64| kelvin_to_celsius(k).expect("simulated temperatures are physical");
    let sub = runs[1].subsurface_at(SUBSURFACE_DEPTH_M).expect("probe recorded");
    let aux = AuxChannels {
        times: picks.iter().map(|&i| runs[0].times[i]).collect(),
        heater: picks.iter().map(|&i| c(runs[0].forcing[i])).collect(),
        air: vec![AMBIENT_C; picks.len()],
        setpoint: picks.iter().map(|&i| c(runs[0].forcing[i])).collect(),
        subsurface: Some(picks.iter().map(|&i| c(sub[i])).collect()),
    };
    let mut buf = Vec::new();
    aux.write_csv(&mut buf).map_err(&solver)?;
    out.write("aux.csv", &buf)?;

    // metrics of the noiseless simulated surfaces at the frame times
    let transient = transient_end_time(&aux, DEFAULT_SMOOTHING_WINDOW).map_err(&solver)?;
    let truth = runs
        .iter()
        .zip(&soils)
        .map(|(run, s)| {
            let idx: Vec<usize> = (0..args.frames).map(|k| k * per_frame).collect();
            let series = RoiSeries {
                soil: s.name.clone(),
                times: idx.iter().map(|&i| run.times[i]).collect(),
                mean_temp: idx.iter().map(|&i| c(run.surface_temperature[i])).collect(),
                std_temp: vec![0.0; idx.len()],
                pixel_count: 0,
                net_flux: Some(
                    idx.iter()
                        .map(|&i| net_flux(run.forcing[i], run.surface_temperature[i], s.emissivity))
                        .collect::<Result<Vec<_>, _>>()?,
                ),
            };
            series.metrics("synthetic", transient, Some(args.period_min))
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(&solver)?;
    let mut buf = Vec::new();
    write_metrics(&mut buf, &truth).map_err(&solver)?;
    out.write("truth_metrics.csv", &buf)?;

    let run = RunManifest::new(
        CommandKind::Synthesize,
        &out.dir,
        cli.seed,
        json!({
            "frames": args.frames,
            "width": w,
            "height": h,
            "period_min": args.period_min,
            "pressure_mbar": args.pressure_mbar,
            "uniform": args.uniform,
            "specific_heat": SPECIFIC_HEAT,
            "heterogeneity": HETEROGENEITY,
            "sensor_noise_K": noise,
            "dt_s": dt,
        }),
    );
    run.finish(&out.dir, &out.written)?;
    eprintln!("wrote {} frames of {}x{} to {}", args.frames, w, h, out.dir.display());
    Ok(())
}
