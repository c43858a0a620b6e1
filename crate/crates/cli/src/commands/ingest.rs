use serde_json::json;
use soiltherm::estimators::table::write_metrics;
use soiltherm::imaging::{
    assemble_from_manifest, transient_end_time, AssembleOptions, AuxChannels, Manifest, RoiFile,
};

use crate::cli::{Cli, IngestArgs};
use crate::exit::{classify, CliError, CliResult, Stage};
use crate::manifest::{CommandKind, RunManifest};
use crate::output::{slug, OutputDir};

pub fn run(cli: &Cli, args: &IngestArgs) -> CliResult<()> {
    let data = classify(Stage::Data);
    let manifest = if args.frames_manifest.is_dir() {
        Manifest::from_directory(&args.frames_manifest, args.frame_interval)
    } else {
        Manifest::read(&args.frames_manifest)
    }
    .map_err(&data)?;
    let rois = RoiFile::read(&args.roi).map_err(&data)?.roi;
    if rois.is_empty() {
        return Err(CliError::input(format!("{}: no [[roi]] entries", args.roi.display())));
    }
    let aux = args.aux.as_deref().map(AuxChannels::read_file).transpose().map_err(&data)?;
    let opts = AssembleOptions {
        emissivity: args.emissivity,
        max_aux_gap_s: args.max_aux_gap,
        std_kind: args.std.into(),
        smoothing_window: args.smoothing_window,
    };
    let series = assemble_from_manifest(&manifest, &rois, aux.as_ref(), args.width, args.height, &opts).map_err(&data)?;

    let mut out = OutputDir::create(cli.out.join("ingest"))?;
    let mut names = std::collections::BTreeSet::new();
    for s in &series {
        let name = slug(&s.soil);
        if !names.insert(name.clone()) {
            return Err(CliError::input(format!("two regions map to the file name `{name}`")));
        }
        let mut buf = Vec::new();
        s.write_csv(&mut buf).map_err(&data)?;
        out.write(format!("series_{name}.csv"), &buf)?;
    }

    let mut transient = None;
    if let Some(aux) = &aux {
        transient = transient_end_time(aux, opts.smoothing_window).map_err(&data)?;
        if transient.is_none() {
            log::warn!("no transient end found in the heater series");
        }
        let records = series
            .iter()
            .map(|s| s.metrics(&args.experiment, transient, args.period_min))
            .collect::<Result<Vec<_>, _>>()
            .map_err(&data)?;
        let mut buf = Vec::new();
        write_metrics(&mut buf, &records).map_err(&data)?;
        out.write("metrics.csv", &buf)?;
    } else {
        log::warn!("no --aux given: net flux and metrics summary skipped");
    }

    let mut run = RunManifest::new(
        CommandKind::Ingest,
        &out.dir,
        cli.seed,
        json!({
            "experiment": args.experiment,
            "period_min": args.period_min,
            "width": args.width,
            "height": args.height,
            "emissivity": args.emissivity,
            "max_aux_gap_s": args.max_aux_gap,
            "std": format!("{:?}", opts.std_kind).to_lowercase(),
            "smoothing_window": args.smoothing_window,
            "frames": manifest.entries.len(),
            "transient_end_s": transient,
        }),
    );
    if !args.frames_manifest.is_dir() {
        run.input(&args.frames_manifest)?;
    }
    for e in &manifest.entries {
        run.input(&e.path)?;
    }
    run.input(&args.roi)?;
    if let Some(a) = &args.aux {
        run.input(a)?;
    }
    run.finish(&out.dir, &out.written)?;
    eprintln!(
        "ingested {} frames into {} series; outputs in {}",
        manifest.entries.len(),
        series.len(),
        out.dir.display()
    );
    Ok(())
}
