use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crows::analyze::{analyze_with_path, AnalyzeOptions, ThresholdScale};
use crows::baselines::{binarize_wells, ocow_analyze, ocow_lenth_analyze, poolhits_decode, std_design, CompoundStatus};
use crows::bounds::{certify, theorem1_bound};
use crows::construct::{constraint_sweep, construct, ConstructConfig, InitRule};
use crows::io::{default_labels, read_compound_map, read_design_csv, read_labels, read_responses, write_design_csv, write_pool_sheet};
use crows::sim::{resolve, run_study, Knowledge, StudyConfig};
use crows::{row_slack, Design};

use crate::args::*;
use crate::error::CliError;
use crate::manifest::{manifest_path, strip_threads, FileDigest, RunManifest};
use crate::RunFiles;

pub(crate) fn dispatch(cli: &Cli) -> Result<RunFiles, CliError> {
    let seed = cli.seed;
    match &cli.command {
        Command::Construct(a) => run_construct(a, seed),
        Command::Sweep(a) => run_sweep(a, seed),
        Command::Bound(a) => run_bound(a),
        Command::Certify(a) => run_certify(a),
        Command::Analyze(a) => run_analyze(a),
        Command::Std(a) => run_std(a),
        Command::PoolhitsDecode(a) => run_decode(a),
        Command::Ocow(a) => run_ocow(a),
        Command::Simulate(a) => run_simulate(a, seed),
        Command::Replay(_) => unreachable!("replay is handled before dispatch"),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|e| CliError::read(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|e| CliError::write(path, e))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<(), CliError> {
    w.flush().map_err(|e| CliError::write(path, e))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Prints `text` or writes it to `out`, recording the file.
fn emit(text: &str, out: Option<&PathBuf>, files: &mut RunFiles) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| CliError::write(path, e))?;
            files.outputs.push(path.clone());
        }
        None => print!("{text}"),
    }
    Ok(())
}

/// A response file that does not match the design is bad input data.
fn check_wells(what: &str, got: usize, design: &Design) -> Result<(), CliError> {
    if got != design.n() {
        return Err(crows::Error::Format(format!("{got} {what} for a design with {} wells", design.n())).into());
    }
    Ok(())
}

fn one_based(indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|j| j + 1).collect()
}

fn read_design(path: &Path, c: Option<usize>) -> Result<Design, CliError> {
    Ok(read_design_csv(open(path)?, c)?)
}

#[derive(Serialize)]
struct ConstructSummary {
    n: usize,
    k: usize,
    c: usize,
    q: i64,
    ue_s2: f64,
    ue_s2_doubled: f64,
    best_start: usize,
    converged: bool,
    slack_max: i64,
}

fn run_construct(a: &ConstructArgs, seed: u64) -> Result<RunFiles, CliError> {
    let mut files = RunFiles::default();
    let mut config = ConstructConfig::new(a.n, a.k, a.c).starts(a.starts).seed(seed);
    config.max_passes = a.max_passes;
    config.init = match a.init {
        InitArg::Uniform => InitRule::UniformCount,
        InitArg::Tight => InitRule::Tight,
    };
    let built = construct(&config)?;
    let design = built.best.design();

    let mut w = create(&a.out)?;
    write_design_csv(&mut w, design)?;
    finish(w, &a.out)?;
    files.outputs.push(a.out.clone());

    if let Some(sheet) = &a.pool_sheet {
        let labels = match &a.compound_map {
            Some(map) => {
                files.inputs.push(map.clone());
                read_compound_map(open(map)?, a.k)?
            }
            None => default_labels(a.k),
        };
        let mut w = create(sheet)?;
        write_pool_sheet(&mut w, design, &labels)?;
        finish(w, sheet)?;
        files.outputs.push(sheet.clone());
    }
    if let Some(log) = &a.log {
        let mut w = csv::Writer::from_writer(create(log)?);
        for record in &built.log {
            w.serialize(record).map_err(crows::Error::from)?;
        }
        w.flush().map_err(|e| CliError::write(log, e))?;
        files.outputs.push(log.clone());
    }

    let ue = built.best.ue_s2();
    let summary = ConstructSummary {
        n: a.n,
        k: a.k,
        c: a.c,
        q: built.best.q(),
        ue_s2: ue.value(),
        ue_s2_doubled: ue.doubled(),
        best_start: built.best_start,
        converged: built.converged,
        slack_max: row_slack(design)?.max,
    };
    if a.json {
        print!("{}", to_json(&summary));
    } else {
        println!(
            "Q = {}  UE(s2) = {:.6}  best start {}  {}",
            summary.q,
            summary.ue_s2,
            summary.best_start,
            if summary.converged { "converged" } else { "pass cap reached" }
        );
    }
    Ok(files)
}

/// Parses `2..144`, `2..=144` and comma-separated mixtures of ranges and values.
pub(crate) fn parse_c_list(spec: &str) -> Result<Vec<usize>, CliError> {
    let bad = || CliError::Usage(format!("cannot parse c list {spec:?}"));
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi.trim().parse().map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn run_sweep(a: &SweepArgs, seed: u64) -> Result<RunFiles, CliError> {
    let c_list = parse_c_list(&a.c_list)?;
    let base = ConstructConfig::new(a.n, a.k, 1).starts(a.starts).seed(seed);
    let rows = constraint_sweep(a.n, a.k, &c_list, &base)?;
    let mut w = csv::Writer::from_writer(create(&a.out)?);
    for row in &rows {
        w.serialize(row).map_err(crows::Error::from)?;
    }
    w.flush().map_err(|e| CliError::write(&a.out, e))?;
    println!("{} constraint values written to {}", rows.len(), a.out.display());
    Ok(RunFiles { inputs: vec![], outputs: vec![a.out.clone()] })
}

fn run_bound(a: &BoundArgs) -> Result<RunFiles, CliError> {
    let mut files = RunFiles::default();
    let report = theorem1_bound(a.n, a.k, a.c)?;
    let text = if a.json {
        to_json(&report)
    } else {
        format!(
            "n = {}  k = {}  c = {}\ngamma = {}  delta = {}  phi = {}  psi = {}\nQ_lb = {}\nUE(s2)_lb = {}\n",
            report.n, report.k, report.c, report.gamma, report.delta, report.phi, report.psi, report.q_lb, report.ue_lb
        )
    };
    emit(&text, a.out.as_ref(), &mut files)?;
    Ok(files)
}

fn run_certify(a: &CertifyArgs) -> Result<RunFiles, CliError> {
    let mut files = RunFiles { inputs: vec![a.design.clone()], outputs: vec![] };
    let design = read_design(&a.design, Some(a.c))?;
    let report = theorem1_bound(design.n(), design.k(), a.c)?;
    let cert = certify(&design, &report)?;
    let text = if a.json {
        to_json(&cert)
    } else {
        match &cert {
            crows::bounds::Certificate::Tight { q, q_lb, gap_q, gap_ratio, attained } => format!(
                "tight rows: Q = {q}, bound {q_lb}, gap {gap_q} ({:.4}%){}\n",
                gap_ratio * 100.0,
                if *attained { ", bound attained" } else { "" }
            ),
            crows::bounds::Certificate::NotApplicable { max_slack } => {
                format!("bound not applicable: largest row slack {max_slack}\n")
            }
        }
    };
    emit(&text, a.out.as_ref(), &mut files)?;
    Ok(files)
}

#[derive(Serialize)]
struct BicRow {
    lambda: f64,
    support: Vec<usize>,
    bic: f64,
}

#[derive(Serialize)]
struct AnalyzeReport {
    direction: crows::Direction,
    lambda: f64,
    /// 1-based factor indices.
    hits: Vec<usize>,
    estimates: Vec<f64>,
    intercept: f64,
    path_converged: bool,
    bic_trace: Vec<BicRow>,
}

fn run_analyze(a: &AnalyzeArgs) -> Result<RunFiles, CliError> {
    let mut files = RunFiles { inputs: vec![a.design.clone(), a.response.clone()], outputs: vec![] };
    let design = read_design(&a.design, None)?;
    let y = read_responses(open(&a.response)?)?;
    check_wells("responses", y.len(), &design)?;
    let mut opts = AnalyzeOptions::new(a.sigma, a.direction);
    if a.standardized_threshold {
        opts.threshold_scale = ThresholdScale::Standardized;
    }
    let (result, path, std) = analyze_with_path(&design, &y, &opts)?;

    let report = AnalyzeReport {
        direction: result.direction,
        lambda: result.lambda,
        hits: one_based(&result.hits),
        estimates: result.estimates.clone(),
        intercept: result.intercept,
        path_converged: result.path_converged,
        bic_trace: result
            .bic_trace
            .iter()
            .map(|e| BicRow { lambda: e.lambda, support: one_based(&e.support), bic: e.bic })
            .collect(),
    };
    let text = if a.json {
        to_json(&report)
    } else {
        let listed: Vec<String> = report.hits.iter().zip(&report.estimates).map(|(j, b)| format!("f{j} ({b:.4})")).collect();
        format!(
            "lambda = {:.6e}\nhits: {}\n{}",
            report.lambda,
            if listed.is_empty() { "none".to_string() } else { listed.join(", ") },
            if report.path_converged { "" } else { "warning: coordinate descent hit its sweep cap on part of the path\n" }
        )
    };
    emit(&text, a.out.as_ref(), &mut files)?;

    if let Some(profile) = &a.profile_out {
        let k = design.k();
        let mut w = csv::Writer::from_writer(create(profile)?);
        let mut header = vec!["lambda".to_string()];
        header.extend((1..=k).map(|j| format!("f{j}")));
        w.write_record(&header).map_err(crows::Error::from)?;
        for (lambda, beta) in path.lambdas.iter().zip(&path.coefs) {
            let original = std.to_original(beta, k);
            let mut record = vec![format!("{lambda:?}")];
            record.extend(original.iter().map(|b| format!("{b:?}")));
            w.write_record(&record).map_err(crows::Error::from)?;
        }
        w.flush().map_err(|e| CliError::write(profile, e))?;
        files.outputs.push(profile.clone());
    }
    Ok(files)
}

fn run_std(a: &StdArgs) -> Result<RunFiles, CliError> {
    let std = std_design(a.k, a.q, a.a, a.gamma, a.c)?;
    let design = std.to_design();
    let mut w = create(&a.out)?;
    write_design_csv(&mut w, &design)?;
    finish(w, &a.out)?;
    println!("{} wells ({} layers of {} pools), largest pool {}", std.wells(), a.a, a.q, design.c());
    Ok(RunFiles { inputs: vec![], outputs: vec![a.out.clone()] })
}

#[derive(Serialize)]
struct DecodeReport {
    hits: Vec<usize>,
    inconclusive: Vec<usize>,
    status: Vec<CompoundStatus>,
}

fn run_decode(a: &DecodeArgs) -> Result<RunFiles, CliError> {
    let mut files = RunFiles { inputs: vec![a.design.clone()], outputs: vec![] };
    let design = read_design(&a.design, None)?;
    let labels = match (&a.labels, &a.response) {
        (Some(path), _) => {
            files.inputs.push(path.clone());
            read_labels(open(path)?)?
        }
        (None, Some(path)) => {
            files.inputs.push(path.clone());
            let y = read_responses(open(path)?)?;
            let (mu, sigma) = a.mu.zip(a.sigma).ok_or_else(|| CliError::Usage("--response needs --mu and --sigma".into()))?;
            binarize_wells(&y, mu, sigma, a.direction, a.level)?
        }
        (None, None) => return Err(CliError::Usage("give --labels or --response".into())),
    };
    check_wells("well labels", labels.len(), &design)?;
    let decoded = poolhits_decode(&design, &labels, a.errors)?;
    let inconclusive: Vec<usize> = decoded
        .status
        .iter()
        .enumerate()
        .filter(|(_, s)| **s == CompoundStatus::Inconclusive)
        .map(|(j, _)| j + 1)
        .collect();
    let report = DecodeReport { hits: one_based(&decoded.hits), inconclusive, status: decoded.status };
    let text = if a.json {
        to_json(&report)
    } else {
        let fmt = |v: &[usize]| if v.is_empty() { "none".to_string() } else { v.iter().map(|j| format!("f{j}")).collect::<Vec<_>>().join(", ") };
        format!("hits: {}\ninconclusive (counted as hits): {}\n", fmt(&report.hits), fmt(&report.inconclusive))
    };
    emit(&text, a.out.as_ref(), &mut files)?;
    Ok(files)
}

#[derive(Serialize)]
struct OcowReport {
    hits: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pse: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    t_critical: Option<f64>,
    degenerate: bool,
}

fn run_ocow(a: &OcowArgs) -> Result<RunFiles, CliError> {
    let mut files = RunFiles { inputs: vec![a.response.clone()], outputs: vec![] };
    let y = read_responses(open(&a.response)?)?;
    let report = if a.lenth {
        let call = ocow_lenth_analyze(&y, a.mu, a.direction)?;
        if call.degenerate {
            eprintln!("warning: pseudo standard error is zero, no hits declared");
        }
        OcowReport { hits: one_based(&call.hits), pse: Some(call.pse), t_critical: Some(call.t_critical), degenerate: call.degenerate }
    } else {
        let sigma = a.sigma.ok_or_else(|| CliError::Usage("--sigma is required without --lenth".into()))?;
        OcowReport { hits: one_based(&ocow_analyze(&y, a.mu, sigma, a.direction)?), pse: None, t_critical: None, degenerate: false }
    };
    let text = if a.json {
        to_json(&report)
    } else {
        let listed: Vec<String> = report.hits.iter().map(|j| format!("f{j}")).collect();
        format!("hits: {}\n", if listed.is_empty() { "none".to_string() } else { listed.join(", ") })
    };
    emit(&text, a.out.as_ref(), &mut files)?;
    Ok(files)
}

fn run_simulate(a: &SimulateArgs, seed: u64) -> Result<RunFiles, CliError> {
    let mut config = StudyConfig::new(resolve(&a.preset)?, a.methods.clone(), a.d.clone(), a.reps, seed);
    config.actives = a.actives;
    config.mu = a.mu;
    config.sigma = a.sigma;
    config.direction = a.direction;
    config.interaction = a.interactions;
    config.knowledge = if a.pilot { Knowledge::Pilot } else { Knowledge::Known };
    config.crows_starts = a.starts;
    config.binarize_level = a.level;
    let report = run_study(&config)?;
    let mut w = create(&a.out)?;
    report.write_csv(&mut w)?;
    finish(w, &a.out)?;
    println!("{} cells written to {}", report.rows.len(), a.out.display());
    Ok(RunFiles { inputs: vec![], outputs: vec![a.out.clone()] })
}

pub(crate) fn replay(a: &ReplayArgs, threads: Option<usize>) -> Result<(), CliError> {
    let manifest = RunManifest::read(&a.manifest)?;
    for input in &manifest.inputs {
        let now = FileDigest::of(&input.path)?;
        if now.sha256 != input.sha256 {
            return Err(CliError::Manifest(format!("input {} changed since the recorded run", input.path.display())));
        }
    }
    let mut argv = vec!["crows".to_string()];
    if let Some(t) = threads {
        argv.push("--threads".into());
        argv.push(t.to_string());
    }
    argv.extend(strip_threads(&manifest.argv));
    let code = crate::run(&argv);
    if code != 0 {
        return Err(CliError::Manifest(format!("replayed command exited with {code}")));
    }
    if a.check {
        for output in &manifest.outputs {
            let now = FileDigest::of(&output.path)?;
            if now.sha256 != output.sha256 {
                return Err(CliError::Manifest(format!("output {} differs from the recorded run", output.path.display())));
            }
        }
        if let Some(first) = manifest.outputs.first() {
            println!("{} outputs reproduced; manifest {}", manifest.outputs.len(), manifest_path(&first.path).display());
        }
    }
    Ok(())
}
