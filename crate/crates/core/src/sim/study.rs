use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::presets::Preset;
use super::scenario::{
    evaluate, gen_response, pilot_draw, sample_active, Heredity, Interaction, InteractionKind, Knowledge, Rates, Scenario,
};
use crate::analyze::{analyze, AnalyzeOptions};
use crate::baselines::{binarize_wells, ocow_analyze, ocow_lenth_analyze, poolhits_decode, std_design, DEFAULT_BINARIZE_LEVEL};
use crate::construct::{construct, ConstructConfig, DEFAULT_STARTS};
use crate::design::Design;
use crate::error::{param, Error, Result};
use crate::seed::{derive, key_hash, rng};
use crate::Direction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Crows,
    #[serde(rename = "poolhits")]
    PoolHits,
    Ocow,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Crows => "crows",
            Method::PoolHits => "poolhits",
            Method::Ocow => "ocow",
        }
    }

    fn id(self) -> u64 {
        match self {
            Method::Crows => 0,
            Method::PoolHits => 1,
            Method::Ocow => 2,
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "crows" => Ok(Method::Crows),
            "poolhits" => Ok(Method::PoolHits),
            "ocow" => Ok(Method::Ocow),
            other => param(format!("unknown method {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyConfig {
    pub presets: Vec<Preset>,
    pub methods: Vec<Method>,
    pub d_values: Vec<f64>,
    /// Number of active compounds per replicate.
    pub actives: usize,
    pub replicates: usize,
    pub seed: u64,
    pub mu: f64,
    pub sigma: f64,
    pub direction: Direction,
    pub knowledge: Knowledge,
    pub interaction: Option<InteractionKind>,
    pub crows_starts: usize,
    pub binarize_level: f64,
}

impl StudyConfig {
    pub fn new(presets: Vec<Preset>, methods: Vec<Method>, d_values: Vec<f64>, replicates: usize, seed: u64) -> Self {
        StudyConfig {
            presets,
            methods,
            d_values,
            actives: 1,
            replicates,
            seed,
            mu: 0.0,
            sigma: 1.0,
            direction: Direction::Positive,
            knowledge: Knowledge::Known,
            interaction: None,
            crows_starts: DEFAULT_STARTS,
            binarize_level: DEFAULT_BINARIZE_LEVEL,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return param(format!("sigma must be positive, got {}", self.sigma));
        }
        if let Some(d) = self.d_values.iter().find(|d| !(**d > 0.0 && d.is_finite())) {
            return param(format!("effect size {d} must be positive"));
        }
        match self.interaction.map(|i| i.heredity) {
            Some(Heredity::Strong) if self.actives < 2 => param("strong heredity needs at least two actives"),
            Some(Heredity::Weak) if self.actives < 1 => param("weak heredity needs at least one active"),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StudyRow {
    pub method: Method,
    pub preset: String,
    pub n: usize,
    pub k: usize,
    pub c: usize,
    pub d: f64,
    pub a: usize,
    /// Replicates that produced a score.
    pub replicates: usize,
    pub tpr: f64,
    pub tpr_se: f64,
    pub fpr: f64,
    pub fpr_se: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct StudyReport {
    pub rows: Vec<StudyRow>,
}

impl StudyReport {
    pub fn find(&self, method: Method, preset: &str, d: f64) -> Option<&StudyRow> {
        self.rows.iter().find(|r| r.method == method && r.preset == preset && r.d == d)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["method", "preset", "n", "k", "c", "D", "a", "replicates", "tpr", "tpr_se", "fpr", "fpr_se", "seed"])?;
        for r in &self.rows {
            w.write_record([
                r.method.name().to_string(),
                r.preset.clone(),
                r.n.to_string(),
                r.k.to_string(),
                r.c.to_string(),
                format!("{:?}", r.d),
                r.a.to_string(),
                r.replicates.to_string(),
                format!("{:?}", r.tpr),
                format!("{:?}", r.tpr_se),
                format!("{:?}", r.fpr),
                format!("{:?}", r.fpr_se),
                r.seed.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Designs one preset contributes to a study.
#[derive(Debug, Clone)]
pub struct PreparedDesigns {
    pub crows: Option<Design>,
    pub std: Option<Design>,
    pub ocow: Option<Design>,
    /// Error tolerance `E` of the pooling decoder.
    pub std_errors: usize,
}

/// One compound per well, in `±1` coding.
pub fn single_compound_design(k: usize) -> Result<Design> {
    let mut entries = vec![-1i8; k * k];
    for i in 0..k {
        entries[i * k + i] = 1;
    }
    Design::new(k, k, 1, entries)
}

pub fn prepare(preset: &Preset, config: &StudyConfig) -> Result<PreparedDesigns> {
    let wants = |m| config.methods.contains(&m);
    let crows = if wants(Method::Crows) {
        let seed = derive(config.seed, &[key_hash("design"), key_hash(&preset.name)]);
        let built = construct(&ConstructConfig::new(preset.n, preset.k, preset.c).starts(config.crows_starts).seed(seed))?;
        Some(built.best.into_design())
    } else {
        None
    };
    let std = if wants(Method::PoolHits) {
        let p = preset.std;
        Some(std_design(preset.k, p.q, p.a, p.gamma, Some(preset.c))?.to_design())
    } else {
        None
    };
    let ocow = if wants(Method::Ocow) { Some(single_compound_design(preset.k)?) } else { None };
    Ok(PreparedDesigns { crows, std, ocow, std_errors: preset.std.e })
}

/// Seed shared by every method for replicate `r` of a cell, so methods see
/// the same active sets and pilot draws.
pub fn replicate_seed(master: u64, preset: &str, d: f64, a: usize, r: usize) -> u64 {
    derive(master, &[key_hash(preset), d.to_bits(), a as u64, r as u64])
}

fn draw_scenario(config: &StudyConfig, k: usize, d: f64, rs: u64) -> Result<Scenario> {
    let mut r = rng(derive(rs, &[1]));
    let active = sample_active(&mut r, k, config.actives)?;
    let interaction = match config.interaction {
        None => None,
        Some(kind) => {
            let pair = match kind.heredity {
                Heredity::Strong => (active[0], active[1]),
                Heredity::Weak => {
                    let inert: Vec<usize> = (0..k).filter(|j| !active.contains(j)).collect();
                    if inert.is_empty() {
                        return param("weak heredity needs an inactive compound");
                    }
                    (active[0], inert[r.random_range(0..inert.len())])
                }
            };
            Some(Interaction { pair, kind })
        }
    };
    let mut active = active;
    active.sort_unstable();
    Ok(Scenario { mu: config.mu, sigma: config.sigma, d, active, direction: config.direction, interaction })
}

fn replicate(config: &StudyConfig, design: &Design, e: usize, method: Method, d: f64, rs: u64) -> Result<Rates> {
    let scenario = draw_scenario(config, design.k(), d, rs)?;
    let y = gen_response(design, &scenario, derive(rs, &[2, method.id()]))?;
    let pilot = match config.knowledge {
        Knowledge::Known => None,
        Knowledge::Pilot => Some(pilot_draw(config.mu, config.sigma, derive(rs, &[3]))?),
    };
    let (mu, sigma) = pilot.map_or((config.mu, config.sigma), |p| (p.mean, p.sd()));
    let dir = config.direction;
    let declared = match method {
        Method::Crows => analyze(design, &y, &AnalyzeOptions::new(sigma, dir))?.hits,
        Method::PoolHits => {
            let labels = binarize_wells(&y, mu, sigma, dir, config.binarize_level)?;
            poolhits_decode(design, &labels, e)?.hits
        }
        Method::Ocow => match pilot {
            None => ocow_analyze(&y, mu, sigma, dir)?,
            Some(p) => ocow_lenth_analyze(&y, p.mean, dir)?.hits,
        },
    };
    Ok(evaluate(&declared, &scenario.active, design.k()))
}

fn mean_se(values: &[f64]) -> (f64, f64) {
    let r = values.len();
    if r == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / r as f64;
    if r == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (r - 1) as f64;
    (mean, (var / r as f64).sqrt())
}

/// Runs every replicate of one (preset, method, D) cell.
pub fn run_cell(config: &StudyConfig, preset: &Preset, designs: &PreparedDesigns, method: Method, d: f64) -> Result<StudyRow> {
    let design = match method {
        Method::Crows => designs.crows.as_ref(),
        Method::PoolHits => designs.std.as_ref(),
        Method::Ocow => designs.ocow.as_ref(),
    }
    .ok_or_else(|| Error::Parameter(format!("no {} design prepared for {}", method.name(), preset.name)))?;
    let rates: Vec<Rates> = (0..config.replicates)
        .into_par_iter()
        .map(|r| replicate(config, design, designs.std_errors, method, d, replicate_seed(config.seed, &preset.name, d, config.actives, r)))
        .collect::<Result<_>>()?;
    let (tpr, tpr_se) = mean_se(&rates.iter().map(|r| r.tpr).collect::<Vec<_>>());
    let (fpr, fpr_se) = mean_se(&rates.iter().map(|r| r.fpr).collect::<Vec<_>>());
    Ok(StudyRow {
        method,
        preset: preset.name.clone(),
        n: design.n(),
        k: design.k(),
        c: design.c(),
        d,
        a: config.actives,
        replicates: rates.len(),
        tpr,
        tpr_se,
        fpr,
        fpr_se,
        seed: config.seed,
    })
}

/// Runs the full grid; rows come out in (preset, method, D) order regardless
/// of scheduling.
pub fn run_study(config: &StudyConfig) -> Result<StudyReport> {
    config.validate()?;
    if config.replicates == 0 {
        return Ok(StudyReport::default());
    }
    let prepared: Vec<PreparedDesigns> = config.presets.par_iter().map(|p| prepare(p, config)).collect::<Result<_>>()?;
    let cells: Vec<(usize, Method, f64)> = (0..config.presets.len())
        .flat_map(|p| config.methods.iter().flat_map(move |&m| config.d_values.iter().map(move |&d| (p, m, d))))
        .collect();
    let rows = cells
        .par_iter()
        .map(|&(p, m, d)| run_cell(config, &config.presets[p], &prepared[p], m, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(StudyReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::presets::desk;

    #[test]
    fn zero_replicates_is_empty() {
        let cfg = StudyConfig::new(desk(), vec![Method::Ocow], vec![1.0], 0, 1);
        assert!(run_study(&cfg).unwrap().rows.is_empty());
    }

    #[test]
    fn single_compound_layout() {
        let d = single_compound_design(3).unwrap();
        assert_eq!(d.row(1), &[-1, 1, -1]);
    }

    #[test]
    fn rows_in_grid_order() {
        let mut cfg = StudyConfig::new(desk()[..1].to_vec(), vec![Method::PoolHits, Method::Ocow], vec![1.0, 4.0], 20, 3);
        cfg.crows_starts = 2;
        let report = run_study(&cfg).unwrap();
        let order: Vec<(Method, f64)> = report.rows.iter().map(|r| (r.method, r.d)).collect();
        assert_eq!(order, vec![(Method::PoolHits, 1.0), (Method::PoolHits, 4.0), (Method::Ocow, 1.0), (Method::Ocow, 4.0)]);
        assert!(report.rows.iter().all(|r| (0.0..=1.0).contains(&r.tpr) && (0.0..=1.0).contains(&r.fpr)));
    }

    #[test]
    fn strong_heredity_needs_two_actives() {
        let mut cfg = StudyConfig::new(desk(), vec![Method::Ocow], vec![1.0], 5, 1);
        cfg.interaction = Some("strong-synergistic".parse().unwrap());
        assert!(run_study(&cfg).is_err());
        cfg.actives = 2;
        assert!(run_study(&cfg).is_ok());
    }
}
