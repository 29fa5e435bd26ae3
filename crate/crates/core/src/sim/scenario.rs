use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::Serialize;

use crate::design::Design;
use crate::error::{param, Error, Result};
use crate::seed;
use crate::Direction;

/// Effect sizes, in units of sigma, used throughout the comparison study.
pub const PAPER_D_GRID: [f64; 7] = [0.75, 1.0, 1.5, 2.0, 2.25, 3.0, 4.0];

/// Runs in the pilot experiment used when mu and sigma are unknown.
pub const PILOT_RUNS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InteractionSign {
    Synergistic,
    Antagonistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Heredity {
    /// Both parents are active.
    Strong,
    /// Exactly one parent is active.
    Weak,
}

/// Kind of interaction a study plants; the pair itself is drawn per replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct InteractionKind {
    pub heredity: Heredity,
    pub sign: InteractionSign,
}

impl std::str::FromStr for InteractionKind {
    type Err = Error;

    /// Parses `strong-synergistic`, `weak-antagonistic` and so on.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let (h, g) = lower
            .split_once('-')
            .ok_or_else(|| Error::Parameter(format!("interaction {s:?} is not of the form heredity-sign")))?;
        let heredity = match h {
            "strong" => Heredity::Strong,
            "weak" => Heredity::Weak,
            _ => return param(format!("unknown heredity {h:?}")),
        };
        let sign = match g {
            "synergistic" => InteractionSign::Synergistic,
            "antagonistic" => InteractionSign::Antagonistic,
            _ => return param(format!("unknown interaction sign {g:?}")),
        };
        Ok(InteractionKind { heredity, sign })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Interaction {
    pub pair: (usize, usize),
    pub kind: InteractionKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Knowledge {
    #[default]
    Known,
    Pilot,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub mu: f64,
    pub sigma: f64,
    /// Pool-mean difference of an active compound, in units of sigma.
    pub d: f64,
    /// Zero-based active compounds.
    pub active: Vec<usize>,
    pub direction: Direction,
    pub interaction: Option<Interaction>,
}

impl Scenario {
    pub fn new(mu: f64, sigma: f64, d: f64, active: Vec<usize>) -> Self {
        Scenario { mu, sigma, d, active, direction: Direction::Positive, interaction: None }
    }

    fn check(&self, k: usize) -> Result<()> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return param(format!("sigma must be nonnegative, got {}", self.sigma));
        }
        if !self.d.is_finite() {
            return param("effect size must be finite");
        }
        if self.active.len() > k {
            return param(format!("{} active compounds among only {k}", self.active.len()));
        }
        let mut seen = vec![false; k];
        for &j in &self.active {
            if j >= k {
                return Err(Error::Index(format!("active compound {j} outside 0..{k}")));
            }
            if std::mem::replace(&mut seen[j], true) {
                return param(format!("active compound {j} listed twice"));
            }
        }
        if let Some(int) = &self.interaction {
            let (p, r) = int.pair;
            if p >= k || r >= k || p == r {
                return param(format!("interaction pair ({p}, {r}) is not two distinct compounds"));
            }
            let parents = usize::from(seen[p]) + usize::from(seen[r]);
            let ok = match int.kind.heredity {
                Heredity::Strong => parents == 2,
                Heredity::Weak => parents == 1,
            };
            if !ok {
                return param(format!("pair ({p}, {r}) has {parents} active parents, incompatible with {:?} heredity", int.kind.heredity));
            }
        }
        Ok(())
    }

    /// Noise-free well means: `beta_0 + X beta` plus the interaction term,
    /// with the intercept chosen so that a well holding no compound sits at
    /// `mu`.
    pub fn mean_response(&self, design: &Design) -> Result<Vec<f64>> {
        self.check(design.k())?;
        let sign = self.direction.sign();
        let half = sign * self.d / 2.0 * self.sigma;
        let gamma = match &self.interaction {
            None => 0.0,
            Some(int) => {
                let g = sign * self.d / 4.0 * self.sigma;
                match int.kind.sign {
                    InteractionSign::Synergistic => g,
                    InteractionSign::Antagonistic => -g,
                }
            }
        };
        // the all -1 row: beta_0 - a * half + gamma * (-1)(-1) = mu
        let beta0 = self.mu + self.active.len() as f64 * half - gamma;
        Ok((0..design.n())
            .map(|i| {
                let main: f64 = self.active.iter().map(|&j| half * f64::from(design.get(i, j))).sum();
                let inter = self
                    .interaction
                    .map_or(0.0, |int| gamma * f64::from(design.get(i, int.pair.0) * design.get(i, int.pair.1)));
                beta0 + main + inter
            })
            .collect())
    }
}

/// `y = beta_0 + X beta + eps` with iid `Normal(0, sigma^2)` noise, including
/// the interaction term when the scenario has one.
pub fn gen_response(design: &Design, scenario: &Scenario, seed: u64) -> Result<Vec<f64>> {
    let mut y = scenario.mean_response(design)?;
    let mut rng = seed::rng(seed);
    for v in &mut y {
        let z: f64 = rng.sample(StandardNormal);
        *v += scenario.sigma * z;
    }
    Ok(y)
}

/// Same as [`gen_response`] but insists on an interaction term.
pub fn gen_interaction_response(design: &Design, scenario: &Scenario, seed: u64) -> Result<Vec<f64>> {
    if scenario.interaction.is_none() {
        return param("scenario has no interaction");
    }
    gen_response(design, scenario, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PilotDraw {
    pub mean: f64,
    pub variance: f64,
}

impl PilotDraw {
    pub fn sd(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// Summary statistics of a pilot of [`PILOT_RUNS`] inert wells:
/// `Xbar ~ N(mu, sigma^2/12)` and `11 S^2 / sigma^2 ~ chi^2_11`.
pub fn pilot_draw(mu: f64, sigma: f64, seed: u64) -> Result<PilotDraw> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return param(format!("sigma must be nonnegative, got {sigma}"));
    }
    let mut rng = seed::rng(seed);
    let runs = PILOT_RUNS as f64;
    let z: f64 = rng.sample(StandardNormal);
    let df = runs - 1.0;
    let chi = ChiSquared::new(df).expect("positive degrees of freedom").sample(&mut rng);
    Ok(PilotDraw { mean: mu + sigma / runs.sqrt() * z, variance: sigma * sigma * chi / df })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Rates {
    pub tpr: f64,
    pub fpr: f64,
}

/// True and false positive rates of `declared` against `truth`. With no true
/// actives the TPR is vacuously 1; with no inactives the FPR is 0.
pub fn evaluate(declared: &[usize], truth: &[usize], k: usize) -> Rates {
    let tp = declared.iter().filter(|j| truth.contains(j)).count();
    let fp = declared.len() - tp;
    let tpr = if truth.is_empty() { 1.0 } else { tp as f64 / truth.len() as f64 };
    let inert = k - truth.len();
    let fpr = if inert == 0 { 0.0 } else { fp as f64 / inert as f64 };
    Rates { tpr, fpr }
}

/// Draws `a` distinct compounds uniformly, returned in draw order.
pub fn sample_active<R: Rng>(rng: &mut R, k: usize, a: usize) -> Result<Vec<usize>> {
    if a > k {
        return param(format!("cannot draw {a} actives from {k} compounds"));
    }
    Ok(rand::seq::index::sample(rng, k, a).into_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_wells(k: usize) -> Design {
        let rows: Vec<Vec<i8>> = (0..k).map(|i| (0..k).map(|j| if i == j { 1 } else { -1 }).collect()).collect();
        Design::from_rows(&rows, 1).unwrap()
    }

    #[test]
    fn no_actives_is_flat() {
        let d = single_wells(4);
        let s = Scenario::new(3.0, 1.0, 2.0, vec![]);
        assert_eq!(s.mean_response(&d).unwrap(), vec![3.0; 4]);
    }

    #[test]
    fn one_active_shifts_its_wells_by_d() {
        let d = Design::from_rows(&[vec![1, -1, 1], vec![-1, 1, 1], vec![-1, -1, -1]], 2).unwrap();
        let s = Scenario::new(10.0, 1.0, 2.5, vec![2]);
        assert_eq!(s.mean_response(&d).unwrap(), vec![12.5, 12.5, 10.0]);
        let mut neg = s.clone();
        neg.direction = Direction::Negative;
        assert_eq!(neg.mean_response(&d).unwrap(), vec![7.5, 7.5, 10.0]);
    }

    #[test]
    fn fixed_seed_reproduces() {
        let d = single_wells(5);
        let s = Scenario::new(0.0, 1.0, 1.0, vec![1]);
        assert_eq!(gen_response(&d, &s, 9).unwrap(), gen_response(&d, &s, 9).unwrap());
        assert_ne!(gen_response(&d, &s, 9).unwrap(), gen_response(&d, &s, 10).unwrap());
    }

    #[test]
    fn scenario_errors() {
        let d = single_wells(3);
        assert!(Scenario::new(0.0, 1.0, 1.0, vec![0, 1, 2, 0]).mean_response(&d).is_err());
        assert!(Scenario::new(0.0, 1.0, 1.0, vec![3]).mean_response(&d).is_err());
        let mut s = Scenario::new(0.0, 1.0, 1.0, vec![0]);
        s.interaction = Some(Interaction {
            pair: (0, 1),
            kind: InteractionKind { heredity: Heredity::Strong, sign: InteractionSign::Synergistic },
        });
        assert!(s.mean_response(&d).is_err());
        s.interaction.as_mut().unwrap().kind.heredity = Heredity::Weak;
        assert!(s.mean_response(&d).is_ok());
    }

    #[test]
    fn evaluate_examples() {
        assert_eq!(evaluate(&[3], &[3], 10), Rates { tpr: 1.0, fpr: 0.0 });
        assert_eq!(evaluate(&[], &[3], 10), Rates { tpr: 0.0, fpr: 0.0 });
        assert_eq!(evaluate(&[3, 5], &[3], 11), Rates { tpr: 1.0, fpr: 0.1 });
        assert_eq!(evaluate(&[], &[], 4), Rates { tpr: 1.0, fpr: 0.0 });
        assert_eq!(evaluate(&[1], &[], 4), Rates { tpr: 1.0, fpr: 0.25 });
    }

    #[test]
    fn pilot_limits() {
        let p = pilot_draw(2.0, 0.0, 1).unwrap();
        assert_eq!((p.mean, p.variance), (2.0, 0.0));
        assert_eq!(pilot_draw(0.0, 1.0, 5).unwrap(), pilot_draw(0.0, 1.0, 5).unwrap());
    }

    #[test]
    fn interaction_parsing() {
        let k: InteractionKind = "strong-synergistic".parse().unwrap();
        assert_eq!(k, InteractionKind { heredity: Heredity::Strong, sign: InteractionSign::Synergistic });
        assert!("medium-synergistic".parse::<InteractionKind>().is_err());
        assert!("strong".parse::<InteractionKind>().is_err());
    }
}
