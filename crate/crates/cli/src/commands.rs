//! Command dispatch: each command runs module verifications on a scenario and
//! collects timed check records.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use qtangent::connection::{curvature_components, curvature_cross_check, verify_connection_axioms, AxiomSample};
use qtangent::forms::{d_locality_check, dd_witness, duality_check, wedge_compat_check, DerivationBasis, FormN};
use qtangent::kappa::hopf_axiom_check;
use qtangent::partition::{functional, reconstruction_check, verify_adapted, verify_adapted_closure, verify_partition, verify_subordinate};
use qtangent::tangent::{Atlas, LocalDerivation};
use qtangent::{linalg, Report, Scalar, StarAlgebra};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::scenario::Scenario;
use crate::CliError;

pub const REPORT_VERSION: u32 = 1;
const DEFAULT_HOPF_DEGREE: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    HopfCheck,
    PartitionCheck,
    CoveringCheck,
    AdaptedCheck,
    GlueDerivations,
    FormsCheck,
    Curvature,
    All,
}

impl Command {
    pub const NAMES: [&'static str; 8] =
        ["hopf-check", "partition-check", "covering-check", "adapted-check", "glue-derivations", "forms-check", "curvature", "all"];

    pub fn name(self) -> &'static str {
        use Command::*;
        let i = match self {
            HopfCheck => 0,
            PartitionCheck => 1,
            CoveringCheck => 2,
            AdaptedCheck => 3,
            GlueDerivations => 4,
            FormsCheck => 5,
            Curvature => 6,
            All => 7,
        };
        Self::NAMES[i]
    }
}

impl FromStr for Command {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        use Command::*;
        Ok(match s {
            "hopf-check" => HopfCheck,
            "partition-check" => PartitionCheck,
            "covering-check" => CoveringCheck,
            "adapted-check" => AdaptedCheck,
            "glue-derivations" => GlueDerivations,
            "forms-check" => FormsCheck,
            "curvature" => Curvature,
            "all" => All,
            other => return Err(format!("unknown command `{other}` (expected one of {})", Self::NAMES.join(", "))),
        })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub millis: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureEntry {
    pub chart: usize,
    pub mu: usize,
    pub nu: usize,
    pub lambda: usize,
    pub tau: usize,
    pub value: Vec<Scalar>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub version: u32,
    pub command: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
    /// Nonzero curvature components, present for `curvature`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvature: Option<Vec<CurvatureEntry>>,
}

impl RunReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| c.status == Status::Fail).count()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub seed: u64,
    pub max_degree: Option<u32>,
}

struct Collector {
    checks: Vec<CheckRecord>,
    curvature: Option<Vec<CurvatureEntry>>,
}

impl Collector {
    /// Runs `f` and records its checks under `prefix`, all stamped with the elapsed time.
    fn timed(&mut self, prefix: &str, f: impl FnOnce() -> Result<Report, CliError>) -> Result<(), CliError> {
        let start = Instant::now();
        let report = f()?;
        let millis = start.elapsed().as_millis() as u64;
        for c in report.checks {
            self.checks.push(CheckRecord {
                id: if prefix.is_empty() { c.id } else { format!("{prefix}/{}", c.id) },
                status: if c.passed { Status::Pass } else { Status::Fail },
                witness: c.witness,
                millis,
            });
        }
        Ok(())
    }
}

fn engine(e: qtangent::Error) -> CliError {
    CliError::Engine(e)
}

fn random_central<R: Rng>(rng: &mut R, alg: &StarAlgebra) -> Vec<Scalar> {
    let mut v = alg.zero();
    for b in alg.center().basis() {
        linalg::axpy(&mut v, &Scalar::complex(rng.gen_range(-4..=4), rng.gen_range(-4..=4)), b);
    }
    v
}

fn atlas(s: &Scenario) -> Result<Result<Atlas, qtangent::Error>, CliError> {
    let cov = s.covering()?.clone();
    let p = s.partition()?.clone();
    let acts = s.actions()?.to_vec();
    Ok(Atlas::new(cov, p, acts))
}

fn hopf(s: &Scenario, opts: &Options, out: &mut Collector) -> Result<(), CliError> {
    let degree = opts.max_degree.or(s.file.hopf.as_ref().map(|h| h.max_degree)).unwrap_or(DEFAULT_HOPF_DEGREE);
    let (d, kappa) = (s.file.d, s.file.kappa.clone());
    out.timed("hopf", || Ok(hopf_axiom_check(d, &kappa, degree)))
}

fn partition(s: &Scenario, out: &mut Collector) -> Result<(), CliError> {
    let p = s.partition()?;
    out.timed("partition/left", || Ok(verify_partition(&s.algebra, p, false)))?;
    out.timed("partition/right", || Ok(verify_partition(&s.algebra, p, true)))?;
    if let Some(cov) = &s.covering {
        if cov.len() == p.len() {
            out.timed("partition", || {
                let mut r = Report::new();
                let mut defined = true;
                for alpha in 0..cov.len() {
                    match functional(p, cov, alpha) {
                        Ok(_) => r.pass(format!("functional[{alpha}]")),
                        Err(e) => {
                            defined = false;
                            r.fail(format!("functional[{alpha}]"), e.to_string());
                        }
                    }
                }
                if defined {
                    r.extend("", reconstruction_check(p, cov).map_err(engine)?);
                }
                Ok(r)
            })?;
        }
    }
    Ok(())
}

fn covering(s: &Scenario, out: &mut Collector) -> Result<(), CliError> {
    let cov = s.covering()?;
    out.timed("covering", || Ok(cov.verify()))
}

fn adapted(s: &Scenario, out: &mut Collector) -> Result<(), CliError> {
    let cov = s.covering()?;
    let p = s.partition()?;
    out.timed("adapted", || verify_adapted(p, cov).map_err(engine))?;
    out.timed("adapted", || verify_adapted_closure(p, cov).map_err(engine))?;
    out.timed("adapted", || verify_subordinate(p, cov).map_err(engine))
}

fn glue(s: &Scenario, opts: &Options, out: &mut Collector) -> Result<(), CliError> {
    for (alpha, act) in s.actions()?.iter().enumerate() {
        out.timed(&format!("action[{alpha}]"), || Ok(act.verify()))?;
    }
    let atlas = match atlas(s)? {
        Ok(a) => a,
        Err(e) => {
            return out.timed("glue", || {
                let mut r = Report::new();
                r.fail("atlas", e.to_string());
                Ok(r)
            })
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for k in 0..4 {
        out.timed(&format!("glue[{k}]"), || {
            let locals = (0..atlas.len())
                .map(|alpha| {
                    let act = atlas.action(alpha);
                    act.derivation((0..act.rank()).map(|_| random_central(&mut rng, act.algebra())).collect())
                })
                .collect::<Result<Vec<LocalDerivation>, _>>()
                .map_err(engine)?;
            let g = atlas.glue(&locals).map_err(engine)?;
            let mut r = Report::new();
            r.record("leibniz", atlas.leibniz_witness(&g));
            let back = atlas.decompose(&g.operator);
            r.record(
                "decompose",
                match back {
                    Ok(b) if b == locals => None,
                    Ok(_) => Some("recovered coefficients differ from the input".into()),
                    Err(e) => Some(e.to_string()),
                },
            );
            for alpha in 0..atlas.len() {
                let proj = atlas.project_global(&g.operator, alpha);
                r.record(format!("project[{alpha}]"), atlas.action(alpha).algebra().leibniz_witness(&proj));
            }
            Ok(r)
        })?;
    }
    Ok(())
}

fn forms(s: &Scenario, opts: &Options, out: &mut Collector) -> Result<(), CliError> {
    let samples = s.file.forms.as_ref().map(|f| f.samples).unwrap_or(4);
    let actions = s.actions()?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for (alpha, act) in actions.iter().enumerate() {
        let basis = DerivationBasis::from_action(act).map_err(engine)?;
        out.timed(&format!("forms[{alpha}]"), || {
            let mut r = Report::new();
            for k in 0..samples {
                let degree = k % 2;
                let f = FormN::random(&mut rng, act.algebra(), degree, act.rank(), false);
                r.record(format!("dd[{k}]"), dd_witness(&basis, &f).map_err(engine)?);
            }
            r.extend("", duality_check(act).map_err(engine)?);
            Ok(r)
        })?;
    }
    if s.covering.is_some() && s.partition.is_some() {
        let atlas = match atlas(s)? {
            Ok(a) => a,
            Err(e) => {
                return out.timed("forms", || {
                    let mut r = Report::new();
                    r.fail("atlas", e.to_string());
                    Ok(r)
                })
            }
        };
        let rank = atlas.len() * (atlas.d() + 1);
        let global = DerivationBasis::global(&atlas);
        out.timed("forms", || {
            let mut r = Report::new();
            if let Err(e) = global {
                r.fail("global-basis", e.to_string());
                return Ok(r);
            }
            r.pass("global-basis");
            for k in 0..samples {
                let a = k % 2;
                let rho = FormN::random(&mut rng, atlas.base(), a, rank, false);
                let eta = FormN::random(&mut rng, atlas.base(), 1, rank, false);
                for alpha in 0..atlas.len() {
                    r.extend(&format!("sample[{k}]/"), wedge_compat_check(&atlas, &rho, &eta, alpha).map_err(engine)?);
                    r.extend(&format!("sample[{k}]/"), d_locality_check(&atlas, &rho, alpha).map_err(engine)?);
                }
            }
            Ok(r)
        })?;
    }
    Ok(())
}

fn curvature(s: &Scenario, opts: &Options, out: &mut Collector) -> Result<(), CliError> {
    let actions = s.actions()?;
    let gammas = s.gamma()?;
    let samples = s.file.connection.as_ref().map(|c| c.samples).unwrap_or(4);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut entries = Vec::new();
    for (alpha, (act, g)) in actions.iter().zip(gammas).enumerate() {
        out.timed(&format!("connection[{alpha}]"), || {
            let ss = (0..samples).map(|_| AxiomSample::random(&mut rng, act)).collect::<Result<Vec<_>, _>>().map_err(engine)?;
            let mut r = verify_connection_axioms(act, g, &ss);
            r.extend("", curvature_cross_check(act, g).map_err(engine)?);
            Ok(r)
        })?;
        let comps = curvature_components(act, g);
        let n = act.rank();
        for mu in 0..n {
            for nu in 0..n {
                for lambda in 0..n {
                    for tau in 0..n {
                        let v = comps.get(mu, nu, lambda, tau);
                        if !linalg::is_zero_vector(v) {
                            entries.push(CurvatureEntry { chart: alpha, mu, nu, lambda, tau, value: v.clone() });
                        }
                    }
                }
            }
        }
    }
    out.curvature = Some(entries);
    Ok(())
}

/// Runs a command. `all` runs every command whose sections are present.
pub fn run(command: Command, s: &Scenario, opts: &Options) -> Result<RunReport, CliError> {
    let mut out = Collector { checks: Vec::new(), curvature: None };
    match command {
        Command::HopfCheck => hopf(s, opts, &mut out)?,
        Command::PartitionCheck => partition(s, &mut out)?,
        Command::CoveringCheck => covering(s, &mut out)?,
        Command::AdaptedCheck => adapted(s, &mut out)?,
        Command::GlueDerivations => glue(s, opts, &mut out)?,
        Command::FormsCheck => forms(s, opts, &mut out)?,
        Command::Curvature => curvature(s, opts, &mut out)?,
        Command::All => {
            hopf(s, opts, &mut out)?;
            if s.partition.is_some() {
                partition(s, &mut out)?;
            }
            if s.covering.is_some() {
                covering(s, &mut out)?;
            }
            if s.covering.is_some() && s.partition.is_some() {
                adapted(s, &mut out)?;
            }
            if s.actions.is_some() && s.partition.is_some() {
                glue(s, opts, &mut out)?;
            }
            if s.actions.is_some() {
                forms(s, opts, &mut out)?;
            }
            if s.gamma.is_some() {
                curvature(s, opts, &mut out)?;
            }
        }
    }
    out.checks.sort_by(|a, b| a.id.cmp(&b.id));
    let passed = out.checks.iter().all(|c| c.status == Status::Pass);
    Ok(RunReport { version: REPORT_VERSION, command: command.to_string(), seed: opts.seed, passed, checks: out.checks, curvature: out.curvature })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_names_round_trip() {
        for name in Command::NAMES {
            let c: Command = name.parse().unwrap();
            assert_eq!(c.to_string(), name);
        }
        assert!("hopf".parse::<Command>().is_err());
    }

    #[test]
    fn status_serializes_lowercase() {
        assert_eq!(serde_json::to_string(&Status::Fail).unwrap(), "\"fail\"");
    }
}
