//! Scenario files: JSON descriptions of an algebra together with optional
//! covering, partition, actions, forms and connection sections.

use std::path::Path;

use qtangent::connection::ConnectionCoefficients;
use qtangent::covering::{block_ideal, generated_ideal, vanishing_ideal, Covering};
use qtangent::linalg::Subspace;
use qtangent::partition::{random_zeta_partition, Partition, PartitionElement};
use qtangent::tangent::ActionAssignment;
use qtangent::{Scalar, StarAlgebra};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub name: Option<String>,
    pub kappa: Scalar,
    pub d: usize,
    pub algebra: AlgebraDef,
    #[serde(default)]
    pub covering: Option<CoveringDef>,
    #[serde(default)]
    pub partition: Option<PartitionDef>,
    #[serde(default)]
    pub actions: Option<Vec<ActionDef>>,
    #[serde(default)]
    pub forms: Option<FormsDef>,
    #[serde(default)]
    pub connection: Option<ConnectionDef>,
    #[serde(default)]
    pub hopf: Option<HopfDef>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraDef {
    Matrix(usize),
    Moyal(usize),
    Functions(usize),
    DirectSum(Vec<AlgebraDef>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CoveringDef {
    Trivial,
    /// One ideal per chart, each the sum of the listed blocks.
    Blocks(Vec<Vec<usize>>),
    /// Function model: one chart per region, the ideal vanishing on it.
    Vanishing(Vec<Vec<usize>>),
    /// One ideal per chart, generated by the listed elements.
    Generators(Vec<Vec<Vec<Scalar>>>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pair {
    pub chi: Vec<Scalar>,
    pub zeta: Vec<Scalar>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PartitionDef {
    Unit,
    Zetas(Vec<Vec<Scalar>>),
    Pairs(Vec<Pair>),
    Random { parts: usize },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ActionDef {
    Canonical(usize),
    BlockCanonical,
    Inner(Vec<Vec<Scalar>>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormsDef {
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    4
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GammaDef {
    Zero,
    RandomAntiHermitian,
    /// Every entry equal to this multiple of the unit.
    Scalar(Scalar),
    /// `table[μ][ν][λ]`, multiples of the unit.
    Table(Vec<Vec<Vec<Scalar>>>),
    /// `elements[μ][ν][λ]`, central elements in chart coordinates.
    Elements(Vec<Vec<Vec<Vec<Scalar>>>>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConnectionDef {
    /// One entry per chart.
    pub gamma: Vec<GammaDef>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HopfDef {
    pub max_degree: u32,
}

/// A validated scenario with every engine object constructed.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub algebra: StarAlgebra,
    pub covering: Option<Covering>,
    pub partition: Option<Partition>,
    pub actions: Option<Vec<ActionAssignment>>,
    pub gamma: Option<Vec<ConnectionCoefficients>>,
}

fn invalid(field: &str, e: impl std::fmt::Display) -> CliError {
    CliError::Invalid { field: field.to_string(), message: e.to_string() }
}

fn build_algebra(def: &AlgebraDef) -> Result<StarAlgebra, CliError> {
    let r = match def {
        AlgebraDef::Matrix(n) => StarAlgebra::matrix(*n),
        AlgebraDef::Moyal(n) => StarAlgebra::moyal(*n),
        AlgebraDef::Functions(n) => StarAlgebra::functions(*n),
        AlgebraDef::DirectSum(parts) => {
            let built = parts.iter().map(build_algebra).collect::<Result<Vec<_>, _>>()?;
            StarAlgebra::direct_sum_of(&built)
        }
    };
    r.map_err(|e| invalid("algebra", e))
}

fn build_covering(alg: &StarAlgebra, def: &CoveringDef) -> Result<Covering, CliError> {
    let ideals: Result<Vec<Subspace>, _> = match def {
        CoveringDef::Trivial => return Covering::trivial(alg).map_err(|e| invalid("covering", e)),
        CoveringDef::Blocks(b) => b.iter().map(|bs| block_ideal(alg, bs)).collect(),
        CoveringDef::Vanishing(r) => r.iter().map(|region| vanishing_ideal(alg, region)).collect(),
        CoveringDef::Generators(g) => g.iter().map(|gens| generated_ideal(alg, gens)).collect(),
    };
    let ideals = ideals.map_err(|e| invalid("covering", e))?;
    Covering::new(alg, &ideals).map_err(|e| invalid("covering", e))
}

fn build_partition(alg: &StarAlgebra, def: &PartitionDef, seed: u64) -> Result<Partition, CliError> {
    let r = match def {
        PartitionDef::Unit => Partition::unit(alg),
        PartitionDef::Zetas(z) => Partition::from_zetas(alg, z),
        PartitionDef::Pairs(pairs) => {
            for (k, p) in pairs.iter().enumerate() {
                for v in [&p.chi, &p.zeta] {
                    alg.check_element(v).map_err(|e| invalid(&format!("partition.pairs[{k}]"), e))?;
                }
            }
            Ok(Partition::from_pairs(pairs.iter().map(|p| PartitionElement { chi: p.chi.clone(), zeta: p.zeta.clone() }).collect()))
        }
        PartitionDef::Random { parts } => random_zeta_partition(alg, *parts, &mut ChaCha8Rng::seed_from_u64(seed)),
    };
    r.map_err(|e| invalid("partition", e))
}

fn build_actions(file: &ScenarioFile, cov: &Covering, defs: &[ActionDef]) -> Result<Vec<ActionAssignment>, CliError> {
    if defs.len() != cov.len() {
        return Err(invalid("actions", format!("expected one action per chart ({} charts), found {}", cov.len(), defs.len())));
    }
    let mut out = Vec::new();
    for (alpha, def) in defs.iter().enumerate() {
        let field = format!("actions[{alpha}]");
        let chart = &cov.charts()[alpha].algebra;
        let act = match def {
            ActionDef::Canonical(n) => {
                if *n < file.d + 1 {
                    return Err(invalid(&field, format!("canonical({n}) needs N >= d + 1 = {}", file.d + 1)));
                }
                ActionAssignment::canonical_on(chart, *n, file.d, file.kappa.clone())
            }
            ActionDef::BlockCanonical => {
                // the chart has the same structure as its preimage blocks only for the trivial covering
                let base = cov.base();
                if chart.dim() != base.dim() {
                    return Err(invalid(&field, "block_canonical needs the trivial covering"));
                }
                ActionAssignment::block_canonical(base, file.d, file.kappa.clone())
                    .and_then(|a| ActionAssignment::from_inner(chart, file.d, file.kappa.clone(), a.generators().unwrap_or_default().to_vec()))
            }
            ActionDef::Inner(gens) => {
                if gens.len() != file.d + 1 {
                    return Err(invalid(&field, format!("expected {} inner generators, found {}", file.d + 1, gens.len())));
                }
                ActionAssignment::from_inner(chart, file.d, file.kappa.clone(), gens.clone())
            }
        }
        .map_err(|e| invalid(&field, e))?;
        if let Some(f) = act.verify().failures().next() {
            return Err(invalid(&field, format!("{} fails: {}", f.id, f.witness.clone().unwrap_or_default())));
        }
        out.push(act);
    }
    Ok(out)
}

fn build_gamma(actions: &[ActionAssignment], def: &ConnectionDef, seed: u64) -> Result<Vec<ConnectionCoefficients>, CliError> {
    if def.gamma.len() != actions.len() {
        return Err(invalid("connection.gamma", format!("expected one entry per chart ({}), found {}", actions.len(), def.gamma.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for (alpha, (g, act)) in def.gamma.iter().zip(actions).enumerate() {
        let field = format!("connection.gamma[{alpha}]");
        let r = act.rank();
        let shape_ok = |len: usize| len == r;
        let built = match g {
            GammaDef::Zero => Ok(ConnectionCoefficients::zero(act)),
            GammaDef::RandomAntiHermitian => Ok(ConnectionCoefficients::random_anti_hermitian(&mut rng, act)),
            GammaDef::Scalar(s) => ConnectionCoefficients::scalar(act, |_, _, _| s.clone()),
            GammaDef::Table(t) => {
                if !shape_ok(t.len()) || t.iter().any(|x| !shape_ok(x.len()) || x.iter().any(|y| !shape_ok(y.len()))) {
                    return Err(invalid(&field, format!("table must be {r}x{r}x{r}")));
                }
                ConnectionCoefficients::scalar(act, |mu, nu, l| t[mu][nu][l].clone())
            }
            GammaDef::Elements(e) => ConnectionCoefficients::new(act, e.clone()),
        };
        out.push(built.map_err(|e| invalid(&field, e))?);
    }
    Ok(out)
}

impl Scenario {
    pub fn parse(text: &str, seed: u64) -> Result<Scenario, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let (line, column) = (e.inner().line(), e.inner().column());
            let full = e.inner().to_string();
            let message = full.strip_suffix(&format!(" at line {line} column {column}")).unwrap_or(&full).to_string();
            CliError::Parse { path: e.path().to_string(), line, column, message }
        })?;
        Scenario::build(file, seed)
    }

    pub fn load(path: &Path, seed: u64) -> Result<Scenario, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Scenario::parse(&text, seed)
    }

    pub fn build(file: ScenarioFile, seed: u64) -> Result<Scenario, CliError> {
        if !file.kappa.is_positive_real() {
            return Err(invalid("kappa", format!("kappa must be positive, found {}", file.kappa)));
        }
        let algebra = build_algebra(&file.algebra)?;
        let covering = match (&file.covering, &file.actions) {
            (Some(c), _) => Some(build_covering(&algebra, c)?),
            (None, Some(_)) => Some(Covering::trivial(&algebra).map_err(|e| invalid("covering", e))?),
            (None, None) => None,
        };
        let partition = file.partition.as_ref().map(|p| build_partition(&algebra, p, seed)).transpose()?;
        let actions = match (&file.actions, &covering) {
            (Some(defs), Some(cov)) => Some(build_actions(&file, cov, defs)?),
            _ => None,
        };
        let gamma = match (&file.connection, &actions) {
            (Some(def), Some(acts)) => Some(build_gamma(acts, def, seed)?),
            (Some(_), None) => return Err(CliError::MissingSection("actions")),
            _ => None,
        };
        Ok(Scenario { file, algebra, covering, partition, actions, gamma })
    }

    pub fn covering(&self) -> Result<&Covering, CliError> {
        self.covering.as_ref().ok_or(CliError::MissingSection("covering"))
    }

    pub fn partition(&self) -> Result<&Partition, CliError> {
        self.partition.as_ref().ok_or(CliError::MissingSection("partition"))
    }

    pub fn actions(&self) -> Result<&[ActionAssignment], CliError> {
        self.actions.as_deref().ok_or(CliError::MissingSection("actions"))
    }

    pub fn gamma(&self) -> Result<&[ConnectionCoefficients], CliError> {
        self.gamma.as_deref().ok_or(CliError::MissingSection("connection"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn actions_default_to_trivial_covering() {
        let s = Scenario::parse(r#"{"kappa": "1/2", "d": 1, "algebra": {"matrix": 2}, "actions": [{"canonical": 2}]}"#, 0).unwrap();
        assert_eq!(s.covering().unwrap().len(), 1);
        assert_eq!(s.actions().unwrap().len(), 1);
    }

    #[test]
    fn unknown_fields_rejected() {
        let e = Scenario::parse(r#"{"kappa": "1", "d": 1, "algebra": {"matrix": 2}, "extra": 0}"#, 0).unwrap_err();
        assert!(matches!(e, CliError::Parse { .. }), "{e}");
    }

    #[test]
    fn connection_needs_actions() {
        let e = Scenario::parse(r#"{"kappa": "1", "d": 1, "algebra": {"matrix": 2}, "connection": {"gamma": ["zero"]}}"#, 0);
        assert!(e.is_err());
    }
}
