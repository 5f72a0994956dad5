//! Instance and scenario files.
//!
//! An instance is
//!
//! ```json
//! { "atoms": ["a", "b"], "weights": [0.5, 0.5],
//!   "partitions": { "T": [[0, 1]] }, "vectors": { "f": [1.0, -1.0] } }
//! ```
//!
//! with 0-based atom indices. The partition named `T` (if any) is the base
//! operator; otherwise the global mean is used. Serialisation is canonical:
//! maps are sorted by name and partition blocks are written in canonical
//! order, so parse → serialise is idempotent.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{LatticeVector, SampleSpace, MAX_ATOMS};
use crate::operator::CondExpOperator;
use crate::partition::Partition;
use crate::random;

/// Name of the partition used as the base operator `T`.
pub const BASE_NAME: &str = "T";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    atoms: Vec<String>,
    weights: Vec<f64>,
    #[serde(default)]
    partitions: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    vectors: BTreeMap<String, Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    space: Arc<SampleSpace>,
    partitions: BTreeMap<String, Partition>,
    vectors: BTreeMap<String, LatticeVector>,
}

/// Deserialises `text`, reporting the JSON path, line and column of the
/// first problem.
fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        Error::Parse {
            path,
            line: inner.line(),
            column: inner.column(),
            message: inner.to_string(),
        }
    })?;
    Ok(value)
}

impl Instance {
    pub fn new(
        space: Arc<SampleSpace>,
        partitions: BTreeMap<String, Partition>,
        vectors: BTreeMap<String, LatticeVector>,
    ) -> Result<Self> {
        let n = space.atom_count();
        for (name, p) in &partitions {
            if p.atom_count() != n {
                return Err(Error::InvalidPartition(format!(
                    "`{name}` covers {} atoms, space has {n}",
                    p.atom_count()
                )));
            }
        }
        for (name, v) in &vectors {
            if v.len() != n {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: v.len(),
                });
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite(format!("vector `{name}`")));
            }
        }
        Ok(Self {
            space,
            partitions,
            vectors,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: InstanceFile = from_json(text)?;
        if file.atoms.len() > MAX_ATOMS {
            return Err(Error::LimitExceeded {
                what: "atoms",
                value: file.atoms.len(),
                limit: MAX_ATOMS,
            });
        }
        let space = Arc::new(SampleSpace::with_atoms(file.atoms, file.weights)?);
        let n = space.atom_count();
        let partitions = file
            .partitions
            .into_iter()
            .map(|(name, blocks)| {
                let p = Partition::new(n, blocks)
                    .map_err(|e| Error::InvalidPartition(format!("`{name}`: {e}")))?;
                Ok((name, p))
            })
            .collect::<Result<_>>()?;
        let vectors = file
            .vectors
            .into_iter()
            .map(|(name, values)| (name, LatticeVector::new(values)))
            .collect();
        Self::new(space, partitions, vectors)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: 0,
            column: 0,
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    /// Canonical pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            atoms: self.space.atoms().to_vec(),
            weights: self.space.weights().to_vec(),
            partitions: self
                .partitions
                .iter()
                .map(|(k, p)| (k.clone(), p.blocks().to_vec()))
                .collect(),
            vectors: self
                .vectors
                .iter()
                .map(|(k, v)| (k.clone(), v.values().to_vec()))
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("instance serialises");
        s.push('\n');
        s
    }

    pub fn space(&self) -> &Arc<SampleSpace> {
        &self.space
    }

    pub fn partitions(&self) -> &BTreeMap<String, Partition> {
        &self.partitions
    }

    pub fn vectors(&self) -> &BTreeMap<String, LatticeVector> {
        &self.vectors
    }

    pub fn operator(&self, name: &str) -> Option<CondExpOperator> {
        self.partitions
            .get(name)
            .map(|p| CondExpOperator::new(self.space.clone(), p.clone()).expect("validated"))
    }

    /// The partition named `T`, or the global mean.
    pub fn base_operator(&self) -> CondExpOperator {
        self.operator(BASE_NAME)
            .unwrap_or_else(|| CondExpOperator::global(self.space.clone()))
    }
}

/// A random instance: weights in `[0.1, 1)`, a base partition `T` and
/// `partition_count − 1` further partitions `P1, P2, …`, each either a
/// refinement of `T` or an unrelated random partition.
pub fn generate_random_instance(seed: u64, atoms: usize, partition_count: usize) -> Result<Instance> {
    if atoms == 0 {
        return Err(Error::EmptySpace);
    }
    if atoms > MAX_ATOMS {
        return Err(Error::LimitExceeded {
            what: "atoms",
            value: atoms,
            limit: MAX_ATOMS,
        });
    }
    let mut rng = random::rng(seed);
    let space = random::space(&mut rng, atoms);
    let mut partitions = BTreeMap::new();
    if partition_count > 0 {
        let t = random::partition(&mut rng, atoms, (atoms / 2).max(1));
        for i in 1..partition_count {
            let p = if rng.gen_bool(0.5) {
                random::refinement(&mut rng, &t, 3)
            } else {
                random::partition(&mut rng, atoms, atoms)
            };
            partitions.insert(format!("P{i}"), p);
        }
        partitions.insert(BASE_NAME.to_string(), t);
    }
    Instance::new(space, partitions, BTreeMap::new())
}

/// An AR(1) scenario. `theta` has one entry (broadcast to every atom) or
/// one per atom; it must be constant on the blocks of `T`. The optional
/// `noise_levels` quantises the raw noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ar1Scenario {
    pub theta: Vec<f64>,
    pub steps: usize,
    pub noise_seed: u64,
    pub noise_scale: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_levels: Option<u32>,
}

impl Ar1Scenario {
    pub fn parse(text: &str) -> Result<Self> {
        let s: Self = from_json(text)?;
        if s.theta.is_empty() || s.theta.iter().chain([&s.noise_scale]).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("theta and noise_scale must be finite, theta nonempty".into()));
        }
        if s.steps == 0 {
            return Err(Error::InvalidArgument("steps must be positive".into()));
        }
        Ok(s)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
            path: path.display().to_string(),
            line: 0,
            column: 0,
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn theta_vector(&self, atoms: usize) -> Result<LatticeVector> {
        match self.theta.len() {
            1 => Ok(LatticeVector::constant(atoms, self.theta[0])),
            n if n == atoms => Ok(LatticeVector::new(self.theta.clone())),
            n => Err(Error::LengthMismatch {
                expected: atoms,
                found: n,
            }),
        }
    }

    pub fn noise_spec(&self) -> crate::ar1::NoiseSpec {
        crate::ar1::NoiseSpec {
            steps: self.steps,
            seed: self.noise_seed,
            scale: self.noise_scale,
            levels: self.noise_levels,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_instance() {
        let inst = Instance::parse(r#"{"atoms":["x"],"weights":[1.0]}"#).unwrap();
        assert_eq!(inst.base_operator().partition(), &Partition::trivial(1));
    }

    #[test]
    fn parse_errors_carry_location() {
        let err = Instance::parse("{\"atoms\":[\"a\"],\n\"weights\":[\"x\"]}").unwrap_err();
        match err {
            Error::Parse { path, line, .. } => {
                assert_eq!(path, "weights[0]");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
        let overlap = r#"{"atoms":["a","b"],"weights":[1,1],"partitions":{"U":[[0,1],[1]]}}"#;
        assert!(matches!(Instance::parse(overlap), Err(Error::InvalidPartition(_))));
        let zero = r#"{"atoms":["a","b"],"weights":[1,0]}"#;
        assert!(matches!(Instance::parse(zero), Err(Error::NonPositiveWeight { index: 1, .. })));
    }

    #[test]
    fn generated_round_trip() {
        let inst = generate_random_instance(1, 4, 2).unwrap();
        let text = inst.to_json();
        assert_eq!(Instance::parse(&text).unwrap().to_json(), text);
        assert_eq!(generate_random_instance(1, 4, 2).unwrap().to_json(), text);
        assert!(matches!(
            generate_random_instance(1, 65, 2),
            Err(Error::LimitExceeded { value: 65, .. })
        ));
    }

    #[test]
    fn scenario_theta_broadcast() {
        let s = Ar1Scenario::parse(r#"{"theta":[0.5],"steps":4,"noise_seed":7,"noise_scale":1.0}"#).unwrap();
        assert_eq!(s.theta_vector(3).unwrap().values(), &[0.5; 3]);
        assert!(s.theta_vector(1).is_ok());
        let two = Ar1Scenario { theta: vec![0.1, 0.2], ..s };
        assert!(matches!(two.theta_vector(3), Err(Error::LengthMismatch { .. })));
    }
}
