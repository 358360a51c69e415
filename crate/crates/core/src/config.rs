//! JSON model files. Every scalar is a string so exact rationals survive any JSON tooling.
//!
//! ```json
//! {
//!   "schema": "1",
//!   "ring": { "variables": "2", "truncations": ["4", "4"] },
//!   "roots": "unitary:2",
//!   "tangent_bundle": [ { "weight": ["1", "0"], "multiplicity": "4" },
//!                       { "weight": ["0", "1"], "multiplicity": "4" },
//!                       { "weight": "zero", "multiplicity": "-2" } ],
//!   "orbifold_prefactor": "1"
//! }
//! ```
//!
//! `roots` may instead be explicit: `weights` (integer vectors), `positive` (0-based indices
//! into `weights`), `weyl_generators` (each `{"permutation": [1-based images]}` or
//! `{"matrix": [[row of u_i's image], ..]}`) and `weyl_order`. The optional `subgroup_roots`
//! block lists root indices of a full-rank subgroup `H`, its `weyl_order`, and optional
//! `relative_weyl_generators`. `custom_series` holds coefficients for the `custom` class.

use std::path::Path;

use num::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quotient::{QuotientModel, SplitBundle, Subgroup};
use crate::ratpoly::{
    format_rational, parse_rational, Monomial, PermutationGroup, Rational, RingSpec, SignedPermutation,
};
use crate::rootdata::{RootData, Weight};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuotientConfig {
    pub schema: String,
    pub ring: RingConfig,
    pub roots: RootsConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangent_bundle: Option<Vec<SummandConfig>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orbifold_prefactor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup_roots: Option<SubgroupConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub custom_series: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingConfig {
    pub variables: String,
    pub truncations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RootsConfig {
    /// `"unitary:k"`
    Builtin(String),
    Explicit(ExplicitRoots),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitRoots {
    pub weights: Vec<Vec<String>>,
    pub positive: Vec<String>,
    #[serde(default)]
    pub weyl_generators: Vec<GeneratorConfig>,
    pub weyl_order: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum GeneratorConfig {
    Permutation(Vec<String>),
    Matrix(Vec<Vec<String>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandConfig {
    pub weight: WeightConfig,
    pub multiplicity: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightConfig {
    /// `"zero"`: the trivial line bundle.
    Named(String),
    Vector(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubgroupConfig {
    pub roots: Vec<String>,
    pub weyl_order: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub relative_weyl_generators: Vec<GeneratorConfig>,
}

fn parse_int(s: &str, location: &str) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| Error::config(location, format!("expected an integer string, got {s:?}")))
}

fn parse_count(s: &str, location: &str) -> Result<u64> {
    let v = parse_int(s, location)?;
    u64::try_from(v).map_err(|_| Error::config(location, format!("expected a nonnegative integer, got {v}")))
}

fn locate(location: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        e @ Error::Config { .. } => e,
        other => Error::config(location, other.to_string()),
    }
}

fn parse_generator(g: &GeneratorConfig, k: usize, location: &str) -> Result<SignedPermutation> {
    let perm = match g {
        GeneratorConfig::Permutation(images) => {
            let mut out = Vec::with_capacity(images.len());
            for (i, s) in images.iter().enumerate() {
                let loc = format!("{location}.permutation[{i}]");
                let v = parse_int(s, &loc)?;
                if v < 1 {
                    return Err(Error::config(loc, "permutation images are 1-based"));
                }
                out.push(v as usize - 1);
            }
            SignedPermutation::from_images(out).map_err(locate(location))?
        }
        GeneratorConfig::Matrix(rows) => {
            let mut matrix = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                let parsed = row
                    .iter()
                    .enumerate()
                    .map(|(j, s)| parse_int(s, &format!("{location}.matrix[{i}][{j}]")))
                    .collect::<Result<Vec<_>>>()?;
                matrix.push(parsed);
            }
            SignedPermutation::from_matrix(&matrix).map_err(locate(location))?
        }
    };
    if perm.arity() != k {
        return Err(Error::config(
            location,
            format!("generator acts on {} variables, ring has {k}", perm.arity()),
        ));
    }
    Ok(perm)
}

fn parse_weight(v: &[String], k: usize, location: &str) -> Result<Weight> {
    if v.len() != k {
        return Err(Error::config(
            location,
            format!("weight has {} components, expected {k}", v.len()),
        ));
    }
    v.iter()
        .enumerate()
        .map(|(j, s)| parse_int(s, &format!("{location}[{j}]")))
        .collect::<Result<Vec<_>>>()
        .map(Weight)
}

impl QuotientConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: QuotientConfig = serde_json::from_str(text)
            .map_err(|e| Error::config(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        if cfg.schema != SCHEMA_VERSION {
            return Err(Error::config(
                "schema",
                format!("unsupported schema {:?}, expected {SCHEMA_VERSION:?}", cfg.schema),
            ));
        }
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    fn ring(&self) -> Result<std::sync::Arc<RingSpec>> {
        let k = parse_count(&self.ring.variables, "ring.variables")? as usize;
        let truncations = self
            .ring
            .truncations
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let loc = format!("ring.truncations[{i}]");
                let v = parse_count(s, &loc)?;
                u32::try_from(v).map_err(|_| Error::config(loc, "truncation exponent too large"))
            })
            .collect::<Result<Vec<_>>>()?;
        RingSpec::new(k, truncations).map_err(locate("ring"))
    }

    fn root_data(&self, k: usize) -> Result<RootData> {
        match &self.roots {
            RootsConfig::Builtin(name) => {
                let rank = name
                    .strip_prefix("unitary:")
                    .ok_or_else(|| Error::config("roots", format!("unknown builtin root system {name:?}")))?;
                let rank = parse_count(rank, "roots")? as usize;
                if rank != k {
                    return Err(Error::config(
                        "roots",
                        format!("{name} has rank {rank}, ring has {k} variables"),
                    ));
                }
                RootData::unitary(rank).map_err(locate("roots"))
            }
            RootsConfig::Explicit(ex) => {
                let weights = ex
                    .weights
                    .iter()
                    .enumerate()
                    .map(|(i, w)| parse_weight(w, k, &format!("roots.weights[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                let positive = ex
                    .positive
                    .iter()
                    .enumerate()
                    .map(|(i, s)| parse_count(s, &format!("roots.positive[{i}]")).map(|v| v as usize))
                    .collect::<Result<Vec<_>>>()?;
                let generators = ex
                    .weyl_generators
                    .iter()
                    .enumerate()
                    .map(|(i, g)| parse_generator(g, k, &format!("roots.weyl_generators[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                let order = parse_count(&ex.weyl_order, "roots.weyl_order")?;
                let group = PermutationGroup::new(k, generators).map_err(locate("roots.weyl_generators"))?;
                RootData::new(weights, &positive, group, order).map_err(locate("roots"))
            }
        }
    }

    /// Validates everything and builds the model.
    pub fn to_model(&self) -> Result<QuotientModel> {
        let ring = self.ring()?;
        let k = ring.variable_count();
        let root_data = self.root_data(k)?;
        let tangent = match &self.tangent_bundle {
            None => SplitBundle::projective_product_tangent(&ring),
            Some(summands) => {
                let mut b = SplitBundle::empty(&ring);
                for (i, s) in summands.iter().enumerate() {
                    let loc = format!("tangent_bundle[{i}]");
                    let w = match &s.weight {
                        WeightConfig::Named(n) if n == "zero" => Weight(vec![0; k]),
                        WeightConfig::Named(n) => {
                            return Err(Error::config(
                                format!("{loc}.weight"),
                                format!("expected \"zero\" or a vector, got {n:?}"),
                            ))
                        }
                        WeightConfig::Vector(v) => parse_weight(v, k, &format!("{loc}.weight"))?,
                    };
                    let mult = parse_int(&s.multiplicity, &format!("{loc}.multiplicity"))?;
                    b.push_weight(&w, mult).map_err(locate(&loc))?;
                }
                b
            }
        };
        let prefactor = match &self.orbifold_prefactor {
            None => Rational::one(),
            Some(s) => parse_rational(s).map_err(locate("orbifold_prefactor"))?,
        };
        let subgroup = match &self.subgroup_roots {
            None => None,
            Some(h) => {
                let mut roots = Vec::with_capacity(h.roots.len());
                for (i, s) in h.roots.iter().enumerate() {
                    let loc = format!("subgroup_roots.roots[{i}]");
                    let idx = parse_count(s, &loc)? as usize;
                    let w = root_data
                        .roots()
                        .get(idx)
                        .ok_or_else(|| Error::config(&loc, format!("root index {idx} out of range")))?;
                    roots.push(w.clone());
                }
                let order = parse_count(&h.weyl_order, "subgroup_roots.weyl_order")?;
                let generators = h
                    .relative_weyl_generators
                    .iter()
                    .enumerate()
                    .map(|(i, g)| parse_generator(g, k, &format!("subgroup_roots.relative_weyl_generators[{i}]")))
                    .collect::<Result<Vec<_>>>()?;
                let group = PermutationGroup::new(k, generators).map_err(locate("subgroup_roots"))?;
                Some(Subgroup::new(roots, order, group))
            }
        };
        QuotientModel::new(ring, root_data, tangent, prefactor, subgroup).map_err(|e| match e {
            e @ Error::Config { .. } => e,
            Error::InvalidRootData(m) => Error::config("subgroup_roots", m),
            other => Error::config("model", other.to_string()),
        })
    }

    pub fn custom_series(&self) -> Result<Option<Vec<Rational>>> {
        self.custom_series
            .as_ref()
            .map(|coeffs| {
                coeffs
                    .iter()
                    .enumerate()
                    .map(|(i, s)| parse_rational(s).map_err(locate(&format!("custom_series[{i}]"))))
                    .collect()
            })
            .transpose()
    }
}

pub fn load_config(path: &Path) -> Result<QuotientModel> {
    load_config_file(path)?.to_model()
}

pub fn load_config_file(path: &Path) -> Result<QuotientConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::config(path.display().to_string(), e.to_string()))?;
    QuotientConfig::parse(&text)
}

fn generator_config(g: &SignedPermutation) -> GeneratorConfig {
    if g.is_plain() {
        GeneratorConfig::Permutation(g.images().iter().map(|j| (j + 1).to_string()).collect())
    } else {
        let k = g.arity();
        GeneratorConfig::Matrix(
            (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| match (g.images()[i] == j, g.negations()[i]) {
                            (false, _) => "0".to_string(),
                            (true, false) => "1".to_string(),
                            (true, true) => "-1".to_string(),
                        })
                        .collect()
                })
                .collect(),
        )
    }
}

fn weight_strings(w: &Weight) -> Vec<String> {
    w.0.iter().map(i64::to_string).collect()
}

/// Serializes a model with explicit root data; reloading yields an equal model.
pub fn model_to_config(m: &QuotientModel) -> Result<QuotientConfig> {
    let ring = m.ring();
    let k = ring.variable_count();
    let rd = m.root_data();
    let mut tangent = Vec::new();
    for (root, mult) in m.tangent_bundle().summands() {
        let mut w = Vec::with_capacity(k);
        for i in 0..k {
            let c = root.coefficient_of(&Monomial::variable(k, i))?;
            if !c.is_integer() {
                return Err(Error::InvalidModel(format!(
                    "tangent Chern root {root} has non-integer coefficients"
                )));
            }
            w.push(
                c.to_integer()
                    .to_i64()
                    .ok_or_else(|| Error::InvalidModel("weight too large".into()))?,
            );
        }
        let weight = if root.is_zero() {
            WeightConfig::Named("zero".into())
        } else {
            WeightConfig::Vector(weight_strings(&Weight(w)))
        };
        tangent.push(SummandConfig {
            weight,
            multiplicity: mult.to_string(),
        });
    }
    let subgroup_roots = m.subgroup().map(|h| SubgroupConfig {
        roots: h
            .roots()
            .iter()
            .map(|w| {
                rd.roots()
                    .iter()
                    .position(|r| r == w)
                    .expect("validated subset")
                    .to_string()
            })
            .collect(),
        weyl_order: h.weyl_order().to_string(),
        relative_weyl_generators: h.relative_weyl().generators().iter().map(generator_config).collect(),
    });
    let prefactor = m.orbifold_prefactor();
    Ok(QuotientConfig {
        schema: SCHEMA_VERSION.into(),
        ring: RingConfig {
            variables: k.to_string(),
            truncations: ring.truncations().iter().map(u32::to_string).collect(),
        },
        roots: RootsConfig::Explicit(ExplicitRoots {
            weights: rd.roots().iter().map(weight_strings).collect(),
            positive: rd.positive_indices().iter().map(usize::to_string).collect(),
            weyl_generators: rd.weyl().generators().iter().map(generator_config).collect(),
            weyl_order: rd.weyl_order().to_string(),
        }),
        tangent_bundle: Some(tangent),
        orbifold_prefactor: (!prefactor.is_one()).then(|| format_rational(prefactor)),
        subgroup_roots,
        custom_series: None,
    })
}
