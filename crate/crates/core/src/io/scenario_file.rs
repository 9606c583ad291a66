//! JSON scenario documents.
//!
//! Literals, atoms, constraints and action schemas are written in the text
//! syntax of [`crate::logic::syntax`]; everything else is plain JSON. Maps
//! are ordered so serialisation is canonical, which makes the SHA-256 of the
//! compact form a stable scenario identity.

use std::collections::BTreeMap;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::norm::Deontic;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub agents: Vec<String>,
    pub symbols: SymbolsSpec,
    #[serde(default)]
    pub statics: Vec<String>,
    /// Every dynamic atom that may ever be true; the closed-world encoding
    /// of a state asserts the negation of the ones it does not contain.
    pub dynamic_universe: Vec<String>,
    #[serde(default)]
    pub initial_state: Vec<String>,
    #[serde(default)]
    pub rules: Vec<RuleSpec>,
    pub action_descriptions: Vec<ActionSpec>,
    #[serde(default)]
    pub norms: Vec<NormSpec>,
    pub observability: ObservabilitySpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct SymbolsSpec {
    pub predicates: BTreeMap<String, PredicateSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constants: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct PredicateSpec {
    pub arity: usize,
    pub dynamic: bool,
}

/// An integrity rule: its body entails ⊥.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct RuleSpec {
    pub body: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct ActionSpec {
    pub name: String,
    pub params: Vec<String>,
    pub actor: String,
    #[serde(default)]
    pub pre: Vec<String>,
    #[serde(default)]
    pub con: Vec<String>,
    #[serde(default)]
    pub post: Vec<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub nop: bool,
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
#[serde(deny_unknown_fields)]
pub struct NormSpec {
    pub id: String,
    pub deontic: Deontic,
    #[serde(default)]
    pub condition: Vec<String>,
    pub action: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub priority: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ObservabilitySpec {
    /// Actions matching one of the schemas are observed (cameras).
    Schemas { observed: Vec<String> },
    /// Each action is observed independently with probability `p`.
    Probability { p: f64 },
}

impl ScenarioFile {
    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialises")
    }

    /// The JSON Schema scenario documents are validated against (published
    /// as `fixtures/scenario.schema.json`).
    pub fn json_schema() -> String {
        let schema = schemars::schema_for!(ScenarioFile);
        serde_json::to_string_pretty(&schema).expect("schema serialises") + "\n"
    }

    /// Hex SHA-256 of the compact canonical serialisation.
    pub fn content_hash(&self) -> String {
        let text = serde_json::to_string(self).expect("scenario serialises");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}
