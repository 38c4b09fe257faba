//! Report types: computed invariants, the topological model, and their
//! JSON form (`schema: 1`).

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::order::OrderValue;

pub const SCHEMA_VERSION: u32 = 1;

/// Order-pair of the critical value curve: `(j, j+1)` for finite `j > 1`,
/// `(1, inf)` for `j = 1`, a degenerate marker for `j = inf`, and an
/// undetermined marker carrying the certified bound when truncation binds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderPair {
    OneInfinity,
    Finite(usize, usize),
    Degenerate,
    Undetermined { bound: usize },
}

impl OrderPair {
    pub fn from_j(j: OrderValue) -> Self {
        match j {
            OrderValue::Exact(1) => OrderPair::OneInfinity,
            OrderValue::Exact(j) => OrderPair::Finite(j, j + 1),
            OrderValue::AtLeast(b) => OrderPair::Undetermined { bound: b },
            OrderValue::Infinite => OrderPair::Degenerate,
        }
    }
}

impl Serialize for OrderPair {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            OrderPair::OneInfinity => (1u32, "inf").serialize(s),
            OrderPair::Finite(j, k) => (j, k).serialize(s),
            OrderPair::Degenerate => "degenerate".serialize(s),
            OrderPair::Undetermined { bound } => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("undetermined_at_least", bound)?;
                m.end()
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Convex,
    Cusp,
}

/// The Lyzzaik-style local model data determined by `(m, j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TopologicalModel {
    pub shape: Shape,
    /// Admissible pairs `(2n+ - 1, 2n- - 1)`; both orderings are listed
    /// when the tables leave the choice open.
    pub candidates: Vec<(u32, u32)>,
    pub degree_abs: u8,
    /// `{n+ + n-, n+ + n- - 2}`: fiber cardinalities off the critical value
    /// curve, one per sector.
    pub fibers: (u32, u32),
    /// True exactly when `candidates` is a singleton.
    pub unique: bool,
}

/// Harmonic invariants at a smooth critical point.
#[derive(Clone, Debug, Serialize)]
pub struct InvariantReport {
    pub m: u32,
    pub mu: OrderValue,
    pub j: OrderValue,
    pub order_pair: OrderPair,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<TopologicalModel>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WhitneyClass {
    Fold,
    Cusp,
    HigherEven,
    HigherOdd,
    Collapse,
    Indeterminate,
}

/// Analytic (Appendix-style) invariants at a regular critical point.
#[derive(Clone, Debug, Serialize)]
pub struct AnalyticReport {
    pub j: OrderValue,
    pub mu: OrderValue,
    pub class: WhitneyClass,
    /// Constant terms M_1(0), M_2(0), ... in canonical text form.
    pub m_values: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<String>,
}

/// Wrap a report with the schema version for emission.
pub fn to_json<T: Serialize>(report: &T) -> serde_json::Value {
    let mut obj = serde_json::to_value(report).expect("serializable report");
    if let serde_json::Value::Object(map) = &mut obj {
        let mut with_schema = serde_json::Map::new();
        with_schema.insert("schema".into(), serde_json::json!(SCHEMA_VERSION));
        with_schema.append(map);
        return serde_json::Value::Object(with_schema);
    }
    obj
}
