//! Corpus-driven schema evolution.
//!
//! The cycle is: [`profile_corpus`] records what encoders actually use,
//! [`codify`] turns that into a [`RestrictedSchema`], [`validate_against`]
//! checks documents (optionally falling back to a larger base schema),
//! [`detect_variants`] finds competing spellings of the same value, and
//! [`arbitrate`] rewrites the corpus to the chosen one before re-codifying.
//!
//! Content models are sets: a schema says which children may appear under
//! an element, never in what order.

mod check;
mod variants;

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::xml::{TEI_NS, XmlDocument, XmlElement};

pub use check::{SchemaCode, SchemaFinding, validate_against};
pub use variants::{
    Arbitration, RewriteRule, VariantCluster, arbitrate, detect_variants, detect_variants_in,
    normalize_value, parse_rules,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemaError {
    #[error("invalid codify options: {0}")]
    Options(String),
    #[error("invalid schema: {0}")]
    Schema(String),
    #[error("rule file line {line}: {message}")]
    RuleSyntax { line: usize, message: String },
    #[error("conflicting rules for {element} @{attribute} {from:?}: {first:?} vs {second:?}")]
    Conflict {
        element: String,
        attribute: String,
        from: String,
        first: String,
        second: String,
    },
}

/// True for elements in a namespace other than TEI; these are profiled and
/// checked by name only, never descended into.
pub fn is_foreign(e: &XmlElement) -> bool {
    e.namespace.as_deref().is_some_and(|ns| ns != TEI_NS)
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChildUsage {
    pub occurrences: usize,
    /// Number of parent occurrences containing this child at least once.
    pub parents: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttributeUsage {
    pub values: BTreeMap<String, usize>,
    /// Number of element occurrences carrying the attribute.
    pub present_on: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementUsage {
    pub count: usize,
    pub children: BTreeMap<String, ChildUsage>,
    pub attributes: BTreeMap<String, AttributeUsage>,
    pub text: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct UsageProfile {
    pub documents: usize,
    pub roots: BTreeMap<String, usize>,
    pub elements: BTreeMap<String, ElementUsage>,
    pub foreign: BTreeMap<String, usize>,
}

impl UsageProfile {
    pub fn is_empty(&self) -> bool {
        self.documents == 0
    }

    pub fn of_document(doc: &XmlDocument) -> UsageProfile {
        let mut p = UsageProfile {
            documents: 1,
            ..Default::default()
        };
        *p.roots.entry(doc.root.name.clone()).or_default() += 1;
        if is_foreign(&doc.root) {
            *p.foreign.entry(doc.root.name.clone()).or_default() += 1;
        } else {
            p.record(&doc.root);
        }
        p
    }

    fn record(&mut self, e: &XmlElement) {
        let usage = self.elements.entry(e.name.clone()).or_default();
        usage.count += 1;
        usage.text |= e.has_direct_text();
        for a in &e.attributes {
            let au = usage.attributes.entry(a.name.clone()).or_default();
            au.present_on += 1;
            *au.values.entry(a.value.clone()).or_default() += 1;
        }
        let mut seen = BTreeSet::new();
        for c in e.child_elements() {
            let cu = usage.children.entry(c.name.clone()).or_default();
            cu.occurrences += 1;
            if seen.insert(c.name.as_str()) {
                cu.parents += 1;
            }
        }
        for c in e.child_elements() {
            if is_foreign(c) {
                *self.foreign.entry(c.name.clone()).or_default() += 1;
            } else {
                self.record(c);
            }
        }
    }

    /// Commutative, associative combination of two profiles.
    pub fn merge(mut self, other: UsageProfile) -> UsageProfile {
        self.documents += other.documents;
        add_counts(&mut self.roots, other.roots);
        add_counts(&mut self.foreign, other.foreign);
        for (name, u) in other.elements {
            let mine = self.elements.entry(name).or_default();
            mine.count += u.count;
            mine.text |= u.text;
            for (c, cu) in u.children {
                let m = mine.children.entry(c).or_default();
                m.occurrences += cu.occurrences;
                m.parents += cu.parents;
            }
            for (a, au) in u.attributes {
                let m = mine.attributes.entry(a).or_default();
                m.present_on += au.present_on;
                add_counts(&mut m.values, au.values);
            }
        }
        self
    }
}

fn add_counts(into: &mut BTreeMap<String, usize>, from: BTreeMap<String, usize>) {
    for (k, n) in from {
        *into.entry(k).or_default() += n;
    }
}

/// Profiles every document and merges the results. Order-independent.
pub fn profile_corpus(docs: &[XmlDocument]) -> UsageProfile {
    docs.par_iter()
        .map(UsageProfile::of_document)
        .reduce(UsageProfile::default, UsageProfile::merge)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CodifyOptions {
    pub enumerable_attributes: BTreeSet<String>,
    pub enumeration_cap: usize,
    pub required_child_threshold: f64,
}

impl Default for CodifyOptions {
    fn default() -> Self {
        CodifyOptions {
            enumerable_attributes: ["type", "level", "rend", "unit"].map(String::from).into(),
            enumeration_cap: 20,
            required_child_threshold: 1.0,
        }
    }
}

impl CodifyOptions {
    pub fn check(&self) -> Result<(), SchemaError> {
        if self.enumeration_cap < 1 {
            return Err(SchemaError::Options(
                "enumeration_cap must be at least 1".into(),
            ));
        }
        let t = self.required_child_threshold;
        if !(t > 0.0 && t <= 1.0) {
            return Err(SchemaError::Options(format!(
                "required_child_threshold {t} outside (0, 1]"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttributeRule {
    pub required: bool,
    /// Closed value list, or `None` when any value is allowed.
    pub values: Option<BTreeSet<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementRule {
    pub attributes: BTreeMap<String, AttributeRule>,
    /// `"*"` admits any foreign-namespace child.
    pub children: BTreeSet<String>,
    pub required_children: BTreeSet<String>,
    pub text: bool,
}

impl ElementRule {
    pub fn permits_child(&self, name: &str, foreign: bool) -> bool {
        self.children.contains(name) || (foreign && self.children.contains("*"))
    }
}

const CONTENT_MODEL: &str =
    "unordered: children are allowed sets, sibling order is not constrained";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictedSchema {
    pub content_model: String,
    pub elements: BTreeMap<String, ElementRule>,
    /// Foreign-namespace elements admitted as opaque content; `"*"` admits all.
    pub foreign: BTreeSet<String>,
    pub root: Option<String>,
}

impl Default for RestrictedSchema {
    fn default() -> Self {
        RestrictedSchema {
            content_model: CONTENT_MODEL.into(),
            elements: BTreeMap::new(),
            foreign: BTreeSet::new(),
            root: None,
        }
    }
}

impl RestrictedSchema {
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn permits_foreign(&self, name: &str) -> bool {
        self.foreign.contains(name) || self.foreign.contains("*")
    }

    /// Deterministic JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("schema serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<RestrictedSchema, SchemaError> {
        let s: RestrictedSchema =
            serde_json::from_str(text).map_err(|e| SchemaError::Schema(e.to_string()))?;
        s.check()?;
        Ok(s)
    }

    /// Every child name is defined, foreign, or the foreign wildcard.
    pub fn check(&self) -> Result<(), SchemaError> {
        for (name, rule) in &self.elements {
            for c in &rule.children {
                if c != "*" && !self.elements.contains_key(c) && !self.permits_foreign(c) {
                    return Err(SchemaError::Schema(format!(
                        "{name} allows undefined child {c}"
                    )));
                }
            }
            if let Some(c) = rule
                .required_children
                .iter()
                .find(|c| !rule.children.contains(*c))
            {
                return Err(SchemaError::Schema(format!(
                    "{name} requires {c} but does not allow it"
                )));
            }
        }
        Ok(())
    }

    /// The shipped journal-subset superset used as an escape hatch: every
    /// element of the article vocabulary, all attributes open, nothing
    /// required.
    pub fn base() -> RestrictedSchema {
        RestrictedSchema::from_json(include_str!("../../data/base-schema.json"))
            .expect("shipped base schema is valid")
    }
}

/// Turns observed usage into a schema admitting exactly that usage.
pub fn codify(p: &UsageProfile, opt: &CodifyOptions) -> Result<RestrictedSchema, SchemaError> {
    opt.check()?;
    let mut s = RestrictedSchema {
        root: p
            .roots
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(r, _)| r.clone()),
        foreign: p.foreign.keys().cloned().collect(),
        ..Default::default()
    };
    for (name, u) in &p.elements {
        let rule = ElementRule {
            children: u.children.keys().cloned().collect(),
            required_children: u
                .children
                .iter()
                .filter(|(_, c)| c.parents as f64 >= opt.required_child_threshold * u.count as f64)
                .map(|(n, _)| n.clone())
                .collect(),
            attributes: u
                .attributes
                .iter()
                .map(|(a, au)| {
                    let closed = opt.enumerable_attributes.contains(a)
                        && au.values.len() <= opt.enumeration_cap;
                    let rule = AttributeRule {
                        required: au.present_on == u.count,
                        values: closed.then(|| au.values.keys().cloned().collect()),
                    };
                    (a.clone(), rule)
                })
                .collect(),
            text: u.text,
        };
        s.elements.insert(name.clone(), rule);
    }
    Ok(s)
}
