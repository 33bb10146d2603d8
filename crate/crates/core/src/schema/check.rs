use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ElementRule, RestrictedSchema, is_foreign};
use crate::xml::{Severity, SourcePath, XmlDocument, XmlElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SchemaCode {
    Root,
    Element,
    Foreign,
    Child,
    RequiredChild,
    Attribute,
    RequiredAttribute,
    Value,
    Text,
}

impl fmt::Display for SchemaCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SchemaCode::Root => "root",
            SchemaCode::Element => "element",
            SchemaCode::Foreign => "foreign",
            SchemaCode::Child => "child",
            SchemaCode::RequiredChild => "required-child",
            SchemaCode::Attribute => "attribute",
            SchemaCode::RequiredAttribute => "required-attribute",
            SchemaCode::Value => "value",
            SchemaCode::Text => "text",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemaFinding {
    pub code: SchemaCode,
    pub severity: Severity,
    pub location: SourcePath,
    pub message: String,
}

struct Checker<'a> {
    schema: &'a RestrictedSchema,
    base: Option<&'a RestrictedSchema>,
    out: Vec<SchemaFinding>,
}

impl<'a> Checker<'a> {
    /// Errors unless the base schema permits the construct.
    fn report(&mut self, code: SchemaCode, at: &SourcePath, base_permits: bool, message: String) {
        let severity = if base_permits {
            Severity::Warning
        } else {
            Severity::Error
        };
        self.out.push(SchemaFinding {
            code,
            severity,
            location: at.clone(),
            message,
        });
    }

    fn base_rule(&self, name: &str) -> Option<&'a ElementRule> {
        self.base.and_then(|b| b.elements.get(name))
    }

    fn element(&mut self, e: &XmlElement) {
        let schema = self.schema;
        let Some(rule) = schema.elements.get(&e.name) else {
            let ok = self.base_rule(&e.name).is_some();
            self.report(
                SchemaCode::Element,
                &e.path,
                ok,
                format!("element {} is not in the schema", e.name),
            );
            for c in e.child_elements() {
                self.visit(c);
            }
            return;
        };
        let base = self.base_rule(&e.name);
        for a in &e.attributes {
            let base_attr = base.and_then(|b| b.attributes.get(&a.name));
            match rule.attributes.get(&a.name) {
                None => self.report(
                    SchemaCode::Attribute,
                    &e.path,
                    base_attr.is_some(),
                    format!("attribute {} not allowed on {}", a.name, e.name),
                ),
                Some(ar) => {
                    if let Some(values) = ar.values.as_ref().filter(|v| !v.contains(&a.value)) {
                        let ok = base_attr.is_some_and(|b| {
                            b.values.as_ref().is_none_or(|v| v.contains(&a.value))
                        });
                        let allowed: Vec<&str> = values.iter().map(String::as_str).collect();
                        self.report(
                            SchemaCode::Value,
                            &e.path,
                            ok,
                            format!(
                                "{}/@{} value {:?} not in {{{}}}",
                                e.name,
                                a.name,
                                a.value,
                                allowed.join(", ")
                            ),
                        );
                    }
                }
            }
        }
        for (name, ar) in &rule.attributes {
            if ar.required && e.attr(name).is_none() {
                let ok = base.is_some_and(|b| b.attributes.get(name).is_none_or(|a| !a.required));
                self.report(
                    SchemaCode::RequiredAttribute,
                    &e.path,
                    ok,
                    format!("{} lacks required @{name}", e.name),
                );
            }
        }
        if e.has_direct_text() && !rule.text {
            let ok = base.is_some_and(|b| b.text);
            self.report(
                SchemaCode::Text,
                &e.path,
                ok,
                format!("{} may not contain text", e.name),
            );
        }
        for name in &rule.required_children {
            if e.first_child(name).is_none() {
                let ok = base.is_some_and(|b| !b.required_children.contains(name));
                self.report(
                    SchemaCode::RequiredChild,
                    &e.path,
                    ok,
                    format!("{} lacks required child {name}", e.name),
                );
            }
        }
        for c in e.child_elements() {
            let foreign = is_foreign(c);
            if !rule.permits_child(&c.name, foreign) {
                let ok = base.is_some_and(|b| b.permits_child(&c.name, foreign));
                self.report(
                    SchemaCode::Child,
                    &c.path,
                    ok,
                    format!("{} not allowed inside {}", c.name, e.name),
                );
            }
            self.visit(c);
        }
    }

    fn visit(&mut self, e: &XmlElement) {
        if is_foreign(e) {
            if !self.schema.permits_foreign(&e.name) {
                let ok = self.base.is_some_and(|b| b.permits_foreign(&e.name));
                self.report(
                    SchemaCode::Foreign,
                    &e.path,
                    ok,
                    format!("foreign element {} is not in the schema", e.name),
                );
            }
        } else {
            self.element(e);
        }
    }
}

/// Reports every element, attribute, value and text run of `doc` that `s`
/// does not permit. With a base schema, constructs the base permits are
/// warnings; everything else is an error. Findings are in document order.
pub fn validate_against(
    s: &RestrictedSchema,
    doc: &XmlDocument,
    base: Option<&RestrictedSchema>,
) -> Vec<SchemaFinding> {
    let mut c = Checker {
        schema: s,
        base,
        out: Vec::new(),
    };
    if s.root.as_deref().is_some_and(|r| r != doc.root.name) {
        let ok = base.is_some_and(|b| b.root.as_deref().is_none_or(|r| r == doc.root.name));
        let expected = s.root.as_deref().unwrap_or_default();
        c.report(
            SchemaCode::Root,
            &doc.root.path,
            ok,
            format!("root {} is not {expected}", doc.root.name),
        );
    }
    c.visit(&doc.root);
    let mut out = c.out;
    out.sort_by(|a, b| a.location.cmp(&b.location).then(a.code.cmp(&b.code)));
    out
}
