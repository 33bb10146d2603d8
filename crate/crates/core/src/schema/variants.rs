use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{CodifyOptions, SchemaError, UsageProfile};
use crate::xml::{XmlDocument, escape_attr};

/// Key under which competing spellings of a value meet: lowercase, one
/// trailing "s" dropped, runs of `-`, `_` and whitespace folded to `-`.
pub fn normalize_value(v: &str) -> String {
    let lower = v.to_lowercase();
    let stem = lower.strip_suffix('s').unwrap_or(&lower);
    let mut out = String::with_capacity(stem.len());
    let mut in_sep = false;
    for c in stem.chars() {
        if c == '-' || c == '_' || c.is_whitespace() {
            if !in_sep {
                out.push('-');
            }
            in_sep = true;
        } else {
            out.push(c);
            in_sep = false;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariantCluster {
    pub element: String,
    pub attribute: String,
    pub key: String,
    /// Observed values and how often each occurs.
    pub members: BTreeMap<String, usize>,
}

impl VariantCluster {
    pub fn total(&self) -> usize {
        self.members.values().sum()
    }

    /// The most frequent member, ties broken alphabetically.
    pub fn dominant(&self) -> &str {
        self.members
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(v, _)| v.as_str())
            .unwrap()
    }

    /// One rule per non-dominant member, rewriting it to `to`.
    pub fn rules_to(&self, to: &str) -> Vec<RewriteRule> {
        self.members
            .keys()
            .filter(|m| *m != to)
            .map(|m| RewriteRule {
                element: self.element.clone(),
                attribute: self.attribute.clone(),
                from: m.clone(),
                to: to.to_string(),
            })
            .collect()
    }
}

/// Clusters over the default enumerable attributes.
pub fn detect_variants(p: &UsageProfile) -> Vec<VariantCluster> {
    detect_variants_in(p, &CodifyOptions::default().enumerable_attributes)
}

/// Groups values of the given attributes that share a normalized key.
/// Sorted by total occurrences, largest first.
pub fn detect_variants_in(p: &UsageProfile, attributes: &BTreeSet<String>) -> Vec<VariantCluster> {
    let mut out = Vec::new();
    for (element, u) in &p.elements {
        for (attribute, au) in u.attributes.iter().filter(|(a, _)| attributes.contains(*a)) {
            let mut groups: BTreeMap<String, BTreeMap<String, usize>> = BTreeMap::new();
            for (v, n) in &au.values {
                groups
                    .entry(normalize_value(v))
                    .or_default()
                    .insert(v.clone(), *n);
            }
            for (key, members) in groups.into_iter().filter(|(_, m)| m.len() >= 2) {
                out.push(VariantCluster {
                    element: element.clone(),
                    attribute: attribute.clone(),
                    key,
                    members,
                });
            }
        }
    }
    out.sort_by(|a, b| {
        b.total().cmp(&a.total()).then_with(|| {
            (&a.element, &a.attribute, &a.key).cmp(&(&b.element, &b.attribute, &b.key))
        })
    });
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RewriteRule {
    /// Element name, or `"*"` for any element.
    pub element: String,
    pub attribute: String,
    pub from: String,
    pub to: String,
}

impl RewriteRule {
    fn matches(&self, element: &str, attribute: &str, value: &str) -> bool {
        (self.element == "*" || self.element == element)
            && self.attribute == attribute
            && self.from == value
    }
}

fn split_fields(line: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let mut field = String::new();
        if c == '"' {
            chars.next();
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some('\\') => field.extend(chars.next()),
                    Some(c) => field.push(c),
                    None => return Err("unterminated quoted value".into()),
                }
            }
        } else {
            while let Some(&c) = chars.peek().filter(|c| !c.is_whitespace()) {
                field.push(c);
                chars.next();
            }
        }
        out.push(field);
    }
    Ok(out)
}

/// Parses a rule file: `element attribute from -> to` per line, `*` for
/// any element, double quotes around values containing spaces, `#`
/// comments and blank lines ignored.
pub fn parse_rules(text: &str) -> Result<Vec<RewriteRule>, SchemaError> {
    let mut rules = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| SchemaError::RuleSyntax {
            line: line_no,
            message,
        };
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields = split_fields(trimmed).map_err(err)?;
        let [element, attribute, from, arrow, to] =
            <[String; 5]>::try_from(fields).map_err(|f| {
                err(format!(
                    "expected `element attribute from -> to`, found {} fields",
                    f.len()
                ))
            })?;
        if arrow != "->" {
            return Err(err(format!("expected `->`, found {arrow:?}")));
        }
        if from == to {
            return Err(err(format!("rule rewrites {from:?} to itself")));
        }
        rules.push(RewriteRule {
            element,
            attribute,
            from,
            to,
        });
    }
    Ok(rules)
}

fn check_rules(rules: &[RewriteRule]) -> Result<(), SchemaError> {
    let mut seen: BTreeMap<(&str, &str, &str), &str> = BTreeMap::new();
    for r in rules {
        if r.from == r.to {
            return Err(SchemaError::RuleSyntax {
                line: 0,
                message: format!("rule rewrites {:?} to itself", r.from),
            });
        }
        let key = (r.element.as_str(), r.attribute.as_str(), r.from.as_str());
        if let Some(first) = seen.insert(key, &r.to).filter(|first| *first != r.to) {
            return Err(SchemaError::Conflict {
                element: r.element.clone(),
                attribute: r.attribute.clone(),
                from: r.from.clone(),
                first: first.to_string(),
                second: r.to.clone(),
            });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arbitration {
    /// Rewritten source text, one per input document, in input order.
    pub documents: Vec<String>,
    /// Rewrites per document.
    pub changes: Vec<usize>,
}

impl Arbitration {
    pub fn total_changes(&self) -> usize {
        self.changes.iter().sum()
    }
}

/// Applies `rules` to every attribute occurrence. Only the matched
/// attribute values change; every other byte of each source is kept. The
/// first matching rule wins. Conflicting rules fail before anything is
/// rewritten.
pub fn arbitrate(docs: &[XmlDocument], rules: &[RewriteRule]) -> Result<Arbitration, SchemaError> {
    check_rules(rules)?;
    let mut documents = Vec::with_capacity(docs.len());
    let mut changes = Vec::with_capacity(docs.len());
    for d in docs {
        let mut edits = Vec::new();
        for e in d.root.descendants() {
            for a in &e.attributes {
                if let Some(r) = rules.iter().find(|r| r.matches(&e.name, &a.name, &a.value)) {
                    edits.push((a.value_range.clone(), escape_attr(&r.to)));
                }
            }
        }
        edits.sort_by_key(|(r, _)| r.start);
        let mut out = String::with_capacity(d.source.len());
        let mut at = 0;
        for (range, value) in &edits {
            out.push_str(&d.source[at..range.start]);
            out.push_str(value);
            at = range.end;
        }
        out.push_str(&d.source[at..]);
        documents.push(out);
        changes.push(edits.len());
    }
    Ok(Arbitration { documents, changes })
}

#[cfg(test)]
mod tests {
    use super::super::profile_corpus;
    use super::*;

    fn doc(s: &str) -> XmlDocument {
        XmlDocument::parse_str(s).unwrap()
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(normalize_value("italics"), "italic");
        assert_eq!(normalize_value("Italic"), "italic");
        assert_eq!(normalize_value("font-style"), "font-style");
        assert_eq!(normalize_value("font_style"), "font-style");
        assert_eq!(normalize_value("Font Style"), "font-style");
        assert_eq!(normalize_value("a \t_-b"), "a-b");
        assert_eq!(normalize_value("ss"), "s");
    }

    #[test]
    fn clusters() {
        let mut src = String::from("<p>");
        for r in [
            "italic",
            "italic",
            "italic",
            "italics",
            "bold",
            "bold",
            "font-style",
            "font_style",
            "Font Style",
            "font-style",
        ] {
            src.push_str(&format!("<hi rend=\"{r}\"/>"));
        }
        src.push_str("</p>");
        let c = detect_variants(&profile_corpus(&[doc(&src)]));
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].key, "font-style");
        assert_eq!(c[0].members.len(), 3);
        assert_eq!(c[0].dominant(), "font-style");
        assert_eq!(c[1].key, "italic");
        assert_eq!(
            c[1].members,
            BTreeMap::from([("italic".into(), 3), ("italics".into(), 1)])
        );
    }

    #[test]
    fn non_enumerable_attributes_ignored() {
        let c = detect_variants(&profile_corpus(&[doc("<p><a n='x'/><a n='xs'/></p>")]));
        assert!(c.is_empty());
    }

    #[test]
    fn rule_file_syntax() {
        let rules = parse_rules(
            "# comment\n\nhi rend italics -> italic\n* type \"Font Style\" -> font-style\n",
        )
        .unwrap();
        assert_eq!(rules.len(), 2);
        assert_eq!(rules[1].element, "*");
        assert_eq!(rules[1].from, "Font Style");
        assert!(matches!(
            parse_rules("hi rend a b"),
            Err(SchemaError::RuleSyntax { line: 1, .. })
        ));
        assert!(matches!(
            parse_rules("\nhi rend a => b"),
            Err(SchemaError::RuleSyntax { line: 2, .. })
        ));
        assert!(parse_rules("hi rend a -> a").is_err());
        assert!(parse_rules("hi rend \"a -> b").is_err());
    }

    #[test]
    fn rewrite_preserves_other_bytes() {
        let src = "<p>\n  <hi   rend='italics' n=\"italics\">x</hi><hi rend=\"bold\"/><q rend='italics'/></p>";
        let rules = parse_rules("hi rend italics -> italic").unwrap();
        let out = arbitrate(&[doc(src)], &rules).unwrap();
        assert_eq!(out.changes, [1]);
        assert_eq!(
            out.documents[0],
            src.replacen("rend='italics'", "rend='italic'", 1)
        );
        let all = arbitrate(
            &[doc(src)],
            &parse_rules("* rend italics -> it&al").unwrap(),
        )
        .unwrap();
        assert_eq!(all.total_changes(), 2);
        assert!(all.documents[0].contains("rend='it&amp;al'"));
        doc(&all.documents[0]);
    }

    #[test]
    fn conflicts_fail_before_rewriting() {
        let rules = parse_rules("hi rend a -> b\nhi rend a -> c").unwrap();
        assert!(matches!(
            arbitrate(&[doc("<hi rend='a'/>")], &rules),
            Err(SchemaError::Conflict { .. })
        ));
        let unchanged = arbitrate(&[doc("<hi rend='a'/>")], &[]).unwrap();
        assert_eq!(
            (unchanged.documents[0].as_str(), unchanged.total_changes()),
            ("<hi rend='a'/>", 0)
        );
    }
}
