//! Raw XML trees, TEI article parsing and canonical serialization.

mod read;
mod write;

use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use read::{Issue, ParseReport, Severity, parse_article, parse_article_tree};
pub(crate) use write::keyword_groups;
pub use write::{XmlWriter, escape_attr, escape_text, serialize_article};

pub const TEI_NS: &str = "http://www.tei-c.org/ns/1.0";
const XML_NS: &str = "http://www.w3.org/XML/1998/namespace";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum XmlError {
    #[error("input is not valid UTF-8 (byte offset {0})")]
    NotUtf8(usize),
    #[error("unsupported encoding {0:?}: only UTF-8 is accepted")]
    Encoding(String),
    #[error("not well-formed: {0}")]
    Syntax(String),
}

/// One step of a [`SourcePath`]: element name plus 1-based position among
/// same-named siblings. `ordinal` is the position among all element
/// siblings and only drives document-order sorting.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathStep {
    pub ordinal: usize,
    pub name: String,
    pub index: usize,
}

/// Location of an element, printed as `TEI[1]/teiHeader[1]/fileDesc[1]`.
///
/// Paths order by document position.
///
/// Serialized as the printed form; ordinals do not survive a round trip.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct SourcePath {
    steps: Vec<PathStep>,
}

impl SourcePath {
    pub fn root(name: &str) -> Self {
        SourcePath {
            steps: vec![PathStep {
                ordinal: 0,
                name: name.into(),
                index: 1,
            }],
        }
    }

    pub fn child(&self, name: &str, index: usize, ordinal: usize) -> Self {
        let mut steps = self.steps.clone();
        steps.push(PathStep {
            ordinal,
            name: name.into(),
            index,
        });
        SourcePath { steps }
    }

    pub fn steps(&self) -> &[PathStep] {
        &self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn starts_with(&self, prefix: &SourcePath) -> bool {
        self.steps.starts_with(&prefix.steps)
    }

    /// Parses the printed form. Ordinals are unknown and set to zero, so the
    /// result compares equal to the original only through its `Display`.
    pub fn parse(s: &str) -> Option<SourcePath> {
        if s.is_empty() {
            return Some(SourcePath::default());
        }
        let mut steps = Vec::new();
        for part in s.split('/') {
            let (name, rest) = part.split_once('[')?;
            let index = rest.strip_suffix(']')?.parse().ok()?;
            steps.push(PathStep {
                ordinal: 0,
                name: name.into(),
                index,
            });
        }
        Some(SourcePath { steps })
    }
}

impl From<SourcePath> for String {
    fn from(p: SourcePath) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for SourcePath {
    type Error = String;
    fn try_from(s: String) -> Result<Self, String> {
        if s.is_empty() {
            return Ok(SourcePath::default());
        }
        SourcePath::parse(&s).ok_or_else(|| format!("malformed path {s:?}"))
    }
}

impl fmt::Display for SourcePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{}[{}]", s.name, s.index)?;
        }
        Ok(())
    }
}

/// Assigns sibling indexes and ordinals while children are visited in order.
#[derive(Debug, Default)]
pub struct SiblingCounter {
    seen: Vec<(String, usize)>,
    ordinal: usize,
}

impl SiblingCounter {
    pub fn next(&mut self, parent: &SourcePath, name: &str) -> SourcePath {
        let index = match self.seen.iter_mut().find(|(n, _)| n == name) {
            Some((_, c)) => {
                *c += 1;
                *c
            }
            None => {
                self.seen.push((name.to_string(), 1));
                1
            }
        };
        let p = parent.child(name, index, self.ordinal);
        self.ordinal += 1;
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlAttribute {
    pub name: String,
    pub value: String,
    /// Byte range of the raw value, quotes excluded.
    pub value_range: Range<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum XmlNode {
    Element(XmlElement),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlElement {
    /// Local name for TEI or unqualified elements, `prefix:local` otherwise.
    pub name: String,
    pub namespace: Option<String>,
    pub attributes: Vec<XmlAttribute>,
    pub children: Vec<XmlNode>,
    /// Byte range of the element in the source, start tag through end tag.
    pub range: Range<usize>,
    pub path: SourcePath,
}

impl XmlElement {
    pub fn attr(&self, name: &str) -> Option<&str> {
        self.attributes
            .iter()
            .find(|a| a.name == name)
            .map(|a| a.value.as_str())
    }

    pub fn is_tei(&self) -> bool {
        self.namespace.as_deref() == Some(TEI_NS)
    }

    pub fn child_elements(&self) -> impl Iterator<Item = &XmlElement> {
        self.children.iter().filter_map(|c| match c {
            XmlNode::Element(e) => Some(e),
            XmlNode::Text(_) => None,
        })
    }

    pub fn first_child(&self, name: &str) -> Option<&XmlElement> {
        self.child_elements().find(|e| e.name == name)
    }

    /// Concatenated descendant text.
    pub fn text(&self) -> String {
        let mut out = String::new();
        self.push_text(&mut out);
        out
    }

    fn push_text(&self, out: &mut String) {
        for c in &self.children {
            match c {
                XmlNode::Text(t) => out.push_str(t),
                XmlNode::Element(e) => e.push_text(out),
            }
        }
    }

    /// True when some direct text child has non-whitespace content.
    pub fn has_direct_text(&self) -> bool {
        self.children
            .iter()
            .any(|c| matches!(c, XmlNode::Text(t) if !t.trim().is_empty()))
    }

    /// Pre-order traversal of this element and its descendants.
    pub fn descendants(&self) -> Vec<&XmlElement> {
        let mut out = Vec::new();
        self.push_descendants(&mut out);
        out
    }

    fn push_descendants<'a>(&'a self, out: &mut Vec<&'a XmlElement>) {
        out.push(self);
        for c in self.child_elements() {
            c.push_descendants(out);
        }
    }

    /// Finds the element at `path` (compared through printed names and indexes).
    pub fn find(&self, path: &SourcePath) -> Option<&XmlElement> {
        let (first, rest) = path.steps().split_first()?;
        if first.name != self.name || first.index != 1 {
            return None;
        }
        let mut cur = self;
        for step in rest {
            cur = cur
                .child_elements()
                .filter(|e| e.name == step.name)
                .nth(step.index.checked_sub(1)?)?;
        }
        Some(cur)
    }
}

/// A parsed XML file: the source text and its element tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XmlDocument {
    pub source: String,
    pub root: XmlElement,
    /// Every prefixed namespace binding used in the document, first binding wins.
    pub root_namespaces: Vec<(String, String)>,
}

impl XmlDocument {
    pub fn parse(bytes: &[u8]) -> Result<XmlDocument, XmlError> {
        let text = decode_utf8(bytes)?;
        Self::parse_str(text)
    }

    pub fn parse_str(text: &str) -> Result<XmlDocument, XmlError> {
        check_declared_encoding(text)?;
        let doc = roxmltree::Document::parse(text).map_err(|e| XmlError::Syntax(e.to_string()))?;
        let root_node = doc.root_element();
        let root_path = SourcePath::root(&qualified_name(root_node));
        let root = convert(root_node, root_path);
        let mut root_namespaces: Vec<(String, String)> = Vec::new();
        for node in doc.descendants().filter(|n| n.is_element()) {
            for ns in node.namespaces() {
                let Some(prefix) = ns.name() else { continue };
                if prefix != "xml" && !root_namespaces.iter().any(|(p, _)| p == prefix) {
                    root_namespaces.push((prefix.to_string(), ns.uri().to_string()));
                }
            }
        }
        Ok(XmlDocument {
            source: text.to_string(),
            root,
            root_namespaces,
        })
    }

    pub fn raw(&self, e: &XmlElement) -> &str {
        &self.source[e.range.clone()]
    }
}

/// Strips a UTF-8 byte-order mark and checks the rest decodes.
pub fn decode_utf8(bytes: &[u8]) -> Result<&str, XmlError> {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    std::str::from_utf8(bytes).map_err(|e| XmlError::NotUtf8(e.valid_up_to()))
}

fn check_declared_encoding(text: &str) -> Result<(), XmlError> {
    let Some(rest) = text.strip_prefix("<?xml") else {
        return Ok(());
    };
    let Some(end) = rest.find("?>") else {
        return Ok(());
    };
    let decl = &rest[..end];
    let Some(pos) = decl.find("encoding") else {
        return Ok(());
    };
    let after = decl[pos + "encoding".len()..]
        .trim_start()
        .strip_prefix('=')
        .unwrap_or("")
        .trim_start();
    let mut chars = after.chars();
    let quote = chars.next();
    if let Some(q @ ('"' | '\'')) = quote {
        let value: String = chars.take_while(|c| *c != q).collect();
        if !value.eq_ignore_ascii_case("utf-8") && !value.eq_ignore_ascii_case("utf8") {
            return Err(XmlError::Encoding(value));
        }
    }
    Ok(())
}

fn qualified_name(node: roxmltree::Node<'_, '_>) -> String {
    let tag = node.tag_name();
    match tag.namespace() {
        None | Some(TEI_NS) => tag.name().to_string(),
        Some(ns) => match node.lookup_prefix(ns) {
            Some(p) if !p.is_empty() => format!("{p}:{}", tag.name()),
            _ => tag.name().to_string(),
        },
    }
}

fn convert(node: roxmltree::Node<'_, '_>, path: SourcePath) -> XmlElement {
    let attributes = node
        .attributes()
        .map(|a| {
            let name = match a.namespace() {
                None => a.name().to_string(),
                Some(XML_NS) => format!("xml:{}", a.name()),
                Some(ns) => match node.lookup_prefix(ns) {
                    Some(p) => format!("{p}:{}", a.name()),
                    None => a.name().to_string(),
                },
            };
            XmlAttribute {
                name,
                value: a.value().to_string(),
                value_range: a.range_value(),
            }
        })
        .collect();
    let mut counter = SiblingCounter::default();
    let mut children = Vec::new();
    for child in node.children() {
        if child.is_element() {
            let child_path = counter.next(&path, &qualified_name(child));
            children.push(XmlNode::Element(convert(child, child_path)));
        } else if child.is_text() {
            let t = child.text().unwrap_or_default();
            // roxmltree can split text around entity references; keep one run.
            if let Some(XmlNode::Text(prev)) = children.last_mut() {
                prev.push_str(t);
            } else {
                children.push(XmlNode::Text(t.to_string()));
            }
        }
    }
    XmlElement {
        name: qualified_name(node),
        namespace: node.tag_name().namespace().map(str::to_string),
        attributes,
        children,
        range: node.range(),
        path,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_count_same_named_siblings() {
        let doc = XmlDocument::parse(b"<a><b/><c/><b><d/></b></a>").unwrap();
        let names: Vec<String> = doc
            .root
            .descendants()
            .iter()
            .map(|e| e.path.to_string())
            .collect();
        assert_eq!(
            names,
            [
                "a[1]",
                "a[1]/b[1]",
                "a[1]/c[1]",
                "a[1]/b[2]",
                "a[1]/b[2]/d[1]"
            ]
        );
        let p = SourcePath::parse("a[1]/b[2]/d[1]").unwrap();
        assert_eq!(doc.root.find(&p).unwrap().name, "d");
    }

    #[test]
    fn path_order_is_document_order() {
        let doc = XmlDocument::parse(b"<a><z/><b/><z/></a>").unwrap();
        let mut paths: Vec<SourcePath> = doc
            .root
            .descendants()
            .iter()
            .map(|e| e.path.clone())
            .rev()
            .collect();
        paths.sort();
        let printed: Vec<String> = paths.iter().map(|p| p.to_string()).collect();
        assert_eq!(printed, ["a[1]", "a[1]/z[1]", "a[1]/b[1]", "a[1]/z[2]"]);
    }

    #[test]
    fn refuses_foreign_encodings_and_dtds() {
        let latin = b"<?xml version=\"1.0\" encoding=\"ISO-8859-1\"?><a/>";
        assert!(matches!(
            XmlDocument::parse(latin),
            Err(XmlError::Encoding(_))
        ));
        assert!(
            XmlDocument::parse(b"\xEF\xBB\xBF<?xml version='1.0' encoding='utf-8'?><a/>").is_ok()
        );
        assert!(matches!(
            XmlDocument::parse(b"<a>\xff</a>"),
            Err(XmlError::NotUtf8(_))
        ));
        let dtd = b"<!DOCTYPE a [<!ENTITY x SYSTEM \"file:///etc/passwd\">]><a>&x;</a>";
        assert!(matches!(XmlDocument::parse(dtd), Err(XmlError::Syntax(_))));
    }

    #[test]
    fn raw_ranges_slice_source() {
        let src = "<r xmlns:m=\"urn:m\"><p>x <m:b k='1'>y</m:b></p></r>";
        let doc = XmlDocument::parse_str(src).unwrap();
        let b = doc.root.descendants()[2];
        assert_eq!(b.name, "m:b");
        assert_eq!(doc.raw(b), "<m:b k='1'>y</m:b>");
        assert_eq!(
            doc.root_namespaces,
            vec![("m".to_string(), "urn:m".to_string())]
        );
    }
}
