use serde::{Deserialize, Serialize};

use super::ModelError;

/// A pointer to a local bibliography entry, written `#id`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RefTarget(String);

impl RefTarget {
    pub fn new(target: impl Into<String>) -> Self {
        RefTarget(target.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The id named by the target, without the leading `#`.
    pub fn fragment(&self) -> Result<&str, ModelError> {
        match self.0.strip_prefix('#') {
            Some(id) if !id.is_empty() => Ok(id),
            _ => Err(ModelError::MalformedTarget(self.0.clone())),
        }
    }
}

/// Element captured verbatim because it lies outside the modelled subset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Opaque {
    /// Qualified element name, e.g. `table` or `mml:math`.
    pub name: String,
    /// Exact source markup of the element, start tag through end tag.
    pub raw: String,
    /// Concatenated descendant text.
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mention {
    pub text: String,
    pub key: Option<String>,
}

impl Mention {
    pub fn new(text: impl Into<String>) -> Self {
        Mention {
            text: text.into(),
            key: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Inline {
    Text(String),
    Emph {
        rend: String,
        content: RichText,
    },
    BiblRef {
        target: RefTarget,
        text: String,
    },
    Person(Mention),
    Org(Mention),
    Place(Mention),
    Term {
        kind: Option<String>,
        text: String,
    },
    Abbr {
        abbr: String,
        expansion: Option<String>,
    },
    Link {
        target: String,
        text: String,
    },
    Opaque(Opaque),
}

impl Inline {
    pub fn text(s: impl Into<String>) -> Self {
        Inline::Text(s.into())
    }

    fn push_plain(&self, out: &mut String) {
        match self {
            Inline::Text(t) => out.push_str(t),
            Inline::Emph { content, .. } => {
                for i in content.iter() {
                    i.push_plain(out);
                }
            }
            Inline::BiblRef { text, .. }
            | Inline::Term { text, .. }
            | Inline::Link { text, .. } => out.push_str(text),
            Inline::Person(m) | Inline::Org(m) | Inline::Place(m) => out.push_str(&m.text),
            Inline::Abbr { abbr, .. } => out.push_str(abbr),
            Inline::Opaque(o) => out.push_str(&o.text),
        }
    }
}

/// Ordered inline content: text runs interleaved with emphasis and mentions.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RichText(Vec<Inline>);

impl RichText {
    pub fn new(inlines: Vec<Inline>) -> Self {
        RichText(inlines)
    }

    pub fn plain(s: impl Into<String>) -> Self {
        RichText(vec![Inline::Text(s.into())])
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Inline> {
        self.0.iter()
    }

    pub fn inlines(&self) -> &[Inline] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Flattened text with markup removed and whitespace kept as encoded.
    pub fn plain_text(&self) -> String {
        let mut out = String::new();
        for i in &self.0 {
            i.push_plain(&mut out);
        }
        out
    }

    /// True when there is nothing but whitespace once markup is removed.
    pub fn is_blank(&self) -> bool {
        self.plain_text().trim().is_empty()
    }
}

impl From<Vec<Inline>> for RichText {
    fn from(v: Vec<Inline>) -> Self {
        RichText(v)
    }
}

impl<'a> IntoIterator for &'a RichText {
    type Item = &'a Inline;
    type IntoIter = std::slice::Iter<'a, Inline>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Collapses runs of whitespace to one space and trims both ends.
pub fn normalize_space(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Flattens a title to whitespace-normalized plain text.
pub fn normalize_title(t: &RichText) -> String {
    normalize_space(&t.plain_text())
}
