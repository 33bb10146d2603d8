use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Corpus, CorpusError, casefold_key};
use crate::layout;
use crate::model::*;
use crate::xml::SourcePath;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndexKind {
    Author,
    Organization,
    Person,
    Place,
    Software,
    Keyword,
    Abbreviation,
}

impl IndexKind {
    pub const ALL: [IndexKind; 7] = [
        IndexKind::Author,
        IndexKind::Organization,
        IndexKind::Person,
        IndexKind::Place,
        IndexKind::Software,
        IndexKind::Keyword,
        IndexKind::Abbreviation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IndexKind::Author => "author",
            IndexKind::Organization => "organization",
            IndexKind::Person => "person",
            IndexKind::Place => "place",
            IndexKind::Software => "software",
            IndexKind::Keyword => "keyword",
            IndexKind::Abbreviation => "abbreviation",
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IndexKind {
    type Err = CorpusError;
    fn from_str(s: &str) -> Result<Self, CorpusError> {
        IndexKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| CorpusError::UnknownIndexKind(s.to_string()))
    }
}

/// Parses kind tokens; an empty list means all seven kinds.
pub fn parse_kinds<S: AsRef<str>>(tokens: &[S]) -> Result<BTreeSet<IndexKind>, CorpusError> {
    if tokens.is_empty() {
        return Ok(IndexKind::ALL.into());
    }
    tokens.iter().map(|t| t.as_ref().parse()).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Locator {
    pub article: String,
    /// Path of the mention itself.
    pub path: SourcePath,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub kind: IndexKind,
    pub key: String,
    /// Most frequent original spelling; ties go to the smallest.
    pub display: String,
    pub locators: Vec<Locator>,
}

/// Indexable mentions of one article: source authors, keywords, and the
/// person, organization, place, software and abbreviation mentions in
/// the text. Software is `<term type="software">`; keywords are the
/// `profileDesc` keyword terms. Both encodings are local conventions.
pub fn mentions(a: &Article) -> Vec<(IndexKind, String, SourcePath)> {
    let mut out = Vec::new();
    let hp = layout::header_paths(&a.header);
    if let (Some(b), Some(bp)) = (a.source(), hp.records.first())
        && let Some(an) = &b.analytic
    {
        let paths = layout::bibl_paths(b, bp);
        for (au, ap) in an.authors.iter().zip(paths.authors) {
            out.push((IndexKind::Author, au.sort_name(), ap.path));
        }
    }
    for (k, p) in a.header.profile_desc.keywords.iter().zip(hp.keyword_terms) {
        out.push((IndexKind::Keyword, k.term.clone(), p));
    }
    for (text, p) in layout::text_rich_sites(a) {
        for (inline, ip) in layout::inline_sites(text, &p) {
            let m = match inline {
                Inline::Person(m) => (IndexKind::Person, m.text.clone()),
                Inline::Org(m) => (IndexKind::Organization, m.text.clone()),
                Inline::Place(m) => (IndexKind::Place, m.text.clone()),
                Inline::Term {
                    kind: Some(k),
                    text,
                } if k == "software" => (IndexKind::Software, text.clone()),
                Inline::Abbr { abbr, .. } => (IndexKind::Abbreviation, abbr.clone()),
                _ => continue,
            };
            out.push((m.0, m.1, ip));
        }
    }
    out.retain(|(_, t, _)| !t.trim().is_empty());
    out
}

/// Spelling counts and locators gathered under one (kind, key).
type Group = (BTreeMap<String, usize>, Vec<Locator>);

/// One entry per (kind, key) over the whole corpus, sorted by kind then key.
pub fn build_indexes(c: &Corpus, kinds: &BTreeSet<IndexKind>) -> Vec<IndexEntry> {
    let mut groups: BTreeMap<(IndexKind, String), Group> = BTreeMap::new();
    for (id, a) in &c.articles {
        for (kind, text, path) in mentions(a) {
            if !kinds.contains(&kind) {
                continue;
            }
            let g = groups.entry((kind, casefold_key(&text))).or_default();
            *g.0.entry(normalize_space(&text)).or_default() += 1;
            g.1.push(Locator {
                article: id.clone(),
                path,
            });
        }
    }
    groups
        .into_iter()
        .map(|((kind, key), (forms, mut locators))| {
            locators.sort();
            locators.dedup();
            let display = forms
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
                .map(|(f, _)| f.clone())
                .unwrap();
            IndexEntry {
                kind,
                key,
                display,
                locators,
            }
        })
        .collect()
}
