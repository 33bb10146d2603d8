use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Corpus, CorpusError, IndexKind, mentions};
use crate::layout;
use crate::model::*;
use crate::xml::SourcePath;

/// What a query searches inside.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ElementKind {
    /// An indexable mention of that kind.
    Mention(IndexKind),
    /// Heads, paragraphs, quotations, list items, captions and notes.
    Text,
    /// The header main title.
    Title,
    Any,
}

impl fmt::Display for ElementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementKind::Mention(k) => write!(f, "{k}"),
            ElementKind::Text => f.write_str("text"),
            ElementKind::Title => f.write_str("title"),
            ElementKind::Any => f.write_str("any"),
        }
    }
}

impl FromStr for ElementKind {
    type Err = CorpusError;
    /// Accepts the index kinds (optionally suffixed `-mention`), `org`,
    /// `text`, `title` and `any`.
    fn from_str(s: &str) -> Result<Self, CorpusError> {
        let base = s.strip_suffix("-mention").unwrap_or(s);
        match base {
            "text" => Ok(ElementKind::Text),
            "title" => Ok(ElementKind::Title),
            "any" => Ok(ElementKind::Any),
            "org" => Ok(ElementKind::Mention(IndexKind::Organization)),
            other => other
                .parse()
                .map(ElementKind::Mention)
                .map_err(|_| CorpusError::UnknownElementKind(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Query {
    pub element_kind: Option<ElementKind>,
    /// Case-insensitive substring of the node text.
    pub text_predicate: Option<String>,
    /// Inclusive bounds on the article's publication date.
    pub date_range: Option<(CalendarDate, CalendarDate)>,
    /// Case-insensitive surname of some reference-list author.
    pub cites_author_surname: Option<String>,
}

impl Query {
    pub fn check(&self) -> Result<(), CorpusError> {
        let any = self.element_kind.is_some()
            || self.text_predicate.is_some()
            || self.date_range.is_some()
            || self.cites_author_surname.is_some();
        if any {
            Ok(())
        } else {
            Err(CorpusError::EmptyQuery)
        }
    }

    fn article_matches(&self, a: &Article) -> bool {
        if let Some((from, to)) = &self.date_range
            && !document_date(a).is_some_and(|d| d.within(from, to))
        {
            return false;
        }
        if let Some(s) = &self.cites_author_surname {
            let want = s.trim().to_lowercase();
            let entries = a
                .reference_list()
                .map(|l| l.entries.as_slice())
                .unwrap_or_default();
            if !entries
                .iter()
                .flat_map(|b| b.authors())
                .any(|au| au.surname.trim().to_lowercase() == want)
            {
                return false;
            }
        }
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Hit {
    pub article: String,
    pub path: SourcePath,
    pub snippet: String,
}

/// Searchable nodes of an article with their kind, path and normalized text.
pub fn query_nodes(a: &Article) -> Vec<(ElementKind, SourcePath, String)> {
    let mut out: Vec<(ElementKind, SourcePath, String)> = Vec::new();
    if let (Some(t), Some(p)) = (a.main_title(), layout::header_paths(&a.header).main_title) {
        out.push((ElementKind::Title, p, normalize_title(t)));
    }
    let hp = layout::header_paths(&a.header);
    if let (Some(b), Some(bp)) = (a.source(), hp.records.first()) {
        let authors = b
            .analytic
            .as_ref()
            .map(|an| an.authors.as_slice())
            .unwrap_or_default();
        for (au, ap) in authors.iter().zip(layout::bibl_paths(b, bp).authors) {
            let name = format!("{} {}", au.forenames.join(" "), au.surname);
            out.push((
                ElementKind::Mention(IndexKind::Author),
                ap.path,
                normalize_space(&name),
            ));
        }
    }
    for (kind, text, path) in mentions(a).into_iter().filter(|m| m.0 != IndexKind::Author) {
        out.push((ElementKind::Mention(kind), path, normalize_space(&text)));
    }
    for (text, path) in layout::text_rich_sites(a) {
        out.push((ElementKind::Text, path, normalize_space(&text.plain_text())));
    }
    out
}

/// Nodes matching every criterion of `q`, sorted by article then path.
pub fn query(c: &Corpus, q: &Query) -> Result<Vec<Hit>, CorpusError> {
    q.check()?;
    let needle = q.text_predicate.as_ref().map(|t| t.to_lowercase());
    let mut hits = Vec::new();
    for (id, a) in &c.articles {
        if !q.article_matches(a) {
            continue;
        }
        for (kind, path, text) in query_nodes(a) {
            let kind_ok = match q.element_kind {
                None | Some(ElementKind::Any) => true,
                Some(k) => k == kind,
            };
            if kind_ok
                && needle
                    .as_ref()
                    .is_none_or(|n| text.to_lowercase().contains(n.as_str()))
            {
                hits.push(Hit {
                    article: id.clone(),
                    path,
                    snippet: text,
                });
            }
        }
    }
    hits.sort();
    hits.dedup();
    Ok(hits)
}
