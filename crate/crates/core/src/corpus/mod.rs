//! A directory of articles and the products derived across it: name
//! indexes, a unified bibliography, a corrigenda page and structural
//! queries.
//!
//! A [`Corpus`] is immutable once loaded. Every product is a pure function
//! of it and comes out sorted, so results do not depend on load order.

mod biblio;
mod index;
mod pages;
mod query;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::Article;
use crate::xml::{Issue, Severity, SourcePath, parse_article};

pub use biblio::{
    CORRECTION, CorrigendaEntry, DedupKey, UnifiedEntry, corrigenda, corrigenda_of_kind,
    unified_bibliography,
};
pub use index::{IndexEntry, IndexKind, Locator, build_indexes, mentions, parse_kinds};
pub use pages::{
    corrigenda_json, corrigenda_xhtml, hits_json, hits_xhtml, index_json, index_xhtml, unibib_json,
    unibib_xhtml,
};
pub use query::{ElementKind, Hit, Query, query, query_nodes};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CorpusError {
    #[error("unknown index kind {0:?}")]
    UnknownIndexKind(String),
    #[error("unknown element kind {0:?}")]
    UnknownElementKind(String),
    #[error("a query needs at least one criterion")]
    EmptyQuery,
    #[error("cannot list {path}: {message}")]
    Io { path: String, message: String },
}

/// Outcome of loading one file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoadReport {
    pub path: String,
    /// Id of the loaded article; absent when the file was rejected.
    pub id: Option<String>,
    pub issues: Vec<Issue>,
}

impl LoadReport {
    pub fn accepted(&self) -> bool {
        self.id.is_some()
    }

    pub fn has_errors(&self) -> bool {
        self.issues.iter().any(|i| i.severity == Severity::Error)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub articles: BTreeMap<String, Article>,
    /// One report per input file, keyed by path.
    pub load_reports: BTreeMap<String, LoadReport>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.articles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.articles.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Article> {
        self.articles.get(id)
    }

    pub fn report(&self, id: &str) -> Option<&LoadReport> {
        self.load_reports
            .values()
            .find(|r| r.id.as_deref() == Some(id))
    }
}

fn file_error(message: String) -> Issue {
    Issue {
        severity: Severity::Error,
        location: SourcePath::default(),
        message,
    }
}

/// Path, article or fatal issues, and warnings of one file.
type Loaded = (String, Result<Article, Vec<Issue>>, Vec<Issue>);

/// Parses every file. Paths are processed in sorted order; when two files
/// yield the same article id, the later path is rejected. Unreadable or
/// malformed files get an error report and no article.
pub fn load_corpus(paths: &[PathBuf]) -> Corpus {
    let mut sorted: Vec<&PathBuf> = paths.iter().collect();
    sorted.sort();
    sorted.dedup();
    let parsed: Vec<Loaded> = sorted
        .par_iter()
        .map(|p| {
            let key = p.display().to_string();
            match std::fs::read(p) {
                Err(e) => (
                    key,
                    Err(vec![file_error(format!("cannot read file: {e}"))]),
                    Vec::new(),
                ),
                Ok(bytes) => {
                    let r = parse_article(&bytes);
                    match r.outcome {
                        Some(a) => (key, Ok(a.with_source_path(p)), r.issues),
                        None => (key, Err(r.issues), Vec::new()),
                    }
                }
            }
        })
        .collect();
    let mut c = Corpus::default();
    let mut first_path: BTreeMap<String, String> = BTreeMap::new();
    for (path, outcome, warnings) in parsed {
        let report = match outcome {
            Err(issues) => LoadReport {
                path: path.clone(),
                id: None,
                issues,
            },
            Ok(a) => match first_path.get(&a.id) {
                Some(earlier) => {
                    let mut issues = warnings;
                    issues.push(file_error(format!(
                        "duplicate article id {:?}, already loaded from {earlier}",
                        a.id
                    )));
                    LoadReport {
                        path: path.clone(),
                        id: None,
                        issues,
                    }
                }
                None => {
                    first_path.insert(a.id.clone(), path.clone());
                    let id = a.id.clone();
                    c.articles.insert(id.clone(), a);
                    LoadReport {
                        path: path.clone(),
                        id: Some(id),
                        issues: warnings,
                    }
                }
            },
        };
        c.load_reports.insert(path, report);
    }
    c
}

/// Every `.xml` file below `dir`, sorted.
pub fn xml_files(dir: &Path) -> Result<Vec<PathBuf>, CorpusError> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        let entries = std::fs::read_dir(&d).map_err(|e| CorpusError::Io {
            path: d.display().to_string(),
            message: e.to_string(),
        })?;
        for entry in entries {
            let entry = entry.map_err(|e| CorpusError::Io {
                path: d.display().to_string(),
                message: e.to_string(),
            })?;
            let p = entry.path();
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("xml")) {
                out.push(p);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Loads every `.xml` file below `dir`.
pub fn load_dir(dir: &Path) -> Result<Corpus, CorpusError> {
    Ok(load_corpus(&xml_files(dir)?))
}

/// Lowercase with whitespace runs collapsed: the grouping key of names.
pub fn casefold_key(s: &str) -> String {
    crate::model::normalize_space(s).to_lowercase()
}
