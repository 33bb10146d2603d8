use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Corpus, casefold_key};
use crate::model::*;

/// Change kind gathered into the corrigenda page.
pub const CORRECTION: &str = "correction";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DedupKey {
    /// Lowercased DOI.
    Doi(String),
    /// First-author surname casefolded, year, normalized main title casefolded.
    Work {
        surname: String,
        year: Option<i32>,
        title: String,
    },
}

impl DedupKey {
    pub fn of(b: &BiblStruct) -> DedupKey {
        if let Some(doi) = b.identifier("DOI").map(str::trim).filter(|d| !d.is_empty()) {
            return DedupKey::Doi(doi.to_lowercase());
        }
        DedupKey::Work {
            surname: b
                .authors()
                .first()
                .map(|a| casefold_key(&a.surname))
                .unwrap_or_default(),
            year: b.year(),
            title: b
                .main_title()
                .map(|t| normalize_title(&t.text).to_lowercase())
                .unwrap_or_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnifiedEntry {
    pub key: DedupKey,
    /// The record as first met, in article-id order.
    pub record: BiblStruct,
    pub citing: Vec<String>,
}

/// Every reference-list entry of the corpus, merged by [`DedupKey`].
pub fn unified_bibliography(c: &Corpus) -> Vec<UnifiedEntry> {
    let mut merged: BTreeMap<DedupKey, (BiblStruct, BTreeSet<String>)> = BTreeMap::new();
    for (id, a) in &c.articles {
        for b in a
            .reference_list()
            .map(|l| l.entries.as_slice())
            .unwrap_or_default()
        {
            merged
                .entry(DedupKey::of(b))
                .or_insert_with(|| (b.clone(), BTreeSet::new()))
                .1
                .insert(id.clone());
        }
    }
    merged
        .into_iter()
        .map(|(key, (record, citing))| UnifiedEntry {
            key,
            record,
            citing: citing.into_iter().collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrigendaEntry {
    pub article: String,
    pub when: CalendarDate,
    pub description: RichText,
}

/// Changes of kind [`CORRECTION`], newest first, then by article id.
pub fn corrigenda(c: &Corpus) -> Vec<CorrigendaEntry> {
    corrigenda_of_kind(c, CORRECTION)
}

pub fn corrigenda_of_kind(c: &Corpus, kind: &str) -> Vec<CorrigendaEntry> {
    let mut out: Vec<CorrigendaEntry> = c
        .articles
        .iter()
        .flat_map(|(id, a)| {
            a.header
                .revision_desc
                .changes
                .iter()
                .filter(|ch| ch.kind == kind)
                .map(|ch| CorrigendaEntry {
                    article: id.clone(),
                    when: ch.when.clone(),
                    description: ch.description.clone(),
                })
        })
        .collect();
    out.sort_by(|a, b| b.when.cmp(&a.when).then_with(|| a.article.cmp(&b.article)));
    out
}
