//! Output transformations: bibliographic entries, reference lists, XHTML
//! and plain text.
//!
//! Citation styles are data. A [`StyleGuide`] maps each record type to an
//! ordered list of [`Segment`]s; switching style changes only which table
//! is applied, never the article.
//!
//! Segment paths:
//!
//! | path | value |
//! |------|-------|
//! | `authors` | responsible authors, formatted per the guide |
//! | `title` | main title, analytic level first |
//! | `analytic.title`, `monogr.title` | main title at that level |
//! | `imprint.publisher`, `imprint.pub_place`, `imprint.year` | imprint fields |
//! | `scope.vol`, `scope.issue` | scope values |
//! | `scope.pages` | `fpage`–`lpage`, a lone `fpage`, or `pp` |
//! | `idno.DOI`, `idno.ISBN`, `idno.ISSN` | identifiers |
//! | `literal` | always present and empty; emits its prefix and suffix |

mod entry;
mod text;
mod xhtml;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::layout;
use crate::model::*;

pub use entry::{RenderedEntry, SortKey, Span, format_entry};
pub use text::{render_plaintext, render_text};
pub use xhtml::render_xhtml;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("record has no main title")]
    NoTitle,
    #[error("unknown style {0:?}")]
    UnknownStyle(String),
    #[error("invalid style guide: {0}")]
    Style(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarkerScheme {
    NumericBracket,
    AuthorDate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ListOrder {
    Alphabetical,
    CitationOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NameFormat {
    SurnameFirstInitials,
    SurnameFirstFull,
    AsEncoded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Typography {
    Italic,
    Quoted,
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Invert {
    First,
    All,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Segment {
    pub path: String,
    pub typography: Typography,
    #[serde(default)]
    pub prefix: String,
    #[serde(default)]
    pub suffix: String,
    #[serde(default)]
    pub omit_if_absent: bool,
    /// Value used when the field is absent and the segment is kept.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fallback: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuthorList {
    pub invert: Invert,
    pub separator: String,
    pub pair_separator: String,
    pub last_separator: String,
    /// More authors than this collapse to the first plus "et al.".
    pub et_al_after: Option<usize>,
    pub marker_conjunction: String,
}

impl Default for AuthorList {
    fn default() -> Self {
        AuthorList {
            invert: Invert::First,
            separator: ", ".into(),
            pair_separator: ", and ".into(),
            last_separator: ", and ".into(),
            et_al_after: None,
            marker_conjunction: "and".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StyleGuide {
    pub id: String,
    pub marker_scheme: MarkerScheme,
    pub list_order: ListOrder,
    pub author_name_format: NameFormat,
    #[serde(default)]
    pub author_list: AuthorList,
    pub layouts: BTreeMap<String, Vec<Segment>>,
}

pub const BUILTIN_STYLES: [&str; 3] = ["apa", "chicago", "mla"];

const SEGMENT_PATHS: [&str; 14] = [
    "authors",
    "title",
    "analytic.title",
    "monogr.title",
    "imprint.publisher",
    "imprint.pub_place",
    "imprint.year",
    "scope.vol",
    "scope.issue",
    "scope.pages",
    "idno.DOI",
    "idno.ISBN",
    "idno.ISSN",
    "literal",
];

impl StyleGuide {
    pub fn builtin(id: &str) -> Option<StyleGuide> {
        let json = match id {
            "apa" => include_str!("../../data/styles/apa.json"),
            "chicago" => include_str!("../../data/styles/chicago.json"),
            "mla" => include_str!("../../data/styles/mla.json"),
            _ => return None,
        };
        Some(StyleGuide::from_json(json).expect("shipped style is valid"))
    }

    pub fn apa() -> StyleGuide {
        Self::builtin("apa").unwrap()
    }

    pub fn chicago() -> StyleGuide {
        Self::builtin("chicago").unwrap()
    }

    pub fn mla() -> StyleGuide {
        Self::builtin("mla").unwrap()
    }

    pub fn from_json(text: &str) -> Result<StyleGuide, RenderError> {
        let g: StyleGuide =
            serde_json::from_str(text).map_err(|e| RenderError::Style(e.to_string()))?;
        g.check()?;
        Ok(g)
    }

    /// A built-in style id, or a path to a style file.
    pub fn resolve(name: &str) -> Result<StyleGuide, RenderError> {
        if let Some(g) = Self::builtin(name) {
            return Ok(g);
        }
        let p = Path::new(name);
        if p.extension().is_some_and(|e| e == "json") && p.is_file() {
            let text = std::fs::read_to_string(p)
                .map_err(|e| RenderError::Style(format!("{name}: {e}")))?;
            return Self::from_json(&text);
        }
        Err(RenderError::UnknownStyle(name.to_string()))
    }

    pub fn check(&self) -> Result<(), RenderError> {
        if !self.layouts.contains_key("unknown") {
            return Err(RenderError::Style(format!(
                "style {} has no \"unknown\" layout",
                self.id
            )));
        }
        for (kind, segs) in &self.layouts {
            if let Some(s) = segs
                .iter()
                .find(|s| !SEGMENT_PATHS.contains(&s.path.as_str()))
            {
                return Err(RenderError::Style(format!(
                    "layout {kind}: unknown field path {:?}",
                    s.path
                )));
            }
        }
        Ok(())
    }

    pub fn layout_for(&self, t: &DocumentType) -> &[Segment] {
        self.layouts
            .get(t.as_str())
            .or_else(|| self.layouts.get("unknown"))
            .expect("checked at load")
    }
}

/// Ids cited by the article, in reading order, repeats included: inline
/// bibliographic references and `cit` pointers.
pub fn citation_order(a: &Article) -> Vec<String> {
    let mut cites: Vec<(crate::xml::SourcePath, String)> = Vec::new();
    for (text, p) in layout::text_rich_sites(a) {
        for (inline, ip) in layout::inline_sites(text, &p) {
            if let Inline::BiblRef { target, .. } = inline
                && let Ok(id) = target.fragment()
            {
                cites.push((ip, id.to_string()));
            }
        }
    }
    for site in layout::division_sites(a) {
        let (_, blocks, _) = layout::division_children(site.division, &site.path);
        for (b, bp) in site.division.blocks.iter().zip(blocks) {
            if let Block::Cit(CitBlock {
                source: CitSource::Ref(t),
                ..
            }) = b
                && let (Ok(id), Some(p)) = (t.fragment(), layout::block_source_path(b, &bp))
            {
                cites.push((p, id.to_string()));
            }
        }
    }
    cites.sort_by(|x, y| x.0.cmp(&y.0));
    cites.into_iter().map(|(_, id)| id).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListedEntry {
    /// `[n]` under numeric schemes, absent under author-date.
    pub label: Option<String>,
    pub entry: RenderedEntry,
}

/// Orders and labels a reference list. Citation order numbers entries by
/// first appearance in `citation_order`; entries never cited follow,
/// alphabetically. Alphabetical order sorts by [`SortKey`]. Entries
/// without any title are skipped.
pub fn format_reference_list(
    l: &ListBibl,
    g: &StyleGuide,
    citation_order: &[String],
) -> Vec<ListedEntry> {
    let mut entries: Vec<RenderedEntry> = l
        .entries
        .iter()
        .filter_map(|b| format_entry(b, g).ok())
        .collect();
    let alphabetical = |es: &mut Vec<RenderedEntry>| es.sort_by(|a, b| a.sort_key.cmp(&b.sort_key));
    match g.list_order {
        ListOrder::Alphabetical => alphabetical(&mut entries),
        ListOrder::CitationOrder => {
            let mut ordered = Vec::new();
            for id in citation_order {
                if let Some(i) = entries
                    .iter()
                    .position(|e| e.id.as_deref() == Some(id.as_str()))
                {
                    ordered.push(entries.remove(i));
                }
            }
            alphabetical(&mut entries);
            ordered.append(&mut entries);
            entries = ordered;
        }
    }
    entries
        .into_iter()
        .enumerate()
        .map(|(i, entry)| ListedEntry {
            label: (g.marker_scheme == MarkerScheme::NumericBracket)
                .then(|| format!("[{}]", i + 1)),
            entry,
        })
        .collect()
}

/// Marker text for each cited id under `g`: `[n]` from the list numbering,
/// or `(Surname, Year)`.
pub fn citation_markers(
    list: &[ListedEntry],
    l: &ListBibl,
    g: &StyleGuide,
) -> BTreeMap<String, String> {
    let mut out = BTreeMap::new();
    for e in list {
        let Some(id) = &e.entry.id else { continue };
        let marker = match (g.marker_scheme, &e.label) {
            (MarkerScheme::NumericBracket, Some(label)) => label.clone(),
            _ => {
                let record = l
                    .entries
                    .iter()
                    .find(|b| b.xml_id.as_deref() == Some(id.as_str()));
                record.map(|b| author_date_marker(b, g)).unwrap_or_default()
            }
        };
        out.insert(id.clone(), marker);
    }
    out
}

/// Reference list and citation markers of one article under one style.
pub(crate) struct Apparatus {
    pub list: Vec<ListedEntry>,
    pub markers: BTreeMap<String, String>,
}

impl Apparatus {
    pub fn new(a: &Article, g: &StyleGuide) -> Apparatus {
        let empty = ListBibl::default();
        let l = a.reference_list().unwrap_or(&empty);
        let list = format_reference_list(l, g, &citation_order(a));
        let markers = citation_markers(&list, l, g);
        Apparatus { list, markers }
    }

    /// Marker for a citation target; `None` when it does not resolve.
    pub fn marker(&self, target: &RefTarget) -> Option<(&str, &str)> {
        let id = target.fragment().ok()?;
        self.markers
            .get_key_value(id)
            .map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

/// Affiliation as one line: organisation units in order, then address.
pub fn affiliation_line(af: &Affiliation) -> String {
    let mut parts: Vec<String> = af
        .org_units
        .iter()
        .map(|o| normalize_space(&o.name))
        .collect();
    if let Some(ad) = &af.address {
        let place = [ad.settlement.as_deref(), ad.post_code.as_deref()]
            .into_iter()
            .flatten()
            .collect::<Vec<_>>()
            .join(" ");
        if !place.is_empty() {
            parts.push(place);
        }
        parts.extend(ad.country.clone());
        parts.extend(
            ad.lines
                .iter()
                .filter(|l| !matches!(l.kind.as_deref(), Some("phone" | "fax")))
                .map(|l| normalize_space(&l.text)),
        );
    }
    parts.join(", ")
}

/// Cell texts of a table, row by row, with whether the row or cell is a
/// label. `None` when the captured markup has no parseable rows.
pub(crate) fn table_rows(t: &TableBlock) -> Option<Vec<Vec<(String, bool)>>> {
    let doc = crate::xml::XmlDocument::parse_str(&t.raw).ok()?;
    let rows: Vec<Vec<(String, bool)>> = doc
        .root
        .child_elements()
        .filter(|e| e.name == "row")
        .map(|r| {
            r.child_elements()
                .filter(|e| e.name == "cell")
                .map(|c| {
                    (
                        normalize_space(&c.text()),
                        c.attr("role") == Some("label") || r.attr("role") == Some("label"),
                    )
                })
                .collect()
        })
        .collect();
    (!rows.is_empty()).then_some(rows)
}

fn author_date_marker(b: &BiblStruct, g: &StyleGuide) -> String {
    let names: Vec<&str> = b.authors().iter().map(|a| a.surname.as_str()).collect();
    let who = match names.as_slice() {
        [] => b
            .main_title()
            .map(|t| normalize_title(&t.text))
            .unwrap_or_default(),
        [one] => one.to_string(),
        [a, b] => format!("{a} {} {b}", g.author_list.marker_conjunction),
        [a, ..] => format!("{a} et al."),
    };
    match b.year() {
        Some(y) => format!("({who}, {y})"),
        None => format!("({who}, n.d.)"),
    }
}
