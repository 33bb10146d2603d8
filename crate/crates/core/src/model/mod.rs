//! Typed in-memory representation of a TEI journal article.
//!
//! The model is independent of serialization: [`crate::xml`] reads and
//! writes it. Values are plain data and never mutated after construction.

mod date;
mod text;

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use date::{CalendarDate, DatePrecision};
pub use text::{Inline, Mention, Opaque, RefTarget, RichText, normalize_space, normalize_title};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid date {0:?}: expected YYYY, YYYY-MM or YYYY-MM-DD")]
    InvalidDate(String),
    #[error("malformed reference target {0:?}: expected a local fragment like \"#b1\"")]
    MalformedTarget(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    pub id: String,
    pub header: Header,
    pub front: Vec<Division>,
    pub body: Vec<Division>,
    pub back: BackMatter,
    pub source_path: Option<String>,
    /// Prefixed namespace declarations carried on the root element, needed
    /// to re-emit opaque foreign markup such as `mml:math`.
    pub namespaces: Vec<(String, String)>,
}

impl Article {
    /// Attaches the file the article was read from and, when the source
    /// record carries no DOI, derives the id from the file stem.
    pub fn with_source_path(mut self, path: &Path) -> Self {
        self.source_path = Some(path.display().to_string());
        self.id = article_id(self.header.source(), Some(path));
        self
    }

    pub fn source(&self) -> Option<&BiblStruct> {
        self.header.source()
    }

    pub fn main_title(&self) -> Option<&RichText> {
        self.header
            .file_desc
            .as_ref()
            .and_then(FileDesc::main_title)
    }

    pub fn reference_list(&self) -> Option<&ListBibl> {
        self.back.reference_list.as_ref()
    }

    /// All divisions in `text`, front then body then back, parents before children.
    pub fn all_divisions(&self) -> Vec<&Division> {
        let mut out = Vec::new();
        for d in self
            .front
            .iter()
            .chain(&self.body)
            .chain(&self.back.divisions)
        {
            d.collect_into(&mut out);
        }
        out
    }
}

/// Document identifier: the source DOI when present, else the file stem.
pub fn article_id(source: Option<&BiblStruct>, path: Option<&Path>) -> String {
    if let Some(doi) = source.and_then(|s| s.identifier("DOI")) {
        return doi.to_string();
    }
    path.and_then(|p| p.file_stem())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Publication date of the article: the imprint date of its source record.
pub fn document_date(article: &Article) -> Option<&CalendarDate> {
    article
        .source()
        .and_then(|b| b.monogr.imprint.date.as_ref())
        .map(|d| &d.when)
}

/// Looks `target` up among the reference-list entries.
pub fn resolve_ref<'a>(
    article: &'a Article,
    target: &RefTarget,
) -> Result<Option<&'a BiblStruct>, ModelError> {
    let id = target.fragment()?;
    Ok(article
        .reference_list()
        .and_then(|l| l.entries.iter().find(|b| b.xml_id.as_deref() == Some(id))))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub file_desc: Option<FileDesc>,
    pub profile_desc: ProfileDesc,
    pub revision_desc: RevisionDesc,
}

impl Header {
    pub fn source(&self) -> Option<&BiblStruct> {
        self.file_desc.as_ref().and_then(FileDesc::source)
    }
}

/// `fileDesc`. Its three parts are optional here so that a missing part
/// is a validation finding rather than a parse failure.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDesc {
    pub title_stmt: Option<TitleStmt>,
    pub publication_stmt: Option<PublicationStmt>,
    pub source_desc: Option<SourceDesc>,
}

impl FileDesc {
    pub fn main_title(&self) -> Option<&RichText> {
        self.title_stmt.as_ref().and_then(|t| t.main_title.as_ref())
    }

    pub fn source(&self) -> Option<&BiblStruct> {
        self.source_desc.as_ref().and_then(|s| s.records.first())
    }

    pub fn availability_text(&self) -> Option<&RichText> {
        self.publication_stmt
            .as_ref()
            .and_then(|p| p.availability.as_ref())
    }

    pub fn publication_date(&self) -> Option<&CalendarDate> {
        self.publication_stmt.as_ref().and_then(|p| p.date.as_ref())
    }

    pub fn authority(&self) -> Option<&str> {
        self.publication_stmt
            .as_ref()
            .and_then(|p| p.authority.as_deref())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TitleStmt {
    pub main_title: Option<RichText>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationStmt {
    /// Copyright statement.
    pub availability: Option<RichText>,
    pub date: Option<CalendarDate>,
    pub authority: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceDesc {
    pub records: Vec<BiblStruct>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileDesc {
    pub keywords: Vec<Keyword>,
    pub languages: Vec<String>,
}

impl ProfileDesc {
    pub fn is_empty(&self) -> bool {
        self.keywords.is_empty() && self.languages.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Keyword {
    pub term: String,
    pub scheme: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RevisionDesc {
    pub changes: Vec<Change>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Change {
    pub when: CalendarDate,
    /// Lowercase token such as `received`, `accepted` or `correction`.
    pub kind: String,
    pub description: RichText,
}

/// `biblStruct` type attribute. Unrecognised values are kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DocumentType(String);

impl DocumentType {
    pub const KNOWN: [&'static str; 10] = [
        "article",
        "journalArticle",
        "book",
        "bookSection",
        "conferencePaper",
        "thesis",
        "report",
        "webPage",
        "standard",
        "unknown",
    ];

    pub fn new(value: impl Into<String>) -> Self {
        let v: String = value.into();
        if v.trim().is_empty() {
            DocumentType("unknown".into())
        } else {
            DocumentType(v)
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_known(&self) -> bool {
        Self::KNOWN.contains(&self.0.as_str())
    }

    /// The value used to pick a rendering layout: the token itself when
    /// recognised, `unknown` otherwise.
    pub fn classify(&self) -> &str {
        if self.is_known() { &self.0 } else { "unknown" }
    }

    pub fn is_article(&self) -> bool {
        matches!(self.0.as_str(), "article" | "journalArticle")
    }
}

impl Default for DocumentType {
    fn default() -> Self {
        DocumentType("unknown".into())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiblStruct {
    pub doc_type: DocumentType,
    pub analytic: Option<Analytic>,
    pub monogr: Monogr,
    pub identifiers: Vec<Identifier>,
    pub xml_id: Option<String>,
}

impl BiblStruct {
    pub fn identifier(&self, kind: &str) -> Option<&str> {
        self.identifiers
            .iter()
            .find(|i| i.kind.eq_ignore_ascii_case(kind))
            .map(|i| i.value.as_str())
    }

    /// Authors responsible for the work: analytic authors when there is an
    /// analytic level, otherwise the monograph's authors.
    pub fn authors(&self) -> &[Author] {
        match &self.analytic {
            Some(a) if !a.authors.is_empty() => &a.authors,
            _ => &self.monogr.container_authors,
        }
    }

    /// Main title of the cited item: analytic when present, else monograph.
    pub fn main_title(&self) -> Option<&Title> {
        self.analytic
            .as_ref()
            .and_then(|a| main_title_of(&a.titles))
            .or_else(|| main_title_of(&self.monogr.titles))
    }

    pub fn year(&self) -> Option<i32> {
        self.monogr.imprint.date.as_ref().map(|d| d.when.year())
    }

    pub fn all_scopes(&self) -> &[Scope] {
        &self.monogr.imprint.scopes
    }
}

pub(crate) fn main_title_of(titles: &[Title]) -> Option<&Title> {
    titles.iter().find(|t| t.kind == "main")
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Analytic {
    pub titles: Vec<Title>,
    pub authors: Vec<Author>,
}

impl Analytic {
    pub fn main_title(&self) -> Option<&Title> {
        main_title_of(&self.titles)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Title {
    /// `a` (article), `j` (journal) or `m` (monograph).
    pub level: String,
    /// `main`, `subordinate`, `abbreviated` or a registry form like `nlm-ta`.
    pub kind: String,
    pub text: RichText,
}

impl Title {
    pub fn new(level: &str, kind: &str, text: impl Into<String>) -> Self {
        Title {
            level: level.into(),
            kind: kind.into(),
            text: RichText::plain(text),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Author {
    pub corresponding: bool,
    pub identifiers: Vec<Identifier>,
    pub forenames: Vec<String>,
    /// Family name, or the full name of an organisational author.
    pub surname: String,
    pub affiliation: Option<Affiliation>,
    pub email: Option<String>,
}

impl Author {
    pub fn person(forenames: &[&str], surname: &str) -> Self {
        Author {
            forenames: forenames.iter().map(|s| s.to_string()).collect(),
            surname: surname.into(),
            ..Default::default()
        }
    }

    pub fn is_organisation(&self) -> bool {
        self.forenames.is_empty()
    }

    /// `Surname, Forename Forename`, or the surname alone.
    pub fn sort_name(&self) -> String {
        if self.forenames.is_empty() {
            self.surname.clone()
        } else {
            format!("{}, {}", self.surname, self.forenames.join(" "))
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Affiliation {
    /// Most specific first: laboratory before institution.
    pub org_units: Vec<OrgUnit>,
    pub address: Option<Address>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrgUnit {
    pub kind: String,
    pub name: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Address {
    pub settlement: Option<String>,
    pub post_code: Option<String>,
    pub country: Option<String>,
    pub lines: Vec<AddressLine>,
}

impl Address {
    pub fn is_empty(&self) -> bool {
        self.settlement.is_none()
            && self.post_code.is_none()
            && self.country.is_none()
            && self.lines.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AddressLine {
    /// `phone`, `fax`, `plain` or absent.
    pub kind: Option<String>,
    pub text: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monogr {
    pub titles: Vec<Title>,
    pub issn: Option<String>,
    pub imprint: Imprint,
    /// Authors of a whole book cited without an analytic level.
    pub container_authors: Vec<Author>,
}

impl Monogr {
    pub fn main_title(&self) -> Option<&Title> {
        main_title_of(&self.titles)
    }
}

/// True for `DDDD-DDDC` where `C` is a digit or `X`.
pub fn is_issn(value: &str) -> bool {
    let b = value.as_bytes();
    b.len() == 9
        && b[..4].iter().all(u8::is_ascii_digit)
        && b[4] == b'-'
        && b[5..8].iter().all(u8::is_ascii_digit)
        && (b[8].is_ascii_digit() || b[8] == b'X')
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Imprint {
    pub publisher: Option<String>,
    pub pub_place: Option<String>,
    pub date: Option<ImprintDate>,
    pub scopes: Vec<Scope>,
}

impl Imprint {
    pub fn scope(&self, kind: &str) -> Option<&str> {
        self.scopes
            .iter()
            .find(|s| s.kind == kind)
            .map(|s| s.value.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImprintDate {
    pub when: CalendarDate,
    /// Lowercased role token; `published` when unstated.
    pub role: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scope {
    pub kind: String,
    pub value: String,
}

impl Scope {
    pub const KINDS: [&'static str; 5] = ["vol", "issue", "fpage", "lpage", "pp"];

    pub fn new(kind: &str, value: &str) -> Self {
        Scope {
            kind: kind.into(),
            value: value.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Identifier {
    pub kind: String,
    pub value: String,
}

impl Identifier {
    pub fn new(kind: &str, value: &str) -> Self {
        Identifier {
            kind: kind.into(),
            value: value.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Division {
    pub kind: String,
    pub head: Option<RichText>,
    pub blocks: Vec<Block>,
    pub children: Vec<Division>,
}

impl Division {
    pub fn new(kind: &str) -> Self {
        Division {
            kind: kind.into(),
            head: None,
            blocks: Vec::new(),
            children: Vec::new(),
        }
    }

    fn collect_into<'a>(&'a self, out: &mut Vec<&'a Division>) {
        out.push(self);
        for c in &self.children {
            c.collect_into(out);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Block {
    Paragraph(RichText),
    Cit(CitBlock),
    Figure(FigureBlock),
    Table(TableBlock),
    Formula(FormulaBlock),
    List(ListBlock),
    Quote(RichText),
    Opaque(Opaque),
}

impl Block {
    /// Rich-text fields of the block in serialization order.
    pub fn rich_texts(&self) -> Vec<&RichText> {
        match self {
            Block::Paragraph(t) | Block::Quote(t) => vec![t],
            Block::Cit(c) => std::iter::once(&c.quote)
                .chain(c.qualifiers.as_ref())
                .collect(),
            Block::Figure(f) => f.caption.iter().collect(),
            Block::List(l) => l.items.iter().collect(),
            Block::Table(_) | Block::Formula(_) | Block::Opaque(_) => Vec::new(),
        }
    }

    pub fn plain_text(&self) -> String {
        match self {
            Block::Table(t) => t.text.clone(),
            Block::Formula(f) => f.text.clone(),
            Block::Opaque(o) => o.text.clone(),
            other => other
                .rich_texts()
                .iter()
                .map(|t| t.plain_text())
                .collect::<Vec<_>>()
                .join(" "),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitBlock {
    pub quote: RichText,
    pub source: CitSource,
    pub qualifiers: Option<RichText>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum CitSource {
    Embedded(Box<BiblStruct>),
    Ref(RefTarget),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FigureBlock {
    pub graphic: Option<String>,
    pub caption: Option<RichText>,
    pub source: Option<Box<BiblStruct>>,
}

/// A table kept as its original markup.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableBlock {
    pub raw: String,
    pub caption: Option<String>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaBlock {
    pub raw: String,
    pub notation: Option<String>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListBlock {
    pub items: Vec<RichText>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackMatter {
    pub divisions: Vec<Division>,
    pub reference_list: Option<ListBibl>,
    pub notes: Vec<RichText>,
}

impl BackMatter {
    pub fn is_empty(&self) -> bool {
        self.divisions.is_empty() && self.reference_list.is_none() && self.notes.is_empty()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListBibl {
    pub entries: Vec<BiblStruct>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(id: &str) -> BiblStruct {
        BiblStruct {
            doc_type: DocumentType::new("book"),
            xml_id: Some(id.into()),
            monogr: Monogr {
                titles: vec![Title::new("m", "main", id)],
                ..Default::default()
            },
            ..Default::default()
        }
    }

    fn article_with_refs(ids: &[&str]) -> Article {
        let source = BiblStruct {
            doc_type: DocumentType::new("article"),
            monogr: Monogr {
                imprint: Imprint {
                    date: Some(ImprintDate {
                        when: CalendarDate::parse("2009-02-03").unwrap(),
                        role: "published".into(),
                    }),
                    ..Default::default()
                },
                ..Default::default()
            },
            ..Default::default()
        };
        Article {
            id: "a".into(),
            header: Header {
                file_desc: Some(FileDesc {
                    source_desc: Some(SourceDesc {
                        records: vec![source],
                    }),
                    ..Default::default()
                }),
                ..Default::default()
            },
            front: vec![],
            body: vec![],
            back: BackMatter {
                reference_list: Some(ListBibl {
                    entries: ids.iter().map(|i| entry(i)).collect(),
                }),
                ..Default::default()
            },
            source_path: None,
            namespaces: vec![],
        }
    }

    #[test]
    fn document_date_reads_source_imprint() {
        let a = article_with_refs(&[]);
        assert_eq!(
            document_date(&a),
            Some(&CalendarDate::ymd(2009, 2, 3).unwrap())
        );
        let mut b = a.clone();
        b.header.file_desc = None;
        assert_eq!(document_date(&b), None);
    }

    #[test]
    fn year_only_document_date() {
        let mut a = article_with_refs(&[]);
        let src = &mut a
            .header
            .file_desc
            .as_mut()
            .unwrap()
            .source_desc
            .as_mut()
            .unwrap()
            .records[0];
        src.monogr.imprint.date.as_mut().unwrap().when = CalendarDate::parse("2009").unwrap();
        let d = document_date(&a).unwrap();
        assert_eq!(d.precision(), DatePrecision::Year);
        assert_eq!(d.year(), 2009);
        assert_eq!(d.month(), None);
    }

    #[test]
    fn resolve_ref_cases() {
        let a = article_with_refs(&["b1", "b2"]);
        let hit = resolve_ref(&a, &RefTarget::new("#b1")).unwrap().unwrap();
        assert_eq!(hit.xml_id.as_deref(), Some("b1"));
        assert!(resolve_ref(&a, &RefTarget::new("#b9")).unwrap().is_none());
        assert!(matches!(
            resolve_ref(&a, &RefTarget::new("b1")),
            Err(ModelError::MalformedTarget(_))
        ));
    }

    #[test]
    fn resolve_ref_matches_id_set_exhaustively() {
        let universe = ["a", "b", "c", "d"];
        for mask in 0u8..16 {
            let present: Vec<&str> = universe
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, s)| *s)
                .collect();
            let art = article_with_refs(&present);
            for probe in universe {
                let found = resolve_ref(&art, &RefTarget::new(format!("#{probe}")))
                    .unwrap()
                    .is_some();
                assert_eq!(found, present.contains(&probe));
            }
        }
    }

    #[test]
    fn issn_pattern() {
        assert!(is_issn("1018-4813"));
        assert!(is_issn("0317-846X"));
        assert!(!is_issn("1018-481x"));
        assert!(!is_issn("10184813"));
    }

    #[test]
    fn doc_type_falls_back_to_unknown() {
        assert_eq!(
            DocumentType::new("journalArticle").classify(),
            "journalArticle"
        );
        assert_eq!(DocumentType::new("patent").classify(), "unknown");
        assert_eq!(DocumentType::new("patent").as_str(), "patent");
        assert_eq!(DocumentType::new("").as_str(), "unknown");
    }

    #[test]
    fn id_prefers_doi() {
        let mut b = entry("x");
        assert_eq!(
            article_id(Some(&b), Some(Path::new("/tmp/paper-7.xml"))),
            "paper-7"
        );
        b.identifiers.push(Identifier::new("DOI", "10.1000/xyz"));
        assert_eq!(
            article_id(Some(&b), Some(Path::new("/tmp/paper-7.xml"))),
            "10.1000/xyz"
        );
    }
}
