//! Structural rules for journal articles.
//!
//! [`validate`] evaluates the twelve rules below and reports every
//! violation as a [`Finding`]. Nothing here fails: all problems are data.
//!
//! | id  | default  | checks |
//! |-----|----------|--------|
//! | R1  | error    | `fileDesc` with `titleStmt`, `publicationStmt`, `sourceDesc` |
//! | R2  | error    | `sourceDesc` holds exactly one `biblStruct` |
//! | R3  | error    | header title equals the source's analytic main title |
//! | R4  | error    | source has analytic authors and one main title at each level |
//! | R5  | error    | `biblScope` kinds are `vol`, `issue`, `fpage`, `lpage`, `pp` |
//! | R6  | warning  | authors have forename and surname; corresponding author has email |
//! | R7  | warning  | `orgName` types come from the configured vocabulary |
//! | R8  | error    | non-empty body; abstracts only in front |
//! | R9  | error    | every citation link resolves to the reference list |
//! | R10 | warning  | revision history is chronological |
//! | R11 | warning  | at least one keyword |
//! | R12 | error    | reference-list ids unique; every entry titled |

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::layout;
use crate::model::*;
use crate::xml::{Severity, SourcePath};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidateError {
    #[error("unknown rule {0:?}")]
    UnknownRule(String),
    #[error("invalid validator config: {0}")]
    Config(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rule {
    pub id: &'static str,
    pub severity: Severity,
    pub description: &'static str,
    rationale: &'static str,
}

pub const RULES: [Rule; 12] = [
    Rule {
        id: "R1",
        severity: Severity::Error,
        description: "the header has a fileDesc containing titleStmt, publicationStmt and sourceDesc",
        rationale: "fileDesc gathers the main characteristics of the document: title, publication and source description",
    },
    Rule {
        id: "R2",
        severity: Severity::Error,
        description: "sourceDesc contains exactly one biblStruct",
        rationale: "the biblStruct in sourceDesc is the sole structure holding the article's own bibliographic data",
    },
    Rule {
        id: "R3",
        severity: Severity::Error,
        description: "the titleStmt main title equals the analytic main title of the source record (whitespace-normalized text)",
        rationale: "the article title is duplicated in titleStmt so that the document interoperates with other TEI documents, e.g. in a digital object store",
    },
    Rule {
        id: "R4",
        severity: Severity::Error,
        description: "the source record has an analytic level with at least one author and exactly one main title, and a monogr with exactly one main title",
        rationale: "analytic carries the article's title and authors; monogr identifies the journal",
    },
    Rule {
        id: "R5",
        severity: Severity::Error,
        description: "every biblScope type is one of vol, issue, fpage, lpage, pp; kinds are unique per imprint and fpage <= lpage",
        rationale: "vol: volume; issue: issue; fpage: first page; lpage: last page; pp: number of pages when full pagination is unavailable",
    },
    Rule {
        id: "R6",
        severity: Severity::Warning,
        description: "each source author has forename(s) and a surname; a corresponding author has an email address",
        rationale: "an author entry carries the author's name, affiliation and addresses",
    },
    Rule {
        id: "R7",
        severity: Severity::Warning,
        description: "every orgName type in an author affiliation is in the configured organisation-unit vocabulary",
        rationale: "a closed set of orgName types identifies the organisational levels of an affiliation consistently",
    },
    Rule {
        id: "R8",
        severity: Severity::Error,
        description: "the body is non-empty and abstracts appear only in front, at most once",
        rationale: "abstracts are represented in front and full-text content in body",
    },
    Rule {
        id: "R9",
        severity: Severity::Error,
        description: "every bibliographic reference and cit pointer targets an existing reference-list entry",
        rationale: "each citation must be linked unequivocally to its entry in the reference list",
    },
    Rule {
        id: "R10",
        severity: Severity::Warning,
        description: "revisionDesc changes are in non-decreasing date order",
        rationale: "revisionDesc traces the editorial history of the paper: submission, review, revision, publication",
    },
    Rule {
        id: "R11",
        severity: Severity::Warning,
        description: "profileDesc has at least one keyword",
        rationale: "keywords provide a means for quick search and classification",
    },
    Rule {
        id: "R12",
        severity: Severity::Error,
        description: "reference-list entries have unique xml:id values and each has a main title",
        rationale: "the reference list is a listBibl of identified biblStruct entries that inline citations point to",
    },
];

pub fn rule(id: &str) -> Option<&'static Rule> {
    RULES.iter().find(|r| r.id == id)
}

fn rule_rank(id: &str) -> usize {
    RULES.iter().position(|r| r.id == id).unwrap_or(usize::MAX)
}

/// Rule description followed by its rationale.
pub fn explain(rule_id: &str) -> Result<String, ValidateError> {
    let r = rule(rule_id).ok_or_else(|| ValidateError::UnknownRule(rule_id.to_string()))?;
    Ok(format!(
        "{} ({}): {}.\nRationale: {}.",
        r.id, r.severity, r.description, r.rationale
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidatorConfig {
    pub org_unit_vocabulary: BTreeSet<String>,
    pub severity_overrides: BTreeMap<String, Severity>,
    /// Document types an editorial team recognises. Not checked by R1–R12;
    /// carried for tooling that reports unusual record types.
    pub doc_type_vocabulary: BTreeSet<String>,
}

impl Default for ValidatorConfig {
    fn default() -> Self {
        ValidatorConfig {
            org_unit_vocabulary: ["laboratory", "department", "institution"]
                .map(String::from)
                .into(),
            severity_overrides: BTreeMap::new(),
            doc_type_vocabulary: DocumentType::KNOWN.map(String::from).into(),
        }
    }
}

impl ValidatorConfig {
    pub fn from_json(text: &str) -> Result<Self, ValidateError> {
        let cfg: ValidatorConfig =
            serde_json::from_str(text).map_err(|e| ValidateError::Config(e.to_string()))?;
        cfg.check()?;
        Ok(cfg)
    }

    pub fn check(&self) -> Result<(), ValidateError> {
        match self.severity_overrides.keys().find(|k| rule(k).is_none()) {
            Some(k) => Err(ValidateError::Config(format!(
                "override for unknown rule {k:?}"
            ))),
            None => Ok(()),
        }
    }

    fn severity_of(&self, r: &Rule) -> Severity {
        self.severity_overrides
            .get(r.id)
            .copied()
            .unwrap_or(r.severity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub rule_id: String,
    pub severity: Severity,
    pub location: SourcePath,
    pub message: String,
}

struct Sink<'c> {
    cfg: &'c ValidatorConfig,
    out: Vec<Finding>,
}

impl Sink<'_> {
    fn report(&mut self, id: &str, location: &SourcePath, message: impl Into<String>) {
        let r = rule(id).expect("rule ids are static");
        self.out.push(Finding {
            rule_id: r.id.to_string(),
            severity: self.cfg.severity_of(r),
            location: location.clone(),
            message: message.into(),
        });
    }
}

/// Checks `a` against R1–R12. Findings are ordered by document position,
/// then rule.
pub fn validate(a: &Article, cfg: &ValidatorConfig) -> Vec<Finding> {
    let mut sink = Sink {
        cfg,
        out: Vec::new(),
    };
    let hp = layout::header_paths(&a.header);
    header_rules(a, &hp, &mut sink);
    scope_rule(a, &mut sink);
    author_rules(a, &hp, &mut sink);
    text_rules(a, &mut sink);
    citation_rule(a, &mut sink);
    revision_rule(a, &hp, &mut sink);
    if a.header.profile_desc.keywords.is_empty() {
        let at = hp.profile_desc.unwrap_or_else(layout::tei_header);
        sink.report("R11", &at, "no keywords in profileDesc");
    }
    reference_list_rule(a, &mut sink);
    let mut out = sink.out;
    out.sort_by(|x, y| {
        x.location
            .cmp(&y.location)
            .then(rule_rank(&x.rule_id).cmp(&rule_rank(&y.rule_id)))
    });
    out
}

fn count_main(titles: &[Title]) -> usize {
    titles.iter().filter(|t| t.kind == "main").count()
}

fn header_rules(a: &Article, hp: &layout::HeaderPaths, sink: &mut Sink<'_>) {
    let Some(fd) = &a.header.file_desc else {
        sink.report("R1", &layout::tei_header(), "teiHeader has no fileDesc");
        return;
    };
    let fdp = hp.file_desc.clone().unwrap_or_default();
    for (present, name) in [
        (fd.title_stmt.is_some(), "titleStmt"),
        (fd.publication_stmt.is_some(), "publicationStmt"),
        (fd.source_desc.is_some(), "sourceDesc"),
    ] {
        if !present {
            sink.report("R1", &fdp, format!("fileDesc has no {name}"));
        }
    }
    if let (Some(sd), Some(sdp)) = (&fd.source_desc, &hp.source_desc)
        && sd.records.len() != 1
    {
        sink.report(
            "R2",
            sdp,
            format!(
                "sourceDesc holds {} biblStruct records, expected exactly one",
                sd.records.len()
            ),
        );
    }
    let source = fd.source();
    if let Some(ts) = &fd.title_stmt {
        let analytic_title = source
            .and_then(|s| s.analytic.as_ref())
            .and_then(Analytic::main_title);
        match (&ts.main_title, analytic_title) {
            (None, _) => sink.report(
                "R3",
                hp.title_stmt.as_ref().unwrap(),
                "titleStmt has no main title",
            ),
            (Some(t), Some(at)) => {
                let (header, analytic) = (normalize_title(t), normalize_title(&at.text));
                if header != analytic {
                    sink.report(
                        "R3",
                        hp.main_title.as_ref().unwrap(),
                        format!("header title {header:?} differs from source title {analytic:?}"),
                    );
                }
            }
            (Some(_), None) => {}
        }
    }
    if let (Some(b), Some(bp)) = (source, hp.records.first()) {
        let paths = layout::bibl_paths(b, bp);
        match &b.analytic {
            None => sink.report("R4", bp, "source record has no analytic level"),
            Some(an) => {
                let ap = paths.analytic.as_ref().unwrap();
                if an.authors.is_empty() {
                    sink.report("R4", ap, "source analytic has no author");
                }
                let n = count_main(&an.titles);
                if n != 1 {
                    sink.report(
                        "R4",
                        ap,
                        format!("source analytic has {n} main titles, expected one"),
                    );
                }
            }
        }
        let n = count_main(&b.monogr.titles);
        if n != 1 {
            sink.report(
                "R4",
                &paths.monogr,
                format!("source monogr has {n} main titles, expected one"),
            );
        }
    }
}

fn scope_rule(a: &Article, sink: &mut Sink<'_>) {
    for (b, bp) in layout::bibl_sites(a) {
        let paths = layout::bibl_paths(b, &bp);
        let mut seen = BTreeSet::new();
        for (s, sp) in b.monogr.imprint.scopes.iter().zip(&paths.scopes) {
            if !Scope::KINDS.contains(&s.kind.as_str()) {
                sink.report(
                    "R5",
                    sp,
                    format!(
                        "biblScope type {:?} is not one of vol, issue, fpage, lpage, pp",
                        s.kind
                    ),
                );
            } else if !seen.insert(s.kind.as_str()) {
                sink.report(
                    "R5",
                    sp,
                    format!("biblScope type {:?} repeated in one imprint", s.kind),
                );
            }
        }
        let imp = &b.monogr.imprint;
        if let (Some(f), Some(l)) = (imp.scope("fpage"), imp.scope("lpage"))
            && let (Ok(f), Ok(l)) = (f.parse::<u64>(), l.parse::<u64>())
            && f > l
        {
            let at = imp
                .scopes
                .iter()
                .position(|s| s.kind == "lpage")
                .map(|i| &paths.scopes[i])
                .unwrap();
            sink.report("R5", at, format!("first page {f} is after last page {l}"));
        }
    }
}

fn author_rules(a: &Article, hp: &layout::HeaderPaths, sink: &mut Sink<'_>) {
    let (Some(b), Some(bp)) = (a.source(), hp.records.first()) else {
        return;
    };
    let Some(an) = &b.analytic else { return };
    let paths = layout::bibl_paths(b, bp);
    for (author, ap) in an.authors.iter().zip(&paths.authors) {
        if author.forenames.is_empty() || author.surname.is_empty() {
            sink.report(
                "R6",
                &ap.path,
                format!(
                    "author {:?} lacks a forename or surname",
                    author.sort_name()
                ),
            );
        }
        if author.corresponding && author.email.is_none() {
            sink.report(
                "R6",
                &ap.path,
                format!("corresponding author {:?} has no email", author.sort_name()),
            );
        }
        let Some(af) = &author.affiliation else {
            continue;
        };
        for (o, op) in af.org_units.iter().zip(&ap.org_units) {
            if !sink.cfg.org_unit_vocabulary.contains(&o.kind) {
                sink.report(
                    "R7",
                    op,
                    format!(
                        "orgName type {:?} is not in the organisation-unit vocabulary",
                        o.kind
                    ),
                );
            }
        }
    }
}

fn text_rules(a: &Article, sink: &mut Sink<'_>) {
    if a.body.is_empty() {
        sink.report("R8", &layout::text_paths(a).body, "body has no divisions");
    }
    let mut front_abstracts = 0;
    for site in layout::division_sites(a) {
        if site.division.kind != "abstract" {
            continue;
        }
        match site.region {
            layout::Region::Front => {
                front_abstracts += 1;
                if front_abstracts > 1 {
                    sink.report("R8", &site.path, "more than one abstract in front");
                }
            }
            _ => sink.report("R8", &site.path, "abstract outside front"),
        }
    }
}

fn citation_rule(a: &Article, sink: &mut Sink<'_>) {
    let check =
        |target: &RefTarget, at: &SourcePath, sink: &mut Sink<'_>| match resolve_ref(a, target) {
            Ok(Some(_)) => {}
            Ok(None) => sink.report(
                "R9",
                at,
                format!(
                    "citation target {:?} has no reference-list entry",
                    target.as_str()
                ),
            ),
            Err(e) => sink.report("R9", at, e.to_string()),
        };
    for (text, p) in layout::text_rich_sites(a) {
        for (inline, ip) in layout::inline_sites(text, &p) {
            if let Inline::BiblRef { target, .. } = inline {
                check(target, &ip, sink);
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
            {
                check(t, &layout::block_source_path(b, &bp).unwrap(), sink);
            }
        }
    }
}

fn revision_rule(a: &Article, hp: &layout::HeaderPaths, sink: &mut Sink<'_>) {
    let changes = &a.header.revision_desc.changes;
    for (i, pair) in changes.windows(2).enumerate() {
        if pair[1].when.first_day() < pair[0].when.first_day() {
            sink.report(
                "R10",
                &hp.changes[i + 1],
                format!(
                    "change dated {} follows one dated {}",
                    pair[1].when, pair[0].when
                ),
            );
        }
    }
}

fn reference_list_rule(a: &Article, sink: &mut Sink<'_>) {
    let (Some(l), Some((_, paths))) = (&a.back.reference_list, layout::text_paths(a).list_bibl)
    else {
        return;
    };
    let mut ids = BTreeSet::new();
    for (e, p) in l.entries.iter().zip(&paths) {
        match &e.xml_id {
            None => sink.report("R12", p, "reference-list entry has no xml:id"),
            Some(id) if !ids.insert(id.as_str()) => {
                sink.report("R12", p, format!("duplicate reference id {id:?}"))
            }
            Some(_) => {}
        }
        if e.main_title().is_none() {
            sink.report("R12", p, "reference-list entry has no main title");
        }
    }
}
