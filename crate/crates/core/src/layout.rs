//! Canonical element paths for model values.
//!
//! Mirrors the element order written by [`crate::xml::serialize_article`],
//! so every path computed here names a real node of the serialized article.

use crate::model::*;
use crate::xml::{SiblingCounter, SourcePath};

pub fn tei() -> SourcePath {
    SourcePath::root("TEI")
}

pub fn tei_header() -> SourcePath {
    tei().child("teiHeader", 1, 0)
}

pub fn text() -> SourcePath {
    tei().child("text", 1, 1)
}

#[derive(Debug, Clone, Default)]
pub struct HeaderPaths {
    pub file_desc: Option<SourcePath>,
    pub title_stmt: Option<SourcePath>,
    pub main_title: Option<SourcePath>,
    pub publication_stmt: Option<SourcePath>,
    pub source_desc: Option<SourcePath>,
    pub records: Vec<SourcePath>,
    pub profile_desc: Option<SourcePath>,
    /// One `term` path per keyword, in keyword order.
    pub keyword_terms: Vec<SourcePath>,
    pub revision_desc: Option<SourcePath>,
    pub changes: Vec<SourcePath>,
}

pub fn header_paths(h: &Header) -> HeaderPaths {
    let hp = tei_header();
    let mut out = HeaderPaths::default();
    let mut top = SiblingCounter::default();
    if let Some(fd) = &h.file_desc {
        let fdp = top.next(&hp, "fileDesc");
        let mut c = SiblingCounter::default();
        if let Some(ts) = &fd.title_stmt {
            let tsp = c.next(&fdp, "titleStmt");
            if ts.main_title.is_some() {
                out.main_title = Some(tsp.child("title", 1, 0));
            }
            out.title_stmt = Some(tsp);
        }
        if fd.publication_stmt.is_some() {
            out.publication_stmt = Some(c.next(&fdp, "publicationStmt"));
        }
        if let Some(sd) = &fd.source_desc {
            let sdp = c.next(&fdp, "sourceDesc");
            let mut rc = SiblingCounter::default();
            out.records = sd
                .records
                .iter()
                .map(|_| rc.next(&sdp, "biblStruct"))
                .collect();
            out.source_desc = Some(sdp);
        }
        out.file_desc = Some(fdp);
    }
    let pd = &h.profile_desc;
    if !pd.is_empty() {
        let pdp = top.next(&hp, "profileDesc");
        let mut c = SiblingCounter::default();
        if !pd.languages.is_empty() {
            c.next(&pdp, "langUsage");
        }
        if !pd.keywords.is_empty() {
            let tcp = c.next(&pdp, "textClass");
            let mut kc = SiblingCounter::default();
            for group in crate::xml::keyword_groups(&pd.keywords) {
                let list = kc.next(&tcp, "keywords").child("list", 1, 0);
                let mut ic = SiblingCounter::default();
                for _ in group {
                    out.keyword_terms
                        .push(ic.next(&list, "item").child("term", 1, 0));
                }
            }
        }
        out.profile_desc = Some(pdp);
    }
    if !h.revision_desc.changes.is_empty() {
        let rdp = top.next(&hp, "revisionDesc");
        let mut c = SiblingCounter::default();
        out.changes = h
            .revision_desc
            .changes
            .iter()
            .map(|_| c.next(&rdp, "change"))
            .collect();
        out.revision_desc = Some(rdp);
    }
    out
}

#[derive(Debug, Clone, Default)]
pub struct AuthorPaths {
    pub path: SourcePath,
    pub org_units: Vec<SourcePath>,
}

#[derive(Debug, Clone, Default)]
pub struct BiblPaths {
    pub analytic: Option<SourcePath>,
    pub analytic_titles: Vec<SourcePath>,
    pub authors: Vec<AuthorPaths>,
    pub monogr: SourcePath,
    pub container_authors: Vec<AuthorPaths>,
    pub monogr_titles: Vec<SourcePath>,
    pub imprint: SourcePath,
    pub scopes: Vec<SourcePath>,
}

fn author_paths(a: &Author, path: SourcePath) -> AuthorPaths {
    let mut c = SiblingCounter::default();
    for _ in &a.identifiers {
        c.next(&path, "idno");
    }
    if !a.forenames.is_empty() || !a.surname.is_empty() {
        c.next(&path, "persName");
    }
    let mut org_units = Vec::new();
    if let Some(af) = &a.affiliation {
        let afp = c.next(&path, "affiliation");
        let mut oc = SiblingCounter::default();
        org_units = af
            .org_units
            .iter()
            .map(|_| oc.next(&afp, "orgName"))
            .collect();
    }
    AuthorPaths { path, org_units }
}

pub fn bibl_paths(b: &BiblStruct, path: &SourcePath) -> BiblPaths {
    let mut out = BiblPaths::default();
    let mut c = SiblingCounter::default();
    if let Some(an) = &b.analytic {
        let ap = c.next(path, "analytic");
        let mut ac = SiblingCounter::default();
        out.analytic_titles = an.titles.iter().map(|_| ac.next(&ap, "title")).collect();
        out.authors = an
            .authors
            .iter()
            .map(|a| author_paths(a, ac.next(&ap, "author")))
            .collect();
        out.analytic = Some(ap);
    }
    let mp = c.next(path, "monogr");
    let mut mc = SiblingCounter::default();
    out.container_authors = b
        .monogr
        .container_authors
        .iter()
        .map(|a| author_paths(a, mc.next(&mp, "author")))
        .collect();
    out.monogr_titles = b
        .monogr
        .titles
        .iter()
        .map(|_| mc.next(&mp, "title"))
        .collect();
    if b.monogr.issn.is_some() {
        mc.next(&mp, "idno");
    }
    let ip = mc.next(&mp, "imprint");
    let im = &b.monogr.imprint;
    let mut ic = SiblingCounter::default();
    if im.publisher.is_some() {
        ic.next(&ip, "publisher");
    }
    if im.pub_place.is_some() {
        ic.next(&ip, "pubPlace");
    }
    if im.date.is_some() {
        ic.next(&ip, "date");
    }
    out.scopes = im
        .scopes
        .iter()
        .map(|_| ic.next(&ip, "biblScope"))
        .collect();
    out.monogr = mp;
    out.imprint = ip;
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Front,
    Body,
    Back,
}

pub struct DivisionSite<'a> {
    pub division: &'a Division,
    pub path: SourcePath,
    pub region: Region,
    /// Nesting depth, 1 for top-level divisions.
    pub depth: usize,
}

pub struct TextPaths {
    pub front: Option<SourcePath>,
    pub body: SourcePath,
    pub back: Option<SourcePath>,
    /// Reference-list element and one path per entry.
    pub list_bibl: Option<(SourcePath, Vec<SourcePath>)>,
    pub notes: Vec<SourcePath>,
}

pub fn text_paths(a: &Article) -> TextPaths {
    let tp = text();
    let mut c = SiblingCounter::default();
    let front = if a.front.is_empty() {
        None
    } else {
        Some(c.next(&tp, "front"))
    };
    let body = c.next(&tp, "body");
    let mut list_bibl = None;
    let mut notes = Vec::new();
    let back = if a.back.is_empty() {
        None
    } else {
        let bp = c.next(&tp, "back");
        let mut bc = SiblingCounter::default();
        for _ in &a.back.divisions {
            bc.next(&bp, "div");
        }
        if let Some(l) = &a.back.reference_list {
            let lp = bc.next(&bp, "listBibl");
            let mut ec = SiblingCounter::default();
            let entries = l
                .entries
                .iter()
                .map(|_| ec.next(&lp, "biblStruct"))
                .collect();
            list_bibl = Some((lp, entries));
        }
        notes = a.back.notes.iter().map(|_| bc.next(&bp, "note")).collect();
        Some(bp)
    };
    TextPaths {
        front,
        body,
        back,
        list_bibl,
        notes,
    }
}

/// Every division of the article in document order with its path.
pub fn division_sites(a: &Article) -> Vec<DivisionSite<'_>> {
    let tp = text_paths(a);
    let mut out = Vec::new();
    let regions = [
        (Region::Front, tp.front, &a.front),
        (Region::Body, Some(tp.body), &a.body),
        (Region::Back, tp.back, &a.back.divisions),
    ];
    for (region, path, divs) in regions {
        let Some(path) = path else { continue };
        let mut c = SiblingCounter::default();
        for d in divs {
            let dp = c.next(&path, "div");
            push_division(d, dp, region, 1, &mut out);
        }
    }
    out
}

fn push_division<'a>(
    d: &'a Division,
    path: SourcePath,
    region: Region,
    depth: usize,
    out: &mut Vec<DivisionSite<'a>>,
) {
    let (_, _, children) = division_children(d, &path);
    out.push(DivisionSite {
        division: d,
        path,
        region,
        depth,
    });
    for (child, cp) in d.children.iter().zip(children) {
        push_division(child, cp, region, depth + 1, out);
    }
}

pub fn block_element_name(b: &Block) -> &str {
    match b {
        Block::Paragraph(_) => "p",
        Block::Quote(_) => "quote",
        Block::Cit(_) => "cit",
        Block::Figure(_) => "figure",
        Block::List(_) => "list",
        Block::Table(_) => "table",
        Block::Formula(_) => "formula",
        Block::Opaque(o) => &o.name,
    }
}

/// Paths of a division's head, blocks and child divisions.
pub fn division_children(
    d: &Division,
    path: &SourcePath,
) -> (Option<SourcePath>, Vec<SourcePath>, Vec<SourcePath>) {
    let mut c = SiblingCounter::default();
    let head = d.head.as_ref().map(|_| c.next(path, "head"));
    let blocks = d
        .blocks
        .iter()
        .map(|b| c.next(path, block_element_name(b)))
        .collect();
    let children = d.children.iter().map(|_| c.next(path, "div")).collect();
    (head, blocks, children)
}

/// Rich-text fields of a block with the path of the element holding each.
pub fn block_texts<'a>(b: &'a Block, path: &SourcePath) -> Vec<(&'a RichText, SourcePath)> {
    match b {
        Block::Paragraph(t) | Block::Quote(t) => vec![(t, path.clone())],
        Block::Cit(c) => {
            let mut out = vec![(&c.quote, path.child("quote", 1, 0))];
            if let Some(q) = &c.qualifiers {
                out.push((q, path.child("note", 1, 2)));
            }
            out
        }
        Block::Figure(f) => f
            .caption
            .iter()
            .map(|t| (t, path.child("head", 1, 0)))
            .collect(),
        Block::List(l) => {
            let mut c = SiblingCounter::default();
            l.items.iter().map(|i| (i, c.next(path, "item"))).collect()
        }
        Block::Table(_) | Block::Formula(_) | Block::Opaque(_) => Vec::new(),
    }
}

/// Path of the embedded record or pointer inside a `cit`, or of a figure's source.
pub fn block_source_path(b: &Block, path: &SourcePath) -> Option<SourcePath> {
    match b {
        Block::Cit(c) => Some(match c.source {
            CitSource::Embedded(_) => path.child("biblStruct", 1, 1),
            CitSource::Ref(_) => path.child("ptr", 1, 1),
        }),
        Block::Figure(f) => {
            let ord = usize::from(f.caption.is_some()) + usize::from(f.graphic.is_some());
            f.source.as_ref().map(|_| path.child("biblStruct", 1, ord))
        }
        _ => None,
    }
}

pub fn inline_element_name(i: &Inline) -> Option<&str> {
    Some(match i {
        Inline::Text(_) => return None,
        Inline::Emph { .. } => "hi",
        Inline::BiblRef { .. } | Inline::Link { .. } => "ref",
        Inline::Person(_) => "persName",
        Inline::Org(_) => "orgName",
        Inline::Place(_) => "placeName",
        Inline::Term { .. } => "term",
        Inline::Abbr {
            expansion: None, ..
        } => "abbr",
        Inline::Abbr {
            expansion: Some(_), ..
        } => "choice",
        Inline::Opaque(o) => &o.name,
    })
}

/// Element inlines of `text` in document order (descending into emphasis).
pub fn inline_sites<'a>(text: &'a RichText, path: &SourcePath) -> Vec<(&'a Inline, SourcePath)> {
    let mut out = Vec::new();
    push_inlines(text, path, &mut out);
    out
}

fn push_inlines<'a>(
    text: &'a RichText,
    path: &SourcePath,
    out: &mut Vec<(&'a Inline, SourcePath)>,
) {
    let mut c = SiblingCounter::default();
    for i in text {
        let Some(name) = inline_element_name(i) else {
            continue;
        };
        let ip = c.next(path, name);
        out.push((i, ip.clone()));
        if let Inline::Emph { content, .. } = i {
            push_inlines(content, &ip, out);
        }
    }
}

/// Every rich-text field inside `text`: heads, block texts and back notes,
/// each with the path of its holding element, in document order.
pub fn text_rich_sites(a: &Article) -> Vec<(&RichText, SourcePath)> {
    let mut out = Vec::new();
    for site in division_sites(a) {
        let (head, blocks, _) = division_children(site.division, &site.path);
        if let (Some(h), Some(hp)) = (&site.division.head, head) {
            out.push((h, hp));
        }
        for (b, bp) in site.division.blocks.iter().zip(blocks) {
            out.extend(block_texts(b, &bp));
        }
    }
    let tp = text_paths(a);
    out.extend(a.back.notes.iter().zip(tp.notes));
    out.sort_by(|x, y| x.1.cmp(&y.1));
    out
}

/// Every bibliographic record of the article with its path: source
/// records, records embedded in blocks, then reference-list entries.
pub fn bibl_sites(a: &Article) -> Vec<(&BiblStruct, SourcePath)> {
    let mut out = Vec::new();
    let hp = header_paths(&a.header);
    if let Some(sd) = a
        .header
        .file_desc
        .as_ref()
        .and_then(|f| f.source_desc.as_ref())
    {
        out.extend(sd.records.iter().zip(hp.records));
    }
    for site in division_sites(a) {
        let (_, blocks, _) = division_children(site.division, &site.path);
        for (b, bp) in site.division.blocks.iter().zip(blocks) {
            let record = match b {
                Block::Cit(CitBlock {
                    source: CitSource::Embedded(r),
                    ..
                }) => Some(r.as_ref()),
                Block::Figure(f) => f.source.as_deref(),
                _ => None,
            };
            if let (Some(r), Some(p)) = (record, block_source_path(b, &bp)) {
                out.push((r, p));
            }
        }
    }
    if let (Some(l), Some((_, entries))) = (&a.back.reference_list, text_paths(a).list_bibl) {
        out.extend(l.entries.iter().zip(entries));
    }
    out
}
