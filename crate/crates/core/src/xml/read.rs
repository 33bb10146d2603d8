use std::fmt;

use serde::{Deserialize, Serialize};

use super::{SourcePath, XmlDocument, XmlElement, XmlNode};
use crate::model::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

impl std::str::FromStr for Severity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "error" => Ok(Severity::Error),
            "warning" => Ok(Severity::Warning),
            other => Err(format!("unknown severity {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub severity: Severity,
    pub location: SourcePath,
    pub message: String,
}

/// Result of reading one file. `outcome` is present iff no issue is an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseReport {
    pub issues: Vec<Issue>,
    pub outcome: Option<Article>,
}

impl ParseReport {
    pub fn failed(location: SourcePath, message: impl Into<String>) -> Self {
        ParseReport {
            issues: vec![Issue {
                severity: Severity::Error,
                location,
                message: message.into(),
            }],
            outcome: None,
        }
    }

    pub fn has_errors(&self) -> bool {
        self.issues.iter().any(|i| i.severity == Severity::Error)
    }
}

/// Reads a TEI journal article from raw file bytes.
pub fn parse_article(input: &[u8]) -> ParseReport {
    match XmlDocument::parse(input) {
        Ok(doc) => parse_article_tree(&doc),
        Err(e) => ParseReport::failed(SourcePath::default(), e.to_string()),
    }
}

/// Reads a TEI journal article from an already parsed tree.
pub fn parse_article_tree(doc: &XmlDocument) -> ParseReport {
    let root = &doc.root;
    if root.name != "TEI" || !root.is_tei() {
        return ParseReport::failed(
            root.path.clone(),
            format!(
                "root element must be TEI in namespace {}, found {:?}",
                super::TEI_NS,
                root.name
            ),
        );
    }
    let header_el = root.first_child("teiHeader").filter(|e| e.is_tei());
    let text_el = root.first_child("text").filter(|e| e.is_tei());
    let (Some(header_el), Some(text_el)) = (header_el, text_el) else {
        let missing = if header_el.is_none() {
            "teiHeader"
        } else {
            "text"
        };
        return ParseReport::failed(
            root.path.clone(),
            format!("missing required <{missing}> element"),
        );
    };

    let mut r = Reader {
        doc,
        issues: Vec::new(),
    };
    for e in root.child_elements() {
        if !matches!(e.name.as_str(), "teiHeader" | "text") {
            r.warn(e, format!("unsupported element <{}> dropped", e.name));
        }
    }
    let header = r.header(header_el);
    let (front, body, back) = r.text(text_el);
    let id = article_id(header.source(), None);
    let article = Article {
        id,
        header,
        front,
        body,
        back,
        source_path: None,
        namespaces: doc.root_namespaces.clone(),
    };
    let outcome = if r.issues.iter().any(|i| i.severity == Severity::Error) {
        None
    } else {
        Some(article)
    };
    ParseReport {
        issues: r.issues,
        outcome,
    }
}

struct Reader<'d> {
    doc: &'d XmlDocument,
    issues: Vec<Issue>,
}

fn clean(s: &str) -> String {
    normalize_space(s)
}

fn non_empty(s: String) -> Option<String> {
    if s.is_empty() { None } else { Some(s) }
}

impl<'d> Reader<'d> {
    fn warn(&mut self, e: &XmlElement, message: impl Into<String>) {
        self.issues.push(Issue {
            severity: Severity::Warning,
            location: e.path.clone(),
            message: message.into(),
        });
    }

    fn error(&mut self, e: &XmlElement, message: impl Into<String>) {
        self.issues.push(Issue {
            severity: Severity::Error,
            location: e.path.clone(),
            message: message.into(),
        });
    }

    fn drop_unknown(&mut self, e: &XmlElement) {
        self.warn(e, format!("unsupported element <{}> dropped", e.name));
    }

    fn date(&mut self, e: &XmlElement) -> Option<CalendarDate> {
        let raw = e
            .attr("when")
            .map(str::to_string)
            .unwrap_or_else(|| clean(&e.text()));
        match CalendarDate::parse(&raw) {
            Ok(d) => Some(d),
            Err(err) => {
                self.error(e, err.to_string());
                None
            }
        }
    }

    // ---- header -------------------------------------------------------

    fn header(&mut self, e: &XmlElement) -> Header {
        let mut header = Header::default();
        for c in e.child_elements() {
            match c.name.as_str() {
                "fileDesc" if header.file_desc.is_none() => {
                    header.file_desc = Some(self.file_desc(c))
                }
                "profileDesc" => self.profile_desc(c, &mut header.profile_desc),
                "revisionDesc" => self.revision_desc(c, &mut header.revision_desc),
                _ => self.drop_unknown(c),
            }
        }
        header
    }

    fn file_desc(&mut self, e: &XmlElement) -> FileDesc {
        let mut fd = FileDesc::default();
        for c in e.child_elements() {
            match c.name.as_str() {
                "titleStmt" if fd.title_stmt.is_none() => fd.title_stmt = Some(self.title_stmt(c)),
                "publicationStmt" if fd.publication_stmt.is_none() => {
                    fd.publication_stmt = Some(self.publication_stmt(c))
                }
                "sourceDesc" if fd.source_desc.is_none() => {
                    let mut sd = SourceDesc::default();
                    for b in c.child_elements() {
                        if b.name == "biblStruct" {
                            sd.records.push(self.bibl_struct(b));
                        } else {
                            self.drop_unknown(b);
                        }
                    }
                    fd.source_desc = Some(sd);
                }
                _ => self.drop_unknown(c),
            }
        }
        fd
    }

    fn title_stmt(&mut self, e: &XmlElement) -> TitleStmt {
        let titles: Vec<&XmlElement> = e.child_elements().filter(|c| c.name == "title").collect();
        let main = titles
            .iter()
            .find(|t| t.attr("type") == Some("main"))
            .or_else(|| titles.iter().find(|t| t.attr("type").is_none()))
            .copied();
        for c in e.child_elements() {
            if Some(c) != main {
                self.drop_unknown(c);
            }
        }
        TitleStmt {
            main_title: main.map(|t| self.rich(t)),
        }
    }

    fn publication_stmt(&mut self, e: &XmlElement) -> PublicationStmt {
        let mut ps = PublicationStmt::default();
        for c in e.child_elements() {
            match c.name.as_str() {
                "availability" if ps.availability.is_none() => {
                    let text = match c.first_child("p") {
                        Some(p) => self.rich(p),
                        None => self.rich(c),
                    };
                    ps.availability = Some(text);
                }
                "date" if ps.date.is_none() => ps.date = self.date(c),
                "authority" if ps.authority.is_none() => ps.authority = non_empty(clean(&c.text())),
                _ => self.drop_unknown(c),
            }
        }
        ps
    }

    fn profile_desc(&mut self, e: &XmlElement, pd: &mut ProfileDesc) {
        for c in e.child_elements() {
            match c.name.as_str() {
                "textClass" => {
                    for k in c.child_elements() {
                        if k.name == "keywords" {
                            self.keywords(k, k.attr("scheme"), &mut pd.keywords);
                        } else {
                            self.drop_unknown(k);
                        }
                    }
                }
                "langUsage" => {
                    for l in c.child_elements() {
                        match l.attr("ident") {
                            Some(id) if l.name == "language" => pd.languages.push(id.to_string()),
                            _ => self.drop_unknown(l),
                        }
                    }
                }
                _ => self.drop_unknown(c),
            }
        }
    }

    fn keywords(&mut self, e: &XmlElement, scheme: Option<&str>, out: &mut Vec<Keyword>) {
        for c in e.child_elements() {
            match c.name.as_str() {
                "list" => self.keywords(c, scheme, out),
                "head" => {}
                "term" | "item" => {
                    let term_el = c.first_child("term").unwrap_or(c);
                    let term = clean(&term_el.text());
                    if term.is_empty() {
                        self.warn(c, "empty keyword dropped");
                    } else {
                        out.push(Keyword {
                            term,
                            scheme: scheme.map(str::to_string),
                        });
                    }
                }
                _ => self.drop_unknown(c),
            }
        }
    }

    fn revision_desc(&mut self, e: &XmlElement, rd: &mut RevisionDesc) {
        for c in e.child_elements() {
            match c.name.as_str() {
                "listChange" => self.revision_desc(c, rd),
                "change" => {
                    let Some(when) = c.attr("when") else {
                        self.error(c, "change without a when date");
                        continue;
                    };
                    let when = match CalendarDate::parse(when) {
                        Ok(d) => d,
                        Err(err) => {
                            self.error(c, err.to_string());
                            continue;
                        }
                    };
                    let description = self.rich(c);
                    let kind = match c.attr("type") {
                        Some(t) => t.trim().to_lowercase(),
                        None => change_kind_from_text(&description.plain_text()),
                    };
                    rd.changes.push(Change {
                        when,
                        kind,
                        description,
                    });
                }
                _ => self.drop_unknown(c),
            }
        }
    }

    // ---- bibliographic records ---------------------------------------

    fn bibl_struct(&mut self, e: &XmlElement) -> BiblStruct {
        let doc_type = DocumentType::new(e.attr("type").unwrap_or("unknown"));
        let mut b = BiblStruct {
            doc_type: doc_type.clone(),
            xml_id: e.attr("xml:id").map(str::to_string),
            ..Default::default()
        };
        let mut monogr_seen = false;
        let mut hoisted = Vec::new();
        for c in e.child_elements() {
            match c.name.as_str() {
                "analytic" if b.analytic.is_none() => b.analytic = Some(self.analytic(c)),
                "monogr" if !monogr_seen => {
                    monogr_seen = true;
                    let default_level = if doc_type.is_article() { "j" } else { "m" };
                    b.monogr = self.monogr(c, default_level, &mut hoisted);
                }
                "idno" => {
                    if let Some(id) = self.identifier(c) {
                        b.identifiers.push(id);
                    }
                }
                _ => self.drop_unknown(c),
            }
        }
        if !monogr_seen {
            self.warn(e, "biblStruct without <monogr>");
        }
        b.identifiers.extend(hoisted);
        b
    }

    fn identifier(&mut self, e: &XmlElement) -> Option<Identifier> {
        let value = clean(&e.text());
        if value.is_empty() {
            self.warn(e, "empty identifier dropped");
            return None;
        }
        let kind = e.attr("type").unwrap_or("unknown").to_string();
        if kind.eq_ignore_ascii_case("DOI") && !value.starts_with("10.") {
            self.warn(e, format!("DOI {value:?} does not start with \"10.\""));
        }
        Some(Identifier { kind, value })
    }

    fn title(&mut self, e: &XmlElement, default_level: &str) -> Title {
        Title {
            level: e.attr("level").unwrap_or(default_level).to_string(),
            kind: e.attr("type").unwrap_or("main").to_string(),
            text: self.rich(e),
        }
    }

    fn analytic(&mut self, e: &XmlElement) -> Analytic {
        let mut a = Analytic::default();
        for c in e.child_elements() {
            match c.name.as_str() {
                "title" => a.titles.push(self.title(c, "a")),
                "author" => a.authors.push(self.author(c)),
                _ => self.drop_unknown(c),
            }
        }
        a
    }

    fn author(&mut self, e: &XmlElement) -> Author {
        let mut a = Author {
            corresponding: matches!(
                e.attr("type").or(e.attr("role")),
                Some("corresp" | "corresponding")
            ),
            ..Default::default()
        };
        let mut named = false;
        for c in e.child_elements() {
            match c.name.as_str() {
                "idno" => {
                    if let Some(id) = self.identifier(c) {
                        a.identifiers.push(id);
                    }
                }
                "persName" if !named => {
                    named = true;
                    let mut surnames = Vec::new();
                    for n in c.child_elements() {
                        match n.name.as_str() {
                            "forename" => a.forenames.push(clean(&n.text())),
                            "surname" => surnames.push(clean(&n.text())),
                            _ => self.drop_unknown(n),
                        }
                    }
                    a.surname = if surnames.is_empty() {
                        clean(&c.text())
                    } else {
                        surnames.join(" ")
                    };
                }
                "orgName" | "name" if !named => {
                    named = true;
                    a.surname = clean(&c.text());
                }
                "affiliation" if a.affiliation.is_none() => {
                    a.affiliation = Some(self.affiliation(c))
                }
                "email" if a.email.is_none() => a.email = non_empty(clean(&c.text())),
                _ => self.drop_unknown(c),
            }
        }
        if !named && e.has_direct_text() {
            a.surname = clean(
                &e.children
                    .iter()
                    .filter_map(|n| match n {
                        XmlNode::Text(t) => Some(t.as_str()),
                        XmlNode::Element(_) => None,
                    })
                    .collect::<String>(),
            );
        }
        a
    }

    fn affiliation(&mut self, e: &XmlElement) -> Affiliation {
        let mut af = Affiliation::default();
        for c in e.child_elements() {
            match c.name.as_str() {
                "orgName" => af.org_units.push(OrgUnit {
                    kind: c.attr("type").unwrap_or("").to_string(),
                    name: clean(&c.text()),
                }),
                "address" if af.address.is_none() => {
                    let addr = self.address(c);
                    if addr.is_empty() {
                        self.warn(c, "empty address dropped");
                    } else {
                        af.address = Some(addr);
                    }
                }
                _ => self.drop_unknown(c),
            }
        }
        af
    }

    fn address(&mut self, e: &XmlElement) -> Address {
        let mut a = Address::default();
        for c in e.child_elements() {
            let text = non_empty(clean(&c.text()));
            match c.name.as_str() {
                "settlement" if a.settlement.is_none() => a.settlement = text,
                "postCode" if a.post_code.is_none() => a.post_code = text,
                "country" if a.country.is_none() => a.country = text,
                "addrLine" => {
                    if let Some(text) = text {
                        a.lines.push(AddressLine {
                            kind: c.attr("type").map(str::to_string),
                            text,
                        });
                    }
                }
                _ => self.drop_unknown(c),
            }
        }
        a
    }

    fn monogr(
        &mut self,
        e: &XmlElement,
        default_level: &str,
        hoisted: &mut Vec<Identifier>,
    ) -> Monogr {
        let mut m = Monogr::default();
        let mut imprint_seen = false;
        for c in e.child_elements() {
            match c.name.as_str() {
                "title" => m.titles.push(self.title(c, default_level)),
                "author" => m.container_authors.push(self.author(c)),
                "idno" => {
                    let Some(id) = self.identifier(c) else {
                        continue;
                    };
                    if id.kind.eq_ignore_ascii_case("ISSN") && m.issn.is_none() {
                        if !is_issn(&id.value) {
                            self.warn(c, format!("ISSN {:?} does not match DDDD-DDDC", id.value));
                        }
                        m.issn = Some(id.value);
                    } else {
                        hoisted.push(id);
                    }
                }
                "imprint" if !imprint_seen => {
                    imprint_seen = true;
                    m.imprint = self.imprint(c);
                }
                _ => self.drop_unknown(c),
            }
        }
        m
    }

    fn imprint(&mut self, e: &XmlElement) -> Imprint {
        let mut im = Imprint::default();
        for c in e.child_elements() {
            match c.name.as_str() {
                "publisher" if im.publisher.is_none() => im.publisher = non_empty(clean(&c.text())),
                "pubPlace" if im.pub_place.is_none() => im.pub_place = non_empty(clean(&c.text())),
                "date" if im.date.is_none() => {
                    let role = match (c.attr("type"), c.attr("typ")) {
                        (Some(t), _) => t,
                        (None, Some(t)) => {
                            self.warn(c, "attribute typ on <date> read as type");
                            t
                        }
                        (None, None) => "published",
                    };
                    let role = role.trim().to_lowercase();
                    if let Some(when) = self.date(c) {
                        im.date = Some(ImprintDate { when, role });
                    }
                }
                "biblScope" => {
                    let kind = c.attr("type").or(c.attr("unit")).unwrap_or("").to_string();
                    im.scopes.push(Scope {
                        kind,
                        value: clean(&c.text()),
                    });
                }
                _ => self.drop_unknown(c),
            }
        }
        im
    }

    // ---- text ---------------------------------------------------------

    fn text(&mut self, e: &XmlElement) -> (Vec<Division>, Vec<Division>, BackMatter) {
        let mut front = Vec::new();
        let mut body = Vec::new();
        let mut back = BackMatter::default();
        for c in e.child_elements() {
            match c.name.as_str() {
                "front" => front.extend(self.division_list(c)),
                "body" => body.extend(self.division_list(c)),
                "back" => self.back(c, &mut back),
                _ => self.drop_unknown(c),
            }
        }
        (front, body, back)
    }

    /// Children of front/body: divisions, with stray blocks gathered into
    /// an implicit section so no content is lost.
    fn division_list(&mut self, e: &XmlElement) -> Vec<Division> {
        let mut out = Vec::new();
        let mut stray: Option<Division> = None;
        for c in e.children.iter() {
            match c {
                XmlNode::Element(c) if c.name == "div" && c.is_tei() => {
                    if let Some(s) = stray.take() {
                        out.push(s);
                    }
                    out.push(self.division(c));
                }
                XmlNode::Element(c) => {
                    if stray.is_none() {
                        self.warn(
                            c,
                            format!("<{}> outside a division wrapped in a section", c.name),
                        );
                    }
                    let block = self.block(c);
                    stray
                        .get_or_insert_with(|| Division::new("section"))
                        .blocks
                        .push(block);
                }
                XmlNode::Text(t) if !t.trim().is_empty() => {
                    self.warn(e, "text outside a division wrapped in a section");
                    stray
                        .get_or_insert_with(|| Division::new("section"))
                        .blocks
                        .push(Block::Paragraph(RichText::plain(t.clone())));
                }
                XmlNode::Text(_) => {}
            }
        }
        out.extend(stray);
        out
    }

    fn back(&mut self, e: &XmlElement, back: &mut BackMatter) {
        for c in e.child_elements() {
            match c.name.as_str() {
                "listBibl" | "listBib" => self.list_bibl(c, back),
                "note" => back.notes.push(self.rich(c)),
                "div" => {
                    let lists: Vec<&XmlElement> = c
                        .child_elements()
                        .filter(|x| matches!(x.name.as_str(), "listBibl" | "listBib"))
                        .collect();
                    if lists.is_empty() {
                        back.divisions.push(self.division(c));
                        continue;
                    }
                    for l in &lists {
                        self.list_bibl(l, back);
                    }
                    let rest = c
                        .child_elements()
                        .any(|x| !matches!(x.name.as_str(), "listBibl" | "listBib" | "head"));
                    if rest {
                        let mut d = self.division(c);
                        d.blocks.retain(|b| !matches!(b, Block::Opaque(o) if o.name == "listBibl" || o.name == "listBib"));
                        back.divisions.push(d);
                    }
                }
                _ => {
                    let block = self.block(c);
                    self.warn(
                        c,
                        format!("<{}> outside a division wrapped in a section", c.name),
                    );
                    let mut d = Division::new("section");
                    d.blocks.push(block);
                    back.divisions.push(d);
                }
            }
        }
    }

    fn list_bibl(&mut self, e: &XmlElement, back: &mut BackMatter) {
        if e.name == "listBib" {
            self.warn(e, "<listBib> accepted as <listBibl>");
        }
        if back.reference_list.is_some() {
            self.warn(e, "second reference list merged into the first");
        }
        let mut entries = Vec::new();
        for c in e.child_elements() {
            match c.name.as_str() {
                "biblStruct" => entries.push(self.bibl_struct(c)),
                "head" => {}
                _ => self.drop_unknown(c),
            }
        }
        back.reference_list
            .get_or_insert_with(ListBibl::default)
            .entries
            .extend(entries);
    }

    fn division(&mut self, e: &XmlElement) -> Division {
        let mut d = Division::new(e.attr("type").unwrap_or("section"));
        for c in &e.children {
            match c {
                XmlNode::Element(c) if c.is_tei() && c.name == "head" && d.head.is_none() => {
                    d.head = Some(self.rich(c))
                }
                XmlNode::Element(c) if c.is_tei() && c.name == "div" => {
                    d.children.push(self.division(c))
                }
                XmlNode::Element(c) => {
                    if !d.children.is_empty() {
                        self.warn(c, "block after a subdivision moved before it");
                    }
                    d.blocks.push(self.block(c));
                }
                XmlNode::Text(t) if !t.trim().is_empty() => {
                    self.warn(e, "bare text in a division wrapped in a paragraph");
                    d.blocks.push(Block::Paragraph(RichText::plain(t.clone())));
                }
                XmlNode::Text(_) => {}
            }
        }
        d
    }

    fn opaque(&self, e: &XmlElement) -> Opaque {
        Opaque {
            name: e.name.clone(),
            raw: self.doc.raw(e).to_string(),
            text: e.text(),
        }
    }

    fn block(&mut self, e: &XmlElement) -> Block {
        if !e.is_tei() {
            return Block::Opaque(self.opaque(e));
        }
        match e.name.as_str() {
            "p" => Block::Paragraph(self.rich(e)),
            "quote" => Block::Quote(self.rich(e)),
            "cit" => self.cit(e).map(Block::Cit).unwrap_or_else(|| {
                self.warn(e, "<cit> without exactly one source kept verbatim");
                Block::Opaque(self.opaque(e))
            }),
            "figure" => self
                .figure(e)
                .map(Block::Figure)
                .unwrap_or_else(|| Block::Opaque(self.opaque(e))),
            "list" => self
                .list(e)
                .map(Block::List)
                .unwrap_or_else(|| Block::Opaque(self.opaque(e))),
            "table" => Block::Table(TableBlock {
                raw: self.doc.raw(e).to_string(),
                caption: e.first_child("head").map(|h| clean(&h.text())),
                text: e.text(),
            }),
            "formula" => Block::Formula(FormulaBlock {
                raw: self.doc.raw(e).to_string(),
                notation: e.attr("notation").map(str::to_string),
                text: e.text(),
            }),
            _ => Block::Opaque(self.opaque(e)),
        }
    }

    fn cit(&mut self, e: &XmlElement) -> Option<CitBlock> {
        let mut quote = None;
        let mut sources = Vec::new();
        let mut qualifiers = None;
        for c in e.child_elements() {
            match c.name.as_str() {
                "quote" if quote.is_none() => quote = Some(c),
                "biblStruct" => sources.push(c),
                "ptr" | "ref" if c.attr("target").is_some() => sources.push(c),
                "note" if qualifiers.is_none() => qualifiers = Some(c),
                _ => return None,
            }
        }
        if sources.len() != 1 || e.has_direct_text() {
            return None;
        }
        let quote = quote.map(|q| self.rich(q)).unwrap_or_default();
        let source = if sources[0].name == "biblStruct" {
            CitSource::Embedded(Box::new(self.bibl_struct(sources[0])))
        } else {
            CitSource::Ref(RefTarget::new(
                sources[0].attr("target").unwrap_or_default(),
            ))
        };
        Some(CitBlock {
            quote,
            source,
            qualifiers: qualifiers.map(|q| self.rich(q)),
        })
    }

    fn figure(&mut self, e: &XmlElement) -> Option<FigureBlock> {
        let mut f = FigureBlock {
            graphic: None,
            caption: None,
            source: None,
        };
        if e.has_direct_text() {
            return None;
        }
        for c in e.child_elements() {
            match c.name.as_str() {
                "head" if f.caption.is_none() => f.caption = Some(self.rich(c)),
                "graphic" if f.graphic.is_none() && c.children.is_empty() => {
                    f.graphic = c.attr("url").map(str::to_string)
                }
                "biblStruct" if f.source.is_none() => {
                    f.source = Some(Box::new(self.bibl_struct(c)))
                }
                _ => return None,
            }
        }
        Some(f)
    }

    fn list(&mut self, e: &XmlElement) -> Option<ListBlock> {
        if e.has_direct_text()
            || e.child_elements().any(|c| c.name != "item")
            || !e.attributes.is_empty()
        {
            return None;
        }
        Some(ListBlock {
            items: e.child_elements().map(|c| self.rich(c)).collect(),
        })
    }

    // ---- inline content -------------------------------------------------

    fn rich(&mut self, e: &XmlElement) -> RichText {
        let mut out: Vec<Inline> = Vec::new();
        for c in &e.children {
            let inline = match c {
                XmlNode::Text(t) if t.is_empty() => continue,
                XmlNode::Text(t) => {
                    if let Some(Inline::Text(prev)) = out.last_mut() {
                        prev.push_str(t);
                        continue;
                    }
                    Inline::Text(t.clone())
                }
                XmlNode::Element(c) => self.inline(c),
            };
            out.push(inline);
        }
        RichText::new(out)
    }

    fn inline(&mut self, e: &XmlElement) -> Inline {
        if !e.is_tei() {
            return Inline::Opaque(self.opaque(e));
        }
        let mention = |e: &XmlElement| Mention {
            text: e.text(),
            key: e.attr("key").or(e.attr("ref")).map(str::to_string),
        };
        match e.name.as_str() {
            "hi" => Inline::Emph {
                rend: e.attr("rend").unwrap_or("").to_string(),
                content: self.rich(e),
            },
            "emph" => Inline::Emph {
                rend: "emph".into(),
                content: self.rich(e),
            },
            "ref" if e.attr("type") == Some("bibl") => Inline::BiblRef {
                target: RefTarget::new(e.attr("target").unwrap_or_default()),
                text: e.text(),
            },
            "ref" if e.attr("target").is_some() && e.attributes.len() == 1 => Inline::Link {
                target: e.attr("target").unwrap_or_default().to_string(),
                text: e.text(),
            },
            "persName" => Inline::Person(mention(e)),
            "orgName" => Inline::Org(mention(e)),
            "placeName" => Inline::Place(mention(e)),
            "term" => Inline::Term {
                kind: e.attr("type").map(str::to_string),
                text: e.text(),
            },
            "abbr" => Inline::Abbr {
                abbr: e.text(),
                expansion: None,
            },
            "choice" => {
                let abbr = e.first_child("abbr");
                let expan = e.first_child("expan");
                match (abbr, expan) {
                    (Some(a), Some(x)) if e.child_elements().count() == 2 => Inline::Abbr {
                        abbr: a.text(),
                        expansion: Some(x.text()),
                    },
                    _ => Inline::Opaque(self.opaque(e)),
                }
            }
            _ => Inline::Opaque(self.opaque(e)),
        }
    }
}

/// `Received` becomes `received`; longer free text becomes `change`.
fn change_kind_from_text(text: &str) -> String {
    let t = clean(text).to_lowercase();
    if !t.is_empty() && t.chars().all(|c| c.is_alphabetic() || c == '-') {
        t
    } else {
        "change".to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"<TEI xmlns="http://www.tei-c.org/ns/1.0"><teiHeader><fileDesc>
<titleStmt><title>T</title></titleStmt><publicationStmt/><sourceDesc><biblStruct><monogr><title>T</title><imprint/></monogr></biblStruct></sourceDesc>
</fileDesc></teiHeader><text><body><div><p>Hello</p></div></body></text></TEI>"#;

    #[test]
    fn minimal_document() {
        let r = parse_article(MINIMAL.as_bytes());
        assert!(r.issues.is_empty(), "{:?}", r.issues);
        let a = r.outcome.unwrap();
        assert!(a.front.is_empty());
        assert!(a.back.is_empty());
        assert_eq!(a.body.len(), 1);
        assert_eq!(
            a.body[0].blocks,
            vec![Block::Paragraph(RichText::plain("Hello"))]
        );
    }

    #[test]
    fn wrong_root_is_an_error() {
        let r = parse_article(b"<html><body/></html>");
        assert!(r.outcome.is_none());
        assert_eq!(r.issues[0].location.to_string(), "html[1]");
        let r = parse_article(b"<TEI><teiHeader/><text/></TEI>");
        assert!(
            r.outcome.is_none(),
            "TEI outside the namespace must be rejected"
        );
    }

    #[test]
    fn missing_text_is_an_error() {
        let r = parse_article(br#"<TEI xmlns="http://www.tei-c.org/ns/1.0"><teiHeader/></TEI>"#);
        assert!(r.outcome.is_none());
        assert!(r.issues[0].message.contains("text"));
    }

    #[test]
    fn malformed_xml_is_an_error() {
        let r = parse_article(b"<TEI xmlns=\"http://www.tei-c.org/ns/1.0\"><teiHeader>");
        assert!(r.has_errors());
        assert!(r.outcome.is_none());
    }

    #[test]
    fn repairs_typ_and_list_bib() {
        let src = MINIMAL
            .replace("<imprint/>", r#"<imprint><date typ="Published" when="1969-02-07"/></imprint>"#)
            .replace("</body>", r#"</body><back><listBib><biblStruct xml:id="b1"><monogr><title>X</title><imprint/></monogr></biblStruct></listBib></back>"#);
        let r = parse_article(src.as_bytes());
        let msgs: Vec<&str> = r.issues.iter().map(|i| i.message.as_str()).collect();
        assert!(msgs.iter().any(|m| m.contains("typ")), "{msgs:?}");
        assert!(msgs.iter().any(|m| m.contains("listBib")), "{msgs:?}");
        assert!(r.issues.iter().all(|i| i.severity == Severity::Warning));
        let a = r.outcome.unwrap();
        let d = a.source().unwrap().monogr.imprint.date.clone().unwrap();
        assert_eq!(d.role, "published");
        assert_eq!(d.when.raw(), "1969-02-07");
        assert_eq!(a.reference_list().unwrap().entries.len(), 1);
    }

    #[test]
    fn header_unknowns_dropped_text_unknowns_kept() {
        let src = MINIMAL
            .replace(
                "<publicationStmt/>",
                "<publicationStmt><funder>X</funder></publicationStmt>",
            )
            .replace("<p>Hello</p>", "<p>Hello</p><sp><speaker>A</speaker></sp>");
        let r = parse_article(src.as_bytes());
        let a = r.outcome.unwrap();
        assert_eq!(r.issues.len(), 1);
        assert!(
            r.issues[0]
                .location
                .to_string()
                .ends_with("publicationStmt[1]/funder[1]")
        );
        match &a.body[0].blocks[1] {
            Block::Opaque(o) => assert_eq!(o.raw, "<sp><speaker>A</speaker></sp>"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn change_kinds() {
        assert_eq!(change_kind_from_text(" Received "), "received");
        assert_eq!(change_kind_from_text("fixed table 2"), "change");
    }

    #[test]
    fn bad_change_date_is_an_error() {
        let src = MINIMAL.replace(
            "</fileDesc>",
            r#"</fileDesc><revisionDesc><change when="2008-13-01">x</change></revisionDesc>"#,
        );
        let r = parse_article(src.as_bytes());
        assert!(r.outcome.is_none());
        assert!(
            r.issues[0]
                .location
                .to_string()
                .ends_with("revisionDesc[1]/change[1]")
        );
    }
}
