use crate::model::*;

use super::TEI_NS;

pub fn escape_text(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

pub fn escape_attr(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\t' => out.push_str("&#9;"),
            '\n' => out.push_str("&#10;"),
            '\r' => out.push_str("&#13;"),
            c => out.push(c),
        }
    }
    out
}

/// Indenting writer for element-only content. Attributes are emitted in
/// alphabetical order; inline content is written on one line, verbatim.
#[derive(Debug, Default)]
pub struct XmlWriter {
    out: String,
    depth: usize,
}

impl XmlWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn finish(self) -> String {
        self.out
    }

    fn indent(&mut self) {
        for _ in 0..self.depth {
            self.out.push_str("  ");
        }
    }

    fn open_tag(&mut self, name: &str, attrs: &[(&str, &str)]) {
        let mut sorted: Vec<&(&str, &str)> = attrs.iter().collect();
        sorted.sort_by(|a, b| a.0.cmp(b.0));
        self.out.push('<');
        self.out.push_str(name);
        for (k, v) in sorted {
            self.out.push(' ');
            self.out.push_str(k);
            self.out.push_str("=\"");
            self.out.push_str(&escape_attr(v));
            self.out.push('"');
        }
    }

    /// Writes `name` with element-only content produced by `body`; an
    /// element whose body writes nothing becomes self-closing.
    pub fn element(&mut self, name: &str, attrs: &[(&str, &str)], body: impl FnOnce(&mut Self)) {
        self.indent();
        self.open_tag(name, attrs);
        let before_gt = self.out.len();
        self.out.push_str(">\n");
        let mark = self.out.len();
        self.depth += 1;
        body(self);
        self.depth -= 1;
        if self.out.len() == mark {
            self.out.truncate(before_gt);
            self.out.push_str("/>\n");
        } else {
            self.indent();
            self.out.push_str("</");
            self.out.push_str(name);
            self.out.push_str(">\n");
        }
    }

    /// Writes an element whose content is a single run of inline markup.
    pub fn inline_element(&mut self, name: &str, attrs: &[(&str, &str)], content: &str) {
        self.indent();
        self.open_tag(name, attrs);
        if content.is_empty() {
            self.out.push_str("/>\n");
        } else {
            self.out.push('>');
            self.out.push_str(content);
            self.out.push_str("</");
            self.out.push_str(name);
            self.out.push_str(">\n");
        }
    }

    pub fn text_element(&mut self, name: &str, attrs: &[(&str, &str)], text: &str) {
        self.inline_element(name, attrs, &escape_text(text));
    }

    pub fn empty(&mut self, name: &str, attrs: &[(&str, &str)]) {
        self.inline_element(name, attrs, "");
    }

    /// Emits pre-serialized markup on its own line, unchanged.
    pub fn raw(&mut self, markup: &str) {
        self.indent();
        self.out.push_str(markup);
        self.out.push('\n');
    }
}

pub(crate) fn inline_markup(text: &RichText) -> String {
    let mut out = String::new();
    for i in text {
        push_inline(i, &mut out);
    }
    out
}

fn tag(out: &mut String, name: &str, attrs: &[(&str, &str)], content: &str) {
    let mut w = XmlWriter::new();
    w.inline_element(name, attrs, content);
    out.push_str(w.finish().trim_end_matches('\n'));
}

fn push_inline(i: &Inline, out: &mut String) {
    match i {
        Inline::Text(t) => out.push_str(&escape_text(t)),
        Inline::Emph { rend, content } => {
            let attrs: Vec<(&str, &str)> = if rend.is_empty() {
                vec![]
            } else {
                vec![("rend", rend)]
            };
            tag(out, "hi", &attrs, &inline_markup(content));
        }
        Inline::BiblRef { target, text } => tag(
            out,
            "ref",
            &[("target", target.as_str()), ("type", "bibl")],
            &escape_text(text),
        ),
        Inline::Person(m) => mention(out, "persName", m),
        Inline::Org(m) => mention(out, "orgName", m),
        Inline::Place(m) => mention(out, "placeName", m),
        Inline::Term { kind, text } => {
            let attrs: Vec<(&str, &str)> = kind.iter().map(|k| ("type", k.as_str())).collect();
            tag(out, "term", &attrs, &escape_text(text));
        }
        Inline::Abbr {
            abbr,
            expansion: None,
        } => tag(out, "abbr", &[], &escape_text(abbr)),
        Inline::Abbr {
            abbr,
            expansion: Some(x),
        } => {
            let mut inner = String::new();
            tag(&mut inner, "abbr", &[], &escape_text(abbr));
            tag(&mut inner, "expan", &[], &escape_text(x));
            tag(out, "choice", &[], &inner);
        }
        Inline::Link { target, text } => tag(out, "ref", &[("target", target)], &escape_text(text)),
        Inline::Opaque(o) => out.push_str(&o.raw),
    }
}

fn mention(out: &mut String, name: &str, m: &Mention) {
    let attrs: Vec<(&str, &str)> = m.key.iter().map(|k| ("key", k.as_str())).collect();
    tag(out, name, &attrs, &escape_text(&m.text));
}

fn rich(w: &mut XmlWriter, name: &str, attrs: &[(&str, &str)], text: &RichText) {
    w.inline_element(name, attrs, &inline_markup(text));
}

/// Canonical UTF-8 serialization of an article.
pub fn serialize_article(a: &Article) -> Vec<u8> {
    let mut w = XmlWriter::new();
    w.out
        .push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let decls: Vec<(String, String)> = a
        .namespaces
        .iter()
        .map(|(p, u)| (format!("xmlns:{p}"), u.clone()))
        .collect();
    let mut attrs: Vec<(&str, &str)> = vec![("xmlns", TEI_NS)];
    attrs.extend(decls.iter().map(|(k, v)| (k.as_str(), v.as_str())));
    w.element("TEI", &attrs, |w| {
        w.element("teiHeader", &[], |w| header(w, &a.header));
        w.element("text", &[], |w| {
            if !a.front.is_empty() {
                w.element("front", &[], |w| {
                    a.front.iter().for_each(|d| division(w, d))
                });
            }
            w.element("body", &[], |w| a.body.iter().for_each(|d| division(w, d)));
            if !a.back.is_empty() {
                w.element("back", &[], |w| back(w, &a.back));
            }
        });
    });
    w.finish().into_bytes()
}

fn header(w: &mut XmlWriter, h: &Header) {
    if let Some(fd) = &h.file_desc {
        w.element("fileDesc", &[], |w| {
            if let Some(ts) = &fd.title_stmt {
                w.element("titleStmt", &[], |w| {
                    if let Some(t) = &ts.main_title {
                        rich(w, "title", &[("level", "a"), ("type", "main")], t);
                    }
                });
            }
            if let Some(ps) = &fd.publication_stmt {
                w.element("publicationStmt", &[], |w| {
                    if let Some(av) = &ps.availability {
                        w.element("availability", &[], |w| rich(w, "p", &[], av));
                    }
                    if let Some(d) = &ps.date {
                        w.text_element("date", &[("when", d.raw())], d.raw());
                    }
                    if let Some(au) = &ps.authority {
                        w.text_element("authority", &[], au);
                    }
                });
            }
            if let Some(sd) = &fd.source_desc {
                w.element("sourceDesc", &[], |w| {
                    sd.records.iter().for_each(|b| bibl_struct(w, b))
                });
            }
        });
    }
    let pd = &h.profile_desc;
    if !pd.is_empty() {
        w.element("profileDesc", &[], |w| {
            if !pd.languages.is_empty() {
                w.element("langUsage", &[], |w| {
                    for l in &pd.languages {
                        w.empty("language", &[("ident", l)]);
                    }
                });
            }
            if !pd.keywords.is_empty() {
                w.element("textClass", &[], |w| {
                    for group in keyword_groups(&pd.keywords) {
                        let attrs: Vec<(&str, &str)> = group[0]
                            .scheme
                            .iter()
                            .map(|s| ("scheme", s.as_str()))
                            .collect();
                        w.element("keywords", &attrs, |w| {
                            w.element("list", &[], |w| {
                                for k in group {
                                    w.element("item", &[], |w| {
                                        w.text_element("term", &[], &k.term)
                                    });
                                }
                            });
                        });
                    }
                });
            }
        });
    }
    if !h.revision_desc.changes.is_empty() {
        w.element("revisionDesc", &[], |w| {
            for c in &h.revision_desc.changes {
                rich(
                    w,
                    "change",
                    &[("type", &c.kind), ("when", c.when.raw())],
                    &c.description,
                );
            }
        });
    }
}

/// Consecutive keywords sharing a scheme, one `keywords` element each.
pub(crate) fn keyword_groups(keywords: &[Keyword]) -> Vec<&[Keyword]> {
    keywords.chunk_by(|a, b| a.scheme == b.scheme).collect()
}

pub(crate) fn bibl_struct(w: &mut XmlWriter, b: &BiblStruct) {
    let mut attrs = vec![("type", b.doc_type.as_str())];
    if let Some(id) = &b.xml_id {
        attrs.push(("xml:id", id));
    }
    w.element("biblStruct", &attrs, |w| {
        if let Some(an) = &b.analytic {
            w.element("analytic", &[], |w| {
                an.titles.iter().for_each(|t| title(w, t));
                an.authors.iter().for_each(|a| author(w, a));
            });
        }
        let m = &b.monogr;
        w.element("monogr", &[], |w| {
            m.container_authors.iter().for_each(|a| author(w, a));
            m.titles.iter().for_each(|t| title(w, t));
            if let Some(issn) = &m.issn {
                w.text_element("idno", &[("type", "ISSN")], issn);
            }
            imprint(w, &m.imprint);
        });
        for id in &b.identifiers {
            w.text_element("idno", &[("type", &id.kind)], &id.value);
        }
    });
}

fn title(w: &mut XmlWriter, t: &Title) {
    rich(
        w,
        "title",
        &[("level", &t.level), ("type", &t.kind)],
        &t.text,
    );
}

fn author(w: &mut XmlWriter, a: &Author) {
    let attrs: Vec<(&str, &str)> = if a.corresponding {
        vec![("type", "corresp")]
    } else {
        vec![]
    };
    w.element("author", &attrs, |w| {
        for id in &a.identifiers {
            w.text_element("idno", &[("type", &id.kind)], &id.value);
        }
        if !a.forenames.is_empty() || !a.surname.is_empty() {
            w.element("persName", &[], |w| {
                for f in &a.forenames {
                    w.text_element("forename", &[], f);
                }
                w.text_element("surname", &[], &a.surname);
            });
        }
        if let Some(af) = &a.affiliation {
            w.element("affiliation", &[], |w| {
                for o in &af.org_units {
                    let attrs: Vec<(&str, &str)> = if o.kind.is_empty() {
                        vec![]
                    } else {
                        vec![("type", &o.kind)]
                    };
                    w.text_element("orgName", &attrs, &o.name);
                }
                if let Some(ad) = &af.address {
                    w.element("address", &[], |w| {
                        if let Some(s) = &ad.settlement {
                            w.text_element("settlement", &[], s);
                        }
                        if let Some(s) = &ad.post_code {
                            w.text_element("postCode", &[], s);
                        }
                        if let Some(s) = &ad.country {
                            w.text_element("country", &[], s);
                        }
                        for l in &ad.lines {
                            let attrs: Vec<(&str, &str)> =
                                l.kind.iter().map(|k| ("type", k.as_str())).collect();
                            w.text_element("addrLine", &attrs, &l.text);
                        }
                    });
                }
            });
        }
        if let Some(e) = &a.email {
            w.text_element("email", &[], e);
        }
    });
}

fn imprint(w: &mut XmlWriter, im: &Imprint) {
    w.element("imprint", &[], |w| {
        if let Some(p) = &im.publisher {
            w.text_element("publisher", &[], p);
        }
        if let Some(p) = &im.pub_place {
            w.text_element("pubPlace", &[], p);
        }
        if let Some(d) = &im.date {
            w.empty("date", &[("type", &d.role), ("when", d.when.raw())]);
        }
        for s in &im.scopes {
            let attrs: Vec<(&str, &str)> = if s.kind.is_empty() {
                vec![]
            } else {
                vec![("type", &s.kind)]
            };
            w.text_element("biblScope", &attrs, &s.value);
        }
    });
}

fn division(w: &mut XmlWriter, d: &Division) {
    w.element("div", &[("type", &d.kind)], |w| {
        if let Some(h) = &d.head {
            rich(w, "head", &[], h);
        }
        d.blocks.iter().for_each(|b| block(w, b));
        d.children.iter().for_each(|c| division(w, c));
    });
}

fn block(w: &mut XmlWriter, b: &Block) {
    match b {
        Block::Paragraph(t) => rich(w, "p", &[], t),
        Block::Quote(t) => rich(w, "quote", &[], t),
        Block::Cit(c) => w.element("cit", &[], |w| {
            rich(w, "quote", &[], &c.quote);
            match &c.source {
                CitSource::Embedded(b) => bibl_struct(w, b),
                CitSource::Ref(t) => w.empty("ptr", &[("target", t.as_str())]),
            }
            if let Some(q) = &c.qualifiers {
                rich(w, "note", &[], q);
            }
        }),
        Block::Figure(f) => w.element("figure", &[], |w| {
            if let Some(c) = &f.caption {
                rich(w, "head", &[], c);
            }
            if let Some(g) = &f.graphic {
                w.empty("graphic", &[("url", g)]);
            }
            if let Some(s) = &f.source {
                bibl_struct(w, s);
            }
        }),
        Block::List(l) => w.element("list", &[], |w| {
            l.items.iter().for_each(|i| rich(w, "item", &[], i))
        }),
        Block::Table(t) => w.raw(&t.raw),
        Block::Formula(f) => w.raw(&f.raw),
        Block::Opaque(o) => w.raw(&o.raw),
    }
}

fn back(w: &mut XmlWriter, b: &BackMatter) {
    b.divisions.iter().for_each(|d| division(w, d));
    if let Some(l) = &b.reference_list {
        w.element("listBibl", &[], |w| {
            l.entries.iter().for_each(|e| bibl_struct(w, e))
        });
    }
    for n in &b.notes {
        rich(w, "note", &[], n);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn attributes_sorted_and_escaped() {
        let mut w = XmlWriter::new();
        w.text_element("x", &[("z", "a\"b"), ("a", "1\n2")], "<&>");
        assert_eq!(
            w.finish(),
            "<x a=\"1&#10;2\" z=\"a&quot;b\">&lt;&amp;&gt;</x>\n"
        );
    }

    #[test]
    fn empty_elements_self_close() {
        let mut w = XmlWriter::new();
        w.element("a", &[], |w| w.element("b", &[], |_| {}));
        assert_eq!(w.finish(), "<a>\n  <b/>\n</a>\n");
    }
}
