use std::fmt::Write;

use super::{Apparatus, MarkerScheme, StyleGuide, affiliation_line, format_entry, table_rows};
use crate::model::*;
use crate::xml::{escape_attr, escape_text};

struct Html<'a> {
    out: String,
    cites: &'a Apparatus,
    style: &'a StyleGuide,
}

impl Html<'_> {
    fn inlines(&mut self, t: &RichText) {
        for i in t {
            self.inline(i);
        }
    }

    fn inline(&mut self, i: &Inline) {
        let o = &mut self.out;
        match i {
            Inline::Text(t) => o.push_str(&escape_text(t)),
            Inline::Emph { rend, content } => {
                let (open, close) = match rend.as_str() {
                    "italic" | "italics" | "i" => ("<i>".to_string(), "</i>"),
                    "bold" | "b" => ("<b>".to_string(), "</b>"),
                    "sup" | "superscript" => ("<sup>".to_string(), "</sup>"),
                    "sub" | "subscript" => ("<sub>".to_string(), "</sub>"),
                    other => (
                        format!("<em class=\"tj-rend-{}\">", escape_attr(other)),
                        "</em>",
                    ),
                };
                o.push_str(&open);
                self.inlines(content);
                self.out.push_str(close);
            }
            Inline::BiblRef { target, text } => match self.cites.marker(target) {
                Some((id, marker)) => {
                    let _ = write!(
                        o,
                        "<a class=\"tj-ref\" href=\"#ref-{}\">{}</a>",
                        escape_attr(id),
                        escape_text(marker)
                    );
                }
                None => {
                    let _ = write!(
                        o,
                        "<span class=\"tj-ref tj-unresolved\">{}</span>",
                        escape_text(text)
                    );
                }
            },
            Inline::Person(m) => span(o, "tj-person", &m.text),
            Inline::Org(m) => span(o, "tj-org", &m.text),
            Inline::Place(m) => span(o, "tj-place", &m.text),
            Inline::Term { kind, text } => {
                let class = match kind {
                    Some(k) => format!("tj-term tj-term-{}", escape_attr(k)),
                    None => "tj-term".into(),
                };
                span(o, &class, text)
            }
            Inline::Abbr { abbr, expansion } => match expansion {
                Some(e) => {
                    let _ = write!(
                        o,
                        "<abbr title=\"{}\">{}</abbr>",
                        escape_attr(e),
                        escape_text(abbr)
                    );
                }
                None => {
                    let _ = write!(o, "<abbr>{}</abbr>", escape_text(abbr));
                }
            },
            Inline::Link { target, text } => {
                let _ = write!(
                    o,
                    "<a href=\"{}\">{}</a>",
                    escape_attr(target),
                    escape_text(text)
                );
            }
            Inline::Opaque(op) => span(o, "tj-opaque", &op.text),
        }
    }

    fn para(&mut self, class: Option<&str>, t: &RichText) {
        match class {
            Some(c) => {
                let _ = write!(self.out, "<p class=\"{c}\">");
            }
            None => self.out.push_str("<p>"),
        }
        self.inlines(t);
        self.out.push_str("</p>\n");
    }

    fn division(&mut self, d: &Division, depth: usize, class: &str) {
        let _ = writeln!(self.out, "<section class=\"{class}\">");
        let level = (depth + 1).min(6);
        match &d.head {
            Some(h) => {
                let _ = write!(self.out, "<h{level}>");
                self.inlines(h);
                let _ = writeln!(self.out, "</h{level}>");
            }
            None if d.kind == "abstract" => {
                let _ = writeln!(self.out, "<h{level}>Abstract</h{level}>");
            }
            None => {}
        }
        for b in &d.blocks {
            self.block(b);
        }
        for c in &d.children {
            self.division(c, depth + 1, "tj-section");
        }
        self.out.push_str("</section>\n");
    }

    fn block(&mut self, b: &Block) {
        match b {
            Block::Paragraph(t) => self.para(None, t),
            Block::Quote(t) => {
                self.out.push_str("<blockquote class=\"tj-quote\">");
                self.para(None, t);
                self.out.push_str("</blockquote>\n");
            }
            Block::Cit(c) => {
                self.out.push_str("<blockquote class=\"tj-cit\">\n");
                self.para(None, &c.quote);
                self.out.push_str("<footer>");
                match &c.source {
                    CitSource::Embedded(record) => match format_entry(record, self.style) {
                        Ok(e) => self.out.push_str(&e.to_xhtml()),
                        Err(_) => self.out.push_str(&escape_text(
                            &record
                                .authors()
                                .first()
                                .map(|a| a.sort_name())
                                .unwrap_or_default(),
                        )),
                    },
                    CitSource::Ref(t) => self.inline(&Inline::BiblRef {
                        target: t.clone(),
                        text: t.as_str().into(),
                    }),
                }
                self.out.push_str("</footer>\n");
                if let Some(q) = &c.qualifiers {
                    self.para(Some("tj-cit-note"), q);
                }
                self.out.push_str("</blockquote>\n");
            }
            Block::Figure(f) => {
                self.out.push_str("<figure class=\"tj-figure\">\n");
                if let Some(g) = &f.graphic {
                    let _ = writeln!(self.out, "<img src=\"{}\" alt=\"\"/>", escape_attr(g));
                }
                if let Some(c) = &f.caption {
                    self.out.push_str("<figcaption>");
                    self.inlines(c);
                    self.out.push_str("</figcaption>\n");
                }
                self.out.push_str("</figure>\n");
            }
            Block::Table(t) => self.table(t),
            Block::Formula(f) => {
                let _ = writeln!(
                    self.out,
                    "<p class=\"tj-formula\">{}</p>",
                    escape_text(&normalize_space(&f.text))
                );
            }
            Block::List(l) => {
                self.out.push_str("<ul class=\"tj-list\">\n");
                for item in &l.items {
                    self.out.push_str("<li>");
                    self.inlines(item);
                    self.out.push_str("</li>\n");
                }
                self.out.push_str("</ul>\n");
            }
            Block::Opaque(op) => {
                let _ = writeln!(
                    self.out,
                    "<div class=\"tj-opaque\">{}</div>",
                    escape_text(&normalize_space(&op.text))
                );
            }
        }
    }

    fn table(&mut self, t: &TableBlock) {
        self.out.push_str("<table class=\"tj-table\">\n");
        if let Some(c) = &t.caption {
            let _ = writeln!(
                self.out,
                "<caption>{}</caption>",
                escape_text(&normalize_space(c))
            );
        }
        match table_rows(t) {
            Some(rows) => {
                for r in rows {
                    self.out.push_str("<tr>");
                    for (cell, label) in r {
                        let tag = if label { "th" } else { "td" };
                        let _ = write!(self.out, "<{tag}>{}</{tag}>", escape_text(&cell));
                    }
                    self.out.push_str("</tr>\n");
                }
            }
            None => {
                let _ = writeln!(
                    self.out,
                    "<tr><td>{}</td></tr>",
                    escape_text(&normalize_space(&t.text))
                );
            }
        }
        self.out.push_str("</table>\n");
    }
}

fn span(o: &mut String, class: &str, text: &str) {
    let _ = write!(o, "<span class=\"{class}\">{}</span>", escape_text(text));
}

/// Renders `a` as a standalone, well-formed XHTML document.
pub fn render_xhtml(a: &Article, g: &StyleGuide) -> String {
    let cites = Apparatus::new(a, g);
    let mut h = Html {
        out: String::new(),
        cites: &cites,
        style: g,
    };
    let title = a.main_title().cloned().or_else(|| {
        a.source()
            .and_then(|s| s.main_title())
            .map(|t| t.text.clone())
    });
    let title_text = title.as_ref().map(normalize_title).unwrap_or_default();
    let lang = a
        .header
        .profile_desc
        .languages
        .first()
        .map(String::as_str)
        .unwrap_or("en");
    h.out
        .push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        h.out,
        "<html xmlns=\"http://www.w3.org/1999/xhtml\" lang=\"{0}\" xml:lang=\"{0}\">",
        escape_attr(lang)
    );
    let _ = writeln!(
        h.out,
        "<head>\n<meta http-equiv=\"Content-Type\" content=\"text/html; charset=UTF-8\"/>\n<title>{}</title>\n</head>",
        escape_text(&title_text)
    );
    let _ = writeln!(
        h.out,
        "<body>\n<article class=\"tj-article\" data-style=\"{}\">",
        escape_attr(&g.id)
    );
    h.out.push_str("<h1 class=\"tj-title\">");
    if let Some(t) = &title {
        h.inlines(t);
    }
    h.out.push_str("</h1>\n");

    let authors = a
        .source()
        .and_then(|s| s.analytic.as_ref())
        .map(|an| an.authors.as_slice())
        .unwrap_or_default();
    if !authors.is_empty() {
        h.out.push_str("<div class=\"tj-authors\">\n");
        for au in authors {
            let name = if au.is_organisation() {
                au.surname.clone()
            } else {
                format!("{} {}", au.forenames.join(" "), au.surname)
            };
            let _ = write!(
                h.out,
                "<p class=\"tj-author\"><span class=\"tj-name\">{}</span>",
                escape_text(&normalize_space(&name))
            );
            if let Some(af) = &au.affiliation {
                let _ = write!(
                    h.out,
                    " <span class=\"tj-affiliation\">{}</span>",
                    escape_text(&affiliation_line(af))
                );
            }
            if let Some(e) = &au.email {
                let _ = write!(
                    h.out,
                    " <a class=\"tj-email\" href=\"mailto:{0}\">{1}</a>",
                    escape_attr(e),
                    escape_text(e)
                );
            }
            h.out.push_str("</p>\n");
        }
        h.out.push_str("</div>\n");
    }
    let kws = &a.header.profile_desc.keywords;
    if !kws.is_empty() {
        h.out.push_str("<ul class=\"tj-keywords\">\n");
        for k in kws {
            let _ = writeln!(h.out, "<li>{}</li>", escape_text(&normalize_space(&k.term)));
        }
        h.out.push_str("</ul>\n");
    }
    for d in &a.front {
        h.division(
            d,
            1,
            if d.kind == "abstract" {
                "tj-abstract"
            } else {
                "tj-section"
            },
        );
    }
    for d in a.body.iter().chain(&a.back.divisions) {
        h.division(d, 1, "tj-section");
    }
    if !a.back.notes.is_empty() {
        h.out.push_str("<ol class=\"tj-notes\">\n");
        for n in &a.back.notes {
            h.out.push_str("<li>");
            h.inlines(n);
            h.out.push_str("</li>\n");
        }
        h.out.push_str("</ol>\n");
    }
    if !cites.list.is_empty() {
        let tag = if g.marker_scheme == MarkerScheme::NumericBracket {
            "ol"
        } else {
            "ul"
        };
        let _ = writeln!(
            h.out,
            "<section class=\"tj-references\">\n<h2>References</h2>\n<{tag} class=\"tj-biblio\">"
        );
        for e in &cites.list {
            h.out.push_str("<li class=\"tj-biblio-entry\"");
            if let Some(id) = &e.entry.id {
                let _ = write!(h.out, " id=\"ref-{}\"", escape_attr(id));
            }
            h.out.push('>');
            if let Some(l) = &e.label {
                let _ = write!(h.out, "<span class=\"tj-label\">{}</span> ", escape_text(l));
            }
            h.out.push_str(&e.entry.to_xhtml());
            h.out.push_str("</li>\n");
        }
        let _ = writeln!(h.out, "</{tag}>\n</section>");
    }
    h.out.push_str("</article>\n</body>\n</html>\n");
    h.out
}
