use textwrap::{Options, WordSeparator, WordSplitter};

use super::{Apparatus, StyleGuide, affiliation_line, format_entry, table_rows};
use crate::model::*;

const WIDTH: usize = 78;

/// Wraps at spaces only, so URLs and hyphenated words stay whole.
fn options() -> Options<'static> {
    Options::new(WIDTH)
        .break_words(false)
        .word_separator(WordSeparator::AsciiSpace)
        .word_splitter(WordSplitter::NoHyphenation)
}

struct Text<'a> {
    out: String,
    cites: &'a Apparatus,
    style: &'a StyleGuide,
}

impl Text<'_> {
    fn flatten(&self, t: &RichText, out: &mut String) {
        for i in t {
            match i {
                Inline::Emph { content, .. } => self.flatten(content, out),
                Inline::BiblRef { target, text } => {
                    out.push_str(self.cites.marker(target).map(|(_, m)| m).unwrap_or(text));
                }
                other => out.push_str(&RichText::new(vec![other.clone()]).plain_text()),
            }
        }
    }

    fn plain(&self, t: &RichText) -> String {
        let mut s = String::new();
        self.flatten(t, &mut s);
        normalize_space(&s)
    }

    fn wrapped(&mut self, s: &str, first: &str, rest: &str) {
        if s.is_empty() {
            return;
        }
        let opts = options().initial_indent(first).subsequent_indent(rest);
        for line in textwrap::wrap(s, opts) {
            self.out.push_str(line.trim_end());
            self.out.push('\n');
        }
        self.out.push('\n');
    }

    fn heading(&mut self, s: &str, underline: char) {
        let lines = textwrap::wrap(s, options());
        let width = lines.iter().map(|l| l.chars().count()).max().unwrap_or(0);
        for l in &lines {
            self.out.push_str(l);
            self.out.push('\n');
        }
        self.out.extend(std::iter::repeat_n(underline, width));
        self.out.push_str("\n\n");
    }

    fn division(&mut self, d: &Division, depth: usize) {
        let head = match &d.head {
            Some(h) => self.plain(h),
            None if d.kind == "abstract" => "Abstract".into(),
            None => String::new(),
        };
        if !head.is_empty() {
            self.heading(&head, if depth <= 1 { '=' } else { '-' });
        }
        for b in &d.blocks {
            self.block(b);
        }
        for c in &d.children {
            self.division(c, depth + 1);
        }
    }

    fn block(&mut self, b: &Block) {
        match b {
            Block::Paragraph(t) => {
                let s = self.plain(t);
                self.wrapped(&s, "", "");
            }
            Block::Quote(t) => {
                let s = self.plain(t);
                self.wrapped(&s, "    ", "    ");
            }
            Block::Cit(c) => {
                let q = self.plain(&c.quote);
                let source = match &c.source {
                    CitSource::Embedded(r) => format_entry(r, self.style)
                        .map(|e| e.to_plain())
                        .unwrap_or_default(),
                    CitSource::Ref(t) => self
                        .cites
                        .marker(t)
                        .map(|(_, m)| m.to_string())
                        .unwrap_or_else(|| t.as_str().into()),
                };
                self.wrapped(&q, "    ", "    ");
                if !source.is_empty() {
                    self.wrapped(&format!("-- {source}"), "    ", "       ");
                }
                if let Some(n) = &c.qualifiers {
                    let s = self.plain(n);
                    self.wrapped(&s, "    ", "    ");
                }
            }
            Block::Figure(f) => {
                let caption = f
                    .caption
                    .as_ref()
                    .map(|c| self.plain(c))
                    .unwrap_or_default();
                let label = match (&f.graphic, caption.is_empty()) {
                    (Some(g), true) => format!("[Figure: {g}]"),
                    (_, false) => format!("[Figure: {caption}]"),
                    (None, true) => "[Figure]".into(),
                };
                self.wrapped(&label, "", "");
            }
            Block::Table(t) => {
                if let Some(c) = &t.caption {
                    self.wrapped(&format!("Table: {}", normalize_space(c)), "", "");
                }
                match table_rows(t) {
                    Some(rows) => {
                        for r in rows {
                            let cells: Vec<String> = r.into_iter().map(|(c, _)| c).collect();
                            self.out.push_str(&textwrap::fill(
                                &cells.join(" | "),
                                options().initial_indent("    ").subsequent_indent("      "),
                            ));
                            self.out.push('\n');
                        }
                        self.out.push('\n');
                    }
                    None => self.wrapped(&normalize_space(&t.text), "    ", "    "),
                }
            }
            Block::Formula(f) => self.wrapped(&normalize_space(&f.text), "    ", "    "),
            Block::List(l) => {
                for item in &l.items {
                    let s = self.plain(item);
                    self.wrapped(&s, "  - ", "    ");
                }
            }
            Block::Opaque(o) => self.wrapped(&normalize_space(&o.text), "", ""),
        }
    }
}

/// Plain text under `g`: title, authors, keywords, sections with
/// underlined headings, then the reference list. Lines wrap at 78 columns.
pub fn render_text(a: &Article, g: &StyleGuide) -> String {
    let cites = Apparatus::new(a, g);
    let mut t = Text {
        out: String::new(),
        cites: &cites,
        style: g,
    };
    let title = a.main_title().map(normalize_title).unwrap_or_default();
    if !title.is_empty() {
        t.wrapped(&title, "", "");
    }
    let authors = a
        .source()
        .and_then(|s| s.analytic.as_ref())
        .map(|an| an.authors.as_slice())
        .unwrap_or_default();
    for au in authors {
        let mut line = normalize_space(&format!("{} {}", au.forenames.join(" "), au.surname));
        if let Some(af) = au
            .affiliation
            .as_ref()
            .map(affiliation_line)
            .filter(|s| !s.is_empty())
        {
            line.push_str(&format!(" ({af})"));
        }
        t.wrapped(&line, "", "    ");
    }
    let kws: Vec<String> = a
        .header
        .profile_desc
        .keywords
        .iter()
        .map(|k| normalize_space(&k.term))
        .collect();
    if !kws.is_empty() {
        t.wrapped(&format!("Keywords: {}", kws.join("; ")), "", "    ");
    }
    for d in a.front.iter().chain(&a.body).chain(&a.back.divisions) {
        t.division(d, 1);
    }
    if !a.back.notes.is_empty() {
        t.heading("Notes", '=');
        for (i, n) in a.back.notes.iter().enumerate() {
            let s = format!("{}. {}", i + 1, t.plain(n));
            t.wrapped(&s, "", "    ");
        }
    }
    if !cites.list.is_empty() {
        t.heading("References", '=');
        for e in &cites.list {
            let s = match &e.label {
                Some(l) => format!("{l} {}", e.entry.to_plain()),
                None => e.entry.to_plain(),
            };
            t.wrapped(&s, "", "    ");
        }
    }
    while t.out.ends_with("\n\n") {
        t.out.pop();
    }
    t.out
}

/// Plain text with numeric `[n]` citations and Chicago-layout references.
pub fn render_plaintext(a: &Article) -> String {
    render_text(a, &StyleGuide::chicago())
}
