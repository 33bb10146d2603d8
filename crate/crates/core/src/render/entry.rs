use serde::{Deserialize, Serialize};

use super::{Invert, NameFormat, RenderError, Segment, StyleGuide, Typography};
use crate::model::*;
use crate::xml::escape_text;

/// A piece of a rendered entry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Span {
    Text {
        text: String,
        typography: Typography,
    },
    /// A page range; the separator depends on the output format.
    Range { first: String, last: String },
}

/// Sort key of an entry: first author's surname casefolded, year, title.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SortKey {
    pub surname: String,
    pub year: Option<i32>,
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderedEntry {
    pub id: Option<String>,
    pub spans: Vec<Span>,
    pub sort_key: SortKey,
}

impl RenderedEntry {
    /// Italic as `*x*`, quoted as `"x"`, page ranges with `-`.
    pub fn to_marked(&self) -> String {
        self.join(
            |t, ty| match ty {
                Typography::Italic => format!("*{t}*"),
                Typography::Quoted => format!("\"{t}\""),
                Typography::Plain => t.to_string(),
            },
            "-",
        )
    }

    /// Like [`to_marked`](Self::to_marked) without italic marks.
    pub fn to_plain(&self) -> String {
        self.join(
            |t, ty| match ty {
                Typography::Quoted => format!("\"{t}\""),
                _ => t.to_string(),
            },
            "-",
        )
    }

    /// Escaped XHTML fragment: italic as `<i>`, page ranges with an en dash.
    pub fn to_xhtml(&self) -> String {
        self.join(
            |t, ty| {
                let t = escape_text(t);
                match ty {
                    Typography::Italic => format!("<i>{t}</i>"),
                    Typography::Quoted => format!("\u{201c}{t}\u{201d}"),
                    Typography::Plain => t,
                }
            },
            "\u{2013}",
        )
    }

    fn join(&self, text: impl Fn(&str, Typography) -> String, dash: &str) -> String {
        let mut out = String::new();
        for s in &self.spans {
            match s {
                Span::Text {
                    text: t,
                    typography,
                } => out.push_str(&text(t, *typography)),
                Span::Range { first, last } => {
                    out.push_str(first);
                    out.push_str(dash);
                    out.push_str(last);
                }
            }
        }
        out
    }
}

enum Value {
    Text(String),
    Range(String, String),
}

#[derive(Default)]
struct Builder {
    spans: Vec<Span>,
}

impl Builder {
    fn last_char(&self) -> Option<char> {
        self.spans.iter().rev().find_map(|s| match s {
            Span::Text { text, .. } => text.chars().last(),
            Span::Range { last, .. } => last.chars().last(),
        })
    }

    /// Appends separator text: a period after sentence-final punctuation
    /// is dropped, a leading `.` or `,` after a quoted title moves inside
    /// the quotes, and a dangling `, ` or `: ` before a period is removed.
    fn punct(&mut self, s: &str) {
        let mut s = s;
        if s.is_empty() {
            return;
        }
        if s.starts_with('.') {
            if let Some(Span::Text {
                text,
                typography: Typography::Plain,
            }) = self.spans.last_mut()
            {
                let trimmed = text.trim_end().trim_end_matches([',', ':', ';']).trim_end();
                text.truncate(trimmed.len());
                if text.is_empty() {
                    self.spans.pop();
                }
            }
            if matches!(self.last_char(), Some('.' | '?' | '!')) {
                s = &s[1..];
            }
        }
        if s.starts_with(['.', ','])
            && let Some(Span::Text {
                text,
                typography: Typography::Quoted,
            }) = self.spans.last_mut()
        {
            text.push_str(&s[..1]);
            s = &s[1..];
        }
        self.push(s, Typography::Plain);
    }

    fn push(&mut self, s: &str, typography: Typography) {
        if s.is_empty() {
            return;
        }
        if typography == Typography::Plain
            && let Some(Span::Text {
                text,
                typography: Typography::Plain,
            }) = self.spans.last_mut()
        {
            text.push_str(s);
            return;
        }
        self.spans.push(Span::Text {
            text: s.to_string(),
            typography,
        });
    }

    fn finish(mut self) -> Vec<Span> {
        while let Some(Span::Text {
            text,
            typography: Typography::Plain,
        }) = self.spans.last_mut()
        {
            let trimmed = text.trim_end().trim_end_matches([',', ':', ';']).trim_end();
            text.truncate(trimmed.len());
            if !text.is_empty() {
                break;
            }
            self.spans.pop();
        }
        if let Some(Span::Text {
            text,
            typography: Typography::Plain,
        }) = self.spans.first_mut()
        {
            let trimmed = text.trim_start().to_string();
            *text = trimmed;
        }
        self.spans
    }
}

fn initials(forename: &str) -> String {
    forename
        .split('-')
        .filter_map(|part| part.chars().next())
        .map(|c| format!("{c}."))
        .collect::<Vec<_>>()
        .join("-")
}

fn format_name(a: &Author, format: NameFormat, inverted: bool) -> String {
    if a.is_organisation() {
        return a.surname.clone();
    }
    let given = match format {
        NameFormat::SurnameFirstInitials => a
            .forenames
            .iter()
            .map(|f| initials(f))
            .collect::<Vec<_>>()
            .join(" "),
        _ => a.forenames.join(" "),
    };
    if inverted && format != NameFormat::AsEncoded {
        format!("{}, {given}", a.surname)
    } else {
        format!("{given} {}", a.surname)
    }
}

fn format_authors(authors: &[Author], g: &StyleGuide) -> Option<String> {
    let l = &g.author_list;
    let name = |i: usize, a: &Author| {
        format_name(a, g.author_name_format, i == 0 || l.invert == Invert::All)
    };
    match authors {
        [] => None,
        [one] => Some(name(0, one)),
        [a, b] => Some(format!("{}{}{}", name(0, a), l.pair_separator, name(1, b))),
        [first, ..] if l.et_al_after.is_some_and(|n| authors.len() > n) => {
            Some(format!("{}, et al.", name(0, first)))
        }
        [init @ .., last] => {
            let head: Vec<String> = init.iter().enumerate().map(|(i, a)| name(i, a)).collect();
            Some(format!(
                "{}{}{}",
                head.join(&l.separator),
                l.last_separator,
                name(authors.len() - 1, last)
            ))
        }
    }
}

fn title_text(t: Option<&Title>) -> Option<String> {
    t.map(|t| normalize_title(&t.text))
        .filter(|s| !s.is_empty())
}

fn field(b: &BiblStruct, path: &str, g: &StyleGuide) -> Option<Value> {
    let imp = &b.monogr.imprint;
    let text = match path {
        "authors" => format_authors(b.authors(), g),
        "title" => title_text(b.main_title()),
        "analytic.title" => title_text(b.analytic.as_ref().and_then(Analytic::main_title)),
        "monogr.title" => title_text(b.monogr.main_title()),
        "imprint.publisher" => imp.publisher.clone(),
        "imprint.pub_place" => imp.pub_place.clone(),
        "imprint.year" => b.year().map(|y| y.to_string()),
        "scope.vol" => imp.scope("vol").map(str::to_string),
        "scope.issue" => imp.scope("issue").map(str::to_string),
        "scope.pages" => {
            return match (imp.scope("fpage"), imp.scope("lpage"), imp.scope("pp")) {
                (Some(f), Some(l), _) if f != l => Some(Value::Range(f.into(), l.into())),
                (Some(f), _, _) => Some(Value::Text(f.into())),
                (None, _, Some(pp)) => Some(Value::Text(pp.into())),
                _ => None,
            };
        }
        "idno.ISSN" => b
            .monogr
            .issn
            .clone()
            .or_else(|| b.identifier("ISSN").map(str::to_string)),
        "literal" => Some(String::new()),
        p => p
            .strip_prefix("idno.")
            .and_then(|k| b.identifier(k))
            .map(str::to_string),
    };
    text.map(|t| normalize_space(&t)).map(Value::Text)
}

fn sort_key(b: &BiblStruct) -> SortKey {
    let surname = b.authors().first().map(|a| a.surname.as_str());
    let title = title_text(b.main_title())
        .unwrap_or_default()
        .to_lowercase();
    SortKey {
        surname: surname
            .map(|s| normalize_space(s).to_lowercase())
            .unwrap_or_else(|| title.clone()),
        year: b.year(),
        title,
    }
}

/// Formats `b` with the layout for its record type. Without authors, the
/// first title segment moves to the front of the entry.
pub fn format_entry(b: &BiblStruct, g: &StyleGuide) -> Result<RenderedEntry, RenderError> {
    if title_text(b.main_title()).is_none() {
        return Err(RenderError::NoTitle);
    }
    let mut segs: Vec<&Segment> = g.layout_for(&b.doc_type).iter().collect();
    if b.authors().is_empty()
        && let Some(i) = segs
            .iter()
            .position(|s| s.path.ends_with("title") && field(b, &s.path, g).is_some())
    {
        let t = segs.remove(i);
        let at = segs.iter().position(|s| s.path == "authors").unwrap_or(0);
        segs.insert(at, t);
    }
    let mut out = Builder::default();
    for s in segs {
        let value = match field(b, &s.path, g) {
            Some(v) => v,
            None if s.omit_if_absent => continue,
            None => match &s.fallback {
                Some(f) => Value::Text(f.clone()),
                None => continue,
            },
        };
        out.punct(&s.prefix);
        match value {
            Value::Text(t) => out.push(&t, s.typography),
            Value::Range(first, last) => out.spans.push(Span::Range { first, last }),
        }
        out.punct(&s.suffix);
    }
    Ok(RenderedEntry {
        id: b.xml_id.clone(),
        spans: out.finish(),
        sort_key: sort_key(b),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn initials_of_compound_names() {
        assert_eq!(initials("Michael"), "M.");
        assert_eq!(initials("Jean-Paul"), "J.-P.");
    }

    #[test]
    fn author_lists() {
        let a = [
            Author::person(&["Anna"], "Lindqvist"),
            Author::person(&["Jon", "Erik"], "Holm"),
            Author::person(&["Kari"], "Berg"),
        ];
        assert_eq!(
            format_authors(&a[..2], &StyleGuide::apa()).unwrap(),
            "Lindqvist, A., & Holm, J. E."
        );
        assert_eq!(
            format_authors(&a[..2], &StyleGuide::chicago()).unwrap(),
            "Lindqvist, Anna, and Jon Erik Holm"
        );
        assert_eq!(
            format_authors(&a, &StyleGuide::chicago()).unwrap(),
            "Lindqvist, Anna, Jon Erik Holm, and Kari Berg"
        );
        assert_eq!(
            format_authors(&a, &StyleGuide::mla()).unwrap(),
            "Lindqvist, Anna, et al."
        );
        assert_eq!(
            format_authors(&a, &StyleGuide::apa()).unwrap(),
            "Lindqvist, A., Holm, J. E., & Berg, K."
        );
        let org = Author {
            surname: "The Animal Consortium".into(),
            ..Default::default()
        };
        assert_eq!(
            format_authors(&[org], &StyleGuide::apa()).unwrap(),
            "The Animal Consortium"
        );
    }

    #[test]
    fn punctuation_rules() {
        let mut b = Builder::default();
        b.push("Why?", Typography::Italic);
        b.punct(". ");
        b.push("Next", Typography::Quoted);
        b.punct(", x, ");
        b.punct(".");
        let e = RenderedEntry {
            id: None,
            spans: b.finish(),
            sort_key: sort_key(&BiblStruct::default()),
        };
        assert_eq!(e.to_marked(), "*Why?* \"Next,\" x.");
    }

    #[test]
    fn title_first_fallback_and_no_title() {
        let mut b = BiblStruct {
            doc_type: DocumentType::new("book"),
            ..Default::default()
        };
        assert_eq!(
            format_entry(&b, &StyleGuide::apa()),
            Err(RenderError::NoTitle)
        );
        b.monogr
            .titles
            .push(Title::new("m", "main", "Anonymous Pamphlet"));
        b.monogr.imprint.publisher = Some("Nordic Press".into());
        for g in [StyleGuide::apa(), StyleGuide::chicago(), StyleGuide::mla()] {
            let s = format_entry(&b, &g).unwrap().to_marked();
            assert!(s.starts_with("*Anonymous Pamphlet*"), "{}: {s}", g.id);
        }
    }
}
