use std::fmt::Write;

use serde::Serialize;

use super::{CorrigendaEntry, Hit, IndexEntry, IndexKind, UnifiedEntry};
use crate::model::{RichText, normalize_space};
use crate::render::{StyleGuide, format_entry};
use crate::xml::{escape_attr, escape_text};

/// Pretty JSON with object keys sorted.
fn sorted_json<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("products serialize");
    let mut s = serde_json::to_string_pretty(&value).expect("values serialize");
    s.push('\n');
    s
}

fn page(class: &str, title: &str, body: &str) -> String {
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<html xmlns=\"http://www.w3.org/1999/xhtml\">\n<head>\n<meta http-equiv=\"Content-Type\" content=\"text/html; charset=UTF-8\"/>\n<title>{t}</title>\n</head>\n<body>\n<section class=\"{class}\">\n<h1>{t}</h1>\n{body}</section>\n</body>\n</html>\n",
        t = escape_text(title)
    )
}

pub fn index_xhtml(entries: &[IndexEntry]) -> String {
    let mut body = String::new();
    for kind in IndexKind::ALL {
        let of_kind: Vec<&IndexEntry> = entries.iter().filter(|e| e.kind == kind).collect();
        if of_kind.is_empty() {
            continue;
        }
        let _ = writeln!(body, "<h2>{kind}</h2>\n<dl class=\"tj-index-{kind}\">");
        for e in of_kind {
            let _ = writeln!(body, "<dt>{}</dt>", escape_text(&e.display));
            for l in &e.locators {
                let _ = writeln!(
                    body,
                    "<dd><span class=\"tj-article-id\">{}</span> <code>{}</code></dd>",
                    escape_text(&l.article),
                    escape_text(&l.path.to_string())
                );
            }
        }
        body.push_str("</dl>\n");
    }
    page("tj-index", "Index", &body)
}

pub fn index_json(entries: &[IndexEntry]) -> String {
    sorted_json(&entries)
}

pub fn unibib_xhtml(entries: &[UnifiedEntry], g: &StyleGuide) -> String {
    let mut body = String::from("<ul class=\"tj-biblio\">\n");
    for e in entries {
        let text = match format_entry(&e.record, g) {
            Ok(r) => r.to_xhtml(),
            Err(_) => escape_text(
                &e.record
                    .authors()
                    .first()
                    .map(|a| a.sort_name())
                    .unwrap_or_default(),
            ),
        };
        let cited: Vec<String> = e.citing.iter().map(|c| escape_text(c)).collect();
        let _ = writeln!(
            body,
            "<li class=\"tj-biblio-entry\">{text} <span class=\"tj-cited-by\" data-count=\"{}\">{}</span></li>",
            e.citing.len(),
            cited.join(", ")
        );
    }
    body.push_str("</ul>\n");
    page("tj-unibib", "Bibliography", &body)
}

pub fn unibib_json(entries: &[UnifiedEntry]) -> String {
    sorted_json(&entries)
}

fn rich(t: &RichText) -> String {
    escape_text(&normalize_space(&t.plain_text()))
}

pub fn corrigenda_xhtml(entries: &[CorrigendaEntry]) -> String {
    let mut body = String::from("<ul>\n");
    for e in entries {
        let _ = writeln!(
            body,
            "<li><time datetime=\"{0}\">{0}</time> <span class=\"tj-article-id\">{1}</span>: {2}</li>",
            escape_attr(&e.when.to_string()),
            escape_text(&e.article),
            rich(&e.description)
        );
    }
    body.push_str("</ul>\n");
    page("tj-corrigenda", "Corrigenda", &body)
}

pub fn corrigenda_json(entries: &[CorrigendaEntry]) -> String {
    sorted_json(&entries)
}

pub fn hits_xhtml(hits: &[Hit]) -> String {
    let mut body = String::from("<ul>\n");
    for h in hits {
        let _ = writeln!(
            body,
            "<li><span class=\"tj-article-id\">{}</span> <code>{}</code>: {}</li>",
            escape_text(&h.article),
            escape_text(&h.path.to_string()),
            escape_text(&h.snippet)
        );
    }
    body.push_str("</ul>\n");
    page("tj-query", "Query results", &body)
}

pub fn hits_json(hits: &[Hit]) -> String {
    sorted_json(&hits)
}
