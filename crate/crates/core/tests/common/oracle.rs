//! Brute-force scan over raw XML trees, independent of the article model.

use rand::prelude::*;
use rand::rngs::StdRng;
use roxmltree::{Document, Node};
use tj_core::corpus::{Corpus, Query, query};
use tj_core::model::CalendarDate;

pub struct OracleDoc {
    pub id: String,
    pub date: Option<String>,
    pub cited_surnames: Vec<String>,
    /// (kind token, printed path, normalized text)
    pub nodes: Vec<(String, String, String)>,
}

pub struct OracleQuery {
    pub kind: Option<String>,
    pub text: Option<String>,
    pub from: Option<String>,
    pub to: Option<String>,
    pub cites: Option<String>,
}

fn norm(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn text_without_expan(n: Node, out: &mut String) {
    for c in n.children() {
        if c.is_text() {
            out.push_str(c.text().unwrap_or_default());
        } else if c.is_element() && c.tag_name().name() != "expan" {
            text_without_expan(c, out);
        }
    }
}

fn flat(n: Node) -> String {
    let mut s = String::new();
    text_without_expan(n, &mut s);
    norm(&s)
}

fn path_of(n: Node) -> String {
    let mut steps = Vec::new();
    for a in n.ancestors().filter(|a| a.is_element()) {
        let name = a.tag_name().name();
        // prev_siblings yields the node itself first
        let index = a
            .prev_siblings()
            .filter(|s| s.is_element() && s.tag_name().name() == name)
            .count();
        steps.push(format!("{name}[{index}]"));
    }
    steps.reverse();
    steps.join("/")
}

fn has_ancestor(n: Node, name: &str) -> bool {
    n.ancestors().skip(1).any(|a| a.has_tag_name(name))
}

fn child<'a, 'i>(n: Node<'a, 'i>, name: &str) -> Option<Node<'a, 'i>> {
    n.children().find(|c| c.has_tag_name(name))
}

fn chain<'a, 'i>(n: Node<'a, 'i>, names: &[&str]) -> Option<Node<'a, 'i>> {
    names.iter().try_fold(n, |n, name| child(n, name))
}

pub fn scan(xml: &str) -> OracleDoc {
    let doc = Document::parse(xml).unwrap();
    let root = doc.root_element();
    let source = chain(root, &["teiHeader", "fileDesc", "sourceDesc", "biblStruct"]).unwrap();
    let id = source
        .children()
        .find(|c| c.has_tag_name("idno") && c.attribute("type") == Some("DOI"))
        .and_then(|c| c.text())
        .unwrap()
        .to_string();
    let date = chain(source, &["monogr", "imprint", "date"])
        .and_then(|d| d.attribute("when"))
        .map(String::from);
    let cited_surnames = root
        .descendants()
        .filter(|n| n.has_tag_name("surname") && has_ancestor(*n, "listBibl"))
        .map(|n| n.text().unwrap_or_default().trim().to_lowercase())
        .collect();

    let mut nodes = Vec::new();
    let mut push =
        |kind: &str, n: Node, text: String| nodes.push((kind.to_string(), path_of(n), text));
    if let Some(t) = chain(root, &["teiHeader", "fileDesc", "titleStmt", "title"]) {
        push("title", t, flat(t));
    }
    if let Some(an) = child(source, "analytic") {
        for au in an.children().filter(|c| c.has_tag_name("author")) {
            let pn = child(au, "persName").unwrap();
            let fore: Vec<&str> = pn
                .children()
                .filter(|c| c.has_tag_name("forename"))
                .filter_map(|c| c.text())
                .collect();
            let sur = child(pn, "surname")
                .and_then(|s| s.text())
                .unwrap_or_default();
            push("author", au, norm(&format!("{} {sur}", fore.join(" "))));
        }
    }
    for n in root.descendants().filter(|n| n.is_element()) {
        if n.has_tag_name("term") && has_ancestor(n, "keywords") {
            push("keyword", n, flat(n));
        }
        if !has_ancestor(n, "text") || has_ancestor(n, "biblStruct") {
            continue;
        }
        match n.tag_name().name() {
            "persName" => push("person", n, flat(n)),
            "orgName" => push("organization", n, flat(n)),
            "placeName" => push("place", n, flat(n)),
            "term" if n.attribute("type") == Some("software") => push("software", n, flat(n)),
            "abbr" if !n.parent().is_some_and(|p| p.has_tag_name("choice")) => {
                push("abbreviation", n, flat(n))
            }
            "choice" => push("abbreviation", n, flat(child(n, "abbr").unwrap())),
            "head" | "p" | "item" | "quote" | "note" => push("text", n, flat(n)),
            _ => {}
        }
    }
    OracleDoc {
        id,
        date,
        cited_surnames,
        nodes,
    }
}

/// (article id, path, snippet) triples, sorted.
pub fn run(docs: &[OracleDoc], q: &OracleQuery) -> Vec<(String, String, String)> {
    let mut out = Vec::new();
    for d in docs {
        if q.from.is_some() || q.to.is_some() {
            let Some(date) = &d.date else { continue };
            if q.from.as_ref().is_some_and(|f| date < f) || q.to.as_ref().is_some_and(|t| date > t)
            {
                continue;
            }
        }
        if let Some(s) = &q.cites
            && !d.cited_surnames.contains(&s.to_lowercase())
        {
            continue;
        }
        for (kind, path, text) in &d.nodes {
            let kind_ok = q.kind.as_ref().is_none_or(|k| k == "any" || k == kind);
            let text_ok = q
                .text
                .as_ref()
                .is_none_or(|t| text.to_lowercase().contains(&t.to_lowercase()));
            if kind_ok && text_ok {
                out.push((d.id.clone(), path.clone(), text.clone()));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

const KINDS: &[&str] = &[
    "any",
    "author",
    "person",
    "organization",
    "place",
    "software",
    "abbreviation",
    "keyword",
    "text",
    "title",
];
const NEEDLES: &[&str] = &[
    "dean",
    "brecht",
    "oslo",
    "institute",
    "tei",
    "saxon",
    "theatre",
    "the",
    "archives",
    "section",
    "synthetic",
    "la",
];
const SURNAMES: &[&str] = &["Dean", "brecht", "HOLM", "Tanaka", "Nobody"];

/// A random non-empty query in both representations.
pub fn random_query(rng: &mut StdRng) -> (Query, OracleQuery) {
    loop {
        let kind = rng
            .random_bool(0.7)
            .then(|| KINDS.choose(rng).unwrap().to_string());
        let text = rng
            .random_bool(0.6)
            .then(|| NEEDLES.choose(rng).unwrap().to_string());
        let range = rng.random_bool(0.4).then(|| {
            let y1 = rng.random_range(2004..=2012);
            let y2 = rng.random_range(y1..=2013);
            let (m1, m2) = (rng.random_range(1..=12u8), rng.random_range(1..=12u8));
            (
                CalendarDate::ymd(y1, m1, 1).unwrap(),
                CalendarDate::ymd(y2, m2, 28).unwrap(),
            )
        });
        let cites = rng
            .random_bool(0.3)
            .then(|| SURNAMES.choose(rng).unwrap().to_string());
        if kind.is_none() && text.is_none() && range.is_none() && cites.is_none() {
            continue;
        }
        let oq = OracleQuery {
            kind: kind.clone(),
            text: text.clone(),
            from: range.as_ref().map(|r| r.0.to_string()),
            to: range.as_ref().map(|r| r.1.to_string()),
            cites: cites.clone(),
        };
        let q = Query {
            element_kind: kind.map(|k| k.parse().unwrap()),
            text_predicate: text,
            date_range: range,
            cites_author_surname: cites,
        };
        return (q, oq);
    }
}

/// Runs `n` random queries against both engines; returns the number of
/// queries whose hit sets differ and the total number of hits seen.
pub fn compare(c: &Corpus, docs: &[OracleDoc], seed: u64, n: usize) -> (usize, usize) {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut mismatches = 0;
    let mut hits = 0;
    for _ in 0..n {
        let (q, oq) = random_query(&mut rng);
        let mut got: Vec<(String, String, String)> = query(c, &q)
            .unwrap()
            .into_iter()
            .map(|h| (h.article, h.path.to_string(), h.snippet))
            .collect();
        got.sort();
        let want = run(docs, &oq);
        hits += want.len();
        if got != want {
            if std::env::var("ORACLE_DEBUG").is_ok() && mismatches == 0 {
                let extra: Vec<_> = got.iter().filter(|g| !want.contains(g)).take(3).collect();
                let missing: Vec<_> = want.iter().filter(|w| !got.contains(w)).take(3).collect();
                eprintln!("{q:?}\nextra {extra:#?}\nmissing {missing:#?}");
            }
            mismatches += 1;
        }
    }
    (mismatches, hits)
}
