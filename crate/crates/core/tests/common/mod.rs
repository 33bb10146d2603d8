#![allow(dead_code)]

pub mod corpus;
pub mod oracle;

use tj_core::model::*;
use tj_core::schema::RestrictedSchema;
use tj_core::xml::parse_article;

pub const SKELETON: &str = include_str!("../fixtures/skeleton.xml");
pub const FULL: &str = include_str!("../fixtures/article-full.xml");

pub fn parse_ok(src: &[u8]) -> Article {
    let r = parse_article(src);
    assert!(!r.has_errors(), "{:?}", r.issues);
    r.outcome.unwrap()
}

pub fn skeleton() -> Article {
    parse_ok(SKELETON.as_bytes())
}

fn source(a: &mut Article) -> &mut BiblStruct {
    &mut a
        .header
        .file_desc
        .as_mut()
        .unwrap()
        .source_desc
        .as_mut()
        .unwrap()
        .records[0]
}

fn first_author(a: &mut Article) -> &mut Author {
    &mut source(a).analytic.as_mut().unwrap().authors[0]
}

/// One single-field mutation per rule, each breaking exactly that rule on
/// the skeleton.
pub type Mutation = (&'static str, fn(&mut Article));

pub fn mutations() -> Vec<Mutation> {
    vec![
        ("R1", |a| {
            a.header.file_desc.as_mut().unwrap().publication_stmt = None
        }),
        ("R2", |a| {
            let sd = a
                .header
                .file_desc
                .as_mut()
                .unwrap()
                .source_desc
                .as_mut()
                .unwrap();
            sd.records.push(sd.records[0].clone());
        }),
        ("R3", |a| {
            let ts = a
                .header
                .file_desc
                .as_mut()
                .unwrap()
                .title_stmt
                .as_mut()
                .unwrap();
            ts.main_title = Some(RichText::plain(
                "Multilocus Analysis of Age Related Retinal Degeneration",
            ));
        }),
        ("R4", |a| {
            source(a).monogr.titles.retain(|t| t.kind != "main")
        }),
        ("R5", |a| {
            source(a).monogr.imprint.scopes[0].kind = "chapter".into()
        }),
        ("R6", |a| first_author(a).email = None),
        ("R7", |a| {
            first_author(a).affiliation.as_mut().unwrap().org_units[0].kind = "faculty".into()
        }),
        ("R8", |a| a.body.clear()),
        ("R9", |a| {
            let Block::Paragraph(p) = &mut a.body[0].blocks[0] else {
                panic!("body starts with a paragraph")
            };
            let mut inl: Vec<Inline> = p.iter().cloned().collect();
            inl.push(Inline::BiblRef {
                target: RefTarget::new("#b7"),
                text: "[7]".into(),
            });
            *p = RichText::new(inl);
        }),
        ("R10", |a| a.header.revision_desc.changes.reverse()),
        ("R11", |a| a.header.profile_desc.keywords.clear()),
        ("R12", |a| {
            let mut entry = source(a).clone();
            entry.analytic = None;
            entry.monogr.titles.clear();
            entry.xml_id = Some("b1".into());
            a.back.reference_list = Some(ListBibl {
                entries: vec![entry],
            });
        }),
    ]
}

pub const GOLDEN_RECORDS: &str = include_str!("../fixtures/golden-records.xml");
pub const GOLDEN_ENTRIES: &str = include_str!("../fixtures/golden-entries.tsv");

/// The skeleton with `back_xml` (TEI elements, namespace implied) as its back matter.
pub fn skeleton_with_back(back_xml: &str) -> String {
    let back = back_xml.replace(" xmlns=\"http://www.tei-c.org/ns/1.0\"", "");
    let out = SKELETON.replace(
        "<back>\n    </back>",
        &format!("<back>\n{back}\n    </back>"),
    );
    assert_ne!(out, SKELETON);
    out
}

/// The skeleton whose reference list holds the golden records.
pub fn golden_article() -> Article {
    parse_ok(skeleton_with_back(GOLDEN_RECORDS).as_bytes())
}

/// (style, record id, expected) rows of the golden table.
pub fn golden_rows() -> Vec<(&'static str, &'static str, &'static str)> {
    GOLDEN_ENTRIES
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let mut f = l.splitn(3, '\t');
            (f.next().unwrap(), f.next().unwrap(), f.next().unwrap())
        })
        .collect()
}

/// The skeleton with a reference list b1..b3 and one paragraph citing
/// `order`, in that order.
pub fn citing_article(order: &[&str]) -> Article {
    let entry = |id: &str, surname: &str, title: &str, year: u32| {
        format!(
            r#"<biblStruct type="book" xml:id="{id}"><monogr><author><persName><forename>A</forename><surname>{surname}</surname></persName></author><title level="m" type="main">{title}</title><imprint><publisher>P</publisher><date when="{year}"/></imprint></monogr></biblStruct>"#
        )
    };
    let list = format!(
        "<listBibl>{}{}{}</listBibl>",
        entry("b1", "Alpha", "First Work", 2001),
        entry("b2", "Beta", "Second Work", 2002),
        entry("b3", "Gamma", "Third Work", 2003)
    );
    let refs: String = order
        .iter()
        .map(|id| format!(" see <ref type=\"bibl\" target=\"#{id}\">{id}</ref>"))
        .collect();
    let src = skeleton_with_back(&list).replace(
        "<p>Age related macular degeneration is a common cause of vision loss.</p>",
        &format!("<p>Age related macular degeneration is a common cause of vision loss.{refs}</p>"),
    );
    parse_ok(src.as_bytes())
}

/// Constructs permitted by `small` that `big` does not permit.
pub fn not_permitted(small: &RestrictedSchema, big: &RestrictedSchema) -> Vec<String> {
    let mut out = Vec::new();
    for (name, rule) in &small.elements {
        let Some(wide) = big.elements.get(name) else {
            out.push(format!("element {name}"));
            continue;
        };
        for c in rule.children.iter().filter(|c| !wide.children.contains(*c)) {
            out.push(format!("child {name}/{c}"));
        }
        if rule.text && !wide.text {
            out.push(format!("text in {name}"));
        }
        for (attr, a) in &rule.attributes {
            let Some(w) = wide.attributes.get(attr) else {
                out.push(format!("attribute {name}@{attr}"));
                continue;
            };
            match (&a.values, &w.values) {
                (_, None) => {}
                (None, Some(_)) => out.push(format!("open values {name}@{attr}")),
                (Some(vs), Some(ws)) => {
                    out.extend(
                        vs.difference(ws)
                            .map(|v| format!("value {name}@{attr}={v}")),
                    );
                }
            }
        }
    }
    out.extend(
        small
            .foreign
            .difference(&big.foreign)
            .map(|f| format!("foreign {f}")),
    );
    out
}
