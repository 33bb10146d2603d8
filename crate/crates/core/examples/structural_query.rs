// Search inside particular kinds of element: a person search ignores
// the same word in running prose.

use tj_core::corpus::{Query, load_dir, query};
use tj_core::model::CalendarDate;

const SKELETON: &str = include_str!("../tests/fixtures/skeleton.xml");
const FULL: &str = include_str!("../tests/fixtures/article-full.xml");

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let prose = SKELETON.replace("vision loss.", "vision loss, as the dean noted.");
    std::fs::write(dir.path().join("a.xml"), prose)?;
    std::fs::write(dir.path().join("b.xml"), FULL)?;
    let corpus = load_dir(dir.path())?;

    let people = Query {
        element_kind: Some("person".parse()?),
        text_predicate: Some("dean".into()),
        ..Default::default()
    };
    for h in query(&corpus, &people)? {
        println!("person: {} {} {:?}", h.article, h.path, h.snippet);
    }
    let anywhere = Query {
        text_predicate: Some("dean".into()),
        ..Default::default()
    };
    println!("anywhere: {} hits", query(&corpus, &anywhere)?.len());

    let citing_brecht = Query {
        date_range: Some((CalendarDate::parse("2008")?, CalendarDate::parse("2010")?)),
        cites_author_surname: Some("brecht".into()),
        element_kind: Some("title".parse()?),
        ..Default::default()
    };
    for h in query(&corpus, &citing_brecht)? {
        println!("cites Brecht: {} {:?}", h.article, h.snippet);
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
