// Parse an article, inspect the model, and write it back canonically.

use tj_core::model::{document_date, normalize_title};
use tj_core::xml::{parse_article, serialize_article};

const SKELETON: &str = include_str!("../tests/fixtures/skeleton.xml");

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let report = parse_article(SKELETON.as_bytes());
    for issue in &report.issues {
        println!(
            "{} at {}: {}",
            issue.severity, issue.location, issue.message
        );
    }
    let article = report.outcome.ok_or("skeleton did not parse")?;
    println!("id: {}", article.id);
    println!(
        "title: {}",
        article
            .main_title()
            .map(normalize_title)
            .unwrap_or_default()
    );
    if let Some(d) = document_date(&article) {
        println!("published: {d}");
    }
    for a in article.source().map(|b| b.authors()).unwrap_or_default() {
        println!("author: {}", a.sort_name());
    }

    let canonical = serialize_article(&article);
    let again = parse_article(&canonical)
        .outcome
        .ok_or("canonical form did not parse")?;
    assert_eq!(again, article);
    assert_eq!(serialize_article(&again), canonical);
    println!(
        "canonical form: {} bytes, stable under re-parse",
        canonical.len()
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
