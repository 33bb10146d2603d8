// Check an article against the editorial rules and tune severities.

use std::collections::BTreeMap;

use tj_core::model::RefTarget;
use tj_core::model::{Inline, RichText};
use tj_core::validate::{ValidatorConfig, explain, validate};
use tj_core::xml::{Severity, parse_article};

const SKELETON: &str = include_str!("../tests/fixtures/skeleton.xml");

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut article = parse_article(SKELETON.as_bytes())
        .outcome
        .ok_or("skeleton did not parse")?;
    let cfg = ValidatorConfig::default();
    let errors = validate(&article, &cfg)
        .into_iter()
        .filter(|f| f.severity == Severity::Error)
        .count();
    println!("skeleton: {errors} errors");

    let cite = Inline::BiblRef {
        target: RefTarget::new("#b7"),
        text: "[7]".into(),
    };
    article.body[0]
        .blocks
        .push(tj_core::model::Block::Paragraph(RichText::new(vec![
            Inline::text("As shown in "),
            cite,
        ])));
    article.header.profile_desc.keywords.clear();
    for f in validate(&article, &cfg) {
        println!(
            "{} {} at {}: {}",
            f.severity, f.rule_id, f.location, f.message
        );
    }

    let lenient = ValidatorConfig {
        severity_overrides: BTreeMap::from([("R9".into(), Severity::Warning)]),
        ..cfg
    };
    let errors = validate(&article, &lenient)
        .into_iter()
        .filter(|f| f.severity == Severity::Error)
        .count();
    println!("with R9 downgraded: {errors} errors");
    println!("{}", explain("R9")?);
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
