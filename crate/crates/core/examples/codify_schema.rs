// Infer a restricted schema from example documents and check new
// submissions against it, with the shipped base schema as escape hatch.

use tj_core::schema::{CodifyOptions, RestrictedSchema, codify, profile_corpus, validate_against};
use tj_core::xml::XmlDocument;

const SKELETON: &str = include_str!("../tests/fixtures/skeleton.xml");
const FULL: &str = include_str!("../tests/fixtures/article-full.xml");

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = [
        XmlDocument::parse_str(SKELETON)?,
        XmlDocument::parse_str(FULL)?,
    ];
    let schema = codify(&profile_corpus(&corpus), &CodifyOptions::default())?;
    println!("{} elements, root {:?}", schema.elements.len(), schema.root);
    if let Some(scope) = schema
        .elements
        .get("biblScope")
        .and_then(|e| e.attributes.get("type"))
    {
        println!("biblScope@type values: {:?}", scope.values);
    }
    for d in &corpus {
        assert!(validate_against(&schema, d, None).is_empty());
    }

    let submission = SKELETON.replace("<p>Age related", "<p>Age related<lb/>");
    let doc = XmlDocument::parse_str(&submission)?;
    for f in validate_against(&schema, &doc, None) {
        println!(
            "strict: {} {} at {}: {}",
            f.severity, f.code, f.location, f.message
        );
    }
    let base = RestrictedSchema::base();
    for f in validate_against(&schema, &doc, Some(&base)) {
        println!(
            "with base: {} {} at {}: {}",
            f.severity, f.code, f.location, f.message
        );
    }

    let json = schema.to_json();
    assert_eq!(RestrictedSchema::from_json(&json)?, schema);
    println!("schema file: {} bytes", json.len());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
