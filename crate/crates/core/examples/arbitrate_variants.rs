// Find attribute values that differ only in spelling, standardize on one,
// and watch the schema enumeration shrink.

use tj_core::schema::{
    CodifyOptions, arbitrate, codify, detect_variants, parse_rules, profile_corpus,
};
use tj_core::xml::XmlDocument;

const SKELETON: &str = include_str!("../tests/fixtures/skeleton.xml");

fn with_rend(rend: &str) -> String {
    SKELETON.replace(
        "is a common cause",
        &format!("is a <hi rend=\"{rend}\">common</hi> cause"),
    )
}

fn rend_values(docs: &[XmlDocument]) -> Result<Vec<String>, Box<dyn std::error::Error>> {
    let s = codify(&profile_corpus(docs), &CodifyOptions::default())?;
    let values = s.elements["hi"].attributes["rend"]
        .values
        .clone()
        .unwrap_or_default();
    Ok(values.into_iter().collect())
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let docs = vec![
        XmlDocument::parse_str(&with_rend("italic"))?,
        XmlDocument::parse_str(&with_rend("italics"))?,
    ];
    println!("rend values before: {:?}", rend_values(&docs)?);
    for c in detect_variants(&profile_corpus(&docs)) {
        println!(
            "{} @{}: {:?}, dominant {}",
            c.element,
            c.attribute,
            c.members,
            c.dominant()
        );
    }

    let rules = parse_rules("# standardize emphasis\nhi rend italics -> italic\n")?;
    let out = arbitrate(&docs, &rules)?;
    println!("{} rewrites", out.total_changes());
    let rewritten: Vec<XmlDocument> = out
        .documents
        .iter()
        .map(|d| XmlDocument::parse_str(d))
        .collect::<Result<_, _>>()?;
    println!("rend values after: {:?}", rend_values(&rewritten)?);
    assert!(detect_variants(&profile_corpus(&rewritten)).is_empty());

    let clash = parse_rules("hi rend italics -> italic\nhi rend italics -> emph\n")?;
    if let Err(e) = arbitrate(&docs, &clash) {
        println!("refused: {e}");
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
