// Drive the `tj` command line in-process: validate, codify, render.

use tj_core::cli::{read_records, run};

const SKELETON: &str = include_str!("../tests/fixtures/skeleton.xml");

fn tj(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("tj").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, String::from_utf8_lossy(&out).into_owned())
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let article = dir.path().join("article.xml");
    std::fs::write(&article, SKELETON)?;
    let article = article.to_str().ok_or("path is not UTF-8")?;
    let schema = dir.path().join("schema.json");
    let schema = schema.to_str().ok_or("path is not UTF-8")?;

    let (code, report) = tj(&["validate", "--format", "records", article]);
    println!(
        "validate: exit {code}, {} records",
        read_records(&report)?.len()
    );
    let (code, summary) = tj(&["codify", article, "--out", schema]);
    print!("codify: exit {code}, {summary}");
    let (code, _) = tj(&["schema-validate", "--schema", schema, article]);
    println!("schema-validate: exit {code}");
    let (code, text) = tj(&["render", article, "--style", "mla", "--to", "text"]);
    println!(
        "render: exit {code}, first line {:?}",
        text.lines().next().unwrap_or("")
    );
    let (code, _) = tj(&["render", article, "--style", "harvard"]);
    println!("unknown style: exit {code}");
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
