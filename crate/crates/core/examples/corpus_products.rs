// Load a directory of articles and build the cross-article products:
// indexes, the unified bibliography and the corrigenda list.

use tj_core::corpus::{
    build_indexes, corrigenda, corrigenda_xhtml, load_dir, parse_kinds, unified_bibliography,
};

const SKELETON: &str = include_str!("../tests/fixtures/skeleton.xml");
const FULL: &str = include_str!("../tests/fixtures/article-full.xml");

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    std::fs::write(dir.path().join("skeleton.xml"), SKELETON)?;
    std::fs::write(dir.path().join("full.xml"), FULL)?;
    std::fs::write(dir.path().join("broken.xml"), "<TEI><teiHeader>")?;
    let corpus = load_dir(dir.path())?;
    for r in corpus.load_reports.values() {
        println!(
            "{} -> {:?} ({} issues)",
            r.path.rsplit('/').next().unwrap_or(""),
            r.id,
            r.issues.len()
        );
    }

    for e in build_indexes(&corpus, &parse_kinds(&["author", "organization"])?) {
        println!("[{}] {}: {} locators", e.kind, e.display, e.locators.len());
    }
    for e in unified_bibliography(&corpus) {
        println!("{:?} cited by {:?}", e.key, e.citing);
    }
    let fixes = corrigenda(&corpus);
    for c in &fixes {
        println!("{} {}: {}", c.when, c.article, c.description.plain_text());
    }
    println!("corrigenda page: {} bytes", corrigenda_xhtml(&fixes).len());
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
