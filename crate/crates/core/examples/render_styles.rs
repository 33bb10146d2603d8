// Format reference entries under each built-in style and render an
// article as XHTML and plain text.

use tj_core::render::{BUILTIN_STYLES, StyleGuide, format_entry, render_text, render_xhtml};
use tj_core::xml::parse_article;

const RECORDS: &str = include_str!("../tests/fixtures/golden-records.xml");
const SKELETON: &str = include_str!("../tests/fixtures/skeleton.xml");

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let back = format!("<back>\n{RECORDS}\n    </back>");
    let source = SKELETON.replace("<back>\n    </back>", &back);
    let article = parse_article(source.as_bytes())
        .outcome
        .ok_or("article did not parse")?;
    let entries = &article.reference_list().ok_or("no reference list")?.entries;
    for style in BUILTIN_STYLES {
        let g = StyleGuide::builtin(style).ok_or("missing style")?;
        println!("{style}:");
        for b in entries {
            println!("  {}", format_entry(b, &g)?.to_plain());
        }
    }

    let g = StyleGuide::apa();
    let html = render_xhtml(&article, &g);
    println!("xhtml: {} bytes", html.len());
    let text = render_text(&article, &g);
    println!("{}", text.lines().take(6).collect::<Vec<_>>().join("\n"));
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
