//! The `tj` command line: validation, schema evolution, rendering and
//! corpus products as subcommands.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::{self, Corpus, DedupKey, ElementKind, Query};
use crate::model::{Article, CalendarDate, normalize_space};
use crate::render::{self, StyleGuide};
use crate::schema::{self, CodifyOptions, RestrictedSchema};
use crate::validate::{self, ValidatorConfig};
use crate::xml::{Severity, XmlDocument, parse_article, parse_article_tree};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FINDINGS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tj", version, about = "TEI journal-article toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check articles against the editorial rules R1-R12.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Validator configuration (JSON).
        #[arg(long, env = "TJ_CONFIG")]
        config: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Describe one validator rule.
    Explain { rule: String },
    /// Check documents against a restricted schema.
    SchemaValidate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        schema: PathBuf,
        /// Downgrade constructs the shipped base schema admits to warnings.
        #[arg(long)]
        base: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Infer a restricted schema from a corpus.
    Codify {
        #[command(flatten)]
        input: CorpusInput,
        /// Schema file to write; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Attributes whose values are enumerated.
        #[arg(long, value_delimiter = ',')]
        enumerable: Option<Vec<String>>,
        /// Largest value set still enumerated.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// List attribute values that differ only in spelling.
    Variants {
        #[command(flatten)]
        input: CorpusInput,
        #[arg(long, value_delimiter = ',')]
        enumerable: Option<Vec<String>>,
    },
    /// Apply attribute rewrite rules to a corpus.
    Arbitrate {
        #[command(flatten)]
        input: CorpusInput,
        #[arg(long)]
        rules: PathBuf,
        /// Overwrite the input files.
        #[arg(long, conflicts_with = "out_dir", required_unless_present = "out_dir")]
        in_place: bool,
        /// Directory for rewritten copies.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Render one article.
    Render {
        file: PathBuf,
        /// Built-in style id or path to a style file.
        #[arg(long, default_value = "chicago")]
        style: String,
        #[arg(long, value_enum, default_value_t = RenderTarget::Xhtml)]
        to: RenderTarget,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build name, place, software, keyword and abbreviation indexes.
    Index {
        #[command(flatten)]
        input: CorpusInput,
        /// Index kinds; all when absent.
        #[arg(long, value_delimiter = ',')]
        kinds: Vec<String>,
        #[command(flatten)]
        output: ProductOutput,
    },
    /// Compile the unified bibliography.
    Biblio {
        #[command(flatten)]
        input: CorpusInput,
        #[arg(long, default_value = "chicago")]
        style: String,
        #[command(flatten)]
        output: ProductOutput,
    },
    /// Collect published corrections.
    Corrigenda {
        #[command(flatten)]
        input: CorpusInput,
        /// Change kind treated as a correction.
        #[arg(long, default_value = corpus::CORRECTION)]
        kind: String,
        #[command(flatten)]
        output: ProductOutput,
    },
    /// Search inside particular kinds of element.
    Query {
        #[command(flatten)]
        input: CorpusInput,
        /// Element kind, e.g. person, org, place, text, title, any.
        #[arg(long = "in")]
        element_kind: Option<String>,
        /// Case-insensitive substring of the element text.
        #[arg(long)]
        text: Option<String>,
        /// Earliest publication date, YYYY[-MM[-DD]].
        #[arg(long)]
        from: Option<String>,
        /// Latest publication date, YYYY[-MM[-DD]].
        #[arg(long)]
        to: Option<String>,
        /// Keep articles whose reference list has an author with this surname.
        #[arg(long)]
        cites_surname: Option<String>,
        #[command(flatten)]
        output: ProductOutput,
    },
}

#[derive(Debug, Args)]
pub struct CorpusInput {
    /// Directories (searched for .xml files) or files.
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProductOutput {
    #[arg(long, value_enum, default_value_t = ProductFormat::Xhtml)]
    pub format: ProductFormat,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProductFormat {
    Xhtml,
    Records,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RenderTarget {
    Xhtml,
    Text,
}

/// One line of `records` output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub kind: String,
    pub file: String,
    pub path: String,
    pub code: String,
    pub message: String,
}

fn escape_field(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '\\' => out.push_str("\\\\"),
            '\t' => out.push_str("\\t"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            c => out.push(c),
        }
    }
    out
}

fn unescape_field(s: &str) -> Result<String, String> {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('\\') => out.push('\\'),
            Some('t') => out.push('\t'),
            Some('n') => out.push('\n'),
            Some('r') => out.push('\r'),
            other => {
                return Err(format!(
                    "bad escape \\{}",
                    other.map(String::from).unwrap_or_default()
                ));
            }
        }
    }
    Ok(out)
}

impl Record {
    pub fn new(
        kind: impl Into<String>,
        file: impl Into<String>,
        path: impl Into<String>,
        code: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        Record {
            kind: kind.into(),
            file: file.into(),
            path: path.into(),
            code: code.into(),
            message: message.into(),
        }
    }

    /// Tab-separated fields; tabs, newlines and backslashes escaped.
    pub fn to_line(&self) -> String {
        [
            &self.kind,
            &self.file,
            &self.path,
            &self.code,
            &self.message,
        ]
        .map(|f| escape_field(f))
        .join("\t")
    }

    pub fn parse_line(line: &str) -> Result<Record, String> {
        let fields: Vec<&str> = line.split('\t').collect();
        let [kind, file, path, code, message] = fields.as_slice() else {
            return Err(format!("expected 5 fields, found {}", fields.len()));
        };
        Ok(Record {
            kind: unescape_field(kind)?,
            file: unescape_field(file)?,
            path: unescape_field(path)?,
            code: unescape_field(code)?,
            message: unescape_field(message)?,
        })
    }
}

/// Reads `records` output back; blank lines are skipped.
pub fn read_records(text: &str) -> Result<Vec<Record>, String> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| Record::parse_line(l).map_err(|e| format!("line {}: {e}", i + 1)))
        .collect()
}

fn records_text(records: &[Record]) -> String {
    records.iter().map(|r| r.to_line() + "\n").collect()
}

/// A failure that ends the command with exit status 2.
#[derive(Debug)]
struct Fatal(String);

impl<E: std::fmt::Display> From<E> for Fatal {
    fn from(e: E) -> Self {
        Fatal(e.to_string())
    }
}

type Outcome = Result<i32, Fatal>;

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Io<'_> {
    fn emit(&mut self, text: &str, to: Option<&Path>) -> Result<(), Fatal> {
        match to {
            Some(p) => std::fs::write(p, text).map_err(|e| Fatal(format!("{}: {e}", p.display()))),
            None => self.out.write_all(text.as_bytes()).map_err(Fatal::from),
        }
    }

    fn warn(&mut self, text: &str) {
        let _ = writeln!(self.err, "{text}");
    }
}

/// Parses `args` (program name first) and runs the command, writing to
/// `out` and `err`. Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(Fatal(message)) => {
            io.warn(&format!("tj: {message}"));
            EXIT_USAGE
        }
    }
}

fn dispatch(command: Command, io: &mut Io) -> Outcome {
    match command {
        Command::Validate {
            files,
            config,
            format,
        } => cmd_validate(&files, config.as_deref(), format, io),
        Command::Explain { rule } => {
            io.emit(&(validate::explain(&rule)? + "\n"), None)?;
            Ok(EXIT_OK)
        }
        Command::SchemaValidate {
            files,
            schema,
            base,
            format,
        } => cmd_schema_validate(&files, &schema, base, format, io),
        Command::Codify {
            input,
            out,
            enumerable,
            cap,
        } => cmd_codify(&input, out.as_deref(), enumerable, cap, io),
        Command::Variants { input, enumerable } => cmd_variants(&input, enumerable, io),
        Command::Arbitrate {
            input,
            rules,
            in_place,
            out_dir,
        } => cmd_arbitrate(
            &input,
            &rules,
            if in_place { None } else { out_dir.as_deref() },
            io,
        ),
        Command::Render {
            file,
            style,
            to,
            out,
        } => cmd_render(&file, &style, to, out.as_deref(), io),
        Command::Index {
            input,
            kinds,
            output,
        } => cmd_index(&input, &kinds, &output, io),
        Command::Biblio {
            input,
            style,
            output,
        } => cmd_biblio(&input, &style, &output, io),
        Command::Corrigenda {
            input,
            kind,
            output,
        } => cmd_corrigenda(&input, &kind, &output, io),
        Command::Query {
            input,
            element_kind,
            text,
            from,
            to,
            cites_surname,
            output,
        } => {
            let q = build_query(element_kind, text, from, to, cites_surname)?;
            cmd_query(&input, &q, &output, io)
        }
    }
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn read(p: &Path) -> Result<Vec<u8>, Fatal> {
    std::fs::read(p).map_err(|e| Fatal(format!("{}: {e}", p.display())))
}

fn read_text(p: &Path) -> Result<String, Fatal> {
    String::from_utf8(read(p)?).map_err(|_| Fatal(format!("{}: not UTF-8", p.display())))
}

fn finding_line(file: &str, r: &Record) -> String {
    let at = if r.path.is_empty() {
        String::new()
    } else {
        format!(":{}", r.path)
    };
    format!("{file}{at}: {} {}: {}\n", r.kind, r.code, r.message)
}

fn print_report(records: &[Record], format: ReportFormat, io: &mut Io) -> Result<(), Fatal> {
    let text = match format {
        ReportFormat::Records => records_text(records),
        ReportFormat::Text => records.iter().map(|r| finding_line(&r.file, r)).collect(),
    };
    io.emit(&text, None)
}

fn exit_for(records: &[Record]) -> i32 {
    if records
        .iter()
        .any(|r| r.kind == Severity::Error.to_string())
    {
        EXIT_FINDINGS
    } else {
        EXIT_OK
    }
}

fn cmd_validate(
    files: &[PathBuf],
    config: Option<&Path>,
    format: ReportFormat,
    io: &mut Io,
) -> Outcome {
    let cfg = match config {
        Some(p) => ValidatorConfig::from_json(&read_text(p)?)?,
        None => ValidatorConfig::default(),
    };
    let mut inputs = Vec::new();
    for f in files {
        inputs.push((display(f), read(f)?));
    }
    let mut records = Vec::new();
    for (file, bytes) in inputs {
        let report = parse_article(&bytes);
        for i in &report.issues {
            records.push(Record::new(
                i.severity.to_string(),
                &file,
                i.location.to_string(),
                "parse",
                &i.message,
            ));
        }
        if let Some(a) = &report.outcome {
            for f in validate::validate(a, &cfg) {
                records.push(Record::new(
                    f.severity.to_string(),
                    &file,
                    f.location.to_string(),
                    f.rule_id,
                    f.message,
                ));
            }
        }
    }
    print_report(&records, format, io)?;
    Ok(exit_for(&records))
}

fn cmd_schema_validate(
    files: &[PathBuf],
    schema: &Path,
    base: bool,
    format: ReportFormat,
    io: &mut Io,
) -> Outcome {
    let s = RestrictedSchema::from_json(&read_text(schema)?)?;
    let base_schema = base.then(RestrictedSchema::base);
    let mut docs = Vec::new();
    for f in files {
        let bytes = read(f)?;
        docs.push((
            display(f),
            XmlDocument::parse(&bytes).map_err(|e| Fatal(format!("{}: {e}", f.display())))?,
        ));
    }
    let mut records = Vec::new();
    for (file, doc) in &docs {
        for f in schema::validate_against(&s, doc, base_schema.as_ref()) {
            records.push(Record::new(
                f.severity.to_string(),
                file,
                f.location.to_string(),
                f.code.to_string(),
                f.message,
            ));
        }
    }
    print_report(&records, format, io)?;
    Ok(exit_for(&records))
}

fn corpus_files(input: &CorpusInput) -> Result<Vec<PathBuf>, Fatal> {
    let mut files = Vec::new();
    for p in &input.paths {
        if p.is_dir() {
            files.extend(corpus::xml_files(p)?);
        } else if p.is_file() {
            files.push(p.clone());
        } else {
            return Err(Fatal(format!("{}: no such file or directory", p.display())));
        }
    }
    files.sort();
    files.dedup();
    Ok(files)
}

/// Well-formed documents of the input; unparseable files are reported on
/// stderr and skipped.
fn xml_corpus(input: &CorpusInput, io: &mut Io) -> Result<Vec<(PathBuf, XmlDocument)>, Fatal> {
    let mut docs = Vec::new();
    for f in corpus_files(input)? {
        match XmlDocument::parse(&read(&f)?) {
            Ok(d) => docs.push((f, d)),
            Err(e) => io.warn(&format!("tj: skipping {}: {e}", f.display())),
        }
    }
    if docs.is_empty() {
        return Err(Fatal("no parseable XML files in the input".into()));
    }
    Ok(docs)
}

fn codify_options(enumerable: Option<Vec<String>>, cap: Option<usize>) -> CodifyOptions {
    let mut opt = CodifyOptions::default();
    if let Some(e) = enumerable {
        opt.enumerable_attributes = e.into_iter().filter(|s| !s.is_empty()).collect();
    }
    if let Some(c) = cap {
        opt.enumeration_cap = c;
    }
    opt
}

fn cmd_codify(
    input: &CorpusInput,
    out: Option<&Path>,
    enumerable: Option<Vec<String>>,
    cap: Option<usize>,
    io: &mut Io,
) -> Outcome {
    let docs: Vec<XmlDocument> = xml_corpus(input, io)?.into_iter().map(|(_, d)| d).collect();
    let s = schema::codify(
        &schema::profile_corpus(&docs),
        &codify_options(enumerable, cap),
    )?;
    let attributes: usize = s.elements.values().map(|e| e.attributes.len()).sum();
    let enumerated: usize = s
        .elements
        .values()
        .flat_map(|e| e.attributes.values())
        .filter(|a| a.values.is_some())
        .count();
    io.emit(&s.to_json(), out)?;
    let summary = format!(
        "{} documents, {} elements, {attributes} attributes ({enumerated} enumerated), {} foreign",
        docs.len(),
        s.elements.len(),
        s.foreign.len()
    );
    if out.is_some() {
        io.emit(&(summary + "\n"), None)?;
    } else {
        io.warn(&summary);
    }
    Ok(EXIT_OK)
}

fn cmd_variants(input: &CorpusInput, enumerable: Option<Vec<String>>, io: &mut Io) -> Outcome {
    let docs: Vec<XmlDocument> = xml_corpus(input, io)?.into_iter().map(|(_, d)| d).collect();
    let p = schema::profile_corpus(&docs);
    let clusters = match enumerable {
        Some(e) => schema::detect_variants_in(&p, &e.into_iter().collect()),
        None => schema::detect_variants(&p),
    };
    let mut text = String::new();
    for c in &clusters {
        let members: Vec<String> = c
            .members
            .iter()
            .map(|(v, n)| format!("{v:?} ({n})"))
            .collect();
        text.push_str(&format!(
            "{} @{} [{}]: {}; dominant {:?}\n",
            c.element,
            c.attribute,
            c.key,
            members.join(", "),
            c.dominant()
        ));
    }
    io.emit(&text, None)?;
    Ok(EXIT_OK)
}

fn cmd_arbitrate(
    input: &CorpusInput,
    rules: &Path,
    out_dir: Option<&Path>,
    io: &mut Io,
) -> Outcome {
    let rules = schema::parse_rules(&read_text(rules)?)?;
    let (paths, docs): (Vec<PathBuf>, Vec<XmlDocument>) =
        xml_corpus(input, io)?.into_iter().unzip();
    let result = schema::arbitrate(&docs, &rules)?;
    let targets: Vec<PathBuf> = match out_dir {
        None => paths.clone(),
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Fatal(format!("{}: {e}", dir.display())))?;
            let names: Vec<PathBuf> = paths
                .iter()
                .map(|p| dir.join(p.file_name().expect("files have names")))
                .collect();
            let mut seen = std::collections::BTreeSet::new();
            if let Some(dup) = names.iter().find(|n| !seen.insert(*n)) {
                return Err(Fatal(format!(
                    "two inputs would both be written to {}",
                    dup.display()
                )));
            }
            names
        }
    };
    let mut files_changed = 0;
    for ((target, text), n) in targets.iter().zip(&result.documents).zip(&result.changes) {
        if out_dir.is_some() || *n > 0 {
            std::fs::write(target, text)
                .map_err(|e| Fatal(format!("{}: {e}", target.display())))?;
        }
        if *n > 0 {
            files_changed += 1;
        }
    }
    io.emit(
        &format!(
            "{} changes in {files_changed} of {} files\n",
            result.total_changes(),
            docs.len()
        ),
        None,
    )?;
    Ok(EXIT_OK)
}

fn load_article(file: &Path) -> Result<Article, Fatal> {
    let bytes = read(file)?;
    let doc = XmlDocument::parse(&bytes).map_err(|e| Fatal(format!("{}: {e}", file.display())))?;
    let report = parse_article_tree(&doc);
    match report.outcome {
        Some(a) => Ok(a.with_source_path(file)),
        None => {
            let first = report
                .issues
                .iter()
                .find(|i| i.severity == Severity::Error)
                .map(|i| i.message.clone());
            Err(Fatal(format!(
                "{}: {}",
                file.display(),
                first.unwrap_or_default()
            )))
        }
    }
}

fn cmd_render(
    file: &Path,
    style: &str,
    to: RenderTarget,
    out: Option<&Path>,
    io: &mut Io,
) -> Outcome {
    let g = StyleGuide::resolve(style)?;
    let a = load_article(file)?;
    let text = match to {
        RenderTarget::Xhtml => render::render_xhtml(&a, &g),
        RenderTarget::Text => render::render_text(&a, &g),
    };
    io.emit(&text, out)?;
    Ok(EXIT_OK)
}

fn load(input: &CorpusInput, io: &mut Io) -> Result<Corpus, Fatal> {
    let c = corpus::load_corpus(&corpus_files(input)?);
    for r in c.load_reports.values() {
        for i in r.issues.iter().filter(|i| i.severity == Severity::Error) {
            io.warn(&format!("tj: {}: {}", r.path, i.message));
        }
    }
    Ok(c)
}

fn file_of(c: &Corpus, id: &str) -> String {
    c.get(id)
        .and_then(|a| a.source_path.clone())
        .unwrap_or_default()
}

fn emit_product(
    output: &ProductOutput,
    xhtml: impl FnOnce() -> String,
    json: impl FnOnce() -> String,
    records: impl FnOnce() -> Vec<Record>,
    io: &mut Io,
) -> Outcome {
    let text = match output.format {
        ProductFormat::Xhtml => xhtml(),
        ProductFormat::Json => json(),
        ProductFormat::Records => records_text(&records()),
    };
    io.emit(&text, output.out.as_deref())?;
    Ok(EXIT_OK)
}

fn cmd_index(
    input: &CorpusInput,
    kinds: &[String],
    output: &ProductOutput,
    io: &mut Io,
) -> Outcome {
    let kinds = corpus::parse_kinds(kinds)?;
    let c = load(input, io)?;
    let entries = corpus::build_indexes(&c, &kinds);
    emit_product(
        output,
        || corpus::index_xhtml(&entries),
        || corpus::index_json(&entries),
        || {
            entries
                .iter()
                .flat_map(|e| {
                    e.locators.iter().map(|l| {
                        Record::new(
                            "index",
                            file_of(&c, &l.article),
                            l.path.to_string(),
                            e.kind.as_str(),
                            &e.display,
                        )
                    })
                })
                .collect()
        },
        io,
    )
}

fn dedup_code(k: &DedupKey) -> String {
    match k {
        DedupKey::Doi(d) => format!("doi:{d}"),
        DedupKey::Work {
            surname,
            year,
            title,
        } => {
            format!(
                "work:{surname}|{}|{title}",
                year.map(|y| y.to_string()).unwrap_or_default()
            )
        }
    }
}

fn cmd_biblio(input: &CorpusInput, style: &str, output: &ProductOutput, io: &mut Io) -> Outcome {
    let g = StyleGuide::resolve(style)?;
    let c = load(input, io)?;
    let entries = corpus::unified_bibliography(&c);
    let c = &c;
    emit_product(
        output,
        || corpus::unibib_xhtml(&entries, &g),
        || corpus::unibib_json(&entries),
        || {
            entries
                .iter()
                .flat_map(|e| {
                    let text = render::format_entry(&e.record, &g)
                        .map(|r| r.to_plain())
                        .unwrap_or_default();
                    let code = dedup_code(&e.key);
                    e.citing.iter().map(move |id| {
                        Record::new("biblio", file_of(c, id), "", code.clone(), text.clone())
                    })
                })
                .collect()
        },
        io,
    )
}

fn cmd_corrigenda(input: &CorpusInput, kind: &str, output: &ProductOutput, io: &mut Io) -> Outcome {
    let c = load(input, io)?;
    let entries = corpus::corrigenda_of_kind(&c, kind);
    emit_product(
        output,
        || corpus::corrigenda_xhtml(&entries),
        || corpus::corrigenda_json(&entries),
        || {
            entries
                .iter()
                .map(|e| {
                    let text = normalize_space(&e.description.plain_text());
                    Record::new(kind, file_of(&c, &e.article), "", e.when.to_string(), text)
                })
                .collect()
        },
        io,
    )
}

fn date_arg(flag: &str, value: &str) -> Result<CalendarDate, Fatal> {
    CalendarDate::parse(value).map_err(|e| Fatal(format!("--{flag} {value:?}: {e}")))
}

fn build_query(
    element_kind: Option<String>,
    text: Option<String>,
    from: Option<String>,
    to: Option<String>,
    cites: Option<String>,
) -> Result<Query, Fatal> {
    let element_kind = element_kind.map(|k| k.parse::<ElementKind>()).transpose()?;
    let date_range = match (from, to) {
        (None, None) => None,
        (f, t) => {
            let from = f
                .map(|v| date_arg("from", &v))
                .transpose()?
                .unwrap_or(CalendarDate::year_only(1).expect("year 1 is valid"));
            let to = t
                .map(|v| date_arg("to", &v))
                .transpose()?
                .unwrap_or(CalendarDate::year_only(9999).expect("year 9999 is valid"));
            Some((from, to))
        }
    };
    let q = Query {
        element_kind,
        text_predicate: text,
        date_range,
        cites_author_surname: cites,
    };
    q.check()?;
    Ok(q)
}

fn cmd_query(input: &CorpusInput, q: &Query, output: &ProductOutput, io: &mut Io) -> Outcome {
    let c = load(input, io)?;
    let hits = corpus::query(&c, q)?;
    emit_product(
        output,
        || corpus::hits_xhtml(&hits),
        || corpus::hits_json(&hits),
        || {
            hits.iter()
                .map(|h| {
                    Record::new(
                        "hit",
                        file_of(&c, &h.article),
                        h.path.to_string(),
                        &h.article,
                        &h.snippet,
                    )
                })
                .collect()
        },
        io,
    )
}
