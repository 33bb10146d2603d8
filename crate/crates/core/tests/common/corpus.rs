//! Seeded synthetic articles with known mention counts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use rand::prelude::*;
use rand::rngs::StdRng;
use tj_core::model::*;
use tj_core::xml::serialize_article;

const FORENAMES: &[&str] = &[
    "Anna", "Jon", "Kari", "Michael", "Ingrid", "Pierre", "Sofia", "Lars", "Maria", "Olaf",
];
const SURNAMES: &[&str] = &[
    "Lindqvist",
    "Holm",
    "Berg",
    "Dean",
    "Brecht",
    "Dubois",
    "Nilsen",
    "Larsen",
    "Okafor",
    "Tanaka",
];
const PERSONS: &[&str] = &[
    "Bertolt Brecht",
    "Henrik Ibsen",
    "August Strindberg",
    "Karen Blixen",
    "Michael Dean",
    "Selma Lagerlöf",
];
const ORGS: &[&str] = &[
    "Indian Institute of Science",
    "Nordic Council",
    "University of Oslo",
    "Brecht Archive",
];
const PLACES: &[&str] = &[
    "Berlin",
    "Oslo",
    "Bangalore",
    "Stockholm",
    "Copenhagen",
    "Winnipeg",
];
const SOFTWARE: &[&str] = &["Tesseract", "Saxon", "oXygen", "LaTeX"];
const ABBRS: &[(&str, Option<&str>)] = &[
    ("BBA", Some("Bertolt-Brecht-Archiv")),
    ("TEI", Some("Text Encoding Initiative")),
    ("NLM", None),
    ("DOI", None),
];
const KEYWORDS: &[&str] = &[
    "theatre",
    "translation",
    "reception",
    "foetal development",
    "digital edition",
    "genetics",
];
const WORDS: &[&str] = &[
    "the",
    "reception",
    "of",
    "drama",
    "in",
    "northern",
    "archives",
    "shows",
    "a",
    "steady",
    "pattern",
    "across",
    "decades",
    "while",
    "editors",
    "revised",
    "their",
    "practice",
    "and",
    "readers",
    "noticed",
    "little",
];
const DOIS: &[&str] = &["10.5555/shared.1", "10.5555/shared.2", "10.5555/shared.3"];
const ORG_UNITS: &[&str] = &["laboratory", "department", "institution"];

pub struct GenOptions {
    pub paragraphs: usize,
    pub rends: &'static [&'static str],
}

impl Default for GenOptions {
    fn default() -> Self {
        GenOptions {
            paragraphs: 12,
            rends: &["italic", "bold"],
        }
    }
}

pub struct Generated {
    pub article: Article,
    /// Mentions per index kind token.
    pub counts: BTreeMap<&'static str, usize>,
}

fn pick<'a, T>(rng: &mut StdRng, xs: &'a [T]) -> &'a T {
    xs.choose(rng).unwrap()
}

fn words(rng: &mut StdRng, n: usize) -> String {
    (0..n)
        .map(|_| *pick(rng, WORDS))
        .collect::<Vec<_>>()
        .join(" ")
}

fn record(rng: &mut StdRng, id: &str) -> BiblStruct {
    let book = rng.random_bool(0.4);
    let mut b = BiblStruct {
        xml_id: Some(id.into()),
        ..Default::default()
    };
    let authors: Vec<Author> = (0..rng.random_range(1..=2))
        .map(|_| Author::person(&[*pick(rng, FORENAMES)], pick(rng, SURNAMES)))
        .collect();
    let year = rng.random_range(1950..2012);
    if book {
        b.doc_type = DocumentType::new("book");
        b.monogr.container_authors = authors;
        b.monogr
            .titles
            .push(Title::new("m", "main", format!("On {}", words(rng, 3))));
        b.monogr.imprint.publisher = Some("Nordic Press".into());
    } else {
        b.doc_type = DocumentType::new("article");
        b.analytic = Some(Analytic {
            titles: vec![Title::new(
                "a",
                "main",
                format!("Notes on {}", words(rng, 4)),
            )],
            authors,
        });
        b.monogr
            .titles
            .push(Title::new("j", "main", "Scandinavian-Canadian Studies"));
        b.monogr.imprint.scopes = vec![Scope::new("vol", &rng.random_range(1..30).to_string())];
        if rng.random_bool(0.5) {
            b.identifiers.push(Identifier::new("DOI", pick(rng, DOIS)));
        }
    }
    b.monogr.imprint.date = Some(ImprintDate {
        when: CalendarDate::year_only(year).unwrap(),
        role: "published".into(),
    });
    b
}

fn author(rng: &mut StdRng, corresponding: bool) -> Author {
    let mut a = Author::person(&[*pick(rng, FORENAMES)], pick(rng, SURNAMES));
    a.corresponding = corresponding;
    if corresponding {
        a.email = Some(format!("{}@example.org", a.surname.to_lowercase()));
    }
    a.affiliation = Some(Affiliation {
        org_units: vec![OrgUnit {
            kind: pick(rng, ORG_UNITS).to_string(),
            name: pick(rng, ORGS).to_string(),
        }],
        address: Some(Address {
            settlement: Some(pick(rng, PLACES).to_string()),
            ..Default::default()
        }),
    });
    a
}

struct Mentions<'a> {
    counts: &'a mut BTreeMap<&'static str, usize>,
    refs: usize,
    rends: &'static [&'static str],
}

impl Mentions<'_> {
    fn inline(&mut self, rng: &mut StdRng, depth: usize) -> Inline {
        let choice = rng.random_range(0..8);
        let bump =
            |c: &mut BTreeMap<&'static str, usize>, k: &'static str| *c.entry(k).or_default() += 1;
        match choice {
            0 => {
                bump(self.counts, "person");
                Inline::Person(Mention::new(*pick(rng, PERSONS)))
            }
            1 => {
                bump(self.counts, "organization");
                Inline::Org(Mention::new(*pick(rng, ORGS)))
            }
            2 => {
                bump(self.counts, "place");
                Inline::Place(Mention::new(*pick(rng, PLACES)))
            }
            3 => {
                bump(self.counts, "software");
                Inline::Term {
                    kind: Some("software".into()),
                    text: pick(rng, SOFTWARE).to_string(),
                }
            }
            4 => {
                bump(self.counts, "abbreviation");
                let (abbr, exp) = *pick(rng, ABBRS);
                Inline::Abbr {
                    abbr: abbr.into(),
                    expansion: exp.map(String::from),
                }
            }
            5 if self.refs > 0 => {
                let n = rng.random_range(1..=self.refs);
                Inline::BiblRef {
                    target: RefTarget::new(format!("#b{n}")),
                    text: format!("[{n}]"),
                }
            }
            6 if depth == 0 => {
                let inner = if rng.random_bool(0.3) {
                    self.inline(rng, 1)
                } else {
                    Inline::text(words(rng, 2))
                };
                Inline::Emph {
                    rend: pick(rng, self.rends).to_string(),
                    content: RichText::new(vec![inner]),
                }
            }
            _ => Inline::Term {
                kind: None,
                text: words(rng, 1),
            },
        }
    }

    fn paragraph(&mut self, rng: &mut StdRng) -> RichText {
        let mut v = Vec::new();
        for _ in 0..rng.random_range(3..7) {
            let n = rng.random_range(6..14);
            v.push(Inline::text(format!("{} ", words(rng, n))));
            v.push(self.inline(rng, 0));
            v.push(Inline::text(". "));
        }
        v.push(Inline::text(words(rng, 5)));
        RichText::new(v)
    }
}

/// Article number `i` of the corpus seeded by `seed`.
pub fn generate(seed: u64, i: usize, opt: &GenOptions) -> Generated {
    let mut rng = StdRng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(i as u64));
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    let title = format!("Synthetic study {i}: {}", words(&mut rng, 5));

    let authors: Vec<Author> = (0..rng.random_range(1..=3))
        .map(|k| author(&mut rng, k == 0))
        .collect();
    counts.insert("author", authors.len());
    let year = rng.random_range(2005..=2012);
    let month = rng.random_range(1..=12u8);
    let day = rng.random_range(1..=28u8);
    let mut source = BiblStruct {
        doc_type: DocumentType::new("article"),
        ..Default::default()
    };
    source.analytic = Some(Analytic {
        titles: vec![Title::new("a", "main", title.clone())],
        authors,
    });
    source
        .monogr
        .titles
        .push(Title::new("j", "main", "Scandinavian-Canadian Studies"));
    source.monogr.issn = Some("0823-1796".into());
    source.monogr.imprint = Imprint {
        publisher: Some("Scandinavian-Canadian Studies".into()),
        pub_place: Some("Winnipeg".into()),
        date: Some(ImprintDate {
            when: CalendarDate::ymd(year, month, day).unwrap(),
            role: "published".into(),
        }),
        scopes: vec![
            Scope::new("vol", &(year - 1990).to_string()),
            Scope::new("fpage", "1"),
            Scope::new("lpage", "20"),
        ],
    };
    source
        .identifiers
        .push(Identifier::new("DOI", &format!("10.5555/synth.{seed}.{i}")));

    let n = rng.random_range(1..=3);
    let mut kws: Vec<&str> = KEYWORDS.choose_multiple(&mut rng, n).copied().collect();
    kws.sort();
    counts.insert("keyword", kws.len());

    let mut changes = vec![
        Change {
            when: CalendarDate::ymd(year - 1, 3, 1).unwrap(),
            kind: "received".into(),
            description: RichText::plain("Received"),
        },
        Change {
            when: CalendarDate::ymd(year - 1, 9, 1).unwrap(),
            kind: "accepted".into(),
            description: RichText::plain("Accepted"),
        },
    ];
    if rng.random_bool(0.3) {
        changes.push(Change {
            when: CalendarDate::ymd(year + 1, month, day).unwrap(),
            kind: "correction".into(),
            description: RichText::plain(format!("Corrected {}", words(&mut rng, 3))),
        });
    }

    let n_refs = rng.random_range(2..=6);
    let entries: Vec<BiblStruct> = (1..=n_refs)
        .map(|k| record(&mut rng, &format!("b{k}")))
        .collect();

    let mut m = Mentions {
        counts: &mut counts,
        refs: n_refs,
        rends: opt.rends,
    };
    let abstract_div = Division {
        head: Some(RichText::plain("Abstract")),
        blocks: vec![Block::Paragraph(m.paragraph(&mut rng))],
        ..Division::new("abstract")
    };
    let sections = (opt.paragraphs / 4).max(1);
    let mut body = Vec::new();
    for s in 0..sections {
        let mut d = Division {
            head: Some(RichText::plain(format!("Section {}", s + 1))),
            ..Division::new("section")
        };
        for _ in 0..opt.paragraphs.div_ceil(sections) {
            d.blocks.push(Block::Paragraph(m.paragraph(&mut rng)));
        }
        if s % 2 == 1 {
            let mut sub = Division {
                head: Some(RichText::plain("Detail")),
                ..Division::new("section")
            };
            sub.blocks.push(Block::List(ListBlock {
                items: vec![m.paragraph(&mut rng), m.paragraph(&mut rng)],
            }));
            d.children.push(sub);
        }
        body.push(d);
    }

    let article = Article {
        id: String::new(),
        header: Header {
            file_desc: Some(FileDesc {
                title_stmt: Some(TitleStmt {
                    main_title: Some(RichText::plain(title)),
                }),
                publication_stmt: Some(PublicationStmt {
                    availability: Some(RichText::plain("Open access")),
                    date: Some(CalendarDate::year_only(year).unwrap()),
                    authority: Some("Scandinavian-Canadian Studies".into()),
                }),
                source_desc: Some(SourceDesc {
                    records: vec![source],
                }),
            }),
            profile_desc: ProfileDesc {
                keywords: kws
                    .iter()
                    .map(|k| Keyword {
                        term: k.to_string(),
                        scheme: None,
                    })
                    .collect(),
                languages: vec!["en".into()],
            },
            revision_desc: RevisionDesc { changes },
        },
        front: vec![abstract_div],
        body,
        back: BackMatter {
            reference_list: Some(ListBibl { entries }),
            ..Default::default()
        },
        source_path: None,
        namespaces: Vec::new(),
    };
    Generated { article, counts }
}

/// Writes `n` generated articles to `dir` as `art-NNN.xml`.
pub fn write_corpus(
    dir: &Path,
    seed: u64,
    n: usize,
    opt: &GenOptions,
) -> (Vec<PathBuf>, BTreeMap<&'static str, usize>) {
    let mut paths = Vec::new();
    let mut totals = BTreeMap::new();
    for i in 0..n {
        let g = generate(seed, i, opt);
        let p = dir.join(format!("art-{i:03}.xml"));
        std::fs::write(&p, serialize_article(&g.article)).unwrap();
        for (k, v) in g.counts {
            *totals.entry(k).or_default() += v;
        }
        paths.push(p);
    }
    (paths, totals)
}
