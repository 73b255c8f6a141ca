//! Command-line front end: parsing, certification, word decisions,
//! specialization plans, permutation-model profiles, chunk searches, and the
//! Folner construction, with text, JSON, or CSV reports.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cremona::{
    chunk_of_elements, evaluate_word, folner_to_sofic, make_plan, parse_chunk, parse_word,
    profile_points, render_tuple, semigroup_words_equal, sigma_upper, specialize_chunk, Chunk,
    CremonaElement, FieldSpec, FolnerWitness, GeneratorSystem, HammingFrac, PointTable,
    ProfileSummary, DEFAULT_SEARCH_CAP,
};

#[derive(Parser)]
#[command(
    name = "cremona",
    about = "exact computation with birational transformations and their finite permutation models",
    version
)]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a generator file and certify every declared inverse.
    Check {
        #[arg(long)]
        gens: PathBuf,
    },
    /// Evaluate a word in the generators and print the resulting tuple.
    Compose {
        #[arg(long)]
        gens: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Decide whether a word in the generators is the identity.
    Word {
        #[arg(long)]
        gens: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Decide equality of two positive words, written "LHS = RHS".
    SemigroupEq {
        #[arg(long)]
        gens: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Compute the bad primes of a symmetric generator set over Q and reduce
    /// it at the chosen good prime.
    Specialize {
        #[arg(long)]
        gens: PathBuf,
        #[arg(long)]
        p0: u64,
    },
    /// Build permutation models over F_{p^m} for a range of m and report
    /// defects, separations, and profile certificates.
    Sofic {
        #[arg(long)]
        gens: PathBuf,
        #[arg(long)]
        p: u64,
        /// Extension degree range A..B, both ends included.
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = PointTable::DEFAULT_CAP)]
        cap: u64,
        /// Use the seeded random extension mode instead of the ascending one.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Exhaustively search the least degree realizing a chunk at quality r.
    ChunkSigma {
        /// Chunk file (elements, basepoint, triples).
        #[arg(long, conflicts_with = "gens")]
        chunk: Option<PathBuf>,
        /// Generator file; the chunk of its certified elements is used.
        #[arg(long)]
        gens: Option<PathBuf>,
        /// Quality parameter, an integer or a fraction "a/b".
        #[arg(long)]
        r: String,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        search_cap: f64,
    },
    /// Run the Folner-to-permutation construction on a box in Z^d.
    Folner {
        #[arg(long, default_value_t = 1)]
        d: usize,
        #[arg(long)]
        side: i64,
        /// Quality parameter, an integer or a fraction "a/b".
        #[arg(long)]
        r: String,
    },
}

fn frac_str(x: HammingFrac) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn parse_ratio(text: &str) -> Result<HammingFrac> {
    let parts: Vec<&str> = text.split('/').collect();
    let ratio = match parts.as_slice() {
        [a] => HammingFrac::new(a.trim().parse()?, 1),
        [a, b] => HammingFrac::new(a.trim().parse()?, b.trim().parse()?),
        _ => bail!("expected an integer or a fraction a/b, found {text}"),
    };
    if ratio.numer() == &0 {
        bail!("quality must be positive");
    }
    Ok(ratio)
}

fn parse_m_range(text: &str) -> Result<std::ops::RangeInclusive<u32>> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| anyhow!("expected a range A..B, found {text}"))?;
    let lo: u32 = lo.trim().parse().context("range start")?;
    let hi: u32 = hi.trim().parse().context("range end")?;
    if lo == 0 || hi < lo {
        bail!("range must be ascending and start at 1 or above");
    }
    Ok(lo..=hi)
}

fn load_system(path: &PathBuf) -> Result<GeneratorSystem> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    GeneratorSystem::parse(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn emit(format: Format, text: String, value: Value, csv: String) {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).unwrap()),
        Format::Csv => print!("{csv}"),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Check { gens } => {
            let sys = load_system(&gens)?;
            let mut text = String::new();
            let mut rows = vec!["name,dim,domain,size,has_inverse".to_string()];
            let mut items = Vec::new();
            for (i, name) in sys.names().iter().enumerate() {
                let fwd = sys.forward(i)?;
                let has_inverse = sys.element(i).is_ok();
                writeln!(
                    text,
                    "{name}: {} (size {}{})",
                    render_tuple(fwd),
                    fwd.formula_size(),
                    if has_inverse { ", inverse certified" } else { ", no inverse" }
                )?;
                rows.push(format!(
                    "{name},{},{},{},{}",
                    fwd.dim(),
                    fwd.domain(),
                    fwd.formula_size(),
                    has_inverse
                ));
                items.push(json!({
                    "name": name,
                    "tuple": render_tuple(fwd),
                    "dim": fwd.dim(),
                    "domain": fwd.domain().to_string(),
                    "size": fwd.formula_size(),
                    "has_inverse": has_inverse,
                }));
            }
            writeln!(text, "certified: {} generators", sys.len())?;
            emit(
                cli.format,
                text,
                json!({"generators": items}),
                rows.join("\n") + "\n",
            );
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Compose { gens, word } => {
            let sys = load_system(&gens)?;
            let w = parse_word(&word, sys.names())?;
            let value = evaluate_word(&sys, &w)?;
            let fwd = render_tuple(value.forward());
            let inv = render_tuple(value.inverse());
            let text = format!(
                "word: {}\nforward: {fwd}\ninverse: {inv}\nsize: {}\n",
                w.display_with(sys.names()),
                value.forward().formula_size()
            );
            let csv = format!(
                "key,value\nword,{}\nforward,\"{fwd}\"\ninverse,\"{inv}\"\nsize,{}\n",
                w.display_with(sys.names()),
                value.forward().formula_size()
            );
            let j = json!({
                "word": w.display_with(sys.names()),
                "forward": fwd,
                "inverse": inv,
                "size": value.forward().formula_size(),
            });
            emit(cli.format, text, j, csv);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Word { gens, word } => {
            let sys = load_system(&gens)?;
            let w = parse_word(&word, sys.names())?;
            let verdict = cremona::is_identity_word(&sys, &w)?;
            emit(
                cli.format,
                format!("identity: {verdict}\n"),
                json!({ "identity": verdict }),
                format!("identity\n{verdict}\n"),
            );
            Ok(if verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::SemigroupEq { gens, word } => {
            let sys = load_system(&gens)?;
            let (lhs, rhs) = word
                .split_once('=')
                .ok_or_else(|| anyhow!("expected two positive words separated by '='"))?;
            let positive = |src: &str| -> Result<Vec<usize>> {
                let letters = cremona::syntax::parse_word_letters(src, sys.names())?;
                letters
                    .into_iter()
                    .map(|(i, inverted)| {
                        if inverted {
                            bail!("semigroup words use only positive letters");
                        }
                        Ok(i)
                    })
                    .collect()
            };
            let verdict = semigroup_words_equal(&sys, &positive(lhs)?, &positive(rhs)?)?;
            emit(
                cli.format,
                format!("equal: {verdict}\n"),
                json!({ "equal": verdict }),
                format!("equal\n{verdict}\n"),
            );
            Ok(if verdict {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Specialize { gens, p0 } => {
            let sys = load_system(&gens)?;
            let elements = certified_elements(&sys)?;
            let plan = make_plan(&elements, p0)?;
            let reduced = specialize_chunk(&elements, plan.chosen_prime)?;
            let bad: Vec<String> = plan.bad_primes.iter().map(|p| p.to_string()).collect();
            let mut text = format!(
                "c1: {}\nc2: {}\nbad primes: [{}]\nchosen prime: {}\n",
                plan.c1,
                plan.c2,
                bad.join(", "),
                plan.chosen_prime
            );
            let mut rows = vec![
                "key,value".to_string(),
                format!("c1,{}", plan.c1),
                format!("c2,{}", plan.c2),
                format!("bad_primes,{}", bad.join(";")),
                format!("chosen_prime,{}", plan.chosen_prime),
            ];
            let mut items = Vec::new();
            for (name, e) in sys.names().iter().zip(&reduced) {
                let t = render_tuple(e.forward());
                writeln!(text, "{name} -> {t}")?;
                rows.push(format!("reduced_{name},\"{t}\""));
                items.push(json!({ "name": name, "tuple": t }));
            }
            let j = json!({
                "c1": plan.c1.to_string(),
                "c2": plan.c2.to_string(),
                "bad_primes": bad,
                "chosen_prime": plan.chosen_prime,
                "reduced": items,
            });
            emit(cli.format, text, j, rows.join("\n") + "\n");
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sofic {
            gens,
            p,
            m,
            cap,
            seed,
        } => {
            let sys = load_system(&gens)?;
            let range = parse_m_range(&m)?;
            let elements = sofic_elements(&sys, p)?;
            let summary = profile_points(&elements, range, cap, seed)?;
            let (text, j, csv) = render_profile(&summary);
            emit(cli.format, text, j, csv);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::ChunkSigma {
            chunk,
            gens,
            r,
            n_max,
            search_cap,
        } => {
            let r = parse_ratio(&r)?;
            let chunk: Chunk = match (chunk, gens) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    parse_chunk(&text)?
                }
                (None, Some(path)) => {
                    let sys = load_system(&path)?;
                    chunk_of_elements(&certified_elements(&sys)?)?
                }
                (None, None) => bail!("chunk-sigma needs --chunk or --gens"),
            };
            let found = sigma_upper(&chunk, r, n_max, search_cap)?;
            let shown = found.map_or("none".to_string(), |n| n.to_string());
            let text = format!(
                "elements: {}\ntriples: {}\nsigma (r = {}): {shown}\n",
                chunk.size(),
                chunk.triples().len(),
                frac_str(r)
            );
            let j = json!({
                "elements": chunk.size(),
                "triples": chunk.triples().len(),
                "r": frac_str(r),
                "sigma": found,
            });
            let csv = format!(
                "key,value\nelements,{}\ntriples,{}\nr,{}\nsigma,{shown}\n",
                chunk.size(),
                chunk.triples().len(),
                frac_str(r)
            );
            emit(cli.format, text, j, csv);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Folner { d, side, r } => {
            let r = parse_ratio(&r)?;
            let mut generators = vec![vec![0i64; d]];
            for i in 0..d {
                for sign in [1i64, -1] {
                    let mut g = vec![0i64; d];
                    g[i] = sign;
                    generators.push(g);
                }
            }
            let witness = FolnerWitness::zd_box(d, side, generators)?;
            let result = folner_to_sofic(&witness, r);
            let (map, record) = match result {
                Ok(pair) => pair,
                Err(e @ cremona::Error::WitnessTooSmall { .. }) => {
                    // a too-small witness is the domain's "no"
                    eprintln!("{e}");
                    return Ok(ExitCode::from(1));
                }
                Err(e) => return Err(e.into()),
            };
            let mut text = format!(
                "points: {}\nboundary: {}\ngenerators: {}\n",
                record.n,
                record.boundary,
                map.len()
            );
            let mut rows = vec![
                "kind,i,j,k,value".to_string(),
                format!("points,,,,{}", record.n),
                format!("boundary,,,,{}", record.boundary),
            ];
            for &(s, a) in &record.agreements {
                writeln!(text, "agreement {s}: {}", frac_str(a))?;
                rows.push(format!("agreement,{s},,,{}", frac_str(a)));
            }
            for &(i, j, sep) in &record.separations {
                writeln!(text, "separation {i},{j}: {}", frac_str(sep))?;
                rows.push(format!("separation,{i},{j},,{}", frac_str(sep)));
            }
            for &(x, y, z, dfx) in &record.defects {
                writeln!(text, "defect {x},{y},{z}: {}", frac_str(dfx))?;
                rows.push(format!("defect,{x},{y},{z},{}", frac_str(dfx)));
            }
            writeln!(
                text,
                "verified: agreement > 1 - 1/r, separation > 1 - 2/r, defect < 3/r"
            )?;
            let j = json!({
                "points": record.n,
                "boundary": record.boundary,
                "r": frac_str(record.r),
                "agreements": record.agreements.iter()
                    .map(|&(s, a)| json!({"generator": s, "value": frac_str(a)}))
                    .collect::<Vec<_>>(),
                "separations": record.separations.iter()
                    .map(|&(i, j, v)| json!({"i": i, "j": j, "value": frac_str(v)}))
                    .collect::<Vec<_>>(),
                "defects": record.defects.iter()
                    .map(|&(x, y, z, v)| json!({"x": x, "y": y, "z": z, "value": frac_str(v)}))
                    .collect::<Vec<_>>(),
            });
            emit(cli.format, text, j, rows.join("\n") + "\n");
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Collect name-ordered certified elements, requiring declared inverses.
fn certified_elements(sys: &GeneratorSystem) -> Result<Vec<CremonaElement>> {
    sys.elements().map_err(Into::into)
}

/// Elements for a sofic run: over Q they are reduced at p first; over F_p
/// they are taken as given. Duplicates are merged.
fn sofic_elements(sys: &GeneratorSystem, p: u64) -> Result<Vec<CremonaElement>> {
    let elements = certified_elements(sys)?;
    let reduced = match sys.domain() {
        FieldSpec::Rational => specialize_chunk(&elements, p)?,
        FieldSpec::Prime(q) if *q == p => elements,
        other => bail!("generators over {other} cannot run at p = {p}"),
    };
    let mut distinct: Vec<CremonaElement> = Vec::new();
    for e in reduced {
        let mut fresh = true;
        for seen in &distinct {
            if e.forward().tuple_eq(seen.forward())? {
                fresh = false;
                break;
            }
        }
        if fresh {
            distinct.push(e);
        }
    }
    Ok(distinct)
}

fn render_profile(summary: &ProfileSummary) -> (String, Value, String) {
    let mut text = String::new();
    let mut rows = vec!["m,kind,i,j,k,value".to_string()];
    let mut reports = Vec::new();
    for report in &summary.reports {
        let m = report.m;
        writeln!(
            text,
            "m = {m}: q = {}^{m}, n = {}, epsilon = {}",
            report.p,
            report.n,
            frac_str(report.epsilon)
        )
        .unwrap();
        rows.push(format!("{m},n,,,,{}", report.n));
        rows.push(format!("{m},epsilon,,,,{}", frac_str(report.epsilon)));
        for (i, z) in report.singular_counts.iter().enumerate() {
            writeln!(text, "  singular[{i}] = {z}").unwrap();
            rows.push(format!("{m},singular,{i},,,{z}"));
        }
        for &(i, j, k, dfx) in &report.product_defects {
            writeln!(text, "  defect({i},{j}->{k}) = {}", frac_str(dfx)).unwrap();
            rows.push(format!("{m},defect,{i},{j},{k},{}", frac_str(dfx)));
        }
        for &(i, j, sep) in &report.separations {
            writeln!(text, "  separation({i},{j}) = {}", frac_str(sep)).unwrap();
            rows.push(format!("{m},separation,{i},{j},,{}", frac_str(sep)));
        }
        reports.push(json!({
            "m": m,
            "p": report.p,
            "n": report.n,
            "epsilon": frac_str(report.epsilon),
            "singular_counts": report.singular_counts,
            "product_defects": report.product_defects.iter()
                .map(|&(i, j, k, v)| json!({"i": i, "j": j, "k": k, "value": frac_str(v)}))
                .collect::<Vec<_>>(),
            "separations": report.separations.iter()
                .map(|&(i, j, v)| json!({"i": i, "j": j, "value": frac_str(v)}))
                .collect::<Vec<_>>(),
        }));
    }
    let mut certs = Vec::new();
    for cert in &summary.certificates {
        let r = cert
            .r
            .map_or("infinite".to_string(), frac_str);
        writeln!(
            text,
            "certificate m = {}: r = {r}, n = {}",
            cert.m, cert.n
        )
        .unwrap();
        rows.push(format!("{},certificate_r,,,,{r}", cert.m));
        certs.push(json!({
            "m": cert.m,
            "n": cert.n,
            "epsilon": frac_str(cert.epsilon),
            "r": cert.r.map(frac_str),
        }));
    }
    match summary.slope {
        Some(slope) => {
            writeln!(text, "slope: {slope:.4}").unwrap();
            rows.push(format!(",slope,,,,{slope:.4}"));
        }
        None => {
            writeln!(text, "slope: undetermined").unwrap();
            rows.push(",slope,,,,undetermined".to_string());
        }
    }
    let j = json!({
        "reports": reports,
        "certificates": certs,
        "slope": summary.slope,
    });
    (text, j, rows.join("\n") + "\n")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
