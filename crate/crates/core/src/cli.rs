//! The `wordship` command line.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analysis::Analysis;
use crate::classify::{classify_corpus, classify_word, Lexicons};
use crate::config::Config;
use crate::context::{fetch_and_cache, ContextCache, ContextProvider, FetchOptions, SubjectLexicon};
use crate::corpus::{ingest, read_records};
use crate::error::{Error, Result};
use crate::report::{render, OutputFormat, ReportBundle};
use crate::textfile;
use crate::tokenize::{decompose, wordship};

#[derive(Debug, Parser)]
#[command(name = "wordship", version, about = "Word-association statistics for keyword corpora")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ingest a corpus, compute every table and write a report directory.
    Analyze {
        /// CSV or NDJSON keyword records.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// all, markdown, csv or json; overrides the configuration.
        #[arg(long)]
        format: Option<String>,
    },
    /// Look words up with an offline subject lexicon and append the answers to a cache.
    FetchContexts {
        /// Word list (one per line), or a corpus file whose semantic words are fetched.
        #[arg(long)]
        input: PathBuf,
        /// `name=path/to/lexicon.tsv`, or the name of a lexicon provider in the configuration.
        #[arg(long)]
        provider: String,
        #[arg(long)]
        cache: PathBuf,
        /// Lookups per second.
        #[arg(long)]
        rate_limit: Option<f64>,
        /// Extra attempts after a transport failure.
        #[arg(long)]
        retries: Option<u32>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Show how one keyword is decomposed.
    Tokenize {
        keyword: String,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Load every configured lexicon and check that they are consistent.
    ValidateLexicons {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match run(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<Config> {
    match path {
        Some(p) => Config::load(p),
        None => Ok(Config::default()),
    }
}

fn io_out(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

pub fn run(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Analyze {
            input,
            config,
            out: dir,
            format,
        } => {
            let config = load_config(config.as_deref())?;
            let format = match format {
                Some(f) => f.parse::<OutputFormat>()?,
                None => config.output_format(),
            };
            let lexicons = config.lexicons()?;
            let batch = read_records(&input)?;
            let corpus = ingest(batch.records, &config.ingest_options()?, &lexicons)?
                .with_reader_rejections(batch.rejections);
            let cache = config.open_cache()?;
            let providers = config.providers(&cache)?;
            let refs: Vec<&dyn ContextProvider> = providers.iter().map(|p| p.as_ref()).collect();
            let analysis = Analysis::new(corpus, &lexicons)?
                .with_association(config.metrics)
                .with_discipline_map(config.discipline_map()?)
                .with_contexts(&refs, &config.normalizer()?, &config.retry_policy());
            analysis.check_invariants()?;
            let bundle = ReportBundle::from_analysis(&analysis);
            render(&bundle, format, &dir)?;
            let w = &bundle.warnings;
            writeln!(
                out,
                "{} keywords, {} words; report written to {}",
                analysis.corpus().keywords().len(),
                analysis.corpus().words().len(),
                dir.display()
            )
            .map_err(io_out)?;
            if !w.is_empty() {
                let _ = writeln!(
                    err,
                    "warnings: {} rejected records, {} unresolved words, {} unmapped subjects (see warnings.txt)",
                    w.rejected_records.len(),
                    w.unresolved_words.len(),
                    w.unmapped_subjects.len()
                );
            }
            Ok(())
        }
        Command::FetchContexts {
            input,
            provider,
            cache,
            rate_limit,
            retries,
            config,
        } => {
            let config = load_config(config.as_deref())?;
            let lexicon = match provider.split_once('=') {
                Some((name, path)) => SubjectLexicon::from_file(name.trim(), Path::new(path.trim()))?,
                None => config.lexicon_provider(&provider)?,
            };
            let words = fetch_words(&input, &config)?;
            let mut cache = ContextCache::open(&cache)?;
            let mut policy = config.retry_policy();
            if let Some(r) = retries {
                policy.retries = r;
            }
            let options = FetchOptions { rate_limit, policy };
            let report = fetch_and_cache(
                words.iter().map(String::as_str),
                &lexicon,
                &mut cache,
                &config.normalizer()?,
                &options,
            )?;
            writeln!(
                out,
                "fetched {}, already cached {}, unresolved {}",
                report.fetched.len(),
                report.already_cached.len(),
                report.unresolved.len()
            )
            .map_err(io_out)?;
            for u in &report.unresolved {
                let _ = writeln!(err, "{u}");
            }
            Ok(())
        }
        Command::Tokenize { keyword, config } => {
            let config = load_config(config.as_deref())?;
            let lexicons = config.lexicons()?;
            let seq = decompose(&keyword, &config.normalization()?, &lexicons)?;
            let mut text = String::from("#\tword\tgroup\tclass\n");
            for (i, t) in seq.tokens().iter().enumerate() {
                let class = classify_word(&t.word, &lexicons, &t.surface)?;
                let group = t.group.map_or("-".to_string(), |g| g.to_string());
                text.push_str(&format!("{}\t{}\t{}\t{}\n", i + 1, t.word, group, class));
            }
            text.push_str(&format!("canonical: {}\nwordship: {}\n", seq.render(), wordship(&seq)));
            out.write_all(text.as_bytes()).map_err(io_out)
        }
        Command::ValidateLexicons { config } => {
            let config = load_config(config.as_deref())?;
            let lexicons = config.lexicons()?;
            lexicons.validate()?;
            let rules = config.normalization()?;
            let map = config.discipline_map()?;
            config.normalizer()?;
            let cache = config.open_cache()?;
            let providers = config.providers(&cache)?;
            writeln!(
                out,
                "form words {}, eponyms {}, acronyms {}, plural exceptions {}, subjects mapped {} into {} disciplines, providers {}: ok",
                lexicons.form_words().len(),
                lexicons.eponyms().len(),
                lexicons.acronyms().len(),
                rules.exceptions.len(),
                map.len(),
                map.disciplines().len(),
                providers.len()
            )
            .map_err(io_out)
        }
    }
}

/// Words to fetch: a word list, or the semantic words of a corpus file.
fn fetch_words(input: &Path, config: &Config) -> Result<BTreeSet<String>> {
    let ext = input.extension().and_then(|e| e.to_str()).unwrap_or("");
    if matches!(ext, "csv" | "jsonl" | "ndjson" | "json") {
        let lexicons: Lexicons = config.lexicons()?;
        let batch = read_records(input)?;
        let corpus = ingest(batch.records, &config.ingest_options()?, &lexicons)?;
        let classes = classify_corpus(&corpus, &lexicons)?;
        return Ok(classes.semantic_words().map(str::to_string).collect());
    }
    let text = textfile::read(input)?;
    Ok(textfile::parse_word_list(&text).into_iter().collect())
}
