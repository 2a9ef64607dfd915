//! Report assembly and rendering to markdown, CSV and JSON.
//!
//! Every table is built once as a grid of typed cells; each output format is
//! a view of the same grid, so the formats cannot disagree.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::analysis::Analysis;
use crate::context::ContextDegree;
use crate::error::{Error, Result};
use crate::metrics::{
    CategoryKey, CategoryStats, DisciplineRanking, TrendDiagnostics, WordshipBucket, WordshipPattern,
    YearlyKeywordStats, YearlyWordStats,
};
use crate::numeric::{fixed, to_f64};

/// Decimals for ratios, indices and the two kinds of percentage.
pub const RATIO_PLACES: u32 = 2;
pub const INDEX_PLACES: u32 = 3;
pub const WORDSHIP_PERCENT_PLACES: u32 = 0;
pub const DISCIPLINE_PERCENT_PLACES: u32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(u64),
    Text(String),
    /// Exact value shown with the given number of decimals; blank when absent.
    Ratio(Option<Ratio<u64>>, u32),
    Float(Option<f64>, u32),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    pub fn display(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Ratio(r, places) => r.as_ref().map(|r| fixed(r, *places)).unwrap_or_default(),
            Cell::Float(v, places) => v
                .map(|v| format!("{v:.p$}", p = *places as usize))
                .unwrap_or_default(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Int(n) => json!(n),
            Cell::Text(s) => json!(s),
            Cell::Ratio(None, _) | Cell::Float(None, _) => Value::Null,
            Cell::Ratio(Some(r), places) => json!({
                "num": r.numer(),
                "den": r.denom(),
                "value": to_f64(r),
                "places": places,
            }),
            Cell::Float(Some(v), places) => json!({ "value": v, "places": places }),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem and JSON key.
    pub name: &'static str,
    pub title: &'static str,
    /// (snake_case key, display header).
    pub columns: Vec<(&'static str, &'static str)>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    fn new(name: &'static str, title: &'static str, columns: &[(&'static str, &'static str)]) -> Self {
        Table {
            name,
            title,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len(), "{}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, key: &str) -> Option<usize> {
        self.columns.iter().position(|(k, _)| *k == key)
    }

    /// Rendered cell of the first row whose first column displays `first`.
    pub fn lookup(&self, first: &str, key: &str) -> Option<String> {
        let col = self.column(key)?;
        self.rows
            .iter()
            .find(|r| r[0].display() == first)
            .map(|r| r[col].display())
    }

    pub fn to_markdown(&self) -> String {
        let mut out = String::new();
        let line = |cells: Vec<String>| format!("| {} |\n", cells.join(" | "));
        out.push_str(&line(self.columns.iter().map(|c| c.1.to_string()).collect()));
        out.push_str(&line(self.columns.iter().map(|_| "---".to_string()).collect()));
        for row in &self.rows {
            out.push_str(&line(row.iter().map(Cell::display).collect()));
        }
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let csv_err = |e: csv::Error| Error::Invariant(format!("csv rendering failed: {e}"));
        w.write_record(self.columns.iter().map(|c| c.0)).map_err(csv_err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::display)).map_err(csv_err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Invariant(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
    }

    fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|((key, _), cell)| (key.to_string(), cell.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        json!({
            "title": self.title,
            "columns": self.columns.iter().map(|(k, h)| json!({"key": k, "header": h})).collect::<Vec<_>>(),
            "rows": rows,
        })
    }
}

/// Things the user should look at; every format lists all of them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Warnings {
    pub rejected_records: Vec<String>,
    pub unresolved_words: Vec<String>,
    pub unmapped_subjects: Vec<String>,
}

impl Warnings {
    fn sections(&self) -> [(&'static str, &Vec<String>); 3] {
        [
            ("Rejected records", &self.rejected_records),
            ("Unresolved words", &self.unresolved_words),
            ("Unmapped subjects", &self.unmapped_subjects),
        ]
    }

    pub fn is_empty(&self) -> bool {
        self.sections().iter().all(|(_, items)| items.is_empty())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (title, items) in self.sections() {
            let _ = writeln!(out, "[{}] {}", title.to_lowercase(), items.len());
            for item in items {
                let _ = writeln!(out, "{item}");
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub generator: String,
    pub tables: Vec<Table>,
    pub series: Vec<Table>,
    pub diagnostics: Table,
    pub warnings: Warnings,
}

impl ReportBundle {
    pub fn from_analysis(analysis: &Analysis) -> Self {
        let corpus = analysis.corpus();
        let years = corpus.years();
        let span = match (years.first(), years.last()) {
            (Some(a), Some(b)) if a == b => a.to_string(),
            (Some(a), Some(b)) => format!("{a}-{b}"),
            _ => "all".to_string(),
        };
        let stats = analysis.category_table();
        let ranking = analysis.disciplines();

        let mut words = Table::new(
            "words",
            "Words in keywords",
            &[
                ("word", "Words"),
                ("frequency", "Frequency"),
                ("category", "Types of words with respective D(C)"),
                ("keywords", "No. of keywords formed"),
                ("dc", "D(C)"),
            ],
        );
        for (text, word) in corpus.words() {
            let category = analysis.classes().get(text);
            let degree = category.and_then(|c| c.context_degree).map(ContextDegree::value);
            words.push(vec![
                Cell::text(text),
                Cell::Int(word.occurrences as u64),
                Cell::text(category.map(|c| c.to_string()).unwrap_or_else(|| "?".into())),
                Cell::Int(word.keywords_formed as u64),
                degree.map_or(Cell::text(""), |d| Cell::Int(d as u64)),
            ]);
        }

        let mut subjects = Table::new(
            "subjects",
            "Broad disciplines and specific subjects",
            &[("discipline", "Broad discipline"), ("subject", "Specific subject"), ("f", "f")],
        );
        for row in &ranking.rows {
            for (subject, f) in &row.subjects {
                subjects.push(vec![Cell::text(&row.discipline), Cell::text(subject), Cell::Int(*f)]);
            }
        }

        let unresolved_words = analysis
            .unresolved_words()
            .into_iter()
            .map(|w| match analysis.contexts().unresolved.get(w) {
                Some(u) => u.to_string(),
                None => format!("unresolved word {w:?}"),
            })
            .collect();

        ReportBundle {
            generator: format!("wordship {}", env!("CARGO_PKG_VERSION")),
            tables: vec![
                keyword_stats_table(&analysis.keyword_stats(), &span),
                wordship_table(&analysis.wordship(), &analysis.keyword_stats(), &span),
                word_stats_table(&analysis.word_stats(), &span),
                words,
                subjects,
                disciplines_table(&ranking),
                parameters_table(&stats),
            ],
            series: series_tables(&stats),
            diagnostics: diagnostics_table(&analysis.diagnostics()),
            warnings: Warnings {
                rejected_records: corpus.rejections().iter().map(|r| r.to_string()).collect(),
                unresolved_words,
                unmapped_subjects: ranking.unmapped_subjects.iter().cloned().collect(),
            },
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables
            .iter()
            .chain(&self.series)
            .chain([&self.diagnostics])
            .find(|t| t.name == name)
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("# Keyword word-association report\n\nGenerated by {}.\n", self.generator);
        for table in self.tables.iter().chain(&self.series).chain([&self.diagnostics]) {
            let _ = write!(out, "\n## {}\n\n{}", table.title, table.to_markdown());
        }
        out.push_str("\n## Warnings\n");
        for (title, items) in self.warnings.sections() {
            let _ = write!(out, "\n### {title}\n\n");
            if items.is_empty() {
                out.push_str("none\n");
            }
            for item in items {
                let _ = writeln!(out, "- {item}");
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let section = |tables: &[Table]| -> Map<String, Value> {
            tables.iter().map(|t| (t.name.to_string(), t.to_json())).collect()
        };
        let doc = json!({
            "generator": self.generator,
            "tables": section(&self.tables),
            "series": section(&self.series),
            "diagnostics": self.diagnostics.to_json(),
            "warnings": self.warnings,
        });
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        Ok(text)
    }

    /// Relative path and contents of every CSV file.
    pub fn csv_files(&self) -> Result<Vec<(PathBuf, String)>> {
        let mut files = Vec::new();
        for t in self.tables.iter().chain([&self.diagnostics]) {
            files.push((Path::new("tables").join(format!("{}.csv", t.name)), t.to_csv()?));
        }
        for t in &self.series {
            files.push((Path::new("series").join(format!("{}.csv", t.name)), t.to_csv()?));
        }
        Ok(files)
    }
}

fn volumes(v: &std::collections::BTreeSet<String>) -> String {
    v.iter().cloned().collect::<Vec<_>>().join(";")
}

fn year_cells(year: Option<i32>, vols: &std::collections::BTreeSet<String>, span: &str) -> [Cell; 2] {
    match year {
        Some(y) => [Cell::text(y.to_string()), Cell::text(volumes(vols))],
        None => [Cell::text(span), Cell::text("")],
    }
}

pub fn keyword_stats_table(rows: &[YearlyKeywordStats], span: &str) -> Table {
    let mut t = Table::new(
        "keyword_stats",
        "Distribution of articles and keywords over the years",
        &[
            ("year", "Year"),
            ("volume", "Vol. No."),
            ("articles", "No. of articles (A)"),
            ("distinct_keywords", "No. of distinct keywords (B)"),
            ("keywords_per_article", "Average no. of distinct keywords per article (B/A)"),
            ("total_frequency", "Total frequency of all distinct keywords (C)"),
            ("frequency_per_keyword", "Frequency per keyword (C/B)"),
        ],
    );
    for r in rows {
        let mut row = year_cells(r.year, &r.volumes, span).to_vec();
        row.extend([
            Cell::Int(r.articles),
            Cell::Int(r.distinct_keywords),
            Cell::Ratio(r.avg_keywords_per_article(), RATIO_PLACES),
            Cell::Int(r.total_frequency),
            Cell::Ratio(r.freq_per_keyword(), RATIO_PLACES),
        ]);
        t.push(row);
    }
    t
}

pub fn wordship_table(pattern: &WordshipPattern, years: &[YearlyKeywordStats], span: &str) -> Table {
    let mut t = Table::new(
        "wordship",
        "Wordship pattern of keywords over the years",
        &[
            ("year", "Year"),
            ("volume", "Vol. No."),
            ("articles", "No. of articles"),
            ("keywords", "No. of distinct keywords (A)"),
            ("single", "Single word"),
            ("single_pct", "%"),
            ("two", "Two words"),
            ("two_pct", "%"),
            ("three", "Three words"),
            ("three_pct", "%"),
            ("more", "More than three words"),
            ("more_pct", "%"),
        ],
    );
    for y in years {
        let dist = match y.year {
            Some(year) => pattern.per_year.get(&year).cloned().unwrap_or_default(),
            None => pattern.overall.clone(),
        };
        let mut row = year_cells(y.year, &y.volumes, span).to_vec();
        row.extend([Cell::Int(y.articles), Cell::Int(dist.total())]);
        for bucket in WordshipBucket::ALL {
            row.push(Cell::Int(dist.bucket(bucket)));
            row.push(Cell::Ratio(dist.bucket_percentage(bucket), WORDSHIP_PERCENT_PLACES));
        }
        t.push(row);
    }
    t
}

pub fn word_stats_table(rows: &[YearlyWordStats], span: &str) -> Table {
    let mut t = Table::new(
        "word_stats",
        "Statistics of words in keywords over the years",
        &[
            ("year", "Year"),
            ("volume", "Vol. No."),
            ("articles", "No. of articles"),
            ("keywords", "No. of keywords (A)"),
            ("distinct_words", "No. of constituent words (C)"),
            ("word_occurrences", "Frequency of words"),
            ("keywords_per_word", "A/C"),
        ],
    );
    for r in rows {
        let mut row = year_cells(r.year, &r.volumes, span).to_vec();
        row.extend([
            Cell::Int(r.articles),
            Cell::Int(r.keywords),
            Cell::Int(r.distinct_words),
            Cell::Int(r.word_occurrences),
            Cell::Ratio(r.ratio(), RATIO_PLACES),
        ]);
        t.push(row);
    }
    t
}

pub fn disciplines_table(ranking: &DisciplineRanking) -> Table {
    let mut t = Table::new(
        "disciplines",
        "Ranking of broad disciplines by total frequency F",
        &[
            ("rank", "Rank"),
            ("discipline", "Broad disciplines"),
            ("n", "n"),
            ("total", "F"),
            ("per_subject", "F/n"),
            ("percentage", "Percentage"),
        ],
    );
    for r in &ranking.rows {
        t.push(vec![
            Cell::Int(r.rank as u64),
            Cell::text(&r.discipline),
            Cell::Int(r.n),
            Cell::Int(r.total),
            Cell::Ratio(r.per_subject(), RATIO_PLACES),
            Cell::Ratio(r.percentage, DISCIPLINE_PERCENT_PLACES),
        ]);
    }
    t
}

/// The association-parameter table for any list of triples.
pub fn parameters_table(stats: &[CategoryStats]) -> Table {
    let mut t = Table::new(
        "parameters",
        "Word association parameters for different word categories",
        &[
            ("category", "D(C)"),
            ("f", "f"),
            ("a", "a"),
            ("k", "k"),
            ("wd_a", "WD(A)"),
            ("wc_a", "WC(A)"),
            ("kd_f", "KD(F)"),
            ("wd_a_index", "WD(A)I"),
            ("wd_a_index_normalized", "WD(A)I-N"),
        ],
    );
    for s in stats {
        let p = s.parameters();
        t.push(vec![
            Cell::text(s.category.to_string()),
            Cell::Int(s.f),
            Cell::Int(s.a),
            Cell::Int(s.k),
            Cell::Ratio(p.wd_a, RATIO_PLACES),
            Cell::Ratio(p.wc_a, RATIO_PLACES),
            Cell::Ratio(p.kd_f, RATIO_PLACES),
            Cell::Ratio(p.wd_a_index, INDEX_PLACES),
            Cell::Ratio(p.wd_a_index_normalized, INDEX_PLACES),
        ]);
    }
    t
}

fn series_tables(stats: &[CategoryStats]) -> Vec<Table> {
    let mut fig1 = Table::new(
        "fig1_categories",
        "Fundamental variables by word category",
        &[("category", "Category"), ("f", "f"), ("a", "a"), ("k", "k")],
    );
    let mut fig2 = Table::new("fig2_dc_vs_f", "Frequency of semantic words by D(C)", &[("dc", "D(C)"), ("f", "f")]);
    for s in stats {
        fig1.push(vec![Cell::text(s.category.to_string()), Cell::Int(s.f), Cell::Int(s.a), Cell::Int(s.k)]);
        if let CategoryKey::Semantic(d) = s.category {
            fig2.push(vec![Cell::Int(d as u64), Cell::Int(s.f)]);
        }
    }
    vec![fig1, fig2]
}

pub fn diagnostics_table(d: &TrendDiagnostics) -> Table {
    let mut t = Table::new("diagnostics", "Trend diagnostics", &[("metric", "Metric"), ("value", "Value")]);
    let extreme = |e: Option<crate::metrics::WcExtreme>| {
        (
            Cell::Ratio(e.map(|e| e.value), RATIO_PLACES),
            Cell::text(e.map(|e| e.category.to_string()).unwrap_or_default()),
        )
    };
    let (min, min_cat) = extreme(d.wc_a_min);
    let (max, max_cat) = extreme(d.wc_a_max);
    let status = if d.sufficient { "ok" } else { "insufficient data" };
    for (name, cell) in [
        ("status", Cell::text(status)),
        ("semantic_categories_d_ge_1", Cell::Int(d.semantic_categories as u64)),
        ("wc_a_min", min),
        ("wc_a_min_category", min_cat),
        ("wc_a_max", max),
        ("wc_a_max_category", max_cat),
        ("wc_a_spread", Cell::Ratio(d.wc_a_spread().filter(|_| d.sufficient), RATIO_PLACES)),
        ("spearman_dc_f", Cell::Float(d.spearman_dc_f, 4)),
        ("inverse_fit_c", Cell::Float(d.inverse_fit_c, 2)),
    ] {
        t.push(vec![Cell::text(name), cell]);
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    /// Markdown, CSV and JSON together.
    #[default]
    All,
    Markdown,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(OutputFormat::All),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            "csv" | "csv-directory" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::Config(format!(
                "unknown output format {other:?} (expected all, markdown, csv or json)"
            ))),
        }
    }
}

/// Files of the report in `format`, as (relative path, contents).
pub fn report_files(bundle: &ReportBundle, format: OutputFormat) -> Result<Vec<(PathBuf, String)>> {
    let mut files = vec![(PathBuf::from("warnings.txt"), bundle.warnings.to_text())];
    if matches!(format, OutputFormat::All | OutputFormat::Markdown) {
        files.push(("report.md".into(), bundle.to_markdown()));
    }
    if matches!(format, OutputFormat::All | OutputFormat::Json) {
        files.push(("report.json".into(), bundle.to_json()?));
    }
    if matches!(format, OutputFormat::All | OutputFormat::Csv) {
        files.extend(bundle.csv_files()?);
    }
    Ok(files)
}

/// Writes the report into `out`. Files are staged next to `out` and moved
/// into place at the end, so a failure leaves no partial report. An existing
/// `out` is replaced only if it is empty or holds an earlier report.
pub fn render(bundle: &ReportBundle, format: OutputFormat, out: &Path) -> Result<()> {
    let output_err = |message: String| Error::Output {
        path: out.to_path_buf(),
        message,
    };
    let parent = match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&parent).map_err(|e| output_err(e.to_string()))?;
    if out.exists() {
        if !out.is_dir() {
            return Err(output_err("exists and is not a directory".into()));
        }
        let empty = fs::read_dir(out).map_err(|e| output_err(e.to_string()))?.next().is_none();
        if !empty && !out.join("warnings.txt").is_file() {
            return Err(output_err("not empty and not an earlier report; refusing to overwrite".into()));
        }
    }

    let staging = tempfile::Builder::new()
        .prefix(".wordship-staging-")
        .tempdir_in(&parent)
        .map_err(|e| output_err(e.to_string()))?;
    for (rel, contents) in report_files(bundle, format)? {
        let path = staging.path().join(&rel);
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
        fs::write(&path, contents).map_err(|e| Error::io(&path, e))?;
    }

    let staged = staging.keep();
    let backup = if out.exists() {
        let aside = tempfile::Builder::new()
            .prefix(".wordship-previous-")
            .tempdir_in(&parent)
            .map_err(|e| output_err(e.to_string()))?
            .keep();
        fs::remove_dir(&aside).map_err(|e| Error::io(&aside, e))?;
        fs::rename(out, &aside).map_err(|e| output_err(e.to_string()))?;
        Some(aside)
    } else {
        None
    };
    if let Err(e) = fs::rename(&staged, out) {
        if let Some(aside) = &backup {
            let _ = fs::rename(aside, out);
        }
        let _ = fs::remove_dir_all(&staged);
        return Err(output_err(e.to_string()));
    }
    if let Some(aside) = backup {
        fs::remove_dir_all(&aside).map_err(|e| Error::io(&aside, e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_head() -> Vec<CategoryStats> {
        vec![
            CategoryStats::new(CategoryKey::Semantic(0), 38, 100, 99),
            CategoryStats::new(CategoryKey::Semantic(12), 7, 85, 85),
            CategoryStats::new(CategoryKey::Acronym, 0, 0, 0),
        ]
    }

    #[test]
    fn parameter_rows_render_with_printed_precision() {
        let md = parameters_table(&reference_head()).to_markdown();
        assert!(md.contains("| 0-C | 38 | 100 | 99 | 2.63 | 1.01 | 2.61 | 0.027 |  |"), "{md}");
        assert!(md.contains("| 12-C | 7 | 85 | 85 | 12.14 | 1.00 | 12.14 | 0.143 | 0.012 |"));
        assert!(md.contains("| AC | 0 | 0 | 0 |  |  |  |  |  |"));
    }

    #[test]
    fn csv_and_json_views() {
        let t = parameters_table(&reference_head());
        let csv = t.to_csv().unwrap();
        assert!(csv.starts_with("category,f,a,k,wd_a,wc_a,kd_f,wd_a_index,wd_a_index_normalized\n"));
        assert!(csv.contains("0-C,38,100,99,2.63,1.01,2.61,0.027,\n"));
        let json = t.to_json();
        assert_eq!(json["rows"][0]["wd_a"]["num"], 50);
        assert_eq!(json["rows"][0]["wd_a"]["den"], 19);
        assert!(json["rows"][0]["wd_a_index_normalized"].is_null());
        assert_eq!(t.lookup("12-C", "wd_a_index_normalized").as_deref(), Some("0.012"));
    }

    #[test]
    fn format_names() {
        assert_eq!("csv".parse::<OutputFormat>().unwrap(), OutputFormat::Csv);
        assert_eq!("md".parse::<OutputFormat>().unwrap(), OutputFormat::Markdown);
        assert!("pdf".parse::<OutputFormat>().is_err());
    }

    #[test]
    fn warnings_text_lists_every_section() {
        let w = Warnings {
            unresolved_words: vec!["unresolved word \"x\"".into()],
            ..Warnings::default()
        };
        let text = w.to_text();
        assert!(text.contains("[rejected records] 0\n"));
        assert!(text.contains("[unresolved words] 1\nunresolved word \"x\"\n"));
        assert!(!w.is_empty());
    }
}
