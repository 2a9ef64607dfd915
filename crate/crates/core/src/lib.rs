//! Word-level analysis of multi-word keyword corpora.
//!
//! Keywords are split into words, and each word gets a class: form word (FW),
//! eponym (EW), acronym (AC) or semantic word (SW). A semantic word is further
//! graded by how many subjects it belongs to, its context degree `D(C)`. The
//! [`metrics`] module counts frequencies `f`, associations `a` and carrier
//! keywords `k` per category and derives the ratios `WD(A)`, `WC(A)` and
//! `KD(F)` from them. [`report`] renders everything as Markdown, CSV and JSON.
//!
//! ```
//! use wordship::analysis::Analysis;
//! use wordship::classify::Lexicons;
//! use wordship::context::{RetryPolicy, SubjectLexicon, SubjectNormalizer};
//! use wordship::corpus::{ingest, ArticleRef, IngestOptions, KeywordRecord};
//! use wordship::metrics::CategoryKey;
//!
//! let lexicons = Lexicons::english().with_eponyms(["hall"])?;
//! let records = vec![
//!     KeywordRecord::new(ArticleRef::new("A1", 2008), "Quantum Hall effect"),
//!     KeywordRecord::new(ArticleRef::new("A2", 2009), "quantum dots"),
//! ];
//! let corpus = ingest(records, &IngestOptions::default(), &lexicons)?;
//!
//! let subjects = SubjectLexicon::from_entries("dict", [
//!     ("quantum", vec!["physics"]),
//!     ("effect", vec!["physics", "law"]),
//!     ("dot", vec!["printing", "music", "physics"]),
//! ]);
//! let analysis = Analysis::new(corpus, &lexicons)?.with_contexts(
//!     &[&subjects],
//!     &SubjectNormalizer::default(),
//!     &RetryPolicy::no_wait(0),
//! );
//!
//! // One distinct one-context word ("quantum"), found in two keywords.
//! let one = analysis.triple(CategoryKey::Semantic(1));
//! assert_eq!((one.f, one.a, one.k), (1, 2, 2));
//! let hall = analysis.triple(CategoryKey::Eponymous);
//! assert_eq!((hall.f, hall.a, hall.k), (1, 2, 1));
//! # Ok::<(), wordship::Error>(())
//! ```

pub mod analysis;
pub mod classify;
pub mod cli;
pub mod config;
pub mod context;
pub mod corpus;
pub mod error;
pub mod metrics;
pub mod numeric;
pub mod report;
pub mod stats;
mod textfile;
pub mod tokenize;

pub use error::{Error, Result};
