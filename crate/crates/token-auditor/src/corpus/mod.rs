//! Corpus-scale analysis: manifest parsing, artifact ingestion (from
//! disk or a verified-source provider), the parallel scan pipeline,
//! and aggregated reporting.

pub mod fetch;
pub mod manifest;
pub mod report;
pub mod scan;

pub use fetch::{FetchError, Fetcher};
pub use manifest::{
    ingest, load_manifest, parse_manifest, ContractArtifact, CorpusEntry, EntryKind, Location,
    ManifestEntry, ManifestError,
};
pub use report::{
    aggregate, percent_2dp, ratio_4dp, render_csv, render_json, AggregateStats, LabelStats,
    PatternCounts, ReportDocument, RiskReport, TOOL_VERSION,
};
pub use scan::{analyze_artifact, analyze_entry, pick_target, scan_corpus, AnalysisOptions};
