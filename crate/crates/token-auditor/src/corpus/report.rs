//! Per-artifact risk reports, corpus aggregation, and deterministic
//! JSON and CSV rendering.

use serde::Serialize;

use crate::classify::{Classification, Verdict};
use crate::detect::Finding;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskReport {
    pub id: String,
    /// None when the artifact could not be analyzed at all.
    pub classification: Option<Classification>,
    pub findings: Vec<Finding>,
    pub diagnostics: String,
    pub tool_version: String,
    pub digest: String,
}

impl RiskReport {
    pub fn verdict_str(&self) -> &'static str {
        match &self.classification {
            Some(c) => c.verdict.as_str(),
            None => "unanalyzable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PatternCounts {
    pub self_destruction: usize,
    pub deprecation: usize,
    pub change_of_address: usize,
    pub mint: usize,
    pub burn: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelStats {
    pub matches: usize,
    pub mismatches: usize,
    /// matches / labeled, four decimals, half-up. Kept as text so
    /// serialization is stable across platforms.
    pub accuracy: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AggregateStats {
    /// Artifacts that produced a classification.
    pub total: usize,
    pub administrated: usize,
    pub ungoverned: usize,
    pub unanalyzable: usize,
    /// administrated / total, four decimals, half-up.
    pub fraction: String,
    /// Number of classified artifacts exhibiting each pattern.
    pub per_pattern: PatternCounts,
    /// Present only when at least one classified artifact is labeled.
    pub labels: Option<LabelStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDocument {
    pub version: String,
    pub reports: Vec<RiskReport>,
    pub stats: AggregateStats,
}

/// numerator/denominator to four decimal places, rounding half up.
/// Integer arithmetic only, so the rendering is platform-independent.
pub fn ratio_4dp(numerator: usize, denominator: usize) -> String {
    if denominator == 0 {
        return "0.0000".to_string();
    }
    let n = numerator as u128;
    let d = denominator as u128;
    let scaled = (2 * n * 10_000 + d) / (2 * d);
    format!("{}.{:04}", scaled / 10_000, scaled % 10_000)
}

/// The summary percentage with two decimals, derived from the same
/// integer rounding as `ratio_4dp` so the two never disagree.
pub fn percent_2dp(numerator: usize, denominator: usize) -> String {
    let four = ratio_4dp(numerator, denominator);
    let digits: String = four.chars().filter(|c| c.is_ascii_digit()).collect();
    let scaled: u128 = digits.parse().unwrap_or(0);
    format!("{}.{:02}", scaled / 100, scaled % 100)
}

/// Folds per-report classifications and ground-truth labels into
/// corpus statistics. `labels` runs parallel to `reports`.
pub fn aggregate(reports: &[RiskReport], labels: &[Option<Verdict>]) -> AggregateStats {
    let mut administrated = 0usize;
    let mut ungoverned = 0usize;
    let mut unanalyzable = 0usize;
    let mut per_pattern = PatternCounts {
        self_destruction: 0,
        deprecation: 0,
        change_of_address: 0,
        mint: 0,
        burn: 0,
    };
    let mut matches = 0usize;
    let mut mismatches = 0usize;
    for (idx, report) in reports.iter().enumerate() {
        let Some(classification) = &report.classification else {
            unanalyzable += 1;
            continue;
        };
        match classification.verdict {
            Verdict::Administrated => administrated += 1,
            Verdict::EffectivelyUngoverned => ungoverned += 1,
        }
        let f = &classification.features;
        if f.has_self_destruction || f.bytecode_self_destruct {
            per_pattern.self_destruction += 1;
        }
        if f.has_deprecation {
            per_pattern.deprecation += 1;
        }
        if f.has_address_change {
            per_pattern.change_of_address += 1;
        }
        if f.has_mint {
            per_pattern.mint += 1;
        }
        if f.has_burn {
            per_pattern.burn += 1;
        }
        if let Some(Some(label)) = labels.get(idx) {
            if *label == classification.verdict {
                matches += 1;
            } else {
                mismatches += 1;
            }
        }
    }
    let total = administrated + ungoverned;
    let labels = if matches + mismatches > 0 {
        Some(LabelStats {
            matches,
            mismatches,
            accuracy: ratio_4dp(matches, matches + mismatches),
        })
    } else {
        None
    };
    AggregateStats {
        total,
        administrated,
        ungoverned,
        unanalyzable,
        fraction: ratio_4dp(administrated, total),
        per_pattern,
        labels,
    }
}

/// Pretty JSON with a trailing newline. Map keys are struct fields in
/// declaration order, so equal inputs render byte-identically.
pub fn render_json(document: &ReportDocument) -> String {
    let mut out = serde_json::to_string_pretty(document).expect("report serializes");
    out.push('\n');
    out
}

/// One row per report. Boolean pattern columns are 0/1; unanalyzable
/// artifacts keep zeros everywhere.
pub fn render_csv(reports: &[RiskReport]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record([
            "id",
            "verdict",
            "risk_score",
            "self_destruction",
            "deprecation",
            "change_of_address",
            "mint",
            "burn",
            "guard_count",
        ])
        .expect("csv header");
    for report in reports {
        let (risk, flags, guard_count) = match &report.classification {
            Some(c) => {
                let f = &c.features;
                (
                    c.risk_score,
                    [
                        f.has_self_destruction || f.bytecode_self_destruct,
                        f.has_deprecation,
                        f.has_address_change,
                        f.has_mint,
                        f.has_burn,
                    ],
                    f.guard_count,
                )
            }
            None => (0, [false; 5], 0),
        };
        let mut row: Vec<String> = vec![
            report.id.clone(),
            report.verdict_str().to_string(),
            risk.to_string(),
        ];
        row.extend(flags.iter().map(|b| if *b { "1" } else { "0" }.to_string()));
        row.push(guard_count.to_string());
        writer.write_record(&row).expect("csv row");
    }
    String::from_utf8(writer.into_inner().expect("csv flush")).expect("csv is utf-8")
}
