//! Command-line driver. Exit codes: 0 success, 1 input errors
//! (unreadable files, bad flags, malformed scenarios), 2 internal
//! errors, including safety-property violations reported by
//! `simulate`. Data goes to stdout, diagnostics to stderr.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use crate::classify::Verdict;
use crate::config::{ProviderConfig, Weights};
use crate::corpus::{
    aggregate, ingest, load_manifest, percent_2dp, render_csv, render_json, scan_corpus,
    AnalysisOptions, EntryKind, Fetcher, ReportDocument, TOOL_VERSION,
};
use crate::evm::{disassemble, format_listing, parse_hex};
use crate::sim::{parse_scenario, run_scenario};
use crate::solidity::parse_source;

#[derive(Parser)]
#[command(
    name = "token-auditor",
    version,
    about = "Static analysis of administrated ERC-20 patterns, plus a timelocked-administration simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze every artifact in a corpus manifest and report findings
    Scan {
        /// Tab-separated manifest: id, kind, path-or-address, optional label
        manifest: PathBuf,
        /// Report format
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write the report here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Risk-weight overrides, one `pattern = integer` per line
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Analyze this contract name instead of the default target
        #[arg(long)]
        target_contract: Option<String>,
        /// Worker threads for the scan (at least 1)
        #[arg(long)]
        jobs: Option<usize>,
        /// Verified-source provider URL for address entries
        #[arg(long)]
        provider: Option<String>,
        /// Dump each parsed source AST to stderr as a stable debug tree
        #[arg(long)]
        dump_ast: bool,
    },
    /// Disassemble EVM bytecode from a hex file or inline hex
    Disasm {
        /// Path to a .hex/.bin-as-hex file, or the hex string itself
        input: String,
    },
    /// Fetch verified contract source for an address
    Fetch {
        /// Contract address, 0x followed by 40 hex digits
        address: String,
        /// Provider URL; use {address} as a placeholder, or the
        /// address is appended as a query parameter
        #[arg(long)]
        provider: String,
    },
    /// Run a timelocked-administration scenario and check safety
    Simulate {
        /// Line-oriented scenario file
        scenario: PathBuf,
    },
}

/// Parses `args` (argv[0] included) and runs the tool against the
/// given streams. Returns the process exit code.
pub fn run<I>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = String>,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    1
                }
            };
        }
    };
    match cli.command {
        Command::Scan {
            manifest,
            format,
            out,
            weights,
            target_contract,
            jobs,
            provider,
            dump_ast,
        } => cmd_scan(
            &manifest,
            format,
            out.as_deref(),
            weights.as_deref(),
            target_contract,
            jobs,
            provider,
            dump_ast,
            stdout,
            stderr,
        ),
        Command::Disasm { input } => cmd_disasm(&input, stdout, stderr),
        Command::Fetch { address, provider } => cmd_fetch(&address, &provider, stdout, stderr),
        Command::Simulate { scenario } => cmd_simulate(&scenario, stdout, stderr),
    }
}

/// Entry point for the binary: real argv, real streams, panics mapped
/// to exit code 2.
pub fn run_from_env() -> i32 {
    match std::panic::catch_unwind(|| {
        let mut stdout = std::io::stdout();
        let mut stderr = std::io::stderr();
        run(std::env::args(), &mut stdout, &mut stderr)
    }) {
        Ok(code) => code,
        Err(_) => {
            eprintln!("internal error: unexpected panic");
            2
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    manifest_path: &Path,
    format: Format,
    out: Option<&Path>,
    weights_path: Option<&Path>,
    target_contract: Option<String>,
    jobs: Option<usize>,
    provider: Option<String>,
    dump_ast: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    if jobs == Some(0) {
        let _ = writeln!(stderr, "--jobs must be at least 1");
        return 1;
    }
    let entries = match load_manifest(manifest_path) {
        Ok(entries) => entries,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            return 1;
        }
    };
    let mut opts = AnalysisOptions {
        target_contract,
        ..AnalysisOptions::default()
    };
    if let Some(path) = weights_path {
        let text = match fs::read_to_string(path) {
            Ok(text) => text,
            Err(e) => {
                let _ = writeln!(stderr, "cannot read weights {}: {e}", path.display());
                return 1;
            }
        };
        match Weights::parse_overrides(&text) {
            Ok(weights) => opts.weights = weights,
            Err(e) => {
                let _ = writeln!(stderr, "bad weights {}: {e}", path.display());
                return 1;
            }
        }
    }
    let mut fetcher = provider.map(|url| Fetcher::new(ProviderConfig::new(url)));
    let corpus = ingest(manifest_path, entries, fetcher.as_mut());
    if dump_ast {
        for entry in &corpus {
            if let Ok(artifact) = &entry.artifact {
                if artifact.kind == EntryKind::Source {
                    let (unit, _) = parse_source(&artifact.content);
                    let _ = writeln!(stderr, "== {} ({})", artifact.id, artifact.origin);
                    let _ = writeln!(stderr, "{unit:#?}");
                }
            }
        }
    }
    let labels: Vec<Option<Verdict>> = corpus.iter().map(|e| e.entry.label).collect();
    let reports = scan_corpus(&corpus, &opts, jobs);
    let stats = aggregate(&reports, &labels);
    let summary = format!(
        "analyzed {}, administrated {} ({}%), ungoverned {}, unanalyzable {}",
        stats.total,
        stats.administrated,
        percent_2dp(stats.administrated, stats.total),
        stats.ungoverned,
        stats.unanalyzable
    );
    let document = ReportDocument {
        version: TOOL_VERSION.to_string(),
        reports,
        stats,
    };
    let rendered = match format {
        Format::Json => render_json(&document),
        Format::Csv => render_csv(&document.reports),
    };
    if let Some(path) = out {
        if let Err(e) = fs::write(path, rendered) {
            let _ = writeln!(stderr, "cannot write {}: {e}", path.display());
            return 1;
        }
    } else {
        let _ = write!(stdout, "{rendered}");
    }
    let _ = writeln!(stderr, "{summary}");
    0
}

/// A disasm argument is a file when one exists at that path; otherwise
/// it is accepted as inline hex if it looks like hex at all.
fn read_disasm_input(input: &str) -> Result<String, String> {
    let path = Path::new(input);
    if path.is_file() {
        return fs::read_to_string(path).map_err(|e| format!("cannot read {input}: {e}"));
    }
    let trimmed = input.trim();
    let body = trimmed
        .strip_prefix("0x")
        .or_else(|| trimmed.strip_prefix("0X"))
        .unwrap_or(trimmed);
    if !body.is_empty()
        && body
            .chars()
            .all(|c| c.is_ascii_hexdigit() || c.is_ascii_whitespace())
    {
        return Ok(input.to_string());
    }
    Err(format!(
        "cannot read {input}: no such file, and the argument is not inline hex"
    ))
}

fn cmd_disasm(input: &str, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let text = match read_disasm_input(input) {
        Ok(text) => text,
        Err(message) => {
            let _ = writeln!(stderr, "{message}");
            return 1;
        }
    };
    match parse_hex(&text) {
        Ok(bytes) => {
            let _ = write!(stdout, "{}", format_listing(&disassemble(&bytes)));
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            1
        }
    }
}

fn cmd_fetch(address: &str, provider: &str, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let mut fetcher = Fetcher::new(ProviderConfig::new(provider));
    match fetcher.fetch_source(address) {
        Ok(artifact) => {
            let _ = write!(stdout, "{}", artifact.content);
            let _ = writeln!(
                stderr,
                "fetched {} ({} bytes, sha256 {})",
                artifact.id,
                artifact.content.len(),
                artifact.digest
            );
            0
        }
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            1
        }
    }
}

fn cmd_simulate(path: &Path, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let text = match fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => {
            let _ = writeln!(stderr, "cannot read scenario {}: {e}", path.display());
            return 1;
        }
    };
    let scenario = match parse_scenario(&text) {
        Ok(scenario) => scenario,
        Err(e) => {
            let _ = writeln!(stderr, "{}: {e}", path.display());
            return 1;
        }
    };
    let trace = run_scenario(&scenario);
    let mut rendered = serde_json::to_string_pretty(&trace).expect("trace serializes");
    rendered.push('\n');
    let _ = write!(stdout, "{rendered}");
    let mut failures = 0usize;
    for verdict in &trace.verdicts {
        let status = if verdict.pass { "pass" } else { "FAIL" };
        let _ = writeln!(stderr, "{} {status}  {}", verdict.property, verdict.detail);
        if !verdict.pass {
            failures += 1;
        }
    }
    if failures == 0 {
        let _ = writeln!(stderr, "safety: 4/4 properties hold");
        0
    } else {
        let _ = writeln!(stderr, "safety: {failures} of 4 properties violated");
        2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut stdout = Vec::new();
        let mut stderr = Vec::new();
        let argv = std::iter::once("token-auditor".to_string())
            .chain(args.iter().map(|s| s.to_string()));
        let code = run(argv, &mut stdout, &mut stderr);
        (
            code,
            String::from_utf8(stdout).unwrap(),
            String::from_utf8(stderr).unwrap(),
        )
    }

    #[test]
    fn help_goes_to_stdout_with_exit_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        for subcommand in ["scan", "disasm", "fetch", "simulate"] {
            assert!(out.contains(subcommand), "help misses {subcommand}");
        }
        let (code, out, _) = run_args(&["scan", "--help"]);
        assert_eq!(code, 0);
        for flag in ["--format", "--out", "--weights", "--target-contract", "--jobs"] {
            assert!(out.contains(flag), "scan help misses {flag}");
        }
    }

    #[test]
    fn unknown_flag_is_an_input_error() {
        let (code, out, err) = run_args(&["scan", "x.manifest", "--frobnicate"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert!(err.contains("--frobnicate"));
    }

    #[test]
    fn missing_subcommand_is_an_input_error() {
        let (code, _, err) = run_args(&[]);
        assert_eq!(code, 1);
        assert!(!err.is_empty());
    }

    #[test]
    fn missing_manifest_names_the_file() {
        let (code, _, err) = run_args(&["scan", "missing.manifest"]);
        assert_eq!(code, 1);
        assert!(err.contains("missing.manifest"), "stderr was {err:?}");
    }

    #[test]
    fn zero_jobs_is_rejected_before_any_io() {
        let (code, _, err) = run_args(&["scan", "missing.manifest", "--jobs", "0"]);
        assert_eq!(code, 1);
        assert!(err.contains("--jobs must be at least 1"));
    }

    #[test]
    fn disasm_accepts_inline_hex() {
        let (code, out, _) = run_args(&["disasm", "0x33ff"]);
        assert_eq!(code, 0);
        assert!(out.contains("CALLER"));
        assert!(out.contains("SELFDESTRUCT"));
    }

    #[test]
    fn disasm_rejects_odd_hex_with_position() {
        let (code, out, err) = run_args(&["disasm", "33f"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert!(err.contains("odd"), "stderr was {err:?}");
    }

    #[test]
    fn disasm_non_hex_non_file_argument_fails() {
        let (code, _, err) = run_args(&["disasm", "nosuch.hex"]);
        assert_eq!(code, 1);
        assert!(err.contains("nosuch.hex"));
    }

    #[test]
    fn fetch_rejects_a_malformed_address_without_network() {
        let (code, _, err) = run_args(&["fetch", "0x123", "--provider", "http://localhost:1"]);
        assert_eq!(code, 1);
        assert!(err.contains("address"), "stderr was {err:?}");
    }

    #[test]
    fn simulate_missing_scenario_names_the_file() {
        let (code, _, err) = run_args(&["simulate", "missing.scn"]);
        assert_eq!(code, 1);
        assert!(err.contains("missing.scn"));
    }
}
