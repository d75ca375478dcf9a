//! End-to-end runs of the CLI against the committed fixtures, plus
//! network paths against throwaway local HTTP servers.

use std::io::{Read, Write};
use std::net::TcpListener;
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;

use token_auditor::cli::run;
use token_auditor::corpus::TOOL_VERSION;

// Tests that read TOKEN_AUDITOR_API_KEY serialize on this; the
// process environment is shared across test threads.
static ENV_LOCK: Mutex<()> = Mutex::new(());

fn with_api_key<R>(f: impl FnOnce() -> R) -> R {
    let _guard = ENV_LOCK.lock().unwrap_or_else(|e| e.into_inner());
    std::env::set_var("TOKEN_AUDITOR_API_KEY", "testkey");
    f()
}

fn run_cli(args: &[&str]) -> (i32, String, String) {
    let mut stdout = Vec::new();
    let mut stderr = Vec::new();
    let argv =
        std::iter::once("token-auditor".to_string()).chain(args.iter().map(|s| s.to_string()));
    let code = run(argv, &mut stdout, &mut stderr);
    (
        code,
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

enum Stub {
    Json(String),
    Status(u16),
    Hangup,
}

/// Serves the scripted responses to sequential connections, recording
/// each request line.
fn stub_server(script: Vec<Stub>) -> (String, Arc<Mutex<Vec<String>>>, JoinHandle<()>) {
    let listener = TcpListener::bind("127.0.0.1:0").expect("bind");
    let endpoint = format!("http://{}/api?module=contract", listener.local_addr().unwrap());
    let requests = Arc::new(Mutex::new(Vec::new()));
    let log = requests.clone();
    let handle = std::thread::spawn(move || {
        for response in script {
            let (mut stream, _) = listener.accept().expect("connection");
            if let Stub::Hangup = response {
                drop(stream);
                continue;
            }
            let mut head = Vec::new();
            let mut buf = [0u8; 512];
            while !head.windows(4).any(|w| w == b"\r\n\r\n") {
                match stream.read(&mut buf) {
                    Ok(0) | Err(_) => break,
                    Ok(n) => head.extend_from_slice(&buf[..n]),
                }
            }
            let first_line = String::from_utf8_lossy(&head)
                .lines()
                .next()
                .unwrap_or_default()
                .to_string();
            log.lock().unwrap().push(first_line);
            let reply = match response {
                Stub::Json(body) => format!(
                    "HTTP/1.1 200 OK\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}",
                    body.len()
                ),
                Stub::Status(code) => format!(
                    "HTTP/1.1 {code} Error\r\ncontent-length: 0\r\nconnection: close\r\n\r\n"
                ),
                Stub::Hangup => unreachable!(),
            };
            stream.write_all(reply.as_bytes()).expect("write reply");
        }
    });
    (endpoint, requests, handle)
}

fn verified_body(source: &str, name: &str) -> String {
    serde_json::json!({ "result": [{ "SourceCode": source, "ContractName": name }] }).to_string()
}

const ADDRESS: &str = "0x00112233445566778899aabbccddeeff00112233";

#[test]
fn scan_reports_json_with_exact_summary() {
    let (code, out, err) = run_cli(&["scan", &fixture("corpus.manifest")]);
    assert_eq!(code, 0, "stderr: {err}");
    assert!(err.contains("analyzed 17, administrated 10 (58.82%), ungoverned 7, unanalyzable 1"));
    let doc: serde_json::Value = serde_json::from_str(&out).expect("stdout is JSON");
    assert_eq!(doc["version"], TOOL_VERSION);
    assert_eq!(doc["reports"].as_array().unwrap().len(), 18);
    assert_eq!(doc["stats"]["fraction"], "0.5882");
    assert_eq!(doc["stats"]["labels"]["accuracy"], "1.0000");
}

#[test]
fn scan_csv_rows_match_the_fixture_verdicts() {
    let (code, out, _) = run_cli(&["scan", &fixture("corpus.manifest"), "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 19);
    assert_eq!(
        lines[0],
        "id,verdict,risk_score,self_destruction,deprecation,change_of_address,mint,burn,guard_count"
    );
    assert!(lines.contains(&"kill_switch,administrated,35,1,0,0,0,0,1"));
    assert!(lines.contains(&"unparseable,unanalyzable,0,0,0,0,0,0,0"));
    assert!(lines.contains(&"kill_bytecode,administrated,35,1,0,0,0,0,0"));
}

#[test]
fn scan_out_flag_writes_the_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let (code, out, err) = run_cli(&[
        "scan",
        &fixture("corpus.manifest"),
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.is_empty(), "data must go to the file, not stdout");
    assert!(err.contains("analyzed 17"));
    let (_, direct, _) = run_cli(&["scan", &fixture("corpus.manifest")]);
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn scan_output_is_deterministic_across_runs_and_job_counts() {
    let (_, json_a, _) = run_cli(&["scan", &fixture("corpus.manifest")]);
    let (_, json_b, _) = run_cli(&["scan", &fixture("corpus.manifest")]);
    let (_, json_jobs, _) = run_cli(&["scan", &fixture("corpus.manifest"), "--jobs", "3"]);
    let (_, json_serial, _) = run_cli(&["scan", &fixture("corpus.manifest"), "--jobs", "1"]);
    assert_eq!(json_a, json_b);
    assert_eq!(json_a, json_jobs);
    assert_eq!(json_a, json_serial);
    let (_, csv_a, _) = run_cli(&["scan", &fixture("corpus.manifest"), "--format", "csv"]);
    let (_, csv_b, _) = run_cli(&["scan", &fixture("corpus.manifest"), "--format", "csv", "--jobs", "2"]);
    assert_eq!(csv_a, csv_b);
}

#[test]
fn scan_weights_override_changes_scores() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("weights.conf");
    std::fs::write(&path, "# boost\nself_destruction = 90\n").unwrap();
    let (code, out, _) = run_cli(&[
        "scan",
        &fixture("corpus.manifest"),
        "--format",
        "csv",
        "--weights",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l == "kill_switch,administrated,90,1,0,0,0,0,1"));
}

#[test]
fn scan_rejects_unknown_weight_keys_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("weights.conf");
    std::fs::write(&path, "frobnication = 5\n").unwrap();
    let (code, out, err) = run_cli(&[
        "scan",
        &fixture("corpus.manifest"),
        "--weights",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("frobnication"), "stderr: {err}");
}

#[test]
fn scan_rejects_out_of_range_weight_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("weights.conf");
    std::fs::write(&path, "mint = 101\n").unwrap();
    let (code, _, err) = run_cli(&[
        "scan",
        &fixture("corpus.manifest"),
        "--weights",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("mint") && err.contains("101"), "stderr: {err}");
}

#[test]
fn scan_dump_ast_writes_trees_to_stderr() {
    let (code, _, err) = run_cli(&["scan", &fixture("corpus.manifest"), "--dump-ast"]);
    assert_eq!(code, 0);
    assert!(err.contains("== usdt_issue"));
    assert!(err.contains("ContractDecl"));
}

#[test]
fn scan_notes_when_the_requested_target_is_missing() {
    let (code, out, _) = run_cli(&[
        "scan",
        &fixture("corpus.manifest"),
        "--target-contract",
        "NoSuchContract",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("requested contract NoSuchContract not found"));
}

#[test]
fn scan_address_entry_without_provider_is_unanalyzable_not_fatal() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("net.manifest");
    std::fs::write(
        &manifest,
        format!("onchain\tsource\t{ADDRESS}\tadministrated\n"),
    )
    .unwrap();
    let (code, out, err) = run_cli(&["scan", manifest.to_str().unwrap()]);
    assert_eq!(code, 0, "per-entry failures must not abort the scan");
    assert!(out.contains("no provider is configured"));
    assert!(err.contains("analyzed 0"));
}

#[test]
fn scan_fetches_address_entries_through_the_provider() {
    with_api_key(|| {
        let source = std::fs::read_to_string(fixture("kill_switch.sol")).unwrap();
        let (endpoint, _, server) = stub_server(vec![Stub::Json(verified_body(&source, "Killable"))]);
        let dir = tempfile::tempdir().unwrap();
        let manifest = dir.path().join("net.manifest");
        std::fs::write(
            &manifest,
            format!("onchain\tsource\t{ADDRESS}\tadministrated\n"),
        )
        .unwrap();
        let (code, out, err) = run_cli(&[
            "scan",
            manifest.to_str().unwrap(),
            "--provider",
            &endpoint,
        ]);
        server.join().unwrap();
        assert_eq!(code, 0, "stderr: {err}");
        assert!(err.contains("analyzed 1, administrated 1 (100.00%)"));
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["reports"][0]["id"], "onchain");
        assert_eq!(doc["reports"][0]["classification"]["verdict"], "administrated");
    });
}

#[test]
fn fetch_prints_the_verified_source() {
    with_api_key(|| {
        let (endpoint, requests, server) =
            stub_server(vec![Stub::Json(verified_body("contract Stub {}", "StubToken"))]);
        let (code, out, err) = run_cli(&["fetch", ADDRESS, "--provider", &endpoint]);
        server.join().unwrap();
        assert_eq!(code, 0, "stderr: {err}");
        assert_eq!(out, "contract Stub {}");
        assert!(err.contains("StubToken"));
        let first = &requests.lock().unwrap()[0];
        assert!(first.contains(&format!("address={ADDRESS}")), "request: {first}");
        assert!(first.contains("apikey=testkey"), "request: {first}");
    });
}

#[test]
fn fetch_reports_unverified_contracts_as_input_errors() {
    with_api_key(|| {
        let (endpoint, _, server) = stub_server(vec![Stub::Json(verified_body("  ", "Empty"))]);
        let (code, out, err) = run_cli(&["fetch", ADDRESS, "--provider", &endpoint]);
        server.join().unwrap();
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert!(err.contains("no verified source"), "stderr: {err}");
    });
}

#[test]
fn fetch_surfaces_http_status_failures() {
    with_api_key(|| {
        let (endpoint, _, server) = stub_server(vec![Stub::Status(404)]);
        let (code, _, err) = run_cli(&["fetch", ADDRESS, "--provider", &endpoint]);
        server.join().unwrap();
        assert_eq!(code, 1);
        assert!(err.contains("404"), "stderr: {err}");
    });
}

#[test]
fn fetch_retries_after_a_transport_failure() {
    with_api_key(|| {
        let (endpoint, requests, server) = stub_server(vec![
            Stub::Hangup,
            Stub::Json(verified_body("contract Retry {}", "Retry")),
        ]);
        let (code, out, err) = run_cli(&["fetch", ADDRESS, "--provider", &endpoint]);
        server.join().unwrap();
        assert_eq!(code, 0, "stderr: {err}");
        assert_eq!(out, "contract Retry {}");
        assert_eq!(requests.lock().unwrap().len(), 1, "only the retried request is readable");
    });
}

#[test]
fn simulate_compliant_scenario_holds_all_properties() {
    let (code, out, err) = run_cli(&["simulate", &fixture("scenarios/compliant.scn")]);
    assert_eq!(code, 0, "stderr: {err}");
    assert!(err.contains("safety: 4/4 properties hold"));
    let trace: serde_json::Value = serde_json::from_str(&out).expect("trace is JSON");
    let events = trace["events"].as_array().unwrap();
    assert_eq!(events.len(), 9);
    assert!(events.iter().all(|e| e["outcome"] == "applied"));
    assert_eq!(trace["final_state"]["total_supply"], 1_006_000);
}

#[test]
fn simulate_adversarial_scenario_rejects_attacks_yet_passes() {
    let (code, out, err) = run_cli(&["simulate", &fixture("scenarios/adversarial.scn")]);
    assert_eq!(code, 0, "rejections are not violations; stderr: {err}");
    let trace: serde_json::Value = serde_json::from_str(&out).unwrap();
    let reasons: Vec<&str> = trace["events"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|e| e["reason"].as_str())
        .collect();
    assert_eq!(
        reasons,
        [
            "NotMatured",
            "NotMatured",
            "InsufficientBalance",
            "ClockRegression",
            "MintCapExceeded",
            "NotOwner",
            "InvalidState",
            "NotOwner",
            "FeeAddressNotPayable",
            "InvalidState",
        ]
    );
    assert!(trace["verdicts"].as_array().unwrap().iter().all(|v| v["pass"] == true));
}

#[test]
fn simulate_exit_scenario_to_the_expected_final_ledger() {
    let (code, out, _) = run_cli(&["simulate", &fixture("scenarios/exit_before_execute.scn")]);
    assert_eq!(code, 0);
    let trace: serde_json::Value = serde_json::from_str(&out).unwrap();
    let events = trace["events"].as_array().unwrap();
    let last = events.last().unwrap();
    assert_eq!(last["outcome"], "rejected");
    assert_eq!(last["reason"], "InsufficientBalance");
    assert_eq!(trace["final_state"]["balances"]["migration:vault"], 250_000);
    assert_eq!(trace["final_state"]["balances"]["alice"], 0);
}

#[test]
fn simulate_output_is_byte_deterministic() {
    let (_, a, _) = run_cli(&["simulate", &fixture("scenarios/adversarial.scn")]);
    let (_, b, _) = run_cli(&["simulate", &fixture("scenarios/adversarial.scn")]);
    assert_eq!(a, b);
}

#[test]
fn simulate_parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.scn");
    std::fs::write(&path, "t=banana owner tick\n").unwrap();
    let (code, out, err) = run_cli(&["simulate", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("line 1"), "stderr: {err}");
    assert!(err.contains("banana"), "stderr: {err}");
}

#[test]
fn disasm_reads_hex_fixture_files() {
    let (code, out, _) = run_cli(&["disasm", &fixture("kill_switch.hex")]);
    assert_eq!(code, 0);
    assert_eq!(out, "00000000  CALLER\n00000001  SELFDESTRUCT\n");
}
