//! Fetch verified contract source through an explorer-style JSON API.
//! A throwaway local HTTP server stands in for the real explorer so
//! the example runs offline; point `--provider` at a real endpoint in
//! actual use.
//!
//! Run with: cargo run --example fetch_verified_source

use std::io::{Read, Write};
use std::net::TcpListener;
use std::thread;

use token_auditor::config::ProviderConfig;
use token_auditor::corpus::Fetcher;

fn serve_one(listener: TcpListener, body: String) -> thread::JoinHandle<()> {
    thread::spawn(move || {
        let (mut stream, _) = listener.accept().expect("one request");
        let mut buf = [0u8; 2048];
        let _ = stream.read(&mut buf);
        let response = format!(
            "HTTP/1.1 200 OK\r\ncontent-type: application/json\r\ncontent-length: {}\r\nconnection: close\r\n\r\n{body}",
            body.len()
        );
        stream.write_all(response.as_bytes()).expect("write response");
    })
}

fn main() {
    let source = "contract Demo { address public owner; }";
    let body = serde_json::json!({
        "result": [{ "SourceCode": source, "ContractName": "Demo" }]
    })
    .to_string();

    let listener = TcpListener::bind("127.0.0.1:0").expect("bind");
    let endpoint = format!("http://{}/api?module=contract", listener.local_addr().unwrap());
    let server = serve_one(listener, body);

    // The API key is read from the environment, never from flags.
    std::env::set_var("TOKEN_AUDITOR_API_KEY", "demo-key");

    let mut fetcher = Fetcher::new(ProviderConfig::new(endpoint));
    let artifact = fetcher
        .fetch_source("0x00112233445566778899aabbccddeeff00112233")
        .expect("stub always answers");
    server.join().unwrap();

    println!("contract name: {}", artifact.id);
    println!("origin:        {}", artifact.origin);
    println!("sha256:        {}", artifact.digest);
    println!("\n{}", artifact.content);
}
