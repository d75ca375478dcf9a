fn main() { std::process::exit(token_auditor::cli::run_from_env()); }
