//! Drives the command runner from a config file, as the `unred` binary does.
//!
//! cargo run --example run_config -- configs/hopf_cancel.json /tmp/hopf

use std::path::PathBuf;

use unred::config::RunConfig;
use unred::runner::run;

fn main() {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "configs/sigma_exp.json".into());
    let out = args.next().map(PathBuf::from).unwrap_or_else(|| std::env::temp_dir().join("unred_example"));
    let cfg = match RunConfig::from_file(&path, None) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    let outcome = run(&cfg, Some(&out));
    println!("{}", serde_json::to_string_pretty(&outcome.manifest).unwrap());
    std::process::exit(outcome.manifest.exit_code);
}
