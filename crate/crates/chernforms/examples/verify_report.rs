//! Runs one harness scenario in-process and prints its markdown report.

use chernforms::harness::{emit_report, run_named, Config, Format};

fn main() -> chernforms::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "bott_r2".to_string());
    let report = run_named(&name, &Config::default())?;
    print!("{}", String::from_utf8_lossy(&emit_report(&report, Format::Markdown)));
    Ok(())
}
