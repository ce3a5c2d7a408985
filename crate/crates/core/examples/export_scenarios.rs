//! Writes every built-in scenario as JSON into the given directory
//! (default `scenarios/`).

use std::path::PathBuf;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(
        std::env::args()
            .nth(1)
            .unwrap_or_else(|| "scenarios".into()),
    );
    std::fs::create_dir_all(&dir)?;
    for spec in revdyn::scenario::builtin_scenarios() {
        let path = dir.join(format!("{}.json", spec.name));
        std::fs::write(&path, spec.to_json())?;
        println!("{}", path.display());
    }
    Ok(())
}
