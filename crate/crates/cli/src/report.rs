//! CSV and JSON artifact emission. All numeric CSV fields carry 17
//! significant digits so repeated runs are byte-identical and lossless.

use std::io::Write;
use std::path::Path;

use serde_json::json;

use crate::config::ConfigFile;
use crate::error::CliError;

/// Full-precision decimal rendering (17 significant digits).
pub fn fmt_full(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes a CSV file with a header row; fields are written verbatim.
pub fn write_csv(
    path: &Path,
    header: &[&str],
    rows: impl IntoIterator<Item = Vec<String>>,
) -> Result<(), CliError> {
    let mut file = std::fs::File::create(path)?;
    writeln!(file, "{}", header.join(","))?;
    for row in rows {
        writeln!(file, "{}", row.join(","))?;
    }
    Ok(())
}

/// Newton iteration counts of one simulation run.
pub struct RunTrace {
    pub elements: usize,
    pub newton_iterations: Vec<usize>,
}

/// Writes `report.json`: config echo, per-step Newton iteration counts,
/// wall-clock seconds, and the version tag.
pub fn write_report_json(
    path: &Path,
    config: &ConfigFile,
    runs: &[RunTrace],
    wall_seconds: f64,
) -> Result<(), CliError> {
    let runs_json: Vec<_> = runs
        .iter()
        .map(|r| {
            json!({
                "elements": r.elements,
                "newton_iterations": r.newton_iterations,
            })
        })
        .collect();
    let doc = json!({
        "config": config,
        "runs": runs_json,
        "wall_seconds": wall_seconds,
        "version": crate::version_string(),
    });
    let mut file = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut file, &doc)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    writeln!(file)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_full_precision() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_csv(
            &path,
            &["a", "b"],
            vec![vec![fmt_full(1.0 / 3.0), fmt_full(2.0)]],
        )
        .unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "a,b");
        let row = lines.next().unwrap();
        assert!(row.starts_with("3.3333333333333331e-1"), "row = {row}");
    }

    #[test]
    fn full_precision_roundtrips() {
        for v in [0.1, -1.47828e-2, 2000.0, 1.0 / 7.0, 1e-300] {
            let s = fmt_full(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(v, back, "value {v} via {s}");
        }
    }
}
