//! File ingestion and CSV output, with exit-code classification.

use std::fmt::Write as _;
use std::path::Path;

use sphconvex::cones::parse_cone_json;
use sphconvex::linalg::parse_matrix_text;
use sphconvex::{Cone, Error, SymMatrix};

use crate::{EXIT_DATA, EXIT_USAGE};

/// A failure with a classified exit code.
#[derive(Debug)]
pub enum CliError {
    /// Malformed or inconsistent input files (exit 65).
    Data(String),
    /// Invalid flag values (exit 64).
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Data(_) => EXIT_DATA,
            CliError::Usage(_) => EXIT_USAGE,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Data(m) | CliError::Usage(m) => m,
        }
    }
}

/// Any core error surfacing during command execution concerns the data,
/// not the flags.
pub fn core_err(e: Error) -> CliError {
    CliError::Data(e.to_string())
}

pub fn load_matrix(path: &Path) -> Result<SymMatrix, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let parsed = match parse_matrix_text(&text) {
        Ok(p) => p,
        Err(Error::MatrixParse { line, col, msg }) => {
            return Err(CliError::Data(format!(
                "{}:{line}:{col}: {msg}",
                path.display()
            )));
        }
        Err(e) => return Err(CliError::Data(format!("{}: {e}", path.display()))),
    };
    if parsed.max_asymmetry > 1e-9 {
        eprintln!(
            "warning: {} is not symmetric (max |a_ij - a_ji| = {:e}); using the symmetric part",
            path.display(),
            parsed.max_asymmetry
        );
    }
    Ok(parsed.matrix)
}

pub fn load_cone(path: &Path) -> Result<Cone, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    parse_cone_json(&text).map_err(|e| match e {
        Error::ConeParse { msg } => CliError::Data(format!("{}: {msg}", path.display())),
        other => CliError::Data(format!("{}: {other}", path.display())),
    })
}

/// Writes sampled margins as `criterion,index,margin` rows; floats use
/// the shortest representation that parses back to the same value.
pub fn write_margins(path: &Path, rows: &[(&'static str, u64, f64)]) -> Result<(), CliError> {
    let mut out = String::with_capacity(32 * (rows.len() + 1));
    out.push_str("criterion,index,margin\n");
    for (criterion, index, margin) in rows {
        let _ = writeln!(out, "{criterion},{index},{margin}");
    }
    std::fs::write(path, out).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}
