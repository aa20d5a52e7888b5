//! Reading and writing spectra files, and resolving base names.

use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use sinecone_core::catalog::{product_base, sphere_base, ProductMarker};
use sinecone_core::exactreal::QuadReal;
use sinecone_core::spectra::{GeometricSpectrum, Violation};

use crate::json::SpectrumFile;

pub const DATA_DIR_VAR: &str = "SINECONE_DATA_DIR";

#[derive(Debug)]
pub enum LoadError {
    Io { path: PathBuf, source: io::Error },
    Parse { path: PathBuf, message: String },
    InvariantViolation { source: String, violations: Vec<String> },
    UnknownInput(String),
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LoadError::Io { path, source } => write!(f, "{}: {source}", path.display()),
            LoadError::Parse { path, message } => write!(f, "{}: {message}", path.display()),
            LoadError::InvariantViolation { source, violations } => {
                write!(f, "{source}: {}", violations.join("; "))
            }
            LoadError::UnknownInput(s) => write!(
                f,
                "cannot resolve input {s:?}: not a file, not under the data directory, and not sphere:N or product:AxB"
            ),
        }
    }
}

impl std::error::Error for LoadError {}

/// A validated base and the warnings it raised.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub spectrum: GeometricSpectrum,
    pub warnings: Vec<Violation>,
}

/// Root of the data directory: `$SINECONE_DATA_DIR`, else `./data`.
pub fn data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("data"))
}

fn validated(gs: GeometricSpectrum, source: &str, strict_obata: bool) -> Result<Loaded, LoadError> {
    let v = gs.validate(strict_obata);
    if !v.is_ok() {
        return Err(LoadError::InvariantViolation {
            source: source.to_string(),
            violations: v.errors.iter().map(ToString::to_string).collect(),
        });
    }
    Ok(Loaded {
        spectrum: gs,
        warnings: v.warnings,
    })
}

pub fn parse_geometric_spectrum(text: &str, path: &Path, strict_obata: bool) -> Result<Loaded, LoadError> {
    let file: SpectrumFile = serde_json::from_str(text).map_err(|e| LoadError::Parse {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    let above = file.lines_above_cutoff();
    if !above.is_empty() {
        return Err(LoadError::InvariantViolation {
            source: path.display().to_string(),
            violations: above
                .iter()
                .map(|(s, v)| format!("{s} lists {v} above its completeness cutoff"))
                .collect(),
        });
    }
    validated(file.to_geometric(), &path.display().to_string(), strict_obata)
}

pub fn load_geometric_spectrum(path: &Path, strict_obata: bool) -> Result<Loaded, LoadError> {
    let text = fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_geometric_spectrum(&text, path, strict_obata)
}

pub fn to_json_string(gs: &GeometricSpectrum) -> String {
    serde_json::to_string_pretty(&SpectrumFile::from_geometric(gs)).expect("spectra always serialize")
}

pub fn save_geometric_spectrum(gs: &GeometricSpectrum, path: &Path) -> io::Result<()> {
    let mut text = to_json_string(gs);
    text.push('\n');
    fs::write(path, text)
}

/// Built-in bases: `sphere:N` (Laplace spectrum only, complete up to
/// `sphere_cutoff`) and `product:AxB` (strictly stable factors).
pub fn builtin(name: &str, sphere_cutoff: &QuadReal) -> Option<Result<GeometricSpectrum, String>> {
    if let Some(n) = name.strip_prefix("sphere:") {
        return Some(match n.parse::<u32>() {
            Ok(n) if n >= 2 => Ok(sphere_base(n, sphere_cutoff)),
            _ => Err(format!("invalid sphere dimension in {name:?}; need an integer >= 2")),
        });
    }
    if let Some(dims) = name.strip_prefix("product:") {
        let parsed = dims
            .split_once('x')
            .and_then(|(a, b)| Some((a.parse::<u32>().ok()?, b.parse::<u32>().ok()?)));
        return Some(match parsed {
            Some((a, b)) if a >= 2 && b >= 2 => Ok(product_base(&ProductMarker::new(a, b))),
            _ => Err(format!("invalid product {name:?}; expected product:AxB with A, B >= 2")),
        });
    }
    None
}

/// Resolves an input name: a built-in, an existing path, or a file under
/// `user/` or `spheres/` of the data directory.
pub fn resolve_input(name: &str, sphere_cutoff: &QuadReal, strict_obata: bool) -> Result<Loaded, LoadError> {
    if let Some(b) = builtin(name, sphere_cutoff) {
        let gs = b.map_err(|m| LoadError::InvariantViolation {
            source: name.to_string(),
            violations: vec![m],
        })?;
        return validated(gs, name, strict_obata);
    }
    let direct = PathBuf::from(name);
    if direct.exists() {
        return load_geometric_spectrum(&direct, strict_obata);
    }
    let root = data_dir();
    for sub in ["user", "spheres"] {
        let candidate = root.join(sub).join(name);
        if candidate.exists() {
            return load_geometric_spectrum(&candidate, strict_obata);
        }
    }
    Err(LoadError::UnknownInput(name.to_string()))
}
