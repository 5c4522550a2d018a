//! Test support: brute-force reference implementations that share no code
//! with the library, proptest strategies for annotation graphs, and paths to
//! the bundled fixtures.
//!
//! The oracles favour obviousness over speed. Each one follows the textbook
//! definition with linear scans over plain vectors.

use std::path::PathBuf;

pub mod gen;
pub mod gradcheck;
pub mod oracle;
pub mod search;

/// Workspace-level `fixtures/` directory.
pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture(rel: &str) -> PathBuf {
    fixtures_dir().join(rel)
}

pub fn read_fixture(rel: &str) -> String {
    let p = fixture(rel);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}
