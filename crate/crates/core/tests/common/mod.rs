// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::fs;
use std::path::PathBuf;

pub fn repo_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// Compares `actual` with the checked-in file, or rewrites the file when
/// `ADDERSIM_BLESS=1`.
pub fn check_golden(relative: &str, actual: &str) {
    let path = repo_root().join(relative);
    if std::env::var("ADDERSIM_BLESS").as_deref() == Ok("1") {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, actual).unwrap();
        return;
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("{}: {e} (run with ADDERSIM_BLESS=1 to create)", path.display()));
    assert_eq!(expected, actual, "{relative} differs from the checked-in golden");
}
