// SPDX-License-Identifier: Apache-2.0

//! Exhaustive checks of the Boolean forms the adder cells are built from.

use super::verify::all_vectors;

/// One brute-forced comparison of a formula against its target function.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub rows: usize,
    /// Assignments on which formula and target differ.
    pub mismatches: Vec<Vec<bool>>,
    /// Assignments on which they are supposed to differ; empty for a true
    /// identity.
    pub expected_mismatches: Vec<Vec<bool>>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.mismatches == self.expected_mismatches
    }
}

fn majority(v: &[bool]) -> bool {
    v.iter().filter(|&&b| b).count() >= 2
}

fn parity(v: &[bool]) -> bool {
    v.iter().filter(|&&b| b).count() % 2 == 1
}

type Formula = fn(bool, bool, bool) -> bool;

fn check3(name: &'static str, formula: Formula, target: fn(&[bool]) -> bool) -> IdentityCheck {
    let vectors = all_vectors(3);
    IdentityCheck {
        name,
        rows: vectors.len(),
        mismatches: vectors
            .iter()
            .filter(|v| formula(v[0], v[1], v[2]) != target(v))
            .cloned()
            .collect(),
        expected_mismatches: Vec::new(),
    }
}

fn check2(
    name: &'static str,
    formula: fn(bool, bool) -> bool,
    expected_mismatches: Vec<Vec<bool>>,
) -> IdentityCheck {
    let vectors = all_vectors(2);
    IdentityCheck {
        name,
        rows: vectors.len(),
        mismatches: vectors
            .iter()
            .filter(|v| formula(v[0], v[1]) != (v[0] && v[1]))
            .cloned()
            .collect(),
        expected_mismatches,
    }
}

/// Every check, in a fixed order. All of them pass when the forms are what
/// the cells assume, including the negative check, which pins that
/// `(a' + b')b` (that is, `a'b`) is not `ab`.
pub fn check_identities() -> Vec<IdentityCheck> {
    vec![
        check3("sum a^b^c is parity", |a, b, c| a ^ b ^ c, parity),
        check3("carry ab + bc + ca is majority", |a, b, c| (a && b) || (b && c) || (c && a), majority),
        check3("carry ab + (a^b)c is majority", |a, b, c| (a && b) || ((a ^ b) && c), majority),
        check3("carry ab(a^b)' + (a^b)c is majority", |a, b, c| (a && b && !(a ^ b)) || ((a ^ b) && c), majority),
        check3("carry (a'b)'b + (a^b)c is majority", |a, b, c| (!(!a && b) && b) || ((a ^ b) && c), majority),
        check3("carry (a^b)'a + (a^b)c is majority", |a, b, c| (!(a ^ b) && a) || ((a ^ b) && c), majority),
        check3("sum (a^b)c' + (a^b)'c is parity", |a, b, c| ((a ^ b) && !c) || (!(a ^ b) && c), parity),
        check2("(a'b)'b is ab", |a, b| !(!a && b) && b, Vec::new()),
        check2(
            "(a'+b')b differs from ab where b=1",
            |a, b| (!a || !b) && b,
            vec![vec![false, true], vec![true, true]],
        ),
    ]
}
