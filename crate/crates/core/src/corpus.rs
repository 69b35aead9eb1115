//! Checked-in reference surfaces with their known codes, and a small set of
//! curve pairs with known contact exponents.

use crate::code_model::{CodeError, InnerLipschitzCode};
use crate::strata::{code_from_strata, StrataError, StratifiedSurface};

#[derive(Debug, Clone, Copy)]
pub struct CorpusEntry {
    pub key: char,
    pub name: &'static str,
    pub strata_json: &'static str,
    pub code_json: &'static str,
}

macro_rules! entry {
    ($key:literal, $file:literal) => {
        CorpusEntry {
            key: $key,
            name: $file,
            strata_json: include_str!(concat!("../data/strata/", $file, ".json")),
            code_json: include_str!(concat!("../data/codes/", $file, ".json")),
        }
    };
}

pub const SURFACES: [CorpusEntry; 9] = [
    entry!('a', "a_right_cylinder"),
    entry!('b', "b_moebius_band"),
    entry!('c', "c_global_horn"),
    entry!('d', "d_complex_cubic"),
    entry!('e', "e_paraboloid"),
    entry!('f', "f_torus"),
    entry!('g', "g_klein_bottle"),
    entry!('h', "h_edge_of_two_spheres"),
    entry!('i', "i_cayley_surface"),
];

#[derive(Debug, Clone, PartialEq)]
pub struct EntryResult {
    pub produced: InnerLipschitzCode,
    pub expected: InnerLipschitzCode,
}

impl EntryResult {
    /// Same components in the same order, same labels, same exponents.
    pub fn exact(&self) -> bool {
        self.produced == self.expected
    }
}

impl CorpusEntry {
    pub fn surface(&self) -> Result<StratifiedSurface, StrataError> {
        StratifiedSurface::from_json(self.strata_json)
    }

    pub fn expected(&self) -> Result<InnerLipschitzCode, CodeError> {
        InnerLipschitzCode::from_json(self.code_json)
    }

    pub fn run(&self) -> Result<EntryResult, StrataError> {
        Ok(EntryResult { produced: code_from_strata(&self.surface()?)?, expected: self.expected()? })
    }
}

pub fn entry(key: char) -> Option<&'static CorpusEntry> {
    SURFACES.iter().find(|e| e.key == key)
}

/// Curve pairs and their contact exponent at infinity, `None` for curves
/// that coincide far out.
pub const CONTACT_PAIRS: [(&str, &str, Option<(i64, i64)>); 10] = [
    ("t; 0", "t; t", Some((1, 1))),
    ("t; 0", "-t; 0", Some((1, 1))),
    ("t; 0", "t; -3*t", Some((1, 1))),
    ("t; 0", "t; t^(1/2)", Some((1, 2))),
    ("t; 0", "t; t^(1/3)", Some((1, 3))),
    ("t; 0", "t; 1", Some((0, 1))),
    ("t; 0", "t; t^(-1/2)", Some((-1, 2))),
    ("t; 0", "t; t^(-1)", Some((-1, 1))),
    ("t; t^(1/2)", "t; -t^(1/2)", Some((1, 2))),
    ("t; 0", "t; 0", None),
];
