//! JSON lattice files and DOT export.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::lattice::FiniteLattice;
use super::poset::FinitePoset;
use crate::error::{Error, Result};

/// On-disk form of a lattice: elements, cover pairs `[lower, upper]` and an
/// optional generating set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeFile {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
}

impl LatticeFile {
    pub fn into_lattice(self) -> Result<FiniteLattice> {
        let l = FiniteLattice::from_poset(FinitePoset::new(&self.elements, &self.covers)?)?;
        match self.generators {
            Some(g) => l.with_generator_names(&g),
            None => Ok(l),
        }
    }
}

impl FiniteLattice {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: LatticeFile = serde_json::from_str(text).map_err(|e| Error::Invalid(e.to_string()))?;
        file.into_lattice()
    }

    pub fn to_file(&self) -> LatticeFile {
        let all = self.generators().len() == self.len();
        LatticeFile {
            elements: self.names().to_vec(),
            covers: self
                .poset()
                .covers()
                .iter()
                .map(|&(a, b)| (self.name(a).to_string(), self.name(b).to_string()))
                .collect(),
            generators: (!all).then(|| self.generators().iter().map(|&g| self.name(g).to_string()).collect()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("lattice files always serialize")
    }

    /// Hasse diagram in DOT: one node per element, one edge per cover,
    /// elements of equal height on one rank.
    pub fn to_dot(&self) -> String {
        let heights = self.poset().heights();
        let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=plaintext];\n");
        for i in 0..self.len() {
            let _ = writeln!(out, "  {:?};", self.name(i));
        }
        let max = heights.iter().copied().max().unwrap_or(0);
        for h in 0..=max {
            let row: Vec<String> = (0..self.len())
                .filter(|&i| heights[i] == h)
                .map(|i| format!("{:?}", self.name(i)))
                .collect();
            let _ = writeln!(out, "  {{ rank=same; {}; }}", row.join("; "));
        }
        for &(a, b) in self.poset().covers() {
            let _ = writeln!(out, "  {:?} -> {:?};", self.name(a), self.name(b));
        }
        out.push_str("}\n");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::fixtures;

    #[test]
    fn json_round_trip() {
        for l in [fixtures::m3(), fixtures::n5(), fixtures::chain(3)] {
            assert_eq!(FiniteLattice::from_json(&l.to_json()).unwrap(), l);
        }
        let m3 = fixtures::m3().with_generator_names(&["a", "b", "c"]).unwrap();
        let back = FiniteLattice::from_json(&m3.to_json()).unwrap();
        assert_eq!(back.generators(), m3.generators());
    }

    #[test]
    fn reads_hand_written_file() {
        let text = r#"{"elements": ["0", "x", "1"], "covers": [["0", "x"], ["x", "1"]]}"#;
        let l = FiniteLattice::from_json(text).unwrap();
        assert_eq!(l.len(), 3);
        assert_eq!(l.name(l.top()), "1");
        assert_eq!(l.name(l.bottom()), "0");
    }
}
