//! Whitman's condition (W) and Dean's condition (D) on finite lattices.

use serde::{Deserialize, Serialize};

use super::lattice::FiniteLattice;
use crate::error::{Error, Result};

/// Default bound on `|L|` for the antichain searches.
pub const DEFAULT_SUBSET_CAP: usize = 20;

/// Antichains `S`, `T` with `meet(S) <= join(T)` where every clause of the
/// condition fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionFailure {
    pub meetands: Vec<usize>,
    pub joinands: Vec<usize>,
}

impl FiniteLattice {
    /// Searches for a failure of (W). Antichains are taken non-empty and
    /// compared as sorted index lists; the first failing pair in that
    /// order is returned.
    pub fn check_whitman(&self) -> Result<Option<ConditionFailure>> {
        self.check_whitman_capped(DEFAULT_SUBSET_CAP)
    }

    pub fn check_whitman_capped(&self, cap: usize) -> Result<Option<ConditionFailure>> {
        self.condition_search(None, cap)
    }

    /// Searches for a failure of (D) relative to the generating set `gens`.
    pub fn check_dean(&self, gens: &[usize]) -> Result<Option<ConditionFailure>> {
        self.check_dean_capped(gens, DEFAULT_SUBSET_CAP)
    }

    pub fn check_dean_capped(&self, gens: &[usize], cap: usize) -> Result<Option<ConditionFailure>> {
        if !self.generated_by(gens).is_full() {
            return Err(Error::NotGenerating);
        }
        self.condition_search(Some(gens), cap)
    }

    /// Whether `(S, T)` violates (W), or (D) when `gens` is given.
    pub fn violates(&self, s: &[usize], t: &[usize], gens: Option<&[usize]>) -> bool {
        let m = self.meet_set(s.iter().copied());
        let j = self.join_set(t.iter().copied());
        self.leq(m, j)
            && s.iter().all(|&x| !self.leq(x, j))
            && t.iter().all(|&y| !self.leq(m, y))
            && gens.is_none_or(|g| g.iter().all(|&p| !(self.leq(m, p) && self.leq(p, j))))
    }

    fn condition_search(&self, gens: Option<&[usize]>, cap: usize) -> Result<Option<ConditionFailure>> {
        let n = self.len();
        if n > cap {
            return Err(Error::cap("antichain search (lattice size)", cap));
        }
        let mut s = Vec::new();
        Ok(self.search_meetands(gens, 0, &mut s))
    }

    fn search_meetands(&self, gens: Option<&[usize]>, from: usize, s: &mut Vec<usize>) -> Option<ConditionFailure> {
        if s.len() >= 2 {
            if let Some(t) = self.first_joinands(gens, s) {
                return Some(ConditionFailure {
                    meetands: s.clone(),
                    joinands: t,
                });
            }
        }
        for c in from..self.len() {
            if s.iter().all(|&x| !self.poset().comparable(x, c)) {
                s.push(c);
                if let Some(f) = self.search_meetands(gens, c + 1, s) {
                    return Some(f);
                }
                s.pop();
            }
        }
        None
    }

    /// Given meetands `s`, the first antichain `T` completing a failure.
    fn first_joinands(&self, gens: Option<&[usize]>, s: &[usize]) -> Option<Vec<usize>> {
        let m = self.meet_set(s.iter().copied());
        // A failure with join(T) = j exists iff the largest admissible T,
        // everything below j and not above m, still joins to j.
        let feasible = (0..self.len()).any(|j| {
            self.leq(m, j)
                && s.iter().all(|&x| !self.leq(x, j))
                && gens.is_none_or(|g| g.iter().all(|&p| !(self.leq(m, p) && self.leq(p, j))))
                && self.join_set((0..self.len()).filter(|&y| self.leq(y, j) && !self.leq(m, y))) == j
        });
        if !feasible {
            return None;
        }
        let cand: Vec<usize> = (0..self.len()).filter(|&y| !self.leq(m, y)).collect();
        let mut t = Vec::new();
        self.search_joinands(gens, s, &cand, 0, &mut t)
    }

    fn search_joinands(
        &self,
        gens: Option<&[usize]>,
        s: &[usize],
        cand: &[usize],
        from: usize,
        t: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        if t.len() >= 2 && self.violates(s, t, gens) {
            return Some(t.clone());
        }
        for i in from..cand.len() {
            let c = cand[i];
            if t.iter().all(|&y| !self.poset().comparable(y, c)) {
                t.push(c);
                if let Some(f) = self.search_joinands(gens, s, cand, i + 1, t) {
                    return Some(f);
                }
                t.pop();
            }
        }
        None
    }
}
