use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

/// A finite partially ordered set over opaque string ids.
///
/// Elements are stored in lexicographic order of their ids; every index
/// handed out by this type (and by everything built on top of it) refers to
/// that order, which is what makes witnesses reproducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitePoset {
    names: Vec<String>,
    index: HashMap<String, usize>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    covers: Vec<(usize, usize)>,
}

impl FinitePoset {
    /// Builds a poset from element ids and any set of order-generating pairs
    /// `(lower, upper)`. The stored cover list is the transitive reduction of
    /// the pairs, so redundant input pairs are accepted and dropped.
    pub fn new<S, T, U>(elements: &[S], relations: &[(T, U)]) -> Result<Self>
    where
        S: AsRef<str>,
        T: AsRef<str>,
        U: AsRef<str>,
    {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateElement(w[0].clone()));
            }
        }
        let index: HashMap<String, usize> = sorted
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let n = sorted.len();
        let mut up = identity(n);
        for (lo, hi) in relations {
            let lo = lookup(&index, lo.as_ref())?;
            let hi = lookup(&index, hi.as_ref())?;
            up[lo].insert(hi);
        }
        Self::from_relation(sorted, index, up)
    }

    /// Builds a poset from ids and an order predicate on their positions in
    /// `elements` (not the sorted positions). The predicate need only
    /// generate the order; it is closed transitively.
    pub fn from_fn<S: AsRef<str>>(elements: &[S], leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let names: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
        let mut perm: Vec<usize> = (0..names.len()).collect();
        perm.sort_by(|&a, &b| names[a].cmp(&names[b]));
        let sorted: Vec<String> = perm.iter().map(|&i| names[i].clone()).collect();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateElement(w[0].clone()));
            }
        }
        let index: HashMap<String, usize> = sorted
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let n = sorted.len();
        let mut up = identity(n);
        for i in 0..n {
            for j in 0..n {
                if i != j && leq(perm[i], perm[j]) {
                    up[i].insert(j);
                }
            }
        }
        Self::from_relation(sorted, index, up)
    }

    fn from_relation(names: Vec<String>, index: HashMap<String, usize>, mut up: Vec<FixedBitSet>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::EmptyPoset);
        }
        // Warshall on bit rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for i in 0..n {
            for j in up[i].ones() {
                if i != j && up[j].contains(i) {
                    return Err(Error::OrderCycle(names[i].clone(), names[j].clone()));
                }
                down[j].insert(i);
            }
        }
        let mut covers = Vec::new();
        for i in 0..n {
            for j in up[i].ones() {
                if i == j {
                    continue;
                }
                let mut between = up[i].clone();
                between.intersect_with(&down[j]);
                if between.count_ones(..) == 2 {
                    covers.push((i, j));
                }
            }
        }
        Ok(FinitePoset {
            names,
            index,
            up,
            down,
            covers,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        lookup(&self.index, name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    /// `{ j : i <= j }`
    pub fn up_set(&self, i: usize) -> &FixedBitSet {
        &self.up[i]
    }

    /// `{ j : j <= i }`
    pub fn down_set(&self, i: usize) -> &FixedBitSet {
        &self.down[i]
    }

    /// Cover pairs `(lower, upper)` in lexicographic index order.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn lower_covers(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |c| c.1 == i).map(|c| c.0)
    }

    pub fn upper_covers(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.covers.iter().filter(move |c| c.0 == i).map(|c| c.1)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// The order-dual poset (same ids, reversed order).
    pub fn dual(&self) -> FinitePoset {
        FinitePoset {
            names: self.names.clone(),
            index: self.index.clone(),
            up: self.down.clone(),
            down: self.up.clone(),
            covers: {
                let mut c: Vec<_> = self.covers.iter().map(|&(a, b)| (b, a)).collect();
                c.sort();
                c
            },
        }
    }

    /// Length of the longest chain from a minimal element up to each element.
    pub fn heights(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.down[i].count_ones(..));
        let mut h = vec![0; self.len()];
        for &i in &order {
            h[i] = self.lower_covers(i).map(|j| h[j] + 1).max().unwrap_or(0);
        }
        h
    }

    /// Minimal elements of a subset.
    pub fn minimal(&self, set: &FixedBitSet) -> Vec<usize> {
        set.ones()
            .filter(|&i| set.ones().all(|j| j == i || !self.leq(j, i)))
            .collect()
    }

    /// Maximal elements of a subset.
    pub fn maximal(&self, set: &FixedBitSet) -> Vec<usize> {
        set.ones()
            .filter(|&i| set.ones().all(|j| j == i || !self.leq(i, j)))
            .collect()
    }
}

fn identity(n: usize) -> Vec<FixedBitSet> {
    (0..n)
        .map(|i| {
            let mut b = FixedBitSet::with_capacity(n);
            b.insert(i);
            b
        })
        .collect()
}

fn lookup(index: &HashMap<String, usize>, name: &str) -> Result<usize> {
    index
        .get(name)
        .copied()
        .ok_or_else(|| Error::UnknownElement(name.to_string()))
}
