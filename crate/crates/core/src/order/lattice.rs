use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::poset::FinitePoset;
use crate::error::{Error, Result};
use crate::term::Term;

/// A finite lattice with precomputed meet and join tables.
///
/// Element indices are those of the underlying [`FinitePoset`], i.e. the
/// lexicographic order of the ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteLattice {
    poset: FinitePoset,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
    generators: Vec<usize>,
}

/// Computes the meet and join tables of a poset, failing on the first
/// (lexicographically smallest) pair without a join or meet.
pub fn build_lattice(poset: FinitePoset) -> Result<FiniteLattice> {
    FiniteLattice::from_poset(poset)
}

impl FiniteLattice {
    pub fn from_poset(poset: FinitePoset) -> Result<Self> {
        let n = poset.len();
        // Sorting by down-set size gives a linear extension, so the first
        // common upper bound met in this order is minimal among them.
        let mut ext: Vec<usize> = (0..n).collect();
        ext.sort_by_key(|&i| (poset.down_set(i).count_ones(..), i));
        let mut pos = vec![0; n];
        for (k, &i) in ext.iter().enumerate() {
            pos[i] = k;
        }
        let mut join = vec![0; n * n];
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in a..n {
                let mut ub = poset.up_set(a).clone();
                ub.intersect_with(poset.up_set(b));
                let j = least(&poset, &ub, &pos, true).ok_or_else(|| Error::NotALattice {
                    a: poset.name(a).to_string(),
                    b: poset.name(b).to_string(),
                    missing: "least upper bound",
                })?;
                let mut lb = poset.down_set(a).clone();
                lb.intersect_with(poset.down_set(b));
                let m = least(&poset, &lb, &pos, false).ok_or_else(|| Error::NotALattice {
                    a: poset.name(a).to_string(),
                    b: poset.name(b).to_string(),
                    missing: "greatest lower bound",
                })?;
                join[a * n + b] = j;
                join[b * n + a] = j;
                meet[a * n + b] = m;
                meet[b * n + a] = m;
            }
        }
        let bottom = ext[0];
        let top = ext[n - 1];
        if !poset.down_set(top).is_full() || !poset.up_set(bottom).is_full() {
            // Unreachable when all pairwise bounds exist, kept as a guard.
            return Err(Error::NotALattice {
                a: poset.name(bottom).to_string(),
                b: poset.name(top).to_string(),
                missing: "bound",
            });
        }
        Ok(FiniteLattice {
            poset,
            meet,
            join,
            bottom,
            top,
            generators: (0..n).collect(),
        })
    }

    /// Builds a lattice from ids and an order predicate on the positions in
    /// `elements`; see [`FinitePoset::from_fn`].
    pub fn from_fn<S: AsRef<str>>(elements: &[S], leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        Self::from_poset(FinitePoset::from_fn(elements, leq)?)
    }

    /// Designates a generating set. Fails with [`Error::NotGenerating`] if
    /// the sublattice generated by `gens` is proper.
    pub fn with_generators(mut self, gens: &[usize]) -> Result<Self> {
        let mut g = gens.to_vec();
        g.sort_unstable();
        g.dedup();
        if !self.generated_by(&g).is_full() {
            return Err(Error::NotGenerating);
        }
        self.generators = g;
        Ok(self)
    }

    pub fn with_generator_names<S: AsRef<str>>(self, gens: &[S]) -> Result<Self> {
        let idx = gens
            .iter()
            .map(|s| self.index_of(s.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.with_generators(&idx)
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn name(&self, i: usize) -> &str {
        self.poset.name(i)
    }

    pub fn names(&self) -> &[String] {
        self.poset.names()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.poset.index_of(name)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.poset.leq(a, b)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b]
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Meet of a set; the empty meet is the top.
    pub fn meet_set<I: IntoIterator<Item = usize>>(&self, set: I) -> usize {
        set.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of a set; the empty join is the bottom.
    pub fn join_set<I: IntoIterator<Item = usize>>(&self, set: I) -> usize {
        set.into_iter().fold(self.bottom, |acc, x| self.join(acc, x))
    }

    pub fn meet_names<S: AsRef<str>>(&self, set: &[S]) -> Result<usize> {
        let idx = set.iter().map(|s| self.index_of(s.as_ref())).collect::<Result<Vec<_>>>()?;
        Ok(self.meet_set(idx))
    }

    pub fn join_names<S: AsRef<str>>(&self, set: &[S]) -> Result<usize> {
        let idx = set.iter().map(|s| self.index_of(s.as_ref())).collect::<Result<Vec<_>>>()?;
        Ok(self.join_set(idx))
    }

    /// The sublattice generated by `gens`, as a bit set. Generating from the
    /// empty set yields the empty set.
    pub fn generated_by(&self, gens: &[usize]) -> FixedBitSet {
        let n = self.len();
        let mut set = FixedBitSet::with_capacity(n);
        let mut members: Vec<usize> = Vec::new();
        for &g in gens {
            if !set.put(g) {
                members.push(g);
            }
        }
        let mut i = 0;
        while i < members.len() {
            let a = members[i];
            for k in 0..=i {
                let b = members[k];
                for c in [self.meet(a, b), self.join(a, b)] {
                    if !set.put(c) {
                        members.push(c);
                    }
                }
            }
            i += 1;
        }
        set
    }

    /// The subposet on `members` (original indices), which must be closed
    /// under meet and join for the result to be a lattice.
    pub fn induced(&self, members: &[usize]) -> Result<FiniteLattice> {
        let names: Vec<&str> = members.iter().map(|&i| self.name(i)).collect();
        Self::from_fn(&names, |i, j| self.leq(members[i], members[j]))
    }

    /// Lower covers of `i` in the Hasse diagram.
    pub fn lower_covers(&self, i: usize) -> Vec<usize> {
        self.poset.lower_covers(i).collect()
    }

    pub fn upper_covers(&self, i: usize) -> Vec<usize> {
        self.poset.upper_covers(i).collect()
    }

    /// Elements other than the bottom with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| i != self.bottom && self.poset.lower_covers(i).count() == 1)
            .collect()
    }

    pub fn meet_irreducibles(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| i != self.top && self.poset.upper_covers(i).count() == 1)
            .collect()
    }

    /// The unique lower cover of a join-irreducible element.
    pub fn lower_cover_of(&self, p: usize) -> Option<usize> {
        let mut it = self.poset.lower_covers(p);
        match (it.next(), it.next()) {
            (Some(c), None) => Some(c),
            _ => None,
        }
    }

    /// `p` is join prime when `p <= join(A)` forces `p <= a` for some `a` in
    /// `A`. Equivalently `p` is not below the join of everything not above it.
    pub fn is_join_prime(&self, p: usize) -> bool {
        if p == self.bottom {
            return false;
        }
        let rest = (0..self.len()).filter(|&a| !self.leq(p, a));
        !self.leq(p, self.join_set(rest))
    }

    pub fn is_meet_prime(&self, p: usize) -> bool {
        if p == self.top {
            return false;
        }
        let rest = (0..self.len()).filter(|&a| !self.leq(a, p));
        !self.leq(self.meet_set(rest), p)
    }

    /// The order dual: same ids and generators, meets and joins swapped.
    pub fn dual(&self) -> FiniteLattice {
        FiniteLattice {
            poset: self.poset.dual(),
            meet: self.join.clone(),
            join: self.meet.clone(),
            bottom: self.top,
            top: self.bottom,
            generators: self.generators.clone(),
        }
    }

    /// Evaluates a term, looking generator names up with `assign`.
    pub fn evaluate_with(&self, t: &Term, assign: &impl Fn(&str) -> Option<usize>) -> Result<usize> {
        match t {
            Term::Gen(x) => assign(x).ok_or_else(|| Error::UnassignedGenerator(x.clone())),
            Term::Meet(cs) => {
                let mut acc = self.top;
                for c in cs {
                    acc = self.meet(acc, self.evaluate_with(c, assign)?);
                }
                Ok(acc)
            }
            Term::Join(cs) => {
                let mut acc = self.bottom;
                for c in cs {
                    acc = self.join(acc, self.evaluate_with(c, assign)?);
                }
                Ok(acc)
            }
        }
    }

    /// Evaluates a term under a generator-name assignment.
    pub fn evaluate(&self, t: &Term, assignment: &HashMap<String, usize>) -> Result<usize> {
        self.evaluate_with(t, &|x| assignment.get(x).copied())
    }

    /// Evaluates a term whose generators are element ids of this lattice.
    pub fn evaluate_ids(&self, t: &Term) -> Result<usize> {
        self.evaluate_with(t, &|x| self.index_of(x).ok())
    }
}

fn least(poset: &FinitePoset, set: &FixedBitSet, pos: &[usize], upward: bool) -> Option<usize> {
    let cand = if upward {
        set.ones().min_by_key(|&i| pos[i])?
    } else {
        set.ones().max_by_key(|&i| pos[i])?
    };
    let reach = if upward {
        poset.up_set(cand)
    } else {
        poset.down_set(cand)
    };
    set.is_subset(reach).then_some(cand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::fixtures;

    #[test]
    fn singleton_lattice() {
        let l = FiniteLattice::from_fn(&["e"], |_, _| false).unwrap();
        assert_eq!(l.bottom(), l.top());
        assert!(l.join_irreducibles().is_empty());
    }

    #[test]
    fn bowtie_is_not_a_lattice() {
        let p = FinitePoset::new(&["a", "b", "c", "d"], &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")]).unwrap();
        let err = build_lattice(p).unwrap_err();
        assert!(matches!(err, Error::NotALattice { .. }), "{err:?}");
    }

    #[test]
    fn tables_are_bounds() {
        for l in [fixtures::m3(), fixtures::n5(), fixtures::boolean(3)] {
            let n = l.len();
            for a in 0..n {
                for b in 0..n {
                    let m = l.meet(a, b);
                    let j = l.join(a, b);
                    assert!(l.leq(m, a) && l.leq(m, b) && l.leq(a, j) && l.leq(b, j));
                    for c in 0..n {
                        if l.leq(c, a) && l.leq(c, b) {
                            assert!(l.leq(c, m));
                        }
                        if l.leq(a, c) && l.leq(b, c) {
                            assert!(l.leq(j, c));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn empty_meet_and_join() {
        let l = fixtures::m3();
        assert_eq!(l.meet_set([]), l.top());
        assert_eq!(l.join_set([]), l.bottom());
        let a = l.index_of("a").unwrap();
        assert_eq!(l.meet_set([a]), a);
    }

    #[test]
    fn irreducibles_and_primes() {
        let chain = fixtures::chain(2);
        assert_eq!(chain.join_irreducibles(), vec![chain.top()]);
        assert!(chain.is_join_prime(chain.top()));

        let sq = fixtures::boolean(2);
        let atoms: Vec<usize> = sq.upper_covers(sq.bottom());
        assert_eq!(sq.join_irreducibles(), atoms);
        assert!(atoms.iter().all(|&p| sq.is_join_prime(p) && sq.is_meet_prime(p)));

        let m3 = fixtures::m3();
        let a = m3.index_of("a").unwrap();
        assert!(!m3.is_join_prime(a));
        assert!(!m3.is_meet_prime(a));
    }

    #[test]
    fn generators_must_generate() {
        let m3 = fixtures::m3();
        let a = m3.index_of("a").unwrap();
        let b = m3.index_of("b").unwrap();
        assert_eq!(m3.clone().with_generators(&[a, b]).unwrap_err(), Error::NotGenerating);
        let c = m3.index_of("c").unwrap();
        assert_eq!(m3.with_generators(&[a, b, c]).unwrap().generators(), &[a, b, c]);
    }

    #[test]
    fn dual_is_an_involution() {
        let l = fixtures::n5();
        assert_eq!(l.dual().dual(), l);
    }

    #[test]
    fn evaluation() {
        let m3 = fixtures::m3();
        let t: Term = "(x & y)".parse().unwrap();
        let mut env = HashMap::new();
        env.insert("x".to_string(), m3.index_of("a").unwrap());
        assert_eq!(m3.evaluate(&t, &env).unwrap_err(), Error::UnassignedGenerator("y".into()));
        env.insert("y".to_string(), m3.index_of("b").unwrap());
        assert_eq!(m3.evaluate(&t, &env).unwrap(), m3.bottom());
    }
}
