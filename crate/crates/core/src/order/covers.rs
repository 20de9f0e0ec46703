//! Join covers, the D-relation and the finite boundedness test.

use serde::{Deserialize, Serialize};

use super::lattice::FiniteLattice;
use crate::error::{Error, Result};

/// A join cover `base <= join(cover)` with `cover` an antichain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JoinCover {
    pub base: usize,
    pub cover: Vec<usize>,
    /// Set iff `base` is below no member of `cover`.
    pub nontrivial: bool,
}

/// Certificate returned by [`FiniteLattice::lower_boundedness`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DCertificate {
    /// `(p, r)` for every join-irreducible `p`; `p D q` implies `r(p) > r(q)`.
    Rank(Vec<(usize, usize)>),
    /// A closed walk `p0 D p1 D ... D pk D p0`.
    Cycle(Vec<usize>),
}

impl DCertificate {
    pub fn is_bounded(&self) -> bool {
        matches!(self, DCertificate::Rank(_))
    }
}

impl FiniteLattice {
    /// `p D q` for join-irreducibles `p != q`: some `x` has `p <= q | x` but
    /// not `p <= q_* | x`, where `q_*` is the lower cover of `q`. This is
    /// equivalent to `q` lying in a minimal nontrivial join cover of `p`.
    pub fn d_related(&self, p: usize, q: usize) -> bool {
        if p == q {
            return false;
        }
        let Some(qs) = self.lower_cover_of(q) else {
            return false;
        };
        if self.lower_cover_of(p).is_none() || self.leq(p, q) {
            return false;
        }
        (0..self.len()).any(|x| self.leq(p, self.join(q, x)) && !self.leq(p, self.join(qs, x)))
    }

    /// The D-relation as adjacency lists over the join-irreducibles:
    /// `(p, [q : p D q])`, both levels in index order.
    pub fn d_relation(&self) -> Vec<(usize, Vec<usize>)> {
        let ji = self.join_irreducibles();
        let n = self.len();
        let lc: Vec<usize> = ji.iter().map(|&q| self.lower_cover_of(q).unwrap()).collect();
        ji.iter()
            .map(|&p| {
                // xs: elements x with p not below x; others never separate.
                let xs: Vec<usize> = (0..n).filter(|&x| !self.leq(p, x)).collect();
                let succ = ji
                    .iter()
                    .zip(&lc)
                    .filter(|&(&q, &qs)| {
                        q != p
                            && !self.leq(p, q)
                            && xs
                                .iter()
                                .any(|&x| self.leq(p, self.join(q, x)) && !self.leq(p, self.join(qs, x)))
                    })
                    .map(|(&q, _)| q)
                    .collect();
                (p, succ)
            })
            .collect()
    }

    /// Minimal nontrivial join covers of `p`, found by enumerating antichains
    /// of join-irreducibles not above `p` and keeping the refinement-minimal
    /// ones. Exponential; refuses when more than `cap` covers turn up.
    pub fn minimal_join_covers(&self, p: usize, cap: usize) -> Result<Vec<JoinCover>> {
        let cand: Vec<usize> = self
            .join_irreducibles()
            .into_iter()
            .filter(|&q| !self.leq(p, q))
            .collect();
        let mut covers: Vec<Vec<usize>> = Vec::new();
        let mut stack = Vec::new();
        self.antichain_covers(p, &cand, 0, &mut stack, &mut covers, cap)?;
        // B refines A when every b is below some a.
        let refines = |b: &[usize], a: &[usize]| b.iter().all(|&x| a.iter().any(|&y| self.leq(x, y)));
        let mut out: Vec<JoinCover> = covers
            .iter()
            .filter(|a| !covers.iter().any(|b| b != *a && refines(b, a)))
            .map(|a| JoinCover {
                base: p,
                cover: a.clone(),
                nontrivial: true,
            })
            .collect();
        out.sort();
        Ok(out)
    }

    fn antichain_covers(
        &self,
        p: usize,
        cand: &[usize],
        from: usize,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) -> Result<()> {
        if !stack.is_empty() && self.leq(p, self.join_set(stack.iter().copied())) {
            if out.len() >= cap {
                return Err(Error::cap("join cover enumeration", cap));
            }
            out.push(stack.clone());
        }
        for i in from..cand.len() {
            let c = cand[i];
            if stack.iter().all(|&s| !self.poset().comparable(s, c)) {
                stack.push(c);
                self.antichain_covers(p, cand, i + 1, stack, out, cap)?;
                stack.pop();
            }
        }
        Ok(())
    }

    /// D-cycle test. Returns a rank function when the D-relation is acyclic
    /// (the lattice is lower bounded) and a closed D-cycle otherwise.
    pub fn lower_boundedness(&self) -> DCertificate {
        let rel = self.d_relation();
        let pos: std::collections::HashMap<usize, usize> =
            rel.iter().enumerate().map(|(i, (p, _))| (*p, i)).collect();
        let adj: Vec<Vec<usize>> = rel
            .iter()
            .map(|(_, s)| s.iter().map(|q| pos[q]).collect())
            .collect();
        match longest_paths(&adj) {
            Ok(rank) => DCertificate::Rank(rel.iter().map(|(p, _)| *p).zip(rank).collect()),
            Err(cycle) => DCertificate::Cycle(cycle.into_iter().map(|i| rel[i].0).collect()),
        }
    }

    pub fn is_lower_bounded_finite(&self) -> bool {
        self.lower_boundedness().is_bounded()
    }

    pub fn is_upper_bounded_finite(&self) -> bool {
        self.dual().is_lower_bounded_finite()
    }

    pub fn is_bounded_finite(&self) -> bool {
        self.is_lower_bounded_finite() && self.is_upper_bounded_finite()
    }

    /// For each element, the least `k` with the element in `D_k`, or `None`
    /// when it lies in no `D_k`. `D_0` holds the elements without a
    /// nontrivial join cover; `a` is in `D_{k+1}` when every minimal
    /// nontrivial join cover `U` of `a` has
    /// `a <= join{v in D_k : v <= u for some u in U}`. An element is in some
    /// `D_k` exactly when its least preimage exists under every epimorphism
    /// from a free lattice.
    pub fn lower_bounded_elements(&self, cap: usize) -> Result<Vec<Option<usize>>> {
        let n = self.len();
        let covers: Vec<Vec<JoinCover>> = (0..n).map(|a| self.minimal_join_covers(a, cap)).collect::<Result<_>>()?;
        let mut level: Vec<Option<usize>> = covers.iter().map(|c| c.is_empty().then_some(0)).collect();
        for k in 1.. {
            let next: Vec<Option<usize>> = (0..n)
                .map(|a| {
                    level[a].or_else(|| {
                        covers[a]
                            .iter()
                            .all(|u| {
                                let below = (0..n).filter(|&v| level[v].is_some() && u.cover.iter().any(|&x| self.leq(v, x)));
                                self.leq(a, self.join_set(below))
                            })
                            .then_some(k)
                    })
                })
                .collect();
            if next == level {
                break;
            }
            level = next;
        }
        Ok(level)
    }

    /// Re-checks a certificate against the lattice edge by edge.
    pub fn verify_d_certificate(&self, cert: &DCertificate) -> bool {
        match cert {
            DCertificate::Cycle(c) => {
                !c.is_empty()
                    && c.iter().all(|&p| p < self.len())
                    && (0..c.len()).all(|i| self.d_related(c[i], c[(i + 1) % c.len()]))
            }
            DCertificate::Rank(r) => {
                let ji = self.join_irreducibles();
                if r.len() != ji.len() || r.iter().map(|x| x.0).ne(ji.iter().copied()) {
                    return false;
                }
                r.iter()
                    .all(|&(p, rp)| r.iter().all(|&(q, rq)| !self.d_related(p, q) || rp > rq))
            }
        }
    }
}

/// Longest path to a sink for every node of a digraph, or a cycle.
fn longest_paths(adj: &[Vec<usize>]) -> std::result::Result<Vec<usize>, Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let n = adj.len();
    let mut mark = vec![Mark::New; n];
    let mut rank = vec![0usize; n];
    for root in 0..n {
        if mark[root] != Mark::New {
            continue;
        }
        // (node, next child position)
        let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
        mark[root] = Mark::Open;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < adj[v].len() {
                let w = adj[v][*i];
                *i += 1;
                match mark[w] {
                    Mark::New => {
                        mark[w] = Mark::Open;
                        stack.push((w, 0));
                    }
                    Mark::Open => {
                        let start = stack.iter().position(|&(u, _)| u == w).unwrap();
                        return Err(stack[start..].iter().map(|&(u, _)| u).collect());
                    }
                    Mark::Done => {}
                }
            } else {
                rank[v] = adj[v].iter().map(|&w| rank[w] + 1).max().unwrap_or(0);
                mark[v] = Mark::Done;
                stack.pop();
            }
        }
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::fixtures;

    fn oracle_d(l: &FiniteLattice) -> Vec<(usize, Vec<usize>)> {
        l.join_irreducibles()
            .into_iter()
            .map(|p| {
                let mut qs: Vec<usize> = l
                    .minimal_join_covers(p, 100_000)
                    .unwrap()
                    .into_iter()
                    .flat_map(|c| c.cover)
                    .collect();
                qs.sort_unstable();
                qs.dedup();
                (p, qs)
            })
            .collect()
    }

    #[test]
    fn m3_covers_and_cycle() {
        let m3 = fixtures::m3();
        let a = m3.index_of("a").unwrap();
        let b = m3.index_of("b").unwrap();
        let c = m3.index_of("c").unwrap();
        let covers = m3.minimal_join_covers(a, 100).unwrap();
        assert_eq!(covers.len(), 1);
        assert_eq!(covers[0].cover, vec![b, c]);
        assert_eq!(m3.d_relation(), oracle_d(&m3));
        let cert = m3.lower_boundedness();
        assert!(!cert.is_bounded());
        assert!(m3.verify_d_certificate(&cert));
        assert!(!m3.is_bounded_finite());
    }

    #[test]
    fn distributive_lattices_are_bounded() {
        for l in [fixtures::chain(4), fixtures::boolean(2), fixtures::boolean(3)] {
            let p = l.join_irreducibles()[0];
            assert!(l.minimal_join_covers(p, 100).unwrap().is_empty());
            let cert = l.lower_boundedness();
            assert!(cert.is_bounded());
            assert!(l.verify_d_certificate(&cert));
            assert!(l.is_bounded_finite());
        }
    }

    #[test]
    fn n5_is_bounded() {
        let l = fixtures::n5();
        assert_eq!(l.d_relation(), oracle_d(&l));
        assert!(l.is_bounded_finite());
    }

    #[test]
    fn characterization_matches_cover_enumeration() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let l = crate::random::random_lattice(&mut rng, 11);
            assert_eq!(l.d_relation(), oracle_d(&l));
            assert!(l.verify_d_certificate(&l.lower_boundedness()));
        }
    }

    #[test]
    fn forged_certificates_are_rejected() {
        let m3 = fixtures::m3();
        let ji = m3.join_irreducibles();
        let fake = DCertificate::Rank(ji.iter().map(|&p| (p, 0)).collect());
        assert!(!m3.verify_d_certificate(&fake));
        let n5 = fixtures::n5();
        let fake = DCertificate::Cycle(n5.join_irreducibles());
        assert!(!n5.verify_d_certificate(&fake));
    }

    #[test]
    fn element_hierarchy_matches_d_cycles() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..60 {
            let l = crate::random::random_lattice(&mut rng, 10);
            let lev = l.lower_bounded_elements(10_000).unwrap();
            assert_eq!(lev.iter().all(Option::is_some), l.is_lower_bounded_finite());
            // A join-irreducible is bounded iff no D-cycle is reachable from it.
            let rel: std::collections::HashMap<usize, Vec<usize>> = l.d_relation().into_iter().collect();
            for &p in rel.keys() {
                let mut seen = std::collections::BTreeSet::new();
                let mut stack = vec![p];
                while let Some(v) = stack.pop() {
                    if seen.insert(v) {
                        stack.extend(&rel[&v]);
                    }
                }
                let on_cycle = seen.iter().any(|&v| {
                    let mut inner = std::collections::BTreeSet::new();
                    let mut st = rel[&v].clone();
                    while let Some(w) = st.pop() {
                        if w == v {
                            return true;
                        }
                        if inner.insert(w) {
                            st.extend(&rel[&w]);
                        }
                    }
                    false
                });
                assert_eq!(lev[p].is_some(), !on_cycle, "element {}", l.name(p));
            }
        }
        let m3 = fixtures::m3();
        let lev = m3.lower_bounded_elements(100).unwrap();
        assert_eq!(lev[m3.bottom()], Some(0));
        assert_eq!(lev[m3.top()], None);
    }
}
