//! Lattice homomorphisms onto a finite target and their approximation
//! sequences.
//!
//! For a homomorphism `g` from a lattice generated by `X` onto a finite
//! lattice, `beta_k(d)` is the meet of everything in the `k`-th meet stage
//! `H_k` mapped above `d`, and `alpha_k(d)` the join of everything in the
//! `k`-th join stage `G_k` mapped below `d`. Both converge to the least and
//! greatest preimages when those exist.

mod fiber;
mod free_source;
mod witness;

pub use fiber::{
    claim2_check, fiber_product, kernel, remark17_check, sublattice_closure, theorem1_generators,
    theorem1_generators_enlarged, PairSet,
};
pub use free_source::{FreeHom, LowerBoundedReport};
pub use witness::{lemma41_bound, nonfg_witness, verify_witness, NonFgWitness};

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::order::FiniteLattice;

/// A homomorphism between finite lattices. The source's designated
/// generators play the role of `X`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteHom {
    source: FiniteLattice,
    target: FiniteLattice,
    map: Vec<usize>,
    g_stages: Vec<FixedBitSet>,
    h_stages: Vec<FixedBitSet>,
}

impl FiniteHom {
    /// Checks that `map` preserves binary meets and joins.
    pub fn new(source: FiniteLattice, target: FiniteLattice, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.len() || map.iter().any(|&d| d >= target.len()) {
            return Err(Error::NotAHomomorphism("map does not cover the source".into()));
        }
        for a in 0..source.len() {
            for b in a + 1..source.len() {
                if map[source.join(a, b)] != target.join(map[a], map[b]) || map[source.meet(a, b)] != target.meet(map[a], map[b]) {
                    return Err(Error::NotAHomomorphism(format!(
                        "not preserved on `{}`, `{}`",
                        source.name(a),
                        source.name(b)
                    )));
                }
            }
        }
        let (g_stages, h_stages) = stages(&source);
        Ok(FiniteHom {
            source,
            target,
            map,
            g_stages,
            h_stages,
        })
    }

    /// Extends generator images `(generator, image)` to the whole source.
    pub fn from_generator_images(source: FiniteLattice, target: FiniteLattice, images: &[(usize, usize)]) -> Result<Self> {
        let mut map: Vec<Option<usize>> = vec![None; source.len()];
        let mut done = Vec::new();
        for &(x, d) in images {
            if map[x].is_some_and(|e| e != d) {
                return Err(Error::NotAHomomorphism(format!("`{}` given two images", source.name(x))));
            }
            if map[x].is_none() {
                map[x] = Some(d);
                done.push(x);
            }
        }
        for &x in source.generators() {
            if map[x].is_none() {
                return Err(Error::UnassignedGenerator(source.name(x).to_string()));
            }
        }
        let mut i = 0;
        while i < done.len() {
            for k in 0..=i {
                let (a, b) = (done[i], done[k]);
                let (ia, ib) = (map[a].unwrap(), map[b].unwrap());
                for (c, v) in [(source.join(a, b), target.join(ia, ib)), (source.meet(a, b), target.meet(ia, ib))] {
                    match map[c] {
                        None => {
                            map[c] = Some(v);
                            done.push(c);
                        }
                        Some(w) if w != v => {
                            return Err(Error::NotAHomomorphism(format!("conflicting images for `{}`", source.name(c))))
                        }
                        _ => {}
                    }
                }
            }
            i += 1;
        }
        let map = map.into_iter().map(|m| m.expect("generators generate")).collect();
        Self::new(source, target, map)
    }

    pub fn source(&self) -> &FiniteLattice {
        &self.source
    }

    pub fn target(&self) -> &FiniteLattice {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, a: usize) -> usize {
        self.map[a]
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = FixedBitSet::with_capacity(self.target.len());
        for &d in &self.map {
            hit.insert(d);
        }
        hit.is_full()
    }

    pub fn preimage(&self, d: usize) -> Vec<usize> {
        (0..self.source.len()).filter(|&a| self.map[a] == d).collect()
    }

    /// `G_k`: `G_0` is the generating set and `G_{k+1}` the join closure of
    /// `H_k` with the empty join.
    pub fn stage_g(&self, k: usize) -> &FixedBitSet {
        &self.g_stages[k.min(self.g_stages.len() - 1)]
    }

    /// `H_k`: the meet closure of `G_k` with the empty meet.
    pub fn stage_h(&self, k: usize) -> &FixedBitSet {
        &self.h_stages[k.min(self.h_stages.len() - 1)]
    }

    /// Number of stages after which `G_k` and `H_k` no longer change.
    pub fn stage_count(&self) -> usize {
        self.g_stages.len()
    }

    pub fn beta_k(&self, d: usize, k: usize) -> usize {
        self.source
            .meet_set(self.stage_h(k).ones().filter(|&w| self.target.leq(d, self.map[w])))
    }

    pub fn alpha_k(&self, d: usize, k: usize) -> usize {
        self.source
            .join_set(self.stage_g(k).ones().filter(|&w| self.target.leq(self.map[w], d)))
    }

    /// Least preimage of `d`; finite sources always have one when `d` is
    /// in the image.
    pub fn beta_stable(&self, d: usize) -> Option<usize> {
        let pre = self.preimage(d);
        (!pre.is_empty()).then(|| self.source.meet_set(pre))
    }

    pub fn alpha_stable(&self, d: usize) -> Option<usize> {
        let pre = self.preimage(d);
        (!pre.is_empty()).then(|| self.source.join_set(pre))
    }
}

fn stages(l: &FiniteLattice) -> (Vec<FixedBitSet>, Vec<FixedBitSet>) {
    let gens = l.generators();
    let mut g = FixedBitSet::with_capacity(l.len());
    for &x in gens {
        g.insert(x);
    }
    let one = l.join_set(gens.iter().copied());
    let zero = l.meet_set(gens.iter().copied());
    let (mut gs, mut hs) = (Vec::new(), Vec::new());
    loop {
        let mut h = g.clone();
        h.insert(one);
        let h = op_closure(l, h, true);
        let mut next = h.clone();
        next.insert(zero);
        let next = op_closure(l, next, false);
        gs.push(g.clone());
        hs.push(h);
        if next == g {
            return (gs, hs);
        }
        g = next;
    }
}

pub(crate) fn op_closure(l: &FiniteLattice, mut set: FixedBitSet, meet: bool) -> FixedBitSet {
    loop {
        let members: Vec<usize> = set.ones().collect();
        let mut next = set.clone();
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[..i] {
                next.insert(if meet { l.meet(a, b) } else { l.join(a, b) });
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::fixtures;

    /// Projection of `2x2` onto the chain `0 < 1` along the first bit.
    fn projection() -> FiniteHom {
        let src = fixtures::boolean(2).with_generator_names(&["01", "10"]).unwrap();
        let tgt = fixtures::chain(2);
        let map = src.names().iter().map(|n| usize::from(n.starts_with('1'))).collect();
        FiniteHom::new(src, tgt, map).unwrap()
    }

    #[test]
    fn stages_and_bounds() {
        let g = projection();
        let s = g.source();
        assert_eq!(g.stage_g(0).count_ones(..), 2);
        assert!(g.stage_h(0).contains(s.index_of("00").unwrap()));
        assert!(g.stage_h(0).contains(s.index_of("11").unwrap()));
        assert!(g.stage_g(5).is_full());
        assert_eq!(g.beta_k(1, 0), s.index_of("10").unwrap());
        assert_eq!(g.beta_stable(1), Some(s.index_of("10").unwrap()));
        assert_eq!(g.alpha_stable(0), Some(s.index_of("01").unwrap()));
        assert!(g.is_surjective());
    }

    #[test]
    fn non_homomorphisms_are_rejected() {
        let src = fixtures::boolean(2);
        let tgt = fixtures::chain(2);
        let map = vec![0, 1, 1, 1];
        assert!(matches!(FiniteHom::new(src, tgt, map), Err(Error::NotAHomomorphism(_))));
    }

    #[test]
    fn generator_images_extend() {
        let src = fixtures::boolean(2).with_generator_names(&["01", "10"]).unwrap();
        let tgt = fixtures::chain(2);
        let x = src.index_of("01").unwrap();
        let y = src.index_of("10").unwrap();
        let g = FiniteHom::from_generator_images(src.clone(), tgt.clone(), &[(x, 0), (y, 1)]).unwrap();
        assert_eq!(g, projection());
        let err = FiniteHom::from_generator_images(src, tgt, &[(x, 0)]).unwrap_err();
        assert_eq!(err, Error::UnassignedGenerator("10".into()));
    }

    /// `beta_0` of the top can sit strictly above the least preimage when
    /// the top of the target is join-reducible and not among the generator
    /// images, even though (D) holds for non-empty antichains.
    #[test]
    fn empty_meet_blocks_stabilization_at_the_top() {
        let d = fixtures::boolean(2);
        let p: Vec<usize> = ["00", "01", "10"].iter().map(|n| d.index_of(n).unwrap()).collect();
        assert_eq!(d.check_dean(&p).unwrap(), None);
        let names: Vec<String> = d.names().iter().flat_map(|n| [format!("{n}/0"), format!("{n}/1")]).collect();
        let src = FiniteLattice::from_fn(&names, |u, v| d.leq(u / 2, v / 2) && u % 2 <= v % 2)
            .unwrap()
            .with_generator_names(&["00/0", "00/1", "01/0", "10/0"])
            .unwrap();
        let map = (0..names.len()).map(|u| u / 2).collect();
        let g = FiniteHom::new(src, d.clone(), map).unwrap();
        let s = g.source();
        assert_eq!(s.name(g.beta_k(d.top(), 0)), "11/1");
        assert_eq!(s.name(g.beta_stable(d.top()).unwrap()), "11/0");
    }
}
