//! Seeded random instances for the property suites and examples.

use std::collections::BTreeSet;

use rand::Rng;

use crate::hom::FiniteHom;
use crate::order::{fixtures, FiniteLattice};

/// A random lattice with at most `max_size` elements (at least 1), built as
/// an intersection-closed family of subsets of a small ground set ordered
/// by inclusion. Ids are `e00`, `e01`, ... in order of (set size, bit mask).
pub fn random_lattice<R: Rng + ?Sized>(rng: &mut R, max_size: usize) -> FiniteLattice {
    let max_size = max_size.max(1);
    let lo = (usize::BITS - max_size.leading_zeros()) as usize;
    let ground = rng.gen_range(lo.max(2)..=lo.max(2) + 2).min(16);
    let full: u32 = (1 << ground) - 1;
    let target = rng.gen_range(1..=max_size);
    let mut family: BTreeSet<u32> = BTreeSet::from([full]);
    let mut attempts = 0;
    while family.len() < target && attempts < 20 * max_size {
        attempts += 1;
        let s = rng.gen_range(0..=full);
        let mut next = family.clone();
        next.insert(s);
        next.extend(family.iter().map(|f| f & s));
        if next.len() <= max_size {
            family = next;
        }
    }
    from_family(&family)
}

/// A random lattice with exactly `size` elements (at least 1).
pub fn random_lattice_of_size<R: Rng + ?Sized>(rng: &mut R, size: usize) -> FiniteLattice {
    let size = size.max(1);
    let lo = (usize::BITS - size.leading_zeros()) as usize;
    let ground = (lo.max(2) + 2).min(24);
    let full: u32 = (1 << ground) - 1;
    loop {
        let mut family: BTreeSet<u32> = BTreeSet::from([full]);
        let mut stuck = 0;
        while family.len() < size && stuck < 200 {
            let s = rng.gen_range(0..=full);
            let mut next = family.clone();
            next.insert(s);
            next.extend(family.iter().map(|f| f & s));
            if next.len() <= size {
                family = next;
                stuck = 0;
            } else {
                stuck += 1;
            }
        }
        if family.len() == size {
            return from_family(&family);
        }
    }
}

/// The closure system `family` (assumed intersection-closed and containing
/// its union) as a lattice under inclusion.
pub fn from_family(family: &BTreeSet<u32>) -> FiniteLattice {
    let mut sets: Vec<u32> = family.iter().copied().collect();
    sets.sort_by_key(|s| (s.count_ones(), *s));
    let width = if sets.len() > 100 { 3 } else { 2 };
    let names: Vec<String> = (0..sets.len()).map(|i| format!("e{i:0width$}")).collect();
    FiniteLattice::from_fn(&names, |i, j| sets[i] & sets[j] == sets[i]).expect("closure systems are lattices")
}

/// A random epimorphism onto `target` whose source has at most
/// `max_source` elements. The source is the sublattice of
/// `target x E`, for a small random `E`, generated by pairs over the
/// join-irreducibles and bottom of the target (each with a random second
/// entry) plus a few random pairs; the map is the first projection. Each
/// element of `forced` contributes `(p, 0_E)` as a generator, which makes it
/// the least preimage of `p`.
pub fn random_epimorphism<R: Rng + ?Sized>(rng: &mut R, target: &FiniteLattice, max_source: usize, forced: &[usize]) -> FiniteHom {
    let mut base: Vec<usize> = target.join_irreducibles();
    base.push(target.bottom());
    for attempt in 0.. {
        let e = if attempt >= 30 { fixtures::chain(1) } else { random_lattice(rng, 3) };
        let pairs: Vec<(usize, usize)> = (0..target.len()).flat_map(|x| (0..e.len()).map(move |y| (x, y))).collect();
        let names: Vec<String> = pairs.iter().map(|&(x, y)| format!("{}.{}", target.name(x), e.name(y))).collect();
        let prod = FiniteLattice::from_fn(&names, |i, j| target.leq(pairs[i].0, pairs[j].0) && e.leq(pairs[i].1, pairs[j].1))
            .expect("products of lattices are lattices");
        let at = |x: usize, y: usize| prod.index_of(&format!("{}.{}", target.name(x), e.name(y))).unwrap();
        let mut gens: Vec<usize> = forced.iter().map(|&p| at(p, e.bottom())).collect();
        for &q in &base {
            if !forced.contains(&q) {
                gens.push(at(q, rng.gen_range(0..e.len())));
            }
        }
        for _ in 0..rng.gen_range(0..3) {
            gens.push(at(rng.gen_range(0..target.len()), rng.gen_range(0..e.len())));
        }
        let members: Vec<usize> = prod.generated_by(&gens).ones().collect();
        if members.len() > max_source && attempt < 30 {
            continue;
        }
        let source = prod.induced(&members).expect("sublattices are lattices");
        let sgens: Vec<usize> = gens.iter().map(|&g| source.index_of(prod.name(g)).unwrap()).collect();
        let source = source.with_generators(&sgens).expect("generated by construction");
        let map = (0..source.len())
            .map(|i| pairs[prod.index_of(source.name(i)).unwrap()].0)
            .collect();
        return FiniteHom::new(source, target.clone(), map).expect("projections are homomorphisms");
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn sizes_respect_the_bound() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for max in [1, 2, 5, 8, 12, 30] {
            for _ in 0..20 {
                let l = random_lattice(&mut rng, max);
                assert!(l.len() <= max);
            }
        }
    }

    #[test]
    fn large_instances_are_reachable() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let biggest = (0..10).map(|_| random_lattice(&mut rng, 200).len()).max().unwrap();
        assert!(biggest > 100, "{biggest}");
    }

    #[test]
    fn exact_sizes() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for n in [1, 2, 7, 50, 200] {
            assert_eq!(random_lattice_of_size(&mut rng, n).len(), n);
        }
    }

    #[test]
    fn epimorphisms_are_onto_and_small() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let d = random_lattice(&mut rng, 6);
            let all: Vec<usize> = (0..d.len()).collect();
            let g = random_epimorphism(&mut rng, &d, 12, &all);
            assert!(g.is_surjective());
            assert!(g.source().len() <= 12.max(d.len()));
            for p in all {
                let b = g.beta_stable(p).unwrap();
                assert!(g.source().generators().contains(&b));
            }
        }
    }
}
