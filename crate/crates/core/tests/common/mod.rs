#![allow(dead_code)]

use std::collections::BTreeSet;

use fglat::Term;
use rand::Rng;

/// All terms of depth at most `depth` built with binary meets and joins,
/// deduplicated structurally.
pub fn binary_terms<S: AsRef<str>>(gens: &[S], depth: u32) -> Vec<Term> {
    let mut level: BTreeSet<Term> = gens.iter().map(|g| Term::gen(g.as_ref())).collect();
    for _ in 0..depth {
        let cur: Vec<Term> = level.iter().cloned().collect();
        for (i, a) in cur.iter().enumerate() {
            for b in &cur[..i] {
                level.insert(Term::meet([a.clone(), b.clone()]));
                level.insert(Term::join([a.clone(), b.clone()]));
            }
        }
    }
    level.into_iter().collect()
}

/// A random term of depth at most `depth` with two or three children per
/// operation.
pub fn random_term<S: AsRef<str>>(rng: &mut impl Rng, gens: &[S], depth: u32) -> Term {
    if depth == 0 || rng.gen_bool(0.25) {
        return Term::gen(gens[rng.gen_range(0..gens.len())].as_ref());
    }
    let k = rng.gen_range(2..4);
    let cs: Vec<Term> = (0..k).map(|_| random_term(rng, gens, depth - 1)).collect();
    if rng.gen_bool(0.5) {
        Term::meet(cs)
    } else {
        Term::join(cs)
    }
}

/// A random binary term of depth at most `depth`.
pub fn random_binary_term<S: AsRef<str>>(rng: &mut impl Rng, gens: &[S], depth: u32) -> Term {
    if depth == 0 || rng.gen_bool(0.2) {
        return Term::gen(gens[rng.gen_range(0..gens.len())].as_ref());
    }
    let a = random_binary_term(rng, gens, depth - 1);
    let b = random_binary_term(rng, gens, depth - 1);
    if rng.gen_bool(0.5) {
        Term::meet([a, b])
    } else {
        Term::join([a, b])
    }
}

/// Non-empty subsets of `0..n` as index lists.
pub fn nonempty_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << n)).map(move |m| (0..n).filter(|i| m >> i & 1 == 1).collect())
}
