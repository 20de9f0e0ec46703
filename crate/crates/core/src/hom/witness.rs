use super::FreeHom;
use crate::error::{Error, Result};
use crate::free::StageIndex;
use crate::term::Term;

/// A pair `(a, b)` in the fiber product of two homomorphisms from free
/// lattices that lies outside the sublattice generated by a given finite
/// set `Z`.
///
/// With `n` the bound from [`lemma41_bound`], every pair of `<Z>` whose
/// first entry lies in `H_k` has second entry above `beta_{h,k+n}` of its
/// image. Here `a` lies in `H_k`, `g(a) = h(b) = d`, and `b` lies strictly
/// below `beta_{h,k+n}(d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonFgWitness {
    pub d: String,
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub a: Term,
    pub b: Term,
}

/// Least `n` with `b >= beta_{h,n}(g(a))` for every `(a, b)` in `z`.
pub fn lemma41_bound(g: &mut FreeHom, h: &mut FreeHom, z: &[(Term, Term)], max_n: usize) -> Result<usize> {
    let mut need = Vec::new();
    for (a, b) in z {
        let d = g.apply(a)?;
        if h.apply(b)? != d {
            return Err(Error::Invalid(format!("({a}, {b}) is not in the fiber product")));
        }
        let id = h.engine().intern(b);
        need.push((d, id));
    }
    for n in 0..=max_n {
        let row = h.beta_table(n)?;
        if need.iter().all(|&(d, b)| h.engine().leq(row[d], b)) {
            return Ok(n);
        }
    }
    Err(Error::cap("lemma 4.1 bound", max_n))
}

/// Finds a pair of the fiber product of `g` and `h` outside `<z>`.
/// Requires both maps onto the same target, and that target not lower
/// bounded. Target elements are tried in index order, skipping those
/// whose least preimage exists.
pub fn nonfg_witness(g: &mut FreeHom, h: &mut FreeHom, z: &[(Term, Term)], max_depth: usize) -> Result<NonFgWitness> {
    if g.target() != h.target() {
        return Err(Error::TargetMismatch);
    }
    if !g.is_surjective() || !h.is_surjective() {
        return Err(Error::NotSurjective);
    }
    let target = h.target().clone();
    if target.is_lower_bounded_finite() {
        return Err(Error::TargetLowerBounded);
    }
    let n = lemma41_bound(g, h, z, max_depth)?;
    let levels = target.lower_bounded_elements(100_000)?;
    for d in (0..target.len()).filter(|&d| levels[d].is_none()) {
        let Some(k) = (0..=max_depth).find(|&k| {
            let id = g.beta_table(k).map(|r| r[d]);
            id.map(|id| g.image_id(id) == d).unwrap_or(false)
        }) else {
            continue;
        };
        let a = g.beta_table(k)?[d];
        let bound = h.beta_table(k + n)?[d];
        for m in k + n + 1..=max_depth {
            let b = h.beta_table(m)?[d];
            if h.image_id(b) == d && !h.engine().leq(bound, b) {
                return Ok(NonFgWitness {
                    d: target.name(d).to_string(),
                    k,
                    n,
                    m,
                    a: g.engine().term(a),
                    b: h.engine().term(b),
                });
            }
        }
    }
    Err(Error::SearchExhausted(max_depth))
}

/// Re-derives every claim of a witness from scratch.
pub fn verify_witness(g: &mut FreeHom, h: &mut FreeHom, z: &[(Term, Term)], w: &NonFgWitness) -> Result<bool> {
    let d = g.target().index_of(&w.d)?;
    if g.apply(&w.a)? != d || h.apply(&w.b)? != d {
        return Ok(false);
    }
    if g.free().alternation_rank(&w.a)? > StageIndex::h(w.k) {
        return Ok(false);
    }
    if lemma41_bound(g, h, z, w.n.max(1) * 4 + 8)? != w.n {
        return Ok(false);
    }
    let bound = h.beta_table(w.k + w.n)?[d];
    let b = h.engine().intern(&w.b);
    Ok(h.engine().leq(b, bound) && !h.engine().leq(bound, b))
}
