use std::collections::BTreeSet;

use super::FiniteHom;
use crate::closure::close;
use crate::error::{Error, Result};
use crate::order::FiniteLattice;

/// A set of pairs `(a, b)` of source element indices.
pub type PairSet = BTreeSet<(usize, usize)>;

fn same_target(g: &FiniteHom, h: &FiniteHom) -> Result<()> {
    if g.target() != h.target() {
        return Err(Error::TargetMismatch);
    }
    Ok(())
}

/// `{(a, b) : g(a) = h(b)}`
pub fn fiber_product(g: &FiniteHom, h: &FiniteHom) -> Result<PairSet> {
    same_target(g, h)?;
    let mut out = PairSet::new();
    for a in 0..g.source().len() {
        for b in 0..h.source().len() {
            if g.apply(a) == h.apply(b) {
                out.insert((a, b));
            }
        }
    }
    Ok(out)
}

pub fn kernel(g: &FiniteHom) -> PairSet {
    fiber_product(g, g).expect("a homomorphism shares its own target")
}

/// Sublattice of `A x B` generated by `z`.
pub fn sublattice_closure(a: &FiniteLattice, b: &FiniteLattice, z: &PairSet, cap: usize) -> Result<PairSet> {
    close(
        z.iter().copied().collect(),
        |&(x1, y1), &(x2, y2)| [(a.meet(x1, x2), b.meet(y1, y2)), (a.join(x1, x2), b.join(y1, y2))],
        |_| true,
        cap,
    )
}

/// The finite generating set of the fiber product built from the
/// generators `X` of `g`'s source, `Y` of `h`'s source and a generating set
/// `P` of the target on which the target satisfies (D):
///
/// * `(x, alpha_h(g(x)))` for `x` in `X` and `(beta_g(h(y)), y)` for `y` in `Y`,
/// * `(alpha_g(d), beta_h(d))` and `(beta_g(d), alpha_h(d))` for `d` in
///   `E = g(X) + h(Y) + P`.
pub fn theorem1_generators(g: &FiniteHom, h: &FiniteHom, p: &[usize]) -> Result<PairSet> {
    same_target(g, h)?;
    if !g.is_surjective() || !h.is_surjective() {
        return Err(Error::NotSurjective);
    }
    if g.target().check_dean(p)?.is_some() {
        return Err(Error::DeanConditionFails);
    }
    Ok(generators_from(g, h, g.source().generators(), h.source().generators(), p))
}

/// As [`theorem1_generators`], after adjoining both projections of the
/// result to `X` and `Y` and computing again.
pub fn theorem1_generators_enlarged(g: &FiniteHom, h: &FiniteHom, p: &[usize]) -> Result<PairSet> {
    let z = theorem1_generators(g, h, p)?;
    let (xs, ys) = enlarged_gens(g, h, &z);
    Ok(generators_from(g, h, &xs, &ys, p))
}

fn enlarged_gens(g: &FiniteHom, h: &FiniteHom, z: &PairSet) -> (Vec<usize>, Vec<usize>) {
    let mut xs: BTreeSet<usize> = g.source().generators().iter().copied().collect();
    let mut ys: BTreeSet<usize> = h.source().generators().iter().copied().collect();
    for &(a, b) in z {
        xs.insert(a);
        ys.insert(b);
    }
    (xs.into_iter().collect(), ys.into_iter().collect())
}

fn generators_from(g: &FiniteHom, h: &FiniteHom, xs: &[usize], ys: &[usize], p: &[usize]) -> PairSet {
    let lb = |f: &FiniteHom, d| f.beta_stable(d).expect("surjective");
    let ub = |f: &FiniteHom, d| f.alpha_stable(d).expect("surjective");
    let mut z = PairSet::new();
    let mut e: BTreeSet<usize> = p.iter().copied().collect();
    for &x in xs {
        z.insert((x, ub(h, g.apply(x))));
        e.insert(g.apply(x));
    }
    for &y in ys {
        z.insert((lb(g, h.apply(y)), y));
        e.insert(h.apply(y));
    }
    for d in e {
        z.insert((ub(g, d), lb(h, d)));
        z.insert((lb(g, d), ub(h, d)));
    }
    z
}

/// Whether `<z + {(0_A, 1_B)}>` is the whole of `{(a, b) : g(a) <= h(b)}`.
pub fn remark17_check(g: &FiniteHom, h: &FiniteHom, z: &PairSet, cap: usize) -> Result<bool> {
    same_target(g, h)?;
    let (a, b) = (g.source(), h.source());
    let mut gens = z.clone();
    gens.insert((a.bottom(), b.top()));
    let got = sublattice_closure(a, b, &gens, cap)?;
    let want: PairSet = (0..a.len())
        .flat_map(|x| (0..b.len()).map(move |y| (x, y)))
        .filter(|&(x, y)| g.target().leq(g.apply(x), h.apply(y)))
        .collect();
    Ok(got == want)
}

/// The staged membership claims behind the generating set: with `X`, `Y`
/// enlarged by the projections of `z`, every `b` in `G_{Y,k}` gives
/// `(alpha_{g,k}(h(b)), b)` in `<z>` and every `a` in `H_{X,k}` gives
/// `(a, beta_{h,k}(g(a)))` in `<z>`. Checks all stages up to stabilization.
pub fn claim2_check(g: &FiniteHom, h: &FiniteHom, z: &PairSet, cap: usize) -> Result<bool> {
    same_target(g, h)?;
    let (xs, ys) = enlarged_gens(g, h, z);
    let g2 = FiniteHom::new(g.source().clone().with_generators(&xs)?, g.target().clone(), g.map().to_vec())?;
    let h2 = FiniteHom::new(h.source().clone().with_generators(&ys)?, h.target().clone(), h.map().to_vec())?;
    let closed = sublattice_closure(g.source(), h.source(), z, cap)?;
    let k_max = g2.stage_count().max(h2.stage_count());
    for k in 0..=k_max {
        for b in h2.stage_g(k).ones() {
            if !closed.contains(&(g2.alpha_k(h2.apply(b), k), b)) {
                return Ok(false);
            }
        }
        for a in g2.stage_h(k).ones() {
            if !closed.contains(&(a, h2.beta_k(g2.apply(a), k))) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
