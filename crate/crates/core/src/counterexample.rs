//! The 16-element lattice `L` of subspaces of the 3-dimensional space over
//! the 2-element field, and the infinite lattice `M` obtained by inflating
//! each atom and coatom of `L` into an ascending chain.
//!
//! `M` is handled symbolically. Every check here works on a truncation
//! (chain indices bounded by some `J`), so a `true` result is evidence up to
//! that depth, not a proof.

use std::collections::BTreeSet;
use std::fmt;

use crate::closure::close;
use crate::error::Result;
use crate::order::FiniteLattice;

/// `(k - i) mod 7` for indices in `1..=7`.
fn offset(i: u8, k: u8) -> u8 {
    (k + 7 - i) % 7
}

fn shift(i: u8, by: u8) -> u8 {
    (i - 1 + by) % 7 + 1
}

/// `a_i <= b_k` in `L` iff `k` is `i`, `i+1` or `i+3` modulo 7.
pub fn atom_below_coatom(i: u8, k: u8) -> bool {
    matches!(offset(i, k), 0 | 1 | 3)
}

/// `L`: ids `0`, `1`, `a1`..`a7`, `b1`..`b7`.
pub fn build_l() -> FiniteLattice {
    let mut names = vec!["0".to_string(), "1".to_string()];
    names.extend((1..=7).map(|i| format!("a{i}")));
    names.extend((1..=7).map(|i| format!("b{i}")));
    // positions: 0, 1, a_i = i + 1, b_k = k + 8
    FiniteLattice::from_fn(&names, |u, v| {
        u == v
            || u == 0
            || v == 1
            || ((2..=8).contains(&u) && (9..=15).contains(&v) && atom_below_coatom(u as u8 - 1, v as u8 - 8))
    })
    .expect("L is a lattice")
}

/// An element of `M`. Chain indices `i` run over `1..=7`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MElement {
    Zero,
    A(u8, u32),
    B(u8, u32),
    One,
}

impl fmt::Display for MElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MElement::Zero => f.write_str("0"),
            MElement::One => f.write_str("1"),
            MElement::A(i, j) => write!(f, "a{i}.{j}"),
            MElement::B(i, j) => write!(f, "b{i}.{j}"),
        }
    }
}

impl MElement {
    /// Position in its chain; 0 for the bounds.
    pub fn depth(self) -> u32 {
        match self {
            MElement::A(_, j) | MElement::B(_, j) => j,
            _ => 0,
        }
    }

    fn chain(c: usize, j: u32) -> MElement {
        if c < 7 {
            MElement::A(c as u8 + 1, j)
        } else {
            MElement::B(c as u8 - 6, j)
        }
    }
}

/// Every element with chain index at most `depth`, bounds included.
pub fn elements_up_to(depth: u32) -> Vec<MElement> {
    let mut out = vec![MElement::Zero, MElement::One];
    for c in 0..14 {
        out.extend((0..=depth).map(|j| MElement::chain(c, j)));
    }
    out.sort();
    out
}

pub fn leq_m(u: MElement, v: MElement) -> bool {
    use MElement::*;
    match (u, v) {
        (Zero, _) | (_, One) => true,
        (One, _) | (_, Zero) => false,
        (A(i, j), A(k, l)) | (B(i, j), B(k, l)) => i == k && j <= l,
        (B(..), A(..)) => false,
        (A(i, j), B(k, l)) => {
            let d = offset(i, k);
            (matches!(d, 0 | 1 | 3) && j <= l) || (matches!(d, 0 | 3) && j == l + 1)
        }
    }
}

/// Least upper bound. Upper bounds inside one chain form an up-set, so the
/// smallest one per chain is found by scanning indices up to
/// `max(depth) + 2`; the answer is the unique minimum among those and `1`.
pub fn join_m(u: MElement, v: MElement) -> MElement {
    if leq_m(u, v) {
        return v;
    }
    if leq_m(v, u) {
        return u;
    }
    let bound = u.depth().max(v.depth()) + 2;
    let mut cands = vec![MElement::One];
    for c in 0..14 {
        if let Some(x) = (0..=bound)
            .map(|j| MElement::chain(c, j))
            .find(|&x| leq_m(u, x) && leq_m(v, x))
        {
            cands.push(x);
        }
    }
    unique_extreme(&cands, true).expect("M has binary joins")
}

/// Greatest lower bound, dual to [`join_m`].
pub fn meet_m(u: MElement, v: MElement) -> MElement {
    if leq_m(u, v) {
        return u;
    }
    if leq_m(v, u) {
        return v;
    }
    let bound = u.depth().max(v.depth()) + 2;
    let mut cands = vec![MElement::Zero];
    for c in 0..14 {
        if let Some(x) = (0..=bound)
            .rev()
            .map(|j| MElement::chain(c, j))
            .find(|&x| leq_m(x, u) && leq_m(x, v))
        {
            cands.push(x);
        }
    }
    unique_extreme(&cands, false).expect("M has binary meets")
}

fn unique_extreme(cands: &[MElement], least: bool) -> Option<MElement> {
    cands
        .iter()
        .copied()
        .find(|&m| cands.iter().all(|&o| if least { leq_m(m, o) } else { leq_m(o, m) }))
}

/// The surjection `M -> L` collapsing each chain to its letter.
pub fn hom_h(u: MElement) -> String {
    match u {
        MElement::Zero => "0".into(),
        MElement::One => "1".into(),
        MElement::A(i, _) => format!("a{i}"),
        MElement::B(i, _) => format!("b{i}"),
    }
}

/// The 14 generators `a_{i,0}`, `a_{i,1}`.
pub fn m_generators() -> Vec<MElement> {
    (1..=7).flat_map(|i| [MElement::A(i, 0), MElement::A(i, 1)]).collect()
}

/// Whether every element up to `depth` lies in the sublattice generated by
/// [`m_generators`], with closure results past `depth + 2` discarded.
pub fn verify_mfg(depth: u32, cap: usize) -> Result<bool> {
    let closed = close(
        m_generators(),
        |&u, &v| [join_m(u, v), meet_m(u, v)],
        |u| u.depth() <= depth + 2,
        cap,
    )?;
    Ok(elements_up_to(depth).iter().all(|u| closed.contains(u)))
}

/// Pairs `(u, v)` of `ker h` with both indices at most `depth`.
pub fn kernel_pairs(depth: u32) -> Vec<(MElement, MElement)> {
    let els = elements_up_to(depth);
    let mut out = Vec::new();
    for &u in &els {
        for &v in &els {
            if hom_h(u) == hom_h(v) {
                out.push((u, v));
            }
        }
    }
    out
}

/// Generators for `ker h`: the images of [`m_generators`] under
/// `u -> (a_{i,0}, u)` and `u -> (u, a_{i,0})`.
pub fn kernel_generators() -> Vec<(MElement, MElement)> {
    let mut out = BTreeSet::new();
    for u in m_generators() {
        let MElement::A(i, _) = u else { unreachable!() };
        let base = MElement::A(i, 0);
        out.insert((base, u));
        out.insert((u, base));
    }
    out.into_iter().collect()
}

/// Whether every kernel pair up to `depth` lies in the componentwise
/// closure of [`kernel_generators`] (results past `depth + 2` discarded).
pub fn verify_kernel_fg(depth: u32, cap: usize) -> Result<bool> {
    Ok(kernel_missing(depth, cap)?.is_empty())
}

/// Kernel pairs up to `depth` not reached by the truncated closure.
pub fn kernel_missing(depth: u32, cap: usize) -> Result<Vec<(MElement, MElement)>> {
    let closed = close(
        kernel_generators(),
        |&(u1, u2), &(v1, v2)| [(join_m(u1, v1), join_m(u2, v2)), (meet_m(u1, v1), meet_m(u2, v2))],
        |&(u, v)| u.depth() <= depth + 2 && v.depth() <= depth + 2,
        cap,
    )?;
    Ok(kernel_pairs(depth).into_iter().filter(|p| !closed.contains(p)).collect())
}

/// Whether the kernel pairs whose chain indices differ by at most `width`
/// are closed under componentwise join and meet, checked on all such pairs
/// with indices up to `depth`. Every finite subset of `ker h` lies in one of
/// these bands, so a `true` answer for all widths means no finite subset
/// generates the kernel.
pub fn kernel_band_is_closed(depth: u32, width: u32) -> bool {
    let in_band = |(u, v): (MElement, MElement)| hom_h(u) == hom_h(v) && u.depth().abs_diff(v.depth()) <= width;
    let band: Vec<_> = kernel_pairs(depth).into_iter().filter(|&p| in_band(p)).collect();
    band.iter().all(|&(u1, u2)| {
        band.iter().all(|&(v1, v2)| {
            in_band((join_m(u1, v1), join_m(u2, v2))) && in_band((meet_m(u1, v1), meet_m(u2, v2)))
        })
    })
}

/// Every chain `A_i`, `B_i` strictly increases from each index up to `depth`,
/// staying inside one kernel class and below `1`.
pub fn verify_h_unbounded(depth: u32) -> bool {
    (0..14).all(|c| {
        (0..=depth).all(|j| {
            let x = MElement::chain(c, j);
            let y = MElement::chain(c, j + 1);
            leq_m(x, y) && x != y && y != MElement::One && hom_h(x) == hom_h(y)
        })
    })
}

/// `b_{i,j} = a_{i-1,j} | a_{i,j}` and `a_{i,j+2} = b_{i,j+1} & b_{i+3,j+1}`
/// for all `i` and all `j <= depth`.
pub fn verify_identities(depth: u32) -> bool {
    (1..=7u8).all(|i| {
        (0..=depth).all(|j| {
            join_m(MElement::A(shift(i, 6), j), MElement::A(i, j)) == MElement::B(i, j)
                && meet_m(MElement::B(i, j + 1), MElement::B(shift(i, 3), j + 1)) == MElement::A(i, j + 2)
        })
    })
}

/// Reflexivity, antisymmetry and transitivity of [`leq_m`] on the
/// truncation.
pub fn verify_partial_order(depth: u32) -> bool {
    let els = elements_up_to(depth);
    els.iter().all(|&u| leq_m(u, u))
        && els
            .iter()
            .all(|&u| els.iter().all(|&v| u == v || !(leq_m(u, v) && leq_m(v, u))))
        && els.iter().all(|&u| {
            els.iter()
                .filter(|&&v| leq_m(u, v))
                .all(|&v| els.iter().filter(|&&w| leq_m(v, w)).all(|&w| leq_m(u, w)))
        })
}

/// Whether `join_m`/`meet_m` return bounds that beat every other bound
/// among the elements up to `depth` (operands up to `depth - 2`).
pub fn verify_bounds(depth: u32) -> bool {
    let els = elements_up_to(depth);
    let ops = elements_up_to(depth.saturating_sub(2));
    ops.iter().all(|&u| {
        ops.iter().all(|&v| {
            let j = join_m(u, v);
            let m = meet_m(u, v);
            leq_m(u, j)
                && leq_m(v, j)
                && leq_m(m, u)
                && leq_m(m, v)
                && els.iter().all(|&w| {
                    (!(leq_m(u, w) && leq_m(v, w)) || leq_m(j, w))
                        && (!(leq_m(w, u) && leq_m(w, v)) || leq_m(w, m))
                })
        })
    })
}

/// `h` preserves order, joins and meets on the truncation.
pub fn verify_h_homomorphism(depth: u32) -> bool {
    let l = build_l();
    let img = |u: MElement| l.index_of(&hom_h(u)).unwrap();
    let els = elements_up_to(depth);
    els.iter().all(|&u| {
        els.iter().all(|&v| {
            (!leq_m(u, v) || l.leq(img(u), img(v)))
                && img(join_m(u, v)) == l.join(img(u), img(v))
                && img(meet_m(u, v)) == l.meet(img(u), img(v))
        })
    })
}

/// `{0, 1, a_{i,0}, b_{i,0}}` ordered by [`leq_m`] is order-isomorphic to `L`
/// via `h`.
pub fn bottom_layer_is_l() -> bool {
    let l = build_l();
    let layer: Vec<MElement> = elements_up_to(0);
    let img: Vec<usize> = layer.iter().map(|&u| l.index_of(&hom_h(u)).unwrap()).collect();
    let mut seen = img.clone();
    seen.sort_unstable();
    seen.dedup();
    seen.len() == l.len()
        && (0..layer.len())
            .all(|x| (0..layer.len()).all(|y| leq_m(layer[x], layer[y]) == l.leq(img[x], img[y])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use MElement::*;

    #[test]
    fn l_order() {
        let l = build_l();
        assert_eq!(l.len(), 16);
        let a1 = l.index_of("a1").unwrap();
        assert!(l.leq(a1, l.index_of("b2").unwrap()));
        assert!(!l.leq(a1, l.index_of("b3").unwrap()));
        let b12 = l.meet_names(&["b1", "b2"]).unwrap();
        assert_eq!(l.name(b12), "a1");
        let ji: Vec<&str> = l.join_irreducibles().iter().map(|&i| l.name(i)).collect();
        assert_eq!(ji, ["a1", "a2", "a3", "a4", "a5", "a6", "a7"]);
    }

    #[test]
    fn m_order_examples() {
        assert!(leq_m(A(1, 0), B(1, 1)));
        assert!(leq_m(A(1, 1), B(1, 0)));
        assert!(!leq_m(A(1, 1), B(2, 0)));
        assert_eq!(join_m(A(3, 2), Zero), A(3, 2));
        assert_eq!(meet_m(A(3, 2), One), A(3, 2));
    }

    #[test]
    fn identities_and_order() {
        assert!(verify_identities(4));
        assert!(verify_partial_order(4));
        assert!(verify_bounds(5));
    }

    #[test]
    fn bottom_layer_orders_like_l_but_is_not_closed() {
        assert!(bottom_layer_is_l());
        // b_{i,0} & b_{i+3,0} = a_{i,1}, which leaves the layer.
        assert_eq!(meet_m(B(1, 0), B(4, 0)), A(1, 1));
    }

    #[test]
    fn h_is_a_homomorphism() {
        assert!(verify_h_homomorphism(3));
        assert_eq!(hom_h(A(3, 5)), "a3");
        assert_eq!(hom_h(Zero), "0");
    }

    #[test]
    fn generation() {
        assert!(verify_mfg(3, 100_000).unwrap());
        assert!(!m_generators().contains(&B(1, 0)));
        assert!(verify_h_unbounded(10));
    }

    #[test]
    fn kernel_generators_stay_in_a_band() {
        assert!(kernel_band_is_closed(5, 1));
        assert!(kernel_band_is_closed(5, 2));
        let missing = kernel_missing(3, 1_000_000).unwrap();
        assert!(missing.contains(&(A(1, 0), A(1, 2))));
        assert!(missing.iter().all(|(u, v)| u.depth().abs_diff(v.depth()) >= 2));
    }
}
