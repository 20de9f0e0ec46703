use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// Closure of `gens` under a binary operation pair, keeping only results
/// accepted by `keep`. Elements are processed in discovery order and each
/// new element is combined with every earlier one, so the run is
/// deterministic.
pub(crate) fn close<T, F, K, const N: usize>(gens: Vec<T>, op: F, keep: K, cap: usize) -> Result<BTreeSet<T>>
where
    T: Clone + Ord,
    F: Fn(&T, &T) -> [T; N],
    K: Fn(&T) -> bool,
{
    let mut set = BTreeSet::new();
    let mut members = Vec::new();
    for g in gens {
        if set.insert(g.clone()) {
            members.push(g);
        }
    }
    let mut i = 0;
    while i < members.len() {
        for k in 0..=i {
            for r in op(&members[i], &members[k]) {
                if keep(&r) && !set.contains(&r) {
                    if set.len() >= cap {
                        return Err(Error::cap("closure", cap));
                    }
                    set.insert(r.clone());
                    members.push(r);
                }
            }
        }
        i += 1;
    }
    Ok(set)
}
