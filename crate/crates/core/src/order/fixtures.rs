//! Small named lattices used throughout the tests, examples and CLI.

use super::lattice::FiniteLattice;

/// The chain `0 < 1 < ... < n-1` (ids are decimal numerals).
pub fn chain(n: usize) -> FiniteLattice {
    assert!(n >= 1);
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    FiniteLattice::from_fn(&names, |i, j| i <= j).unwrap()
}

/// The Boolean lattice of subsets of a `k`-set; ids are bit strings.
pub fn boolean(k: usize) -> FiniteLattice {
    let names: Vec<String> = (0..1usize << k)
        .map(|m| (0..k).rev().map(|b| if m >> b & 1 == 1 { '1' } else { '0' }).collect())
        .collect();
    FiniteLattice::from_fn(&names, |i, j| i & j == i).unwrap()
}

/// The diamond: `0`, three atoms `a`, `b`, `c`, and `1`.
pub fn m3() -> FiniteLattice {
    let names = ["0", "a", "b", "c", "1"];
    FiniteLattice::from_fn(&names, |i, j| i == j || i == 0 || j == 4).unwrap()
}

/// The pentagon: `0 < a < c < 1` and `0 < b < 1`.
pub fn n5() -> FiniteLattice {
    let names = ["0", "a", "b", "c", "1"];
    FiniteLattice::from_fn(&names, |i, j| i == j || i == 0 || j == 4 || (i, j) == (1, 3)).unwrap()
}

/// Direct product with ids `"x.y"`.
pub fn product(a: &FiniteLattice, b: &FiniteLattice) -> FiniteLattice {
    let pairs: Vec<(usize, usize)> = (0..a.len()).flat_map(|x| (0..b.len()).map(move |y| (x, y))).collect();
    let names: Vec<String> = pairs
        .iter()
        .map(|&(x, y)| format!("{}.{}", a.name(x), b.name(y)))
        .collect();
    FiniteLattice::from_fn(&names, |i, j| {
        a.leq(pairs[i].0, pairs[j].0) && b.leq(pairs[i].1, pairs[j].1)
    })
    .unwrap()
}

/// Looks a fixture up by name: `chainN`, `booleanK`, `2x2`, `m3`, `n5`, `L`.
pub fn by_name(name: &str) -> Option<FiniteLattice> {
    match name {
        "m3" | "M3" => Some(m3()),
        "n5" | "N5" => Some(n5()),
        "2x2" => Some(boolean(2)),
        "L" => Some(crate::counterexample::build_l()),
        _ => {
            if let Some(n) = name.strip_prefix("chain") {
                n.parse().ok().filter(|&n| (1..=10).contains(&n)).map(chain)
            } else if let Some(k) = name.strip_prefix("boolean") {
                k.parse().ok().filter(|&k| k <= 6).map(boolean)
            } else {
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(chain(1).len(), 1);
        assert_eq!(boolean(3).len(), 8);
        assert_eq!(m3().join_irreducibles().len(), 3);
        assert_eq!(n5().join_irreducibles().len(), 3);
        assert_eq!(product(&chain(2), &chain(3)).len(), 6);
    }

    #[test]
    fn product_of_chains_is_boolean() {
        let p = product(&chain(2), &chain(2));
        assert_eq!(p.join_irreducibles().len(), 2);
        assert!(p.is_bounded_finite());
    }
}
