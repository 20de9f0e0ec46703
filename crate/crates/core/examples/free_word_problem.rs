//! The word problem in free lattices, canonical forms, and the alternation
//! stages `G_k`, `H_k`.

use fglat::free::{FreeLattice, StageIndex};
use fglat::Term;

fn main() {
    let f = FreeLattice::new(&["x", "y", "z"]).unwrap();
    let t = |s: &str| s.parse::<Term>().unwrap();

    for (s, u) in [
        ("x", "(x | y)"),
        ("((x & y) | (x & z))", "(x & (y | z))"),
        ("(x & (y | z))", "((x & y) | (x & z))"),
        ("(x & (y | (x & z)))", "((x & y) | (x & z))"),
    ] {
        println!("{s} <= {u}: {}", f.leq(&t(s), &t(u)).unwrap());
    }

    for s in ["(x | (x & y))", "((x | y) & (x | z) & x)", "((x & y) | (x & y & z) | z)"] {
        let c = f.canonical_form(&t(s)).unwrap();
        println!("{s} -> {c}, in {}", f.alternation_rank(&c).unwrap());
    }

    let two = FreeLattice::new(&["x", "y"]).unwrap();
    let all = two.stage_elements(StageIndex::g(5), 1000).unwrap();
    let shown: Vec<String> = all.iter().map(Term::to_string).collect();
    println!("F(x, y) has {} elements: {}", all.len(), shown.join(", "));

    for idx in [StageIndex::g(0), StageIndex::h(0), StageIndex::g(1), StageIndex::h(1)] {
        println!("|{idx}| over x, y, z = {}", f.stage_elements(idx, 10_000).unwrap().len());
    }
}
