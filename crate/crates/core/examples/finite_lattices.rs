//! Finite lattices: tables, irreducibles, Whitman's and Dean's conditions,
//! and Hasse diagrams.

use fglat::counterexample::build_l;
use fglat::order::fixtures;
use fglat::FiniteLattice;

fn show(name: &str, l: &FiniteLattice) {
    let names = |v: Vec<usize>| v.iter().map(|&i| l.name(i)).collect::<Vec<_>>().join(" ");
    println!("{name}: {} elements", l.len());
    println!("  join-irreducibles: {}", names(l.join_irreducibles()));
    println!("  meet-irreducibles: {}", names(l.meet_irreducibles()));
    match l.check_whitman().unwrap() {
        None => println!("  (W) holds"),
        Some(f) => println!("  (W) fails at meetands {} / joinands {}", names(f.meetands), names(f.joinands)),
    }
}

fn main() {
    let five = FiniteLattice::from_json(
        r#"{"elements": ["0", "a", "b", "c", "1"],
            "covers": [["0", "a"], ["a", "b"], ["b", "1"], ["0", "c"], ["c", "1"]]}"#,
    )
    .unwrap();
    let b = five.index_of("b").unwrap();
    let c = five.index_of("c").unwrap();
    println!("in the pentagon b & c = {}, b | c = {}", five.name(five.meet(b, c)), five.name(five.join(b, c)));
    show("pentagon", &five);
    show("M3", &fixtures::m3());

    let l = build_l();
    show("L", &l);
    let atoms: Vec<usize> = l.join_irreducibles();
    println!("  (D) with the atoms: {}", if l.check_dean(&atoms).unwrap().is_none() { "holds" } else { "fails" });
    println!("  b1 & b2 = {}", l.name(l.meet_names(&["b1", "b2"]).unwrap()));

    println!("\nHasse diagram of M3:\n{}", fixtures::m3().to_dot());
}
