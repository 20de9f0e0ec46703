//! The approximations `beta_k` and `alpha_k` of least and greatest
//! preimages, for homomorphisms from free lattices onto finite ones.

use fglat::free::FreeLattice;
use fglat::hom::FreeHom;
use fglat::order::fixtures;

fn main() {
    let f = FreeLattice::new(&["x", "y", "z"]).unwrap();

    // onto M3: the beta chain at an atom never settles
    let mut g = FreeHom::new(f.clone(), fixtures::m3(), &[("x", "a"), ("y", "b"), ("z", "c")]).unwrap();
    let a = g.target().index_of("a").unwrap();
    for k in 0..4 {
        let b = g.beta_k(a, k).unwrap();
        println!("M3: beta_{k}(a) = {b} (size {})", b.size());
    }
    println!("M3: beta_stable -> {}", g.beta_stable(8).unwrap_err());

    // onto 2x2 everything stabilizes at once
    let sq = fixtures::boolean(2);
    let mut h = FreeHom::new(f, sq.clone(), &[("x", "01"), ("y", "10"), ("z", "00")]).unwrap();
    let (k, least) = h.beta_stable(8).unwrap();
    let (j, greatest) = h.alpha_stable(8).unwrap();
    println!("2x2: beta stable from k = {k}, alpha from k = {j}");
    for d in 0..sq.len() {
        println!("  preimages of {}: between {} and {}", sq.name(d), least[d], greatest[d]);
    }
    let report = h.lower_bounded_report(Some(&[1, 2])).unwrap();
    println!("2x2: lower bounded {}, on the atoms alone {:?}", report.all_elements, report.p_only);
}
