//! When the common target is not lower bounded, no finite set generates
//! the fiber product of two free-lattice homomorphisms. This finds an
//! explicit pair outside the sublattice generated by a given finite set.

use fglat::free::FreeLattice;
use fglat::hom::{self, FreeHom};
use fglat::order::fixtures;
use fglat::Term;

fn main() {
    let f = FreeLattice::new(&["x", "y", "z"]).unwrap();
    let m3 = fixtures::m3();
    let mut g = FreeHom::new(f.clone(), m3.clone(), &[("x", "a"), ("y", "b"), ("z", "c")]).unwrap();
    let mut h = FreeHom::new(f, m3, &[("x", "b"), ("y", "c"), ("z", "a")]).unwrap();

    let t = |s: &str| s.parse::<Term>().unwrap();
    let z = vec![(t("x"), t("z")), (t("y"), t("x")), (t("(x | y)"), t("(x | z)"))];
    let n = hom::lemma41_bound(&mut g, &mut h, &z, 10).unwrap();
    println!("every generated pair (a, b) has b >= beta_(k+{n})(g(a)) when a lies in H_k");

    let w = hom::nonfg_witness(&mut g, &mut h, &z, 10).unwrap();
    println!("image {}: a = {} (in H{}), b = {}", w.d, w.a, w.k, w.b);
    println!("b is beta_{} and lies strictly below beta_{}", w.m, w.k + w.n);
    println!("re-verified: {}", hom::verify_witness(&mut g, &mut h, &z, &w).unwrap());
}
