//! The infinite lattice obtained from the subspace lattice of a 3-space
//! over the 2-element field by stretching atoms and coatoms into chains,
//! checked on truncations.

use fglat::counterexample::*;

fn main() {
    use MElement::*;
    println!("a1.0 | a2.0 = {}", join_m(A(1, 0), A(2, 0)));
    println!("b1.1 & b4.1 = {}", meet_m(B(1, 1), B(4, 1)));
    println!("b1.0 & b4.0 = {} (the bottom layer is not closed)", meet_m(B(1, 0), B(4, 0)));

    println!("partial order up to index 6: {}", verify_partial_order(6));
    println!("generated by a_i.0, a_i.1 up to index 5: {}", verify_mfg(5, 1_000_000).unwrap());
    println!("h collapses chains onto L and is unbounded: {} {}", verify_h_homomorphism(3), verify_h_unbounded(8));

    let missing = kernel_missing(3, 1_000_000).unwrap();
    println!(
        "kernel pairs up to index 3 not generated by the 21 chosen pairs: {} of {}",
        missing.len(),
        kernel_pairs(3).len()
    );
    for w in 1..=3 {
        println!("kernel pairs with index gap <= {w} form a sublattice: {}", kernel_band_is_closed(4, w));
    }
}
