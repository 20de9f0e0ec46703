//! A finite generating set for the fiber product of two bounded
//! epimorphisms, checked against the full product.

use fglat::hom::{self, FiniteHom};
use fglat::order::fixtures;
use fglat::random::{random_epimorphism, random_lattice};
use rand::SeedableRng;

fn main() {
    let sq = fixtures::boolean(2).with_generator_names(&["01", "10"]).unwrap();
    let two = fixtures::chain(2);
    let (x, y) = (sq.index_of("01").unwrap(), sq.index_of("10").unwrap());
    let g = FiniteHom::from_generator_images(sq.clone(), two.clone(), &[(x, 1), (y, 0)]).unwrap();
    let h = FiniteHom::from_generator_images(sq.clone(), two.clone(), &[(x, 0), (y, 1)]).unwrap();
    let all: Vec<usize> = (0..two.len()).collect();
    let z = hom::theorem1_generators(&g, &h, &all).unwrap();
    let shown: Vec<String> = z.iter().map(|&(a, b)| format!("({}, {})", sq.name(a), sq.name(b))).collect();
    println!("generators: {}", shown.join(" "));
    let closed = hom::sublattice_closure(&sq, &sq, &z, 1000).unwrap();
    let c = hom::fiber_product(&g, &h).unwrap();
    println!("closure has {} pairs, fiber product {}: equal {}", closed.len(), c.len(), closed == c);
    println!("with (0, 1) added it gives g(a) <= h(b): {}", hom::remark17_check(&g, &h, &z, 1000).unwrap());

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    let mut agree = 0;
    for _ in 0..20 {
        let d = random_lattice(&mut rng, 6);
        let g = random_epimorphism(&mut rng, &d, 10, &[]);
        let h = random_epimorphism(&mut rng, &d, 10, &[]);
        let p: Vec<usize> = (0..d.len()).collect();
        let z = hom::theorem1_generators(&g, &h, &p).unwrap();
        let closed = hom::sublattice_closure(g.source(), h.source(), &z, 100_000).unwrap();
        agree += usize::from(closed == hom::fiber_product(&g, &h).unwrap());
    }
    println!("random instances where the generating set works: {agree} of 20");
}
