//! Lower boundedness of finite lattices through the D-relation, with
//! checkable certificates.

use fglat::counterexample::build_l;
use fglat::order::{fixtures, DCertificate};
use fglat::random::random_lattice_of_size;
use fglat::FiniteLattice;
use rand::SeedableRng;

fn report(name: &str, l: &FiniteLattice) {
    let names = |v: &[usize]| v.iter().map(|&i| l.name(i)).collect::<Vec<_>>().join(" ");
    for (p, succ) in l.d_relation() {
        if !succ.is_empty() {
            println!("  {} D {}", l.name(p), names(&succ));
        }
    }
    let cert = l.lower_boundedness();
    match &cert {
        DCertificate::Rank(r) => {
            let ranks: Vec<String> = r.iter().map(|&(p, k)| format!("{}:{k}", l.name(p))).collect();
            println!("{name}: lower bounded, ranks {}", ranks.join(" "));
        }
        DCertificate::Cycle(c) => println!("{name}: not lower bounded, D-cycle {}", names(c)),
    }
    assert!(l.verify_d_certificate(&cert));
    println!("  upper bounded: {}, bounded: {}", l.is_upper_bounded_finite(), l.is_bounded_finite());
}

fn main() {
    let m3 = fixtures::m3();
    let a = m3.index_of("a").unwrap();
    for cover in m3.minimal_join_covers(a, 1000).unwrap() {
        let names: Vec<&str> = cover.cover.iter().map(|&i| m3.name(i)).collect();
        println!("minimal join cover of a in M3: {names:?}");
    }
    report("M3", &m3);
    report("N5", &fixtures::n5());
    report("2x2x2", &fixtures::boolean(3));
    report("L", &build_l());

    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let big = random_lattice_of_size(&mut rng, 200);
    let t = std::time::Instant::now();
    let verdict = big.is_lower_bounded_finite();
    println!("random lattice of size {}: lower bounded {verdict} ({:?})", big.len(), t.elapsed());
}
