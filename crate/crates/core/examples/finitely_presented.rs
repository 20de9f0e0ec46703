//! Lattices freely generated by finite partial lattices: the word problem,
//! closure stages, the standard homomorphism and the boundedness decision.

use fglat::order::fixtures;
use fglat::partial::{semilattice_to_lattice, PartialLattice};
use fglat::Term;

fn main() {
    let t = |s: &str| s.parse::<Term>().unwrap();

    // p is declared to be the join of q and r; s is unrelated
    let p = PartialLattice::from_json(
        r#"{"elements": ["p", "q", "r", "s"],
            "covers": [["q", "p"], ["r", "p"]],
            "joins": [[["q", "r"], "p"]]}"#,
    )
    .unwrap();
    for (a, b) in [("p", "(q | r)"), ("(p & s)", "((q & s) | r)"), ("(p & s)", "((q | r) & s)")] {
        println!("{a} <= {b} in F(P): {}", p.leq_fp(&t(a), &t(b)).unwrap());
    }

    let anti = PartialLattice::antichain(&["x", "y"]).unwrap();
    let mut stage = anti.closure_stage(0, 1000).unwrap();
    let reps: Vec<String> = stage.reps().iter().map(Term::to_string).collect();
    println!("joins of generators over an antichain x, y: {reps:?}");
    let img = stage.standard_hom_image(&t("(x & (x | y))")).unwrap();
    println!("standard homomorphism sends x & (x | y) to {}", stage.reps()[img]);
    let l = semilattice_to_lattice(&stage);
    println!("as a lattice: {} elements, bounded {}", l.len(), l.is_bounded_finite());

    for (name, q) in [
        ("antichain x, y, z", PartialLattice::antichain(&["x", "y", "z"]).unwrap()),
        ("2x2", PartialLattice::from_finite_lattice(&fixtures::boolean(2))),
        ("M3", PartialLattice::from_finite_lattice(&fixtures::m3())),
        ("declared join", p.clone()),
    ] {
        println!(
            "{name}: lower bounded {}, upper bounded {}, Whitman check {}",
            q.is_lower_bounded_fp(10_000).unwrap(),
            q.is_upper_bounded_fp(10_000).unwrap(),
            if q.partial_whitman_check().is_none() { "passes" } else { "fails" }
        );
    }

    let three = PartialLattice::antichain(&["x", "y", "z"]).unwrap();
    let gens = [t("(x & y)"), t("(x | z)"), t("(y | z)")];
    let v = three.lower_bounded_sublattice(&gens, 0, 4, 100_000).unwrap();
    println!(
        "sublattice generated by {:?}: {} elements found in stage {}, lower bounded {}",
        gens.iter().map(Term::to_string).collect::<Vec<_>>(),
        v.size,
        v.stage,
        v.lower_bounded
    );
}
