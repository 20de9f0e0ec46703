//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use fglat::counterexample;
use fglat::free::{FreeEngine, FreeLattice};
use fglat::hom::{self, FiniteHom, FreeHom};
use fglat::order::fixtures;
use fglat::partial::{DeanEngine, PartialLattice};
use fglat::random::{random_epimorphism, random_lattice, random_lattice_of_size};
use fglat::{FiniteLattice, Term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{binary_terms, nonempty_subsets, random_binary_term, random_term};

type Outcome = Result<String, String>;

fn main() {
    let criteria: Vec<(&str, fn() -> Outcome)> = vec![
        ("free lattice on two generators has four elements", free_two_generators),
        ("Whitman order is sound in finite lattices", whitman_soundness),
        ("Dean order on an antichain equals the free order", dean_vs_whitman),
        ("Dean order on total lattices equals evaluation", dean_vs_evaluation),
        ("approximation properties on finite epimorphisms", approximation_suite),
        ("meet identities under Dean's condition", meet_identity_suite),
        ("finite generating set of fiber products", fiber_generation),
        ("order-relation variant of the generating set", order_relation_generation),
        ("infinite fixture with finitely generated kernel", infinite_fixture),
        ("boundedness decision for partial lattices", boundedness_decision),
        ("non-finite-generation witness", witness_suite),
        ("finite lower-boundedness test on 200 elements", finite_test_speed),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = f();
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2} s)", i + 1),
            Err(detail) => {
                println!("FAIL {:>2} {name}: {detail} ({secs:.2} s)", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("all {} criteria passed", criteria.len());
    } else {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

// 1
fn free_two_generators() -> Outcome {
    let start = Instant::now();
    let terms = binary_terms(&["x", "y"], 3);
    let mut e = FreeEngine::new();
    let mut classes: Vec<fglat::term::TermId> = Vec::new();
    for t in &terms {
        let id = e.intern(t);
        if !classes.iter().any(|&c| e.eq(c, id)) {
            classes.push(id);
        }
    }
    let mut reps: Vec<String> = classes.iter().map(|&c| { let k = e.canon(c); e.term(k).to_string() }).collect();
    reps.sort();
    let secs = start.elapsed().as_secs_f64();
    let want = ["(x & y)", "(x | y)", "x", "y"];
    check(
        reps == want && secs < 1.0,
        format!("{} terms, classes {reps:?}, {secs:.3} s", terms.len()),
    )
}

// 2
fn whitman_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let gens = ["x", "y", "z"];
    let lattices: Vec<FiniteLattice> = (0..20).map(|_| random_lattice(&mut rng, 8)).collect();
    let assignments: Vec<Vec<[usize; 3]>> = lattices
        .iter()
        .map(|l| {
            (0..50)
                .map(|_| [rng.gen_range(0..l.len()), rng.gen_range(0..l.len()), rng.gen_range(0..l.len())])
                .collect()
        })
        .collect();
    let mut e = FreeEngine::new();
    let (mut related, mut violations) = (0, 0);
    for _ in 0..10_000 {
        let s = random_term(&mut rng, &gens, 3);
        let t = random_term(&mut rng, &gens, 3);
        let (a, b) = (e.intern(&s), e.intern(&t));
        if !e.leq(a, b) {
            continue;
        }
        related += 1;
        for (l, asg) in lattices.iter().zip(&assignments) {
            for v in asg {
                let f = |x: &str| gens.iter().position(|g| *g == x).map(|i| v[i]);
                if !l.leq(l.evaluate_with(&s, &f).unwrap(), l.evaluate_with(&t, &f).unwrap()) {
                    violations += 1;
                }
            }
        }
    }
    check(violations == 0, format!("{related} related pairs of 10000, {violations} violations"))
}

// 3
fn dean_vs_whitman() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let gens = ["x", "y", "z"];
    let p = PartialLattice::antichain(&gens).unwrap();
    let mut dean = DeanEngine::new(p);
    let mut free = FreeEngine::new();
    let (mut trues, mut bad) = (0, 0);
    for _ in 0..10_000 {
        let s = random_term(&mut rng, &gens, 3);
        let t = random_term(&mut rng, &gens, 3);
        let (a, b) = (dean.intern(&s).unwrap(), dean.intern(&t).unwrap());
        let (c, d) = (free.intern(&s), free.intern(&t));
        let r = dean.leq(a, b);
        trues += usize::from(r);
        if r != free.leq(c, d) {
            bad += 1;
        }
    }
    check(bad == 0, format!("10000 pairs ({trues} related), {bad} disagreements"))
}

// 4
fn dean_vs_evaluation() -> Outcome {
    let cases: Vec<(&str, FiniteLattice, Vec<&str>)> = vec![
        ("2-chain", fixtures::chain(2), vec!["0", "1"]),
        ("2x2", fixtures::boolean(2), vec!["01", "10"]),
        ("N5", fixtures::n5(), vec!["a", "b", "c"]),
        ("M3", fixtures::m3(), vec!["a", "b", "c"]),
    ];
    let mut report = Vec::new();
    let mut bad = 0usize;
    for (name, l, gens) in &cases {
        let terms = binary_terms(gens, 3);
        let mut e = DeanEngine::new(PartialLattice::from_finite_lattice(l));
        let mut all: BTreeSet<Term> = BTreeSet::new();
        for t in &terms {
            all.extend(t.subterms());
        }
        let all: Vec<Term> = all.into_iter().collect();
        let ids: Vec<_> = all.iter().map(|t| e.intern(t).unwrap()).collect();
        let vals: Vec<usize> = all.iter().map(|t| l.evaluate_ids(t).unwrap()).collect();
        let m = e.leq_matrix(&ids);
        let mut here = 0;
        for i in 0..all.len() {
            for j in 0..all.len() {
                if m[i].contains(j) != l.leq(vals[i], vals[j]) {
                    here += 1;
                }
            }
        }
        bad += here;
        report.push(format!("{name}: {} pairs", all.len() * all.len()));
    }
    let l = counterexample::build_l();
    let gens: Vec<String> = (1..=7).map(|i| format!("a{i}")).collect();
    let mut e = DeanEngine::new(PartialLattice::from_finite_lattice(&l));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut here = 0;
    for _ in 0..100_000 {
        let s = random_binary_term(&mut rng, &gens, 3);
        let t = random_binary_term(&mut rng, &gens, 3);
        let (a, b) = (e.intern(&s).unwrap(), e.intern(&t).unwrap());
        if e.leq(a, b) != l.leq(l.evaluate_ids(&s).unwrap(), l.evaluate_ids(&t).unwrap()) {
            here += 1;
        }
    }
    bad += here;
    report.push("L: 100000 sampled pairs".into());
    check(bad == 0, format!("{}; {bad} disagreements", report.join(", ")))
}

/// Stage sets recomputed from the definitions, independent of the library.
fn stage_sets(l: &FiniteLattice, k_max: usize) -> (Vec<BTreeSet<usize>>, Vec<BTreeSet<usize>>) {
    let gens: Vec<usize> = l.generators().to_vec();
    let one = l.join_set(gens.iter().copied());
    let zero = l.meet_set(gens.iter().copied());
    let close = |seed: BTreeSet<usize>, meet: bool| {
        let mut set = seed;
        loop {
            let v: Vec<usize> = set.iter().copied().collect();
            let mut next = set.clone();
            for &a in &v {
                for &b in &v {
                    next.insert(if meet { l.meet(a, b) } else { l.join(a, b) });
                }
            }
            if next == set {
                return set;
            }
            set = next;
        }
    };
    let mut g: BTreeSet<usize> = gens.into_iter().collect();
    let (mut gs, mut hs) = (Vec::new(), Vec::new());
    for _ in 0..=k_max + 1 {
        let mut h = g.clone();
        h.insert(one);
        let h = close(h, true);
        let mut next = h.clone();
        next.insert(zero);
        gs.push(g);
        hs.push(h.clone());
        g = close(next, false);
    }
    (gs, hs)
}

// 5
fn approximation_suite() -> Outcome {
    const K: usize = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut viol: BTreeMap<String, usize> = BTreeMap::new();
    let mut bump = |key: String| *viol.entry(key).or_default() += 1;
    let mut sizes = (0, 0);
    for _ in 0..100 {
        let d = random_lattice(&mut rng, 8);
        let g = random_epimorphism(&mut rng, &d, 12, &[]);
        let a = g.source();
        sizes.0 = sizes.0.max(a.len());
        sizes.1 = sizes.1.max(d.len());
        let (gs, hs) = stage_sets(a, K + 2);
        for k in 0..=K + 2 {
            if gs[k] != g.stage_g(k).ones().collect() || hs[k] != g.stage_h(k).ones().collect() {
                bump(format!("stage sets at k={k}"));
            }
        }
        let al = |k: usize, e: usize| g.alpha_k(e, k);
        let be = |k: usize, e: usize| g.beta_k(e, k);
        let n = d.len();
        for k in 0..=K {
            // (i) monotone in the target element
            for x in 0..n {
                for y in 0..n {
                    if d.leq(x, y) && (!a.leq(al(k, x), al(k, y)) || !a.leq(be(k, x), be(k, y))) {
                        bump("(i)".into());
                    }
                }
            }
            // (ii) monotone in k
            for l in k..=K {
                for x in 0..n {
                    if !a.leq(al(k, x), al(l, x)) || !a.leq(be(l, x), be(k, x)) {
                        bump("(ii)".into());
                    }
                }
            }
        }
        // (iii)
        for el in 0..a.len() {
            for x in 0..n {
                for y in 0..n {
                    if d.leq(x, g.apply(el)) && d.leq(g.apply(el), y) && !(0..=K + 4).any(|m| a.leq(be(m, x), el) && a.leq(el, al(m + 1, y))) {
                        bump("(iii)".into());
                    }
                }
            }
        }
        // (iv) and (v): base cases and the formulas for every l < k
        let xs = a.generators();
        for x in 0..n {
            if al(0, x) != a.join_set(xs.iter().copied().filter(|&w| d.leq(g.apply(w), x))) {
                bump("(iv) k=0".into());
            }
            if be(0, x) != a.meet_set(xs.iter().copied().filter(|&w| d.leq(x, g.apply(w)))) {
                bump("(v) k=0".into());
            }
        }
        for k in 1..=K {
            let gprev: Vec<usize> = gs[k - 1].iter().copied().collect();
            let hprev: Vec<usize> = hs[k - 1].iter().copied().collect();
            let meets: Vec<(usize, Vec<usize>)> = subsets_with_empty(gprev.len())
                .map(|u| (a.meet_set(u.iter().map(|&i| gprev[i])), u.iter().map(|&i| g.apply(gprev[i])).collect()))
                .collect();
            let joins: Vec<(usize, Vec<usize>)> = subsets_with_empty(hprev.len())
                .map(|u| (a.join_set(u.iter().map(|&i| hprev[i])), u.iter().map(|&i| g.apply(hprev[i])).collect()))
                .collect();
            for x in 0..n {
                let mut lhs_a = Vec::new();
                for (m, imgs) in &meets {
                    if d.leq(g.apply(*m), x) && imgs.iter().all(|&v| !d.leq(v, x)) {
                        lhs_a.push(*m);
                    }
                }
                let mut lhs_b = Vec::new();
                for (j, imgs) in &joins {
                    if d.leq(x, g.apply(*j)) && imgs.iter().all(|&v| !d.leq(x, v)) {
                        lhs_b.push(*j);
                    }
                }
                for l in 0..k {
                    let fa = a.join(a.join_set(lhs_a.iter().copied()), al(l, x));
                    if fa != al(k, x) {
                        bump(format!("(iv) k={k}"));
                    }
                    let fb = a.meet(a.meet_set(lhs_b.iter().copied()), be(l, x));
                    if fb != be(k, x) {
                        bump(format!("(v) k={k}"));
                    }
                }
            }
        }
        // (vi)
        for k in 1..=K {
            for e in nonempty_subsets(n) {
                let lhs = a.meet_set(e.iter().map(|&x| al(k - 1, x)));
                if !a.leq(lhs, al(k, d.meet_set(e.iter().copied()))) {
                    bump(format!("(vi) alpha k={k}"));
                }
                let lhs = a.join_set(e.iter().map(|&x| be(k - 1, x)));
                if !a.leq(be(k, d.join_set(e.iter().copied())), lhs) {
                    bump(format!("(vi) beta k={k}"));
                }
            }
        }
    }
    let total: usize = viol.values().sum();
    check(
        total == 0,
        format!("100 epimorphisms (|A| <= {}, |D| <= {}), k <= {K}, violations {viol:?}", sizes.0, sizes.1),
    )
}

fn subsets_with_empty(n: usize) -> impl Iterator<Item = Vec<usize>> {
    std::iter::once(Vec::new()).chain(nonempty_subsets(n))
}

// 6
/// The clauses of (D) with `S` or `T` empty: `1 = meet()` must lie in `P`
/// unless it has a single lower cover, and dually for `0`.
fn dean_empty_clauses(d: &FiniteLattice, p: &[usize]) -> bool {
    (p.contains(&d.top()) || d.lower_covers(d.top()).len() <= 1)
        && (p.contains(&d.bottom()) || d.upper_covers(d.bottom()).len() <= 1)
}

#[derive(Default, Debug)]
struct IdentityTally {
    instances: usize,
    staged: usize,
    viol_i: usize,
    viol_ii: usize,
}

/// Runs (i) and (ii) for `k <= 4` on `count` random instances whose
/// generating set is chosen by `pick`. Instances failing the hypotheses are
/// redrawn; `literal_dean` adds the empty-set clauses to them.
fn identity_group(
    rng: &mut ChaCha8Rng,
    count: usize,
    literal_dean: bool,
    pick: impl Fn(&FiniteLattice, usize) -> Vec<usize>,
) -> IdentityTally {
    const K: usize = 4;
    let mut t = IdentityTally::default();
    while t.instances < count {
        let d = random_lattice(rng, 6);
        let p = pick(&d, t.instances);
        if !d.generated_by(&p).is_full()
            || d.check_dean(&p).unwrap().is_some()
            || (literal_dean && !dean_empty_clauses(&d, &p))
        {
            continue;
        }
        let g = random_epimorphism(rng, &d, 14, &p);
        // least preimages of P exist (finite source) and lie in H_0
        if !p.iter().all(|&x| g.stage_h(0).contains(g.beta_stable(x).unwrap())) {
            continue;
        }
        t.instances += 1;
        let a = g.source();
        let dp = d.clone().with_generators(&p).unwrap();
        for k in 0..=K {
            for e in subsets_with_empty(d.len()) {
                let m = d.meet_set(e.iter().copied());
                let rhs = a.meet(a.meet_set(e.iter().map(|&x| g.beta_k(x, k))), g.beta_k(m, 0));
                if g.beta_k(m, k) != rhs {
                    t.viol_i += 1;
                }
            }
            let (_, hp) = stage_sets(&dp, k);
            for &x in &hp[k] {
                t.staged += 1;
                if g.beta_k(x, k) != g.beta_stable(x).unwrap() {
                    t.viol_ii += 1;
                }
            }
        }
    }
    t
}

fn meet_identity_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let with_bounds = |d: &FiniteLattice| {
        let mut p = d.join_irreducibles();
        p.extend([d.bottom(), d.top()]);
        p.sort_unstable();
        p.dedup();
        p
    };
    let main = identity_group(&mut rng, 100, true, |d, i| {
        if i % 2 == 0 {
            (0..d.len()).collect()
        } else {
            with_bounds(d)
        }
    });
    let control = identity_group(&mut rng, 100, false, |d, _| {
        let mut p = d.join_irreducibles();
        p.push(d.bottom());
        p.sort_unstable();
        p.dedup();
        p
    });
    check(
        main.viol_i + main.viol_ii == 0,
        format!(
            "{} instances (half with P = join-irreducibles, 0, 1), {} staged checks, violations (i) {}, (ii) {}; \
             info: P = join-irreducibles and 0 without the empty-set clauses gives (i) {}, (ii) {}",
            main.instances, main.staged, main.viol_i, main.viol_ii, control.viol_i, control.viol_ii
        ),
    )
}

fn fiber_instances() -> Vec<(FiniteHom, FiniteHom, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    (0..50)
        .map(|_| {
            let d = random_lattice(&mut rng, 6);
            let g = random_epimorphism(&mut rng, &d, 10, &[]);
            let h = random_epimorphism(&mut rng, &d, 10, &[]);
            (g, h, (0..d.len()).collect())
        })
        .collect()
}

// 7
fn fiber_generation() -> Outcome {
    let start = Instant::now();
    let (mut bad, mut claim2_bad, mut largest) = (0, 0, 0);
    for (g, h, p) in fiber_instances() {
        let z = hom::theorem1_generators(&g, &h, &p).unwrap();
        let c = hom::fiber_product(&g, &h).unwrap();
        largest = largest.max(c.len());
        if hom::sublattice_closure(g.source(), h.source(), &z, 100_000).unwrap() != c {
            bad += 1;
        }
        let ze = hom::theorem1_generators_enlarged(&g, &h, &p).unwrap();
        if hom::sublattice_closure(g.source(), h.source(), &ze, 100_000).unwrap() != c {
            bad += 1;
        }
        if !hom::claim2_check(&g, &h, &z, 100_000).unwrap() {
            claim2_bad += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        bad == 0 && claim2_bad == 0 && secs < 60.0,
        format!("50 instances (largest fiber product {largest}), {bad} mismatches, staged claim failures {claim2_bad}"),
    )
}

// 8
fn order_relation_generation() -> Outcome {
    let mut bad = 0;
    for (g, h, p) in fiber_instances() {
        let z = hom::theorem1_generators(&g, &h, &p).unwrap();
        if !hom::remark17_check(&g, &h, &z, 100_000).unwrap() {
            bad += 1;
        }
    }
    check(bad == 0, format!("50 instances, {bad} mismatches"))
}

// 9
fn infinite_fixture() -> Outcome {
    let mfg = counterexample::verify_mfg(6, 2_000_000).map_err(|e| e.to_string())?;
    let missing = counterexample::kernel_missing(5, 5_000_000).map_err(|e| e.to_string())?;
    let kfg = missing.is_empty();
    let bands_closed = (1..=3).all(|w| counterexample::kernel_band_is_closed(5, w));
    let unb = counterexample::verify_h_unbounded(10);
    let po = counterexample::verify_partial_order(8);
    let ids = counterexample::verify_identities(8);
    check(
        mfg && kfg && unb && po && ids,
        format!(
            "generation {mfg}, kernel generation {kfg} ({} of {} pairs missing, index-gap bands 1..=3 closed: {bands_closed}), unbounded {unb}, partial order {po}, identities {ids}",
            missing.len(),
            counterexample::kernel_pairs(5).len()
        ),
    )
}

// 10
fn boundedness_decision() -> Outcome {
    let cap = 100_000;
    let fixed = [
        PartialLattice::antichain(&["x", "y", "z"]).unwrap().is_lower_bounded_fp(cap).unwrap(),
        PartialLattice::from_finite_lattice(&fixtures::boolean(2)).is_lower_bounded_fp(cap).unwrap(),
        !PartialLattice::from_finite_lattice(&fixtures::m3()).is_lower_bounded_fp(cap).unwrap(),
        !PartialLattice::from_finite_lattice(&counterexample::build_l()).is_lower_bounded_fp(cap).unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    const ROUNDS: usize = 10;
    let (mut agree, mut bounded) = (0, 0);
    let mut disagreements = Vec::new();
    for _ in 0..30 {
        let d = random_lattice(&mut rng, 7);
        let mut targets = d.join_irreducibles();
        targets.push(d.bottom());
        let names: Vec<String> = (0..targets.len()).map(|i| format!("x{i}")).collect();
        let images: Vec<(String, String)> = names.iter().zip(&targets).map(|(x, &t)| (x.clone(), d.name(t).to_string())).collect();
        let mut g = FreeHom::new(FreeLattice::new(&names).unwrap(), d.clone(), &images).unwrap();
        let stable = (1..=ROUNDS).any(|k| g.beta_table(k).unwrap() == g.beta_table(k - 1).unwrap());
        let lb = d.is_lower_bounded_finite();
        bounded += usize::from(lb);
        if stable == lb {
            agree += 1;
        } else {
            disagreements.push(d.len());
        }
    }
    check(
        fixed.iter().all(|&b| b) && agree == 30,
        format!("fixtures {fixed:?}, {agree}/30 random targets agree ({bounded} lower bounded), stabilization window {ROUNDS}"),
    )
}

// 11
fn witness_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let gens = ["x", "y", "z"];
    let free = FreeLattice::new(&gens).unwrap();
    let mut g = FreeHom::new(free.clone(), fixtures::m3(), &[("x", "a"), ("y", "b"), ("z", "c")]).unwrap();
    let mut h = FreeHom::new(free, fixtures::m3(), &[("x", "b"), ("y", "c"), ("z", "a")]).unwrap();
    let (mut bad, mut max_n) = (0, 0);
    for _ in 0..20 {
        let size = rng.gen_range(0..=20);
        let mut z = Vec::new();
        while z.len() < size {
            let a = random_term(&mut rng, &gens, 2);
            let d = g.apply(&a).unwrap();
            let b = loop {
                let b = random_term(&mut rng, &gens, 2);
                if h.apply(&b).unwrap() == d {
                    break b;
                }
            };
            z.push((a, b));
        }
        match hom::nonfg_witness(&mut g, &mut h, &z, 40) {
            Ok(w) => {
                max_n = max_n.max(w.n);
                if !hom::verify_witness(&mut g, &mut h, &z, &w).unwrap() {
                    bad += 1;
                }
            }
            Err(_) => bad += 1,
        }
    }
    check(bad == 0, format!("20 generating sets, largest bound {max_n}, {bad} certificate failures"))
}

// 12
fn finite_test_speed() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let l = random_lattice_of_size(&mut rng, 200);
    let start = Instant::now();
    let verdict = l.is_lower_bounded_finite();
    let secs = start.elapsed().as_secs_f64();
    check(secs < 1.0, format!("|L| = {}, lower bounded {verdict}, {secs:.3} s", l.len()))
}
