//! Lattices freely generated by finite partial lattices.
//!
//! A partial lattice is a finite poset together with some joins and meets
//! that are declared to exist (each must be the least upper / greatest lower
//! bound of its arguments in the poset). Terms over its element ids are
//! compared in the lattice it freely generates.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::{ConditionFailure, DCertificate, FiniteLattice, FinitePoset};
use crate::term::{Node, Term, TermArena, TermId};

/// A finite poset with declared joins and meets of subsets of size two or
/// more. Singleton joins and meets are implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialLattice {
    poset: FinitePoset,
    joins: Vec<(Vec<usize>, usize)>,
    meets: Vec<(Vec<usize>, usize)>,
}

/// On-disk form: the lattice file fields plus declared operations, e.g.
/// `"joins": [[["q", "r"], "p"]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialLatticeFile {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default)]
    pub joins: Vec<(Vec<String>, String)>,
    #[serde(default)]
    pub meets: Vec<(Vec<String>, String)>,
}

impl PartialLattice {
    /// Validates each declared operation against the poset. Declarations
    /// with fewer than two distinct arguments are dropped.
    pub fn new(poset: FinitePoset, joins: Vec<(Vec<usize>, usize)>, meets: Vec<(Vec<usize>, usize)>) -> Result<Self> {
        let norm = |ops: Vec<(Vec<usize>, usize)>, up: bool| -> Result<Vec<(Vec<usize>, usize)>> {
            let mut out = Vec::new();
            for (mut u, p) in ops {
                u.sort_unstable();
                u.dedup();
                if u.len() < 2 {
                    continue;
                }
                let bound_ok = |q: usize| u.iter().all(|&x| if up { poset.leq(x, q) } else { poset.leq(q, x) });
                let least = bound_ok(p)
                    && (0..poset.len())
                        .filter(|&q| bound_ok(q))
                        .all(|q| if up { poset.leq(p, q) } else { poset.leq(q, p) });
                if !least {
                    let names: Vec<&str> = u.iter().map(|&x| poset.name(x)).collect();
                    return Err(Error::InvalidPartialLattice(format!(
                        "`{}` is not the {} of {{{}}}",
                        poset.name(p),
                        if up { "least upper bound" } else { "greatest lower bound" },
                        names.join(", ")
                    )));
                }
                out.push((u, p));
            }
            out.sort();
            out.dedup();
            Ok(out)
        };
        let joins = norm(joins, true)?;
        let meets = norm(meets, false)?;
        Ok(PartialLattice { poset, joins, meets })
    }

    /// An antichain with no declared operations; it freely generates the
    /// free lattice on these names.
    pub fn antichain<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let poset = FinitePoset::new::<_, &str, &str>(names, &[])?;
        Self::new(poset, vec![], vec![])
    }

    /// Declares every join and meet of two incomparable elements.
    pub fn from_finite_lattice(l: &FiniteLattice) -> Self {
        let n = l.len();
        let mut joins = Vec::new();
        let mut meets = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !l.poset().comparable(a, b) {
                    joins.push((vec![a, b], l.join(a, b)));
                    meets.push((vec![a, b], l.meet(a, b)));
                }
            }
        }
        PartialLattice {
            poset: l.poset().clone(),
            joins,
            meets,
        }
    }

    pub fn from_file(file: PartialLatticeFile) -> Result<Self> {
        let poset = FinitePoset::new(&file.elements, &file.covers)?;
        let conv = |ops: Vec<(Vec<String>, String)>| -> Result<Vec<(Vec<usize>, usize)>> {
            ops.into_iter()
                .map(|(u, p)| {
                    Ok((
                        u.iter().map(|x| poset.index_of(x)).collect::<Result<Vec<_>>>()?,
                        poset.index_of(&p)?,
                    ))
                })
                .collect()
        };
        let joins = conv(file.joins)?;
        let meets = conv(file.meets)?;
        Self::new(poset, joins, meets)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: PartialLatticeFile = serde_json::from_str(text).map_err(|e| Error::Invalid(e.to_string()))?;
        Self::from_file(file)
    }

    pub fn to_file(&self) -> PartialLatticeFile {
        let name = |i: usize| self.poset.name(i).to_string();
        let ops = |v: &[(Vec<usize>, usize)]| v.iter().map(|(u, p)| (u.iter().map(|&x| name(x)).collect(), name(*p))).collect();
        PartialLatticeFile {
            elements: self.poset.names().to_vec(),
            covers: self.poset.covers().iter().map(|&(a, b)| (name(a), name(b))).collect(),
            joins: ops(&self.joins),
            meets: ops(&self.meets),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("partial lattice files always serialize")
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn len(&self) -> usize {
        self.poset.len()
    }

    pub fn is_empty(&self) -> bool {
        self.poset.is_empty()
    }

    pub fn joins(&self) -> &[(Vec<usize>, usize)] {
        &self.joins
    }

    pub fn meets(&self) -> &[(Vec<usize>, usize)] {
        &self.meets
    }

    /// Same elements, reversed order, joins and meets swapped.
    pub fn dual(&self) -> PartialLattice {
        PartialLattice {
            poset: self.poset.dual(),
            joins: self.meets.clone(),
            meets: self.joins.clone(),
        }
    }

    /// The generators as terms, in element order.
    pub fn generator_terms(&self) -> Vec<Term> {
        self.poset.names().iter().map(|x| Term::gen(x.clone())).collect()
    }

    pub fn leq_fp(&self, s: &Term, t: &Term) -> Result<bool> {
        let mut e = DeanEngine::new(self.clone());
        let a = e.intern(s)?;
        let b = e.intern(t)?;
        Ok(e.leq(a, b))
    }

    pub fn eq_fp(&self, s: &Term, t: &Term) -> Result<bool> {
        let mut e = DeanEngine::new(self.clone());
        let a = e.intern(s)?;
        let b = e.intern(t)?;
        Ok(e.eq(a, b))
    }

    /// Looks for a declared meet `m = meet(S)` and declared join
    /// `j = join(T)` with `m <= j`, no `s <= j` and no `m <= t`. Meets are
    /// scanned first, then joins, both in sorted order.
    pub fn partial_whitman_check(&self) -> Option<ConditionFailure> {
        let p = &self.poset;
        for (s, m) in &self.meets {
            for (t, j) in &self.joins {
                if p.leq(*m, *j) && s.iter().all(|&x| !p.leq(x, *j)) && t.iter().all(|&y| !p.leq(*m, y)) {
                    return Some(ConditionFailure {
                        meetands: s.clone(),
                        joinands: t.clone(),
                    });
                }
            }
        }
        None
    }
}

/// Memoized word problem for the lattice freely generated by a partial
/// lattice.
///
/// Each term carries the set of generators below it (an ideal closed under
/// declared joins) and the set above it (a filter closed under declared
/// meets). With those, `s <= t` is decided by recursion on term structure:
/// a join on the left or meet on the right splits into all parts; a
/// generator on either side is answered by the other side's ideal or
/// filter; a meet below a join holds iff one part already fits or some
/// generator lies in both `filter(s)` and `ideal(t)`.
#[derive(Clone, Debug)]
pub struct DeanEngine {
    p: PartialLattice,
    arena: TermArena,
    gen_elem: Vec<usize>,
    leq_memo: HashMap<(TermId, TermId), bool>,
    ideals: HashMap<TermId, FixedBitSet>,
    filters: HashMap<TermId, FixedBitSet>,
}

impl DeanEngine {
    pub fn new(p: PartialLattice) -> Self {
        DeanEngine {
            p,
            arena: TermArena::new(),
            gen_elem: Vec::new(),
            leq_memo: HashMap::new(),
            ideals: HashMap::new(),
            filters: HashMap::new(),
        }
    }

    pub fn partial_lattice(&self) -> &PartialLattice {
        &self.p
    }

    pub fn arena(&self) -> &TermArena {
        &self.arena
    }

    pub fn term(&self, id: TermId) -> Term {
        self.arena.to_term(id)
    }

    /// Interns a term whose generators must be element ids.
    pub fn intern(&mut self, t: &Term) -> Result<TermId> {
        for g in t.generators() {
            self.p.poset.index_of(g).map_err(|_| Error::UnknownGenerator(g.to_string()))?;
        }
        let id = self.arena.intern(t);
        self.sync_gens();
        Ok(id)
    }

    /// The generator for element `i`.
    pub fn element(&mut self, i: usize) -> TermId {
        let name = self.p.poset.name(i).to_string();
        let id = self.arena.gen(&name);
        self.sync_gens();
        id
    }

    pub fn meet(&mut self, cs: &[TermId]) -> TermId {
        self.arena.meet(cs)
    }

    pub fn join(&mut self, cs: &[TermId]) -> TermId {
        self.arena.join(cs)
    }

    fn sync_gens(&mut self) {
        for g in self.gen_elem.len()..self.arena.gen_count() {
            let e = self.p.poset.index_of(self.arena.gen_name(g as u32)).expect("checked on intern");
            self.gen_elem.push(e);
        }
    }

    /// Elements of the partial lattice below `t`.
    pub fn ideal(&mut self, t: TermId) -> FixedBitSet {
        if let Some(s) = self.ideals.get(&t) {
            return s.clone();
        }
        let n = self.p.len();
        let s = match self.arena.node(t).clone() {
            Node::Gen(g) => self.p.poset.down_set(self.gen_elem[g as usize]).clone(),
            Node::Meet(cs) => {
                let mut acc = FixedBitSet::with_capacity(n);
                acc.insert_range(..);
                for c in cs.iter() {
                    acc.intersect_with(&self.ideal(*c));
                }
                acc
            }
            Node::Join(cs) => {
                let mut acc = FixedBitSet::with_capacity(n);
                for c in cs.iter() {
                    acc.union_with(&self.ideal(*c));
                }
                close_under(&self.p.poset, &self.p.joins, acc, true)
            }
        };
        self.ideals.insert(t, s.clone());
        s
    }

    /// Elements of the partial lattice above `t`.
    pub fn filter(&mut self, t: TermId) -> FixedBitSet {
        if let Some(s) = self.filters.get(&t) {
            return s.clone();
        }
        let n = self.p.len();
        let s = match self.arena.node(t).clone() {
            Node::Gen(g) => self.p.poset.up_set(self.gen_elem[g as usize]).clone(),
            Node::Join(cs) => {
                let mut acc = FixedBitSet::with_capacity(n);
                acc.insert_range(..);
                for c in cs.iter() {
                    acc.intersect_with(&self.filter(*c));
                }
                acc
            }
            Node::Meet(cs) => {
                let mut acc = FixedBitSet::with_capacity(n);
                for c in cs.iter() {
                    acc.union_with(&self.filter(*c));
                }
                close_under(&self.p.poset, &self.p.meets, acc, false)
            }
        };
        self.filters.insert(t, s.clone());
        s
    }

    pub fn leq(&mut self, s: TermId, t: TermId) -> bool {
        if s == t {
            return true;
        }
        if let Some(&r) = self.leq_memo.get(&(s, t)) {
            return r;
        }
        let r = match (self.arena.node(s).clone(), self.arena.node(t).clone()) {
            (Node::Join(ss), _) => ss.iter().all(|&x| self.leq(x, t)),
            (_, Node::Meet(ts)) => ts.iter().all(|&y| self.leq(s, y)),
            (Node::Gen(g), _) => self.ideal(t).contains(self.gen_elem[g as usize]),
            (_, Node::Gen(g)) => self.filter(s).contains(self.gen_elem[g as usize]),
            (Node::Meet(ss), Node::Join(ts)) => {
                ss.iter().any(|&x| self.leq(x, t))
                    || ts.iter().any(|&y| self.leq(s, y))
                    || !self.filter(s).is_disjoint(&self.ideal(t))
            }
        };
        self.leq_memo.insert((s, t), r);
        r
    }

    pub fn eq(&mut self, s: TermId, t: TermId) -> bool {
        self.leq(s, t) && self.leq(t, s)
    }

    /// The full order on `ids`, which must contain the children of each of
    /// its members: row `i` holds the `j` with `ids[i] <= ids[j]`. Filled in
    /// increasing id order, so each entry reads only finished ones. Suited
    /// to millions of pairs, where the pair memo of [`Self::leq`] would be
    /// too large.
    pub fn leq_matrix(&mut self, ids: &[TermId]) -> Vec<FixedBitSet> {
        let mut order: Vec<usize> = (0..ids.len()).collect();
        order.sort_by_key(|&i| ids[i]);
        let pos: HashMap<TermId, usize> = ids.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let n = ids.len();
        let ideals: Vec<FixedBitSet> = ids.iter().map(|&t| self.ideal(t)).collect();
        let filters: Vec<FixedBitSet> = ids.iter().map(|&t| self.filter(t)).collect();
        let kids: Vec<Vec<usize>> = ids
            .iter()
            .map(|&t| self.arena.children(t).iter().map(|c| pos[c]).collect())
            .collect();
        let mut m = vec![FixedBitSet::with_capacity(n); n];
        for &s in &order {
            for &t in &order {
                let r = if s == t {
                    true
                } else {
                    match (self.arena.node(ids[s]), self.arena.node(ids[t])) {
                        (Node::Join(_), _) => kids[s].iter().all(|&c| m[c].contains(t)),
                        (_, Node::Meet(_)) => kids[t].iter().all(|&c| m[s].contains(c)),
                        (Node::Gen(g), _) => ideals[t].contains(self.gen_elem[*g as usize]),
                        (_, Node::Gen(g)) => filters[s].contains(self.gen_elem[*g as usize]),
                        (Node::Meet(_), Node::Join(_)) => {
                            kids[s].iter().any(|&c| m[c].contains(t))
                                || kids[t].iter().any(|&c| m[s].contains(c))
                                || !filters[s].is_disjoint(&ideals[t])
                        }
                    }
                };
                m[s].set(t, r);
            }
        }
        m
    }
}

/// Closes a set to a down-set (up-set when `!down`) that also contains the
/// value of every declared operation whose arguments it contains.
fn close_under(poset: &FinitePoset, ops: &[(Vec<usize>, usize)], mut set: FixedBitSet, down: bool) -> FixedBitSet {
    loop {
        let mut next = set.clone();
        for i in set.ones() {
            next.union_with(if down { poset.down_set(i) } else { poset.up_set(i) });
        }
        for (u, p) in ops {
            if u.iter().all(|&x| next.contains(x)) {
                next.insert(*p);
            }
        }
        if next == set {
            return set;
        }
        set = next;
    }
}

/// A finite join-closed stage `P^{(|&)^n |}` of the freely generated
/// lattice: representatives, pairwise inequivalent, with their order.
#[derive(Clone, Debug)]
pub struct ClosureStage {
    pub n: usize,
    reps: Vec<TermId>,
    order: Vec<FixedBitSet>,
    engine: DeanEngine,
}

impl ClosureStage {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn reps(&self) -> Vec<Term> {
        self.reps.iter().map(|&r| self.engine.term(r)).collect()
    }

    pub fn rep_ids(&self) -> &[TermId] {
        &self.reps
    }

    pub fn engine_mut(&mut self) -> &mut DeanEngine {
        &mut self.engine
    }

    /// `reps[i] <= reps[j]`
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.order[i].contains(j)
    }

    /// Index of the representative equivalent to `t`, if any.
    pub fn position(&mut self, t: &Term) -> Result<Option<usize>> {
        let id = self.engine.intern(t)?;
        Ok((0..self.reps.len()).find(|&i| self.engine.eq(self.reps[i], id)))
    }

    /// The stage as a lattice (infima are joins of common lower bounds).
    /// Element ids are the printed representatives; the returned vector
    /// maps each representative to its lattice index.
    pub fn to_lattice(&self) -> (FiniteLattice, Vec<usize>) {
        let names: Vec<String> = self.reps().iter().map(Term::to_string).collect();
        let l = FiniteLattice::from_fn(&names, |i, j| self.leq(i, j)).expect("a finite join-semilattice with a least element is a lattice");
        let map = names.iter().map(|s| l.index_of(s).unwrap()).collect();
        (l, map)
    }

    /// The standard homomorphism: the join in the stage of every
    /// representative below `t`. Returns the representative's index.
    pub fn standard_hom_image(&mut self, t: &Term) -> Result<usize> {
        let id = self.engine.intern(t)?;
        let below: Vec<usize> = (0..self.reps.len()).filter(|&i| self.engine.leq(self.reps[i], id)).collect();
        // The join of `below` is its unique maximal element's upper bound
        // within the stage: the least rep above all of them.
        let ub: Vec<usize> = (0..self.reps.len())
            .filter(|&j| below.iter().all(|&i| self.leq(i, j)))
            .collect();
        Ok(*ub
            .iter()
            .find(|&&j| ub.iter().all(|&k| self.leq(j, k)))
            .expect("stages are join-closed"))
    }
}

pub fn semilattice_to_lattice(stage: &ClosureStage) -> FiniteLattice {
    stage.to_lattice().0
}

impl PartialLattice {
    /// Representatives of `P^{(|&)^n |}` with the conventions
    /// `join() = meet(P)` and `meet() = join(P)`. Equivalent candidates
    /// keep the structurally smallest term.
    pub fn closure_stage(&self, n: usize, cap: usize) -> Result<ClosureStage> {
        let mut e = DeanEngine::new(self.clone());
        let mut reps: Vec<TermId> = (0..self.len()).map(|i| e.element(i)).collect();
        let all = reps.clone();
        let bottom = e.meet(&all);
        let top = e.join(&all);
        for round in 0..=n {
            reps = close_reps(&mut e, reps, false, bottom, cap)?;
            if round < n {
                reps = close_reps(&mut e, reps, true, top, cap)?;
            }
        }
        let m = reps.len();
        let mut order = vec![FixedBitSet::with_capacity(m); m];
        for i in 0..m {
            for j in 0..m {
                if e.leq(reps[i], reps[j]) {
                    order[i].insert(j);
                }
            }
        }
        Ok(ClosureStage {
            n,
            reps,
            order,
            engine: e,
        })
    }

    /// Lower boundedness of the freely generated lattice, decided on the
    /// finite stage `P^|`.
    pub fn lower_boundedness_fp(&self, cap: usize) -> Result<DCertificate> {
        Ok(semilattice_to_lattice(&self.closure_stage(0, cap)?).lower_boundedness())
    }

    pub fn is_lower_bounded_fp(&self, cap: usize) -> Result<bool> {
        Ok(self.lower_boundedness_fp(cap)?.is_bounded())
    }

    pub fn is_upper_bounded_fp(&self, cap: usize) -> Result<bool> {
        self.dual().is_lower_bounded_fp(cap)
    }

    pub fn is_bounded_fp(&self, cap: usize) -> Result<bool> {
        Ok(self.is_lower_bounded_fp(cap)? && self.is_upper_bounded_fp(cap)?)
    }

    /// Lower boundedness of the sublattice generated by `terms`, assuming
    /// it satisfies Dean's condition. The stage index is searched upward
    /// from `n_hint` until every term has a representative.
    pub fn lower_bounded_sublattice(&self, terms: &[Term], n_hint: usize, max_stage: usize, cap: usize) -> Result<SublatticeVerdict> {
        for n in n_hint..=max_stage {
            let mut stage = self.closure_stage(n, cap)?;
            let mut pos = Vec::new();
            for t in terms {
                match stage.position(t)? {
                    Some(i) => pos.push(i),
                    None => break,
                }
            }
            if pos.len() < terms.len() {
                continue;
            }
            let (l, map) = stage.to_lattice();
            let gens: Vec<usize> = pos.iter().map(|&i| map[i]).collect();
            let members: Vec<usize> = l.generated_by(&gens).ones().collect();
            let sub = l.induced(&members)?;
            let certificate = sub.lower_boundedness();
            return Ok(SublatticeVerdict {
                lower_bounded: certificate.is_bounded(),
                stage: n,
                size: sub.len(),
                dean_certified: self.partial_whitman_check().is_none(),
                sublattice: sub,
                certificate,
            });
        }
        Err(Error::cap("closure stage index", max_stage))
    }
}

/// Result of [`PartialLattice::lower_bounded_sublattice`].
#[derive(Clone, Debug)]
pub struct SublatticeVerdict {
    pub lower_bounded: bool,
    /// Stage in which every generating term was found.
    pub stage: usize,
    pub size: usize,
    /// Whether the partial lattice passed the Whitman check, which makes
    /// the Dean assumption automatic. When false the verdict rests on the
    /// caller's assertion.
    pub dean_certified: bool,
    pub sublattice: FiniteLattice,
    pub certificate: DCertificate,
}

fn close_reps(e: &mut DeanEngine, reps: Vec<TermId>, meet: bool, empty: TermId, cap: usize) -> Result<Vec<TermId>> {
    let mut reps = reps;
    let mut buckets: HashMap<(FixedBitSet, FixedBitSet), Vec<usize>> = HashMap::new();
    let mut out: Vec<TermId> = Vec::new();
    let mut add = |e: &mut DeanEngine, out: &mut Vec<TermId>, t: TermId| -> Result<bool> {
        let key = (e.ideal(t), e.filter(t));
        let bucket = buckets.entry(key).or_default();
        for &i in bucket.iter() {
            if e.eq(out[i], t) {
                let (a, b) = (e.term(out[i]), e.term(t));
                if (b.size(), &b) < (a.size(), &a) {
                    out[i] = t;
                }
                return Ok(false);
            }
        }
        if out.len() >= cap {
            return Err(Error::cap("closure stage size", cap));
        }
        bucket.push(out.len());
        out.push(t);
        Ok(true)
    };
    reps.insert(0, empty);
    for t in reps.drain(..) {
        add(e, &mut out, t)?;
    }
    let mut i = 0;
    while i < out.len() {
        for k in 0..i {
            let (a, b) = (out[i], out[k]);
            let c = if meet { e.meet(&[a, b]) } else { e.join(&[a, b]) };
            add(e, &mut out, c)?;
        }
        i += 1;
    }
    Ok(out)
}
