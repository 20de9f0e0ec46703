//! The free lattice `F(X)` on a finite set of generator names.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::term::{Node, Term, TermArena, TermId};

/// Which half of an alternation stage: `G_k` (joins of `H_{k-1}`) or
/// `H_k` (meets of `G_k`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StageKind {
    G,
    H,
}

/// A stage `G_k` or `H_k`. Ordered by inclusion:
/// `G_0 < H_0 < G_1 < H_1 < ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct StageIndex {
    pub k: usize,
    pub kind: StageKind,
}

impl StageIndex {
    pub fn g(k: usize) -> Self {
        StageIndex { k, kind: StageKind::G }
    }

    pub fn h(k: usize) -> Self {
        StageIndex { k, kind: StageKind::H }
    }
}

impl fmt::Display for StageIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self.kind {
            StageKind::G => 'G',
            StageKind::H => 'H',
        };
        write!(f, "{c}{}", self.k)
    }
}

impl std::str::FromStr for StageIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Invalid(format!("stage `{s}` is not of the form G<k> or H<k>"));
        let (kind, k) = match s.split_at_checked(1).ok_or_else(bad)? {
            ("G" | "g", k) => (StageKind::G, k),
            ("H" | "h", k) => (StageKind::H, k),
            _ => return Err(bad()),
        };
        Ok(StageIndex {
            k: k.parse().map_err(|_| bad())?,
            kind,
        })
    }
}

/// Memoized Whitman word problem and canonical forms over a shared
/// [`TermArena`]. Comparisons do not depend on the generator set, so one
/// engine serves every `F(X)`.
#[derive(Clone, Debug, Default)]
pub struct FreeEngine {
    arena: TermArena,
    leq_memo: HashMap<(TermId, TermId), bool>,
    canon_memo: HashMap<TermId, TermId>,
}

impl FreeEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn arena(&self) -> &TermArena {
        &self.arena
    }

    pub fn intern(&mut self, t: &Term) -> TermId {
        self.arena.intern(t)
    }

    pub fn gen(&mut self, name: &str) -> TermId {
        self.arena.gen(name)
    }

    pub fn term(&self, id: TermId) -> Term {
        self.arena.to_term(id)
    }

    /// `s <= t` in the free lattice.
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
            (Node::Gen(_), Node::Gen(_)) => false,
            (Node::Gen(_), Node::Join(ts)) => ts.iter().any(|&y| self.leq(s, y)),
            (Node::Meet(ss), Node::Gen(_)) => ss.iter().any(|&x| self.leq(x, t)),
            (Node::Meet(ss), Node::Join(ts)) => {
                ss.iter().any(|&x| self.leq(x, t)) || ts.iter().any(|&y| self.leq(s, y))
            }
        };
        self.leq_memo.insert((s, t), r);
        r
    }

    pub fn eq(&mut self, s: TermId, t: TermId) -> bool {
        self.leq(s, t) && self.leq(t, s)
    }

    /// The unique shortest representative: joinands form an antichain, and
    /// no meetand of a meet joinand lies below the whole join (dually for
    /// meets), recursively.
    pub fn canon(&mut self, t: TermId) -> TermId {
        if let Some(&c) = self.canon_memo.get(&t) {
            return c;
        }
        let c = match self.arena.node(t).clone() {
            Node::Gen(_) => t,
            Node::Meet(cs) => {
                let cs: Vec<TermId> = cs.iter().map(|&c| self.canon(c)).collect();
                self.reduce(cs, true)
            }
            Node::Join(cs) => {
                let cs: Vec<TermId> = cs.iter().map(|&c| self.canon(c)).collect();
                self.reduce(cs, false)
            }
        };
        self.canon_memo.insert(t, c);
        self.canon_memo.insert(c, c);
        c
    }

    /// Canonical meet of canonical terms.
    pub fn meet(&mut self, cs: &[TermId]) -> TermId {
        self.reduce(cs.to_vec(), true)
    }

    /// Canonical join of canonical terms.
    pub fn join(&mut self, cs: &[TermId]) -> TermId {
        self.reduce(cs.to_vec(), false)
    }

    fn reduce(&mut self, mut cs: Vec<TermId>, meet: bool) -> TermId {
        loop {
            let whole = if meet { self.arena.meet(&cs) } else { self.arena.join(&cs) };
            let flat: Vec<TermId> = match self.arena.node(whole) {
                Node::Meet(xs) if meet => xs.to_vec(),
                Node::Join(xs) if !meet => xs.to_vec(),
                _ => vec![whole],
            };
            // Keep only the extremal children: for a join, drop x below
            // another y; for a meet, drop x above another y.
            let mut kept: Vec<TermId> = Vec::with_capacity(flat.len());
            for (i, &x) in flat.iter().enumerate() {
                let dominated = flat.iter().enumerate().any(|(j, &y)| {
                    j != i && {
                        let (a, b) = if meet { (y, x) } else { (x, y) };
                        self.leq(a, b) && (!self.leq(b, a) || j < i)
                    }
                });
                if !dominated {
                    kept.push(x);
                }
            }
            let whole = if meet { self.arena.meet(&kept) } else { self.arena.join(&kept) };
            // A joinand that is a meet with a meetand below the whole join
            // can be replaced by that meetand (dually for meets).
            let mut changed = false;
            let mut next = Vec::with_capacity(kept.len());
            for &x in &kept {
                let inner: Option<Vec<TermId>> = match self.arena.node(x) {
                    Node::Meet(ys) if !meet => Some(ys.to_vec()),
                    Node::Join(ys) if meet => Some(ys.to_vec()),
                    _ => None,
                };
                let replacement = inner.and_then(|ys| {
                    ys.into_iter()
                        .find(|&y| if meet { self.leq(whole, y) } else { self.leq(y, whole) })
                });
                match replacement {
                    Some(y) if kept.len() > 1 => {
                        next.push(y);
                        changed = true;
                    }
                    _ => next.push(x),
                }
            }
            if !changed {
                return whole;
            }
            cs = next;
        }
    }

    /// Least stage containing a canonical term, `top` being the canonical
    /// join of all generators (it lies in `H_0` as the empty meet).
    pub fn alternation_rank(&mut self, t: TermId, top: TermId) -> StageIndex {
        let (g, h) = self.stage_pair(t, top);
        if g <= h {
            StageIndex::g(g)
        } else {
            StageIndex::h(h)
        }
    }

    /// (least k with t in G_k, least k with t in H_k)
    fn stage_pair(&mut self, t: TermId, top: TermId) -> (usize, usize) {
        if t == top && !matches!(self.arena.node(t), Node::Gen(_)) {
            return (1, 0);
        }
        match self.arena.node(t).clone() {
            Node::Gen(_) => (0, 0),
            Node::Meet(cs) => {
                let h = cs.iter().map(|&c| self.stage_pair(c, top).0).max().unwrap();
                (h + 1, h)
            }
            Node::Join(cs) => {
                let g = cs.iter().map(|&c| self.stage_pair(c, top).1).max().unwrap() + 1;
                (g, g)
            }
        }
    }
}

/// The free lattice on a finite, non-empty set of generator names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeLattice {
    gens: Vec<String>,
}

impl FreeLattice {
    pub fn new<S: AsRef<str>>(gens: &[S]) -> Result<Self> {
        let mut g: Vec<String> = gens.iter().map(|s| s.as_ref().to_string()).collect();
        g.sort();
        if g.is_empty() {
            return Err(Error::Invalid("a free lattice needs at least one generator".into()));
        }
        for w in g.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateElement(w[0].clone()));
            }
        }
        for x in &g {
            if !Term::gen(x.clone()).is_canonical() {
                return Err(Error::Invalid(format!("`{x}` is not a valid generator name")));
            }
        }
        Ok(FreeLattice { gens: g })
    }

    /// Parses a comma-separated generator list such as `x,y,z`.
    pub fn parse_gens(list: &str) -> Result<Self> {
        let names: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        Self::new(&names)
    }

    pub fn gens(&self) -> &[String] {
        &self.gens
    }

    pub fn check(&self, t: &Term) -> Result<()> {
        match t.generators().into_iter().find(|x| self.gens.binary_search_by(|g| g.as_str().cmp(x)).is_err()) {
            Some(x) => Err(Error::UnknownGenerator(x.to_string())),
            None => Ok(()),
        }
    }

    /// `bigvee X`, the top of `F(X)` and the empty meet.
    pub fn top(&self) -> Term {
        Term::join(self.gens.iter().map(|x| Term::gen(x.clone())))
    }

    /// `bigwedge X`, the bottom of `F(X)` and the empty join.
    pub fn bottom(&self) -> Term {
        Term::meet(self.gens.iter().map(|x| Term::gen(x.clone())))
    }

    pub fn top_id(&self, e: &mut FreeEngine) -> TermId {
        let t = self.top();
        e.intern(&t)
    }

    pub fn bottom_id(&self, e: &mut FreeEngine) -> TermId {
        let t = self.bottom();
        e.intern(&t)
    }

    pub fn leq(&self, s: &Term, t: &Term) -> Result<bool> {
        self.check(s)?;
        self.check(t)?;
        let mut e = FreeEngine::new();
        let (a, b) = (e.intern(s), e.intern(t));
        Ok(e.leq(a, b))
    }

    pub fn eq(&self, s: &Term, t: &Term) -> Result<bool> {
        self.check(s)?;
        self.check(t)?;
        let mut e = FreeEngine::new();
        let (a, b) = (e.intern(s), e.intern(t));
        Ok(e.eq(a, b))
    }

    pub fn canonical_form(&self, t: &Term) -> Result<Term> {
        self.check(t)?;
        let mut e = FreeEngine::new();
        let id = e.intern(t);
        let c = e.canon(id);
        Ok(e.term(c))
    }

    /// Least `G_k` or `H_k` containing `t`, read off its canonical form.
    pub fn alternation_rank(&self, t: &Term) -> Result<StageIndex> {
        self.check(t)?;
        let mut e = FreeEngine::new();
        let id = e.intern(t);
        let c = e.canon(id);
        let top = self.top_id(&mut e);
        Ok(e.alternation_rank(c, top))
    }

    /// Canonical representatives of the stage, sorted by the structural
    /// term order.
    pub fn stage_elements(&self, idx: StageIndex, cap: usize) -> Result<Vec<Term>> {
        let mut e = FreeEngine::new();
        let ids = self.stage_ids(&mut e, idx, cap)?;
        let mut out: Vec<Term> = ids.into_iter().map(|i| e.term(i)).collect();
        out.sort();
        Ok(out)
    }

    /// Canonical ids of every stage up to `idx`, in the order
    /// `G_0, H_0, G_1, ...`.
    pub fn stage_ids(&self, e: &mut FreeEngine, idx: StageIndex, cap: usize) -> Result<BTreeSet<TermId>> {
        let top = self.top_id(e);
        let bottom = self.bottom_id(e);
        let mut cur: BTreeSet<TermId> = self.gens.iter().map(|x| e.gen(x)).collect();
        let mut at = StageIndex::g(0);
        while at < idx {
            let (meet, extra) = match at.kind {
                StageKind::G => (true, top),
                StageKind::H => (false, bottom),
            };
            cur.insert(extra);
            cur = binary_closure(e, cur, meet, cap)?;
            at = match at.kind {
                StageKind::G => StageIndex::h(at.k),
                StageKind::H => StageIndex::g(at.k + 1),
            };
        }
        if cur.len() > cap {
            return Err(Error::cap("stage size", cap));
        }
        Ok(cur)
    }
}

fn binary_closure(e: &mut FreeEngine, set: BTreeSet<TermId>, meet: bool, cap: usize) -> Result<BTreeSet<TermId>> {
    let mut members: Vec<TermId> = set.iter().copied().collect();
    let mut set = set;
    let mut i = 0;
    while i < members.len() {
        for k in 0..i {
            let (a, b) = (members[i], members[k]);
            let c = if meet { e.meet(&[a, b]) } else { e.join(&[a, b]) };
            if set.insert(c) {
                if set.len() > cap {
                    return Err(Error::cap("stage size", cap));
                }
                members.push(c);
            }
        }
        i += 1;
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::fixtures;
    use proptest::prelude::*;

    fn t(s: &str) -> Term {
        s.parse().unwrap()
    }

    fn xyz() -> FreeLattice {
        FreeLattice::new(&["x", "y", "z"]).unwrap()
    }

    #[test]
    fn leq_examples() {
        let f = xyz();
        assert!(f.leq(&t("x"), &t("(x | y)")).unwrap());
        assert!(f.leq(&t("((x & y) | (x & z))"), &t("(x & (y | z))")).unwrap());
        assert!(!f.leq(&t("(x & (y | z))"), &t("((x & y) | (x & z))")).unwrap());
        assert!(!f.leq(&t("x"), &t("(y | z)")).unwrap());
        assert_eq!(f.leq(&t("w"), &t("x")).unwrap_err(), Error::UnknownGenerator("w".into()));
    }

    #[test]
    fn refutations_by_evaluation() {
        // x & (y | z) <= (x & y) | (x & z) fails in M3 on three atoms.
        let m3 = fixtures::m3();
        let env = |g: &str| match g {
            "x" => m3.index_of("a").ok(),
            "y" => m3.index_of("b").ok(),
            "z" => m3.index_of("c").ok(),
            _ => None,
        };
        let l = m3.evaluate_with(&t("(x & (y | z))"), &env).unwrap();
        let r = m3.evaluate_with(&t("((x & y) | (x & z))"), &env).unwrap();
        assert!(!m3.leq(l, r));
    }

    #[test]
    fn canonical_examples() {
        let f = xyz();
        assert_eq!(f.canonical_form(&t("(x | x)")).unwrap(), t("x"));
        assert_eq!(f.canonical_form(&t("(x | (x & y))")).unwrap(), t("x"));
        assert_eq!(f.canonical_form(&t("(x & (x | y))")).unwrap(), t("x"));
        assert!(f.eq(&t("(x & y)"), &t("(y & x)")).unwrap());
        // (x & (y | x)) | z: the meet collapses to x, leaving x | z.
        assert_eq!(f.canonical_form(&t("((x & (y | x)) | z)")).unwrap(), t("(x | z)"));
        // (x | y) & (x | z) & ... stays put: it is already canonical.
        let c = t("((x | y) & (x | z))");
        assert_eq!(f.canonical_form(&c).unwrap(), c);
    }

    #[test]
    fn rank_examples() {
        let f = xyz();
        assert_eq!(f.alternation_rank(&t("x")).unwrap(), StageIndex::g(0));
        assert_eq!(f.alternation_rank(&t("(x & y)")).unwrap(), StageIndex::h(0));
        assert_eq!(f.alternation_rank(&t("((x & y) | z)")).unwrap(), StageIndex::g(1));
        assert_eq!(f.alternation_rank(&t("(x | y | z)")).unwrap(), StageIndex::h(0));
        assert_eq!(f.alternation_rank(&t("(x | y)")).unwrap(), StageIndex::g(1));
        assert_eq!(f.alternation_rank(&t("((x | y) & z)")).unwrap(), StageIndex::h(1));
    }

    #[test]
    fn stages_on_two_generators() {
        let f = FreeLattice::new(&["x", "y"]).unwrap();
        let h0: Vec<String> = f.stage_elements(StageIndex::h(0), 100).unwrap().iter().map(|t| t.to_string()).collect();
        assert_eq!(h0, ["x", "y", "(x & y)", "(x | y)"]);
        for idx in [StageIndex::g(1), StageIndex::h(1), StageIndex::g(3)] {
            assert_eq!(f.stage_elements(idx, 100).unwrap().len(), 4);
        }
        let one = FreeLattice::new(&["x"]).unwrap();
        assert_eq!(one.stage_elements(StageIndex::h(2), 10).unwrap(), vec![t("x")]);
    }

    #[test]
    fn stage_ranks_agree_with_membership() {
        let f = xyz();
        let mut e = FreeEngine::new();
        let top = f.top_id(&mut e);
        let mut prev = BTreeSet::new();
        for idx in [StageIndex::g(0), StageIndex::h(0), StageIndex::g(1)] {
            let cur = f.stage_ids(&mut e, idx, 10_000).unwrap();
            assert!(prev.is_subset(&cur));
            for &id in cur.difference(&prev) {
                assert_eq!(e.alternation_rank(id, top), idx, "{}", e.term(id));
            }
            prev = cur;
        }
    }

    #[test]
    fn stage_cap() {
        let f = xyz();
        assert!(matches!(f.stage_elements(StageIndex::g(1), 10), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn stage_index_text() {
        assert_eq!("H2".parse::<StageIndex>().unwrap(), StageIndex::h(2));
        assert_eq!(StageIndex::g(1).to_string(), "G1");
        assert!("K1".parse::<StageIndex>().is_err());
    }

    fn arb(depth: u32) -> impl Strategy<Value = Term> {
        let leaf = prop::sample::select(vec!["x", "y", "z"]).prop_map(Term::gen);
        leaf.prop_recursive(depth, 32, 3, |inner| {
            prop_oneof![
                prop::collection::vec(inner.clone(), 2..4).prop_map(Term::meet),
                prop::collection::vec(inner, 2..4).prop_map(Term::join),
            ]
        })
    }

    proptest! {
        #[test]
        fn canonical_form_is_equivalent_and_idempotent(s in arb(4)) {
            let f = xyz();
            let c = f.canonical_form(&s).unwrap();
            prop_assert!(f.eq(&s, &c).unwrap());
            prop_assert_eq!(f.canonical_form(&c).unwrap(), c.clone());
            prop_assert!(c.size() <= s.size());
        }

        #[test]
        fn equality_is_canonical_identity(s in arb(3), u in arb(3)) {
            let f = xyz();
            let same = f.eq(&s, &u).unwrap();
            prop_assert_eq!(same, f.canonical_form(&s).unwrap() == f.canonical_form(&u).unwrap());
        }

        #[test]
        fn leq_is_a_preorder(s in arb(3), u in arb(3), v in arb(3)) {
            let f = xyz();
            prop_assert!(f.leq(&s, &s).unwrap());
            if f.leq(&s, &u).unwrap() && f.leq(&u, &v).unwrap() {
                prop_assert!(f.leq(&s, &v).unwrap());
            }
        }

        #[test]
        fn leq_is_sound_in_m3_and_n5(s in arb(3), u in arb(3), a in 0usize..5, b in 0usize..5, c in 0usize..5) {
            let f = xyz();
            if f.leq(&s, &u).unwrap() {
                for l in [fixtures::m3(), fixtures::n5()] {
                    let env = |g: &str| Some(match g { "x" => a, "y" => b, _ => c });
                    prop_assert!(l.leq(l.evaluate_with(&s, &env).unwrap(), l.evaluate_with(&u, &env).unwrap()));
                }
            }
        }
    }
}
