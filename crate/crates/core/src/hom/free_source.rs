use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::free::{FreeEngine, FreeLattice, StageIndex};
use crate::order::{DCertificate, FiniteLattice};
use crate::term::{Node, Term, TermId};

/// A homomorphism from a finitely generated free lattice onto a finite
/// lattice, given by generator images. Holds a term engine so that the
/// `beta` and `alpha` tables can be built incrementally.
#[derive(Clone, Debug)]
pub struct FreeHom {
    free: FreeLattice,
    target: FiniteLattice,
    images: Vec<usize>,
    engine: FreeEngine,
    image_memo: HashMap<TermId, usize>,
    beta: Vec<Vec<TermId>>,
    alpha: Vec<Vec<TermId>>,
    join_covers: Option<Vec<Vec<Vec<usize>>>>,
    meet_covers: Option<Vec<Vec<Vec<usize>>>>,
}

/// Outcome of [`FreeHom::lower_bounded_report`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBoundedReport {
    /// Verdict from the D-relation of the whole target.
    pub all_elements: bool,
    /// Verdict from the elements of `P` alone, when `P` was supplied.
    pub p_only: Option<bool>,
    pub certificate: DCertificate,
}

const COVER_CAP: usize = 100_000;

impl FreeHom {
    /// `images` pairs generator names with target element ids.
    pub fn new<S: AsRef<str>, T: AsRef<str>>(free: FreeLattice, target: FiniteLattice, images: &[(S, T)]) -> Result<Self> {
        let mut img: Vec<Option<usize>> = vec![None; free.gens().len()];
        for (x, d) in images {
            let i = free
                .gens()
                .iter()
                .position(|g| g == x.as_ref())
                .ok_or_else(|| Error::UnknownGenerator(x.as_ref().to_string()))?;
            img[i] = Some(target.index_of(d.as_ref())?);
        }
        let images = img
            .iter()
            .zip(free.gens())
            .map(|(m, x)| m.ok_or_else(|| Error::UnassignedGenerator(x.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(FreeHom {
            free,
            target,
            images,
            engine: FreeEngine::new(),
            image_memo: HashMap::new(),
            beta: Vec::new(),
            alpha: Vec::new(),
            join_covers: None,
            meet_covers: None,
        })
    }

    /// Parses `x=a,y=b` into pairs.
    pub fn parse_images(spec: &str) -> Result<Vec<(String, String)>> {
        spec.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|kv| {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::Invalid(format!("expected generator=element, got `{kv}`")))?;
                Ok((k.trim().to_string(), v.trim().to_string()))
            })
            .collect()
    }

    pub fn free(&self) -> &FreeLattice {
        &self.free
    }

    pub fn target(&self) -> &FiniteLattice {
        &self.target
    }

    pub fn engine(&mut self) -> &mut FreeEngine {
        &mut self.engine
    }

    /// Image of the generator `x`.
    pub fn generator_image(&self, x: &str) -> Option<usize> {
        self.free.gens().iter().position(|g| g == x).map(|i| self.images[i])
    }

    pub fn is_surjective(&self) -> bool {
        self.target.generated_by(&self.images).is_full()
    }

    pub fn apply(&mut self, t: &Term) -> Result<usize> {
        self.free.check(t)?;
        let id = self.engine.intern(t);
        Ok(self.image_id(id))
    }

    /// Image of an interned term over this lattice's generators.
    pub fn image_id(&mut self, id: TermId) -> usize {
        if let Some(&d) = self.image_memo.get(&id) {
            return d;
        }
        let d = match self.engine.arena().node(id).clone() {
            Node::Gen(g) => self.generator_image(self.engine.arena().gen_name(g)).expect("terms are checked on entry"),
            Node::Meet(cs) => {
                let v: Vec<usize> = cs.iter().map(|&c| self.image_id(c)).collect();
                self.target.meet_set(v)
            }
            Node::Join(cs) => {
                let v: Vec<usize> = cs.iter().map(|&c| self.image_id(c)).collect();
                self.target.join_set(v)
            }
        };
        self.image_memo.insert(id, d);
        d
    }

    pub fn top_id(&mut self) -> TermId {
        self.free.top_id(&mut self.engine)
    }

    pub fn bottom_id(&mut self) -> TermId {
        self.free.bottom_id(&mut self.engine)
    }

    fn gen_ids(&mut self) -> Vec<TermId> {
        let gens = self.free.gens().to_vec();
        gens.iter().map(|x| self.engine.gen(x)).collect()
    }

    fn covers(&mut self, meet: bool) -> Result<Vec<Vec<Vec<usize>>>> {
        let slot = if meet { &self.meet_covers } else { &self.join_covers };
        if let Some(c) = slot {
            return Ok(c.clone());
        }
        let l = if meet { self.target.dual() } else { self.target.clone() };
        let c: Vec<Vec<Vec<usize>>> = (0..l.len())
            .map(|d| Ok(l.minimal_join_covers(d, COVER_CAP)?.into_iter().map(|c| c.cover).collect()))
            .collect::<Result<_>>()?;
        if meet {
            self.meet_covers = Some(c.clone());
        } else {
            self.join_covers = Some(c.clone());
        }
        Ok(c)
    }

    /// `beta_k(d)` for every target element `d`, as canonical ids.
    ///
    /// `beta_0(d)` is the meet of the generators mapped above `d`. Later
    /// entries use `beta_k(d) = beta_{k-1}(d) & meet over E of
    /// join{beta_{k-1}(e) : e in E}`, with `E` ranging over the minimal
    /// nontrivial join covers of `d` in the target.
    pub fn beta_table(&mut self, k: usize) -> Result<Vec<TermId>> {
        while self.beta.len() <= k {
            let n = self.target.len();
            let row = if self.beta.is_empty() {
                let gens = self.gen_ids();
                let top = self.top_id();
                (0..n)
                    .map(|d| {
                        let xs: Vec<TermId> = (0..gens.len()).filter(|&i| self.target.leq(d, self.images[i])).map(|i| gens[i]).collect();
                        if xs.is_empty() { top } else { self.engine.meet(&xs) }
                    })
                    .collect()
            } else {
                let covers = self.covers(false)?;
                let prev = self.beta.last().unwrap().clone();
                (0..n)
                    .map(|d| {
                        let mut parts = vec![prev[d]];
                        for e in &covers[d] {
                            let js: Vec<TermId> = e.iter().map(|&x| prev[x]).collect();
                            parts.push(self.engine.join(&js));
                        }
                        self.engine.meet(&parts)
                    })
                    .collect()
            };
            self.beta.push(row);
        }
        Ok(self.beta[k].clone())
    }

    /// `alpha_k(d)` for every target element `d`, as canonical ids.
    ///
    /// `alpha_0(d)` joins the generators mapped below `d` (the empty join
    /// being the meet of all generators). `alpha_1` adds meets of generator
    /// sets mapped below `d`; from `k = 2` on the dual of the `beta`
    /// recursion applies.
    pub fn alpha_table(&mut self, k: usize) -> Result<Vec<TermId>> {
        while self.alpha.len() <= k {
            let n = self.target.len();
            let gens = self.gen_ids();
            let row = if self.alpha.is_empty() {
                let bottom = self.bottom_id();
                (0..n)
                    .map(|d| {
                        let xs: Vec<TermId> = (0..gens.len()).filter(|&i| self.target.leq(self.images[i], d)).map(|i| gens[i]).collect();
                        if xs.is_empty() { bottom } else { self.engine.join(&xs) }
                    })
                    .collect()
            } else if self.alpha.len() == 1 {
                let prev = self.alpha[0].clone();
                let m = gens.len();
                (0..n)
                    .map(|d| {
                        let mut parts = vec![prev[d]];
                        for mask in 1u32..(1 << m) {
                            let u: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
                            if u.len() >= 2
                                && u.iter().all(|&i| !self.target.leq(self.images[i], d))
                                && self.target.leq(self.target.meet_set(u.iter().map(|&i| self.images[i])), d)
                            {
                                let ms: Vec<TermId> = u.iter().map(|&i| gens[i]).collect();
                                parts.push(self.engine.meet(&ms));
                            }
                        }
                        self.engine.join(&parts)
                    })
                    .collect()
            } else {
                let covers = self.covers(true)?;
                let prev = self.alpha.last().unwrap().clone();
                (0..n)
                    .map(|d| {
                        let mut parts = vec![prev[d]];
                        for e in &covers[d] {
                            let ms: Vec<TermId> = e.iter().map(|&x| prev[x]).collect();
                            parts.push(self.engine.meet(&ms));
                        }
                        self.engine.join(&parts)
                    })
                    .collect()
            };
            self.alpha.push(row);
        }
        Ok(self.alpha[k].clone())
    }

    pub fn beta_k(&mut self, d: usize, k: usize) -> Result<Term> {
        let id = self.beta_table(k)?[d];
        Ok(self.engine.term(id))
    }

    pub fn alpha_k(&mut self, d: usize, k: usize) -> Result<Term> {
        let id = self.alpha_table(k)?[d];
        Ok(self.engine.term(id))
    }

    /// `beta_k(d)` straight from the definition: the meet of every member
    /// of `G_k` mapped above `d`. Enumerates the stage, so only small `k`
    /// and few generators are feasible.
    pub fn beta_k_direct(&mut self, d: usize, k: usize, cap: usize) -> Result<TermId> {
        let stage = self.free.stage_ids(&mut self.engine, StageIndex::g(k), cap)?;
        let target = self.target.clone();
        let ws: Vec<TermId> = stage.into_iter().filter(|&w| target.leq(d, self.image_id(w))).collect();
        Ok(if ws.is_empty() { self.top_id() } else { self.engine.meet(&ws) })
    }

    /// `alpha_k(d)` from the definition, joining the members of `H_{k-1}`
    /// mapped below `d` (generators for `k = 0`).
    pub fn alpha_k_direct(&mut self, d: usize, k: usize, cap: usize) -> Result<TermId> {
        let stage: Vec<TermId> = if k == 0 {
            self.gen_ids()
        } else {
            self.free.stage_ids(&mut self.engine, StageIndex::h(k - 1), cap)?.into_iter().collect()
        };
        let target = self.target.clone();
        let ws: Vec<TermId> = stage.into_iter().filter(|&w| target.leq(self.image_id(w), d)).collect();
        Ok(if ws.is_empty() { self.bottom_id() } else { self.engine.join(&ws) })
    }

    /// Iterates `beta_k` until the whole table repeats. Returns the first
    /// stable index and the least preimages. Fails with
    /// [`Error::NotLowerBounded`] (carrying a D-cycle) when the target is
    /// not lower bounded, since the sequence then never settles.
    pub fn beta_stable(&mut self, max_k: usize) -> Result<(usize, Vec<Term>)> {
        if !self.is_surjective() {
            return Err(Error::NotSurjective);
        }
        if let DCertificate::Cycle(c) = self.target.lower_boundedness() {
            return Err(Error::NotLowerBounded(c.iter().map(|&p| self.target.name(p).to_string()).collect()));
        }
        for k in 1..=max_k {
            if self.beta_table(k)? == self.beta_table(k - 1)? {
                let t = self.beta[k].iter().map(|&i| self.engine.term(i)).collect();
                return Ok((k - 1, t));
            }
        }
        Err(Error::cap("beta iterations", max_k))
    }

    pub fn alpha_stable(&mut self, max_k: usize) -> Result<(usize, Vec<Term>)> {
        if !self.is_surjective() {
            return Err(Error::NotSurjective);
        }
        let dual = self.target.dual();
        if let DCertificate::Cycle(c) = dual.lower_boundedness() {
            return Err(Error::NotUpperBounded(c.iter().map(|&p| self.target.name(p).to_string()).collect()));
        }
        for k in 1..=max_k {
            if self.alpha_table(k)? == self.alpha_table(k - 1)? {
                let t = self.alpha[k].iter().map(|&i| self.engine.term(i)).collect();
                return Ok((k - 1, t));
            }
        }
        Err(Error::cap("alpha iterations", max_k))
    }

    /// Lower boundedness of the homomorphism, decided on all of the target
    /// and, when `p` is given, on `P` alone. The second check is only
    /// meaningful when the target satisfies (D) for `P`; otherwise the call
    /// fails with [`Error::DeanConditionFails`].
    pub fn lower_bounded_report(&self, p: Option<&[usize]>) -> Result<LowerBoundedReport> {
        if !self.is_surjective() {
            return Err(Error::NotSurjective);
        }
        let certificate = self.target.lower_boundedness();
        let p_only = match p {
            None => None,
            Some(p) => {
                if self.target.check_dean(p)?.is_some() {
                    return Err(Error::DeanConditionFails);
                }
                let lev = self.target.lower_bounded_elements(COVER_CAP)?;
                Some(p.iter().all(|&x| lev[x].is_some()))
            }
        };
        Ok(LowerBoundedReport {
            all_elements: certificate.is_bounded(),
            p_only,
            certificate,
        })
    }
}
