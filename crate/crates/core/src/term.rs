//! Lattice terms over named generators.
//!
//! Wire format: `t ::= IDENT | "(" t ("&" t)+ ")" | "(" t ("|" t)+ ")"`,
//! with `&` the meet and `|` the join.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A meet/join tree. Values built through [`Term::meet`], [`Term::join`] or
/// the parser are canonical: no meet has a meet child, no join has a join
/// child, and children are sorted and distinct under the derived order
/// (generators by name, then meets, then joins, each lexicographically).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Gen(String),
    Meet(Vec<Term>),
    Join(Vec<Term>),
}

fn is_reserved(c: char) -> bool {
    matches!(c, '&' | '|' | '(' | ')') || c.is_whitespace()
}

impl Term {
    pub fn gen(name: impl Into<String>) -> Term {
        Term::Gen(name.into())
    }

    /// Canonical meet of the given terms. A single distinct child is
    /// returned as is.
    ///
    /// # Panics
    /// On an empty iterator: terms have no empty meet.
    pub fn meet<I: IntoIterator<Item = Term>>(children: I) -> Term {
        Self::combine(children, true)
    }

    /// Canonical join; see [`Term::meet`].
    pub fn join<I: IntoIterator<Item = Term>>(children: I) -> Term {
        Self::combine(children, false)
    }

    fn combine<I: IntoIterator<Item = Term>>(children: I, meet: bool) -> Term {
        let mut out = Vec::new();
        for c in children {
            match c {
                Term::Meet(cs) if meet => out.extend(cs),
                Term::Join(cs) if !meet => out.extend(cs),
                c => out.push(c),
            }
        }
        out.sort();
        out.dedup();
        match out.len() {
            0 => panic!("empty {}", if meet { "meet" } else { "join" }),
            1 => out.pop().unwrap(),
            _ if meet => Term::Meet(out),
            _ => Term::Join(out),
        }
    }

    /// Rebuilds the term bottom-up through the canonical constructors.
    pub fn canonicalize(&self) -> Term {
        match self {
            Term::Gen(_) => self.clone(),
            Term::Meet(cs) => Term::meet(cs.iter().map(Term::canonicalize)),
            Term::Join(cs) => Term::join(cs.iter().map(Term::canonicalize)),
        }
    }

    /// Swaps meets and joins throughout.
    pub fn dual(&self) -> Term {
        match self {
            Term::Gen(_) => self.clone(),
            Term::Meet(cs) => Term::join(cs.iter().map(Term::dual)),
            Term::Join(cs) => Term::meet(cs.iter().map(Term::dual)),
        }
    }

    pub fn is_canonical(&self) -> bool {
        match self {
            Term::Gen(x) => !x.is_empty() && !x.chars().any(is_reserved),
            Term::Meet(cs) | Term::Join(cs) => {
                let meet = matches!(self, Term::Meet(_));
                cs.len() >= 2
                    && cs.windows(2).all(|w| w[0] < w[1])
                    && cs.iter().all(|c| {
                        c.is_canonical()
                            && !(meet && matches!(c, Term::Meet(_)))
                            && !(!meet && matches!(c, Term::Join(_)))
                    })
            }
        }
    }

    pub fn children(&self) -> &[Term] {
        match self {
            Term::Gen(_) => &[],
            Term::Meet(cs) | Term::Join(cs) => cs,
        }
    }

    /// Longest path from a generator to the root; generators have depth 0.
    pub fn depth(&self) -> usize {
        self.children().iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(Term::size).sum::<usize>()
    }

    /// All distinct subterms, the term itself included.
    pub fn subterms(&self) -> BTreeSet<Term> {
        let mut out = BTreeSet::new();
        self.collect_subterms(&mut out);
        out
    }

    fn collect_subterms(&self, out: &mut BTreeSet<Term>) {
        if out.insert(self.clone()) {
            for c in self.children() {
                c.collect_subterms(out);
            }
        }
    }

    /// Distinct generator names occurring in the term.
    pub fn generators(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_gens(&mut out);
        out
    }

    fn collect_gens<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Term::Gen(x) => {
                out.insert(x);
            }
            _ => self.children().iter().for_each(|c| c.collect_gens(out)),
        }
    }

    pub fn parse(text: &str) -> Result<Term> {
        let mut p = Parser { text, pos: 0 };
        p.skip_ws();
        let t = p.term()?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(p.err("trailing input"));
        }
        Ok(t)
    }
}

impl FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Term> {
        Term::parse(s)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Gen(x) => f.write_str(x),
            Term::Meet(cs) | Term::Join(cs) => {
                let op = if matches!(self, Term::Meet(_)) { " & " } else { " | " };
                f.write_str("(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek().filter(|c| c.is_whitespace()) {
            self.pos += c.len_utf8();
        }
    }

    fn term(&mut self) -> Result<Term> {
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some('(') => {
                self.pos += 1;
                self.skip_ws();
                let mut children = vec![self.term()?];
                self.skip_ws();
                let op = match self.peek() {
                    Some(c @ ('&' | '|')) => c,
                    Some(')') => return Err(self.err("parenthesized term needs at least two operands")),
                    _ => return Err(self.err("expected `&` or `|`")),
                };
                while self.peek() == Some(op) {
                    self.pos += 1;
                    self.skip_ws();
                    children.push(self.term()?);
                    self.skip_ws();
                }
                match self.peek() {
                    Some(')') => self.pos += 1,
                    Some('&' | '|') => return Err(self.err("mixed operators need their own parentheses")),
                    _ => return Err(self.err("expected `)`")),
                }
                Ok(if op == '&' { Term::meet(children) } else { Term::join(children) })
            }
            Some(c) if is_reserved(c) => Err(self.err(&format!("unexpected `{c}`"))),
            Some(_) => {
                let start = self.pos;
                while let Some(c) = self.peek().filter(|&c| !is_reserved(c)) {
                    self.pos += c.len_utf8();
                }
                Ok(Term::Gen(self.text[start..self.pos].to_string()))
            }
        }
    }
}

/// Index of a node in a [`TermArena`].
pub type TermId = u32;

/// Node of a hash-consed term. Children are sorted by id and distinct.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Gen(u32),
    Meet(Box<[TermId]>),
    Join(Box<[TermId]>),
}

/// Hash-consed term store. Structurally equal canonical terms get the same
/// id, and every child id is smaller than its parent's.
#[derive(Clone, Debug, Default)]
pub struct TermArena {
    gens: Vec<String>,
    gen_index: HashMap<String, u32>,
    nodes: Vec<Node>,
    depth: Vec<u32>,
    index: HashMap<Node, TermId>,
}

impl TermArena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: TermId) -> &Node {
        &self.nodes[id as usize]
    }

    pub fn depth(&self, id: TermId) -> u32 {
        self.depth[id as usize]
    }

    pub fn gen_count(&self) -> usize {
        self.gens.len()
    }

    pub fn gen_name(&self, g: u32) -> &str {
        &self.gens[g as usize]
    }

    pub fn children(&self, id: TermId) -> &[TermId] {
        match self.node(id) {
            Node::Gen(_) => &[],
            Node::Meet(cs) | Node::Join(cs) => cs,
        }
    }

    fn insert(&mut self, node: Node) -> TermId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len() as TermId;
        let d = match &node {
            Node::Gen(_) => 0,
            Node::Meet(cs) | Node::Join(cs) => 1 + cs.iter().map(|&c| self.depth[c as usize]).max().unwrap_or(0),
        };
        self.nodes.push(node.clone());
        self.depth.push(d);
        self.index.insert(node, id);
        id
    }

    pub fn gen(&mut self, name: &str) -> TermId {
        let g = match self.gen_index.get(name) {
            Some(&g) => g,
            None => {
                let g = self.gens.len() as u32;
                self.gens.push(name.to_string());
                self.gen_index.insert(name.to_string(), g);
                g
            }
        };
        self.insert(Node::Gen(g))
    }

    pub fn meet(&mut self, children: &[TermId]) -> TermId {
        self.combine(children, true)
    }

    pub fn join(&mut self, children: &[TermId]) -> TermId {
        self.combine(children, false)
    }

    fn combine(&mut self, children: &[TermId], meet: bool) -> TermId {
        let mut out = Vec::with_capacity(children.len());
        for &c in children {
            match self.node(c) {
                Node::Meet(cs) if meet => out.extend_from_slice(cs),
                Node::Join(cs) if !meet => out.extend_from_slice(cs),
                _ => out.push(c),
            }
        }
        out.sort_unstable();
        out.dedup();
        assert!(!out.is_empty(), "empty meet or join");
        if out.len() == 1 {
            return out[0];
        }
        let cs = out.into_boxed_slice();
        self.insert(if meet { Node::Meet(cs) } else { Node::Join(cs) })
    }

    pub fn intern(&mut self, t: &Term) -> TermId {
        match t {
            Term::Gen(x) => self.gen(x),
            Term::Meet(cs) => {
                let ids: Vec<TermId> = cs.iter().map(|c| self.intern(c)).collect();
                self.meet(&ids)
            }
            Term::Join(cs) => {
                let ids: Vec<TermId> = cs.iter().map(|c| self.intern(c)).collect();
                self.join(&ids)
            }
        }
    }

    pub fn to_term(&self, id: TermId) -> Term {
        match self.node(id) {
            Node::Gen(g) => Term::Gen(self.gens[*g as usize].clone()),
            Node::Meet(cs) => Term::meet(cs.iter().map(|&c| self.to_term(c))),
            Node::Join(cs) => Term::join(cs.iter().map(|&c| self.to_term(c))),
        }
    }

    /// Number of nodes of the tree rooted at `id` (shared subtrees counted
    /// once per occurrence).
    pub fn size(&self, id: TermId) -> usize {
        1 + self.children(id).iter().map(|&c| self.size(c)).sum::<usize>()
    }
}
