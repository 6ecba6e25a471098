//! Brute-force enumeration of template programs, for cross-checking the engine.
//!
//! Programs are generated bottom-up by size: every `Pure r`, then every
//! `Rep head comb free` whose parts were generated earlier, over every
//! valid combinator. A candidate is dropped as soon as its relation tree
//! cannot be part of a parse: too many holes, too many nodes, a frontier
//! that fits nowhere in the sequence, or no typing at all. The survivors
//! with no holes are checked against the sequence with the ordinary tree
//! checker. Nothing here looks at the chart.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use thiserror::Error;

use crate::analysis::SizeDistribution;
use crate::engine::{EngineConfig, TreeId, TreeStore};
use crate::grammar::{Grammar, InstanceBody, RelId, TerminalId};
use crate::template::{Combinator, Frontier, Slot, TemplateExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Longest sequence the oracle agrees to look at.
    pub max_len: usize,
    /// Cap on generated candidates.
    pub max_exprs: usize,
    /// Holes and tree-size bounds, shared with the engine so both search the same space.
    pub engine: EngineConfig,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { max_len: 6, max_exprs: 2_000_000, engine: EngineConfig::default() }
    }
}

impl OracleConfig {
    /// Largest program whose tree fits the tree-size bound.
    pub fn max_size(&self, seq_len: usize) -> usize {
        2 * self.engine.tree_size_limit(seq_len) - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("empty input sequence")]
    EmptySequence,
    #[error("sequence of length {len} exceeds the oracle bound {max}")]
    TooLong { len: usize, max: usize },
    #[error("more than {0} candidate programs")]
    TooMany(usize),
}

#[derive(Clone, Debug)]
enum Node {
    Pure(RelId),
    Rep { head: usize, comb: Combinator, free: Vec<usize> },
}

struct Generator<'g> {
    grammar: &'g Grammar,
    seq: &'g [TerminalId],
    cfg: &'g OracleConfig,
    allowed: BTreeSet<TerminalId>,
    trees: TreeStore,
    nodes: Vec<Node>,
    tree_of: Vec<TreeId>,
    by_size: Vec<Vec<usize>>,
    viable: HashMap<TreeId, bool>,
    combs: Vec<Vec<Combinator>>,
}

/// Every accepted program of size at most `max_size`, smallest first.
pub fn enumerate_all(
    grammar: &Grammar,
    seq: &[TerminalId],
    max_size: usize,
    cfg: &OracleConfig,
) -> Result<Vec<TemplateExpr>, OracleError> {
    let gen = Generator::run(grammar, seq, max_size, cfg)?;
    Ok(gen.accepted().into_iter().map(|i| gen.materialize(i)).collect())
}

/// Smallest accepted program size, if any up to `max_size`.
pub fn min_size(
    grammar: &Grammar,
    seq: &[TerminalId],
    max_size: usize,
    cfg: &OracleConfig,
) -> Result<Option<usize>, OracleError> {
    let gen = Generator::run(grammar, seq, max_size, cfg)?;
    Ok(gen.accepted().first().map(|&i| gen.size_of(i)))
}

/// Number of accepted programs of each size, over the whole bounded space.
pub fn census(grammar: &Grammar, seq: &[TerminalId], cfg: &OracleConfig) -> Result<SizeDistribution, OracleError> {
    let gen = Generator::run(grammar, seq, cfg.max_size(seq.len()), cfg)?;
    let mut counts: BTreeMap<usize, BigUint> = BTreeMap::new();
    for i in gen.accepted() {
        *counts.entry(gen.size_of(i)).or_default() += 1u32;
    }
    Ok(SizeDistribution { counts })
}

/// Every valid combinator of length `k`.
fn all_combinators(k: usize) -> Vec<Combinator> {
    fn rec(k: usize, slots: &mut Vec<Slot>, out: &mut Vec<Combinator>) {
        let i = slots.len();
        if i == k {
            out.push(Combinator::new(slots.clone()).expect("valid by construction"));
            return;
        }
        let choices: Vec<Slot> = std::iter::once(Slot::Free)
            .chain((0..i).filter(|&j| slots[j] == Slot::Free).map(Slot::Ref))
            .chain(std::iter::once(Slot::Star))
            .collect();
        for s in choices {
            slots.push(s);
            rec(k, slots, out);
            slots.pop();
        }
    }
    let mut out = Vec::new();
    if k > 0 {
        rec(k, &mut Vec::new(), &mut out);
    }
    out
}

/// Ways to write `total` as an ordered sum of `parts` positive integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    if total < parts {
        return vec![];
    }
    let mut out = Vec::new();
    for first in 1..=total - (parts - 1) {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

impl<'g> Generator<'g> {
    fn run(grammar: &'g Grammar, seq: &'g [TerminalId], max_size: usize, cfg: &'g OracleConfig) -> Result<Self, OracleError> {
        if seq.is_empty() {
            return Err(OracleError::EmptySequence);
        }
        if seq.len() > cfg.max_len {
            return Err(OracleError::TooLong { len: seq.len(), max: cfg.max_len });
        }
        let mut gen = Generator {
            grammar,
            seq,
            cfg,
            allowed: seq.iter().copied().collect(),
            trees: TreeStore::new(),
            nodes: Vec::new(),
            tree_of: Vec::new(),
            by_size: vec![Vec::new(); max_size + 1],
            viable: HashMap::new(),
            combs: (0..=cfg.engine.max_holes).map(all_combinators).collect(),
        };
        for s in 1..=max_size {
            gen.grow(s)?;
        }
        Ok(gen)
    }

    fn grow(&mut self, s: usize) -> Result<(), OracleError> {
        if s == 1 {
            for rel in self.grammar.relation_ids() {
                let tree = self.trees.primitive(rel, self.grammar.relation(rel).arity());
                self.offer(1, Node::Pure(rel), tree)?;
            }
            return Ok(());
        }
        for head_size in 1..s - 1 + 1 {
            let rest = s - 1 - head_size;
            for hi in 0..self.by_size[head_size].len() {
                let head = self.by_size[head_size][hi];
                let head_tree = self.tree_of[head];
                let k = self.trees.holes(head_tree);
                if k == 0 {
                    continue;
                }
                for ci in 0..self.combs[k].len() {
                    let comb = self.combs[k][ci].clone();
                    for sizes in compositions(rest, comb.free_count()) {
                        let lists: Vec<Vec<usize>> = sizes.iter().map(|&z| self.by_size[z].clone()).collect();
                        let mut pick = Vec::with_capacity(lists.len());
                        self.product(s, head, &comb, &lists, &mut pick)?;
                    }
                }
            }
        }
        Ok(())
    }

    fn product(
        &mut self,
        s: usize,
        head: usize,
        comb: &Combinator,
        lists: &[Vec<usize>],
        pick: &mut Vec<usize>,
    ) -> Result<(), OracleError> {
        if pick.len() == lists.len() {
            let mut free = pick.iter().map(|&i| self.tree_of[i]);
            let mut outs: Vec<TreeId> = Vec::with_capacity(comb.len());
            for slot in comb.slots() {
                let t = match *slot {
                    Slot::Free => free.next().expect("free count"),
                    Slot::Ref(j) => outs[j],
                    Slot::Star => self.tree_of[head],
                };
                outs.push(t);
            }
            let tree = self.trees.plug(self.tree_of[head], &outs);
            return self.offer(s, Node::Rep { head, comb: comb.clone(), free: pick.clone() }, tree);
        }
        for &c in &lists[pick.len()] {
            pick.push(c);
            self.product(s, head, comb, lists, pick)?;
            pick.pop();
        }
        Ok(())
    }

    fn offer(&mut self, s: usize, node: Node, tree: TreeId) -> Result<(), OracleError> {
        if !self.is_viable(tree) {
            return Ok(());
        }
        if self.nodes.len() >= self.cfg.max_exprs {
            return Err(OracleError::TooMany(self.cfg.max_exprs));
        }
        self.nodes.push(node);
        self.tree_of.push(tree);
        self.by_size[s].push(self.nodes.len() - 1);
        Ok(())
    }

    fn is_viable(&mut self, tree: TreeId) -> bool {
        if let Some(&v) = self.viable.get(&tree) {
            return v;
        }
        let v = self.trees.holes(tree) <= self.cfg.engine.max_holes
            && self.trees.size(tree) <= self.cfg.engine.tree_size_limit(self.seq.len())
            && {
                let ct = self.trees.to_comp_tree(tree, self.grammar);
                self.frontier_fits(&ct.frontier()) && self.grammar.loose_heads(&ct, &self.allowed).is_some()
            };
        self.viable.insert(tree, v);
        v
    }

    /// Leaves match one token each, holes at least one, somewhere in the sequence.
    fn frontier_fits(&self, frontier: &[Frontier]) -> bool {
        let n = self.seq.len();
        // reach[p]: the frontier prefix read so far can end just before position p
        let mut reach = vec![true; n + 1];
        for f in frontier {
            let mut next = vec![false; n + 1];
            match f {
                Frontier::Hole => {
                    let mut any = false;
                    for p in 0..n {
                        any |= reach[p];
                        next[p + 1] = any;
                    }
                }
                Frontier::Leaf(r) => {
                    let Some(id) = self.grammar.relation_id(r.name().as_str()) else { return false };
                    for p in 0..n {
                        let tok = self.seq[p];
                        if reach[p]
                            && self.grammar.instances_of(id).any(|i| i.body == InstanceBody::Terminal(tok))
                        {
                            next[p + 1] = true;
                        }
                    }
                }
            }
            reach = next;
        }
        reach.iter().any(|&r| r)
    }

    /// Closed candidates that the tree checker accepts, smallest first.
    fn accepted(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for list in &self.by_size {
            for &i in list {
                let t = self.tree_of[i];
                if self.trees.holes(t) == 0
                    && self.trees.leaves(t) == self.seq.len()
                    && self.grammar.check_tree(&self.trees.to_comp_tree(t, self.grammar), self.seq).is_ok()
                {
                    out.push(i);
                }
            }
        }
        out
    }

    fn size_of(&self, i: usize) -> usize {
        match &self.nodes[i] {
            Node::Pure(_) => 1,
            Node::Rep { head, free, .. } => self.size_of(*head) + 1 + free.iter().map(|&c| self.size_of(c)).sum::<usize>(),
        }
    }

    fn materialize(&self, i: usize) -> TemplateExpr {
        match &self.nodes[i] {
            Node::Pure(r) => TemplateExpr::pure(self.grammar.relation(*r).clone()),
            Node::Rep { head, comb, free } => TemplateExpr::rep_unchecked(
                self.materialize(*head),
                comb.clone(),
                free.iter().map(|&c| self.materialize(c)).collect(),
            ),
        }
    }
}
