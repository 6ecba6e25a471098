//! Weighted deduction over partially built relation trees.
//!
//! An item `[τ, t, σ]` says: tree `t`, instantiated at one of the
//! computation types `τ`, explains the region `σ` provided the spans of its
//! holes are explained. Two axioms seed the chart:
//!
//! * scan: a termination leaf over a single token;
//! * primitive: an internal relation whose holes split a span into
//!   contiguous nonempty pieces.
//!
//! One rule combines items: a parent with `k` holes and one child per hole
//! whose span is exactly that hole. The combinator on the resulting
//! hyperedge records which children are fresh (`_`), which repeat an
//! earlier child's tree (`i`), and which repeat the parent's own tree (`*`).
//! The weight of a hyperedge is `w(parent) + 1 + Σ w(free children)`; an
//! item's weight is the minimum over its hyperedges and equals the size of
//! the smallest program that builds it.
//!
//! Items are keyed by `(tree, region)`. Relation trees mention relation
//! symbols only, so one tree can carry several computation types; the item
//! stores all of them. That set depends only on the tree and the tokens it
//! covers, never on the derivation, so every program for the item reaches
//! the same key exactly once.

mod chart;
mod trees;

use std::fmt;

use smallvec::SmallVec;
use thiserror::Error;

pub use chart::{best_first, forward_chain, minimal_size, Chart, ChartStats, EdgeId, ItemId, Strategy};
pub use trees::{TreeId, TreeStore};

use crate::grammar::{Grammar, InstanceBody, NonterminalId, TerminalId};
use crate::template::{Combinator, Slot};

/// Half-open token range `[lo, hi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub lo: u32,
    pub hi: u32,
}

impl Interval {
    pub fn new(lo: usize, hi: usize) -> Self {
        debug_assert!(lo < hi);
        Interval { lo: lo as u32, hi: hi as u32 }
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

/// The overall span of a computation and the spans of its holes, in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalType {
    pub span: Interval,
    pub holes: SmallVec<[Interval; 3]>,
}

impl IntervalType {
    pub fn closed(span: Interval) -> Self {
        IntervalType { span, holes: SmallVec::new() }
    }

    /// Holes nonempty, strictly increasing, pairwise disjoint and inside the span.
    pub fn is_well_formed(&self) -> bool {
        let mut cursor = self.span.lo;
        for h in &self.holes {
            if h.is_empty() || h.lo < cursor || h.hi > self.span.hi {
                return false;
            }
            cursor = h.hi;
        }
        !self.span.is_empty()
    }
}

impl fmt::Display for IntervalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for h in &self.holes {
            write!(f, "{h}→")?;
        }
        write!(f, "{}", self.span)
    }
}

/// `x1 → … → xn → x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CompType {
    pub head: NonterminalId,
    pub args: SmallVec<[NonterminalId; 3]>,
}

/// Minimal program size.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub u32);

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A chart entry: a tree over a region, with every computation type it admits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Item {
    pub tree: TreeId,
    pub region: IntervalType,
    /// Sorted, deduplicated, nonempty.
    pub types: Vec<CompType>,
}

impl Item {
    pub fn arity(&self) -> usize {
        self.region.holes.len()
    }

    pub fn has_head(&self, nt: NonterminalId) -> bool {
        self.types.iter().any(|t| t.head == nt && t.args.is_empty())
    }

    pub fn heads(&self) -> impl Iterator<Item = NonterminalId> + '_ {
        let mut last = None;
        self.types.iter().filter_map(move |t| {
            if last == Some(t.head) {
                None
            } else {
                last = Some(t.head);
                Some(t.head)
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    ScanRel,
    PrimRel,
    CompleteRep,
}

/// A rule application. Axioms have no parent, no children and no combinator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hyperedge {
    pub head: ItemId,
    pub rule: Rule,
    pub parent: Option<ItemId>,
    pub children: SmallVec<[ItemId; 3]>,
    pub comb: Option<Combinator>,
}

impl Hyperedge {
    /// Children at free slots: the only ones whose programs are paid for.
    pub fn free_children(&self) -> impl Iterator<Item = ItemId> + '_ {
        let slots = self.comb.as_ref().map(|c| c.slots()).unwrap_or(&[]);
        self.children.iter().zip(slots).filter(|(_, s)| matches!(s, Slot::Free)).map(|(&c, _)| c)
    }
}

/// Which combinators Complete-Rep may attach.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CombinatorSet {
    #[default]
    All,
    /// Only `<_ … _>`: plain context-free derivations.
    TrivialOnly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EngineConfig {
    /// Items with more holes are not built.
    pub max_holes: usize,
    /// Items whose tree has more relation nodes are not built. `None` means `2·|seq|`.
    pub max_tree_size: Option<usize>,
    /// Chaining fails once the chart holds more items than this.
    pub max_items: usize,
    pub combinators: CombinatorSet,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { max_holes: 3, max_tree_size: None, max_items: 5_000_000, combinators: CombinatorSet::All }
    }
}

impl EngineConfig {
    pub fn tree_size_limit(&self, seq_len: usize) -> usize {
        self.max_tree_size.unwrap_or(2 * seq_len)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("empty input sequence")]
    EmptySequence,
    #[error("search bound `{bound}` exceeded (limit {limit})")]
    BoundExceeded { bound: &'static str, limit: usize },
    #[error("no program explains the sequence")]
    NoParse,
}

/// `w(parent) + 1 + Σ w(child)` over free slots only.
pub fn merge_weight(comb: &Combinator, parent: Weight, children: &[Weight]) -> Weight {
    debug_assert_eq!(comb.len(), children.len());
    let free: u32 = comb
        .slots()
        .iter()
        .zip(children)
        .filter(|(s, _)| matches!(s, Slot::Free))
        .map(|(_, w)| w.0)
        .sum();
    Weight(parent.0 + 1 + free)
}

/// Scan-Rel: one leaf item per token and termination relation that emits it.
pub fn scan_rel(grammar: &Grammar, seq: &[TerminalId], trees: &mut TreeStore) -> Vec<(Item, Weight)> {
    let mut out = Vec::new();
    for (i, &tok) in seq.iter().enumerate() {
        for rel in grammar.relation_ids() {
            if grammar.relation(rel).arity() != 0 {
                continue;
            }
            let mut types: Vec<CompType> = grammar
                .instances_of(rel)
                .filter(|inst| inst.body == InstanceBody::Terminal(tok))
                .map(|inst| CompType { head: inst.head, args: SmallVec::new() })
                .collect();
            if types.is_empty() {
                continue;
            }
            types.sort();
            types.dedup();
            let tree = trees.node(rel, &[]);
            out.push((Item { tree, region: IntervalType::closed(Interval::new(i, i + 1)), types }, Weight(1)));
        }
    }
    out
}

/// Prim-Rel: every internal relation over every split of every span into
/// `arity` contiguous nonempty holes.
pub fn prim_rel(grammar: &Grammar, n: usize, trees: &mut TreeStore) -> Vec<(Item, Weight)> {
    let mut out = Vec::new();
    for rel in grammar.relation_ids() {
        let arity = grammar.relation(rel).arity();
        if arity == 0 {
            continue;
        }
        let mut types: Vec<CompType> = grammar
            .instances_of(rel)
            .filter_map(|inst| match &inst.body {
                InstanceBody::Children(ch) => Some(CompType { head: inst.head, args: ch.iter().copied().collect() }),
                InstanceBody::Terminal(_) => None,
            })
            .collect();
        types.sort();
        types.dedup();
        let tree = trees.primitive(rel, arity);
        for lo in 0..n {
            for hi in lo + arity..=n {
                for holes in splits(lo, hi, arity) {
                    let region = IntervalType { span: Interval::new(lo, hi), holes };
                    out.push((Item { tree, region, types: types.clone() }, Weight(1)));
                }
            }
        }
    }
    out
}

/// All ways to cut `[lo, hi)` into `k` contiguous nonempty intervals.
fn splits(lo: usize, hi: usize, k: usize) -> Vec<SmallVec<[Interval; 3]>> {
    fn rec(lo: usize, hi: usize, k: usize, acc: &mut SmallVec<[Interval; 3]>, out: &mut Vec<SmallVec<[Interval; 3]>>) {
        if k == 1 {
            acc.push(Interval::new(lo, hi));
            out.push(acc.clone());
            acc.pop();
            return;
        }
        for cut in lo + 1..=hi - (k - 1) {
            acc.push(Interval::new(lo, cut));
            rec(cut, hi, k - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if hi >= lo + k && k > 0 {
        rec(lo, hi, k, &mut SmallVec::new(), &mut out);
    }
    out
}

/// hasRep: `Ref(j)` slots need the same tree as slot `j`, `Star` slots the
/// parent's tree.
pub fn has_rep(comb: &Combinator, parent: &Item, children: &[&Item]) -> bool {
    comb.len() == children.len()
        && comb.slots().iter().enumerate().all(|(i, s)| match *s {
            Slot::Free => true,
            Slot::Ref(j) => children[j].tree == children[i].tree,
            Slot::Star => children[i].tree == parent.tree,
        })
}

/// mergeType: every parent type whose i-th argument is the head of some
/// type of child i, with the children's arguments concatenated.
pub fn merge_types(parent: &Item, children: &[&Item]) -> Vec<CompType> {
    let mut out = Vec::new();
    let mut args: SmallVec<[NonterminalId; 3]> = SmallVec::new();
    for pt in &parent.types {
        if pt.args.len() != children.len() {
            continue;
        }
        product(pt, children, 0, &mut args, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

fn product(
    pt: &CompType,
    children: &[&Item],
    slot: usize,
    args: &mut SmallVec<[NonterminalId; 3]>,
    out: &mut Vec<CompType>,
) {
    if slot == children.len() {
        out.push(CompType { head: pt.head, args: args.clone() });
        return;
    }
    let want = pt.args[slot];
    for ct in children[slot].types.iter().filter(|t| t.head == want) {
        let mark = args.len();
        args.extend(ct.args.iter().copied());
        product(pt, children, slot + 1, args, out);
        args.truncate(mark);
    }
}

/// mergeR: children must cover exactly the parent's holes; the merged
/// region keeps the parent's span and collects the children's holes.
pub fn merge_region(parent: &Item, children: &[&Item]) -> Option<IntervalType> {
    if parent.region.holes.len() != children.len() {
        return None;
    }
    let mut holes = SmallVec::new();
    for (hole, child) in parent.region.holes.iter().zip(children) {
        if child.region.span != *hole {
            return None;
        }
        holes.extend(child.region.holes.iter().copied());
    }
    Some(IntervalType { span: parent.region.span, holes })
}

/// Complete-Rep: the merged item, or `None` when any side condition fails.
pub fn complete_rep(trees: &mut TreeStore, parent: &Item, children: &[&Item], comb: &Combinator) -> Option<Item> {
    if children.is_empty() || !has_rep(comb, parent, children) {
        return None;
    }
    let region = merge_region(parent, children)?;
    let types = merge_types(parent, children);
    if types.is_empty() {
        return None;
    }
    let kids: SmallVec<[TreeId; 3]> = children.iter().map(|c| c.tree).collect();
    let tree = trees.plug(parent.tree, &kids);
    Some(Item { tree, region, types })
}

/// Every combinator `has_rep` accepts for this parent and these children.
pub fn compatible_combinators(parent_tree: TreeId, child_trees: &[TreeId], set: CombinatorSet) -> Vec<Combinator> {
    let mut out = Vec::new();
    let mut slots = Vec::with_capacity(child_trees.len());
    fn rec(parent: TreeId, kids: &[TreeId], set: CombinatorSet, slots: &mut Vec<Slot>, out: &mut Vec<Combinator>) {
        let i = slots.len();
        if i == kids.len() {
            out.push(Combinator::from_slots_unchecked(slots.clone()));
            return;
        }
        slots.push(Slot::Free);
        rec(parent, kids, set, slots, out);
        slots.pop();
        if set == CombinatorSet::TrivialOnly {
            return;
        }
        for j in 0..i {
            if slots[j] == Slot::Free && kids[j] == kids[i] {
                slots.push(Slot::Ref(j));
                rec(parent, kids, set, slots, out);
                slots.pop();
            }
        }
        if kids[i] == parent {
            slots.push(Slot::Star);
            rec(parent, kids, set, slots, out);
            slots.pop();
        }
    }
    rec(parent_tree, child_trees, set, &mut slots, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{GrammarDef, RelationDef, TerminationDef};

    fn toy(children: &[&str]) -> Grammar {
        Grammar::from_def(&GrammarDef {
            start: "S".into(),
            nonterminals: vec!["S".into(), "A".into(), "B".into()],
            terminals: vec!["a".into(), "b".into()],
            relations: vec![RelationDef::new("g", "S", children)],
            terminations: vec![TerminationDef::new("a", "A", "a"), TerminationDef::new("b", "B", "b")],
        })
        .unwrap()
    }

    fn comb(s: &str) -> Combinator {
        s.parse().unwrap()
    }

    #[test]
    fn scan_examples() {
        let g = toy(&["A", "B"]);
        let mut trees = TreeStore::new();
        let out = scan_rel(&g, &g.tokenize(&["a"]).unwrap(), &mut trees);
        assert_eq!(out.len(), 1);
        let (item, w) = &out[0];
        assert_eq!(w, &Weight(1));
        assert_eq!(item.region, IntervalType::closed(Interval::new(0, 1)));
        assert!(item.has_head(g.nonterminal("A").unwrap()));

        let jazz = crate::grammar::builtin_grammar("jazz").unwrap();
        let seq = jazz.tokenize(&["Dm7", "G7", "Cmaj7"]).unwrap();
        let mut trees = TreeStore::new();
        assert_eq!(scan_rel(&jazz, &seq, &mut trees).len(), 3);
        // a token nothing emits
        let mut trees = TreeStore::new();
        assert!(scan_rel(&g, &[TerminalId(1)], &mut trees).iter().all(|(i, _)| !i.has_head(g.nonterminal("A").unwrap())));
    }

    #[test]
    fn prim_examples() {
        let g = toy(&["A", "B"]);
        let mut trees = TreeStore::new();
        let out = prim_rel(&g, 2, &mut trees);
        assert_eq!(out.len(), 1);
        let (item, w) = &out[0];
        assert_eq!(*w, Weight(1));
        assert_eq!(item.region.to_string(), "(0,1)→(1,2)→(0,2)");
        assert_eq!(item.types.len(), 1);
        assert_eq!(item.types[0].args.as_slice(), &[g.nonterminal("A").unwrap(), g.nonterminal("B").unwrap()]);

        // n = 3, binary: spans of length 2 have one split each, (0,3) has two.
        let out = prim_rel(&g, 3, &mut TreeStore::new());
        let full: Vec<_> = out.iter().filter(|(i, _)| i.region.span == Interval::new(0, 3)).collect();
        assert_eq!(full.len(), 2);
        assert_eq!(out.len(), 4);
    }

    #[test]
    fn split_counts_match_binomials() {
        // k parts of a length-L span: C(L-1, k-1)
        for len in 1..7usize {
            for k in 1..4usize {
                let expect = if len < k { 0 } else { binom(len - 1, k - 1) };
                assert_eq!(splits(0, len, k).len(), expect, "len {len} k {k}");
            }
        }
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn merge_weight_examples() {
        assert_eq!(merge_weight(&comb("<_ 0>"), Weight(1), &[Weight(1), Weight(1)]), Weight(3));
        assert_eq!(merge_weight(&comb("<_ _>"), Weight(1), &[Weight(1), Weight(1)]), Weight(4));
        assert_eq!(merge_weight(&comb("<*>"), Weight(5), &[Weight(5)]), Weight(6));
    }

    fn leaf(g: &Grammar, trees: &mut TreeStore, tok: &str, at: usize) -> Item {
        let seq = g.tokenize(&[tok]).unwrap();
        let (mut item, _) = scan_rel(g, &seq, trees).remove(0);
        item.region = IntervalType::closed(Interval::new(at, at + 1));
        item
    }

    #[test]
    fn complete_rep_examples() {
        let g = toy(&["A", "B"]);
        let mut trees = TreeStore::new();
        let (parent, _) = prim_rel(&g, 2, &mut trees).remove(0);
        let a = leaf(&g, &mut trees, "a", 0);
        let b = leaf(&g, &mut trees, "b", 1);
        let goal = complete_rep(&mut trees, &parent, &[&a, &b], &comb("<_ _>")).unwrap();
        assert!(goal.has_head(g.start()));
        assert_eq!(goal.region, IntervalType::closed(Interval::new(0, 2)));
        assert_eq!(trees.to_comp_tree(goal.tree, &g).to_string(), "g(a, b)");
        // children differ, so <_ 0> does not apply
        assert!(complete_rep(&mut trees, &parent, &[&a, &b], &comb("<_ 0>")).is_none());

        let g = toy(&["A", "A"]);
        let mut trees = TreeStore::new();
        let (parent, _) = prim_rel(&g, 2, &mut trees).remove(0);
        let a0 = leaf(&g, &mut trees, "a", 0);
        let a1 = leaf(&g, &mut trees, "a", 1);
        let goal = complete_rep(&mut trees, &parent, &[&a0, &a1], &comb("<_ 0>")).unwrap();
        assert!(goal.has_head(g.start()));
        let w = merge_weight(&comb("<_ 0>"), Weight(1), &[Weight(1), Weight(1)]);
        assert_eq!(w, Weight(3));
        // wrong span
        assert!(complete_rep(&mut trees, &parent, &[&a1, &a0], &comb("<_ _>")).is_none());
    }

    #[test]
    fn complete_rep_type_mismatch() {
        let g = toy(&["A", "B"]);
        let mut trees = TreeStore::new();
        let (parent, _) = prim_rel(&g, 2, &mut trees).remove(0);
        let a0 = leaf(&g, &mut trees, "a", 0);
        let a1 = leaf(&g, &mut trees, "a", 1);
        assert!(complete_rep(&mut trees, &parent, &[&a0, &a1], &comb("<_ _>")).is_none());
    }

    #[test]
    fn combinator_enumeration() {
        let p = TreeId(5);
        let x = TreeId(7);
        let y = TreeId(8);
        let names = |v: Vec<Combinator>| v.iter().map(ToString::to_string).collect::<Vec<_>>();
        assert_eq!(names(compatible_combinators(p, &[x, x], CombinatorSet::All)), vec!["<_ _>", "<_ 0>"]);
        assert_eq!(names(compatible_combinators(p, &[x, y], CombinatorSet::All)), vec!["<_ _>"]);
        assert_eq!(names(compatible_combinators(p, &[p, y], CombinatorSet::All)), vec!["<_ _>", "<* _>"]);
        assert_eq!(
            names(compatible_combinators(p, &[x, x, x], CombinatorSet::All)),
            vec!["<_ _ _>", "<_ _ 0>", "<_ _ 1>", "<_ 0 _>", "<_ 0 0>"]
        );
        assert_eq!(names(compatible_combinators(p, &[x, x], CombinatorSet::TrivialOnly)), vec!["<_ _>"]);
    }
}
