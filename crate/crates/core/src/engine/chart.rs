//! The chart, its agenda and the derivation hypergraph.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, VecDeque};

use smallvec::SmallVec;

use super::{
    compatible_combinators, merge_region, merge_types, merge_weight, prim_rel, scan_rel, EngineConfig, EngineError,
    Hyperedge, Interval, IntervalType, Item, Rule, TreeId, TreeStore, Weight,
};
use crate::grammar::{Grammar, NonterminalId, TerminalId};
use crate::template::CompTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

/// Agenda discipline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// FIFO to closure, weights by dynamic programming afterwards.
    Exhaustive,
    /// Lightest item first; stops once every item no heavier than the best goal is final.
    BestFirst,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChartStats {
    pub items: usize,
    pub edges: usize,
    pub pops: usize,
    pub pruned_holes: usize,
    pub pruned_size: usize,
    /// Best-first only: every pop weighed at least as much as the one before.
    pub pop_order_monotone: bool,
}

/// A finished chart: items, hyperedges and weights.
#[derive(Clone, Debug)]
pub struct Chart {
    grammar: Grammar,
    seq: Vec<TerminalId>,
    config: EngineConfig,
    strategy: Strategy,
    trees: TreeStore,
    items: Vec<Item>,
    index: HashMap<(TreeId, IntervalType), ItemId>,
    edges: Vec<Hyperedge>,
    incoming: Vec<Vec<EdgeId>>,
    weights: Vec<Option<Weight>>,
    finalized: Vec<bool>,
    stats: ChartStats,
    closed: bool,
}

enum Agenda {
    Fifo(VecDeque<ItemId>),
    Heap(BinaryHeap<Reverse<(Weight, ItemId)>>),
}

/// Working state kept only while chaining.
struct Indexes {
    by_span: HashMap<Interval, Vec<ItemId>>,
    parents_by_hole: HashMap<Interval, Vec<(ItemId, usize)>>,
}

/// Runs the deduction system to closure.
pub fn forward_chain(grammar: &Grammar, seq: &[TerminalId], config: &EngineConfig) -> Result<Chart, EngineError> {
    Chart::run(grammar, seq, config, Strategy::Exhaustive)
}

/// Runs the deduction system lightest-first. Fails with `NoParse` if no goal is derivable.
pub fn best_first(grammar: &Grammar, seq: &[TerminalId], config: &EngineConfig) -> Result<Chart, EngineError> {
    let chart = Chart::run(grammar, seq, config, Strategy::BestFirst)?;
    if chart.best_goal().is_none() {
        return Err(EngineError::NoParse);
    }
    Ok(chart)
}

/// Size of the smallest program that explains `seq`.
pub fn minimal_size(grammar: &Grammar, seq: &[TerminalId], config: &EngineConfig) -> Result<Weight, EngineError> {
    let chart = best_first(grammar, seq, config)?;
    chart.goal_weight().ok_or(EngineError::NoParse)
}

impl Chart {
    fn run(grammar: &Grammar, seq: &[TerminalId], config: &EngineConfig, strategy: Strategy) -> Result<Chart, EngineError> {
        if seq.is_empty() {
            return Err(EngineError::EmptySequence);
        }
        let mut chart = Chart {
            grammar: grammar.clone(),
            seq: seq.to_vec(),
            config: config.clone(),
            strategy,
            trees: TreeStore::new(),
            items: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            incoming: Vec::new(),
            weights: Vec::new(),
            finalized: Vec::new(),
            stats: ChartStats { pop_order_monotone: true, ..Default::default() },
            closed: false,
        };
        let mut agenda = match strategy {
            Strategy::Exhaustive => Agenda::Fifo(VecDeque::new()),
            Strategy::BestFirst => Agenda::Heap(BinaryHeap::new()),
        };
        let mut idx = Indexes { by_span: HashMap::new(), parents_by_hole: HashMap::new() };

        let mut axioms = scan_rel(grammar, seq, &mut chart.trees)
            .into_iter()
            .map(|a| (a, Rule::ScanRel))
            .collect::<Vec<_>>();
        axioms.extend(prim_rel(grammar, seq.len(), &mut chart.trees).into_iter().map(|a| (a, Rule::PrimRel)));
        for ((item, w), rule) in axioms {
            if item.arity() > config.max_holes {
                chart.stats.pruned_holes += 1;
                continue;
            }
            let edge = Hyperedge { head: ItemId(0), rule, parent: None, children: SmallVec::new(), comb: None };
            chart.add_edge(item, edge, Some(w), &mut agenda)?;
        }

        let mut last_pop = Weight(0);
        let mut goal_cutoff: Option<Weight> = None;
        loop {
            let next = match &mut agenda {
                Agenda::Fifo(q) => q.pop_front(),
                Agenda::Heap(h) => loop {
                    match h.pop() {
                        None => break None,
                        Some(Reverse((w, id))) => {
                            if chart.finalized[id.0 as usize] || chart.weights[id.0 as usize] != Some(w) {
                                continue;
                            }
                            if goal_cutoff.is_some_and(|cut| w > cut) {
                                break None;
                            }
                            if w < last_pop {
                                chart.stats.pop_order_monotone = false;
                            }
                            debug_assert!(w >= last_pop, "agenda popped {w} after {last_pop}");
                            last_pop = w;
                            break Some(id);
                        }
                    }
                },
            };
            let Some(x) = next else { break };
            chart.stats.pops += 1;
            chart.finalized[x.0 as usize] = true;
            if strategy == Strategy::BestFirst && goal_cutoff.is_none() && chart.is_goal(x) {
                goal_cutoff = chart.weights[x.0 as usize];
            }
            chart.expand(x, &mut idx, &mut agenda)?;
        }

        match strategy {
            Strategy::Exhaustive => {
                chart.closed = true;
                chart.solve_weights();
            }
            Strategy::BestFirst => {
                chart.closed = goal_cutoff.is_none();
            }
        }
        chart.stats.items = chart.items.len();
        chart.stats.edges = chart.edges.len();
        Ok(chart)
    }

    /// Interns the head item, records the edge and, in best-first mode, relaxes the head.
    fn add_edge(
        &mut self,
        item: Item,
        mut edge: Hyperedge,
        weight: Option<Weight>,
        agenda: &mut Agenda,
    ) -> Result<(), EngineError> {
        let key = (item.tree, item.region.clone());
        let id = match self.index.get(&key) {
            Some(&id) => id,
            None => {
                if self.items.len() >= self.config.max_items {
                    return Err(EngineError::BoundExceeded { bound: "max_items", limit: self.config.max_items });
                }
                let id = ItemId(self.items.len() as u32);
                self.items.push(item);
                self.index.insert(key, id);
                self.incoming.push(Vec::new());
                self.weights.push(None);
                self.finalized.push(false);
                if let Agenda::Fifo(q) = agenda {
                    q.push_back(id);
                }
                id
            }
        };
        edge.head = id;
        self.incoming[id.0 as usize].push(EdgeId(self.edges.len() as u32));
        self.edges.push(edge);
        if let (Agenda::Heap(h), Some(w)) = (agenda, weight) {
            let slot = &mut self.weights[id.0 as usize];
            if !self.finalized[id.0 as usize] && slot.is_none_or(|old| w < old) {
                *slot = Some(w);
                h.push(Reverse((w, id)));
            }
        }
        Ok(())
    }

    fn expand(&mut self, x: ItemId, idx: &mut Indexes, agenda: &mut Agenda) -> Result<(), EngineError> {
        let span = self.items[x.0 as usize].region.span;
        idx.by_span.entry(span).or_default().push(x);
        if self.items[x.0 as usize].arity() > 0 {
            self.combine(x, None, idx, agenda)?;
        }
        let parents = idx.parents_by_hole.get(&span).cloned().unwrap_or_default();
        for (p, slot) in parents {
            if p != x {
                self.combine(p, Some((slot, x)), idx, agenda)?;
            }
        }
        for (i, h) in self.items[x.0 as usize].region.holes.clone().into_iter().enumerate() {
            idx.parents_by_hole.entry(h).or_default().push((x, i));
        }
        Ok(())
    }

    /// Every Complete-Rep application with `parent` whose premises are all
    /// final. With `fixed = (i, x)`, `x` sits at slot `i` and nowhere before it.
    fn combine(
        &mut self,
        parent: ItemId,
        fixed: Option<(usize, ItemId)>,
        idx: &Indexes,
        agenda: &mut Agenda,
    ) -> Result<(), EngineError> {
        let p = &self.items[parent.0 as usize];
        let k = p.arity();
        let limit = self.config.tree_size_limit(self.seq.len());
        let mut candidates: Vec<Vec<ItemId>> = Vec::with_capacity(k);
        for (j, hole) in p.region.holes.iter().enumerate() {
            let wanted: SmallVec<[NonterminalId; 8]> = {
                let mut v: SmallVec<[NonterminalId; 8]> = p.types.iter().map(|t| t.args[j]).collect();
                v.sort();
                v.dedup();
                v
            };
            let fits = |c: &ItemId| self.items[c.0 as usize].heads().any(|h| wanted.binary_search(&h).is_ok());
            let list: Vec<ItemId> = match fixed {
                Some((i, x)) if i == j => vec![x],
                Some((i, x)) if j < i => {
                    idx.by_span.get(hole).into_iter().flatten().copied().filter(|&c| c != x).filter(fits).collect()
                }
                _ => idx.by_span.get(hole).into_iter().flatten().copied().filter(fits).collect(),
            };
            if list.is_empty() {
                return Ok(());
            }
            candidates.push(list);
        }

        let base_size = self.trees.size(p.tree);
        let mut tuples: Vec<SmallVec<[ItemId; 3]>> = Vec::new();
        let mut acc: SmallVec<[ItemId; 3]> = SmallVec::new();
        let mut pruned = (0usize, 0usize);
        self.collect_tuples(&candidates, base_size, 0, limit, &mut acc, &mut tuples, &mut pruned);
        self.stats.pruned_size += pruned.0;
        self.stats.pruned_holes += pruned.1;

        for kids in tuples {
            let p = &self.items[parent.0 as usize];
            let children: SmallVec<[&Item; 3]> = kids.iter().map(|c| &self.items[c.0 as usize]).collect();
            let types = merge_types(p, &children);
            if types.is_empty() {
                continue;
            }
            let Some(region) = merge_region(p, &children) else { continue };
            let parent_tree = p.tree;
            let child_trees: SmallVec<[TreeId; 3]> = children.iter().map(|c| c.tree).collect();
            drop(children);
            let tree = self.trees.plug(parent_tree, &child_trees);
            let head = Item { tree, region, types };
            for comb in compatible_combinators(parent_tree, &child_trees, self.config.combinators) {
                let weight = match self.strategy {
                    Strategy::BestFirst => {
                        let wp = self.weights[parent.0 as usize].expect("final parent");
                        let wc: SmallVec<[Weight; 3]> =
                            kids.iter().map(|c| self.weights[c.0 as usize].expect("final child")).collect();
                        Some(merge_weight(&comb, wp, &wc))
                    }
                    Strategy::Exhaustive => None,
                };
                let edge = Hyperedge {
                    head: ItemId(0),
                    rule: Rule::CompleteRep,
                    parent: Some(parent),
                    children: kids.clone(),
                    comb: Some(comb),
                };
                self.add_edge(head.clone(), edge, weight, agenda)?;
            }
        }
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn collect_tuples(
        &self,
        candidates: &[Vec<ItemId>],
        size: usize,
        holes: usize,
        limit: usize,
        acc: &mut SmallVec<[ItemId; 3]>,
        out: &mut Vec<SmallVec<[ItemId; 3]>>,
        pruned: &mut (usize, usize),
    ) {
        let j = acc.len();
        if j == candidates.len() {
            out.push(acc.clone());
            return;
        }
        for &c in &candidates[j] {
            let t = self.items[c.0 as usize].tree;
            let s = size + self.trees.size(t);
            let h = holes + self.trees.holes(t);
            if s > limit {
                pruned.0 += 1;
                continue;
            }
            if h > self.config.max_holes {
                pruned.1 += 1;
                continue;
            }
            acc.push(c);
            self.collect_tuples(candidates, s, h, limit, acc, out, pruned);
            acc.pop();
        }
    }

    /// Weights of a closed chart in order of increasing tree size; every
    /// premise of an edge has a strictly smaller tree than its head.
    fn solve_weights(&mut self) {
        let mut order: Vec<ItemId> = (0..self.items.len() as u32).map(ItemId).collect();
        order.sort_by_key(|id| (self.trees.size(self.items[id.0 as usize].tree), *id));
        for id in order {
            let w = self.incoming[id.0 as usize].iter().filter_map(|&e| self.edge_weight(e)).min();
            self.weights[id.0 as usize] = w;
        }
    }

    /// `None` while some premise is still unweighted.
    pub fn edge_weight(&self, e: EdgeId) -> Option<Weight> {
        let edge = &self.edges[e.0 as usize];
        match (&edge.parent, &edge.comb) {
            (Some(p), Some(comb)) => {
                let wp = self.weights[p.0 as usize]?;
                let wc = edge.children.iter().map(|c| self.weights[c.0 as usize]).collect::<Option<Vec<_>>>()?;
                Some(merge_weight(comb, wp, &wc))
            }
            _ => Some(Weight(1)),
        }
    }

    pub fn grammar(&self) -> &Grammar {
        &self.grammar
    }

    pub fn sequence(&self) -> &[TerminalId] {
        &self.seq
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn strategy(&self) -> Strategy {
        self.strategy
    }

    pub fn stats(&self) -> &ChartStats {
        &self.stats
    }

    /// True when the chart was run to closure (every derivable item and hyperedge is present).
    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn item(&self, id: ItemId) -> &Item {
        &self.items[id.0 as usize]
    }

    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Hyperedge {
        &self.edges[id.0 as usize]
    }

    pub fn incoming(&self, id: ItemId) -> &[EdgeId] {
        &self.incoming[id.0 as usize]
    }

    pub fn trees(&self) -> &TreeStore {
        &self.trees
    }

    /// Final weight; `None` for items a best-first run never settled.
    pub fn weight(&self, id: ItemId) -> Option<Weight> {
        match self.strategy {
            Strategy::Exhaustive => self.weights[id.0 as usize],
            Strategy::BestFirst => self.weights[id.0 as usize].filter(|_| self.finalized[id.0 as usize]),
        }
    }

    pub fn tree(&self, id: ItemId) -> CompTree {
        self.trees.to_comp_tree(self.items[id.0 as usize].tree, &self.grammar)
    }

    pub fn find(&self, tree: TreeId, region: &IntervalType) -> Option<ItemId> {
        self.index.get(&(tree, region.clone())).copied()
    }

    pub fn is_goal(&self, id: ItemId) -> bool {
        let item = &self.items[id.0 as usize];
        item.region.holes.is_empty()
            && item.region.span == Interval::new(0, self.seq.len())
            && item.has_head(self.grammar.start())
    }

    pub fn goals(&self) -> Vec<ItemId> {
        (0..self.items.len() as u32).map(ItemId).filter(|&id| self.is_goal(id)).collect()
    }

    /// The lightest settled goal (lowest id on ties).
    pub fn best_goal(&self) -> Option<ItemId> {
        self.goals().into_iter().filter_map(|g| self.weight(g).map(|w| (w, g))).min().map(|(_, g)| g)
    }

    pub fn goal_weight(&self) -> Option<Weight> {
        self.best_goal().and_then(|g| self.weight(g))
    }

    /// Checks that every settled weight equals the minimum over its recorded hyperedges.
    pub fn verify_weights(&self) -> Result<(), String> {
        for id in (0..self.items.len() as u32).map(ItemId) {
            let Some(w) = self.weight(id) else { continue };
            let best = self.incoming(id).iter().filter_map(|&e| self.edge_weight(e)).min();
            if best != Some(w) {
                return Err(format!("item {} has weight {w} but its edges give {best:?}", id.0));
            }
        }
        Ok(())
    }
}
