//! The minimal sub-hypergraph and the programs it encodes.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::AnalysisError;
use crate::engine::{Chart, EdgeId, ItemId, Rule, Weight};
use crate::template::TemplateExpr;

/// Hyperedges that lie on at least one minimal derivation of a goal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalGraph {
    pub weight: Weight,
    /// Goal items of minimal weight, ascending.
    pub goals: Vec<ItemId>,
    /// Tight edges reachable from the goals, ascending by insertion index.
    pub edges: Vec<EdgeId>,
    /// Items whose programs are paid for in some minimal derivation.
    pub items: BTreeSet<ItemId>,
}

impl MinimalGraph {
    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.binary_search(&e).is_ok()
    }
}

/// Edges into `q` that achieve its weight, in insertion order.
fn tight_edges(chart: &Chart, q: ItemId) -> impl Iterator<Item = EdgeId> + '_ {
    let w = chart.weight(q);
    chart.incoming(q).iter().copied().filter(move |&e| w.is_some() && chart.edge_weight(e) == w)
}

/// Walks backward from the minimal goals, keeping only tight edges.
pub fn extract_minimal(chart: &Chart) -> Result<MinimalGraph, AnalysisError> {
    let weight = chart.goal_weight().ok_or(AnalysisError::NoParse)?;
    let goals: Vec<ItemId> = chart.goals().into_iter().filter(|&g| chart.weight(g) == Some(weight)).collect();
    let mut items: BTreeSet<ItemId> = goals.iter().copied().collect();
    let mut edges = BTreeSet::new();
    let mut queue: VecDeque<ItemId> = goals.iter().copied().collect();
    while let Some(q) = queue.pop_front() {
        for e in tight_edges(chart, q) {
            edges.insert(e);
            let edge = chart.edge(e);
            for p in edge.parent.into_iter().chain(edge.free_children()) {
                if items.insert(p) {
                    queue.push_back(p);
                }
            }
        }
    }
    Ok(MinimalGraph { weight, goals, edges: edges.into_iter().collect(), items })
}

/// Up to `limit` distinct minimal programs, in a fixed order: goals
/// ascending, then edges by insertion index, then lexicographically over
/// the parent's and free children's own lists.
pub fn enumerate_minimal(chart: &Chart, sub: &MinimalGraph, limit: usize) -> Vec<TemplateExpr> {
    if limit == 0 {
        return Vec::new();
    }
    let mut memo: HashMap<ItemId, Vec<TemplateExpr>> = HashMap::new();
    let mut out = Vec::new();
    for &g in &sub.goals {
        let list = programs(chart, sub, g, limit, &mut memo);
        out.extend(list.iter().take(limit - out.len()).cloned());
        if out.len() >= limit {
            break;
        }
    }
    out
}

fn programs<'m>(
    chart: &Chart,
    sub: &MinimalGraph,
    q: ItemId,
    limit: usize,
    memo: &'m mut HashMap<ItemId, Vec<TemplateExpr>>,
) -> &'m [TemplateExpr] {
    if !memo.contains_key(&q) {
        let mut list = Vec::new();
        for e in tight_edges(chart, q).filter(|&e| sub.contains_edge(e)).collect::<Vec<_>>() {
            if list.len() >= limit {
                break;
            }
            let edge = chart.edge(e).clone();
            match edge.rule {
                Rule::ScanRel | Rule::PrimRel => list.push(pure_of(chart, q)),
                Rule::CompleteRep => {
                    let comb = edge.comb.clone().expect("complete-rep edge carries a combinator");
                    let mut factors: Vec<Vec<TemplateExpr>> = Vec::new();
                    for p in edge.parent.into_iter().chain(edge.free_children()) {
                        factors.push(programs(chart, sub, p, limit, memo).to_vec());
                    }
                    for_each_product(&factors, &mut Vec::new(), &mut |parts| {
                        if list.len() >= limit {
                            return false;
                        }
                        let (head, free) = parts.split_first().expect("parent factor");
                        list.push(TemplateExpr::rep_unchecked(head.clone(), comb.clone(), free.to_vec()));
                        true
                    });
                }
            }
        }
        memo.insert(q, list);
    }
    &memo[&q]
}

/// Visits the cartesian product, first factor varying slowest; the callback
/// returns `false` to stop.
fn for_each_product(
    factors: &[Vec<TemplateExpr>],
    acc: &mut Vec<TemplateExpr>,
    f: &mut dyn FnMut(&[TemplateExpr]) -> bool,
) -> bool {
    let Some((first, rest)) = factors.split_first() else {
        return f(acc);
    };
    for x in first {
        acc.push(x.clone());
        let go_on = for_each_product(rest, acc, f);
        acc.pop();
        if !go_on {
            return false;
        }
    }
    true
}

fn pure_of(chart: &Chart, q: ItemId) -> TemplateExpr {
    let tree = chart.item(q).tree;
    let rel = chart.trees().rel(tree).expect("axiom items are relation nodes");
    TemplateExpr::pure(chart.grammar().relation(rel).clone())
}

/// A minimal program that uses edge `e`, or `None` if `e` is not in `sub`.
pub fn witness(chart: &Chart, sub: &MinimalGraph, e: EdgeId) -> Option<TemplateExpr> {
    if !sub.contains_edge(e) {
        return None;
    }
    // how each item was first reached from a goal
    let mut reached: HashMap<ItemId, EdgeId> = HashMap::new();
    let mut queue: VecDeque<ItemId> = sub.goals.iter().copied().collect();
    let mut seen: BTreeSet<ItemId> = queue.iter().copied().collect();
    while let Some(q) = queue.pop_front() {
        for d in tight_edges(chart, q).filter(|&d| sub.contains_edge(d)) {
            let edge = chart.edge(d);
            for p in edge.parent.into_iter().chain(edge.free_children()) {
                if seen.insert(p) {
                    reached.insert(p, d);
                    queue.push_back(p);
                }
            }
        }
    }
    let mut forced: HashMap<ItemId, EdgeId> = HashMap::new();
    let mut q = chart.edge(e).head;
    forced.insert(q, e);
    while let Some(&d) = reached.get(&q) {
        q = chart.edge(d).head;
        forced.insert(q, d);
    }
    Some(build(chart, sub, q, &forced))
}

fn build(chart: &Chart, sub: &MinimalGraph, q: ItemId, forced: &HashMap<ItemId, EdgeId>) -> TemplateExpr {
    let e = forced
        .get(&q)
        .copied()
        .or_else(|| tight_edges(chart, q).find(|&d| sub.contains_edge(d)))
        .expect("every item in the minimal graph has a tight edge");
    let edge = chart.edge(e);
    match edge.rule {
        Rule::ScanRel | Rule::PrimRel => pure_of(chart, q),
        Rule::CompleteRep => {
            let head = build(chart, sub, edge.parent.expect("parent"), forced);
            let free = edge.free_children().map(|c| build(chart, sub, c, forced)).collect();
            TemplateExpr::rep_unchecked(head, edge.comb.clone().expect("combinator"), free)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{forward_chain, EngineConfig};
    use crate::grammar::{Grammar, GrammarDef, RelationDef, TerminationDef};

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

    #[test]
    fn sharing_toy_has_one_minimal_program() {
        let g = toy(&["A", "A"]);
        let chart = forward_chain(&g, &g.tokenize(&["a", "a"]).unwrap(), &EngineConfig::default()).unwrap();
        let sub = extract_minimal(&chart).unwrap();
        assert_eq!(sub.weight, Weight(3));
        let all = enumerate_minimal(&chart, &sub, usize::MAX);
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].to_string(), "Rep (Pure g) <_ 0> [Pure a]");
        assert!(enumerate_minimal(&chart, &sub, 0).is_empty());
        for &e in &sub.edges {
            assert_eq!(witness(&chart, &sub, e).unwrap().size(), 3);
        }
    }

    #[test]
    fn distinct_leaves() {
        let g = toy(&["A", "B"]);
        let chart = forward_chain(&g, &g.tokenize(&["a", "b"]).unwrap(), &EngineConfig::default()).unwrap();
        let sub = extract_minimal(&chart).unwrap();
        let all = enumerate_minimal(&chart, &sub, 10);
        assert_eq!(all.iter().map(ToString::to_string).collect::<Vec<_>>(), ["Rep (Pure g) <_ _> [Pure a, Pure b]"]);
    }

    #[test]
    fn single_token_is_one_axiom() {
        let g = toy(&["A", "B"]);
        let g = Grammar::from_def(&GrammarDef { start: "A".into(), ..g.to_def() }).unwrap();
        let chart = forward_chain(&g, &g.tokenize(&["a"]).unwrap(), &EngineConfig::default()).unwrap();
        let sub = extract_minimal(&chart).unwrap();
        assert_eq!(sub.edges.len(), 1);
        assert_eq!(chart.edge(sub.edges[0]).rule, Rule::ScanRel);
    }

    #[test]
    fn no_goal() {
        let g = toy(&["A", "A"]);
        let chart = forward_chain(&g, &g.tokenize(&["a", "b"]).unwrap(), &EngineConfig::default()).unwrap();
        assert_eq!(extract_minimal(&chart).unwrap_err(), AnalysisError::NoParse);
    }
}
