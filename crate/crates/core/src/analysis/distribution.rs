//! Counting programs by size.
//!
//! Counts cannot come from a plain semiring over weights: whether a child
//! is paid for depends on the combinator of the edge, i.e. on the proof.
//! Instead each item carries a polynomial `size -> count` and each edge
//! multiplies the parent's polynomial with those of its free children and
//! shifts by one for the combinator.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::AnalysisError;
use crate::engine::{Chart, ItemId, Rule};

/// Number of programs of each size. Exact.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SizeDistribution {
    pub counts: BTreeMap<usize, BigUint>,
}

impl SizeDistribution {
    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn min_size(&self) -> Option<usize> {
        self.counts.keys().next().copied()
    }

    pub fn count(&self, size: usize) -> BigUint {
        self.counts.get(&size).cloned().unwrap_or_default()
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.counts.iter().map(|(&s, c)| (s, c))
    }
}

impl fmt::Display for SizeDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(s, c)| format!("{s}: {c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Dense polynomial: index is program size.
type Poly = Vec<BigUint>;

fn mul(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
        for (j, y) in b.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
            out[i + j] += x * y;
        }
    }
    out
}

fn add_into(acc: &mut Poly, p: &Poly) {
    if acc.len() < p.len() {
        acc.resize(p.len(), BigUint::zero());
    }
    for (a, x) in acc.iter_mut().zip(p) {
        *a += x;
    }
}

/// Size distribution over every program deriving any goal item.
pub fn size_distribution(chart: &Chart) -> Result<SizeDistribution, AnalysisError> {
    if !chart.is_closed() {
        return Err(AnalysisError::NotClosed);
    }
    let order = topological(chart)?;
    let mut polys: Vec<Option<Poly>> = vec![None; chart.items().len()];
    let unit: Poly = vec![BigUint::zero(), BigUint::one()];
    let shift: Poly = unit.clone();
    for q in order {
        let mut acc = Poly::new();
        for &e in chart.incoming(q) {
            let edge = chart.edge(e);
            let p = match edge.rule {
                Rule::ScanRel | Rule::PrimRel => unit.clone(),
                Rule::CompleteRep => {
                    let parent = edge.parent.expect("parent");
                    let mut p = mul(polys[parent.0 as usize].as_ref().expect("parent counted first"), &shift);
                    for c in edge.free_children() {
                        p = mul(&p, polys[c.0 as usize].as_ref().expect("child counted first"));
                    }
                    p
                }
            };
            add_into(&mut acc, &p);
        }
        polys[q.0 as usize] = Some(acc);
    }
    let mut total = Poly::new();
    for g in chart.goals() {
        add_into(&mut total, polys[g.0 as usize].as_ref().expect("goal counted"));
    }
    let counts = total.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
    Ok(SizeDistribution { counts })
}

/// Items in dependency order (premises first), or the item that closes a cycle.
fn topological(chart: &Chart) -> Result<Vec<ItemId>, AnalysisError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let n = chart.items().len();
    let mut mark = vec![Mark::New; n];
    let mut order = Vec::with_capacity(n);
    let premises = |q: ItemId| -> Vec<ItemId> {
        chart
            .incoming(q)
            .iter()
            .flat_map(|&e| {
                let edge = chart.edge(e);
                edge.parent.into_iter().chain(edge.children.iter().copied()).collect::<Vec<_>>()
            })
            .collect()
    };
    for root in (0..n as u32).map(ItemId) {
        if mark[root.0 as usize] != Mark::New {
            continue;
        }
        // iterative DFS: (item, its premises, next index)
        let mut stack = vec![(root, premises(root), 0usize)];
        mark[root.0 as usize] = Mark::Open;
        while let Some((q, ps, i)) = stack.last_mut() {
            if *i == ps.len() {
                mark[q.0 as usize] = Mark::Done;
                order.push(*q);
                stack.pop();
                continue;
            }
            let p = ps[*i];
            *i += 1;
            match mark[p.0 as usize] {
                Mark::Done => {}
                Mark::Open => return Err(AnalysisError::Cycle(format!("{} {}", p.0, chart.tree(p)))),
                Mark::New => {
                    mark[p.0 as usize] = Mark::Open;
                    let next = premises(p);
                    stack.push((p, next, 0));
                }
            }
        }
    }
    Ok(order)
}
