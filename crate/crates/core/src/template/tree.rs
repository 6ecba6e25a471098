use std::fmt;

use super::Relation;

/// A relation tree whose leaves are termination relations or holes.
///
/// Nodes carry relation symbols, not typed instances: the same tree may be
/// instantiated at several computation types.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompTree {
    Hole,
    Node(Relation, Vec<CompTree>),
}

/// One element of a tree's frontier, read left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Frontier {
    Leaf(Relation),
    Hole,
}

impl CompTree {
    pub fn leaf(rel: Relation) -> Self {
        CompTree::Node(rel, Vec::new())
    }

    /// `Node(r, [Hole; arity(r)])`.
    pub fn primitive(rel: Relation) -> Self {
        let holes = vec![CompTree::Hole; rel.arity()];
        CompTree::Node(rel, holes)
    }

    /// Number of hole leaves.
    pub fn arity(&self) -> usize {
        match self {
            CompTree::Hole => 1,
            CompTree::Node(_, ch) => ch.iter().map(CompTree::arity).sum(),
        }
    }

    /// Number of relation nodes; holes do not count.
    pub fn size(&self) -> usize {
        match self {
            CompTree::Hole => 0,
            CompTree::Node(_, ch) => 1 + ch.iter().map(CompTree::size).sum::<usize>(),
        }
    }

    /// Leaves and holes in order.
    pub fn frontier(&self) -> Vec<Frontier> {
        let mut out = Vec::new();
        self.frontier_into(&mut out);
        out
    }

    fn frontier_into(&self, out: &mut Vec<Frontier>) {
        match self {
            CompTree::Hole => out.push(Frontier::Hole),
            CompTree::Node(r, ch) if ch.is_empty() => out.push(Frontier::Leaf(r.clone())),
            CompTree::Node(_, ch) => ch.iter().for_each(|c| c.frontier_into(out)),
        }
    }

    /// Replaces the holes left to right with `fillers`. Extra fillers are an error.
    pub fn plug(&self, fillers: &[CompTree]) -> Option<CompTree> {
        let mut it = fillers.iter();
        let out = self.plug_rec(&mut it);
        match (out, it.next()) {
            (Some(t), None) => Some(t),
            _ => None,
        }
    }

    fn plug_rec<'a>(&self, it: &mut impl Iterator<Item = &'a CompTree>) -> Option<CompTree> {
        match self {
            CompTree::Hole => it.next().cloned(),
            CompTree::Node(r, ch) => {
                let mut out = Vec::with_capacity(ch.len());
                for c in ch {
                    out.push(c.plug_rec(it)?);
                }
                Some(CompTree::Node(r.clone(), out))
            }
        }
    }

    /// Checks that every node has exactly as many children as its relation's arity.
    pub fn is_well_formed(&self) -> bool {
        match self {
            CompTree::Hole => true,
            CompTree::Node(r, ch) => ch.len() == r.arity() && ch.iter().all(CompTree::is_well_formed),
        }
    }
}

impl fmt::Display for CompTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompTree::Hole => f.write_str("□"),
            CompTree::Node(r, ch) if ch.is_empty() => write!(f, "{}", r.name()),
            CompTree::Node(r, ch) => {
                write!(f, "{}(", r.name())?;
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for CompTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
