//! Hash-consed relation trees. Two trees are equal iff their ids are equal.

use std::collections::HashMap;

use smallvec::SmallVec;

use crate::grammar::{Grammar, RelId};
use crate::template::CompTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeId(pub u32);

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Node {
    rel: Option<RelId>,
    children: SmallVec<[TreeId; 2]>,
}

#[derive(Clone, Copy, Debug)]
struct Meta {
    size: u32,
    holes: u32,
    leaves: u32,
}

/// Interning table for trees over relation ids. Engine-local.
#[derive(Clone, Debug)]
pub struct TreeStore {
    nodes: Vec<Node>,
    meta: Vec<Meta>,
    index: HashMap<Node, TreeId>,
}

impl Default for TreeStore {
    fn default() -> Self {
        Self::new()
    }
}

impl TreeStore {
    pub const HOLE: TreeId = TreeId(0);

    pub fn new() -> Self {
        let hole = Node { rel: None, children: SmallVec::new() };
        let mut index = HashMap::new();
        index.insert(hole.clone(), Self::HOLE);
        TreeStore { nodes: vec![hole], meta: vec![Meta { size: 0, holes: 1, leaves: 0 }], index }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&mut self, rel: RelId, children: &[TreeId]) -> TreeId {
        let key = Node { rel: Some(rel), children: SmallVec::from_slice(children) };
        if let Some(&id) = self.index.get(&key) {
            return id;
        }
        let meta = if children.is_empty() {
            Meta { size: 1, holes: 0, leaves: 1 }
        } else {
            children.iter().fold(Meta { size: 1, holes: 0, leaves: 0 }, |m, c| {
                let cm = self.meta[c.0 as usize];
                Meta { size: m.size + cm.size, holes: m.holes + cm.holes, leaves: m.leaves + cm.leaves }
            })
        };
        let id = TreeId(self.nodes.len() as u32);
        self.nodes.push(key.clone());
        self.meta.push(meta);
        self.index.insert(key, id);
        id
    }

    /// `Node(rel, [Hole; arity])`.
    pub fn primitive(&mut self, rel: RelId, arity: usize) -> TreeId {
        let holes: SmallVec<[TreeId; 2]> = SmallVec::from_elem(Self::HOLE, arity);
        self.node(rel, &holes)
    }

    /// Relation nodes in the tree (holes excluded).
    pub fn size(&self, t: TreeId) -> usize {
        self.meta[t.0 as usize].size as usize
    }

    pub fn holes(&self, t: TreeId) -> usize {
        self.meta[t.0 as usize].holes as usize
    }

    /// Termination leaves.
    pub fn leaves(&self, t: TreeId) -> usize {
        self.meta[t.0 as usize].leaves as usize
    }

    pub fn rel(&self, t: TreeId) -> Option<RelId> {
        self.nodes[t.0 as usize].rel
    }

    pub fn children(&self, t: TreeId) -> &[TreeId] {
        &self.nodes[t.0 as usize].children
    }

    /// Fills the holes of `t` left to right with `fillers`.
    pub fn plug(&mut self, t: TreeId, fillers: &[TreeId]) -> TreeId {
        debug_assert_eq!(self.holes(t), fillers.len());
        let mut next = 0;
        let out = self.plug_rec(t, fillers, &mut next);
        debug_assert_eq!(next, fillers.len());
        out
    }

    fn plug_rec(&mut self, t: TreeId, fillers: &[TreeId], next: &mut usize) -> TreeId {
        if t == Self::HOLE {
            let f = fillers[*next];
            *next += 1;
            return f;
        }
        if self.holes(t) == 0 {
            return t;
        }
        let node = self.nodes[t.0 as usize].clone();
        let children: SmallVec<[TreeId; 2]> = node.children.iter().map(|&c| self.plug_rec(c, fillers, next)).collect();
        self.node(node.rel.expect("non-hole node"), &children)
    }

    pub fn to_comp_tree(&self, t: TreeId, grammar: &Grammar) -> CompTree {
        let node = &self.nodes[t.0 as usize];
        match node.rel {
            None => CompTree::Hole,
            Some(r) => CompTree::Node(
                grammar.relation(r).clone(),
                node.children.iter().map(|&c| self.to_comp_tree(c, grammar)).collect(),
            ),
        }
    }

    /// Interns a tree given over relation symbols; `None` if a relation is not in `grammar`.
    pub fn intern(&mut self, tree: &CompTree, grammar: &Grammar) -> Option<TreeId> {
        match tree {
            CompTree::Hole => Some(Self::HOLE),
            CompTree::Node(r, ch) => {
                let id = grammar.relation_id(r.name().as_str())?;
                if grammar.relation(id).arity() != ch.len() {
                    return None;
                }
                let kids = ch.iter().map(|c| self.intern(c, grammar)).collect::<Option<Vec<_>>>()?;
                Some(self.node(id, &kids))
            }
        }
    }
}
