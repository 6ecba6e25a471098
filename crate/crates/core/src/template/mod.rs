//! The Template language: relations, repetition combinators, programs and
//! the relation trees they evaluate to.
//!
//! A program is built from three forms:
//!
//! ```text
//! e ::= Id | Pure r | Rep e m [e]
//! m ::= <s ...>        s ::= _ | i | *
//! ```
//!
//! `Rep e m es` plugs one program per hole of `e`; the combinator decides for
//! each hole whether it takes the next free child (`_`), repeats the program
//! given to an earlier free slot (`i`), or repeats `e` itself (`*`). Size is
//! `|e| + 1 + Σ|es|`, so every repetition saves the size of what it copies.

mod combinator;
mod expr;
mod tree;

use std::fmt;

use thiserror::Error;

pub use combinator::{Combinator, Slot};
pub use expr::{size, use_rep, TemplateExpr};
pub use tree::{CompTree, Frontier};

use crate::Symbol;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("combinator has {found} slots but the head program has arity {expected}")]
    CombinatorArity { expected: usize, found: usize },
    #[error("combinator has {expected} free slots but {found} child programs were given")]
    FreeChildCount { expected: usize, found: usize },
    #[error("slot {slot} refers to slot {target}, which is not an earlier free slot")]
    RefTarget { slot: usize, target: usize },
    #[error("a repetition needs at least one slot")]
    EmptyCombinator,
    #[error("unrecognised combinator slot `{0}`")]
    BadSlot(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    /// Relates a head to `arity` child nonterminals.
    Internal,
    /// Emits one terminal; has no children.
    Termination,
}

/// A relation symbol. Its typed instances (which heads and children it may
/// relate) live in the grammar; trees and programs only mention the symbol.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    name: Symbol,
    arity: usize,
}

impl Relation {
    pub fn new(name: impl Into<Symbol>, arity: usize) -> Self {
        Relation { name: name.into(), arity }
    }

    pub fn name(&self) -> &Symbol {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kind(&self) -> RelationKind {
        if self.arity == 0 {
            RelationKind::Termination
        } else {
            RelationKind::Internal
        }
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// A complete context-free derivation, read as a tree of relation symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub relation: Relation,
    pub children: Vec<Derivation>,
}

impl Derivation {
    pub fn leaf(relation: Relation) -> Self {
        Derivation { relation, children: Vec::new() }
    }

    pub fn node(relation: Relation, children: Vec<Derivation>) -> Self {
        Derivation { relation, children }
    }

    pub fn internal_count(&self) -> usize {
        if self.children.is_empty() {
            0
        } else {
            1 + self.children.iter().map(Derivation::internal_count).sum::<usize>()
        }
    }

    pub fn leaf_count(&self) -> usize {
        if self.children.is_empty() {
            1
        } else {
            self.children.iter().map(Derivation::leaf_count).sum()
        }
    }

    pub fn to_tree(&self) -> CompTree {
        CompTree::Node(self.relation.clone(), self.children.iter().map(Derivation::to_tree).collect())
    }
}

/// The canonical embedding: every internal node becomes a trivial repeat
/// `Rep (Pure r) <_ .. _> children`, every leaf `Pure r`.
pub fn embed_derivation(d: &Derivation) -> TemplateExpr {
    if d.children.is_empty() {
        return TemplateExpr::Pure(d.relation.clone());
    }
    TemplateExpr::rep_unchecked(
        TemplateExpr::Pure(d.relation.clone()),
        Combinator::all_free(d.children.len()),
        d.children.iter().map(embed_derivation).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embed_leaf_and_binary() {
        let a = Relation::new("a", 0);
        let b = Relation::new("b", 0);
        let g = Relation::new("g", 2);
        let leaf = Derivation::leaf(a.clone());
        assert_eq!(embed_derivation(&leaf), TemplateExpr::Pure(a.clone()));
        assert_eq!(embed_derivation(&leaf).size(), 1);

        let d = Derivation::node(g.clone(), vec![Derivation::leaf(a.clone()), Derivation::leaf(b.clone())]);
        let e = embed_derivation(&d);
        assert_eq!(e.to_string(), "Rep (Pure g) <_ _> [Pure a, Pure b]");
        assert_eq!(e.size(), 4);
        assert_eq!(e.size(), 2 * d.internal_count() + d.leaf_count());
        assert_eq!(e.evaluate().unwrap(), d.to_tree());
    }
}
