//! Checking relation trees against a grammar and a token sequence.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{Grammar, InstanceBody, NonterminalId, RelId, TerminalId};
use crate::template::{CompTree, TemplateError};
use crate::Symbol;

/// Why a tree (or the program that produced it) does not explain a sequence.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Reject {
    #[error("malformed template: {0}")]
    Malformed(#[from] TemplateError),
    #[error("template has {0} unfilled holes")]
    OpenTemplate(usize),
    #[error("relation `{0}` is not in the grammar")]
    UnknownRelation(String),
    #[error("yield mismatch: {0}")]
    YieldMismatch(String),
    #[error("no consistent typing of the relation tree")]
    IllTyped,
    #[error("start-symbol mismatch: root can only be {0}")]
    StartMismatch(String),
}

/// Set of nonterminals a subtree can be headed by.
pub type TypeSet = BTreeSet<NonterminalId>;

/// An element of a tree's surface string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum YieldSym {
    Token(Symbol),
    Hole,
}

impl Grammar {
    fn rel_of(&self, tree_rel: &crate::template::Relation) -> Result<RelId, Reject> {
        match self.relation_id(tree_rel.name().as_str()) {
            Some(id) if self.relation(id).arity() == tree_rel.arity() => Ok(id),
            _ => Err(Reject::UnknownRelation(tree_rel.name().to_string())),
        }
    }

    /// Heads a hole-free tree can take when its leaves emit exactly `seq`.
    pub fn root_heads(&self, tree: &CompTree, seq: &[TerminalId]) -> Result<TypeSet, Reject> {
        let holes = tree.arity();
        if holes > 0 {
            return Err(Reject::OpenTemplate(holes));
        }
        let mut pos = 0;
        let heads = self.heads_at(tree, seq, &mut pos)?;
        if pos != seq.len() {
            return Err(Reject::YieldMismatch(format!(
                "tree has {pos} leaves, sequence has {} tokens",
                seq.len()
            )));
        }
        Ok(heads)
    }

    fn heads_at(&self, tree: &CompTree, seq: &[TerminalId], pos: &mut usize) -> Result<TypeSet, Reject> {
        let CompTree::Node(rel, children) = tree else {
            return Err(Reject::OpenTemplate(1));
        };
        let id = self.rel_of(rel)?;
        if children.is_empty() {
            let Some(&tok) = seq.get(*pos) else {
                return Err(Reject::YieldMismatch(format!(
                    "tree has more leaves than the {} tokens of the sequence",
                    seq.len()
                )));
            };
            let heads: TypeSet = self
                .instances_of(id)
                .filter(|i| i.body == InstanceBody::Terminal(tok))
                .map(|i| i.head)
                .collect();
            if heads.is_empty() {
                return Err(Reject::YieldMismatch(format!(
                    "leaf `{}` cannot emit `{}` at position {}",
                    rel.name(),
                    self.terminal_name(tok),
                    *pos
                )));
            }
            *pos += 1;
            return Ok(heads);
        }
        let child_sets = children
            .iter()
            .map(|c| self.heads_at(c, seq, pos))
            .collect::<Result<Vec<_>, _>>()?;
        let heads: TypeSet = self
            .instances_of(id)
            .filter(|i| match &i.body {
                InstanceBody::Children(cs) => cs.iter().zip(&child_sets).all(|(c, set)| set.contains(c)),
                InstanceBody::Terminal(_) => false,
            })
            .map(|i| i.head)
            .collect();
        if heads.is_empty() {
            return Err(Reject::IllTyped);
        }
        Ok(heads)
    }

    /// Accepts iff the tree explains `seq` with the start symbol at the root.
    pub fn check_tree(&self, tree: &CompTree, seq: &[TerminalId]) -> Result<(), Reject> {
        let heads = self.root_heads(tree, seq)?;
        if heads.contains(&self.start()) {
            Ok(())
        } else {
            let names: Vec<_> = heads.iter().map(|&h| self.nonterminal_name(h).to_string()).collect();
            Err(Reject::StartMismatch(names.join(", ")))
        }
    }

    /// Heads a tree (possibly with holes) can take when its leaves may emit
    /// any terminal in `allowed` and holes accept any type. `None` if untypeable.
    pub fn loose_heads(&self, tree: &CompTree, allowed: &BTreeSet<TerminalId>) -> Option<TypeSet> {
        let CompTree::Node(rel, children) = tree else {
            return Some((0..self.nonterminals().len() as u32).map(NonterminalId).collect());
        };
        let id = self.rel_of(rel).ok()?;
        if children.is_empty() {
            let heads: TypeSet = self
                .instances_of(id)
                .filter(|i| matches!(i.body, InstanceBody::Terminal(t) if allowed.contains(&t)))
                .map(|i| i.head)
                .collect();
            return (!heads.is_empty()).then_some(heads);
        }
        let sets: Vec<Option<TypeSet>> = children
            .iter()
            .map(|c| match c {
                CompTree::Hole => Some(None),
                _ => self.loose_heads(c, allowed).map(Some),
            })
            .collect::<Option<_>>()?;
        let heads: TypeSet = self
            .instances_of(id)
            .filter(|i| match &i.body {
                InstanceBody::Children(cs) => {
                    cs.iter().zip(&sets).all(|(c, s)| s.as_ref().is_none_or(|s| s.contains(c)))
                }
                InstanceBody::Terminal(_) => false,
            })
            .map(|i| i.head)
            .collect();
        (!heads.is_empty()).then_some(heads)
    }

    /// Surface string of a tree when every leaf relation emits a single
    /// terminal; `None` if some leaf is ambiguous or unknown.
    pub fn surface(&self, tree: &CompTree) -> Option<Vec<YieldSym>> {
        use crate::template::Frontier;
        tree.frontier()
            .into_iter()
            .map(|f| match f {
                Frontier::Hole => Some(YieldSym::Hole),
                Frontier::Leaf(r) => {
                    let id = self.rel_of(&r).ok()?;
                    let mut toks = self.instances_of(id).filter_map(|i| match i.body {
                        InstanceBody::Terminal(t) => Some(t),
                        InstanceBody::Children(_) => None,
                    });
                    let first = toks.next()?;
                    toks.all(|t| t == first).then(|| YieldSym::Token(self.terminal_name(first).clone()))
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::{GrammarDef, RelationDef, TerminationDef};
    use super::*;
    use crate::template::Relation;

    fn toy() -> Grammar {
        Grammar::from_def(&GrammarDef {
            start: "S".into(),
            nonterminals: vec!["S".into(), "A".into(), "B".into()],
            terminals: vec!["a".into(), "b".into()],
            relations: vec![RelationDef::new("g", "S", &["A", "A"]), RelationDef::new("g", "B", &["A", "B"])],
            terminations: vec![TerminationDef::new("a", "A", "a"), TerminationDef::new("b", "B", "b")],
        })
        .unwrap()
    }

    fn t(rel: &str, ar: usize, ch: Vec<CompTree>) -> CompTree {
        CompTree::Node(Relation::new(rel, ar), ch)
    }

    #[test]
    fn accepts_and_rejects() {
        let g = toy();
        let aa = t("g", 2, vec![t("a", 0, vec![]), t("a", 0, vec![])]);
        let seq_aa = g.tokenize(&["a", "a"]).unwrap();
        let seq_ab = g.tokenize(&["a", "b"]).unwrap();
        assert_eq!(g.check_tree(&aa, &seq_aa), Ok(()));
        assert!(matches!(g.check_tree(&aa, &seq_ab), Err(Reject::YieldMismatch(_))));
        let ab = t("g", 2, vec![t("a", 0, vec![]), t("b", 0, vec![])]);
        assert!(matches!(g.check_tree(&ab, &seq_ab), Err(Reject::StartMismatch(_))));
        assert!(matches!(g.check_tree(&aa, &seq_aa[..1]), Err(Reject::YieldMismatch(_))));
        let open = t("g", 2, vec![CompTree::Hole, t("a", 0, vec![])]);
        assert_eq!(g.check_tree(&open, &seq_aa), Err(Reject::OpenTemplate(1)));
        let unknown = t("h", 1, vec![t("a", 0, vec![])]);
        assert_eq!(g.check_tree(&unknown, &seq_aa[..1]), Err(Reject::UnknownRelation("h".into())));
    }

    #[test]
    fn surface_of_monomorphic_leaves() {
        let g = toy();
        let tree = t("g", 2, vec![t("a", 0, vec![]), CompTree::Hole]);
        assert_eq!(g.surface(&tree), Some(vec![YieldSym::Token("a".into()), YieldSym::Hole]));
    }
}
