use std::fmt;

use super::{Combinator, CompTree, Relation, Slot, TemplateError};

/// A Template program.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TemplateExpr {
    /// The identity relation. Part of the language, never produced by inference.
    Id,
    Pure(Relation),
    Rep {
        head: Box<TemplateExpr>,
        comb: Combinator,
        children: Vec<TemplateExpr>,
    },
}

impl TemplateExpr {
    pub fn pure(rel: Relation) -> Self {
        TemplateExpr::Pure(rel)
    }

    /// Builds `Rep head comb children`, checking this node (not the subexpressions).
    pub fn rep(head: TemplateExpr, comb: Combinator, children: Vec<TemplateExpr>) -> Result<Self, TemplateError> {
        check_rep_node(&head, &comb, &children)?;
        Ok(Self::rep_unchecked(head, comb, children))
    }

    pub(crate) fn rep_unchecked(head: TemplateExpr, comb: Combinator, children: Vec<TemplateExpr>) -> Self {
        TemplateExpr::Rep { head: Box::new(head), comb, children }
    }

    /// `|Id| = |Pure r| = 1`, `|Rep e m es| = |e| + 1 + Σ|es|`.
    pub fn size(&self) -> usize {
        match self {
            TemplateExpr::Id | TemplateExpr::Pure(_) => 1,
            TemplateExpr::Rep { head, children, .. } => {
                head.size() + 1 + children.iter().map(TemplateExpr::size).sum::<usize>()
            }
        }
    }

    /// Number of holes of the evaluated tree. Assumes well-formedness.
    pub fn arity(&self) -> usize {
        match self {
            TemplateExpr::Id => 1,
            TemplateExpr::Pure(r) => r.arity(),
            TemplateExpr::Rep { head, comb, children } => {
                let head_arity = head.arity();
                let mut per_slot = Vec::with_capacity(comb.len());
                let mut free = children.iter();
                for s in comb.slots() {
                    let a = match *s {
                        Slot::Free => free.next().map_or(0, TemplateExpr::arity),
                        Slot::Ref(j) => per_slot.get(j).copied().unwrap_or(0),
                        Slot::Star => head_arity,
                    };
                    per_slot.push(a);
                }
                per_slot.iter().sum()
            }
        }
    }

    /// Full structural check of the expression and all of its subexpressions.
    pub fn validate(&self) -> Result<(), TemplateError> {
        match self {
            TemplateExpr::Id | TemplateExpr::Pure(_) => Ok(()),
            TemplateExpr::Rep { head, comb, children } => {
                head.validate()?;
                children.iter().try_for_each(TemplateExpr::validate)?;
                check_rep_node(head, comb, children)
            }
        }
    }

    /// Evaluates to the relation tree the program denotes.
    pub fn evaluate(&self) -> Result<CompTree, TemplateError> {
        self.validate()?;
        Ok(self.eval_unchecked())
    }

    pub(crate) fn eval_unchecked(&self) -> CompTree {
        match self {
            TemplateExpr::Id => CompTree::Hole,
            TemplateExpr::Pure(r) => CompTree::primitive(r.clone()),
            TemplateExpr::Rep { head, comb, children } => {
                let head_tree = head.eval_unchecked();
                let free: Vec<CompTree> = children.iter().map(TemplateExpr::eval_unchecked).collect();
                let fillers = expand_slots(comb, &head_tree, &free);
                head_tree
                    .plug(&fillers)
                    .expect("well-formed Rep fills every hole of its head")
            }
        }
    }

    pub fn is_pure(&self) -> bool {
        matches!(self, TemplateExpr::Pure(_))
    }

    /// Visits every Rep node's combinator, outermost first.
    pub fn combinators(&self) -> Vec<&Combinator> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(e) = stack.pop() {
            if let TemplateExpr::Rep { head, comb, children } = e {
                out.push(comb);
                children.iter().rev().for_each(|c| stack.push(c));
                stack.push(head);
            }
        }
        out
    }
}

/// Applies a combinator: one entry per slot, `Free` consuming `free` in order,
/// `Ref(j)` copying entry `j`, `Star` copying `head`.
pub(crate) fn expand_slots<T: Clone>(comb: &Combinator, head: &T, free: &[T]) -> Vec<T> {
    let mut out: Vec<T> = Vec::with_capacity(comb.len());
    let mut it = free.iter();
    for s in comb.slots() {
        let next = match *s {
            Slot::Free => it.next().expect("free child count checked").clone(),
            Slot::Ref(j) => out[j].clone(),
            Slot::Star => head.clone(),
        };
        out.push(next);
    }
    out
}

fn check_rep_node(head: &TemplateExpr, comb: &Combinator, children: &[TemplateExpr]) -> Result<(), TemplateError> {
    comb.validate()?;
    let head_arity = head.arity();
    if comb.len() != head_arity {
        return Err(TemplateError::CombinatorArity { expected: head_arity, found: comb.len() });
    }
    if children.len() != comb.free_count() {
        return Err(TemplateError::FreeChildCount { expected: comb.free_count(), found: children.len() });
    }
    Ok(())
}

/// `useRep(head, m, children)`: the list of programs plugged into the head's holes.
pub fn use_rep(head: &TemplateExpr, comb: &Combinator, children: &[TemplateExpr]) -> Result<Vec<TemplateExpr>, TemplateError> {
    check_rep_node(head, comb, children)?;
    Ok(expand_slots(comb, head, children))
}

/// Size of a well-formed expression; malformed input is reported, not measured.
pub fn size(e: &TemplateExpr) -> Result<usize, TemplateError> {
    e.validate()?;
    Ok(e.size())
}

impl fmt::Display for TemplateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TemplateExpr::Id => f.write_str("Id"),
            TemplateExpr::Pure(r) => write!(f, "Pure {}", r.name()),
            TemplateExpr::Rep { head, comb, children } => {
                f.write_str("Rep ")?;
                match **head {
                    TemplateExpr::Id => f.write_str("Id")?,
                    _ => write!(f, "({head})")?,
                }
                write!(f, " {comb} [")?;
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str("]")
            }
        }
    }
}

impl fmt::Debug for TemplateExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
