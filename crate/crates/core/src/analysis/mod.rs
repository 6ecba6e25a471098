//! Queries over a finished chart.
//!
//! Every hyperpath into a goal item is exactly one template program: an
//! axiom edge is `Pure r`, a Complete-Rep edge is `Rep` of its parent's
//! program, its combinator and the programs of its free children. Children
//! at `Ref` and `Star` slots are copies and contribute nothing.

mod distribution;
mod minimal;

use thiserror::Error;

pub use distribution::{size_distribution, SizeDistribution};
pub use minimal::{enumerate_minimal, extract_minimal, witness, MinimalGraph};

use crate::grammar::{Grammar, Reject, TerminalId};
use crate::template::TemplateExpr;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("no program explains the sequence")]
    NoParse,
    #[error("the chart was not run to closure; rerun exhaustively")]
    NotClosed,
    #[error("derivation cycle through item {0}; template counts diverge")]
    Cycle(String),
}

/// Outcome of checking a template against a sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(Reject),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Accepts iff `e` is well formed, closed, and evaluates to a tree that
/// explains `seq` from the start symbol.
pub fn check_template(grammar: &Grammar, e: &TemplateExpr, seq: &[TerminalId]) -> Verdict {
    let run = || -> Result<(), Reject> {
        e.validate()?;
        let arity = e.arity();
        if arity > 0 {
            return Err(Reject::OpenTemplate(arity));
        }
        let tree = e.evaluate()?;
        grammar.check_tree(&tree, seq)
    };
    match run() {
        Ok(()) => Verdict::Accept,
        Err(r) => Verdict::Reject(r),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{GrammarDef, RelationDef, TerminationDef};
    use crate::template::{Combinator, Relation};

    fn toy(start: &str) -> Grammar {
        Grammar::from_def(&GrammarDef {
            start: start.into(),
            nonterminals: vec!["S".into(), "A".into(), "B".into()],
            terminals: vec!["a".into(), "b".into()],
            relations: vec![RelationDef::new("g", "S", &["A", "A"])],
            terminations: vec![TerminationDef::new("a", "A", "a"), TerminationDef::new("b", "B", "b")],
        })
        .unwrap()
    }

    fn shared() -> TemplateExpr {
        TemplateExpr::rep(
            TemplateExpr::pure(Relation::new("g", 2)),
            "<_ 0>".parse::<Combinator>().unwrap(),
            vec![TemplateExpr::pure(Relation::new("a", 0))],
        )
        .unwrap()
    }

    #[test]
    fn check_examples() {
        let g = toy("S");
        let aa = g.tokenize(&["a", "a"]).unwrap();
        let ab = g.tokenize(&["a", "b"]).unwrap();
        assert_eq!(check_template(&g, &shared(), &aa), Verdict::Accept);
        assert!(matches!(check_template(&g, &shared(), &ab), Verdict::Reject(Reject::YieldMismatch(_))));
        let g_a = toy("A");
        assert!(matches!(check_template(&g_a, &shared(), &aa), Verdict::Reject(Reject::StartMismatch(_))));
        let open = TemplateExpr::pure(Relation::new("g", 2));
        assert_eq!(check_template(&g, &open, &aa), Verdict::Reject(Reject::OpenTemplate(2)));
    }
}
