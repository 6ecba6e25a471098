//! Inference of minimal Template programs.
//!
//! Given a relational grammar and a token sequence, the engine runs a
//! weighted deduction system whose items are partially built relation trees
//! (with holes) over regions of the sequence. Repetition combinators let one
//! hyperedge reuse a sub-computation for several holes, and weights track the
//! size of the smallest program that builds each item. The resulting
//! hypergraph answers three questions: the minimal program size, the set of
//! minimal programs, and the full distribution of program sizes.

pub mod analysis;
pub mod engine;
pub mod grammar;
pub mod oracle;
mod symbol;
pub mod template;

pub use analysis::{check_template, enumerate_minimal, extract_minimal, size_distribution, SizeDistribution, Verdict};
pub use engine::{best_first, forward_chain, minimal_size, Chart, CombinatorSet, EngineConfig, EngineError, Weight};
pub use grammar::{builtin_grammar, builtin_sequence, Grammar, GrammarDef};
pub use symbol::Symbol;
pub use template::{embed_derivation, Combinator, CompTree, Derivation, Relation, Slot, TemplateExpr};
