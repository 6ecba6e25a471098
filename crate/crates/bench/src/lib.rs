//! Fixtures shared by the benches in `benches/`.

use structrep::grammar::TerminalId;
use structrep::{builtin_grammar, builtin_sequence, Grammar};

/// A bundled grammar with its example sequence, ready for the engine.
pub fn case(name: &str) -> (Grammar, Vec<TerminalId>) {
    let grammar = builtin_grammar(name).expect("bundled grammar");
    let tokens = builtin_sequence(name).expect("bundled sequence");
    let seq = grammar.tokenize(&tokens).expect("bundled tokens belong to the grammar");
    (grammar, seq)
}

/// The first `n` tokens of a bundled example.
pub fn prefix(name: &str, n: usize) -> (Grammar, Vec<TerminalId>) {
    let (g, mut seq) = case(name);
    seq.truncate(n);
    (g, seq)
}
