//! Random small grammars, sequences and an independent CYK recognizer.

#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use structrep::grammar::{RelationDef, TerminationDef};
use structrep::{Grammar, GrammarDef};

pub const NONTERMINALS: [&str; 3] = ["S", "A", "B"];
pub const TERMINALS: [&str; 4] = ["a", "b", "c", "d"];
/// Few names, so relations are often polymorphic.
const INTERNAL_NAMES: [&str; 2] = ["f", "g"];
const LEAF_NAMES: [&str; 2] = ["t", "u"];

#[derive(Clone, Debug)]
pub struct Instance {
    pub def: GrammarDef,
    pub grammar: Grammar,
    pub tokens: Vec<String>,
}

/// A valid grammar with at most `max_rules` rules over at most `alphabet` terminals.
pub fn random_grammar(rng: &mut ChaCha8Rng, max_rules: usize, alphabet: usize) -> GrammarDef {
    loop {
        let n_terms = rng.gen_range(1..=alphabet);
        let terminals: Vec<String> = TERMINALS[..n_terms].iter().map(|s| s.to_string()).collect();
        let n_rules = rng.gen_range(2..=max_rules);
        let n_leaves = rng.gen_range(1..n_rules);
        let mut relations = Vec::new();
        let mut terminations = Vec::new();
        let mut shapes: Vec<(&str, usize)> = Vec::new();
        for _ in 0..n_leaves {
            let name = *LEAF_NAMES.choose(rng).unwrap();
            let head = *NONTERMINALS.choose(rng).unwrap();
            let t = terminals.choose(rng).unwrap().clone();
            terminations.push(TerminationDef::new(name, head, &t));
        }
        for _ in n_leaves..n_rules {
            let name = *INTERNAL_NAMES.choose(rng).unwrap();
            // one arity per name, as the grammar requires
            let arity = match shapes.iter().find(|(n, _)| *n == name) {
                Some(&(_, a)) => a,
                None => {
                    let a = if rng.gen_bool(0.75) { 2 } else { 1 };
                    shapes.push((name, a));
                    a
                }
            };
            let head = *NONTERMINALS.choose(rng).unwrap();
            let children: Vec<&str> = (0..arity).map(|_| *NONTERMINALS.choose(rng).unwrap()).collect();
            relations.push(RelationDef::new(name, head, &children));
        }
        let def = GrammarDef {
            start: "S".into(),
            nonterminals: NONTERMINALS.iter().map(|s| s.to_string()).collect(),
            terminals,
            relations,
            terminations,
        };
        if Grammar::from_def(&def).is_ok() {
            return def;
        }
    }
}

/// Samples a yield of `nt` of length at most `budget`, or `None`.
fn sample_yield(def: &GrammarDef, nt: &str, budget: usize, depth: usize, rng: &mut ChaCha8Rng) -> Option<Vec<String>> {
    if depth > 12 || budget == 0 {
        return None;
    }
    enum Choice<'a> {
        Rel(&'a RelationDef),
        Term(&'a TerminationDef),
    }
    let mut options: Vec<Choice> = def.relations.iter().filter(|r| r.head == nt).map(Choice::Rel).collect();
    options.extend(def.terminations.iter().filter(|t| t.head == nt).map(Choice::Term));
    options.shuffle(rng);
    for opt in options {
        match opt {
            Choice::Term(t) => return Some(vec![t.terminal.clone()]),
            Choice::Rel(r) => {
                let mut out = Vec::new();
                let mut ok = true;
                for c in &r.children {
                    match sample_yield(def, c, budget.saturating_sub(out.len()), depth + 1, rng) {
                        Some(y) => out.extend(y),
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok && out.len() <= budget {
                    return Some(out);
                }
            }
        }
    }
    None
}

/// A sequence of length `1..=max_len`: a sampled yield when possible,
/// otherwise (and sometimes on purpose) uniform random tokens.
pub fn random_sequence(def: &GrammarDef, max_len: usize, rng: &mut ChaCha8Rng) -> Vec<String> {
    if rng.gen_bool(0.8) {
        for _ in 0..20 {
            if let Some(y) = sample_yield(def, &def.start, max_len, 0, rng) {
                return y;
            }
        }
    }
    let len = rng.gen_range(1..=max_len);
    (0..len).map(|_| def.terminals.choose(rng).unwrap().clone()).collect()
}

pub fn random_instance(rng: &mut ChaCha8Rng, max_rules: usize, alphabet: usize, max_len: usize) -> Instance {
    let def = random_grammar(rng, max_rules, alphabet);
    let tokens = random_sequence(&def, max_len, rng);
    let grammar = Grammar::from_def(&def).unwrap();
    Instance { def, grammar, tokens }
}

/// Plain CYK with unary closure, straight from the rule lists.
#[allow(clippy::needless_range_loop)]
pub fn cyk_accepts(def: &GrammarDef, tokens: &[String]) -> bool {
    let n = tokens.len();
    if n == 0 {
        return false;
    }
    let mut table: Vec<Vec<BTreeSet<&str>>> = vec![vec![BTreeSet::new(); n + 1]; n + 1];
    let unary: Vec<(&str, &str)> =
        def.relations.iter().filter(|r| r.children.len() == 1).map(|r| (r.children[0].as_str(), r.head.as_str())).collect();
    fn close<'a>(cell: &mut BTreeSet<&'a str>, unary: &[(&'a str, &'a str)]) {
        loop {
            let mut grew = false;
            for &(child, head) in unary {
                if cell.contains(child) && cell.insert(head) {
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
    }
    for (i, tok) in tokens.iter().enumerate() {
        for t in def.terminations.iter().filter(|t| &t.terminal == tok) {
            table[i][i + 1].insert(t.head.as_str());
        }
        close(&mut table[i][i + 1], &unary);
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let j = i + len;
            let mut cell = BTreeSet::new();
            for k in i + 1..j {
                for r in def.relations.iter().filter(|r| r.children.len() == 2) {
                    if table[i][k].contains(r.children[0].as_str()) && table[k][j].contains(r.children[1].as_str()) {
                        cell.insert(r.head.as_str());
                    }
                }
            }
            close(&mut cell, &unary);
            table[i][j] = cell;
        }
    }
    table[0][n].contains(def.start.as_str())
}
