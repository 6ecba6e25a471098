//! Relational grammars: nonterminals, terminals and typed instances of
//! relation symbols.
//!
//! A relation symbol such as `Prol` may have many instances (`C -> C C`,
//! `G7 -> G7 G7`, ...). All instances of a symbol share its arity and kind.
//! Trees mention only the symbol; items in the chart carry the types.

mod builtin;
mod typing;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub use builtin::{builtin_grammar, builtin_sequence, BUILTIN_NAMES};
pub use typing::{Reject, TypeSet, YieldSym};

use crate::template::{Relation, RelationKind};
use crate::Symbol;

/// Largest arity an internal relation may have.
pub const MAX_ARITY: usize = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NonterminalId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TerminalId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RelId(pub u32);

/// Unvalidated grammar description, as read from a file or built in code.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GrammarDef {
    pub start: String,
    pub nonterminals: Vec<String>,
    pub terminals: Vec<String>,
    pub relations: Vec<RelationDef>,
    pub terminations: Vec<TerminationDef>,
}

/// `head name children...`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationDef {
    pub name: String,
    pub head: String,
    pub children: Vec<String>,
}

/// `head name "terminal"`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TerminationDef {
    pub name: String,
    pub head: String,
    pub terminal: String,
}

impl RelationDef {
    pub fn new(name: &str, head: &str, children: &[&str]) -> Self {
        RelationDef {
            name: name.to_string(),
            head: head.to_string(),
            children: children.iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl TerminationDef {
    pub fn new(name: &str, head: &str, terminal: &str) -> Self {
        TerminationDef { name: name.to_string(), head: head.to_string(), terminal: terminal.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("relation `{relation}`: arity > 2 (found {arity})")]
    ArityTooLarge { relation: String, arity: usize },
    #[error("relation `{relation}`: internal relation with no children")]
    NullaryInternal { relation: String },
    #[error("no termination relation")]
    NoTermination,
    #[error("relation `{relation}`: undeclared nonterminal `{symbol}`")]
    UndeclaredNonterminal { relation: String, symbol: String },
    #[error("relation `{relation}`: undeclared terminal `{symbol}`")]
    UndeclaredTerminal { relation: String, symbol: String },
    #[error("relation `{relation}`: instances disagree on arity or kind")]
    InconsistentRelation { relation: String },
    #[error("relation `{relation}`: duplicate instance")]
    DuplicateInstance { relation: String },
    #[error("start symbol `{symbol}` is not a declared nonterminal")]
    UndeclaredStart { symbol: String },
    #[error("symbol `{symbol}` declared as both nonterminal and terminal")]
    NamespaceOverlap { symbol: String },
    #[error("symbol `{symbol}` declared twice")]
    DuplicateSymbol { symbol: String },
    #[error("empty name")]
    EmptyName,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GrammarError {
    #[error("invalid grammar: {}", display_list(.0))]
    Invalid(Vec<Violation>),
    #[error("unknown built-in grammar `{0}` (known: jazz, coffee)")]
    UnknownBuiltin(String),
}

fn display_list(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// Every violated invariant, in declaration order. Empty means valid.
pub fn validate(def: &GrammarDef) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let mut nts = BTreeSet::new();
    let mut ts = BTreeSet::new();
    for n in &def.nonterminals {
        if n.is_empty() {
            out.push(Violation::EmptyName);
        } else if !nts.insert(n.as_str()) {
            out.push(Violation::DuplicateSymbol { symbol: n.clone() });
        }
    }
    for t in &def.terminals {
        if t.is_empty() {
            out.push(Violation::EmptyName);
        } else if !ts.insert(t.as_str()) {
            out.push(Violation::DuplicateSymbol { symbol: t.clone() });
        }
    }
    for overlap in nts.intersection(&ts) {
        out.push(Violation::NamespaceOverlap { symbol: overlap.to_string() });
    }
    if !nts.contains(def.start.as_str()) {
        out.push(Violation::UndeclaredStart { symbol: def.start.clone() });
    }

    // name -> (arity, kind) of the first instance seen
    let mut shape: HashMap<&str, (usize, RelationKind)> = HashMap::new();
    let mut seen_internal = BTreeSet::new();
    for r in &def.relations {
        if r.name.is_empty() {
            out.push(Violation::EmptyName);
        }
        let arity = r.children.len();
        if arity > MAX_ARITY {
            out.push(Violation::ArityTooLarge { relation: r.name.clone(), arity });
        }
        if arity == 0 {
            out.push(Violation::NullaryInternal { relation: r.name.clone() });
        }
        for sym in std::iter::once(&r.head).chain(&r.children) {
            if !nts.contains(sym.as_str()) {
                out.push(Violation::UndeclaredNonterminal { relation: r.name.clone(), symbol: sym.clone() });
            }
        }
        check_shape(&mut shape, &mut out, &r.name, (arity, RelationKind::Internal));
        if !seen_internal.insert((r.name.as_str(), r.head.as_str(), r.children.clone())) {
            out.push(Violation::DuplicateInstance { relation: r.name.clone() });
        }
    }
    let mut seen_term = BTreeSet::new();
    for t in &def.terminations {
        if t.name.is_empty() {
            out.push(Violation::EmptyName);
        }
        if !nts.contains(t.head.as_str()) {
            out.push(Violation::UndeclaredNonterminal { relation: t.name.clone(), symbol: t.head.clone() });
        }
        if !ts.contains(t.terminal.as_str()) {
            out.push(Violation::UndeclaredTerminal { relation: t.name.clone(), symbol: t.terminal.clone() });
        }
        check_shape(&mut shape, &mut out, &t.name, (0, RelationKind::Termination));
        if !seen_term.insert((t.name.as_str(), t.head.as_str(), t.terminal.as_str())) {
            out.push(Violation::DuplicateInstance { relation: t.name.clone() });
        }
    }
    if def.terminations.is_empty() {
        out.push(Violation::NoTermination);
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

fn check_shape<'a>(
    shape: &mut HashMap<&'a str, (usize, RelationKind)>,
    out: &mut Vec<Violation>,
    name: &'a str,
    this: (usize, RelationKind),
) {
    match shape.get(name) {
        Some(&prev) if prev != this => {
            let v = Violation::InconsistentRelation { relation: name.to_string() };
            if !out.contains(&v) {
                out.push(v);
            }
        }
        Some(_) => {}
        None => {
            shape.insert(name, this);
        }
    }
}

/// One typed instance of a relation symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    pub relation: RelId,
    pub head: NonterminalId,
    pub body: InstanceBody,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum InstanceBody {
    Children(Vec<NonterminalId>),
    Terminal(TerminalId),
}

/// A validated grammar. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Grammar {
    start: NonterminalId,
    nonterminals: Vec<Symbol>,
    terminals: Vec<Symbol>,
    relations: Vec<Relation>,
    instances: Vec<Instance>,
    by_relation: Vec<Vec<usize>>,
    nt_index: HashMap<Symbol, NonterminalId>,
    t_index: HashMap<Symbol, TerminalId>,
    rel_index: HashMap<Symbol, RelId>,
}

impl Grammar {
    pub fn from_def(def: &GrammarDef) -> Result<Grammar, GrammarError> {
        validate(def).map_err(GrammarError::Invalid)?;
        let nonterminals: Vec<Symbol> = def.nonterminals.iter().map(Symbol::new).collect();
        let terminals: Vec<Symbol> = def.terminals.iter().map(Symbol::new).collect();
        let nt_index: HashMap<_, _> =
            nonterminals.iter().enumerate().map(|(i, s)| (s.clone(), NonterminalId(i as u32))).collect();
        let t_index: HashMap<_, _> =
            terminals.iter().enumerate().map(|(i, s)| (s.clone(), TerminalId(i as u32))).collect();

        let mut relations = Vec::new();
        let mut rel_index: HashMap<Symbol, RelId> = HashMap::new();
        let mut instances = Vec::new();
        let mut intern_rel = |name: &str, arity: usize, relations: &mut Vec<Relation>| {
            let sym = Symbol::new(name);
            *rel_index.entry(sym.clone()).or_insert_with(|| {
                relations.push(Relation::new(sym, arity));
                RelId(relations.len() as u32 - 1)
            })
        };
        for r in &def.relations {
            let relation = intern_rel(&r.name, r.children.len(), &mut relations);
            instances.push(Instance {
                relation,
                head: nt_index[&Symbol::new(&r.head)],
                body: InstanceBody::Children(r.children.iter().map(|c| nt_index[&Symbol::new(c)]).collect()),
            });
        }
        for t in &def.terminations {
            let relation = intern_rel(&t.name, 0, &mut relations);
            instances.push(Instance {
                relation,
                head: nt_index[&Symbol::new(&t.head)],
                body: InstanceBody::Terminal(t_index[&Symbol::new(&t.terminal)]),
            });
        }
        let mut by_relation = vec![Vec::new(); relations.len()];
        for (i, inst) in instances.iter().enumerate() {
            by_relation[inst.relation.0 as usize].push(i);
        }
        let start = nt_index[&Symbol::new(&def.start)];
        Ok(Grammar { start, nonterminals, terminals, relations, instances, by_relation, nt_index, t_index, rel_index })
    }

    pub fn start(&self) -> NonterminalId {
        self.start
    }

    pub fn nonterminals(&self) -> &[Symbol] {
        &self.nonterminals
    }

    pub fn terminals(&self) -> &[Symbol] {
        &self.terminals
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn instances(&self) -> &[Instance] {
        &self.instances
    }

    pub fn relation(&self, id: RelId) -> &Relation {
        &self.relations[id.0 as usize]
    }

    pub fn relation_ids(&self) -> impl Iterator<Item = RelId> + '_ {
        (0..self.relations.len() as u32).map(RelId)
    }

    pub fn relation_id(&self, name: &str) -> Option<RelId> {
        self.rel_index.get(name).copied()
    }

    /// Looks up a relation by name, returning the symbol with its arity.
    pub fn relation_named(&self, name: &str) -> Option<&Relation> {
        self.relation_id(name).map(|id| self.relation(id))
    }

    pub fn instances_of(&self, id: RelId) -> impl Iterator<Item = &Instance> + '_ {
        self.by_relation[id.0 as usize].iter().map(move |&i| &self.instances[i])
    }

    pub fn nonterminal(&self, name: &str) -> Option<NonterminalId> {
        self.nt_index.get(name).copied()
    }

    pub fn terminal(&self, name: &str) -> Option<TerminalId> {
        self.t_index.get(name).copied()
    }

    pub fn nonterminal_name(&self, id: NonterminalId) -> &Symbol {
        &self.nonterminals[id.0 as usize]
    }

    pub fn terminal_name(&self, id: TerminalId) -> &Symbol {
        &self.terminals[id.0 as usize]
    }

    /// Maps surface tokens to terminal ids; unknown tokens are reported by position.
    pub fn tokenize<S: AsRef<str>>(&self, tokens: &[S]) -> Result<Vec<TerminalId>, UnknownToken> {
        tokens
            .iter()
            .enumerate()
            .map(|(position, t)| {
                self.terminal(t.as_ref()).ok_or_else(|| UnknownToken { position, token: t.as_ref().to_string() })
            })
            .collect()
    }

    /// The grammar back in its declarative form.
    pub fn to_def(&self) -> GrammarDef {
        let nt = |id: NonterminalId| self.nonterminal_name(id).to_string();
        let mut def = GrammarDef {
            start: nt(self.start),
            nonterminals: self.nonterminals.iter().map(ToString::to_string).collect(),
            terminals: self.terminals.iter().map(ToString::to_string).collect(),
            ..GrammarDef::default()
        };
        for inst in &self.instances {
            let name = self.relation(inst.relation).name().to_string();
            match &inst.body {
                InstanceBody::Children(ch) => def.relations.push(RelationDef {
                    name,
                    head: nt(inst.head),
                    children: ch.iter().map(|&c| nt(c)).collect(),
                }),
                InstanceBody::Terminal(t) => def.terminations.push(TerminationDef {
                    name,
                    head: nt(inst.head),
                    terminal: self.terminal_name(*t).to_string(),
                }),
            }
        }
        def
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("token `{token}` at position {position} is not a terminal of the grammar")]
pub struct UnknownToken {
    pub position: usize,
    pub token: String,
}

impl fmt::Display for NonterminalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N{}", self.0)
    }
}
