//! Bundled example grammars.
//!
//! `jazz` is a small harmony grammar over seventh chords: prolongation
//! (`X -> X X`), descending fifth (`X -> fifth-above(X) X`), applied
//! dominant (`X -> V7(X) X`) and a single termination relation `Chord`.
//!
//! `coffee` is a reconstruction of a hierarchical plan for making coffee in
//! which preparing the grounds and preparing the water are two instances of
//! one polymorphic `prepare` relation ("measure an amount of x, put it into
//! the machine"). Like most task grammars it is ambiguous: the same five
//! actions can also be grouped as "grounds, then finish" where finishing is
//! either "water, then brew" or "measure water, then pour and brew".

use super::{Grammar, GrammarDef, GrammarError, RelationDef, TerminationDef};

pub const BUILTIN_NAMES: [&str; 2] = ["jazz", "coffee"];

const ROOTS: [&str; 12] = ["C", "Db", "D", "Eb", "E", "F", "Gb", "G", "Ab", "A", "Bb", "B"];

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Quality {
    Major7,
    Minor7,
    Dominant7,
}

impl Quality {
    const ALL: [Quality; 3] = [Quality::Major7, Quality::Minor7, Quality::Dominant7];

    fn suffix(self) -> &'static str {
        match self {
            Quality::Major7 => "maj7",
            Quality::Minor7 => "m7",
            Quality::Dominant7 => "7",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Chord {
    root: usize,
    quality: Quality,
}

impl Chord {
    fn token(self) -> String {
        format!("{}{}", ROOTS[self.root], self.quality.suffix())
    }

    /// Nonterminal names are bracketed so they never collide with surface tokens.
    fn category(self) -> String {
        format!("[{}]", self.token())
    }

    /// The chord a fifth above, with the quality that precedes this one in a
    /// ii-V-I chain: I(maj7) <- V7, V7 <- iim7, iim7 <- VI7.
    fn fifth_above(self) -> Chord {
        let quality = match self.quality {
            Quality::Major7 | Quality::Minor7 => Quality::Dominant7,
            Quality::Dominant7 => Quality::Minor7,
        };
        Chord { root: (self.root + 7) % 12, quality }
    }

    fn applied_dominant(self) -> Chord {
        Chord { root: (self.root + 7) % 12, quality: Quality::Dominant7 }
    }

    fn all() -> impl Iterator<Item = Chord> {
        (0..12).flat_map(|root| Quality::ALL.into_iter().map(move |quality| Chord { root, quality }))
    }
}

fn jazz_def() -> GrammarDef {
    let mut def = GrammarDef { start: Chord { root: 0, quality: Quality::Major7 }.category(), ..Default::default() };
    for c in Chord::all() {
        def.nonterminals.push(c.category());
        def.terminals.push(c.token());
    }
    for c in Chord::all() {
        let x = c.category();
        def.relations.push(RelationDef::new("Prol", &x, &[&x, &x]));
        def.relations.push(RelationDef::new("D5", &x, &[&c.fifth_above().category(), &x]));
        def.relations.push(RelationDef::new("AppD", &x, &[&c.applied_dominant().category(), &x]));
        def.terminations.push(TerminationDef::new("Chord", &x, &c.token()));
    }
    def
}

fn coffee_def() -> GrammarDef {
    let nts = [
        "Coffee",
        "Ingredients",
        "Brewing",
        "Grounds",
        "Water",
        "BeanAmount",
        "BeanLoad",
        "WaterAmount",
        "WaterLoad",
        "Finish",
        "Pour",
    ];
    let terms = ["weigh-beans", "fill-filter", "measure-water", "fill-reservoir", "press-brew"];
    GrammarDef {
        start: "Coffee".into(),
        nonterminals: nts.iter().map(|s| s.to_string()).collect(),
        terminals: terms.iter().map(|s| s.to_string()).collect(),
        relations: vec![
            RelationDef::new("make", "Coffee", &["Ingredients", "Brewing"]),
            RelationDef::new("make", "Coffee", &["Grounds", "Finish"]),
            RelationDef::new("finish", "Finish", &["Water", "Brewing"]),
            RelationDef::new("finish", "Finish", &["WaterAmount", "Pour"]),
            RelationDef::new("pour", "Pour", &["WaterLoad", "Brewing"]),
            RelationDef::new("combine", "Ingredients", &["Grounds", "Water"]),
            RelationDef::new("prepare", "Grounds", &["BeanAmount", "BeanLoad"]),
            RelationDef::new("prepare", "Water", &["WaterAmount", "WaterLoad"]),
        ],
        terminations: vec![
            TerminationDef::new("measure", "BeanAmount", "weigh-beans"),
            TerminationDef::new("measure", "WaterAmount", "measure-water"),
            TerminationDef::new("load", "BeanLoad", "fill-filter"),
            TerminationDef::new("load", "WaterLoad", "fill-reservoir"),
            TerminationDef::new("brew", "Brewing", "press-brew"),
        ],
    }
}

/// A bundled grammar by name.
pub fn builtin_grammar(name: &str) -> Result<Grammar, GrammarError> {
    let def = match name {
        "jazz" => jazz_def(),
        "coffee" => coffee_def(),
        other => return Err(GrammarError::UnknownBuiltin(other.to_string())),
    };
    Grammar::from_def(&def)
}

/// The example sequence shipped with each bundled grammar.
pub fn builtin_sequence(name: &str) -> Option<Vec<&'static str>> {
    match name {
        // ii-V of ii, twice, resolving to I
        "jazz" => Some(vec!["Em7", "A7", "Dm7", "G7", "Em7", "A7", "Dm7", "G7", "Cmaj7"]),
        "coffee" => Some(vec!["weigh-beans", "fill-filter", "measure-water", "fill-reservoir", "press-brew"]),
        _ => None,
    }
}
