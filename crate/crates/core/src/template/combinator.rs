use std::fmt;
use std::str::FromStr;

use super::TemplateError;

/// One position of a repetition combinator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    /// Consumes the next free child program.
    Free,
    /// Copies whatever the (earlier, free) slot at this absolute index received.
    Ref(usize),
    /// Copies the head program itself: one step of recursion.
    Star,
}

/// A repetition combinator: one slot per hole of the head program.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Combinator(Vec<Slot>);

impl Combinator {
    /// Builds a combinator, checking that every `Ref` targets an earlier `Free` slot.
    pub fn new(slots: Vec<Slot>) -> Result<Self, TemplateError> {
        let comb = Combinator(slots);
        comb.validate()?;
        Ok(comb)
    }

    /// `<_ _ ... _>` of the given length: the trivial repeat.
    pub fn all_free(len: usize) -> Self {
        Combinator(vec![Slot::Free; len])
    }

    pub(crate) fn from_slots_unchecked(slots: Vec<Slot>) -> Self {
        Combinator(slots)
    }

    pub fn slots(&self) -> &[Slot] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn free_count(&self) -> usize {
        self.0.iter().filter(|s| matches!(s, Slot::Free)).count()
    }

    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(|s| matches!(s, Slot::Free))
    }

    pub fn has_star(&self) -> bool {
        self.0.iter().any(|s| matches!(s, Slot::Star))
    }

    pub fn has_ref(&self) -> bool {
        self.0.iter().any(|s| matches!(s, Slot::Ref(_)))
    }

    pub fn validate(&self) -> Result<(), TemplateError> {
        if self.0.is_empty() {
            return Err(TemplateError::EmptyCombinator);
        }
        for (slot, s) in self.0.iter().enumerate() {
            if let Slot::Ref(target) = *s {
                if target >= slot || self.0[target] != Slot::Free {
                    return Err(TemplateError::RefTarget { slot, target });
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Combinator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match s {
                Slot::Free => f.write_str("_")?,
                Slot::Ref(j) => write!(f, "{j}")?,
                Slot::Star => f.write_str("*")?,
            }
        }
        f.write_str(">")
    }
}

impl FromStr for Combinator {
    type Err = TemplateError;

    /// Parses `<_ 0 *>`; the angle brackets are optional and `★` is accepted for `*`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .trim()
            .trim_start_matches(['<', '⟨'])
            .trim_end_matches(['>', '⟩']);
        let slots = body
            .split_whitespace()
            .map(|tok| match tok {
                "_" => Ok(Slot::Free),
                "*" | "★" | "⋆" => Ok(Slot::Star),
                n => n
                    .parse::<usize>()
                    .map(Slot::Ref)
                    .map_err(|_| TemplateError::BadSlot(n.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Combinator::new(slots)
    }
}
