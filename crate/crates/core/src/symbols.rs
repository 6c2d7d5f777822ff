//! Named alphabets and bitset-encoded symbol sets.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Maximum number of symbols an [`Alphabet`] can hold.
pub const MAX_SYMBOLS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlphabetError {
    #[error("duplicate symbol `{0}`")]
    Duplicate(String),
    #[error("alphabet holds at most {MAX_SYMBOLS} symbols, got {0}")]
    TooLarge(usize),
    #[error("unknown symbol `{0}`")]
    Unknown(String),
}

/// A set of symbols, encoded as a bitmask over the indices of an [`Alphabet`].
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct SymSet(pub u64);

impl SymSet {
    pub const EMPTY: SymSet = SymSet(0);

    pub fn singleton(index: usize) -> Self {
        SymSet(1 << index)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        indices.into_iter().fold(SymSet::EMPTY, |acc, i| acc.with(i))
    }

    pub fn contains(self, index: usize) -> bool {
        self.0 >> index & 1 == 1
    }

    pub fn with(self, index: usize) -> Self {
        SymSet(self.0 | 1 << index)
    }

    pub fn without(self, index: usize) -> Self {
        SymSet(self.0 & !(1 << index))
    }

    pub fn union(self, other: SymSet) -> Self {
        SymSet(self.0 | other.0)
    }

    pub fn intersect(self, other: SymSet) -> Self {
        SymSet(self.0 & other.0)
    }

    pub fn minus(self, other: SymSet) -> Self {
        SymSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: SymSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(i)
        })
    }

    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> impl Iterator<Item = SymSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(SymSet(cur))
        })
    }
}

/// An ordered set of symbol names; symbol `i` is bit `i` of a [`SymSet`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self, AlphabetError> {
        let mut alphabet = Alphabet::default();
        for name in names {
            alphabet.push(name.into())?;
        }
        Ok(alphabet)
    }

    pub fn push(&mut self, name: String) -> Result<usize, AlphabetError> {
        if self.index.contains_key(&name) {
            return Err(AlphabetError::Duplicate(name));
        }
        if self.names.len() == MAX_SYMBOLS {
            return Err(AlphabetError::TooLarge(self.names.len() + 1));
        }
        let i = self.names.len();
        self.index.insert(name.clone(), i);
        self.names.push(name);
        Ok(i)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn full(&self) -> SymSet {
        if self.names.len() == MAX_SYMBOLS {
            SymSet(u64::MAX)
        } else {
            SymSet((1u64 << self.names.len()) - 1)
        }
    }

    pub fn set_of<'a>(
        &self,
        names: impl IntoIterator<Item = &'a str>,
    ) -> Result<SymSet, AlphabetError> {
        names.into_iter().try_fold(SymSet::EMPTY, |acc, n| {
            self.index_of(n)
                .map(|i| acc.with(i))
                .ok_or_else(|| AlphabetError::Unknown(n.to_string()))
        })
    }

    pub fn names_of(&self, set: SymSet) -> Vec<&str> {
        set.iter().map(|i| self.name(i)).collect()
    }

    pub fn display(&self, set: SymSet) -> DisplaySet<'_> {
        DisplaySet { alphabet: self, set }
    }
}

pub struct DisplaySet<'a> {
    alphabet: &'a Alphabet,
    set: SymSet,
}

impl fmt::Display for DisplaySet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.alphabet.names_of(self.set).join(","))
    }
}
