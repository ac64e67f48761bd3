//! Sort and feature names.

use std::collections::HashMap;
use std::fmt;

use crate::error::LatticeError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SortId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FeatureId(pub u32);

impl SortId {
    pub const BOT: SortId = SortId(0);
    pub const TOP: SortId = SortId(1);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl FeatureId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for SortId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

pub const BOT_NAME: &str = "bot";
pub const TOP_NAME: &str = "top";

/// `[a-z][A-Za-z0-9_]*`
pub fn is_lower_ident(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Interned sort and feature names. `bot` and `top` are always present as
/// sorts 0 and 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    sorts: Vec<String>,
    features: Vec<String>,
    sort_index: HashMap<String, SortId>,
    feature_index: HashMap<String, FeatureId>,
}

impl Default for Signature {
    fn default() -> Self {
        let mut sig = Signature {
            sorts: Vec::new(),
            features: Vec::new(),
            sort_index: HashMap::new(),
            feature_index: HashMap::new(),
        };
        sig.push_sort(BOT_NAME);
        sig.push_sort(TOP_NAME);
        sig
    }
}

impl Signature {
    /// Build a signature. `bot`/`top` may be listed but are not required.
    pub fn new<S: AsRef<str>, F: AsRef<str>>(
        sorts: &[S],
        features: &[F],
    ) -> Result<Self, LatticeError> {
        let mut sig = Signature::default();
        for s in sorts {
            let s = s.as_ref();
            if s == BOT_NAME || s == TOP_NAME {
                continue;
            }
            sig.add_sort(s)?;
        }
        for f in features {
            sig.add_feature(f.as_ref())?;
        }
        Ok(sig)
    }

    fn push_sort(&mut self, name: &str) -> SortId {
        let id = SortId(self.sorts.len() as u32);
        self.sorts.push(name.to_string());
        self.sort_index.insert(name.to_string(), id);
        id
    }

    pub fn add_sort(&mut self, name: &str) -> Result<SortId, LatticeError> {
        if !is_lower_ident(name) {
            return Err(LatticeError::InvalidName(name.to_string()));
        }
        if self.sort_index.contains_key(name) || self.feature_index.contains_key(name) {
            return Err(LatticeError::DuplicateName(name.to_string()));
        }
        Ok(self.push_sort(name))
    }

    pub fn add_feature(&mut self, name: &str) -> Result<FeatureId, LatticeError> {
        if !is_lower_ident(name) {
            return Err(LatticeError::InvalidName(name.to_string()));
        }
        if self.sort_index.contains_key(name) || self.feature_index.contains_key(name) {
            return Err(LatticeError::DuplicateName(name.to_string()));
        }
        let id = FeatureId(self.features.len() as u32);
        self.features.push(name.to_string());
        self.feature_index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn sort_count(&self) -> usize {
        self.sorts.len()
    }

    pub fn feature_count(&self) -> usize {
        self.features.len()
    }

    pub fn sorts(&self) -> impl Iterator<Item = SortId> + '_ {
        (0..self.sorts.len() as u32).map(SortId)
    }

    pub fn features(&self) -> impl Iterator<Item = FeatureId> + '_ {
        (0..self.features.len() as u32).map(FeatureId)
    }

    pub fn sort(&self, name: &str) -> Option<SortId> {
        self.sort_index.get(name).copied()
    }

    pub fn feature(&self, name: &str) -> Option<FeatureId> {
        self.feature_index.get(name).copied()
    }

    pub fn sort_name(&self, id: SortId) -> &str {
        &self.sorts[id.index()]
    }

    pub fn feature_name(&self, id: FeatureId) -> &str {
        &self.features[id.index()]
    }

    pub fn has_sort(&self, id: SortId) -> bool {
        id.index() < self.sorts.len()
    }

    pub fn has_feature(&self, id: FeatureId) -> bool {
        id.index() < self.features.len()
    }
}
