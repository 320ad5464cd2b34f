use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Dotted child-index path. The root is `0`; the i-th child (1-based) of
/// the root is `0.i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GornAddress(Vec<u32>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed Gorn address `{0}`")]
pub struct ParseGornError(pub String);

impl GornAddress {
    pub fn root() -> Self {
        GornAddress(vec![0])
    }

    /// Address of the 1-based `index`-th child.
    pub fn child(&self, index: u32) -> Self {
        let mut v = self.0.clone();
        v.push(index);
        GornAddress(v)
    }

    pub fn components(&self) -> &[u32] {
        &self.0
    }

    /// Child steps below the root, or `None` if the address cannot name a
    /// node in any tree (first component not 0, or a 0 child index).
    pub fn steps(&self) -> Option<&[u32]> {
        match self.0.split_first() {
            Some((0, rest)) if rest.iter().all(|&i| i >= 1) => Some(rest),
            _ => None,
        }
    }

    pub fn is_root(&self) -> bool {
        self.0 == [0]
    }

    pub fn parent(&self) -> Option<Self> {
        if self.0.len() <= 1 {
            None
        } else {
            Some(GornAddress(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    /// True if `self` is `other` or one of its ancestors.
    pub fn dominates(&self, other: &GornAddress) -> bool {
        other.0.starts_with(&self.0)
    }
}

impl fmt::Display for GornAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for GornAddress {
    type Err = ParseGornError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Result<Vec<u32>, _> = s.split('.').map(str::parse).collect();
        match parts {
            Ok(v) if !v.is_empty() => Ok(GornAddress(v)),
            _ => Err(ParseGornError(s.to_owned())),
        }
    }
}

impl Serialize for GornAddress {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GornAddress {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
