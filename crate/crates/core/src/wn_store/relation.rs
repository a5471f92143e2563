use std::fmt;

use serde::{Deserialize, Serialize};

/// Pointer type of a wndb edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RelationKind {
    Hypernym,
    InstanceHypernym,
    Hyponym,
    InstanceHyponym,
    MemberHolonym,
    PartHolonym,
    SubstanceHolonym,
    MemberMeronym,
    PartMeronym,
    SubstanceMeronym,
    Antonym,
    Other(String),
}

impl RelationKind {
    pub fn from_symbol(symbol: &str) -> Self {
        match symbol {
            "@" => Self::Hypernym,
            "@i" => Self::InstanceHypernym,
            "~" => Self::Hyponym,
            "~i" => Self::InstanceHyponym,
            "#m" => Self::MemberHolonym,
            "#p" => Self::PartHolonym,
            "#s" => Self::SubstanceHolonym,
            "%m" => Self::MemberMeronym,
            "%p" => Self::PartMeronym,
            "%s" => Self::SubstanceMeronym,
            "!" => Self::Antonym,
            other => Self::Other(other.to_string()),
        }
    }

    pub fn symbol(&self) -> &str {
        match self {
            Self::Hypernym => "@",
            Self::InstanceHypernym => "@i",
            Self::Hyponym => "~",
            Self::InstanceHyponym => "~i",
            Self::MemberHolonym => "#m",
            Self::PartHolonym => "#p",
            Self::SubstanceHolonym => "#s",
            Self::MemberMeronym => "%m",
            Self::PartMeronym => "%p",
            Self::SubstanceMeronym => "%s",
            Self::Antonym => "!",
            Self::Other(s) => s,
        }
    }

    /// The pointer type WordNet stores on the opposite synset, if the
    /// relation is one whose inverse is always recorded.
    pub fn mirror(&self) -> Option<RelationKind> {
        Some(match self {
            Self::Hypernym => Self::Hyponym,
            Self::Hyponym => Self::Hypernym,
            Self::InstanceHypernym => Self::InstanceHyponym,
            Self::InstanceHyponym => Self::InstanceHypernym,
            Self::MemberHolonym => Self::MemberMeronym,
            Self::MemberMeronym => Self::MemberHolonym,
            Self::PartHolonym => Self::PartMeronym,
            Self::PartMeronym => Self::PartHolonym,
            Self::SubstanceHolonym => Self::SubstanceMeronym,
            Self::SubstanceMeronym => Self::SubstanceHolonym,
            Self::Antonym => Self::Antonym,
            Self::Other(_) => return None,
        })
    }

    pub fn is_hypernym(&self) -> bool {
        matches!(self, Self::Hypernym | Self::InstanceHypernym)
    }

    pub fn is_hyponym(&self) -> bool {
        matches!(self, Self::Hyponym | Self::InstanceHyponym)
    }

    pub fn is_holonym(&self) -> bool {
        matches!(
            self,
            Self::MemberHolonym | Self::PartHolonym | Self::SubstanceHolonym
        )
    }

    pub fn is_meronym(&self) -> bool {
        matches!(
            self,
            Self::MemberMeronym | Self::PartMeronym | Self::SubstanceMeronym
        )
    }

    /// Whether an edge of kind `self` answers a query for `query`.
    /// Instance pointers are folded into the plain taxonomic kinds.
    pub(crate) fn answers(&self, query: &RelationKind) -> bool {
        match query {
            Self::Hypernym => self.is_hypernym(),
            Self::Hyponym => self.is_hyponym(),
            q => self == q,
        }
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_round_trip() {
        for sym in [
            "@", "@i", "~", "~i", "#m", "#p", "#s", "%m", "%p", "%s", "!", "+", ";c", "-c", "=",
        ] {
            assert_eq!(RelationKind::from_symbol(sym).symbol(), sym);
        }
    }

    #[test]
    fn mirror_is_an_involution() {
        for sym in ["@", "@i", "~", "~i", "#m", "#p", "#s", "%m", "%p", "%s", "!"] {
            let k = RelationKind::from_symbol(sym);
            assert_eq!(k.mirror().unwrap().mirror().unwrap(), k);
        }
        assert!(RelationKind::from_symbol("+").mirror().is_none());
    }

    #[test]
    fn instance_pointers_fold_into_taxonomy() {
        assert!(RelationKind::InstanceHypernym.answers(&RelationKind::Hypernym));
        assert!(RelationKind::InstanceHyponym.answers(&RelationKind::Hyponym));
        assert!(!RelationKind::Hypernym.answers(&RelationKind::InstanceHypernym));
        assert!(!RelationKind::PartHolonym.answers(&RelationKind::MemberHolonym));
    }
}
