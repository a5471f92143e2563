//! Reference counts from the original study's released data.

use serde::Serialize;

use crate::elicitation::Relation;

/// Triplets per relation, in [`Relation::ALL`] order.
pub const TRIPLETS: [usize; 6] = [11_739, 5_721, 3_496, 2_997, 1_447, 3_094];
pub const TOTAL_TRIPLETS: usize = 28_494;
/// The bracketed per-relation column of the statistics table.
pub const BRACKETED: [usize; 6] = [6_329, 3_646, 1_870, 1_568, 804, 1_589];
/// Hapax total stated in the running text.
pub const TEXT_HAPAX_TOTAL: usize = 12_688;
/// Non-hapax total used for the gloss study.
pub const TEXT_NON_HAPAX_TOTAL: usize = 15_806;

pub const TARGET_WORDS: [usize; 6] = [713, 319, 195, 146, 105, 218];
pub const UNIQUE_TARGET_WORDS: usize = 1_304;

/// How the data's hapax split lines up with the published numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HapaxReading {
    /// Per-relation hapax counts equal the bracketed column.
    BracketsCountHapaxes,
    /// Per-relation non-hapax counts equal the bracketed column.
    BracketsCountNonHapaxes,
    /// Neither column matches, but the hapax total agrees with the text.
    TextTotalOnly,
    Undetermined,
}

impl HapaxReading {
    pub fn resolve(hapax: &[usize; 6], non_hapax: &[usize; 6]) -> Self {
        if *hapax == BRACKETED {
            HapaxReading::BracketsCountHapaxes
        } else if *non_hapax == BRACKETED {
            HapaxReading::BracketsCountNonHapaxes
        } else if hapax.iter().sum::<usize>() == TEXT_HAPAX_TOTAL
            && non_hapax.iter().sum::<usize>() == TEXT_NON_HAPAX_TOTAL
        {
            HapaxReading::TextTotalOnly
        } else {
            HapaxReading::Undetermined
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            HapaxReading::BracketsCountHapaxes => {
                "per-relation hapax counts equal the published bracketed column"
            }
            HapaxReading::BracketsCountNonHapaxes => {
                "per-relation non-hapax counts equal the published bracketed column, \
                 which therefore counts non-hapax triplets"
            }
            HapaxReading::TextTotalOnly => {
                "hapax and non-hapax totals match the published 12,688 / 15,806 split \
                 but no per-relation column matches"
            }
            HapaxReading::Undetermined => {
                "the data matches neither published reading of the hapax counts"
            }
        }
    }
}

pub fn published_triplets(relation: Relation) -> usize {
    TRIPLETS[relation.index()]
}
