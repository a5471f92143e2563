use sha2::{Digest, Sha256};

use super::{Relation, Template};

const TABLE: &[(Relation, &[&str])] = &[
    (
        Relation::Hyp,
        &[
            "a {W} is a type of a {V}",
            "a {W} is a kind of a {V}",
            "the word {W} has a more specific meaning than the word {V}",
            "a {W} is a {V}",
            "a {W} is a specific case of a {V}",
            "a {W} is a subordinate type of a {V}",
            "the word {W} has a more specific sense than the word {V}",
        ],
    ),
    (
        Relation::Hpo,
        &[
            "my favorite {W} is a {V}",
            "a {W}, such as a {V}",
            "the word {W} has a more general meaning than the word {V}",
            "the word {W} has a more general sense than the word {V}",
        ],
    ),
    (
        Relation::Hol,
        &[
            "a {W} is a component of a {V}",
            "a {W} is a part of a {V}",
            "a {W} is contained in a {V}",
            "a {W} belongs to constituents of a {V}",
            "a {W} belongs to parts of a {V}",
            "a {W} belongs to components of a {V}",
            "a {W} is a constituent of a {V}",
        ],
    ),
    (
        Relation::Mer,
        &[
            "constituents of a {W} include a {V}",
            "components of a {W} include a {V}",
            "parts of a {W} include a {V}",
            "a {W} consists of a {V}",
            "a {W} has a {V}",
            "a {W} contains a {V}",
        ],
    ),
    (
        Relation::Ant,
        &[
            "it is not likely to be both a {W} and a {V}",
            "a {W} is the opposite of a {V}",
            "the word {W} has an opposite sense of the word {V}",
            "it is impossible to be both a {W} and a {V}",
            "the word {W} has a meaning that negates the meaning of the word {V}",
            "it is a {W} so it is not a {V}",
            "the word {W} has an opposite meaning of the word {V}",
            "if something is a {W}, then it can not also be a {V}",
            "the word {W} has a sense that negates the sense of the word {V}",
        ],
    ),
    (
        Relation::Syn,
        &[
            "a {W} is also known as a {V}",
            "a {W} is often referred to as a {V}",
            "the word {W} has a similar meaning as the word {V}",
            "a {W} is similar to a {V}",
            "the word {W} means nearly the same as the word {V}",
            "a {W} is indistinguishable from a {V}",
            "a {W} is also called a {V}",
        ],
    ),
];

/// The 40 elicitation templates. Ids are `<REL>-<NN>`, numbered in table order.
pub fn builtin_templates() -> Vec<Template> {
    TABLE
        .iter()
        .flat_map(|(relation, texts)| {
            texts.iter().enumerate().map(move |(i, text)| Template {
                id: format!("{}-{:02}", relation.as_str(), i + 1),
                relation: *relation,
                text: text.to_string(),
            })
        })
        .collect()
}

/// SHA-256 over `id \t relation \t text \n` lines, hex encoded.
pub fn template_checksum(templates: &[Template]) -> String {
    let mut hasher = Sha256::new();
    for t in templates {
        hasher.update(format!("{}\t{}\t{}\n", t.id, t.relation, t.text));
    }
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::elicitation::{RELATUM_SLOT, TARGET_SLOT};

    #[test]
    fn counts_per_relation() {
        let templates = builtin_templates();
        assert_eq!(templates.len(), 40);
        let mut counts = BTreeMap::new();
        for t in &templates {
            *counts.entry(t.relation).or_insert(0) += 1;
        }
        let expected: BTreeMap<_, _> = [
            (Relation::Hyp, 7),
            (Relation::Hpo, 4),
            (Relation::Hol, 7),
            (Relation::Mer, 6),
            (Relation::Ant, 9),
            (Relation::Syn, 7),
        ]
        .into_iter()
        .collect();
        assert_eq!(counts, expected);
    }

    #[test]
    fn one_slot_each() {
        for t in builtin_templates() {
            assert_eq!(t.text.matches(TARGET_SLOT).count(), 1, "{}", t.id);
            assert_eq!(t.text.matches(RELATUM_SLOT).count(), 1, "{}", t.id);
        }
    }

    #[test]
    fn ids_are_unique() {
        let templates = builtin_templates();
        let mut ids: Vec<_> = templates.iter().map(|t| t.id.as_str()).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), templates.len());
        assert_eq!(templates[0].id, "HYP-01");
        assert_eq!(templates[39].id, "SYN-07");
    }

    #[test]
    fn inventory_is_frozen() {
        let a = template_checksum(&builtin_templates());
        assert_eq!(a, template_checksum(&builtin_templates()));
        assert_eq!(a, FROZEN_CHECKSUM);
    }

    const FROZEN_CHECKSUM: &str = "8538cafeadc6e5a251bda1fabbc4090be386af17c2e86bd2524049fd3a64babe";
}
