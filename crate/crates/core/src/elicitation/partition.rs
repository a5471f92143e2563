use indexmap::IndexMap;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{ElicitError, Relation, TaskSentence};

/// Splits sentences into `n_subsets` so that no subset holds two sentences
/// with the same (relation, target).
///
/// Groups are placed largest first (ties in seeded random order); each
/// group's sentences go to the currently smallest subsets, with a rotating
/// cursor breaking ties. Subset sizes never differ by more than one.
pub fn partition_tasks(
    sentences: &[TaskSentence],
    n_subsets: usize,
    seed: u64,
) -> Result<Vec<Vec<TaskSentence>>, ElicitError> {
    let mut groups: IndexMap<(Relation, &str), Vec<&TaskSentence>> = IndexMap::new();
    for s in sentences {
        groups.entry((s.relation, s.target.as_str())).or_default().push(s);
    }
    let max_group = groups.values().map(Vec::len).max().unwrap_or(0);
    if n_subsets == 0 || max_group > n_subsets {
        return Err(ElicitError::InfeasiblePartition {
            n_subsets,
            max_group,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut groups: Vec<Vec<&TaskSentence>> = groups.into_values().collect();
    groups.shuffle(&mut rng);
    groups.sort_by_key(|g| std::cmp::Reverse(g.len()));

    let mut subsets: Vec<Vec<TaskSentence>> = vec![Vec::new(); n_subsets];
    let mut order: Vec<usize> = (0..n_subsets).collect();
    let mut cursor = 0;
    for mut group in groups {
        group.shuffle(&mut rng);
        order.sort_by_key(|&i| (subsets[i].len(), (i + n_subsets - cursor) % n_subsets));
        for (&slot, sentence) in order.iter().zip(group.iter()) {
            subsets[slot].push((*sentence).clone());
        }
        cursor = (cursor + group.len()) % n_subsets;
    }
    Ok(subsets)
}
