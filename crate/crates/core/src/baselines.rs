//! Baseline mappers the substitution engine is compared against:
//!
//! * FC — frequent-combination counting: enumerate one-to-one combinations
//!   inside every fragment, accumulate their frequencies corpus-wide, accept
//!   the ones seen often enough.
//! * MC — signature matching inside each fragment: pair every removed method
//!   with the most similar added method, greedily, one-to-one.
//! * FS — fragment-free signature matching across whole catalogs.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::catalog::Catalog;
use crate::fragment::FragmentSet;
use crate::mapping::Mapping;
use crate::method::{MethodRef, Side};

/// Token-set similarity of two method signatures: Jaccard overlap of
/// camel-split name tokens (weight 0.8) plus arity agreement (weight 0.2).
pub fn signature_similarity(a: &MethodRef, b: &MethodRef) -> f64 {
    let ta = name_tokens(&a.name);
    let tb = name_tokens(&b.name);
    let inter = ta.intersection(&tb).count() as f64;
    let union = ta.union(&tb).count() as f64;
    let jaccard = if union == 0.0 { 0.0 } else { inter / union };
    let arity = if a.arity == b.arity { 1.0 } else { 0.0 };
    0.8 * jaccard + 0.2 * arity
}

/// Camel-split name tokens, lowercased. Unlike description keyphrases, no
/// stopword filtering: `toString` keeps its `to`.
fn name_tokens(name: &str) -> HashSet<String> {
    name.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .flat_map(crate::simdoc::camel_split)
        .map(str::to_lowercase)
        .collect()
}

fn one_to_one(removed: MethodRef, added: MethodRef, support: u64) -> Mapping {
    Mapping {
        removed: [removed].into_iter().collect(),
        added: [added].into_iter().collect(),
        support,
        similarity: None,
        resolved: true,
    }
}

/// FC: Cartesian one-to-one combinations within each fragment, counted with
/// the fragment's frequency, accepted at `threshold` or above.
pub fn fc_mappings(set: &FragmentSet, threshold: u64) -> Vec<Mapping> {
    let mut counts: BTreeMap<(MethodRef, MethodRef), u64> = BTreeMap::new();
    for fragment in set.iter() {
        for r in &fragment.removed {
            for a in &fragment.added {
                *counts.entry((r.clone(), a.clone())).or_insert(0) += fragment.frequency;
            }
        }
    }
    counts
        .into_iter()
        .filter(|(_, count)| *count >= threshold)
        .map(|((r, a), count)| one_to_one(r, a, count))
        .collect()
}

/// MC: within each fragment, pair every removed method with its best-scoring
/// added method by signature similarity; each added method is used at most
/// once, so the smaller side bounds the number of pairs.
pub fn mc_mappings(set: &FragmentSet) -> Vec<Mapping> {
    let mut out: BTreeMap<(MethodRef, MethodRef), u64> = BTreeMap::new();
    for fragment in set.iter() {
        // Score all pairs, take them best-first; ties resolve in canonical
        // method order so runs are deterministic.
        let mut scored: Vec<(f64, &MethodRef, &MethodRef)> = Vec::new();
        for r in &fragment.removed {
            for a in &fragment.added {
                scored.push((signature_similarity(r, a), r, a));
            }
        }
        scored.sort_by(|(s1, r1, a1), (s2, r2, a2)| {
            s2.partial_cmp(s1)
                .expect("similarity is never NaN")
                .then_with(|| (r1, a1).cmp(&(r2, a2)))
        });
        let mut used_removed: HashSet<&MethodRef> = HashSet::new();
        let mut used_added: HashSet<&MethodRef> = HashSet::new();
        for (_, r, a) in scored {
            if used_removed.contains(r) || used_added.contains(a) {
                continue;
            }
            used_removed.insert(r);
            used_added.insert(a);
            *out.entry((r.clone(), a.clone())).or_insert(0) += fragment.frequency;
        }
    }
    out.into_iter()
        .map(|((r, a), support)| one_to_one(r, a, support))
        .collect()
}

/// FS: pair source and target catalog methods whose signature similarity
/// reaches `threshold`. Ignores fragments entirely.
pub fn fs_mappings(source: &Catalog, target: &Catalog, threshold: f64) -> Vec<Mapping> {
    let mut out = Vec::new();
    for r in source.methods(Side::Source) {
        for a in target.methods(Side::Target) {
            if signature_similarity(&r, &a) >= threshold {
                out.push(one_to_one(r.clone(), a, 1));
            }
        }
    }
    out
}

/// Documentation-need counters for the baselines, mirroring what the
/// substitution engine reports: how many description comparisons each
/// approach would have to make to resolve its fragments.
///
/// MC consults one comparison per (removed, added) pair of every distinct
/// fragment. FC only needs documentation where its accepted combinations
/// leave a fragment ambiguous — fragments whose every method lands in
/// exactly one accepted combination are resolved for free.
pub fn mc_doc_invocations(set: &FragmentSet) -> u64 {
    set.iter()
        .map(|f| (f.removed.len() * f.added.len()) as u64)
        .sum()
}

pub fn fc_doc_invocations(set: &FragmentSet, accepted: &[Mapping]) -> u64 {
    let pairs: HashSet<(&MethodRef, &MethodRef)> = accepted
        .iter()
        .filter(|m| m.cardinality() == crate::mapping::Cardinality::OneToOne)
        .map(|m| {
            (
                m.removed.iter().next().unwrap(),
                m.added.iter().next().unwrap(),
            )
        })
        .collect();
    let mut total = 0u64;
    for fragment in set.iter() {
        if !fc_covers(fragment.removed.iter(), fragment.added.iter(), &pairs) {
            total += (fragment.removed.len() * fragment.added.len()) as u64;
        }
    }
    total
}

/// A fragment is unambiguously covered when every removed method pairs with
/// exactly one added method through the accepted combinations, and vice
/// versa, with no method left out.
fn fc_covers<'a>(
    removed: impl Iterator<Item = &'a MethodRef>,
    added: impl Iterator<Item = &'a MethodRef>,
    pairs: &HashSet<(&MethodRef, &MethodRef)>,
) -> bool {
    let removed: Vec<&MethodRef> = removed.collect();
    let added: Vec<&MethodRef> = added.collect();
    let mut matched_added: BTreeSet<&MethodRef> = BTreeSet::new();
    for r in &removed {
        let candidates: Vec<&&MethodRef> = added
            .iter()
            .filter(|a| pairs.contains(&(*r, **a)))
            .collect();
        if candidates.len() != 1 {
            return false;
        }
        matched_added.insert(*candidates[0]);
    }
    matched_added.len() == added.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fragment::Fragment;

    fn frag(removed: &[&str], added: &[&str], freq: u64) -> Fragment {
        Fragment::new(
            removed
                .iter()
                .map(|m| MethodRef::parse(Side::Source, m).unwrap()),
            added
                .iter()
                .map(|m| MethodRef::parse(Side::Target, m).unwrap()),
            freq,
        )
        .unwrap()
    }

    fn pairs(mappings: &[Mapping]) -> Vec<(String, String)> {
        mappings
            .iter()
            .map(|m| {
                (
                    m.removed.iter().next().unwrap().encode(),
                    m.added.iter().next().unwrap().encode(),
                )
            })
            .collect()
    }

    #[test]
    fn signature_similarity_hand_values() {
        let to_string = MethodRef::parse(Side::Source, "toString/0").unwrap();
        let to_json_string = MethodRef::parse(Side::Target, "toJsonString/0").unwrap();
        // Tokens {to, string} vs {to, json, string}: Jaccard 2/3, arity equal.
        let got = signature_similarity(&to_string, &to_json_string);
        assert!((got - (0.8 * 2.0 / 3.0 + 0.2)).abs() < 1e-12);

        let put = MethodRef::parse(Side::Source, "put/2").unwrap();
        let add = MethodRef::parse(Side::Target, "addProperty/2").unwrap();
        // No shared tokens; only the arity term contributes.
        assert!((signature_similarity(&put, &add) - 0.2).abs() < 1e-12);

        let same = MethodRef::parse(Side::Target, "toString/0").unwrap();
        assert!((signature_similarity(&to_string, &same) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fc_counts_combinations_across_fragments() {
        let set = FragmentSet::from_fragments(vec![
            frag(&["put/2"], &["addProperty/2"], 1),
            frag(&["put/2"], &["addProperty/2"], 1),
            frag(&["put/2"], &["addProperty/2"], 1),
        ]);
        let accepted = fc_mappings(&set, 2);
        assert_eq!(pairs(&accepted), vec![("put/2".into(), "addProperty/2".into())]);
        assert_eq!(accepted[0].support, 3);
    }

    #[test]
    fn fc_threshold_one_includes_false_positives() {
        // A one-sided fragment produces both cross-pairs; the wrong one is
        // exactly the false positive FC is known for.
        let set = FragmentSet::from_fragments(vec![frag(&["a/0", "b/0"], &["x/0"], 1)]);
        let accepted = fc_mappings(&set, 1);
        assert_eq!(accepted.len(), 2);
    }

    #[test]
    fn fc_empty_input() {
        let set = FragmentSet::new();
        assert!(fc_mappings(&set, 2).is_empty());
    }

    #[test]
    fn mc_pairs_by_signature_and_exhausts_added_methods() {
        let set = FragmentSet::from_fragments(vec![frag(
            &["getString/1", "keys/0"],
            &["getAsString/0", "keySet/0"],
            1,
        )]);
        let got = mc_mappings(&set);
        assert_eq!(
            pairs(&got),
            vec![
                ("getString/1".into(), "getAsString/0".into()),
                ("keys/0".into(), "keySet/0".into()),
            ]
        );
    }

    #[test]
    fn mc_leaves_surplus_unmapped() {
        let set = FragmentSet::from_fragments(vec![frag(
            &["a/0", "b/0"],
            &["x/0", "y/0", "z/0"],
            1,
        )]);
        let got = mc_mappings(&set);
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn doc_invocation_counters() {
        let set = FragmentSet::from_fragments(vec![
            frag(&["a/0"], &["x/0"], 2),
            frag(&["a/0", "b/0"], &["x/0", "y/0"], 1),
        ]);
        // MC consults documentation for every pair of every fragment.
        assert_eq!(mc_doc_invocations(&set), 1 + 4);
        // FC with both truths accepted covers both fragments completely.
        let accepted = vec![
            one_to_one(
                MethodRef::parse(Side::Source, "a/0").unwrap(),
                MethodRef::parse(Side::Target, "x/0").unwrap(),
                3,
            ),
            one_to_one(
                MethodRef::parse(Side::Source, "b/0").unwrap(),
                MethodRef::parse(Side::Target, "y/0").unwrap(),
                1,
            ),
        ];
        assert_eq!(fc_doc_invocations(&set, &accepted), 0);
        // With nothing accepted, every fragment is ambiguous.
        assert_eq!(fc_doc_invocations(&set, &[]), 5);
    }
}
