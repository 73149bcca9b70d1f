//! Synthetic fragment generation: build randomized fragments as unions of
//! ground-truth mappings, the way the evaluation constructs its inputs.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::truth::{GroundTruth, TruthContent};
use crate::error::{Error, Result};
use crate::fragment::Fragment;
use crate::method::MethodRef;

/// Experiment setting.
///
/// * A — fragments union one-to-one truths only.
/// * B — fragments union truths of every cardinality.
/// * C — like A, but the consumer enables the documentation split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Setting {
    A,
    B,
    C,
}

impl Setting {
    pub fn as_str(&self) -> &'static str {
        match self {
            Setting::A => "A",
            Setting::B => "B",
            Setting::C => "C",
        }
    }

    /// Documentation split enabled for the mapper under this setting.
    pub fn ld_enabled(&self) -> bool {
        matches!(self, Setting::C)
    }

    /// The portion of the pool this setting draws from (and is scored
    /// against).
    pub fn effective_truth(&self, pool: &GroundTruth) -> GroundTruth {
        match self {
            Setting::A | Setting::C => pool.one_to_one_subset(),
            Setting::B => pool.clone(),
        }
    }
}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Setting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Setting> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(Setting::A),
            "B" => Ok(Setting::B),
            "C" => Ok(Setting::C),
            other => Err(Error::Config(format!(
                "unknown setting {other:?}; expected A, B, or C"
            ))),
        }
    }
}

/// Generate `count` fragments, each the union of randomly drawn truth
/// mappings whose combined method count stays within `max_methods`. Pure in
/// `seed` (ChaCha8 keyed stream, so identical across platforms).
pub fn synthesize_fragments(
    pool: &GroundTruth,
    setting: Setting,
    max_methods: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<Fragment>> {
    let effective = setting.effective_truth(pool);
    if setting == Setting::B {
        let (ones, one_many, many) = pool.cardinality_counts();
        if ones == 0 || one_many == 0 || many == 0 {
            return Err(Error::Config(format!(
                "setting B needs every cardinality in the pool; found {ones} one-to-one, \
                 {one_many} one-to-many, {many} many-to-many"
            )));
        }
    }
    let eligible: Vec<&TruthContent> = effective
        .iter()
        .filter(|(r, a)| r.len() + a.len() <= max_methods)
        .collect();
    if eligible.is_empty() {
        return Err(Error::Config(format!(
            "no truth mapping fits max_methods={max_methods} for setting {setting}"
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fragments = Vec::with_capacity(count);
    let mut drawn = vec![false; eligible.len()];
    for _ in 0..count {
        let mut removed: BTreeSet<MethodRef> = BTreeSet::new();
        let mut added: BTreeSet<MethodRef> = BTreeSet::new();
        drawn.iter_mut().for_each(|d| *d = false);
        let mut distinct = 0;
        loop {
            let pick = rng.gen_range(0..eligible.len());
            let (r, a) = eligible[pick];
            let grown_removed: BTreeSet<MethodRef> = removed.union(r).cloned().collect();
            let grown_added: BTreeSet<MethodRef> = added.union(a).cloned().collect();
            if !removed.is_empty()
                && grown_removed.len() + grown_added.len() > max_methods
            {
                break; // the draw that no longer fits ends the fragment
            }
            removed = grown_removed;
            added = grown_added;
            if !drawn[pick] {
                drawn[pick] = true;
                distinct += 1;
                if distinct == eligible.len() {
                    break; // whole pool already unioned; nothing can overflow
                }
            }
        }
        fragments.push(Fragment::new(removed, added, 1).expect("union of truths is two-sided"));
    }
    Ok(fragments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    fn pool() -> GroundTruth {
        super::super::truth::parse_truth(
            "a/0;pa/0\n\
             b/0;pb/0\n\
             c/0;pc/0\n\
             d/0;pd/0\n\
             e/0;pe/1,pf/1\n\
             f/0,g/0;pg/0,ph/0\n",
            Path::new("<test>"),
        )
        .unwrap()
    }

    #[test]
    fn deterministic_in_seed() {
        let p = pool();
        let one = synthesize_fragments(&p, Setting::A, 5, 20, 42).unwrap();
        let two = synthesize_fragments(&p, Setting::A, 5, 20, 42).unwrap();
        assert_eq!(one, two);
        let three = synthesize_fragments(&p, Setting::A, 5, 20, 43).unwrap();
        assert_ne!(one, three);
    }

    #[test]
    fn respects_max_methods_and_count() {
        let p = pool();
        for setting in [Setting::A, Setting::B] {
            let fragments = synthesize_fragments(&p, setting, 5, 30, 7).unwrap();
            assert_eq!(fragments.len(), 30);
            assert!(fragments.iter().all(|f| f.method_count() <= 5));
        }
    }

    #[test]
    fn setting_a_unions_only_one_to_one_truths() {
        let p = pool();
        let fragments = synthesize_fragments(&p, Setting::A, 10, 50, 1).unwrap();
        let ones = p.one_to_one_subset();
        // Every method must trace back to some one-to-one truth.
        let mut known: BTreeSet<&MethodRef> = BTreeSet::new();
        for (r, a) in ones.iter() {
            known.extend(r.iter());
            known.extend(a.iter());
        }
        for f in &fragments {
            for m in f.removed.iter().chain(f.added.iter()) {
                assert!(known.contains(m), "unexpected method {m}");
            }
        }
    }

    #[test]
    fn setting_b_draws_mixed_cardinalities() {
        let p = pool();
        // Across a few seeds, a many-to-many truth should appear whole.
        let target: TruthContent = p
            .iter()
            .find(|(r, a)| r.len() == 2 && a.len() == 2)
            .cloned()
            .unwrap();
        let mut seen = false;
        for seed in 0..10 {
            for f in synthesize_fragments(&p, Setting::B, 20, 50, seed).unwrap() {
                if target.0.is_subset(&f.removed) && target.1.is_subset(&f.added) {
                    seen = true;
                }
            }
        }
        assert!(seen, "many-to-many truth never drawn across seeds");
    }

    #[test]
    fn setting_b_requires_all_cardinalities() {
        let ones_only = super::super::truth::parse_truth(
            "a/0;x/0\nb/0;y/0\n",
            Path::new("<test>"),
        )
        .unwrap();
        assert!(synthesize_fragments(&ones_only, Setting::B, 10, 5, 0).is_err());
    }

    #[test]
    fn methods_trace_back_to_truths() {
        let p = pool();
        let fragments = synthesize_fragments(&p, Setting::B, 10, 40, 3).unwrap();
        let mut known: BTreeSet<&MethodRef> = BTreeSet::new();
        for (r, a) in p.iter() {
            known.extend(r.iter());
            known.extend(a.iter());
        }
        for f in &fragments {
            assert!(f.removed.iter().all(|m| known.contains(m)));
            assert!(f.added.iter().all(|m| known.contains(m)));
        }
    }
}
