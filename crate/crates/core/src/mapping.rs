//! The substitution engine: reduce a fragment set to method mappings by
//! repeated component-wise intersection, then break surviving many-to-many
//! fragments with description similarity.
//!
//! The loop sorts fragments (method count ascending, frequency descending),
//! finds the first intersecting pair in that order, and replaces the pair
//! with its intersection plus any two-sided residuals; one-sided residuals
//! are discarded. When no pair intersects, the single best-scoring
//! (removed, added) method pair across all many-to-many fragments is born as
//! a new one-to-one fragment — if its score reaches the mean score of the
//! current one-to-one fragments — and the loop restarts. Surviving fragments
//! become mappings.
//!
//! Internally the engine interns methods to integers and keeps fragments in
//! an ordered map so a run over a thousand fragments stays cheap on one core;
//! the public [`crate::fragment::FragmentSet`] operations express the same
//! algebra directly on [`Fragment`] values and the test suite cross-checks
//! the two against each other.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::fragment::{Fragment, FragmentSet, Provenance};
use crate::method::MethodRef;
use crate::simdoc::{csld, VectorSpace};

/// How many methods each side of a mapping has.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cardinality {
    OneToOne,
    OneToMany,
    ManyToMany,
}

impl Cardinality {
    /// One removed, one added → one-to-one; one removed, several added →
    /// one-to-many; everything else (several removed) → many-to-many.
    pub fn of(removed: usize, added: usize) -> Cardinality {
        match (removed, added) {
            (1, 1) => Cardinality::OneToOne,
            (1, _) => Cardinality::OneToMany,
            _ => Cardinality::ManyToMany,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Cardinality::OneToOne => "one-to-one",
            Cardinality::OneToMany => "one-to-many",
            Cardinality::ManyToMany => "many-to-many",
        }
    }
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A finalized method mapping.
#[derive(Debug, Clone, PartialEq)]
pub struct Mapping {
    pub removed: BTreeSet<MethodRef>,
    pub added: BTreeSet<MethodRef>,
    pub support: u64,
    pub similarity: Option<f64>,
    /// False only for many-to-many fragments the engine emitted as-is.
    pub resolved: bool,
}

impl Mapping {
    pub fn cardinality(&self) -> Cardinality {
        Cardinality::of(self.removed.len(), self.added.len())
    }

    /// Content identity used when matching against ground truth.
    pub fn content(&self) -> (BTreeSet<MethodRef>, BTreeSet<MethodRef>) {
        (self.removed.clone(), self.added.clone())
    }

    pub fn to_json_line(&self) -> String {
        #[derive(Serialize)]
        struct Wire<'a> {
            removed: Vec<String>,
            added: Vec<String>,
            support: u64,
            cardinality: &'a str,
            #[serde(skip_serializing_if = "Option::is_none")]
            similarity: Option<f64>,
            resolved: bool,
        }
        let wire = Wire {
            removed: self.removed.iter().map(MethodRef::encode).collect(),
            added: self.added.iter().map(MethodRef::encode).collect(),
            support: self.support,
            cardinality: self.cardinality().as_str(),
            similarity: self.similarity,
            resolved: self.resolved,
        };
        serde_json::to_string(&wire).expect("mapping serializes")
    }
}

impl fmt::Display for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let removed: Vec<String> = self.removed.iter().map(|m| m.encode()).collect();
        let added: Vec<String> = self.added.iter().map(|m| m.encode()).collect();
        write!(
            f,
            "{} -> {} (support {}, {})",
            removed.join("+"),
            added.join("+"),
            self.support,
            self.cardinality()
        )
    }
}

/// Description-similarity scorer backing LD: memoizes pair scores and counts
/// distinct computations, which is the number the evaluation reports.
pub struct LdScorer<'a> {
    space: VectorSpace,
    source: &'a Catalog,
    target: &'a Catalog,
    floor: f64,
    memo: HashMap<(String, usize, String, usize), Option<f64>>,
    invocations: u64,
}

impl<'a> LdScorer<'a> {
    /// Build a scorer whose idf corpus is every described method of both
    /// catalogs.
    pub fn new(source: &'a Catalog, target: &'a Catalog, floor: f64) -> LdScorer<'a> {
        let space = VectorSpace::build(source.descriptions().chain(target.descriptions()));
        LdScorer::with_space(space, source, target, floor)
    }

    /// Reuse a prebuilt vector space (the evaluation shares one across runs).
    pub fn with_space(
        space: VectorSpace,
        source: &'a Catalog,
        target: &'a Catalog,
        floor: f64,
    ) -> LdScorer<'a> {
        LdScorer {
            space,
            source,
            target,
            floor,
            memo: HashMap::new(),
            invocations: 0,
        }
    }

    /// Distinct (removed, added) pairs scored so far.
    pub fn invocations(&self) -> u64 {
        self.invocations
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    /// Score a candidate pair; `None` when either method lacks documentation.
    /// Counts toward [`LdScorer::invocations`]: this is the lookup made to
    /// resolve an unresolved fragment.
    pub fn score_pair(&mut self, removed: &MethodRef, added: &MethodRef) -> Option<f64> {
        self.score_inner(removed, added, true)
    }

    /// Score a pair for the threshold mean over already-resolved one-to-one
    /// fragments. Shares the memo but is not counted as a resolution lookup.
    pub fn score_threshold_pair(&mut self, removed: &MethodRef, added: &MethodRef) -> Option<f64> {
        self.score_inner(removed, added, false)
    }

    fn score_inner(&mut self, removed: &MethodRef, added: &MethodRef, counted: bool) -> Option<f64> {
        let key = (
            removed.name.clone(),
            removed.arity,
            added.name.clone(),
            added.arity,
        );
        if let Some(cached) = self.memo.get(&key) {
            return *cached;
        }
        let score = match (
            self.source.description_for(removed),
            self.target.description_for(added),
        ) {
            (Some(r), Some(a)) if !r.is_empty() && !a.is_empty() => {
                if counted {
                    self.invocations += 1;
                }
                Some(csld(&self.space, &[r], &[a]))
            }
            _ => None,
        };
        self.memo.insert(key, score);
        score
    }
}

/// The best (removed, added) pair across many-to-many fragments, and the
/// threshold it had to clear. Shared by the public `ld_split` and the engine.
fn ld_candidate<'m>(
    one_to_one: &[(&'m MethodRef, &'m MethodRef)],
    many_to_many: &[(&'m BTreeSet<MethodRef>, &'m BTreeSet<MethodRef>)],
    scorer: &mut LdScorer,
) -> Option<(MethodRef, MethodRef, f64)> {
    // Threshold: mean score of the current one-to-one fragments, or the
    // configured floor when none exist yet. Undocumented pairs count zero.
    let max_score = if one_to_one.is_empty() {
        scorer.floor
    } else {
        let total: f64 = one_to_one
            .iter()
            .map(|(r, a)| scorer.score_threshold_pair(r, a).unwrap_or(0.0))
            .sum();
        total / one_to_one.len() as f64
    };

    let mut best: Option<(MethodRef, MethodRef, f64)> = None;
    for (removed, added) in many_to_many {
        for r in removed.iter() {
            for a in added.iter() {
                let Some(score) = scorer.score_pair(r, a) else {
                    continue; // undocumented; cannot be paired by LD
                };
                let better = match &best {
                    None => true,
                    Some((br, ba, bs)) => score > *bs || (score == *bs && (r, a) < (br, ba)),
                };
                if better {
                    best = Some((r.clone(), a.clone(), score));
                }
            }
        }
    }
    best.filter(|(_, _, score)| *score >= max_score)
}

/// Attempt one documentation split on a fragment set: returns the new
/// one-to-one fragment (frequency 1, similarity recorded) or `None` when no
/// candidate reaches the threshold. Does not modify the set.
pub fn ld_split(set: &FragmentSet, scorer: &mut LdScorer) -> Option<Fragment> {
    let mut ones: Vec<(&MethodRef, &MethodRef)> = Vec::new();
    let mut manys: Vec<(&BTreeSet<MethodRef>, &BTreeSet<MethodRef>)> = Vec::new();
    for f in set.iter() {
        match Cardinality::of(f.removed.len(), f.added.len()) {
            Cardinality::OneToOne => ones.push((
                f.removed.iter().next().unwrap(),
                f.added.iter().next().unwrap(),
            )),
            Cardinality::ManyToMany => manys.push((&f.removed, &f.added)),
            Cardinality::OneToMany => {}
        }
    }
    if manys.is_empty() {
        return None;
    }
    let (r, a, score) = ld_candidate(&ones, &manys, scorer)?;
    let mut fragment = Fragment::new([r], [a], 1).expect("born fragment is two-sided");
    fragment.similarity = Some(score);
    Some(fragment)
}

/// Counters the engine reports alongside its mappings.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct SubstitutionStats {
    /// Intersection steps applied.
    pub intersections: u64,
    /// Fragments born from documentation splits.
    pub ld_born: u64,
    /// Distinct description-similarity computations (0 when LD is disabled).
    pub doc_invocations: u64,
}

#[derive(Debug, Clone)]
pub struct SubstitutionOutcome {
    pub mappings: Vec<Mapping>,
    pub stats: SubstitutionStats,
}

/// Run the full substitution loop. `scorer` enables the documentation split;
/// pass `None` to run on intersections alone.
pub fn substitution(
    fragments: &[Fragment],
    mut scorer: Option<&mut LdScorer>,
) -> Result<SubstitutionOutcome> {
    let mut engine = Engine::build(fragments);
    let initial_mass = engine.mass;
    let cap = 16 + 10 * initial_mass as u64;
    let mut stats = SubstitutionStats::default();
    let invocations_before = scorer.as_ref().map_or(0, |s| s.invocations());

    loop {
        while let Some((i, j)) = engine.first_intersecting_pair() {
            let before = engine.mass + engine.live;
            engine.apply_intersection(i, j);
            stats.intersections += 1;
            if engine.mass + engine.live >= before {
                return Err(Error::Invariant(format!(
                    "intersection step did not decrease the progress measure; set: {}",
                    engine.dump()
                )));
            }
            if stats.intersections + stats.ld_born > cap {
                return Err(Error::Invariant(format!(
                    "substitution exceeded {} iterations from mass {}; set: {}",
                    cap,
                    initial_mass,
                    engine.dump()
                )));
            }
        }
        if let Some(s) = scorer.as_deref_mut() {
            if let Some(born) = engine.ld_split(s) {
                engine.insert_merge(born);
                stats.ld_born += 1;
                if stats.intersections + stats.ld_born > cap {
                    return Err(Error::Invariant(format!(
                        "substitution exceeded {} iterations from mass {}; set: {}",
                        cap,
                        initial_mass,
                        engine.dump()
                    )));
                }
                continue;
            }
        }
        break;
    }

    stats.doc_invocations = scorer.as_ref().map_or(0, |s| s.invocations()) - invocations_before;
    Ok(SubstitutionOutcome {
        mappings: engine.into_mappings(),
        stats,
    })
}

// ---------------------------------------------------------------------------
// Interned engine
// ---------------------------------------------------------------------------

type Ids = Box<[u32]>;

#[derive(Debug)]
struct EFrag {
    removed: Ids,
    added: Ids,
    freq: u64,
    similarity: Option<f64>,
    provenance: Vec<Provenance>,
    sig_removed: u128,
    sig_added: u128,
}

impl EFrag {
    fn count(&self) -> u32 {
        (self.removed.len() + self.added.len()) as u32
    }
}

/// Sort key mirroring the canonical fragment order: method count ascending,
/// frequency descending, then content. Method ids are assigned in method
/// order, so comparing id sequences is a total, deterministic tie-break.
type OrderKey = (u32, u64, Ids, Ids);

fn order_key(f: &EFrag) -> OrderKey {
    (
        f.count(),
        u64::MAX - f.freq,
        f.removed.clone(),
        f.added.clone(),
    )
}

fn signature(ids: &[u32]) -> u128 {
    ids.iter().fold(0u128, |acc, id| acc | (1u128 << (id % 128)))
}

struct Engine {
    src_refs: Vec<MethodRef>,
    dst_refs: Vec<MethodRef>,
    slots: Vec<Option<EFrag>>,
    free: Vec<usize>,
    order: BTreeMap<OrderKey, usize>,
    index: HashMap<(Ids, Ids), usize>,
    /// Σ method counts over live fragments.
    mass: usize,
    live: usize,
}

impl Engine {
    fn build(fragments: &[Fragment]) -> Engine {
        let mut src: BTreeSet<&MethodRef> = BTreeSet::new();
        let mut dst: BTreeSet<&MethodRef> = BTreeSet::new();
        for f in fragments {
            src.extend(f.removed.iter());
            dst.extend(f.added.iter());
        }
        let src_refs: Vec<MethodRef> = src.into_iter().cloned().collect();
        let dst_refs: Vec<MethodRef> = dst.into_iter().cloned().collect();
        let efrags: Vec<EFrag> = {
            let src_ids: HashMap<&MethodRef, u32> = src_refs
                .iter()
                .enumerate()
                .map(|(i, m)| (m, i as u32))
                .collect();
            let dst_ids: HashMap<&MethodRef, u32> = dst_refs
                .iter()
                .enumerate()
                .map(|(i, m)| (m, i as u32))
                .collect();
            fragments
                .iter()
                .map(|f| {
                    // BTreeSet iteration follows the interning order, so these
                    // id sequences come out sorted.
                    let removed: Ids = f.removed.iter().map(|m| src_ids[m]).collect();
                    let added: Ids = f.added.iter().map(|m| dst_ids[m]).collect();
                    EFrag {
                        sig_removed: signature(&removed),
                        sig_added: signature(&added),
                        removed,
                        added,
                        freq: f.frequency,
                        similarity: f.similarity,
                        provenance: f.provenance.clone(),
                    }
                })
                .collect()
        };

        let mut engine = Engine {
            slots: Vec::with_capacity(efrags.len()),
            free: Vec::new(),
            order: BTreeMap::new(),
            index: HashMap::with_capacity(efrags.len()),
            mass: 0,
            live: 0,
            src_refs,
            dst_refs,
        };
        for frag in efrags {
            engine.insert_raw(frag);
        }
        engine
    }

    fn insert_raw(&mut self, frag: EFrag) {
        let content = (frag.removed.clone(), frag.added.clone());
        if let Some(&slot) = self.index.get(&content) {
            // Dedup-merge: same content, sum frequency, keep best similarity.
            let existing = self.slots[slot].as_mut().expect("indexed slot is live");
            let old_key = order_key(existing);
            existing.freq += frag.freq;
            existing.provenance.extend(frag.provenance);
            existing.similarity = match (existing.similarity, frag.similarity) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            };
            let new_key = order_key(existing);
            self.order.remove(&old_key);
            self.order.insert(new_key, slot);
        } else {
            self.mass += frag.count() as usize;
            self.live += 1;
            let slot = match self.free.pop() {
                Some(s) => {
                    self.slots[s] = Some(frag);
                    s
                }
                None => {
                    self.slots.push(Some(frag));
                    self.slots.len() - 1
                }
            };
            let f = self.slots[slot].as_ref().unwrap();
            self.order.insert(order_key(f), slot);
            self.index.insert(content, slot);
        }
    }

    fn insert_merge(&mut self, fragment: Fragment) {
        // Only used for LD-born fragments, whose methods already exist in the
        // interner (they come from a surviving many-to-many fragment).
        let removed: Ids = fragment
            .removed
            .iter()
            .map(|m| {
                self.src_refs
                    .binary_search(m)
                    .expect("LD-born method came from a live fragment") as u32
            })
            .collect();
        let added: Ids = fragment
            .added
            .iter()
            .map(|m| {
                self.dst_refs
                    .binary_search(m)
                    .expect("LD-born method came from a live fragment") as u32
            })
            .collect();
        self.insert_raw(EFrag {
            sig_removed: signature(&removed),
            sig_added: signature(&added),
            removed,
            added,
            freq: fragment.frequency,
            similarity: fragment.similarity,
            provenance: fragment.provenance,
        });
    }

    fn remove_slot(&mut self, slot: usize) -> EFrag {
        let frag = self.slots[slot].take().expect("slot is live");
        self.order.remove(&order_key(&frag));
        self.index.remove(&(frag.removed.clone(), frag.added.clone()));
        self.mass -= frag.count() as usize;
        self.live -= 1;
        self.free.push(slot);
        frag
    }

    /// First pair in canonical order whose component-wise intersection is
    /// non-null. The bit signatures reject almost all disjoint pairs with two
    /// AND operations before the exact check runs.
    fn first_intersecting_pair(&self) -> Option<(usize, usize)> {
        let snapshot: Vec<usize> = self.order.values().copied().collect();
        let sigs: Vec<(u128, u128)> = snapshot
            .iter()
            .map(|&s| {
                let f = self.slots[s].as_ref().unwrap();
                (f.sig_removed, f.sig_added)
            })
            .collect();
        for i in 0..snapshot.len() {
            let (sig_ri, sig_ai) = sigs[i];
            let fi = self.slots[snapshot[i]].as_ref().unwrap();
            for j in (i + 1)..snapshot.len() {
                let (sig_rj, sig_aj) = sigs[j];
                if sig_ri & sig_rj == 0 || sig_ai & sig_aj == 0 {
                    continue;
                }
                let fj = self.slots[snapshot[j]].as_ref().unwrap();
                if sorted_intersects(&fi.removed, &fj.removed)
                    && sorted_intersects(&fi.added, &fj.added)
                {
                    return Some((snapshot[i], snapshot[j]));
                }
            }
        }
        None
    }

    fn apply_intersection(&mut self, slot_i: usize, slot_j: usize) {
        let f1 = self.remove_slot(slot_i);
        let f2 = self.remove_slot(slot_j);
        let iset_removed: Ids = sorted_intersect(&f1.removed, &f2.removed);
        let iset_added: Ids = sorted_intersect(&f1.added, &f2.added);
        debug_assert!(!iset_removed.is_empty() && !iset_added.is_empty());

        for parent in [&f1, &f2] {
            let res_removed = sorted_subtract(&parent.removed, &iset_removed);
            if res_removed.is_empty() {
                continue;
            }
            let res_added = sorted_subtract(&parent.added, &iset_added);
            if res_added.is_empty() {
                continue; // one-sided residual: discarded
            }
            self.insert_raw(EFrag {
                sig_removed: signature(&res_removed),
                sig_added: signature(&res_added),
                removed: res_removed,
                added: res_added,
                freq: parent.freq,
                similarity: parent.similarity,
                provenance: parent.provenance.clone(),
            });
        }

        let mut provenance = f1.provenance;
        provenance.extend(f2.provenance);
        self.insert_raw(EFrag {
            sig_removed: signature(&iset_removed),
            sig_added: signature(&iset_added),
            removed: iset_removed,
            added: iset_added,
            freq: f1.freq + f2.freq,
            similarity: match (f1.similarity, f2.similarity) {
                (Some(x), Some(y)) => Some(x.max(y)),
                (x, y) => x.or(y),
            },
            provenance,
        });
    }

    fn ld_split(&self, scorer: &mut LdScorer) -> Option<Fragment> {
        let mut ones: Vec<(&MethodRef, &MethodRef)> = Vec::new();
        let mut manys: Vec<(BTreeSet<MethodRef>, BTreeSet<MethodRef>)> = Vec::new();
        for (_, &slot) in self.order.iter() {
            let f = self.slots[slot].as_ref().unwrap();
            match Cardinality::of(f.removed.len(), f.added.len()) {
                Cardinality::OneToOne => ones.push((
                    &self.src_refs[f.removed[0] as usize],
                    &self.dst_refs[f.added[0] as usize],
                )),
                Cardinality::ManyToMany => manys.push((
                    f.removed
                        .iter()
                        .map(|&id| self.src_refs[id as usize].clone())
                        .collect(),
                    f.added
                        .iter()
                        .map(|&id| self.dst_refs[id as usize].clone())
                        .collect(),
                )),
                Cardinality::OneToMany => {}
            }
        }
        if manys.is_empty() {
            return None;
        }
        let many_refs: Vec<(&BTreeSet<MethodRef>, &BTreeSet<MethodRef>)> =
            manys.iter().map(|(r, a)| (r, a)).collect();
        let (r, a, score) = ld_candidate(&ones, &many_refs, scorer)?;
        let mut fragment = Fragment::new([r], [a], 1).expect("born fragment is two-sided");
        fragment.similarity = Some(score);
        Some(fragment)
    }

    fn into_mappings(self) -> Vec<Mapping> {
        let mut mappings = Vec::with_capacity(self.live);
        for (_, &slot) in self.order.iter() {
            let f = self.slots[slot].as_ref().unwrap();
            let removed: BTreeSet<MethodRef> = f
                .removed
                .iter()
                .map(|&id| self.src_refs[id as usize].clone())
                .collect();
            let added: BTreeSet<MethodRef> = f
                .added
                .iter()
                .map(|&id| self.dst_refs[id as usize].clone())
                .collect();
            let resolved = Cardinality::of(removed.len(), added.len()) != Cardinality::ManyToMany;
            mappings.push(Mapping {
                removed,
                added,
                support: f.freq,
                similarity: f.similarity,
                resolved,
            });
        }
        mappings
    }

    fn dump(&self) -> String {
        let mut parts = Vec::new();
        for (_, &slot) in self.order.iter().take(20) {
            let f = self.slots[slot].as_ref().unwrap();
            parts.push(format!(
                "{:?}->{:?} (freq {})",
                f.removed, f.added, f.freq
            ));
        }
        if self.live > 20 {
            parts.push(format!("... {} fragments total", self.live));
        }
        parts.join("; ")
    }
}

fn sorted_intersects(a: &[u32], b: &[u32]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => return true,
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    false
}

fn sorted_intersect(a: &[u32], b: &[u32]) -> Ids {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
        }
    }
    out.into_boxed_slice()
}

fn sorted_subtract(a: &[u32], b: &[u32]) -> Ids {
    let mut out = Vec::new();
    let mut j = 0;
    for &x in a {
        while j < b.len() && b[j] < x {
            j += 1;
        }
        if j >= b.len() || b[j] != x {
            out.push(x);
        }
    }
    out.into_boxed_slice()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::method::Side;

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

    fn contents(mappings: &[Mapping]) -> BTreeSet<(Vec<String>, Vec<String>, u64)> {
        mappings
            .iter()
            .map(|m| {
                (
                    m.removed.iter().map(|x| x.encode()).collect(),
                    m.added.iter().map(|x| x.encode()).collect(),
                    m.support,
                )
            })
            .collect()
    }

    #[test]
    fn disjoint_one_to_ones_pass_through() {
        let input = vec![frag(&["a/0"], &["x/0"], 2), frag(&["b/1"], &["y/1"], 1)];
        let out = substitution(&input, None).unwrap();
        assert_eq!(out.mappings.len(), 2);
        assert_eq!(out.stats.intersections, 0);
        assert!(out.mappings.iter().all(|m| m.resolved));
    }

    #[test]
    fn one_intersection_step_splits_a_pair() {
        // {a,b}->{x,y} with {a}->{x}: the intersection absorbs the support
        // and the residual {b}->{y} survives.
        let input = vec![
            frag(&["a/0", "b/0"], &["x/0", "y/0"], 1),
            frag(&["a/0"], &["x/0"], 1),
        ];
        let out = substitution(&input, None).unwrap();
        let expected: BTreeSet<_> = [
            (vec!["a/0".to_string()], vec!["x/0".to_string()], 2u64),
            (vec!["b/0".to_string()], vec!["y/0".to_string()], 1u64),
        ]
        .into_iter()
        .collect();
        assert_eq!(contents(&out.mappings), expected);
        assert_eq!(out.stats.intersections, 1);
    }

    #[test]
    fn one_sided_residual_is_discarded() {
        // {a,b}->{x} and {a}->{x}: residual would be {b}->{} and is dropped.
        let input = vec![
            frag(&["a/0", "b/0"], &["x/0"], 1),
            frag(&["a/0"], &["x/0"], 3),
        ];
        let out = substitution(&input, None).unwrap();
        assert_eq!(out.mappings.len(), 1);
        assert_eq!(out.mappings[0].support, 4);
        assert_eq!(out.mappings[0].removed.len(), 1);
    }

    #[test]
    fn duplicate_inputs_merge_before_anything_else() {
        let input = vec![
            frag(&["a/0"], &["x/0"], 1),
            frag(&["a/0"], &["x/0"], 1),
            frag(&["a/0"], &["x/0"], 1),
        ];
        let out = substitution(&input, None).unwrap();
        assert_eq!(out.mappings.len(), 1);
        assert_eq!(out.mappings[0].support, 3);
    }

    #[test]
    fn many_to_many_survivor_is_unresolved() {
        let input = vec![frag(&["a/0", "b/0"], &["x/0", "y/0"], 1)];
        let out = substitution(&input, None).unwrap();
        assert_eq!(out.mappings.len(), 1);
        assert!(!out.mappings[0].resolved);
        assert_eq!(out.mappings[0].cardinality(), Cardinality::ManyToMany);
    }

    #[test]
    fn engine_matches_simple_set_on_a_chain() {
        // Three overlapping fragments reduce identically through the simple
        // FragmentSet operations and the interned engine.
        let input = vec![
            frag(&["a/0", "b/0", "c/0"], &["x/0", "y/0", "z/0"], 1),
            frag(&["a/0", "b/0"], &["x/0", "y/0"], 1),
            frag(&["b/0"], &["y/0"], 1),
        ];
        let engine_out = substitution(&input, None).unwrap();

        let mut set = FragmentSet::from_fragments(input);
        while let Some((i, j)) = set.first_intersecting_pair() {
            set.apply_intersection(i, j);
        }
        let simple: BTreeSet<_> = set
            .iter()
            .map(|f| {
                (
                    f.removed.iter().map(|m| m.encode()).collect::<Vec<_>>(),
                    f.added.iter().map(|m| m.encode()).collect::<Vec<_>>(),
                    f.frequency,
                )
            })
            .collect();
        assert_eq!(contents(&engine_out.mappings), simple);
    }

    #[test]
    fn cardinality_classes() {
        assert_eq!(Cardinality::of(1, 1), Cardinality::OneToOne);
        assert_eq!(Cardinality::of(1, 3), Cardinality::OneToMany);
        // Several removed methods always class as many-to-many, even against
        // a single added method.
        assert_eq!(Cardinality::of(2, 1), Cardinality::ManyToMany);
        assert_eq!(Cardinality::of(2, 2), Cardinality::ManyToMany);
    }

    #[test]
    fn mapping_serializes_with_cardinality() {
        let m = Mapping {
            removed: [MethodRef::parse(Side::Source, "put/2").unwrap()]
                .into_iter()
                .collect(),
            added: [MethodRef::parse(Side::Target, "addProperty/2").unwrap()]
                .into_iter()
                .collect(),
            support: 2,
            similarity: None,
            resolved: true,
        };
        let line = m.to_json_line();
        assert!(line.contains("\"cardinality\":\"one-to-one\""));
        assert!(!line.contains("similarity"));
    }
}
