//! Description similarity (CSLD): keyphrase extraction, TF-IDF weighting over
//! a catalog corpus, and cosine similarity.
//!
//! The pipeline is deliberately local and deterministic: tokenize on
//! non-alphanumeric characters and camel-case boundaries, lowercase, drop
//! stopwords from the shipped list, then keep surviving unigrams plus bigrams
//! of consecutive survivors. Weights use smoothed idf so ubiquitous terms
//! never weigh zero and unseen terms never divide by zero.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::OnceLock;

/// Identifies the shipped stopword list in report headers.
pub const STOPWORDS_VERSION: &str = "en-v1";

const STOPWORDS_RAW: &str = include_str!("stopwords.txt");

fn stopwords() -> &'static HashSet<&'static str> {
    static SET: OnceLock<HashSet<&'static str>> = OnceLock::new();
    SET.get_or_init(|| {
        STOPWORDS_RAW
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect()
    })
}

/// Split one alphanumeric token at camel-case and letter/digit boundaries.
/// `toJSONString` -> ["to", "JSON", "String"], `utf8` -> ["utf", "8"].
pub(crate) fn camel_split(token: &str) -> Vec<&str> {
    let mut words = Vec::new();
    let chars: Vec<char> = token.chars().collect();
    let mut start = 0;
    for i in 1..chars.len() {
        let prev = chars[i - 1];
        let cur = chars[i];
        let next_lower = chars.get(i + 1).is_some_and(|c| c.is_lowercase());
        let boundary = (prev.is_lowercase() && cur.is_uppercase())
            || (prev.is_uppercase() && cur.is_uppercase() && next_lower)
            || (prev.is_alphabetic() && cur.is_ascii_digit())
            || (prev.is_ascii_digit() && cur.is_alphabetic());
        if boundary {
            let byte_start: usize = chars[..start].iter().map(|c| c.len_utf8()).sum();
            let byte_end: usize = chars[..i].iter().map(|c| c.len_utf8()).sum();
            words.push(&token[byte_start..byte_end]);
            start = i;
        }
    }
    let byte_start: usize = chars[..start].iter().map(|c| c.len_utf8()).sum();
    words.push(&token[byte_start..]);
    words
}

/// Extract normalized keyphrases from free text: stopword-free unigrams plus
/// bigrams of consecutive survivors, deduplicated in first-seen order.
pub fn extract_keyphrases(text: &str) -> Vec<String> {
    let stops = stopwords();
    let mut survivors: Vec<String> = Vec::new();
    for token in text.split(|c: char| !c.is_alphanumeric()) {
        if token.is_empty() {
            continue;
        }
        for word in camel_split(token) {
            let lower = word.to_lowercase();
            if !stops.contains(lower.as_str()) {
                survivors.push(lower);
            }
        }
    }
    let mut phrases: Vec<String> = Vec::with_capacity(survivors.len() * 2);
    let mut seen: HashSet<String> = HashSet::new();
    for (i, word) in survivors.iter().enumerate() {
        if seen.insert(word.clone()) {
            phrases.push(word.clone());
        }
        if i + 1 < survivors.len() {
            let bigram = format!("{} {}", word, survivors[i + 1]);
            if seen.insert(bigram.clone()) {
                phrases.push(bigram);
            }
        }
    }
    phrases
}

/// TF-IDF context built from a fixed corpus of documents (one per described
/// method). idf = ln((1+N)/(1+df)) + 1.
#[derive(Debug, Clone)]
pub struct VectorSpace {
    n_docs: usize,
    df: HashMap<String, usize>,
}

impl VectorSpace {
    pub fn build<'a>(corpus: impl IntoIterator<Item = &'a str>) -> VectorSpace {
        let mut n_docs = 0usize;
        let mut df: HashMap<String, usize> = HashMap::new();
        for doc in corpus {
            n_docs += 1;
            for phrase in extract_keyphrases(doc) {
                *df.entry(phrase).or_insert(0) += 1;
            }
        }
        VectorSpace { n_docs, df }
    }

    pub fn n_docs(&self) -> usize {
        self.n_docs
    }

    pub fn idf(&self, term: &str) -> f64 {
        let df = self.df.get(term).copied().unwrap_or(0);
        (((1 + self.n_docs) as f64) / ((1 + df) as f64)).ln() + 1.0
    }

    /// Vectorize a keyphrase list. Keyphrase lists are deduplicated, so the
    /// term frequency of every present term is 1 and the weight reduces to idf.
    pub fn vectorize(&self, phrases: &[String]) -> TermVector {
        let mut weights = BTreeMap::new();
        for phrase in phrases {
            weights.insert(phrase.clone(), self.idf(phrase));
        }
        TermVector { weights }
    }
}

/// Sparse TF-IDF vector.
#[derive(Debug, Clone, Default)]
pub struct TermVector {
    weights: BTreeMap<String, f64>,
}

impl TermVector {
    pub fn norm(&self) -> f64 {
        self.weights.values().map(|w| w * w).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &TermVector) -> f64 {
        // Walk the smaller map.
        let (small, large) = if self.weights.len() <= other.weights.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .weights
            .iter()
            .filter_map(|(term, w)| large.weights.get(term).map(|v| w * v))
            .sum()
    }
}

/// Cosine similarity; 0 when either vector has zero norm.
pub fn cosine(v1: &TermVector, v2: &TermVector) -> f64 {
    let denom = v1.norm() * v2.norm();
    if denom == 0.0 {
        return 0.0;
    }
    // `+ 0.0` normalizes a negative zero produced by an empty dot product.
    (v1.dot(v2) / denom).clamp(0.0, 1.0) + 0.0
}

/// CSLD between two description groups: each side's texts form one document.
pub fn csld(space: &VectorSpace, removed_descs: &[&str], added_descs: &[&str]) -> f64 {
    let left = extract_keyphrases(&removed_descs.join("\n"));
    let right = extract_keyphrases(&added_descs.join("\n"));
    if left.is_empty() || right.is_empty() {
        return 0.0;
    }
    cosine(&space.vectorize(&left), &space.vectorize(&right))
}
