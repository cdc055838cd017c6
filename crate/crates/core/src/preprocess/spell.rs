//! Frequency-ranked edit-distance spell correction.
//!
//! Candidate generation follows the classic approach: all strings one edit
//! away (deletes, transpositions, replacements, insertions) are checked
//! against the dictionary, and only if none match is the search widened to
//! two edits. Among matches the highest-frequency word wins; equal
//! frequencies fall back to lexicographic order so corrections are
//! deterministic.

use std::collections::HashMap;

use dashmap::DashMap;
use thiserror::Error;

/// Letters plus the two characters allowed inside word tokens.
const EDIT_ALPHABET: &[char] = &[
    'a', 'b', 'c', 'd', 'e', 'f', 'g', 'h', 'i', 'j', 'k', 'l', 'm', 'n', 'o', 'p', 'q', 'r',
    's', 't', 'u', 'v', 'w', 'x', 'y', 'z', '\'', '-',
];

/// Words this short are never rewritten; they are usually abbreviations.
const MIN_CORRECTABLE_LEN: usize = 3;

#[derive(Debug, Error)]
pub enum SpellError {
    #[error("spell dictionary line {line}: expected \"word count\", got {content:?}")]
    MalformedLine { line: usize, content: String },
    #[error("spell dictionary line {line}: frequency must be positive")]
    ZeroFrequency { line: usize },
}

/// Word-frequency dictionary backing the corrector.
#[derive(Debug, Clone, Default)]
pub struct SpellDictionary {
    entries: HashMap<String, u64>,
}

impl SpellDictionary {
    /// Parses `word<space>count` lines; blank lines and `#` comments are
    /// skipped and words are lowercased.
    pub fn parse(text: &str) -> Result<Self, SpellError> {
        let mut entries = HashMap::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (word, count) = match (parts.next(), parts.next()) {
                (Some(w), Some(c)) => (w, c),
                _ => {
                    return Err(SpellError::MalformedLine {
                        line: idx + 1,
                        content: line.to_owned(),
                    })
                }
            };
            let count: u64 = count.parse().map_err(|_| SpellError::MalformedLine {
                line: idx + 1,
                content: line.to_owned(),
            })?;
            if count == 0 {
                return Err(SpellError::ZeroFrequency { line: idx + 1 });
            }
            entries.insert(word.to_lowercase(), count);
        }
        Ok(SpellDictionary { entries })
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    pub fn frequency(&self, word: &str) -> Option<u64> {
        self.entries.get(word).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Best candidate seen so far: maximal frequency, ties broken by the
/// lexicographically smaller word.
struct Best {
    word: Option<String>,
    freq: u64,
}

impl Best {
    fn new() -> Self {
        Best { word: None, freq: 0 }
    }

    fn offer(&mut self, candidate: &str, freq: u64) {
        let better = match &self.word {
            None => true,
            Some(current) => {
                freq > self.freq || (freq == self.freq && candidate < current.as_str())
            }
        };
        if better {
            self.word = Some(candidate.to_owned());
            self.freq = freq;
        }
    }
}

fn edits1(word: &str) -> Vec<String> {
    let chars: Vec<char> = word.chars().collect();
    let n = chars.len();
    let mut out = Vec::with_capacity(n * (2 * EDIT_ALPHABET.len() + 2));
    let make = |pieces: &[&[char]]| -> String { pieces.iter().flat_map(|p| p.iter()).collect() };
    for i in 0..=n {
        let (left, right) = chars.split_at(i);
        if !right.is_empty() {
            out.push(make(&[left, &right[1..]])); // delete
            if right.len() > 1 {
                out.push(make(&[left, &[right[1], right[0]], &right[2..]])); // transpose
            }
        }
        for &c in EDIT_ALPHABET {
            if !right.is_empty() {
                out.push(make(&[left, &[c], &right[1..]])); // replace
            }
            out.push(make(&[left, &[c], right])); // insert
        }
    }
    out
}

/// Corrects one lowercase word against the dictionary.
///
/// Dictionary hits and words shorter than three characters are returned
/// unchanged; otherwise the highest-frequency dictionary word within one
/// edit wins, then within two edits, and failing both the word is returned
/// unchanged.
pub fn spell_correct(word: &str, dict: &SpellDictionary) -> String {
    if word.chars().count() < MIN_CORRECTABLE_LEN || dict.contains(word) {
        return word.to_owned();
    }
    let one_away = edits1(word);
    let mut best = Best::new();
    for cand in &one_away {
        if let Some(freq) = dict.frequency(cand) {
            best.offer(cand, freq);
        }
    }
    if best.word.is_none() {
        for e1 in &one_away {
            for cand in edits1(e1) {
                if let Some(freq) = dict.frequency(&cand) {
                    best.offer(&cand, freq);
                }
            }
        }
    }
    best.word.unwrap_or_else(|| word.to_owned())
}

/// Concurrent memo table for [`spell_correct`]; the two-edit search is the
/// pipeline bottleneck on large corpora, and review vocabulary repeats
/// heavily across products.
#[derive(Debug, Default)]
pub struct SpellCache {
    map: DashMap<String, String>,
}

impl SpellCache {
    pub fn new() -> Self {
        SpellCache::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn insert(&self, word: String, correction: String) {
        self.map.insert(word, correction);
    }

    /// Sorted snapshot, used to persist the table between runs.
    pub fn entries(&self) -> Vec<(String, String)> {
        let mut all: Vec<(String, String)> = self
            .map
            .iter()
            .map(|e| (e.key().clone(), e.value().clone()))
            .collect();
        all.sort();
        all
    }
}

/// Memoized form of [`spell_correct`].
pub fn spell_correct_cached(word: &str, dict: &SpellDictionary, cache: &SpellCache) -> String {
    if let Some(hit) = cache.map.get(word) {
        return hit.value().clone();
    }
    let corrected = spell_correct(word, dict);
    cache.map.insert(word.to_owned(), corrected.clone());
    corrected
}
