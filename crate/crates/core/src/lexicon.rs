//! The feature lexicon: disjoint sets of related feature words, each led by
//! a keyword, plus the word-frequency report used to curate new candidates.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use thiserror::Error;

use crate::ingest::Corpus;
use crate::preprocess::{retain_useful_chars, tokenize, EmoticonSet};

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("token {token:?} appears in both the {first:?} and {second:?} feature sets")]
    DuplicateMember {
        token: String,
        first: String,
        second: String,
    },
    #[error("line {line}: feature set has no tokens")]
    EmptySet { line: usize },
    #[error("failed to read lexicon file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// One set of related feature words. The keyword is a member of its own set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureSet {
    pub keyword: String,
    pub members: BTreeSet<String>,
}

/// All feature sets plus the inverse member-to-set index. Sets are pairwise
/// disjoint; immutable after load.
#[derive(Debug, Clone, Default)]
pub struct FeatureLexicon {
    sets: Vec<FeatureSet>,
    member_index: HashMap<String, usize>,
}

impl FeatureLexicon {
    /// Parses the lexicon text format: one feature set per line, tokens
    /// separated by commas and/or whitespace, first token is the keyword.
    /// Lines starting with `#` are comments and literal `||` separators are
    /// ignored, so curated tables paste nearly verbatim.
    pub fn parse(text: &str) -> Result<Self, LexiconError> {
        let mut lexicon = FeatureLexicon::default();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<String> = line
                .replace("||", " ")
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(str::to_lowercase)
                .collect();
            if tokens.is_empty() {
                // the line held only separator decoration
                return Err(LexiconError::EmptySet { line: idx + 1 });
            }
            let set_idx = lexicon.sets.len();
            let keyword = tokens[0].clone();
            let mut members = BTreeSet::new();
            for token in tokens {
                if let Some(&owner) = lexicon.member_index.get(&token) {
                    if owner != set_idx {
                        return Err(LexiconError::DuplicateMember {
                            token,
                            first: lexicon.sets[owner].keyword.clone(),
                            second: keyword,
                        });
                    }
                    continue; // repeated within the same line
                }
                lexicon.member_index.insert(token.clone(), set_idx);
                members.insert(token);
            }
            lexicon.sets.push(FeatureSet { keyword, members });
        }
        Ok(lexicon)
    }

    /// Keyword of the set owning `token`, if any. A keyword resolves to
    /// itself, so resolution is idempotent.
    pub fn resolve(&self, token: &str) -> Option<&str> {
        self.member_index
            .get(token)
            .map(|&idx| self.sets[idx].keyword.as_str())
    }

    pub fn is_keyword(&self, token: &str) -> bool {
        self.resolve(token) == Some(token)
    }

    pub fn contains(&self, token: &str) -> bool {
        self.member_index.contains_key(token)
    }

    pub fn sets(&self) -> &[FeatureSet] {
        &self.sets
    }

    pub fn keywords(&self) -> impl Iterator<Item = &str> {
        self.sets.iter().map(|s| s.keyword.as_str())
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Loads a feature lexicon from a file.
pub fn load_lexicon(path: &Path) -> Result<FeatureLexicon, LexiconError> {
    let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
        path: path.display().to_string(),
        source,
    })?;
    FeatureLexicon::parse(&text)
}

/// One row of the frequency report.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyRow {
    pub token: String,
    pub count: u64,
    /// Occurrences divided by the number of reviews; can exceed 1.
    pub fraction: f64,
}

/// Token occurrence counts over a whole corpus, for curating feature words.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct FrequencyReport {
    pub review_count: u64,
    pub rows: Vec<FrequencyRow>,
}

/// Counts token occurrences over every review text (after character
/// retention, tokenization, and lowercasing — deliberately before spell
/// correction or keyword substitution), keeps tokens whose count is at
/// least `min_fraction` of the review count, and sorts by descending count
/// (ties alphabetically).
pub fn frequency_table(
    corpus: &Corpus,
    min_fraction: f64,
    emoticons: &EmoticonSet,
) -> FrequencyReport {
    let mut counts: HashMap<String, u64> = HashMap::new();
    let mut review_count: u64 = 0;
    for (_, records) in corpus.products() {
        for record in records {
            review_count += 1;
            let cleaned = retain_useful_chars(&record.review_text);
            for token in tokenize(&cleaned, emoticons) {
                *counts.entry(token.text.to_lowercase()).or_insert(0) += 1;
            }
        }
    }
    let threshold = min_fraction * review_count as f64;
    let mut rows: Vec<FrequencyRow> = counts
        .into_iter()
        .filter(|(_, count)| *count as f64 >= threshold)
        .map(|(token, count)| FrequencyRow {
            fraction: if review_count == 0 {
                0.0
            } else {
                count as f64 / review_count as f64
            },
            token,
            count,
        })
        .collect();
    rows.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.token.cmp(&b.token)));
    FrequencyReport { review_count, rows }
}
