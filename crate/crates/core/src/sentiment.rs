//! Sentence sentiment: a valence-lexicon sum with negation, booster,
//! all-caps, exclamation, and emoticon heuristics, normalized into [-1, 1]
//! and bucketed to a 1-5 star sentence rating.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::num::Scalar;
use crate::segment::Sentence;
use crate::preprocess::TokenKind;

#[derive(Debug, Error)]
pub enum SentimentError {
    #[error("compound score {0} is outside [-1, 1]")]
    CompoundOutOfRange(f64),
    #[error("valence lexicon line {line}: expected token<TAB>valence, got {content:?}")]
    MalformedValence { line: usize, content: String },
}

/// Tunable constants of the scoring heuristics. The defaults follow the
/// conventional lexicon-analyzer values.
#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicConfig<F> {
    /// Multiplier applied when a negator precedes a valence word.
    pub negation_scalar: F,
    /// Magnitude added per booster word (sign follows the boosted valence);
    /// dampeners subtract the same magnitude.
    pub booster_increment: F,
    /// Booster decay by distance: one, two, or three tokens back.
    pub booster_decay: [F; 3],
    /// Emphasis added per exclamation mark, with the sign of the sentence sum.
    pub exclamation_increment: F,
    /// Exclamation marks beyond this many add nothing.
    pub exclamation_cap: u32,
    /// Added (sign-following) to an all-caps word in a mixed-case sentence.
    pub allcaps_increment: F,
    /// Alpha of the `x / sqrt(x^2 + alpha)` normalization.
    pub normalization_alpha: F,
}

impl<F: Scalar> Default for HeuristicConfig<F> {
    fn default() -> Self {
        HeuristicConfig {
            negation_scalar: F::of(-0.74),
            booster_increment: F::of(0.293),
            booster_decay: [F::of(1.0), F::of(0.95), F::of(0.9)],
            exclamation_increment: F::of(0.292),
            exclamation_cap: 4,
            allcaps_increment: F::of(0.733),
            normalization_alpha: F::of(15.0),
        }
    }
}

/// Valence table plus the heuristic word lists.
///
/// Word entries are lowercase; emoticon entries are matched verbatim.
#[derive(Debug, Clone, Default)]
pub struct SentimentLexicon<F> {
    valences: HashMap<String, F>,
    boosters: HashMap<String, F>,
    negators: HashSet<String>,
    emoticon_valences: HashMap<String, F>,
}

impl<F: Scalar> SentimentLexicon<F> {
    /// Builds the lexicon from its data files.
    ///
    /// `valence_tsv` is tab-separated `token<TAB>valence<TAB>...` (extra
    /// columns ignored); entries made of letters, apostrophes, and hyphens
    /// are word valences, anything else is an emoticon. The three lists are
    /// one token per line; boosters get `+booster_increment`, dampeners get
    /// `-booster_increment`.
    pub fn parse(
        valence_tsv: &str,
        boosters: &str,
        dampeners: &str,
        negators: &str,
        cfg: &HeuristicConfig<F>,
    ) -> Result<Self, SentimentError> {
        let mut lexicon = SentimentLexicon {
            valences: HashMap::new(),
            boosters: HashMap::new(),
            negators: HashSet::new(),
            emoticon_valences: HashMap::new(),
        };
        for (idx, line) in valence_tsv.lines().enumerate() {
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let mut cols = line.split('\t');
            let (token, valence) = match (cols.next(), cols.next()) {
                (Some(t), Some(v)) if !t.trim().is_empty() => (t.trim(), v.trim()),
                _ => {
                    return Err(SentimentError::MalformedValence {
                        line: idx + 1,
                        content: line.to_owned(),
                    })
                }
            };
            let valence: f64 = valence.parse().map_err(|_| SentimentError::MalformedValence {
                line: idx + 1,
                content: line.to_owned(),
            })?;
            let is_word = token.chars().all(|c| c.is_alphabetic() || c == '\'' || c == '-')
                && token.chars().any(|c| c.is_alphabetic());
            if is_word {
                lexicon.valences.insert(token.to_lowercase(), F::of(valence));
            } else {
                lexicon.emoticon_valences.insert(token.to_owned(), F::of(valence));
            }
        }
        fn list(text: &str) -> impl Iterator<Item = String> + '_ {
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
        }
        for word in list(boosters) {
            lexicon.boosters.insert(word, cfg.booster_increment);
        }
        for word in list(dampeners) {
            lexicon.boosters.insert(word, -cfg.booster_increment);
        }
        lexicon.negators.extend(list(negators));
        Ok(lexicon)
    }

    pub fn valence(&self, word: &str) -> Option<F> {
        self.valences.get(word).copied()
    }

    pub fn booster(&self, word: &str) -> Option<F> {
        self.boosters.get(word).copied()
    }

    pub fn is_negator(&self, word: &str) -> bool {
        self.negators.contains(word)
    }

    pub fn emoticon_valence(&self, emoticon: &str) -> Option<F> {
        self.emoticon_valences.get(emoticon).copied()
    }

    /// Every word valence entry; used by property tests.
    pub fn words(&self) -> impl Iterator<Item = (&str, F)> {
        self.valences.iter().map(|(w, v)| (w.as_str(), *v))
    }

    /// Lowercase words with a positive valence; used by property tests.
    pub fn positive_words(&self) -> impl Iterator<Item = (&str, F)> {
        self.valences
            .iter()
            .filter(|(_, v)| **v > F::zero())
            .map(|(w, v)| (w.as_str(), *v))
    }

    pub fn word_count(&self) -> usize {
        self.valences.len()
    }
}

/// A scored sentence: the normalized compound value and its star bucket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SentenceScore<F> {
    pub compound: F,
    pub stars: u8,
}

/// Sums the heuristic valence contributions of a sentence.
///
/// For each word token with a lexicon valence: the all-caps increment is
/// added (following the valence sign) when the token is all-caps and the
/// sentence is not uniformly all-caps; booster increments from up to three
/// preceding tokens are added with distance decay; and the value is
/// multiplied by the negation scalar when a negator occurs among the three
/// preceding tokens. Emoticon tokens contribute their lexicon valence as-is.
/// Finally `min(#!, cap) * exclamation_increment` is added with the sign of
/// the sum (a zero sum takes no emphasis). The preceding-token window is
/// counted over the raw token list, so punctuation occupies window slots.
pub fn raw_valence_sum<F: Scalar>(
    sentence: &Sentence,
    lex: &SentimentLexicon<F>,
    cfg: &HeuristicConfig<F>,
) -> F {
    let cased: Vec<&crate::preprocess::Token> = sentence
        .tokens
        .iter()
        .filter(|t| t.kind != TokenKind::Punctuation)
        .collect();
    let uniformly_caps = !cased.is_empty() && cased.iter().all(|t| t.all_caps);

    let mut total = F::zero();
    for (i, token) in sentence.tokens.iter().enumerate() {
        match token.kind {
            TokenKind::Emoticon => {
                if let Some(v) = lex.emoticon_valence(&token.text) {
                    total = total + v;
                }
            }
            TokenKind::Word => {
                let base = match lex.valence(&token.text) {
                    Some(v) => v,
                    None => continue,
                };
                let mut value = base;
                if token.all_caps && !uniformly_caps {
                    if base > F::zero() {
                        value = value + cfg.allcaps_increment;
                    } else if base < F::zero() {
                        value = value - cfg.allcaps_increment;
                    }
                }
                let mut negated = false;
                for back in 1..=3usize {
                    let Some(j) = i.checked_sub(back) else { break };
                    let prev = &sentence.tokens[j];
                    if !prev.is_word() {
                        continue;
                    }
                    if let Some(increment) = lex.booster(&prev.text) {
                        let mut boost = increment * cfg.booster_decay[back - 1];
                        if base < F::zero() {
                            boost = -boost;
                        }
                        value = value + boost;
                    }
                    if lex.is_negator(&prev.text) {
                        negated = true;
                    }
                }
                if negated {
                    value = value * cfg.negation_scalar;
                }
                total = total + value;
            }
            TokenKind::Punctuation => {}
        }
    }

    let bangs = sentence.tokens.iter().filter(|t| t.text == "!").count() as u32
        + sentence.terminators.iter().filter(|c| **c == '!').count() as u32;
    let emphasis = F::of_count(u64::from(bangs.min(cfg.exclamation_cap))) * cfg.exclamation_increment;
    if total > F::zero() {
        total = total + emphasis;
    } else if total < F::zero() {
        total = total - emphasis;
    }
    total
}

/// Normalizes a raw valence sum into [-1, 1] via `x / sqrt(x^2 + alpha)`.
pub fn compound<F: Scalar>(raw: F, cfg: &HeuristicConfig<F>) -> F {
    debug_assert!(cfg.normalization_alpha > F::zero());
    let c = raw / (raw * raw + cfg.normalization_alpha).sqrt();
    c.min(F::one()).max(-F::one())
}

/// Buckets a compound score into stars: [-1,-0.6) -> 1, [-0.6,-0.2) -> 2,
/// [-0.2,0.2) -> 3, [0.2,0.6) -> 4, [0.6,1] -> 5.
pub fn bucket<F: Scalar>(compound: F) -> Result<u8, SentimentError> {
    if compound < -F::one() || compound > F::one() {
        return Err(SentimentError::CompoundOutOfRange(
            compound.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let stars = if compound < F::of(-0.6) {
        1
    } else if compound < F::of(-0.2) {
        2
    } else if compound < F::of(0.2) {
        3
    } else if compound < F::of(0.6) {
        4
    } else {
        5
    };
    Ok(stars)
}

/// Scores one sentence end to end.
pub fn score_sentence<F: Scalar>(
    sentence: &Sentence,
    lex: &SentimentLexicon<F>,
    cfg: &HeuristicConfig<F>,
) -> SentenceScore<F> {
    let c = compound(raw_valence_sum(sentence, lex, cfg), cfg);
    let stars = bucket(c).expect("compound() output is clamped into [-1, 1]");
    SentenceScore { compound: c, stars }
}
