//! Sentence formation and the feature-relevance filter.

use std::collections::BTreeSet;

use crate::lexicon::FeatureLexicon;
use crate::preprocess::{CleanComment, Token};

/// A group of continuous tokens between terminators. Terminator tokens are
/// excluded from `tokens` but recorded in `terminators` because the
/// sentiment heuristics count exclamation marks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<Token>,
    /// Feature keywords present among the word tokens; populated by
    /// [`relevant_sentences`].
    pub features: BTreeSet<String>,
    pub votes: u32,
    pub terminators: Vec<char>,
}

impl Sentence {
    pub fn allcaps_flags(&self) -> Vec<bool> {
        self.tokens.iter().map(|t| t.all_caps).collect()
    }
}

/// Splits a comment into sentences.
///
/// With `strict` set, boundaries are exactly the `.` tokens and a trailing
/// run with no closing period is discarded. Otherwise `.`, `!`, and `?` all
/// terminate and the end of the comment acts as an implicit terminator.
/// Empty groups (runs of consecutive terminators) are dropped; their
/// terminator characters attach to the sentence they follow.
pub fn split_sentences(comment: &CleanComment, strict: bool) -> Vec<Sentence> {
    let is_terminator = |t: &Token| {
        t.kind == crate::preprocess::TokenKind::Punctuation
            && match t.text.as_str() {
                "." => true,
                "!" | "?" => !strict,
                _ => false,
            }
    };

    let mut sentences: Vec<Sentence> = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    for token in &comment.tokens {
        if is_terminator(token) {
            let mark = token.text.chars().next().expect("terminator char");
            if !current.is_empty() {
                sentences.push(Sentence {
                    tokens: std::mem::take(&mut current),
                    features: BTreeSet::new(),
                    votes: comment.votes,
                    terminators: vec![mark],
                });
            } else if let Some(last) = sentences.last_mut() {
                last.terminators.push(mark);
            }
            // a terminator before any sentence content is dropped
        } else {
            current.push(token.clone());
        }
    }
    if !current.is_empty() && !strict {
        sentences.push(Sentence {
            tokens: current,
            features: BTreeSet::new(),
            votes: comment.votes,
            terminators: Vec::new(),
        });
    }
    sentences
}

/// Keeps the sentences that mention at least one feature and fills in their
/// `features` sets. A keyword occurring twice in a sentence is listed once.
pub fn relevant_sentences(sentences: Vec<Sentence>, lexicon: &FeatureLexicon) -> Vec<Sentence> {
    sentences
        .into_iter()
        .filter_map(|mut sentence| {
            let features: BTreeSet<String> = sentence
                .tokens
                .iter()
                .filter(|t| t.is_word())
                .filter_map(|t| lexicon.resolve(&t.text))
                .map(str::to_owned)
                .collect();
            if features.is_empty() {
                None
            } else {
                sentence.features = features;
                Some(sentence)
            }
        })
        .collect()
}
