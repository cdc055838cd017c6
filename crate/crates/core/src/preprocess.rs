//! Review-text preprocessing: character retention, tokenization, spell
//! correction, and feature-keyword substitution.
//!
//! The stages are pure functions so that per-comment preprocessing can run
//! in parallel; the only shared mutable state is the spell-correction memo
//! cache, which is lock-striped.

pub mod spell;

use std::collections::HashSet;

use crate::ingest::ReviewRecord;
use crate::lexicon::FeatureLexicon;

pub use spell::{spell_correct, SpellCache, SpellDictionary};

/// What a token is, after tokenization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Word,
    Punctuation,
    Emoticon,
}

/// One token of a cleaned comment.
///
/// `all_caps` is captured from the original casing before word tokens are
/// lowercased; the sentiment heuristics need it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    pub kind: TokenKind,
    pub all_caps: bool,
}

impl Token {
    pub fn word(text: impl Into<String>) -> Self {
        let text = text.into();
        let all_caps = is_all_caps(&text);
        Token {
            text,
            kind: TokenKind::Word,
            all_caps,
        }
    }

    pub fn punctuation(ch: char) -> Self {
        Token {
            text: ch.to_string(),
            kind: TokenKind::Punctuation,
            all_caps: false,
        }
    }

    pub fn emoticon(text: impl Into<String>) -> Self {
        Token {
            text: text.into(),
            kind: TokenKind::Emoticon,
            all_caps: false,
        }
    }

    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

/// A preprocessed review comment: corrected tokens plus the review metadata
/// the later stages need (votes for weighting, the customer's star rating
/// for evaluation).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanComment {
    pub tokens: Vec<Token>,
    pub votes: u32,
    pub source_rating: u8,
}

/// Whole-chunk emoticon patterns recognized by the tokenizer.
#[derive(Debug, Clone, Default)]
pub struct EmoticonSet {
    entries: HashSet<String>,
}

impl EmoticonSet {
    /// Parses one emoticon per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(str::to_owned)
            .collect();
        EmoticonSet { entries }
    }

    pub fn contains(&self, chunk: &str) -> bool {
        self.entries.contains(chunk)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// True for the characters that survive cleaning: letters, the punctuation
/// set `.,:;-!?` plus space, and the emoticon alphabet `':-()=*83$><^/[]#{}|;\&`.
pub fn is_retained_char(c: char) -> bool {
    c.is_ascii_alphabetic()
        || matches!(
            c,
            '.' | ','
                | ':'
                | ';'
                | '-'
                | '!'
                | '?'
                | ' '
                | '\''
                | '('
                | ')'
                | '='
                | '*'
                | '8'
                | '3'
                | '$'
                | '>'
                | '<'
                | '^'
                | '/'
                | '['
                | ']'
                | '#'
                | '{'
                | '}'
                | '|'
                | '\\'
                | '&'
        )
}

/// Deletes every character outside the retained set, collapses runs of
/// spaces, and trims the ends. Idempotent.
pub fn retain_useful_chars(raw: &str) -> String {
    let mut out = String::with_capacity(raw.len());
    let mut prev_space = false;
    for c in raw.chars() {
        if !is_retained_char(c) {
            continue;
        }
        if c == ' ' {
            if prev_space {
                continue;
            }
            prev_space = true;
        } else {
            prev_space = false;
        }
        out.push(c);
    }
    let trimmed = out.trim_matches(' ');
    if trimmed.len() == out.len() {
        out
    } else {
        trimmed.to_owned()
    }
}

fn is_all_caps(text: &str) -> bool {
    let mut has_alpha = false;
    for c in text.chars() {
        if c.is_alphabetic() {
            has_alpha = true;
            if c.is_lowercase() {
                return false;
            }
        }
    }
    has_alpha
}

/// Splits cleaned text into word, punctuation, and emoticon tokens.
///
/// Whitespace chunks that exactly match an emoticon entry become a single
/// emoticon token. Otherwise letters form word tokens (apostrophes and
/// hyphens stay inside a word when flanked by letters on both sides) and
/// every other retained character becomes its own punctuation token.
pub fn tokenize(cleaned: &str, emoticons: &EmoticonSet) -> Vec<Token> {
    let mut tokens = Vec::new();
    for chunk in cleaned.split(' ').filter(|c| !c.is_empty()) {
        if emoticons.contains(chunk) {
            tokens.push(Token::emoticon(chunk));
            continue;
        }
        let chars: Vec<char> = chunk.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            if chars[i].is_ascii_alphabetic() {
                let mut j = i + 1;
                while j < chars.len() {
                    if chars[j].is_ascii_alphabetic() {
                        j += 1;
                    } else if matches!(chars[j], '\'' | '-')
                        && j + 1 < chars.len()
                        && chars[j + 1].is_ascii_alphabetic()
                    {
                        j += 2;
                    } else {
                        break;
                    }
                }
                tokens.push(Token::word(chars[i..j].iter().collect::<String>()));
                i = j;
            } else {
                tokens.push(Token::punctuation(chars[i]));
                i += 1;
            }
        }
    }
    tokens
}

/// Canonicalizes one token: word tokens are lowercased, rewritten to their
/// feature keyword when the raw or spell-corrected form is a feature word,
/// and otherwise replaced by the spell-corrected form. The raw form is
/// checked against the feature lexicon before spell correction so that
/// uncommon feature words ("sd", "vga") are not mangled by the corrector.
/// Punctuation and emoticon tokens pass through unchanged.
pub fn correct_token(
    token: &Token,
    lexicon: &FeatureLexicon,
    dict: &SpellDictionary,
    cache: &SpellCache,
) -> Token {
    if token.kind != TokenKind::Word {
        return token.clone();
    }
    let lower = token.text.to_lowercase();
    let text = if let Some(keyword) = lexicon.resolve(&lower) {
        keyword.to_owned()
    } else {
        let corrected = spell::spell_correct_cached(&lower, dict, cache);
        match lexicon.resolve(&corrected) {
            Some(keyword) => keyword.to_owned(),
            None => corrected,
        }
    };
    Token {
        text,
        kind: TokenKind::Word,
        all_caps: token.all_caps,
    }
}

/// Runs the whole text path for one review: retention, tokenization, and
/// per-token correction. Returns `None` when no tokens survive.
pub fn preprocess_comment(
    record: &ReviewRecord,
    lexicon: &FeatureLexicon,
    dict: &SpellDictionary,
    emoticons: &EmoticonSet,
    cache: &SpellCache,
) -> Option<CleanComment> {
    let cleaned = retain_useful_chars(&record.review_text);
    let tokens: Vec<Token> = tokenize(&cleaned, emoticons)
        .iter()
        .map(|t| correct_token(t, lexicon, dict, cache))
        .collect();
    if tokens.is_empty() {
        return None;
    }
    Some(CleanComment {
        tokens,
        votes: record.review_votes,
        source_rating: record.overall_rating,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn emoticons() -> EmoticonSet {
        EmoticonSet::parse(":-)\n:(\n<3\n8)\n")
    }

    fn lexicon() -> FeatureLexicon {
        FeatureLexicon::parse(
            "sound, speaker, speakers, sounds, loudspeaker\n\
             pictures, picture, photos\n\
             battery, batteries\n\
             sd, micro, microsd\n",
        )
        .unwrap()
    }

    fn dict() -> SpellDictionary {
        SpellDictionary::parse(
            "good 1000\nphone 900\nbattery 800\nexcellent 700\nthe 600\nlife 500\nis 400\n",
        )
        .unwrap()
    }

    #[test]
    fn retention_drops_most_digits_but_keeps_eight_and_three() {
        assert_eq!(retain_useful_chars("Great phone!!! costs $250"), "Great phone!!! costs $");
        assert_eq!(retain_useful_chars("scores 8/10"), "scores 8/");
        assert_eq!(retain_useful_chars(""), "");
    }

    #[test]
    fn retention_collapses_spaces_and_trims() {
        assert_eq!(retain_useful_chars("  a   b  "), "a b");
        // deleted characters can leave new space runs behind
        assert_eq!(retain_useful_chars("a 12 b"), "a b");
    }

    #[test]
    fn tokenize_splits_period_as_token() {
        let toks = tokenize("Excellent phone.", &emoticons());
        let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["Excellent", "phone", "."]);
        assert_eq!(toks[2].kind, TokenKind::Punctuation);
    }

    #[test]
    fn tokenize_whole_chunk_emoticon() {
        let toks = tokenize(":-)", &emoticons());
        assert_eq!(toks.len(), 1);
        assert_eq!(toks[0].kind, TokenKind::Emoticon);
        assert_eq!(toks[0].text, ":-)");
    }

    #[test]
    fn tokenize_keeps_interior_hyphen_and_splits_trailing_punctuation() {
        let toks = tokenize("battery-life!", &emoticons());
        let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["battery-life", "!"]);
        assert!(toks[0].is_word());
    }

    #[test]
    fn tokenize_emits_stray_retained_digits_as_punctuation() {
        let toks = tokenize("8gb", &emoticons());
        let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["8", "gb"]);
        assert_eq!(toks[0].kind, TokenKind::Punctuation);
        assert_eq!(toks[1].kind, TokenKind::Word);
    }

    #[test]
    fn all_caps_flag_is_captured() {
        let toks = tokenize("GREAT phone I", &emoticons());
        assert!(toks[0].all_caps);
        assert!(!toks[1].all_caps);
        assert!(toks[2].all_caps);
    }

    #[test]
    fn correct_token_prefers_raw_lexicon_hit() {
        let cache = SpellCache::new();
        let tok = Token::word("speakers");
        assert_eq!(correct_token(&tok, &lexicon(), &dict(), &cache).text, "sound");
        // "sd" is short and uncommon; the raw lexicon check protects it
        let tok = Token::word("sd");
        assert_eq!(correct_token(&tok, &lexicon(), &dict(), &cache).text, "sd");
    }

    #[test]
    fn correct_token_spell_corrects_then_resolves() {
        let cache = SpellCache::new();
        let tok = Token::word("baterry");
        assert_eq!(correct_token(&tok, &lexicon(), &dict(), &cache).text, "battery");
    }

    #[test]
    fn correct_token_passes_punctuation_through() {
        let cache = SpellCache::new();
        let tok = Token::punctuation('!');
        assert_eq!(correct_token(&tok, &lexicon(), &dict(), &cache), tok);
    }

    fn record(text: &str) -> ReviewRecord {
        ReviewRecord {
            product_name: "P".into(),
            brand_name: None,
            price: None,
            overall_rating: 4,
            review_text: text.into(),
            review_votes: 0,
        }
    }

    #[test]
    fn preprocess_comment_runs_the_whole_chain() {
        let cache = SpellCache::new();
        let got = preprocess_comment(&record("Good speakers."), &lexicon(), &dict(), &emoticons(), &cache)
            .unwrap();
        let texts: Vec<&str> = got.tokens.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["good", "sound", "."]);
    }

    #[test]
    fn preprocess_comment_absent_when_nothing_survives() {
        let cache = SpellCache::new();
        assert!(
            preprocess_comment(&record("129 467"), &lexicon(), &dict(), &emoticons(), &cache)
                .is_none()
        );
        // "123 456" keeps the retained digit 3 as a punctuation token, so the
        // comment survives with that single token.
        let got = preprocess_comment(&record("123 456"), &lexicon(), &dict(), &emoticons(), &cache)
            .unwrap();
        let texts: Vec<&str> = got.tokens.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["3"]);
    }

    #[test]
    fn preprocess_comment_keeps_emoticons() {
        let cache = SpellCache::new();
        let got = preprocess_comment(&record(":-)"), &lexicon(), &dict(), &emoticons(), &cache)
            .unwrap();
        assert_eq!(got.tokens, vec![Token::emoticon(":-)")]);
    }

    proptest! {
        #[test]
        fn retention_is_idempotent(s in "\\PC{0,200}") {
            let once = retain_useful_chars(&s);
            prop_assert_eq!(retain_useful_chars(&once), once);
        }

        #[test]
        fn word_tokens_are_lowercase_after_correction(s in "[A-Za-z .,!?']{0,80}") {
            let cache = SpellCache::new();
            if let Some(c) = preprocess_comment(&record(&s), &lexicon(), &dict(), &emoticons(), &cache) {
                for t in c.tokens.iter().filter(|t| t.is_word()) {
                    prop_assert_eq!(t.text.clone(), t.text.to_lowercase());
                }
            }
        }

        #[test]
        fn correction_is_idempotent_on_its_output(s in "[a-z]{1,12}") {
            let cache = SpellCache::new();
            let lex = lexicon();
            let d = dict();
            let once = correct_token(&Token::word(s), &lex, &d, &cache);
            let twice = correct_token(&once, &lex, &d, &cache);
            prop_assert_eq!(once, twice);
        }
    }
}
