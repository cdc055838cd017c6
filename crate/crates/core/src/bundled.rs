//! Default data files compiled into the library, with an environment
//! override for swapping in alternative data without rebuilding.
//!
//! When `FEATRATE_DATA_DIR` is set, each loader reads the file of the same
//! name from that directory instead of the embedded copy.

use std::path::PathBuf;

use thiserror::Error;

use crate::lexicon::{FeatureLexicon, LexiconError};
use crate::num::Scalar;
use crate::preprocess::{EmoticonSet, SpellDictionary};
use crate::preprocess::spell::SpellError;
use crate::sentiment::{HeuristicConfig, SentimentError, SentimentLexicon};

/// Environment variable naming a directory of replacement data files.
pub const DATA_DIR_ENV: &str = "FEATRATE_DATA_DIR";

pub const FEATURE_LEXICON_FILE: &str = "feature_lexicon.txt";
pub const SPELL_DICTIONARY_FILE: &str = "spell_dictionary.txt";
pub const EMOTICONS_FILE: &str = "emoticons.txt";
pub const SENTIMENT_LEXICON_FILE: &str = "sentiment_lexicon.tsv";
pub const BOOSTERS_FILE: &str = "boosters.txt";
pub const DAMPENERS_FILE: &str = "dampeners.txt";
pub const NEGATORS_FILE: &str = "negators.txt";

const FEATURE_LEXICON_TEXT: &str = include_str!("../data/feature_lexicon.txt");
const SPELL_DICTIONARY_TEXT: &str = include_str!("../data/spell_dictionary.txt");
const EMOTICONS_TEXT: &str = include_str!("../data/emoticons.txt");
const SENTIMENT_LEXICON_TEXT: &str = include_str!("../data/sentiment_lexicon.tsv");
const BOOSTERS_TEXT: &str = include_str!("../data/boosters.txt");
const DAMPENERS_TEXT: &str = include_str!("../data/dampeners.txt");
const NEGATORS_TEXT: &str = include_str!("../data/negators.txt");

#[derive(Debug, Error)]
pub enum BundledError {
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Spell(#[from] SpellError),
    #[error(transparent)]
    Sentiment(#[from] SentimentError),
}

/// The override directory, when `FEATRATE_DATA_DIR` is set and non-empty.
pub fn data_dir_override() -> Option<PathBuf> {
    match std::env::var(DATA_DIR_ENV) {
        Ok(dir) if !dir.trim().is_empty() => Some(PathBuf::from(dir)),
        _ => None,
    }
}

fn text_for(file: &str, embedded: &'static str) -> Result<String, BundledError> {
    match data_dir_override() {
        Some(dir) => {
            let path = dir.join(file);
            std::fs::read_to_string(&path).map_err(|source| BundledError::Io {
                path: path.display().to_string(),
                source,
            })
        }
        None => Ok(embedded.to_owned()),
    }
}

pub fn feature_lexicon() -> Result<FeatureLexicon, BundledError> {
    Ok(FeatureLexicon::parse(&text_for(
        FEATURE_LEXICON_FILE,
        FEATURE_LEXICON_TEXT,
    )?)?)
}

pub fn spell_dictionary() -> Result<SpellDictionary, BundledError> {
    Ok(SpellDictionary::parse(&text_for(
        SPELL_DICTIONARY_FILE,
        SPELL_DICTIONARY_TEXT,
    )?)?)
}

pub fn emoticons() -> Result<EmoticonSet, BundledError> {
    Ok(EmoticonSet::parse(&text_for(EMOTICONS_FILE, EMOTICONS_TEXT)?))
}

/// Raw text of one of the heuristic word lists (boosters, dampeners, or
/// negators), honoring the data-dir override. Lets callers rebuild a
/// [`SentimentLexicon`] with a custom valence table but the stock lists.
pub fn word_list_text(file: &str) -> Result<String, BundledError> {
    let embedded = match file {
        BOOSTERS_FILE => BOOSTERS_TEXT,
        DAMPENERS_FILE => DAMPENERS_TEXT,
        NEGATORS_FILE => NEGATORS_TEXT,
        other => {
            return Err(BundledError::Io {
                path: other.to_owned(),
                source: std::io::Error::new(
                    std::io::ErrorKind::NotFound,
                    "not a bundled word list",
                ),
            })
        }
    };
    text_for(file, embedded)
}

pub fn sentiment_lexicon<F: Scalar>(
    cfg: &HeuristicConfig<F>,
) -> Result<SentimentLexicon<F>, BundledError> {
    Ok(SentimentLexicon::parse(
        &text_for(SENTIMENT_LEXICON_FILE, SENTIMENT_LEXICON_TEXT)?,
        &text_for(BOOSTERS_FILE, BOOSTERS_TEXT)?,
        &text_for(DAMPENERS_FILE, DAMPENERS_TEXT)?,
        &text_for(NEGATORS_FILE, NEGATORS_TEXT)?,
        cfg,
    )?)
}
