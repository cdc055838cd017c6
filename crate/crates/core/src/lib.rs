//! Feature-level rating engine for product-review corpora.
//!
//! Takes a CSV of customer reviews (text, overall star rating, helpfulness
//! votes), rewrites feature-related words to canonical feature keywords,
//! splits reviews into sentences, keeps the sentences that mention a feature,
//! scores each one with a valence-lexicon heuristic, and aggregates the
//! per-sentence star ratings into votes-weighted per-feature ratings for
//! every product. On top of that it ranks products by the number of features
//! they are best at, recommends a product per feature, and evaluates the
//! "phone" feature against the customer-given overall ratings.
//!
//! The numeric half of the pipeline (sentiment scoring, rating aggregation,
//! error metrics) is generic over the scalar type via [`num::Scalar`];
//! the aliases below fix `f64`, which is what the CLI uses.

pub mod bundled;
pub mod ingest;
pub mod lexicon;
pub mod num;
pub mod preprocess;
pub mod rankeval;
pub mod ratings;
pub mod segment;
pub mod sentiment;

pub use ingest::{corpus_stats, load_csv, ColumnMap, Corpus, CorpusStats, LoadReport, ReviewRecord};
pub use lexicon::{frequency_table, load_lexicon, FeatureLexicon, FeatureSet, FrequencyReport};
pub use preprocess::{
    preprocess_comment, retain_useful_chars, tokenize, CleanComment, EmoticonSet, SpellCache,
    SpellDictionary, Token, TokenKind,
};
pub use rankeval::{GroundTruthWeights, ProductRank};
pub use ratings::RatingPipeline;
pub use segment::{relevant_sentences, split_sentences, Sentence};

/// Default scalar for the concrete aliases below.
pub type DefaultScalar = f64;

pub type HeuristicConfig = sentiment::HeuristicConfig<DefaultScalar>;
pub type SentimentLexicon = sentiment::SentimentLexicon<DefaultScalar>;
pub type SentenceScore = sentiment::SentenceScore<DefaultScalar>;
pub type FeatureRating = ratings::FeatureRating<DefaultScalar>;
pub type ProductRatings = ratings::ProductRatings<DefaultScalar>;
pub type Recommendation = rankeval::Recommendation<DefaultScalar>;
pub type EvalReport = rankeval::EvalReport<DefaultScalar>;
