//! Votes-weighted aggregation of sentence star ratings into per-feature
//! ratings for each product.
//!
//! Every sentence mentioning a feature contributes `stars * (votes + 1)` to
//! that feature's cumulative rating and `votes + 1` to its weight (the +1 is
//! the reviewer's self-vote); the final rating is the exact quotient. The
//! accumulator works in integers so the result is independent of the order
//! sentences are reduced in.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::ingest::{Corpus, ReviewRecord};
use crate::lexicon::FeatureLexicon;
use crate::num::Scalar;
use crate::preprocess::{preprocess_comment, EmoticonSet, SpellCache, SpellDictionary};
use crate::segment::{relevant_sentences, split_sentences};
use crate::sentiment::{score_sentence, HeuristicConfig, SentimentLexicon};

/// A scored sentence reduced to what aggregation needs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScoredSentence {
    pub features: std::collections::BTreeSet<String>,
    pub stars: u8,
    pub votes: u32,
}

/// Integer accumulator state for one feature.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FeatureAccum {
    /// Sum of `stars * (votes + 1)` over contributing sentences.
    pub cumulative: u64,
    /// Sum of `votes + 1` over contributing sentences.
    pub weight_total: u64,
    pub mention_count: u64,
}

/// Folds scored sentences into per-feature accumulators. A sentence with
/// several features contributes fully to each of them; a feature mentioned
/// twice in one sentence still contributes once.
pub fn accumulate<'a, I>(sentences: I) -> BTreeMap<String, FeatureAccum>
where
    I: IntoIterator<Item = &'a ScoredSentence>,
{
    let mut acc: BTreeMap<String, FeatureAccum> = BTreeMap::new();
    for sentence in sentences {
        debug_assert!((1..=5).contains(&sentence.stars));
        let weight = u64::from(sentence.votes) + 1;
        for feature in &sentence.features {
            let entry = acc.entry(feature.clone()).or_default();
            entry.cumulative += u64::from(sentence.stars) * weight;
            entry.weight_total += weight;
            entry.mention_count += 1;
        }
    }
    acc
}

/// Per product and feature: the accumulated weighted stars and the final
/// weighted-average rating, kept at full precision.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRating<F> {
    pub feature: String,
    pub cumulative: F,
    pub weight_total: u64,
    pub final_rating: F,
    pub mention_count: u64,
}

/// Turns accumulators into final ratings: `final = cumulative / weight_total`,
/// exact division, no rounding.
pub fn finalize<F: Scalar>(acc: &BTreeMap<String, FeatureAccum>) -> Vec<FeatureRating<F>> {
    acc.iter()
        .map(|(feature, a)| {
            assert!(a.weight_total > 0, "feature {feature} accumulated zero weight");
            FeatureRating {
                feature: feature.clone(),
                cumulative: F::of_count(a.cumulative),
                weight_total: a.weight_total,
                final_rating: F::of_count(a.cumulative) / F::of_count(a.weight_total),
                mention_count: a.mention_count,
            }
        })
        .collect()
}

/// All feature ratings of one product. Only features with at least one
/// contributing sentence appear.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductRatings<F> {
    pub product_name: String,
    pub ratings: BTreeMap<String, FeatureRating<F>>,
    /// Total review votes across the product's reviews; the ranking
    /// tie-breaker.
    pub total_votes: u64,
}

impl<F> ProductRatings<F> {
    pub fn rating_for(&self, feature: &str) -> Option<&FeatureRating<F>> {
        self.ratings.get(feature)
    }
}

/// Immutable inputs shared by every rating job.
pub struct RatingPipeline<'a, F> {
    pub feature_lexicon: &'a FeatureLexicon,
    pub spell_dict: &'a SpellDictionary,
    pub emoticons: &'a EmoticonSet,
    pub sentiment: &'a SentimentLexicon<F>,
    pub heuristics: &'a HeuristicConfig<F>,
    /// Strict sentence splitting: boundaries only at periods and no implicit
    /// end-of-comment terminator.
    pub strict_sentences: bool,
    pub cache: &'a SpellCache,
}

impl<'a, F: Scalar> RatingPipeline<'a, F> {
    /// Scores every relevant sentence of the given reviews.
    fn scored_sentences(&self, records: &[ReviewRecord]) -> Vec<ScoredSentence> {
        let mut out = Vec::new();
        for record in records {
            let Some(comment) = preprocess_comment(
                record,
                self.feature_lexicon,
                self.spell_dict,
                self.emoticons,
                self.cache,
            ) else {
                continue;
            };
            let sentences = split_sentences(&comment, self.strict_sentences);
            for sentence in relevant_sentences(sentences, self.feature_lexicon) {
                let score = score_sentence(&sentence, self.sentiment, self.heuristics);
                out.push(ScoredSentence {
                    features: sentence.features,
                    stars: score.stars,
                    votes: sentence.votes,
                });
            }
        }
        out
    }

    /// Full pipeline for one product. Products whose reviews never mention a
    /// feature yield an empty ratings map.
    pub fn rate_product(&self, product_name: &str, records: &[ReviewRecord]) -> ProductRatings<F> {
        let sentences = self.scored_sentences(records);
        let acc = accumulate(&sentences);
        let ratings = finalize(&acc)
            .into_iter()
            .map(|r| (r.feature.clone(), r))
            .collect();
        ProductRatings {
            product_name: product_name.to_owned(),
            ratings,
            total_votes: records.iter().map(|r| u64::from(r.review_votes)).sum(),
        }
    }

    /// Rates every product of the corpus. Products are processed in
    /// parallel on the current rayon pool; the integer accumulation and the
    /// sorted result map make the outcome identical for any worker count.
    pub fn rate_corpus(&self, corpus: &Corpus) -> BTreeMap<String, ProductRatings<F>> {
        let products: Vec<(&str, &[ReviewRecord])> = corpus.products().collect();
        products
            .into_par_iter()
            .map(|(name, records)| (name.to_owned(), self.rate_product(name, records)))
            .collect::<Vec<_>>()
            .into_iter()
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn scored(features: &[&str], stars: u8, votes: u32) -> ScoredSentence {
        ScoredSentence {
            features: features.iter().map(|f| (*f).to_owned()).collect(),
            stars,
            votes,
        }
    }

    #[test]
    fn single_sentence_accumulates_votes_plus_one() {
        let acc = accumulate(&[scored(&["battery"], 5, 2)]);
        let a = acc["battery"];
        assert_eq!(a.cumulative, 15);
        assert_eq!(a.weight_total, 3);
        assert_eq!(a.mention_count, 1);
    }

    #[test]
    fn two_sentences_sum() {
        let acc = accumulate(&[scored(&["sound"], 5, 2), scored(&["sound"], 3, 0)]);
        let a = acc["sound"];
        assert_eq!(a.cumulative, 18);
        assert_eq!(a.weight_total, 4);
    }

    #[test]
    fn multi_feature_sentence_contributes_to_each() {
        let acc = accumulate(&[scored(&["sound", "battery"], 4, 0)]);
        assert_eq!(acc["sound"].cumulative, 4);
        assert_eq!(acc["battery"].cumulative, 4);
        assert_eq!(acc["sound"].weight_total, 1);
    }

    #[test]
    fn finalize_divides_exactly() {
        let acc = accumulate(&[scored(&["sound"], 5, 2), scored(&["sound"], 3, 0)]);
        let ratings: Vec<FeatureRating<f64>> = finalize(&acc);
        assert_eq!(ratings.len(), 1);
        assert_eq!(ratings[0].final_rating, 4.5);
        let single = accumulate(&[scored(&["vga"], 5, 0)]);
        let ratings: Vec<FeatureRating<f64>> = finalize(&single);
        assert_eq!(ratings[0].final_rating, 5.0);
    }

    #[test]
    fn constant_star_corpus_finalizes_to_that_star() {
        for stars in 1..=5u8 {
            let sentences: Vec<ScoredSentence> =
                (0..9).map(|v| scored(&["phone"], stars, v % 4)).collect();
            let ratings: Vec<FeatureRating<f64>> = finalize(&accumulate(&sentences));
            assert_eq!(ratings[0].final_rating, f64::from(stars));
        }
    }

    fn record(product: &str, text: &str, rating: u8, votes: u32) -> ReviewRecord {
        ReviewRecord {
            product_name: product.into(),
            brand_name: None,
            price: None,
            overall_rating: rating,
            review_text: text.into(),
            review_votes: votes,
        }
    }

    struct Loaded {
        lexicon: FeatureLexicon,
        dict: SpellDictionary,
        emoticons: EmoticonSet,
        sentiment: SentimentLexicon<f64>,
        heuristics: HeuristicConfig<f64>,
    }

    fn loaded() -> Loaded {
        let heuristics = HeuristicConfig::default();
        Loaded {
            lexicon: bundled::feature_lexicon().unwrap(),
            dict: bundled::spell_dictionary().unwrap(),
            emoticons: bundled::emoticons().unwrap(),
            sentiment: bundled::sentiment_lexicon(&heuristics).unwrap(),
            heuristics,
        }
    }

    fn pipeline<'a>(l: &'a Loaded, cache: &'a SpellCache) -> RatingPipeline<'a, f64> {
        RatingPipeline {
            feature_lexicon: &l.lexicon,
            spell_dict: &l.dict,
            emoticons: &l.emoticons,
            sentiment: &l.sentiment,
            heuristics: &l.heuristics,
            strict_sentences: false,
            cache,
        }
    }

    #[test]
    fn rate_product_runs_the_scoring_chain() {
        let l = loaded();
        let cache = SpellCache::new();
        let p = pipeline(&l, &cache);
        // "great battery" scores 3.1 -> compound ~0.625 -> 5 stars
        let ratings = p.rate_product("X", &[record("X", "Great battery.", 5, 0)]);
        assert_eq!(ratings.ratings.len(), 1);
        assert_eq!(ratings.rating_for("battery").unwrap().final_rating, 5.0);
        assert_eq!(ratings.rating_for("battery").unwrap().mention_count, 1);
    }

    #[test]
    fn products_without_feature_mentions_get_empty_maps() {
        let l = loaded();
        let cache = SpellCache::new();
        let p = pipeline(&l, &cache);
        let ratings = p.rate_product("X", &[record("X", "I am happy with it.", 5, 0)]);
        assert!(ratings.ratings.is_empty());
    }

    #[test]
    fn rate_corpus_covers_each_product_and_is_deterministic() {
        let l = loaded();
        let cache = SpellCache::new();
        let p = pipeline(&l, &cache);
        let corpus = Corpus::from_records(vec![
            record("A", "Great battery.", 5, 0),
            record("B", "Terrible screen.", 1, 2),
        ]);
        let all = p.rate_corpus(&corpus);
        assert_eq!(all.len(), 2);
        assert!(all["A"].rating_for("battery").is_some());
        assert!(all["B"].rating_for("screen").is_some());
        let again = p.rate_corpus(&corpus);
        assert_eq!(all, again);
        assert_eq!(all["B"].total_votes, 2);
    }

    #[test]
    fn empty_corpus_rates_to_empty_map() {
        let l = loaded();
        let cache = SpellCache::new();
        let p = pipeline(&l, &cache);
        assert!(p.rate_corpus(&Corpus::default()).is_empty());
    }

    /// Independent oracle: weighted mean computed the obvious way.
    fn brute_force_mean(sentences: &[ScoredSentence], feature: &str) -> Option<f64> {
        let mut num = 0.0;
        let mut den = 0.0;
        for s in sentences {
            if s.features.contains(feature) {
                let w = f64::from(s.votes) + 1.0;
                num += f64::from(s.stars) * w;
                den += w;
            }
        }
        (den > 0.0).then(|| num / den)
    }

    proptest! {
        #[test]
        fn matches_brute_force_weighted_mean(
            sentences in proptest::collection::vec(
                (proptest::collection::btree_set("[a-c]", 1..3), 1..=5u8, 0..=10u32),
                1..50,
            )
        ) {
            let sentences: Vec<ScoredSentence> = sentences
                .into_iter()
                .map(|(features, stars, votes)| ScoredSentence {
                    features: features.into_iter().collect::<BTreeSet<_>>(),
                    stars,
                    votes,
                })
                .collect();
            let ratings: Vec<FeatureRating<f64>> = finalize(&accumulate(&sentences));
            for r in ratings {
                let expected = brute_force_mean(&sentences, &r.feature).unwrap();
                let rel = ((r.final_rating - expected) / expected).abs();
                prop_assert!(rel < 1e-12);
                prop_assert!((1.0..=5.0).contains(&r.final_rating));
                prop_assert!(r.weight_total >= r.mention_count);
            }
        }

        #[test]
        fn duplicating_every_sentence_leaves_finals_unchanged(
            sentences in proptest::collection::vec(
                (proptest::collection::btree_set("[a-b]", 1..3), 1..=5u8, 0..=10u32),
                1..20,
            )
        ) {
            let sentences: Vec<ScoredSentence> = sentences
                .into_iter()
                .map(|(features, stars, votes)| ScoredSentence {
                    features: features.into_iter().collect::<BTreeSet<_>>(),
                    stars,
                    votes,
                })
                .collect();
            let doubled: Vec<ScoredSentence> =
                sentences.iter().chain(sentences.iter()).cloned().collect();
            let once: Vec<FeatureRating<f64>> = finalize(&accumulate(&sentences));
            let twice: Vec<FeatureRating<f64>> = finalize(&accumulate(&doubled));
            for (a, b) in once.iter().zip(twice.iter()) {
                prop_assert_eq!(&a.feature, &b.feature);
                prop_assert_eq!(a.final_rating, b.final_rating);
            }
        }

        #[test]
        fn adding_votes_to_a_high_sentence_never_lowers_the_final(
            stars_list in proptest::collection::vec((1..=5u8, 0..=5u32), 2..20),
            bump in 1..=5u32,
        ) {
            let sentences: Vec<ScoredSentence> = stars_list
                .iter()
                .map(|&(stars, votes)| scored(&["f"], stars, votes))
                .collect();
            let base: Vec<FeatureRating<f64>> = finalize(&accumulate(&sentences));
            let final_before = base[0].final_rating;
            // bump votes on a sentence whose stars >= current final
            let idx = sentences
                .iter()
                .position(|s| f64::from(s.stars) >= final_before)
                .expect("some sentence is at or above the mean");
            let mut bumped = sentences.clone();
            bumped[idx].votes += bump;
            let after: Vec<FeatureRating<f64>> = finalize(&accumulate(&bumped));
            prop_assert!(after[0].final_rating >= final_before - 1e-12);
        }

        #[test]
        fn zero_vote_corpus_degenerates_to_plain_mean(
            stars_list in proptest::collection::vec(1..=5u8, 1..30),
        ) {
            let sentences: Vec<ScoredSentence> = stars_list
                .iter()
                .map(|&stars| scored(&["f"], stars, 0))
                .collect();
            let ratings: Vec<FeatureRating<f64>> = finalize(&accumulate(&sentences));
            let mean = stars_list.iter().map(|&s| f64::from(s)).sum::<f64>()
                / stars_list.len() as f64;
            prop_assert!((ratings[0].final_rating - mean).abs() < 1e-12);
        }
    }
}
