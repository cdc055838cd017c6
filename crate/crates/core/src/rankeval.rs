//! Product ranking, per-feature recommendation, and evaluation of the
//! "phone" feature against customer-given overall ratings.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::ingest::{Corpus, ReviewRecord};
use crate::num::Scalar;
use crate::ratings::ProductRatings;

#[derive(Debug, Error)]
pub enum RankEvalError {
    #[error("no product carries a rating for feature {0:?}")]
    FeatureNotRated(String),
    #[error("cannot compute a ground-truth rating from zero reviews")]
    NoRecords,
}

/// Ranking row: how many features this product is best at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductRank {
    pub product_name: String,
    pub best_feature_count: u32,
    /// Total review votes across the product's reviews; breaks count ties.
    pub tiebreak_votes: u64,
}

/// Ranks every product by the number of features where it attains the
/// corpus-maximal final rating (ties count for every tied product), ordered
/// by that count descending, then total votes descending, then name.
pub fn rank_products<F: Scalar>(all: &BTreeMap<String, ProductRatings<F>>) -> Vec<ProductRank> {
    let mut feature_max: HashMap<&str, F> = HashMap::new();
    for ratings in all.values() {
        for (feature, rating) in &ratings.ratings {
            feature_max
                .entry(feature.as_str())
                .and_modify(|m| {
                    if rating.final_rating > *m {
                        *m = rating.final_rating;
                    }
                })
                .or_insert(rating.final_rating);
        }
    }
    let mut ranks: Vec<ProductRank> = all
        .values()
        .map(|ratings| {
            let best = ratings
                .ratings
                .iter()
                .filter(|(feature, rating)| {
                    feature_max.get(feature.as_str()) == Some(&rating.final_rating)
                })
                .count() as u32;
            ProductRank {
                product_name: ratings.product_name.clone(),
                best_feature_count: best,
                tiebreak_votes: ratings.total_votes,
            }
        })
        .collect();
    ranks.sort_by(|a, b| {
        b.best_feature_count
            .cmp(&a.best_feature_count)
            .then_with(|| b.tiebreak_votes.cmp(&a.tiebreak_votes))
            .then_with(|| a.product_name.cmp(&b.product_name))
    });
    ranks
}

/// The product to buy for one feature.
#[derive(Debug, Clone, PartialEq)]
pub struct Recommendation<F> {
    pub feature: String,
    pub product_name: String,
    pub rating: F,
}

/// Recommends the product with the feature's maximal rating; among tied
/// products the one ranked highest by [`rank_products`] wins.
pub fn recommend<F: Scalar>(
    feature: &str,
    all: &BTreeMap<String, ProductRatings<F>>,
    ranking: &[ProductRank],
) -> Result<Recommendation<F>, RankEvalError> {
    let mut max: Option<F> = None;
    for ratings in all.values() {
        if let Some(r) = ratings.rating_for(feature) {
            match max {
                Some(m) if r.final_rating <= m => {}
                _ => max = Some(r.final_rating),
            }
        }
    }
    let max = max.ok_or_else(|| RankEvalError::FeatureNotRated(feature.to_owned()))?;
    let position: HashMap<&str, usize> = ranking
        .iter()
        .enumerate()
        .map(|(i, r)| (r.product_name.as_str(), i))
        .collect();
    let winner = all
        .values()
        .filter(|p| p.rating_for(feature).map(|r| r.final_rating) == Some(max))
        .min_by_key(|p| {
            (
                position.get(p.product_name.as_str()).copied().unwrap_or(usize::MAX),
                p.product_name.clone(),
            )
        })
        .expect("at least one product attains the maximum");
    Ok(Recommendation {
        feature: feature.to_owned(),
        product_name: winner.product_name.clone(),
        rating: max,
    })
}

/// Which weights the ground-truth average uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GroundTruthWeights {
    /// Weight each review by its raw vote count. Reviews with zero votes
    /// then carry no weight; if every review has zero votes this mode falls
    /// back to the unweighted mean.
    Votes,
    /// Weight each review by votes + 1, counting the reviewer's self-vote.
    #[default]
    VotesPlusOne,
}

/// Votes-weighted mean of the customers' overall star ratings.
pub fn ground_truth<F: Scalar>(
    records: &[ReviewRecord],
    weights: GroundTruthWeights,
) -> Result<F, RankEvalError> {
    if records.is_empty() {
        return Err(RankEvalError::NoRecords);
    }
    let mut numerator: u64 = 0;
    let mut denominator: u64 = 0;
    for record in records {
        let w = match weights {
            GroundTruthWeights::Votes => u64::from(record.review_votes),
            GroundTruthWeights::VotesPlusOne => u64::from(record.review_votes) + 1,
        };
        numerator += u64::from(record.overall_rating) * w;
        denominator += w;
    }
    if denominator == 0 {
        // all-zero votes in Votes mode
        numerator = records.iter().map(|r| u64::from(r.overall_rating)).sum();
        denominator = records.len() as u64;
    }
    Ok(F::of_count(numerator) / F::of_count(denominator))
}

/// Error metrics and confusion matrix for one feature's predictions.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport<F> {
    pub mse: F,
    pub rmse: F,
    pub mae: F,
    /// `confusion[actual - 1][predicted - 1]`, stars rounded half-up.
    pub confusion: [[u64; 5]; 5],
    /// Products that carried a rating for the evaluated feature.
    pub n: u64,
    pub exact_accuracy: F,
    pub within_one_accuracy: F,
}

/// Rounds a rating half-up to an integer star, clamped into 1..=5.
pub fn round_star<F: Scalar>(value: F) -> u8 {
    let rounded = (value + F::of(0.5)).floor();
    let star = rounded.to_i64().unwrap_or(1);
    star.clamp(1, 5) as u8
}

/// Compares the final ratings of the "phone" feature against the
/// votes-weighted mean of customer overall ratings, over the products that
/// received a phone rating. MSE/RMSE/MAE are computed on the raw decimals;
/// the confusion matrix rounds both sides half-up into integer stars.
pub fn evaluate_phone_feature<F: Scalar>(
    corpus: &Corpus,
    all: &BTreeMap<String, ProductRatings<F>>,
    weights: GroundTruthWeights,
) -> EvalReport<F> {
    const FEATURE: &str = "phone";
    let mut n: u64 = 0;
    let mut sq_sum = F::zero();
    let mut abs_sum = F::zero();
    let mut confusion = [[0u64; 5]; 5];
    for (name, records) in corpus.products() {
        let Some(predicted) = all
            .get(name)
            .and_then(|p| p.rating_for(FEATURE))
            .map(|r| r.final_rating)
        else {
            continue;
        };
        let actual: F = ground_truth(records, weights).expect("product has records");
        n += 1;
        let diff = predicted - actual;
        sq_sum = sq_sum + diff * diff;
        abs_sum = abs_sum + diff.abs();
        let row = usize::from(round_star(actual)) - 1;
        let col = usize::from(round_star(predicted)) - 1;
        confusion[row][col] += 1;
    }
    if n == 0 {
        return EvalReport {
            mse: F::zero(),
            rmse: F::zero(),
            mae: F::zero(),
            confusion,
            n,
            exact_accuracy: F::zero(),
            within_one_accuracy: F::zero(),
        };
    }
    let count = F::of_count(n);
    let mse = sq_sum / count;
    let rmse = mse.sqrt();
    let mae = abs_sum / count;
    assert!(mae <= rmse + F::of(1e-12), "MAE must not exceed RMSE");
    let trace: u64 = (0..5).map(|i| confusion[i][i]).sum();
    let near: u64 = (0..4).map(|i| confusion[i][i + 1] + confusion[i + 1][i]).sum();
    EvalReport {
        mse,
        rmse,
        mae,
        confusion,
        n,
        exact_accuracy: F::of_count(trace) / count,
        within_one_accuracy: F::of_count(trace + near) / count,
    }
}
