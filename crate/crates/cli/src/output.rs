//! Report emission. All writers are deterministic: inputs arrive in sorted
//! containers and ratings are printed with three decimals, so identical runs
//! produce byte-identical files.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{json, Value};

use featrate_core::lexicon::FrequencyReport;
use featrate_core::rankeval::ProductRank;
use featrate_core::{EvalReport, ProductRatings, Recommendation};

pub fn write_output(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .with_context(|| format!("writing output file {}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(bytes)
                .context("writing to stdout")
        }
    }
}

/// Three-decimal presentation used for every rating we print.
fn rating3(value: f64) -> String {
    format!("{value:.3}")
}

/// Same rounding as [`rating3`] but kept numeric for JSON output.
fn rating3_num(value: f64) -> f64 {
    (value * 1000.0).round() / 1000.0
}

pub fn ratings_csv(all: &BTreeMap<String, ProductRatings>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["product", "feature", "final", "mention_count", "weight_total"])?;
    for ratings in all.values() {
        for rating in ratings.ratings.values() {
            w.write_record([
                ratings.product_name.as_str(),
                rating.feature.as_str(),
                &rating3(rating.final_rating),
                &rating.mention_count.to_string(),
                &rating.weight_total.to_string(),
            ])?;
        }
    }
    Ok(w.into_inner()?)
}

pub fn ratings_json(all: &BTreeMap<String, ProductRatings>) -> Vec<u8> {
    let mut products = serde_json::Map::new();
    for ratings in all.values() {
        let mut features = serde_json::Map::new();
        for rating in ratings.ratings.values() {
            features.insert(
                rating.feature.clone(),
                json!({
                    "final": rating3_num(rating.final_rating),
                    "mention_count": rating.mention_count,
                    "weight_total": rating.weight_total,
                }),
            );
        }
        products.insert(ratings.product_name.clone(), Value::Object(features));
    }
    pretty(&Value::Object(products))
}

pub fn ranking_csv(ranking: &[ProductRank]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["rank", "product", "best_feature_count", "tiebreak_votes"])?;
    for (idx, row) in ranking.iter().enumerate() {
        w.write_record([
            &(idx + 1).to_string(),
            row.product_name.as_str(),
            &row.best_feature_count.to_string(),
            &row.tiebreak_votes.to_string(),
        ])?;
    }
    Ok(w.into_inner()?)
}

pub fn ranking_json(ranking: &[ProductRank]) -> Vec<u8> {
    let rows: Vec<Value> = ranking
        .iter()
        .enumerate()
        .map(|(idx, row)| {
            json!({
                "rank": idx + 1,
                "product": row.product_name,
                "best_feature_count": row.best_feature_count,
                "tiebreak_votes": row.tiebreak_votes,
            })
        })
        .collect();
    pretty(&Value::Array(rows))
}

pub fn recommendation_csv(rec: &Recommendation) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["feature", "product", "rating"])?;
    w.write_record([
        rec.feature.as_str(),
        rec.product_name.as_str(),
        &rating3(rec.rating),
    ])?;
    Ok(w.into_inner()?)
}

pub fn recommendation_json(rec: &Recommendation) -> Vec<u8> {
    pretty(&json!({
        "feature": rec.feature,
        "product": rec.product_name,
        "rating": rating3_num(rec.rating),
    }))
}

pub fn freq_table_csv(report: &FrequencyReport) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["token", "count", "fraction"])?;
    for row in &report.rows {
        w.write_record([
            row.token.as_str(),
            &row.count.to_string(),
            &format!("{:.6}", row.fraction),
        ])?;
    }
    Ok(w.into_inner()?)
}

pub fn freq_table_json(report: &FrequencyReport) -> Vec<u8> {
    let rows: Vec<Value> = report
        .rows
        .iter()
        .map(|row| json!({ "token": row.token, "count": row.count, "fraction": row.fraction }))
        .collect();
    pretty(&json!({ "review_count": report.review_count, "rows": rows }))
}

pub fn eval_json(report: &EvalReport) -> Vec<u8> {
    pretty(&json!({
        "n": report.n,
        "mse": report.mse,
        "rmse": report.rmse,
        "mae": report.mae,
        "exact_accuracy": report.exact_accuracy,
        "within_one_accuracy": report.within_one_accuracy,
        "confusion": report.confusion,
    }))
}

/// Human-readable evaluation report: the error metrics and the 5x5
/// confusion matrix of actual versus predicted integer stars.
pub fn eval_table(report: &EvalReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "Phone-feature evaluation over {} products\n\n",
        report.n
    ));
    out.push_str("  MSE     RMSE    MAE\n");
    out.push_str(&format!(
        "  {:<7.3} {:<7.3} {:<7.3}\n\n",
        report.mse, report.rmse, report.mae
    ));
    out.push_str("Confusion matrix (rows: actual stars, columns: predicted stars)\n");
    out.push_str("           1-star  2-star  3-star  4-star  5-star\n");
    for (i, row) in report.confusion.iter().enumerate() {
        out.push_str(&format!(
            "  {}-star {:>8} {:>7} {:>7} {:>7} {:>7}\n",
            i + 1,
            row[0],
            row[1],
            row[2],
            row[3],
            row[4]
        ));
    }
    out.push_str(&format!(
        "\nExact accuracy: {:.1}%   Within-one-star accuracy: {:.1}%\n",
        report.exact_accuracy * 100.0,
        report.within_one_accuracy * 100.0
    ));
    out
}

fn pretty(value: &Value) -> Vec<u8> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("JSON reports always serialize");
    bytes.push(b'\n');
    bytes
}
