//! CSV ingestion: validated review records grouped per product.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("failed to open {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("input has no header row: {0}")]
    MissingHeader(csv::Error),
    #[error("mapped column {0:?} not found in header row")]
    MissingColumn(String),
}

/// One customer review row.
#[derive(Debug, Clone, PartialEq)]
pub struct ReviewRecord {
    pub product_name: String,
    pub brand_name: Option<String>,
    /// Informational only; never used by the rating math.
    pub price: Option<f64>,
    /// Overall stars the customer gave, always in 1..=5.
    pub overall_rating: u8,
    pub review_text: String,
    /// Helpfulness votes; a blank cell means 0.
    pub review_votes: u32,
}

/// Maps logical fields to CSV header names. Brand and price may be unmapped;
/// the rest are required.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnMap {
    pub product: String,
    pub brand: Option<String>,
    pub price: Option<String>,
    pub rating: String,
    pub reviews: String,
    pub votes: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        ColumnMap {
            product: "Product Name".into(),
            brand: Some("Brand Name".into()),
            price: Some("Price".into()),
            rating: "Rating".into(),
            reviews: "Reviews".into(),
            votes: "Review Votes".into(),
        }
    }
}

/// Per-row outcomes of a load. Every data row is either loaded or tallied
/// under exactly one drop reason, so `data_rows == loaded + dropped()`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub data_rows: u64,
    pub loaded: u64,
    pub dropped_malformed_row: u64,
    pub dropped_blank_product: u64,
    pub dropped_empty_text: u64,
    pub dropped_bad_rating: u64,
    pub dropped_bad_votes: u64,
}

impl LoadReport {
    pub fn dropped(&self) -> u64 {
        self.dropped_malformed_row
            + self.dropped_blank_product
            + self.dropped_empty_text
            + self.dropped_bad_rating
            + self.dropped_bad_votes
    }
}

/// The full review corpus, keyed by exact trimmed product name. Records keep
/// file order within a product. Immutable once built.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    products: BTreeMap<String, Vec<ReviewRecord>>,
}

impl Corpus {
    pub fn from_records(records: Vec<ReviewRecord>) -> Self {
        let mut products: BTreeMap<String, Vec<ReviewRecord>> = BTreeMap::new();
        for record in records {
            products
                .entry(record.product_name.clone())
                .or_default()
                .push(record);
        }
        Corpus { products }
    }

    /// Products in name order with their records in file order.
    pub fn products(&self) -> impl Iterator<Item = (&str, &[ReviewRecord])> {
        self.products.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn records_for(&self, product: &str) -> Option<&[ReviewRecord]> {
        self.products.get(product).map(Vec::as_slice)
    }

    pub fn product_count(&self) -> usize {
        self.products.len()
    }

    pub fn review_count(&self) -> u64 {
        self.products.values().map(|v| v.len() as u64).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.products.is_empty()
    }
}

/// Summary counts over a corpus.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CorpusStats {
    pub product_count: u64,
    pub review_count: u64,
    pub total_votes: u64,
    /// votes value -> number of reviews with exactly that many votes
    pub vote_histogram: BTreeMap<u32, u64>,
}

pub fn corpus_stats(corpus: &Corpus) -> CorpusStats {
    let mut stats = CorpusStats {
        product_count: corpus.product_count() as u64,
        ..CorpusStats::default()
    };
    for (_, records) in corpus.products() {
        for record in records {
            stats.review_count += 1;
            stats.total_votes += u64::from(record.review_votes);
            *stats.vote_histogram.entry(record.review_votes).or_insert(0) += 1;
        }
    }
    stats
}

/// Loads a review corpus from a CSV file.
///
/// The file must be UTF-8 (invalid bytes are replaced and the row is kept),
/// comma-separated with double-quote quoting, and carry a header row with
/// the mapped columns. Rows that cannot be used are dropped and tallied in
/// the returned [`LoadReport`].
pub fn load_csv(path: &Path, schema: &ColumnMap) -> Result<(Corpus, LoadReport), IngestError> {
    let file = std::fs::File::open(path).map_err(|source| IngestError::Io {
        path: path.display().to_string(),
        source,
    })?;
    load_csv_reader(file, schema)
}

/// Same as [`load_csv`] over any reader; handy for tests and pipes.
pub fn load_csv_reader<R: Read>(
    reader: R,
    schema: &ColumnMap,
) -> Result<(Corpus, LoadReport), IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .from_reader(reader);

    let headers = rdr.byte_headers().map_err(IngestError::MissingHeader)?.clone();
    let find = |name: &str| -> Option<usize> {
        headers
            .iter()
            .position(|h| String::from_utf8_lossy(h).trim() == name)
    };
    let require = |name: &str| -> Result<usize, IngestError> {
        find(name).ok_or_else(|| IngestError::MissingColumn(name.to_owned()))
    };

    let product_idx = require(&schema.product)?;
    let rating_idx = require(&schema.rating)?;
    let reviews_idx = require(&schema.reviews)?;
    let votes_idx = require(&schema.votes)?;
    let brand_idx = match &schema.brand {
        Some(name) => Some(require(name)?),
        None => None,
    };
    let price_idx = match &schema.price {
        Some(name) => Some(require(name)?),
        None => None,
    };

    let mut report = LoadReport::default();
    let mut records = Vec::new();
    for row in rdr.byte_records() {
        report.data_rows += 1;
        let row = match row {
            Ok(row) => row,
            Err(_) => {
                report.dropped_malformed_row += 1;
                continue;
            }
        };
        let field = |idx: usize| -> String {
            row.get(idx)
                .map(|b| String::from_utf8_lossy(b).into_owned())
                .unwrap_or_default()
        };

        let product_name = field(product_idx).trim().to_owned();
        if product_name.is_empty() {
            report.dropped_blank_product += 1;
            continue;
        }
        let review_text = field(reviews_idx);
        if review_text.trim().is_empty() {
            report.dropped_empty_text += 1;
            continue;
        }
        let overall_rating = match parse_rating(&field(rating_idx)) {
            Some(r) => r,
            None => {
                report.dropped_bad_rating += 1;
                continue;
            }
        };
        let review_votes = match parse_votes(&field(votes_idx)) {
            Some(v) => v,
            None => {
                report.dropped_bad_votes += 1;
                continue;
            }
        };
        let brand_name = brand_idx.map(|i| field(i).trim().to_owned()).filter(|s| !s.is_empty());
        let price = price_idx.and_then(|i| field(i).trim().parse::<f64>().ok());

        report.loaded += 1;
        records.push(ReviewRecord {
            product_name,
            brand_name,
            price,
            overall_rating,
            review_text,
            review_votes,
        });
    }
    Ok((Corpus::from_records(records), report))
}

/// Stars must be an integral value in 1..=5; "5" and "5.0" both parse.
fn parse_rating(raw: &str) -> Option<u8> {
    let value: f64 = raw.trim().parse().ok()?;
    if !value.is_finite() || value.fract() != 0.0 {
        return None;
    }
    let stars = value as i64;
    (1..=5).contains(&stars).then_some(stars as u8)
}

/// Votes must be a non-negative integral value; a blank cell means 0.
fn parse_votes(raw: &str) -> Option<u32> {
    let raw = raw.trim();
    if raw.is_empty() {
        return Some(0);
    }
    let value: f64 = raw.parse().ok()?;
    if !value.is_finite() || value.fract() != 0.0 || value < 0.0 || value > u32::MAX as f64 {
        return None;
    }
    Some(value as u32)
}
