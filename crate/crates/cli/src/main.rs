//! `featrate`: feature-level product ratings from review CSVs.

mod output;

use std::collections::BTreeMap;
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use featrate_core::rankeval::{evaluate_phone_feature, rank_products, recommend};
use featrate_core::{
    bundled, corpus_stats, frequency_table, lexicon, load_csv, sentiment, ColumnMap, Corpus,
    EmoticonSet, FeatureLexicon, GroundTruthWeights, HeuristicConfig, ProductRatings,
    RatingPipeline, SentimentLexicon, SpellCache, SpellDictionary,
};

#[derive(Parser)]
#[command(
    name = "featrate",
    version,
    about = "Turns product reviews and review votes into per-feature star ratings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit the corpus token-frequency table used to curate feature words
    FreqTable(FreqTableArgs),
    /// Rate every product on every mentioned feature
    Rate(PipelineArgs),
    /// Rank products by the number of features they are best at
    Rank(PipelineArgs),
    /// Recommend the best product for one feature
    Recommend(RecommendArgs),
    /// Compare the "phone" feature ratings against customer overall ratings
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GtWeightsArg {
    Votes,
    VotesPlusOne,
}

impl From<GtWeightsArg> for GroundTruthWeights {
    fn from(value: GtWeightsArg) -> Self {
        match value {
            GtWeightsArg::Votes => GroundTruthWeights::Votes,
            GtWeightsArg::VotesPlusOne => GroundTruthWeights::VotesPlusOne,
        }
    }
}

#[derive(Args)]
struct CommonArgs {
    /// Review CSV to load (UTF-8, header row required)
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    /// Feature-lexicon file overriding the bundled default
    #[arg(long, value_name = "PATH")]
    lexicon: Option<PathBuf>,
    /// Valence-lexicon file overriding the bundled default
    #[arg(long = "sent-lexicon", value_name = "PATH")]
    sent_lexicon: Option<PathBuf>,
    /// Spell dictionary (`word count` lines) overriding the bundled default
    #[arg(long, value_name = "PATH")]
    dict: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Split sentences only at periods and drop unterminated tails
    #[arg(long = "strict-eq4")]
    strict_eq4: bool,
    /// Worker threads for the rating pass (default: all cores)
    #[arg(long, value_name = "N")]
    workers: Option<NonZeroUsize>,
    /// Persist the spell-correction memo table at this path between runs
    #[arg(long, value_name = "PATH")]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct FreqTableArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Keep tokens whose count is at least this fraction of the review count
    #[arg(long = "min-fraction", value_name = "FRACTION", default_value_t = 0.0002)]
    min_fraction: f64,
}

#[derive(Args)]
struct RecommendArgs {
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Feature keyword to recommend for
    #[arg(long, value_name = "KEYWORD")]
    feature: String,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Weights for the ground-truth average of customer ratings
    #[arg(long = "gt-weights", value_enum, default_value_t = GtWeightsArg::VotesPlusOne)]
    gt_weights: GtWeightsArg,
}

/// Everything the text pipeline needs, loaded once per run.
struct LoadedData {
    feature_lexicon: FeatureLexicon,
    spell_dict: SpellDictionary,
    emoticons: EmoticonSet,
    sentiment: SentimentLexicon,
    heuristics: HeuristicConfig,
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::FreqTable(args) => cmd_freq_table(args),
        Command::Rate(args) => cmd_rate(args),
        Command::Rank(args) => cmd_rank(args),
        Command::Recommend(args) => cmd_recommend(args),
        Command::Eval(args) => cmd_eval(args),
    }
}

/// Fail fast on bad paths before any corpus work starts.
fn validate_common(args: &CommonArgs) -> Result<()> {
    let must_exist = |label: &str, path: &Path| -> Result<()> {
        if !path.exists() {
            bail!("{label} file {} does not exist", path.display());
        }
        Ok(())
    };
    must_exist("input", &args.input)?;
    if let Some(p) = &args.lexicon {
        must_exist("lexicon", p)?;
    }
    if let Some(p) = &args.sent_lexicon {
        must_exist("sentiment lexicon", p)?;
    }
    if let Some(p) = &args.dict {
        must_exist("spell dictionary", p)?;
    }
    if let Some(dir) = bundled::data_dir_override() {
        if !dir.is_dir() {
            bail!(
                "{} points at {}, which is not a directory",
                bundled::DATA_DIR_ENV,
                dir.display()
            );
        }
    }
    Ok(())
}

fn load_data(args: &CommonArgs) -> Result<LoadedData> {
    let heuristics = HeuristicConfig::default();
    let feature_lexicon = match &args.lexicon {
        Some(path) => lexicon::load_lexicon(path)
            .with_context(|| format!("loading feature lexicon {}", path.display()))?,
        None => bundled::feature_lexicon().context("loading bundled feature lexicon")?,
    };
    let spell_dict = match &args.dict {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading spell dictionary {}", path.display()))?;
            SpellDictionary::parse(&text)
                .with_context(|| format!("parsing spell dictionary {}", path.display()))?
        }
        None => bundled::spell_dictionary().context("loading bundled spell dictionary")?,
    };
    let emoticons = bundled::emoticons().context("loading emoticon list")?;
    let sentiment = match &args.sent_lexicon {
        Some(path) => {
            let valences = std::fs::read_to_string(path)
                .with_context(|| format!("reading valence lexicon {}", path.display()))?;
            let boosters = bundled::word_list_text(bundled::BOOSTERS_FILE)?;
            let dampeners = bundled::word_list_text(bundled::DAMPENERS_FILE)?;
            let negators = bundled::word_list_text(bundled::NEGATORS_FILE)?;
            sentiment::SentimentLexicon::parse(
                &valences,
                &boosters,
                &dampeners,
                &negators,
                &heuristics,
            )
            .with_context(|| format!("parsing valence lexicon {}", path.display()))?
        }
        None => bundled::sentiment_lexicon(&heuristics).context("loading bundled valence lexicon")?,
    };
    Ok(LoadedData {
        feature_lexicon,
        spell_dict,
        emoticons,
        sentiment,
        heuristics,
    })
}

fn load_corpus(args: &CommonArgs) -> Result<Corpus> {
    let (corpus, report) = load_csv(&args.input, &ColumnMap::default())
        .with_context(|| format!("loading {}", args.input.display()))?;
    let stats = corpus_stats(&corpus);
    eprintln!(
        "loaded {} reviews for {} products ({} of {} rows dropped)",
        stats.review_count,
        stats.product_count,
        report.dropped(),
        report.data_rows
    );
    Ok(corpus)
}

fn load_cache(path: Option<&Path>) -> Result<SpellCache> {
    let cache = SpellCache::new();
    let Some(path) = path else {
        return Ok(cache);
    };
    if !path.exists() {
        return Ok(cache);
    }
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading spell cache {}", path.display()))?;
    for (idx, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let Some((word, correction)) = line.split_once('\t') else {
            bail!("spell cache {}: malformed line {}", path.display(), idx + 1);
        };
        cache.insert(word.to_owned(), correction.to_owned());
    }
    Ok(cache)
}

fn save_cache(path: Option<&Path>, cache: &SpellCache) -> Result<()> {
    let Some(path) = path else {
        return Ok(());
    };
    let mut text = String::new();
    for (word, correction) in cache.entries() {
        text.push_str(&word);
        text.push('\t');
        text.push_str(&correction);
        text.push('\n');
    }
    std::fs::write(path, text).with_context(|| format!("writing spell cache {}", path.display()))
}

/// Runs the rating pass over the corpus on a pool of `--workers` threads.
fn rate_all(
    args: &PipelineArgs,
    data: &LoadedData,
    cache: &SpellCache,
    corpus: &Corpus,
) -> Result<BTreeMap<String, ProductRatings>> {
    let pipeline = RatingPipeline {
        feature_lexicon: &data.feature_lexicon,
        spell_dict: &data.spell_dict,
        emoticons: &data.emoticons,
        sentiment: &data.sentiment,
        heuristics: &data.heuristics,
        strict_sentences: args.strict_eq4,
        cache,
    };
    let workers = args
        .workers
        .map(NonZeroUsize::get)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, NonZeroUsize::get));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .context("building worker pool")?;
    Ok(pool.install(|| pipeline.rate_corpus(corpus)))
}

fn cmd_freq_table(args: FreqTableArgs) -> Result<()> {
    if !(0.0..=1.0).contains(&args.min_fraction) {
        bail!("--min-fraction must be within [0, 1]");
    }
    validate_common(&args.common)?;
    let data = load_data(&args.common)?;
    let corpus = load_corpus(&args.common)?;
    let report = frequency_table(&corpus, args.min_fraction, &data.emoticons);
    let bytes = match args.common.format {
        OutputFormat::Csv => output::freq_table_csv(&report)?,
        OutputFormat::Json => output::freq_table_json(&report),
    };
    output::write_output(args.common.out.as_deref(), &bytes)
}

fn cmd_rate(args: PipelineArgs) -> Result<()> {
    validate_common(&args.common)?;
    let data = load_data(&args.common)?;
    let cache = load_cache(args.cache.as_deref())?;
    let corpus = load_corpus(&args.common)?;
    let all = rate_all(&args, &data, &cache, &corpus)?;
    let bytes = match args.common.format {
        OutputFormat::Csv => output::ratings_csv(&all)?,
        OutputFormat::Json => output::ratings_json(&all),
    };
    save_cache(args.cache.as_deref(), &cache)?;
    output::write_output(args.common.out.as_deref(), &bytes)
}

fn cmd_rank(args: PipelineArgs) -> Result<()> {
    validate_common(&args.common)?;
    let data = load_data(&args.common)?;
    let cache = load_cache(args.cache.as_deref())?;
    let corpus = load_corpus(&args.common)?;
    let all = rate_all(&args, &data, &cache, &corpus)?;
    let ranking = rank_products(&all);
    let bytes = match args.common.format {
        OutputFormat::Csv => output::ranking_csv(&ranking)?,
        OutputFormat::Json => output::ranking_json(&ranking),
    };
    save_cache(args.cache.as_deref(), &cache)?;
    output::write_output(args.common.out.as_deref(), &bytes)
}

fn cmd_recommend(args: RecommendArgs) -> Result<()> {
    let RecommendArgs { pipeline, feature } = args;
    validate_common(&pipeline.common)?;
    let data = load_data(&pipeline.common)?;
    let cache = load_cache(pipeline.cache.as_deref())?;
    let corpus = load_corpus(&pipeline.common)?;
    let all = rate_all(&pipeline, &data, &cache, &corpus)?;
    let ranking = rank_products(&all);
    let rec = recommend(&feature, &all, &ranking)
        .with_context(|| format!("recommending for feature {feature:?}"))?;
    let bytes = match pipeline.common.format {
        OutputFormat::Csv => output::recommendation_csv(&rec)?,
        OutputFormat::Json => output::recommendation_json(&rec),
    };
    save_cache(pipeline.cache.as_deref(), &cache)?;
    output::write_output(pipeline.common.out.as_deref(), &bytes)
}

fn cmd_eval(args: EvalArgs) -> Result<()> {
    let EvalArgs { pipeline, gt_weights } = args;
    validate_common(&pipeline.common)?;
    let data = load_data(&pipeline.common)?;
    let cache = load_cache(pipeline.cache.as_deref())?;
    let corpus = load_corpus(&pipeline.common)?;
    let all = rate_all(&pipeline, &data, &cache, &corpus)?;
    let report = evaluate_phone_feature(&corpus, &all, gt_weights.into());
    save_cache(pipeline.cache.as_deref(), &cache)?;
    let json = output::eval_json(&report);
    match (&pipeline.common.out, pipeline.common.format) {
        (Some(path), _) => {
            // human-readable table on stdout, JSON report in the file
            print!("{}", output::eval_table(&report));
            output::write_output(Some(path), &json)
        }
        (None, OutputFormat::Json) => output::write_output(None, &json),
        (None, OutputFormat::Csv) => {
            print!("{}", output::eval_table(&report));
            Ok(())
        }
    }
}
