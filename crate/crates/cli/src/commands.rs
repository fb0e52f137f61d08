//! Subcommand implementations.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use wikiease_core::eval::{EvalReport, SplitSummary};
use wikiease_core::persist::read_header;
use wikiease_core::{
    align, align_to_vocab, evaluate, fit, load_feature_pairs, load_interactions, read_model,
    score_user, top_r, write_model, AlignStats, Evaluation, FeatureMatrix, Protocol,
    RawInteractions, SimilarityModel,
};

use crate::config::{PartialConfig, RunConfig};
use crate::format::sig;
use crate::{FitArgs, InspectArgs, RecommendArgs, RunArgs, SimilarArgs};

fn resolve(args: &RunArgs) -> Result<RunConfig> {
    let mut layers = Vec::new();
    if let Some(path) = &args.config {
        layers.push(PartialConfig::from_file(path)?);
    }
    layers.push(args.as_layer());
    RunConfig::resolve(layers)
}

fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(BufReader::new(file))
}

/// Writes through a temporary file in the target directory and renames it
/// into place only if `body` succeeds, so failures leave no partial output.
pub fn write_atomic<F>(path: &Path, body: F) -> Result<()>
where
    F: FnOnce(&mut dyn Write) -> Result<()>,
{
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    {
        let mut w = BufWriter::new(tmp.as_file());
        body(&mut w)?;
        w.flush()?;
    }
    tmp.persist(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn load_features(cfg: &RunConfig) -> Result<FeatureMatrix> {
    let path = cfg.require_features()?;
    load_feature_pairs(open(path)?, cfg.mode, cfg.min_feature_count)
        .with_context(|| format!("reading features from {}", path.display()))
}

fn read_interactions(path: &Path, threshold: f64) -> Result<RawInteractions> {
    load_interactions(open(path)?, threshold)
        .with_context(|| format!("reading interactions from {}", path.display()))
}

pub fn load_model(path: &Path) -> Result<SimilarityModel> {
    read_model(open(path)?).with_context(|| format!("reading model {}", path.display()))
}

pub fn cmd_fit(args: &FitArgs, stdout: &mut dyn Write) -> Result<()> {
    let cfg = resolve(&args.run)?;
    let out = cfg
        .out
        .clone()
        .context("an output model path is required (--out)")?;
    let lambda = match cfg.lambdas.as_slice() {
        [l] => *l,
        _ => bail!("invalid argument: fit takes exactly one lambda"),
    };
    let started = Instant::now();
    let fm = load_features(&cfg)?;
    if let Some(dump) = &args.dump_features {
        write_atomic(dump, |w| Ok(fm.write_tsv(w)?))?;
    }
    let mut model = fit(&fm, lambda)?;
    if let Some(threshold) = args.prune_below {
        let zeroed = model.sparsify(threshold);
        log::info!("pruned {zeroed} weights below {threshold}");
    }
    write_atomic(&out, |w| Ok(write_model(&model, w)?))?;
    writeln!(stdout, "entities\t{}", fm.n_entities())?;
    writeln!(stdout, "features\t{}", fm.n_features())?;
    writeln!(stdout, "lambda\t{lambda}")?;
    writeln!(stdout, "seconds\t{:.3}", started.elapsed().as_secs_f64())?;
    Ok(())
}

pub fn cmd_similar(args: &SimilarArgs, stdout: &mut dyn Write) -> Result<()> {
    let model = load_model(&args.model)?;
    for (rank, (entity, weight)) in model
        .top_similar(&args.entity, args.k)?
        .into_iter()
        .enumerate()
    {
        writeln!(stdout, "{}\t{}\t{}", rank + 1, entity, sig(weight, 6))?;
    }
    Ok(())
}

fn write_recommendations(
    model: &SimilarityModel,
    raw: &RawInteractions,
    top: usize,
    w: &mut dyn Write,
) -> Result<AlignStats> {
    let (interactions, stats) = align(raw, model)?;
    let vocab = model.entity_vocab();
    for (user, history) in interactions.users() {
        let scores = score_user(history, model);
        for (rank, j) in top_r(&scores, history, top).into_iter().enumerate() {
            writeln!(
                w,
                "{user}\t{}\t{}\t{}",
                rank + 1,
                vocab.name(j),
                sig(scores[j], 6)
            )?;
        }
    }
    Ok(stats)
}

pub fn cmd_recommend(args: &RecommendArgs, stdout: &mut dyn Write) -> Result<()> {
    if args.top == 0 {
        bail!("invalid argument: --top must be at least 1");
    }
    let model = load_model(&args.model)?;
    let raw = read_interactions(&args.interactions, args.rating_threshold)?;
    let stats = match &args.out {
        Some(path) => {
            let mut stats = AlignStats::default();
            write_atomic(path, |w| {
                stats = write_recommendations(&model, &raw, args.top, w)?;
                Ok(())
            })?;
            stats
        }
        None => write_recommendations(&model, &raw, args.top, stdout)?,
    };
    if stats.dropped_pairs > 0 {
        log::warn!(
            "dropped {} interactions with {} entities unknown to the model ({} users removed)",
            stats.dropped_pairs,
            stats.dropped_entities,
            stats.dropped_users
        );
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct FeatureStats {
    n_entities: usize,
    n_features: usize,
    nnz: usize,
}

#[derive(Debug, Serialize)]
struct LambdaEntry<'a> {
    lambda: f64,
    report: &'a EvalReport,
}

/// Machine-readable evaluation report.
#[derive(Debug, Serialize)]
struct ReportDocument<'a> {
    config: &'a RunConfig,
    features: FeatureStats,
    alignment: AlignStats,
    split: &'a SplitSummary,
    models: Vec<LambdaEntry<'a>>,
    popularity: &'a EvalReport,
}

fn write_report_rows(label: &str, report: &EvalReport, w: &mut dyn Write) -> Result<()> {
    for summary in &report.summary {
        let (metric, r) = (summary.metric, summary.r);
        for fold in 0..report.n_folds {
            let value = report.fold_value(fold, metric, r).unwrap_or(f64::NAN);
            writeln!(w, "{label}\t{metric}\t{r}\t{fold}\t{value:.6}")?;
        }
        writeln!(w, "{label}\t{metric}\t{r}\tmean\t{:.6}", summary.mean)?;
        writeln!(w, "{label}\t{metric}\t{r}\tstd\t{:.6}", summary.std)?;
    }
    Ok(())
}

/// TSV `lambda<TAB>metric<TAB>R<TAB>fold<TAB>value` with a header line;
/// the popularity baseline uses `popularity` in the lambda column.
pub fn write_evaluation_tsv(evaluation: &Evaluation, w: &mut dyn Write) -> Result<()> {
    writeln!(w, "lambda\tmetric\tR\tfold\tvalue")?;
    for entry in &evaluation.models {
        write_report_rows(&entry.lambda.to_string(), &entry.report, w)?;
    }
    write_report_rows("popularity", &evaluation.popularity, w)
}

pub fn cmd_evaluate(args: &RunArgs, stdout: &mut dyn Write) -> Result<()> {
    let cfg = resolve(args)?;
    let fm = load_features(&cfg)?;
    let raw = read_interactions(cfg.require_interactions()?, cfg.rating_threshold)?;
    let (interactions, alignment) = align_to_vocab(&raw, fm.entity_vocab())?;
    log::info!(
        "aligned {} users; dropped {} pairs, {} entities, {} users",
        interactions.n_users(),
        alignment.dropped_pairs,
        alignment.dropped_entities,
        alignment.dropped_users
    );
    let protocol = Protocol {
        n_folds: cfg.n_folds,
        history_fraction: cfg.history_fraction,
        seed: cfg.seed,
        cutoffs: cfg.cutoffs.clone(),
    };
    let evaluation = evaluate(&fm, &interactions, &cfg.lambdas, &protocol)?;

    match &cfg.out {
        Some(path) => write_atomic(path, |w| write_evaluation_tsv(&evaluation, w))?,
        None => write_evaluation_tsv(&evaluation, stdout)?,
    }
    if let Some(path) = &cfg.report {
        let doc = ReportDocument {
            config: &cfg,
            features: FeatureStats {
                n_entities: fm.n_entities(),
                n_features: fm.n_features(),
                nnz: fm.nnz(),
            },
            alignment,
            split: &evaluation.split,
            models: evaluation
                .models
                .iter()
                .map(|m| LambdaEntry {
                    lambda: m.lambda,
                    report: &m.report,
                })
                .collect(),
            popularity: &evaluation.popularity,
        };
        write_atomic(path, |w| {
            serde_json::to_writer_pretty(&mut *w, &doc)?;
            writeln!(w)?;
            Ok(())
        })?;
    }
    Ok(())
}

pub fn cmd_inspect(args: &InspectArgs, stdout: &mut dyn Write) -> Result<()> {
    let header = read_header(&mut open(&args.model)?)
        .with_context(|| format!("reading header of {}", args.model.display()))?;
    let model = load_model(&args.model)?;
    let n = model.n_entities();
    let w = model.weights();
    let mut nonzero = 0usize;
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    let mut asym: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let x = w.get(i, j);
            nonzero += usize::from(x != 0.0);
            min = min.min(x);
            max = max.max(x);
            asym = asym.max((x - w.get(j, i)).abs());
        }
    }
    writeln!(stdout, "format\tEASEB v1")?;
    writeln!(stdout, "entities\t{}", header.n_entities)?;
    writeln!(stdout, "vocab_bytes\t{}", header.vocab_bytes)?;
    writeln!(stdout, "file_bytes\t{}", header.file_len())?;
    writeln!(stdout, "nonzero_offdiag\t{nonzero}")?;
    if n > 1 {
        writeln!(stdout, "min_weight\t{}", sig(min, 6))?;
        writeln!(stdout, "max_weight\t{}", sig(max, 6))?;
        writeln!(stdout, "max_asymmetry\t{}", sig(asym, 6))?;
    }
    Ok(())
}
