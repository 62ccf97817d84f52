//! Per-language stage chain and cross-language comparison.
//!
//! `ingest` parses the raw inputs into a cache (`index.tsv`, `matrix.bin`,
//! `edges.tsv`). Later stages start from that cache and recompute the
//! earlier in-memory steps, which are deterministic, before writing their
//! own artifacts.

use std::collections::BTreeMap;
use std::fs::File;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use wikitrends::burst::trending_pages;
use wikitrends::graph::{build_trend_graph, louvain_traced, pagerank_clusters, PageRank, Partition};
use wikitrends::ingest::{
    hour_from_file_name, load_edges, load_summaries, prefilter, read_edge_titles, read_index, read_matrix,
    read_pageview_file, write_index, write_matrix,
};
use wikitrends::label::{
    evaluate, label_clusters, rule_label, stratified_split, train_classifier, Classifier, LabelRules,
};
use wikitrends::report::{
    align_trends, assemble_trends, export, read_trends_json, topic_distribution, write_atomic, Artifact, ExportFormat,
};
use wikitrends::text::{build_cluster_docs, lda_fit, lda_top_words, tfidf_keywords, ClusterDoc, LangConfig, Tokenizer};
use wikitrends::{
    round6, BurstProfile, EdgeList, KeywordScores, Label, PageId, SummaryStore, Trend, TrendGraph, ViewMatrix,
};

use crate::config::{derive_seed, LanguageConfig};
use crate::{write_manifest, CliError, Manifest, PipelineConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    Ingest,
    Detect,
    Cluster,
    Keywords,
    Label,
    Trends,
    Compare,
}

impl Stage {
    pub const ALL: [Stage; 7] = [
        Stage::Ingest,
        Stage::Detect,
        Stage::Cluster,
        Stage::Keywords,
        Stage::Label,
        Stage::Trends,
        Stage::Compare,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stage::Ingest => "ingest",
            Stage::Detect => "detect",
            Stage::Cluster => "cluster",
            Stage::Keywords => "keywords",
            Stage::Label => "label",
            Stage::Trends => "trends",
            Stage::Compare => "compare",
        }
    }
}

pub const INDEX_FILE: &str = "index.tsv";
pub const MATRIX_FILE: &str = "matrix.bin";
pub const EDGES_FILE: &str = "edges.tsv";
pub const TRENDS_FILE: &str = "trends.json";
pub const ALIGNMENT_FILE: &str = "alignment.json";

struct Ctx<'a> {
    cfg: &'a PipelineConfig,
    lang: &'a LanguageConfig,
    dir: PathBuf,
    stages: &'a [Stage],
}

impl Ctx<'_> {
    fn wants(&self, s: Stage) -> bool {
        self.stages.contains(&s)
    }

    fn fail(&self, stage: Stage, e: impl ToString) -> CliError {
        CliError::data(stage.name(), &self.lang.code, e)
    }

    fn write(&self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        write_atomic(&self.dir.join(name), bytes).map_err(|e| CliError::Internal(e.to_string()))
    }

    fn export(&self, artifact: Artifact<'_, f64>, format: ExportFormat, name: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).map_err(|e| CliError::Internal(format!("{}: {e}", parent.display())))?;
        }
        export(&artifact, format, &path).map_err(|e| CliError::Internal(e.to_string()))
    }

    fn write_json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("artifact serializes");
        text.push('\n');
        self.write(name, text.as_bytes())
    }
}

fn ingest_raw(ctx: &Ctx) -> Result<(ViewMatrix, EdgeList), CliError> {
    let (cfg, lang) = (ctx.cfg, ctx.lang);
    let fail = |e: wikitrends::ingest::IngestError| ctx.fail(Stage::Ingest, e);
    let titles = read_edge_titles(&lang.edges).map_err(fail)?;
    let index = wikitrends::PageIndex::from_titles(lang.code.clone(), titles);
    let load = load_edges(&lang.edges, &index).map_err(fail)?;
    if load.skipped > 0 {
        log::warn!("{}: {} edge lines skipped", lang.code, load.skipped);
    }
    let (start, end) = cfg.hours()?;
    let n_hours = (end - start) as usize;
    let files: Vec<(PathBuf, i64)> = cfg
        .pageview_files(lang)?
        .into_iter()
        .filter_map(|p| {
            let hour = p.file_name().and_then(|n| n.to_str()).and_then(hour_from_file_name);
            match hour {
                Some(h) if (start..end).contains(&h) => Some((p, h)),
                Some(_) => None,
                None => {
                    log::warn!("{}: no hour in file name", p.display());
                    None
                }
            }
        })
        .collect();
    log::info!("{}: reading {} hourly files", lang.code, files.len());
    let empty = ViewMatrix::zeros(index, start, n_hours).map_err(fail)?;
    let matrix = files
        .par_iter()
        .try_fold(
            || empty.clone(),
            |mut m, (path, hour)| {
                read_pageview_file(path, *hour, &lang.code, |rec| {
                    m.add_record(&rec);
                })?;
                Ok(m)
            },
        )
        .try_reduce(
            || empty.clone(),
            |mut a, b| {
                a.merge(&b);
                Ok(a)
            },
        )
        .map_err(fail)?;
    let (matrix, edges) = prefilter(&matrix, &load.edges, cfg.filters.min_total_views, cfg.filters.min_degree);
    log::info!("{}: {} pages, {} links after filtering", lang.code, matrix.n_pages(), edges.len());
    Ok((matrix, edges))
}

fn save_ingest(ctx: &Ctx, matrix: &ViewMatrix, edges: &EdgeList) -> Result<(), CliError> {
    let mut index = Vec::new();
    write_index(matrix.index(), &mut index).map_err(|e| CliError::Internal(e.to_string()))?;
    ctx.write(INDEX_FILE, &index)?;
    let mut bin = Vec::new();
    write_matrix(matrix, &mut bin).map_err(|e| CliError::Internal(e.to_string()))?;
    ctx.write(MATRIX_FILE, &bin)?;
    let idx = matrix.index();
    let mut tsv = String::new();
    for (s, t) in edges.iter() {
        tsv.push_str(idx.title(s).unwrap_or_default());
        tsv.push('\t');
        tsv.push_str(idx.title(t).unwrap_or_default());
        tsv.push('\n');
    }
    ctx.write(EDGES_FILE, tsv.as_bytes())
}

fn load_index(dir: &Path, code: &str, stage: Stage) -> Result<wikitrends::PageIndex, CliError> {
    read_index(&dir.join(INDEX_FILE), code)
        .map_err(|e| CliError::data(stage.name(), code, format!("{e} (run ingest first)")))
}

fn load_ingest(ctx: &Ctx, stage: Stage) -> Result<(ViewMatrix, EdgeList), CliError> {
    let index = load_index(&ctx.dir, &ctx.lang.code, stage)?;
    let path = ctx.dir.join(MATRIX_FILE);
    let mut f = File::open(&path).map_err(|e| ctx.fail(stage, format!("{}: {e} (run ingest first)", path.display())))?;
    let matrix = read_matrix(&mut f, index).map_err(|e| ctx.fail(stage, e))?;
    let edges = load_edges(&ctx.dir.join(EDGES_FILE), matrix.index()).map_err(|e| ctx.fail(stage, e))?;
    Ok((matrix, edges.edges))
}

#[derive(Serialize)]
struct PageLabelRecord {
    label: Label,
    source: &'static str,
}

#[derive(Serialize)]
struct LdaTopic {
    topic: usize,
    words: Vec<String>,
}

#[derive(Serialize)]
struct LdaCluster {
    cluster_id: usize,
    theta: Vec<f64>,
}

#[derive(Serialize)]
struct LdaDocument {
    topics: Vec<LdaTopic>,
    clusters: Vec<LdaCluster>,
}

struct Clustered {
    graph: TrendGraph,
    partition: Partition,
    pagerank: BTreeMap<usize, PageRank<f64>>,
}

fn detect(ctx: &Ctx, matrix: &ViewMatrix) -> Result<BTreeMap<PageId, BurstProfile>, CliError> {
    let bursts = trending_pages(matrix, &ctx.cfg.burst).map_err(|e| ctx.fail(Stage::Detect, e))?;
    log::info!("{}: {} trending pages", ctx.lang.code, bursts.len());
    if ctx.wants(Stage::Detect) {
        let profiles: Vec<BurstProfile> = bursts.values().cloned().collect();
        ctx.export(Artifact::Bursts(&profiles), ExportFormat::Jsonl, "bursts.jsonl")?;
    }
    Ok(bursts)
}

fn cluster(
    ctx: &Ctx,
    matrix: &ViewMatrix,
    edges: &EdgeList,
    bursts: &BTreeMap<PageId, BurstProfile>,
) -> Result<Clustered, CliError> {
    let gcfg = &ctx.cfg.graph;
    let graph = build_trend_graph(matrix, edges, bursts, gcfg);
    let outcome = louvain_traced(&graph, gcfg).map_err(|e| ctx.fail(Stage::Cluster, e))?;
    let partition = outcome.partition;
    log::info!(
        "{}: {} nodes, {} edges, {} clusters ({} kept), modularity by pass {:?}",
        ctx.lang.code,
        graph.len(),
        graph.edge_count(),
        partition.n_clusters(),
        partition.active_clusters().count(),
        outcome.pass_modularity
    );
    let pagerank = pagerank_clusters(&graph, &partition, gcfg);
    if ctx.wants(Stage::Cluster) {
        let graph_artifact = || Artifact::Graph {
            graph: &graph,
            index: matrix.index(),
            partition: &partition,
            pagerank: &pagerank,
        };
        ctx.export(graph_artifact(), ExportFormat::Gexf, "graph.gexf")?;
        ctx.export(graph_artifact(), ExportFormat::Json, "graph.json")?;
        ctx.write_json("partition.json", &partition)?;
    }
    Ok(Clustered {
        graph,
        partition,
        pagerank,
    })
}

fn keywords(ctx: &Ctx, docs: &[ClusterDoc]) -> Result<KeywordScores, CliError> {
    let kw = if docs.is_empty() {
        log::warn!("{}: no clusters to describe", ctx.lang.code);
        KeywordScores::new()
    } else {
        tfidf_keywords(docs, &ctx.cfg.keywords).map_err(|e| ctx.fail(Stage::Keywords, e))?
    };
    if ctx.wants(Stage::Keywords) {
        ctx.export(Artifact::Keywords(&kw), ExportFormat::Json, "keywords.json")?;
        if ctx.cfg.lda.enabled && !docs.is_empty() {
            let model = lda_fit(docs, &ctx.cfg.lda_config(&ctx.lang.code)).map_err(|e| ctx.fail(Stage::Keywords, e))?;
            let topics = (0..model.topics)
                .map(|k| {
                    Ok(LdaTopic {
                        topic: k,
                        words: lda_top_words(&model, k, ctx.cfg.lda.top_words).map_err(|e| ctx.fail(Stage::Keywords, e))?,
                    })
                })
                .collect::<Result<_, CliError>>()?;
            let clusters = model
                .doc_clusters
                .iter()
                .zip(&model.theta)
                .map(|(&c, row)| LdaCluster {
                    cluster_id: c,
                    theta: row.iter().map(|&v| round6(v)).collect(),
                })
                .collect();
            ctx.write_json("lda.json", &LdaDocument { topics, clusters })?;
        }
    }
    Ok(kw)
}

fn label(
    ctx: &Ctx,
    matrix: &ViewMatrix,
    summaries: &SummaryStore,
    tokenizer: &dyn Tokenizer,
    clustered: &Clustered,
    docs: &[ClusterDoc],
) -> Result<BTreeMap<usize, Label>, CliError> {
    let fail = |e: wikitrends::label::LabelError| ctx.fail(Stage::Label, e);
    let rules = LabelRules::load(&ctx.lang.rules).map_err(fail)?;
    let index = matrix.index();
    let mut page_labels: BTreeMap<PageId, (Label, &'static str)> = BTreeMap::new();
    let mut examples = Vec::new();
    let mut unlabeled = Vec::new();
    for (p, title) in index.iter() {
        let summary = summaries.get(p).unwrap_or("");
        let tokens = tokenizer.tokenize(summary);
        match rule_label(title, summary, &rules) {
            Some(l) => {
                page_labels.insert(p, (l, "rule"));
                if !tokens.is_empty() {
                    examples.push((tokens, l));
                }
            }
            None if !tokens.is_empty() && clustered.graph.contains(p) => unlabeled.push((p, tokens)),
            None => {}
        }
    }
    if examples.is_empty() {
        return Err(ctx.fail(Stage::Label, "no summarized page matched a labeling rule"));
    }
    let seed = derive_seed(ctx.cfg.seed, "split", &ctx.lang.code);
    let (train, test) = stratified_split(&examples, ctx.cfg.classifier.train_fraction, seed);
    let model = train_classifier(&train, ctx.cfg.classifier.smoothing).map_err(fail)?;
    log::info!(
        "{}: {} rule-labeled pages, {} train / {} test",
        ctx.lang.code,
        page_labels.len(),
        train.len(),
        test.len()
    );
    let metrics = if test.is_empty() {
        log::warn!("{}: no held-out examples; skipping evaluation", ctx.lang.code);
        None
    } else {
        Some(evaluate::<f64>(&model, &test).map_err(fail)?)
    };
    for (p, tokens) in &unlabeled {
        page_labels.insert(*p, (model.predict(tokens).label, "classifier"));
    }
    let plain: BTreeMap<PageId, Label> = page_labels.iter().map(|(&p, &(l, _))| (p, l)).collect();
    let cluster_labels = label_clusters(&clustered.partition, &plain, docs, &model).map_err(fail)?;
    if ctx.wants(Stage::Label) {
        let by_title: BTreeMap<&str, PageLabelRecord> = page_labels
            .iter()
            .map(|(&p, &(label, source))| (index.title(p).unwrap_or_default(), PageLabelRecord { label, source }))
            .collect();
        ctx.write_json("page_labels.json", &by_title)?;
        ctx.write_json("cluster_labels.json", &cluster_labels)?;
        if let Some(m) = &metrics {
            ctx.export(Artifact::Metrics(m), ExportFormat::Csv, "metrics.csv")?;
            ctx.export(Artifact::Metrics(m), ExportFormat::Json, "metrics.json")?;
            ctx.export(Artifact::Confusion(m), ExportFormat::Csv, "confusion.csv")?;
        }
    }
    Ok(cluster_labels)
}

fn generated_at(cfg: &PipelineConfig) -> String {
    cfg.time_range.end.clone()
}

fn trends(
    ctx: &Ctx,
    matrix: &ViewMatrix,
    clustered: &Clustered,
    kw: &KeywordScores,
    labels: &BTreeMap<usize, Label>,
) -> Result<Vec<Trend>, CliError> {
    let trends = assemble_trends(&clustered.partition, matrix, &clustered.pagerank, kw, labels)
        .map_err(|e| ctx.fail(Stage::Trends, e))?;
    log::info!("{}: {} trends", ctx.lang.code, trends.len());
    if ctx.wants(Stage::Trends) {
        let stamp = generated_at(ctx.cfg);
        let doc = Artifact::Trends {
            index: matrix.index(),
            generated_at: &stamp,
            trends: &trends,
        };
        ctx.export(doc, ExportFormat::Json, TRENDS_FILE)?;
        for t in &trends {
            ctx.export(Artifact::TrendSeries(t), ExportFormat::Csv, &format!("series/{}.csv", t.id))?;
        }
        match topic_distribution(&trends) {
            Ok(d) => ctx.export(Artifact::Distribution(&d), ExportFormat::Json, "distribution.json")?,
            Err(e) => log::warn!("{}: {e}", ctx.lang.code),
        }
    }
    Ok(trends)
}

fn run_language(cfg: &PipelineConfig, lang: &LanguageConfig, stages: &[Stage]) -> Result<(), CliError> {
    let ctx = Ctx {
        cfg,
        lang,
        dir: cfg.language_dir(&lang.code),
        stages,
    };
    std::fs::create_dir_all(&ctx.dir).map_err(|e| CliError::Internal(format!("{}: {e}", ctx.dir.display())))?;
    let last = stages.iter().copied().filter(|&s| s != Stage::Compare).max();
    let Some(last) = last else { return Ok(()) };
    let first = stages.iter().copied().min().unwrap();

    let (matrix, edges) = if ctx.wants(Stage::Ingest) {
        let (m, e) = ingest_raw(&ctx)?;
        save_ingest(&ctx, &m, &e)?;
        (m, e)
    } else {
        load_ingest(&ctx, first)?
    };
    if last == Stage::Ingest {
        return Ok(());
    }
    let bursts = detect(&ctx, &matrix)?;
    if last == Stage::Detect {
        return Ok(());
    }
    let clustered = cluster(&ctx, &matrix, &edges, &bursts)?;
    if last == Stage::Cluster {
        return Ok(());
    }
    let (summaries, skipped) = load_summaries(&lang.summaries, matrix.index()).map_err(|e| ctx.fail(Stage::Keywords, e))?;
    if skipped > 0 {
        log::debug!("{}: {skipped} summaries for pages outside the index", lang.code);
    }
    let tokenizer = LangConfig::from_stopword_file(lang.code.clone(), &lang.stopwords).map_err(|e| ctx.fail(Stage::Keywords, e))?;
    let docs = build_cluster_docs(&clustered.partition, &summaries, &clustered.graph, &tokenizer);
    let kw = keywords(&ctx, &docs)?;
    if last == Stage::Keywords {
        return Ok(());
    }
    let labels = label(&ctx, &matrix, &summaries, &tokenizer, &clustered, &docs)?;
    if last == Stage::Label {
        return Ok(());
    }
    trends(&ctx, &matrix, &clustered, &kw, &labels)?;
    Ok(())
}

/// Aligns the trends of all languages, writes `alignment.json`, then the
/// manifest.
fn compare(cfg: &PipelineConfig) -> Result<Manifest, CliError> {
    let mut per_language = Vec::new();
    for lang in &cfg.languages {
        let dir = cfg.language_dir(&lang.code);
        let index = load_index(&dir, &lang.code, Stage::Compare)?;
        let fail = |e: wikitrends::report::ReportError| CliError::data("compare", &lang.code, e);
        let doc = read_trends_json(&dir.join(TRENDS_FILE)).map_err(fail)?;
        per_language.push(doc.to_trends::<f64>(&index).map_err(fail)?);
    }
    let alignment = align_trends(&per_language, cfg.delta_hours);
    log::info!(
        "{} aligned groups, {} shared across languages",
        alignment.groups.len(),
        alignment.shared().count()
    );
    export(&Artifact::<f64>::Alignment(&alignment), ExportFormat::Json, &cfg.output_dir.join(ALIGNMENT_FILE))
        .map_err(|e| CliError::Internal(e.to_string()))?;
    write_manifest(cfg)
}

fn for_each_language(cfg: &PipelineConfig, stages: &[Stage]) -> Result<(), CliError> {
    let results: Vec<Result<(), CliError>> = cfg.languages.par_iter().map(|l| run_language(cfg, l, stages)).collect();
    results.into_iter().collect()
}

/// Runs one stage; `Compare` also writes the manifest and returns it.
pub fn run_stage(cfg: &PipelineConfig, stage: Stage) -> Result<Option<Manifest>, CliError> {
    if stage == Stage::Compare {
        return compare(cfg).map(Some);
    }
    for_each_language(cfg, &[stage])?;
    Ok(None)
}

/// Every stage for every language (languages in parallel), then the
/// comparison and the manifest.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<Manifest, CliError> {
    for_each_language(cfg, &Stage::ALL)?;
    compare(cfg)
}
