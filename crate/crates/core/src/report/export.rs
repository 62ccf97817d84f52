use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::io::Write as _;
use std::path::Path;

use chrono::DateTime;
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use super::{gexf, ReportError, TopicDistribution, Trend, TrendAlignment};
use crate::burst::BurstProfile;
use crate::graph::{PageRank, Partition, TrendGraph};
use crate::ingest::{PageId, PageIndex};
use crate::label::{Label, Metrics};
use crate::scalar::Real;
use crate::text::{Keyword, KeywordScores};

pub const TRENDS_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Jsonl,
    Csv,
    Gexf,
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExportFormat::Json => "json",
            ExportFormat::Jsonl => "jsonl",
            ExportFormat::Csv => "csv",
            ExportFormat::Gexf => "gexf",
        })
    }
}

/// Anything that can be written out.
pub enum Artifact<'a, F> {
    /// All trends of one language; members are written as titles.
    Trends {
        index: &'a PageIndex,
        generated_at: &'a str,
        trends: &'a [Trend<F>],
    },
    /// Hourly series of one trend.
    TrendSeries(&'a Trend<F>),
    Graph {
        graph: &'a TrendGraph<F>,
        index: &'a PageIndex,
        partition: &'a Partition,
        pagerank: &'a BTreeMap<usize, PageRank<F>>,
    },
    Keywords(&'a KeywordScores<F>),
    Distribution(&'a TopicDistribution<F>),
    /// Per-label scores (CSV) or everything including the confusion matrix (JSON).
    Metrics(&'a Metrics<F>),
    Confusion(&'a Metrics<F>),
    Alignment(&'a TrendAlignment),
    Bursts(&'a [BurstProfile<F>]),
}

impl<F> Artifact<'_, F> {
    fn name(&self) -> &'static str {
        match self {
            Artifact::Trends { .. } => "trends",
            Artifact::TrendSeries(_) => "trend series",
            Artifact::Graph { .. } => "graph",
            Artifact::Keywords(_) => "keywords",
            Artifact::Distribution(_) => "topic distribution",
            Artifact::Metrics(_) => "metrics",
            Artifact::Confusion(_) => "confusion matrix",
            Artifact::Alignment(_) => "alignment",
            Artifact::Bursts(_) => "bursts",
        }
    }
}

/// A float printed with exactly six decimals.
fn fixed<F: Real>(v: F) -> Box<RawValue> {
    let v = v.as_f64();
    let text = if v.is_finite() { format!("{v:.6}") } else { "null".to_owned() };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

#[derive(Debug, Serialize, Deserialize)]
pub struct KeywordRecord {
    pub token: String,
    pub score: Box<RawValue>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct TrendRecord {
    pub id: String,
    pub label: Label,
    pub cluster: usize,
    pub central_page_title: String,
    pub members: Vec<String>,
    pub keywords: Vec<KeywordRecord>,
    pub peak_hour: usize,
    pub start_hour: i64,
    pub series: Vec<u64>,
}

/// On-disk trends file.
#[derive(Debug, Serialize, Deserialize)]
pub struct TrendsDocument {
    pub schema_version: u32,
    pub language: String,
    pub generated_at: String,
    pub trends: Vec<TrendRecord>,
}

fn title_of(index: &PageIndex, p: PageId) -> Result<String, ReportError> {
    index
        .title(p)
        .map(str::to_owned)
        .ok_or_else(|| ReportError::InconsistentInputs(format!("page {p} has no title")))
}

fn id_of(index: &PageIndex, title: &str) -> Result<PageId, ReportError> {
    index
        .id(title)
        .ok_or_else(|| ReportError::InconsistentInputs(format!("unknown page title {title:?}")))
}

impl TrendsDocument {
    pub fn new<F: Real>(index: &PageIndex, generated_at: &str, trends: &[Trend<F>]) -> Result<Self, ReportError> {
        let trends = trends
            .iter()
            .map(|t| {
                Ok(TrendRecord {
                    id: t.id.clone(),
                    label: t.label,
                    cluster: t.cluster,
                    central_page_title: title_of(index, t.central_page)?,
                    members: t.members.iter().map(|&p| title_of(index, p)).collect::<Result<_, _>>()?,
                    keywords: t
                        .keywords
                        .iter()
                        .map(|k| KeywordRecord {
                            token: k.token.clone(),
                            score: fixed(k.score),
                        })
                        .collect(),
                    peak_hour: t.peak_hour,
                    start_hour: t.start_hour,
                    series: t.series.clone(),
                })
            })
            .collect::<Result<_, ReportError>>()?;
        Ok(TrendsDocument {
            schema_version: TRENDS_SCHEMA_VERSION,
            language: index.language().to_owned(),
            generated_at: generated_at.to_owned(),
            trends,
        })
    }

    /// Resolves titles back to ids through `index`.
    pub fn to_trends<F: Real>(&self, index: &PageIndex) -> Result<Vec<Trend<F>>, ReportError> {
        self.trends
            .iter()
            .map(|r| {
                let keywords = r
                    .keywords
                    .iter()
                    .map(|k| {
                        let score: f64 = serde_json::from_str(k.score.get())?;
                        Ok(Keyword {
                            token: k.token.clone(),
                            score: F::of(score),
                        })
                    })
                    .collect::<Result<_, ReportError>>()?;
                Ok(Trend {
                    id: r.id.clone(),
                    language: self.language.clone(),
                    cluster: r.cluster,
                    members: r.members.iter().map(|t| id_of(index, t)).collect::<Result<_, _>>()?,
                    central_page: id_of(index, &r.central_page_title)?,
                    label: r.label,
                    keywords,
                    series: r.series.clone(),
                    peak_hour: r.peak_hour,
                    start_hour: r.start_hour,
                })
            })
            .collect()
    }
}

pub fn read_trends_json(path: &Path) -> Result<TrendsDocument, ReportError> {
    let text = std::fs::read_to_string(path).map_err(|e| ReportError::io(path, e))?;
    let doc: TrendsDocument = serde_json::from_str(&text)?;
    if doc.schema_version != TRENDS_SCHEMA_VERSION {
        return Err(ReportError::InconsistentInputs(format!(
            "unsupported trends schema version {}",
            doc.schema_version
        )));
    }
    Ok(doc)
}

#[derive(Serialize)]
struct NodeRecord<'a> {
    id: PageId,
    title: &'a str,
    degree: usize,
    cluster: Option<usize>,
    pagerank: Box<RawValue>,
}

#[derive(Serialize)]
struct EdgeRecord {
    source: PageId,
    target: PageId,
    weight: Box<RawValue>,
}

#[derive(Serialize)]
struct GraphDocument<'a> {
    nodes: Vec<NodeRecord<'a>>,
    edges: Vec<EdgeRecord>,
}

#[derive(Serialize)]
struct ClusterKeywords {
    cluster_id: usize,
    keywords: Vec<KeywordRecord>,
}

#[derive(Serialize)]
struct DistributionDocument<'a> {
    counts: &'a BTreeMap<Label, usize>,
    shares: BTreeMap<Label, Box<RawValue>>,
    page_counts: &'a BTreeMap<Label, usize>,
}

#[derive(Serialize)]
struct StatsRecord {
    precision: Box<RawValue>,
    recall: Box<RawValue>,
    f1: Box<RawValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    support: Option<u64>,
}

#[derive(Serialize)]
struct MetricsDocument<'a> {
    labels: Vec<Label>,
    confusion: &'a [Vec<u64>],
    per_class: BTreeMap<Label, StatsRecord>,
    accuracy: Box<RawValue>,
    macro_avg: StatsRecord,
    weighted_avg: StatsRecord,
    total_support: u64,
}

#[derive(Serialize)]
struct BurstRecord {
    page_id: PageId,
    burst_hours: Vec<usize>,
    z_scores: Vec<Box<RawValue>>,
    peak_hour: Option<usize>,
}

pub(crate) fn node_cluster_and_rank<F: Real>(
    p: PageId,
    partition: &Partition,
    pagerank: &BTreeMap<usize, PageRank<F>>,
) -> (Option<usize>, F) {
    let cluster = partition.cluster_of(p);
    let rank = cluster
        .and_then(|c| pagerank.get(&c))
        .and_then(|pr| pr.scores.get(&p).copied())
        .unwrap_or(F::zero());
    (cluster, rank)
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("export records serialize");
    s.push('\n');
    s
}

fn hour_iso(hour: i64) -> String {
    DateTime::from_timestamp(hour * 3600, 0)
        .map(|t| t.format("%Y-%m-%dT%H:00:00Z").to_string())
        .unwrap_or_default()
}

fn unsupported<F>(a: &Artifact<'_, F>, format: ExportFormat) -> ReportError {
    ReportError::UnsupportedFormat {
        artifact: a.name(),
        format,
    }
}

/// Serializes an artifact. Output depends only on the inputs: maps are
/// key-ordered and floats carry six decimals.
pub fn render<F: Real>(artifact: &Artifact<'_, F>, format: ExportFormat) -> Result<String, ReportError> {
    use ExportFormat::*;
    let out = match (artifact, format) {
        (Artifact::Trends { index, generated_at, trends }, Json) => json(&TrendsDocument::new(index, generated_at, trends)?),
        (Artifact::TrendSeries(t), Csv) => {
            let mut s = String::from("hour,timestamp,views\n");
            for (i, v) in t.series.iter().enumerate() {
                writeln!(s, "{i},{},{v}", hour_iso(t.start_hour + i as i64)).unwrap();
            }
            s
        }
        (Artifact::Graph { graph, index, partition, pagerank }, Json) => {
            let nodes = graph
                .nodes()
                .iter()
                .map(|&p| {
                    let (cluster, rank) = node_cluster_and_rank(p, partition, pagerank);
                    Ok(NodeRecord {
                        id: p,
                        title: index
                            .title(p)
                            .ok_or_else(|| ReportError::InconsistentInputs(format!("page {p} has no title")))?,
                        degree: graph.degree(p).unwrap_or(0),
                        cluster,
                        pagerank: fixed(rank),
                    })
                })
                .collect::<Result<_, ReportError>>()?;
            let edges = graph
                .edges()
                .map(|(source, target, w)| EdgeRecord {
                    source,
                    target,
                    weight: fixed(w),
                })
                .collect();
            json(&GraphDocument { nodes, edges })
        }
        (Artifact::Graph { graph, index, partition, pagerank }, Gexf) => gexf::write_gexf(graph, index, partition, pagerank)?,
        (Artifact::Keywords(kw), Json) => {
            let records: Vec<ClusterKeywords> = kw
                .iter()
                .map(|(&c, ks)| ClusterKeywords {
                    cluster_id: c,
                    keywords: ks
                        .iter()
                        .map(|k| KeywordRecord {
                            token: k.token.clone(),
                            score: fixed(k.score),
                        })
                        .collect(),
                })
                .collect();
            json(&records)
        }
        (Artifact::Distribution(d), Json) => json(&DistributionDocument {
            counts: &d.counts,
            shares: d.shares.iter().map(|(&l, &s)| (l, fixed(s))).collect(),
            page_counts: &d.page_counts,
        }),
        (Artifact::Metrics(m), Csv) => {
            let mut s = String::from("label,precision,recall,f1,support\n");
            for (l, c) in Label::ALL.iter().zip(&m.per_class) {
                let (p, r, f) = (c.precision.as_f64(), c.recall.as_f64(), c.f1.as_f64());
                writeln!(s, "{l},{p:.6},{r:.6},{f:.6},{}", c.support).unwrap();
            }
            writeln!(s, "accuracy,,,{:.6},{}", m.accuracy.as_f64(), m.total_support).unwrap();
            for (name, a) in [("macro avg", &m.macro_avg), ("weighted avg", &m.weighted_avg)] {
                let (p, r, f) = (a.precision.as_f64(), a.recall.as_f64(), a.f1.as_f64());
                writeln!(s, "{name},{p:.6},{r:.6},{f:.6},{}", m.total_support).unwrap();
            }
            s
        }
        (Artifact::Metrics(m), Json) => {
            let stats = |p: F, r: F, f: F, support| StatsRecord {
                precision: fixed(p),
                recall: fixed(r),
                f1: fixed(f),
                support,
            };
            json(&MetricsDocument {
                labels: Label::ALL.to_vec(),
                confusion: &m.confusion,
                per_class: Label::ALL
                    .iter()
                    .zip(&m.per_class)
                    .map(|(&l, c)| (l, stats(c.precision, c.recall, c.f1, Some(c.support))))
                    .collect(),
                accuracy: fixed(m.accuracy),
                macro_avg: stats(m.macro_avg.precision, m.macro_avg.recall, m.macro_avg.f1, None),
                weighted_avg: stats(m.weighted_avg.precision, m.weighted_avg.recall, m.weighted_avg.f1, None),
                total_support: m.total_support,
            })
        }
        (Artifact::Confusion(m), Csv) => {
            let mut s = String::from("true\\predicted");
            for l in Label::ALL {
                write!(s, ",{l}").unwrap();
            }
            s.push('\n');
            for (l, row) in Label::ALL.iter().zip(&m.confusion) {
                s.push_str(l.as_str());
                for v in row {
                    write!(s, ",{v}").unwrap();
                }
                s.push('\n');
            }
            s
        }
        (Artifact::Alignment(a), Json) => json(a),
        (Artifact::Bursts(profiles), Jsonl) => {
            let mut s = String::new();
            for b in profiles.iter() {
                let rec = BurstRecord {
                    page_id: b.page_id,
                    burst_hours: b.burst_hours.clone(),
                    z_scores: b.z_scores.iter().map(|&z| fixed(z)).collect(),
                    peak_hour: b.peak_hour,
                };
                s.push_str(&serde_json::to_string(&rec).expect("burst record serializes"));
                s.push('\n');
            }
            s
        }
        (a, f) => return Err(unsupported(a, f)),
    };
    Ok(out)
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), ReportError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| ReportError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| ReportError::io(path, e))?;
    tmp.persist(path).map_err(|e| ReportError::io(path, e.error))?;
    Ok(())
}

pub fn export<F: Real>(artifact: &Artifact<'_, F>, format: ExportFormat, path: &Path) -> Result<(), ReportError> {
    let text = render(artifact, format)?;
    write_atomic(path, text.as_bytes())
}
