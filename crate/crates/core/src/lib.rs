//! Trending-topic detection over Wikipedia pageview time series.
//!
//! The pipeline finds pages whose hourly views burst, links co-bursting
//! pages through the hyperlink graph, clusters them with Louvain, describes
//! each cluster with degree-weighted TF-IDF (or LDA), labels it, and
//! compares the resulting trends across language editions.
//!
//! Numeric stages are generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix `f64`.

pub mod burst;
pub mod graph;
pub mod ingest;
pub mod label;
pub mod report;
pub mod scalar;
pub mod text;

pub use scalar::{round6, Real};

pub use ingest::{EdgeList, PageId, PageIndex, SummaryStore, ViewMatrix, ViewRecord};
pub use label::{Label, LabelRules};

pub type BurstConfig = burst::BurstConfig<f64>;
pub type BurstProfile = burst::BurstProfile<f64>;
pub type GraphConfig = graph::GraphConfig<f64>;
pub type TrendGraph = graph::TrendGraph<f64>;
pub type KeywordScores = text::KeywordScores<f64>;
pub type Metrics = label::Metrics<f64>;
pub type TopicDistribution = report::TopicDistribution<f64>;
pub type Trend = report::Trend<f64>;

pub type BurstConfig32 = burst::BurstConfig<f32>;
pub type BurstProfile32 = burst::BurstProfile<f32>;
pub type GraphConfig32 = graph::GraphConfig<f32>;
pub type TrendGraph32 = graph::TrendGraph<f32>;
