use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::export::node_cluster_and_rank;
use super::ReportError;
use crate::graph::{PageRank, Partition, TrendGraph};
use crate::ingest::PageIndex;
use crate::scalar::Real;

pub const GEXF_NAMESPACE: &str = "http://www.gexf.net/1.2draft";

/// Escapes XML metacharacters and drops characters XML 1.0 forbids.
fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            '\t' | '\n' | '\r' => out.push(c),
            c if (c as u32) < 0x20 || c == '\u{FFFE}' || c == '\u{FFFF}' => {}
            c => out.push(c),
        }
    }
    out
}

/// Undirected GEXF 1.2 with title, degree, cluster and PageRank node
/// attributes and the correlation as native edge weight. Nodes outside the
/// partition get cluster -1.
pub(crate) fn write_gexf<F: Real>(
    graph: &TrendGraph<F>,
    index: &PageIndex,
    partition: &Partition,
    pagerank: &BTreeMap<usize, PageRank<F>>,
) -> Result<String, ReportError> {
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    writeln!(s, "<gexf xmlns=\"{GEXF_NAMESPACE}\" version=\"1.2\">").unwrap();
    s.push_str("  <meta>\n    <creator>wikitrends</creator>\n");
    writeln!(s, "    <description>trend graph ({})</description>", escape(index.language())).unwrap();
    s.push_str("  </meta>\n");
    s.push_str("  <graph mode=\"static\" defaultedgetype=\"undirected\">\n");
    s.push_str("    <attributes class=\"node\">\n");
    for (i, (title, ty)) in [("title", "string"), ("degree", "integer"), ("cluster", "integer"), ("pagerank", "double")]
        .iter()
        .enumerate()
    {
        writeln!(s, "      <attribute id=\"{i}\" title=\"{title}\" type=\"{ty}\"/>").unwrap();
    }
    s.push_str("    </attributes>\n    <nodes>\n");
    for &p in graph.nodes() {
        let title = index
            .title(p)
            .ok_or_else(|| ReportError::InconsistentInputs(format!("page {p} has no title")))?;
        let title = escape(title);
        let (cluster, rank) = node_cluster_and_rank(p, partition, pagerank);
        let cluster = cluster.map_or(-1, |c| c as i64);
        writeln!(s, "      <node id=\"{p}\" label=\"{title}\">").unwrap();
        s.push_str("        <attvalues>\n");
        writeln!(s, "          <attvalue for=\"0\" value=\"{title}\"/>").unwrap();
        writeln!(s, "          <attvalue for=\"1\" value=\"{}\"/>", graph.degree(p).unwrap_or(0)).unwrap();
        writeln!(s, "          <attvalue for=\"2\" value=\"{cluster}\"/>").unwrap();
        writeln!(s, "          <attvalue for=\"3\" value=\"{:.6}\"/>", rank.as_f64()).unwrap();
        s.push_str("        </attvalues>\n      </node>\n");
    }
    s.push_str("    </nodes>\n    <edges>\n");
    for (i, (a, b, w)) in graph.edges().enumerate() {
        writeln!(s, "      <edge id=\"{i}\" source=\"{a}\" target=\"{b}\" weight=\"{:.6}\"/>", w.as_f64()).unwrap();
    }
    s.push_str("    </edges>\n  </graph>\n</gexf>\n");
    Ok(s)
}
