//! Slow, direct reference implementations used only by tests. Nothing here
//! shares code with the `wikitrends` crate.

pub mod ari;
pub mod burst;
pub mod gexf;
pub mod modularity;
pub mod pagerank;
pub mod purity;
