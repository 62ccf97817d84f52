use std::collections::HashMap;

/// Cluster purity: the share of items whose cluster's majority class is
/// their own class.
pub fn purity(clusters: &[usize], classes: &[usize]) -> f64 {
    assert_eq!(clusters.len(), classes.len());
    if clusters.is_empty() {
        return 1.0;
    }
    let mut table: HashMap<usize, HashMap<usize, usize>> = HashMap::new();
    for (&k, &c) in clusters.iter().zip(classes) {
        *table.entry(k).or_default().entry(c).or_default() += 1;
    }
    let hits: usize = table.values().map(|m| m.values().copied().max().unwrap_or(0)).sum();
    hits as f64 / clusters.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values() {
        assert_eq!(purity(&[0, 0, 1, 1], &[5, 5, 6, 6]), 1.0);
        assert_eq!(purity(&[0, 0, 0, 0], &[5, 5, 6, 6]), 0.5);
        assert_eq!(purity(&[0, 0, 1, 1], &[5, 6, 6, 6]), 0.75);
    }
}
