/// Textbook modularity `(1/2m) Σ_ij [A_ij - k_i k_j / 2m] δ(c_i, c_j)` over a
/// dense symmetric weight matrix.
pub fn dense_modularity(adj: &[Vec<f64>], labels: &[usize], resolution: f64) -> f64 {
    let n = adj.len();
    let k: Vec<f64> = adj.iter().map(|row| row.iter().sum()).collect();
    let two_m: f64 = k.iter().sum();
    if two_m == 0.0 {
        return 0.0;
    }
    let mut q = 0.0;
    for i in 0..n {
        for j in 0..n {
            if labels[i] == labels[j] {
                q += adj[i][j] - resolution * k[i] * k[j] / two_m;
            }
        }
    }
    q / two_m
}

/// Every set partition of `n` items as restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for c in 0..=max + 1 {
            if i == 0 && c > 0 {
                break;
            }
            cur.push(c);
            rec(i + 1, n, cur, if i == 0 { 0 } else { max.max(c) }, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    rec(0, n, &mut Vec::with_capacity(n), 0, &mut out);
    out
}

/// Exhaustive maximum modularity and one maximizing labelling.
pub fn max_modularity(adj: &[Vec<f64>]) -> (f64, Vec<usize>) {
    all_partitions(adj.len())
        .into_iter()
        .map(|p| (dense_modularity(adj, &p, 1.0), p))
        .fold((f64::NEG_INFINITY, Vec::new()), |best, cand| if cand.0 > best.0 { cand } else { best })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let sizes: Vec<usize> = (0..=8).map(|n| all_partitions(n).len()).collect();
        assert_eq!(sizes, vec![1, 1, 2, 5, 15, 52, 203, 877, 4140]);
    }

    #[test]
    fn two_disjoint_edges() {
        let adj = vec![
            vec![0.0, 1.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ];
        assert!((dense_modularity(&adj, &[0, 0, 1, 1], 1.0) - 0.5).abs() < 1e-15);
        assert!((max_modularity(&adj).0 - 0.5).abs() < 1e-15);
    }
}
