/// PageRank by dense Google-matrix power iteration: dangling columns become
/// uniform, then `G = d·S + (1-d)/n`. Runs `iterations` steps from uniform.
pub fn dense_pagerank(n: usize, arcs: &[(usize, usize)], damping: f64, iterations: usize) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let mut s = vec![vec![0.0; n]; n];
    let mut out = vec![0usize; n];
    for &(a, _) in arcs {
        out[a] += 1;
    }
    for &(a, b) in arcs {
        s[b][a] += 1.0 / out[a] as f64;
    }
    for (j, &o) in out.iter().enumerate() {
        if o == 0 {
            for row in s.iter_mut() {
                row[j] = 1.0 / n as f64;
            }
        }
    }
    let g: Vec<Vec<f64>> = s
        .iter()
        .map(|row| row.iter().map(|v| damping * v + (1.0 - damping) / n as f64).collect())
        .collect();
    let mut x = vec![1.0 / n as f64; n];
    for _ in 0..iterations {
        x = g.iter().map(|row| row.iter().zip(&x).map(|(a, b)| a * b).sum()).collect();
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_is_uniform() {
        let x = dense_pagerank(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], 0.85, 50);
        assert!(x.iter().all(|v| (v - 0.25).abs() < 1e-15));
    }
}
