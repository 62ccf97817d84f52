/// Recomputes every window from scratch with a two-pass mean/variance and
/// returns `(hour, z)` for each burst hour.
pub fn brute_force_bursts(series: &[u32], window: usize, z_threshold: f64, min_views: u64, eps: f64) -> Vec<(usize, f64)> {
    let mut out = Vec::new();
    for t in window..series.len() {
        let win = &series[t - window..t];
        let mean = win.iter().map(|&x| x as f64).sum::<f64>() / window as f64;
        let var = win.iter().map(|&x| (x as f64 - mean).powi(2)).sum::<f64>() / window as f64;
        let z = (series[t] as f64 - mean) / (var.sqrt() + eps);
        if series[t] as u64 >= min_views && z >= z_threshold {
            out.push((t, z));
        }
    }
    out
}
