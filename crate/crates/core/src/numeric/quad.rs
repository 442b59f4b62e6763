/// Running integral `I_i = int_{x_0}^{x_i} f` on a uniform grid.
///
/// Even nodes use composite Simpson from the left end. Odd nodes add a
/// four-point cubic rule over `[x_{i-1}, x_i]` to the Simpson value at
/// `i - 1`: centred `h/24 (-1, 13, 13, -1)` inside, one-sided
/// `h/24 (9, 19, -5, 1)` at either end. All rules are exact on cubics.
pub fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    if n < 3 {
        if n == 2 {
            out[1] = 0.5 * h * (f[0] + f[1]);
        }
        return out;
    }
    for i in (2..n).step_by(2) {
        out[i] = out[i - 2] + h / 3.0 * (f[i - 2] + 4.0 * f[i - 1] + f[i]);
    }
    for i in (1..n).step_by(2) {
        let step = if i >= 2 && i + 1 < n {
            h / 24.0 * (-f[i - 2] + 13.0 * f[i - 1] + 13.0 * f[i] - f[i + 1])
        } else if i + 2 < n {
            h / 24.0 * (9.0 * f[i - 1] + 19.0 * f[i] - 5.0 * f[i + 1] + f[i + 2])
        } else if i >= 3 {
            h / 24.0 * (f[i - 3] - 5.0 * f[i - 2] + 19.0 * f[i - 1] + 9.0 * f[i])
        } else {
            h / 12.0 * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1])
        };
        out[i] = out[i - 1] + step;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_cubics_exactly() {
        let n = 10;
        let h = 0.25;
        let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).powi(3)).collect();
        let s = cumulative_simpson(&f, h);
        for (i, v) in s.iter().enumerate() {
            let x = i as f64 * h;
            assert!((v - x.powi(4) / 4.0).abs() < 1e-12, "node {i}");
        }
    }

    #[test]
    fn fourth_order_on_cosine() {
        let err = |n: usize| {
            let h = 1.0 / (n - 1) as f64;
            let f: Vec<f64> = (0..n).map(|i| (i as f64 * h).cos()).collect();
            cumulative_simpson(&f, h)
                .iter()
                .enumerate()
                .map(|(i, v)| (v - (i as f64 * h).sin()).abs())
                .fold(0.0, f64::max)
        };
        let ratio = err(21) / err(41);
        assert!(ratio > 12.0, "ratio {ratio}");
    }
}
