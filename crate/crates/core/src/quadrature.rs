//! One-dimensional rules on uniformly spaced samples.

/// Composite trapezoid rule for samples `f_0..f_n` spaced by `h`.
pub fn trapezoid(samples: &[f64], h: f64) -> f64 {
    match samples {
        [] | [_] => 0.0,
        [first, inner @ .., last] => h * (0.5 * (first + last) + inner.iter().sum::<f64>()),
    }
}

/// Composite Simpson rule for samples spaced by `h`.
///
/// With an odd number of intervals the last three are covered by the 3/8
/// rule, so the result stays fourth order for any `n >= 3`.
pub fn simpson(samples: &[f64], h: f64) -> f64 {
    let intervals = samples.len().saturating_sub(1);
    match intervals {
        0 => 0.0,
        1 => trapezoid(samples, h),
        n if n % 2 == 0 => simpson_even(samples, h),
        3 => simpson_38(samples, h),
        n => {
            let split = n - 3;
            simpson_even(&samples[..=split], h) + simpson_38(&samples[split..], h)
        }
    }
}

fn simpson_even(samples: &[f64], h: f64) -> f64 {
    let n = samples.len() - 1;
    debug_assert!(n.is_multiple_of(2));
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, v) in samples.iter().enumerate().take(n).skip(1) {
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    h / 3.0 * (samples[0] + samples[n] + 4.0 * odd + 2.0 * even)
}

fn simpson_38(s: &[f64], h: f64) -> f64 {
    debug_assert_eq!(s.len(), 4);
    3.0 * h / 8.0 * (s[0] + 3.0 * s[1] + 3.0 * s[2] + s[3])
}

/// Gauss–Legendre nodes and weights mapped to `[0, 1]`.
#[derive(Debug, Clone)]
pub struct UnitGauss {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl UnitGauss {
    /// `points` must be at least 2.
    pub fn new(points: usize) -> Self {
        let rule = gauss_quad::GaussLegendre::new(points.max(2))
            .expect("Gauss-Legendre rule with >= 2 points");
        let (nodes, weights) = rule
            .into_node_weight_pairs()
            .into_iter()
            .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .unzip();
        Self { nodes, weights }
    }
}
