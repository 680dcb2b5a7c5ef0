//! Gauss-Legendre rules and the uniform trapezoid grid.
//!
//! The axial discretization of the coupling kernel and every radial overlap
//! integral in this crate run on Gauss-Legendre nodes; the estimator's time
//! grid is the uniform trapezoid rule (a deliberate choice, see the
//! estimator module). Nodes are computed by Newton iteration on the
//! three-term Legendre recurrence — no lookup tables, any order.

/// Gauss-Legendre nodes and weights on [−1, 1], nodes ascending.
///
/// Newton iteration on P_n with the Chebyshev-like initial guess
/// x₀ = cos(π(k+¾)/(n+½)) converges to machine precision in ≤ 8 steps for
/// every root; weights are 2/((1−x²)·P_n'(x)²).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "quadrature order must be at least 1");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for k in 0..half {
        let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_deriv(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                let (_, d2) = legendre_with_deriv(n, x);
                dp = d2;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // k counts from the +1 end; store ascending.
        nodes[n - 1 - k] = x;
        weights[n - 1 - k] = w;
        nodes[k] = -x;
        weights[k] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
        let (_, d) = legendre_with_deriv(n, 0.0);
        weights[n / 2] = 2.0 / (d * d);
    }
    (nodes, weights)
}

/// (P_n(x), P_n'(x)) via the three-term recurrence.
fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p_next = ((2.0 * jf - 1.0) * x * p - (jf - 1.0) * p_prev) / jf;
        p_prev = p;
        p = p_next;
    }
    // P_n'(x) = n (x P_n − P_{n−1}) / (x² − 1)
    let d = (n as f64) * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

/// Affine map of a [−1, 1] rule onto [a, b].
pub fn map_interval(nodes: &[f64], weights: &[f64], a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mapped_nodes = nodes.iter().map(|&x| c + h * x).collect();
    let mapped_weights = weights.iter().map(|&w| h * w).collect();
    (mapped_nodes, mapped_weights)
}

/// Gauss-Legendre rule directly on [a, b].
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_legendre(n);
    map_interval(&x, &w, a, b)
}

/// Uniform grid on [0, t_max] with trapezoid weights (half weight at both
/// endpoints). `n` is the number of nodes, n ≥ 2.
pub fn uniform_trapezoid(n: usize, t_max: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2, "trapezoid rule needs at least two nodes");
    let h = t_max / (n - 1) as f64;
    let nodes: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();
    let mut weights = vec![h; n];
    weights[0] = 0.5 * h;
    weights[n - 1] = 0.5 * h;
    (nodes, weights)
}
