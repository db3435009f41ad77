use statex::stats::{
    chisq_cdf, chisq_upper, f_cdf, f_upper, normal_cdf, normal_two_tailed, reg_inc_beta, t_cdf,
    t_two_tailed,
};

/// Composite Simpson rule with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn t_tail_by_quadrature_of_the_density() {
    // Student t with 12 df; Gamma(6.5) / Gamma(6) in closed form.
    let nu = 12.0f64;
    let norm = (10395.0 / 64.0) / 120.0 / nu.sqrt();
    let density = |t: f64| norm * (1.0 + t * t / nu).powf(-(nu + 1.0) / 2.0);
    let central = simpson(density, -2.3, 2.3, 20_000);
    let two_tailed = 1.0 - central;

    let x = 12.0 / (12.0 + 2.3 * 2.3);
    let via_beta = reg_inc_beta(6.0, 0.5, x).unwrap();
    assert!((via_beta - two_tailed).abs() < 1e-12, "{via_beta} vs {two_tailed}");
    assert!((t_two_tailed(2.3, 12.0) - two_tailed).abs() < 1e-12);
}

#[test]
fn large_df_t_approaches_normal() {
    for i in -40..=40 {
        let z = i as f64 * 0.1;
        let diff = (t_cdf(z, 1e6) - normal_cdf(z)).abs();
        assert!(diff < 1e-6, "z={z}: {diff:e}");
    }
}

#[test]
fn f_with_one_numerator_df_is_t_squared() {
    for &df in &[1.0, 2.0, 5.0, 12.0, 23.0, 100.0, 1000.0] {
        for i in 1..60 {
            let t = i as f64 * 0.1;
            let diff = (f_upper(t * t, 1.0, df) - t_two_tailed(t, df)).abs();
            assert!(diff < 1e-9, "df={df} t={t}: {diff:e}");
        }
    }
}

#[test]
fn chisq_with_one_df_is_squared_normal() {
    for i in 1..60 {
        let z = i as f64 * 0.1;
        let diff = (chisq_upper(z * z, 1.0) - normal_two_tailed(z)).abs();
        assert!(diff < 1e-12, "z={z}: {diff:e}");
    }
}

fn assert_monotone(name: &str, values: &[f64]) {
    for (i, w) in values.windows(2).enumerate() {
        assert!(w[0] <= w[1] + 1e-15, "{name} decreases at step {i}: {} > {}", w[0], w[1]);
    }
    assert!(values.iter().all(|v| (0.0..=1.0).contains(v)), "{name} left [0, 1]");
}

#[test]
fn cdfs_are_monotone_on_dense_grids() {
    let grid = |lo: f64, hi: f64| -> Vec<f64> {
        (0..1000).map(|i| lo + (hi - lo) * i as f64 / 999.0).collect()
    };
    let zs = grid(-8.0, 8.0);
    assert_monotone("normal", &zs.iter().map(|&z| normal_cdf(z)).collect::<Vec<_>>());
    for &df in &[1.0, 3.0, 12.0, 80.0] {
        assert_monotone("t", &zs.iter().map(|&t| t_cdf(t, df)).collect::<Vec<_>>());
    }
    let xs = grid(0.0, 60.0);
    for &(d1, d2) in &[(1.0, 1.0), (1.0, 23.0), (4.0, 12.0), (30.0, 200.0)] {
        assert_monotone("F", &xs.iter().map(|&x| f_cdf(x, d1, d2)).collect::<Vec<_>>());
    }
    for &df in &[1.0, 2.0, 12.0, 50.0] {
        assert_monotone("chisq", &xs.iter().map(|&x| chisq_cdf(x, df)).collect::<Vec<_>>());
    }
}

#[test]
fn symmetric_and_limit_values() {
    assert_eq!(t_cdf(0.0, 7.0), 0.5);
    assert!((normal_cdf(0.0) - 0.5).abs() < 1e-16);
    assert!((t_cdf(1.3, 9.0) + t_cdf(-1.3, 9.0) - 1.0).abs() < 1e-14);
    assert_eq!(f_upper(0.0, 3.0, 9.0), 1.0);
    assert_eq!(chisq_upper(0.0, 4.0), 1.0);
    assert!(chisq_upper(1000.0, 4.0) < 1e-200);
}
