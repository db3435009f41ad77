//! Reference implementations that share no code or algorithm with the
//! library: a Stirling series for log-gamma, the hypergeometric power
//! series for the incomplete beta and the power series for the lower
//! incomplete gamma. Shared by the oracle tests and the acceptance suite.

#![allow(dead_code)]

/// Stirling's series after shifting the argument above 15.
pub fn oracle_ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0);
    let mut shift = 0.0;
    let mut z = x;
    while z < 15.0 {
        shift += z.ln();
        z += 1.0;
    }
    let z2 = z * z;
    let series = 1.0 / (12.0 * z) - 1.0 / (360.0 * z * z2) + 1.0 / (1260.0 * z * z2 * z2)
        - 1.0 / (1680.0 * z * z2 * z2 * z2)
        + 1.0 / (1188.0 * z * z2 * z2 * z2 * z2);
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln() + series - shift
}

pub fn oracle_ln_beta(a: f64, b: f64) -> f64 {
    oracle_ln_gamma(a) + oracle_ln_gamma(b) - oracle_ln_gamma(a + b)
}

/// Neumaier-compensated sum of a positive series, stopped once a term
/// falls below 1e-17 of the running sum.
pub fn sum_series(mut term: f64, mut next: impl FnMut(usize, f64) -> f64) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for n in 0..1_000_000 {
        let t = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - t) + term
        } else {
            (term - t) + sum
        };
        sum = t;
        if term.abs() <= 1e-17 * sum.abs() {
            return sum + comp;
        }
        term = next(n, term);
    }
    panic!("series did not converge");
}

/// I_x(a,b) = x^a (1-x)^b / (a B(a,b)) * 2F1(a+b, 1; a+1; x), evaluated on
/// the side of the mode where the terms decrease.
pub fn oracle_inc_beta(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    if x > (a + 1.0) / (a + b + 2.0) {
        return 1.0 - oracle_inc_beta(b, a, 1.0 - x);
    }
    let log_pre = a * x.ln() + b * (1.0 - x).ln() - a.ln() - oracle_ln_beta(a, b);
    let s = sum_series(1.0, |n, t| {
        let n = n as f64;
        t * (a + b + n) / (a + 1.0 + n) * x
    });
    log_pre.exp() * s
}

/// P(s,x) = x^s e^-x / Gamma(s+1) * sum x^n / ((s+1)...(s+n)).
pub fn oracle_inc_gamma(s: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let log_pre = s * x.ln() - x - oracle_ln_gamma(s + 1.0);
    let sum = sum_series(1.0, |n, t| t * x / (s + 1.0 + n as f64));
    (log_pre.exp() * sum).min(1.0)
}

pub fn beta_grid() -> Vec<(f64, f64, f64)> {
    let shapes = [0.5, 1.0, 2.5, 6.0, 11.5, 30.0, 75.0, 160.0, 500.0, 1200.0];
    let seconds = [0.5, 1.0, 3.0, 12.0, 60.0];
    let xs = [0.001, 0.02, 0.1, 0.25, 0.4, 0.5, 0.65, 0.8, 0.95, 0.999];
    let mut grid = Vec::with_capacity(500);
    for &a in &shapes {
        for &b in &seconds {
            for &x in &xs {
                grid.push((a, b, x));
            }
        }
    }
    grid
}

pub fn gamma_grid() -> Vec<(f64, f64)> {
    let mut grid = Vec::with_capacity(500);
    for i in 0..25 {
        let s = 0.25 + 0.35 * (i as f64).powf(1.6);
        for j in 0..20 {
            // Spread x around the mean s so both tails are covered.
            let x = s * (0.02 + 0.12 * j as f64) + 0.01 * j as f64;
            grid.push((s, x));
        }
    }
    grid
}
