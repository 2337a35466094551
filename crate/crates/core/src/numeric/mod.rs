//! Small numerical building blocks shared by the geometric modules.

pub mod fd;
pub mod quadrature;
pub mod root;
pub mod stats;

/// Greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn gcd_all(values: &[u32]) -> u32 {
    values.iter().fold(0, |g, &v| gcd(g, v))
}

/// `ln(k!)` by direct summation for small `k`, Stirling series beyond.
pub fn ln_factorial(k: u64) -> f64 {
    if k < 64 {
        return (2..=k).map(|j| (j as f64).ln()).sum();
    }
    let x = k as f64 + 1.0;
    // ln Γ(x), asymptotic series; accurate to ~1e-15 for x > 64
    (x - 0.5) * x.ln() - x + 0.5 * std::f64::consts::TAU.ln() + 1.0 / (12.0 * x) - 1.0 / (360.0 * x.powi(3))
        + 1.0 / (1260.0 * x.powi(5))
}

/// Volume of the unit sphere `S^{2n-1} ⊂ ℂⁿ`: `2πⁿ/(n-1)!`.
pub fn sphere_volume(n: usize) -> f64 {
    2.0 * std::f64::consts::PI.powi(n as i32) / (ln_factorial(n as u64 - 1)).exp()
}

/// Numerically stable `ln Σ exp(x_i)`.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}
