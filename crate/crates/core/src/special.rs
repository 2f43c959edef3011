//! Orthogonal polynomial recurrences used by the mode families.
//!
//! Hermite polynomials are evaluated in the orthonormal scaling
//! `H_n(x) / sqrt(2^n n!)`, which keeps the recurrence well conditioned
//! for the orders used here and lets the caller fold in the Gaussian
//! envelope without overflow.

/// Fills `out[0..=n]` with `H_k(x) / sqrt(2^k k!)`.
pub fn scaled_hermite_into(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() == 1 {
        return;
    }
    out[1] = std::f64::consts::SQRT_2 * x;
    for k in 1..out.len() - 1 {
        let kf = k as f64;
        out[k + 1] = (2.0 / (kf + 1.0)).sqrt() * x * out[k] - (kf / (kf + 1.0)).sqrt() * out[k - 1];
    }
}

/// `H_n(x) / sqrt(2^n n!)`.
pub fn scaled_hermite(n: usize, x: f64) -> f64 {
    let mut buf = vec![0.0; n + 1];
    scaled_hermite_into(x, &mut buf);
    buf[n]
}

/// Generalized Laguerre polynomial `L_p^a(t)` by the three-term recurrence.
pub fn laguerre(p: usize, a: f64, t: f64) -> f64 {
    if p == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 1.0 + a - t;
    for k in 1..p {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + a - t) * cur - (kf + a) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// `d/dt L_p^a(t) = -L_{p-1}^{a+1}(t)`.
pub fn laguerre_derivative(p: usize, a: f64, t: f64) -> f64 {
    if p == 0 {
        0.0
    } else {
        -laguerre(p - 1, a + 1.0, t)
    }
}

/// `ln(n!)`, summed exactly for the small arguments used by mode normalization.
pub fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Truncated exponential series `sum_{n=0}^{order} s^n / n!` and its last term.
pub fn truncated_exp(order: usize, s: f64) -> (f64, f64) {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..=order {
        term *= s / n as f64;
        sum += term;
    }
    (sum, term)
}
