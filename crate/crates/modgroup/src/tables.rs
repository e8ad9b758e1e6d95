//! Exact counting sequences behind the uniform samplers: involutions,
//! legal b-structures, and the derived totals used for cross-checks.

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Largest size for which exact big-integer tables are kept. Beyond this the
/// samplers fall back to log-space floating point and mark output approximate.
pub const DEFAULT_EXACT_LIMIT: usize = 100_000;

/// Cached counts of partial structures on `{1..n}`, exact up to a limit and
/// as natural logarithms everywhere.
///
/// `involutions(n)` counts permutation involutions of an n-set (a-structures
/// with loops allowed); `b_structures(n)` counts partial injections whose
/// functional graph splits into fixed points, isolated directed edges and
/// directed triangles (b-structures).
pub struct CountTables {
    a: Vec<BigUint>,
    b: Vec<BigUint>,
    log_a: Vec<f64>,
    log_b: Vec<f64>,
}

impl CountTables {
    /// Builds tables covering sizes `0..=n_max`, exact big integers up to
    /// `min(n_max, DEFAULT_EXACT_LIMIT)`.
    pub fn up_to(n_max: usize) -> Self {
        Self::with_exact_limit(n_max, DEFAULT_EXACT_LIMIT)
    }

    /// As `up_to`, with an explicit cap on the exact portion.
    pub fn with_exact_limit(n_max: usize, exact_limit: usize) -> Self {
        let exact_max = n_max.min(exact_limit);
        let mut a: Vec<BigUint> = Vec::with_capacity(exact_max + 1);
        let mut b: Vec<BigUint> = Vec::with_capacity(exact_max + 1);
        for n in 0..=exact_max {
            let next_a = match n {
                0 | 1 => BigUint::one(),
                _ => &a[n - 1] + BigUint::from(n - 1) * &a[n - 2],
            };
            a.push(next_a);
            let next_b = match n {
                0 | 1 => BigUint::one(),
                2 => BigUint::from(3u32),
                _ => {
                    &b[n - 1]
                        + BigUint::from(2 * (n - 1)) * &b[n - 2]
                        + BigUint::from((n - 1) * (n - 2)) * &b[n - 3]
                }
            };
            b.push(next_b);
        }

        let mut log_a = vec![0.0f64; n_max + 1];
        let mut log_b = vec![0.0f64; n_max + 1];
        for n in 2..=n_max {
            log_a[n] = log_sum(log_a[n - 1], ((n - 1) as f64).ln() + log_a[n - 2]);
        }
        if n_max >= 2 {
            log_b[2] = 3.0f64.ln();
        }
        for n in 3..=n_max {
            log_b[n] = log_sum(
                log_b[n - 1],
                log_sum(
                    (2.0 * (n - 1) as f64).ln() + log_b[n - 2],
                    (((n - 1) * (n - 2)) as f64).ln() + log_b[n - 3],
                ),
            );
        }

        CountTables { a, b, log_a, log_b }
    }

    /// Largest size the tables cover.
    pub fn n_max(&self) -> usize {
        self.log_a.len() - 1
    }

    /// Whether exact big-integer counts are available at size `n`.
    pub fn is_exact(&self, n: usize) -> bool {
        n < self.a.len()
    }

    /// Number of involutions of an n-set. Panics if `n` is beyond the exact range.
    pub fn involutions(&self, n: usize) -> &BigUint {
        &self.a[n]
    }

    /// Number of legal b-structures on an n-set. Panics if `n` is beyond the exact range.
    pub fn b_structures(&self, n: usize) -> &BigUint {
        &self.b[n]
    }

    /// Natural log of `involutions(n)`, defined for every covered size.
    pub fn log_involutions(&self, n: usize) -> f64 {
        self.log_a[n]
    }

    /// Natural log of `b_structures(n)`, defined for every covered size.
    pub fn log_b_structures(&self, n: usize) -> f64 {
        self.log_b[n]
    }

    /// Total count of (a, b)-structure pairs on `{1..n}`, connected or not.
    pub fn total(&self, n: usize) -> BigUint {
        self.involutions(n) * self.b_structures(n)
    }

    /// Counts of connected structure pairs for sizes `0..=n_max`, by peeling
    /// the component of vertex 1 off the total count.
    pub fn connected_counts(&self, n_max: usize) -> Vec<BigUint> {
        let mut c: Vec<BigUint> = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            if n == 0 {
                c.push(BigUint::zero());
                continue;
            }
            let mut count = self.total(n);
            for (m, cm) in c.iter().enumerate().skip(1) {
                count -= binomial(n - 1, m - 1) * cm * self.total(n - m);
            }
            c.push(count);
        }
        c
    }
}

fn log_sum(x: f64, y: f64) -> f64 {
    let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
    hi + (lo - hi).exp().ln_1p()
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut result = BigUint::one();
    for i in 0..k {
        result = result * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    result
}

/// Number of fixpoint-free involutions of an n-set: `(n-1)!!` for even n,
/// zero for odd n.
pub fn fixpoint_free_involutions(n: usize) -> BigUint {
    if n % 2 == 1 {
        return BigUint::zero();
    }
    let mut count = BigUint::one();
    let mut m = n;
    while m >= 2 {
        count *= BigUint::from(m - 1);
        m -= 2;
    }
    count
}

/// Number of ways to partition an n-set into directed triangles:
/// `n! / (3^(n/3) (n/3)!)` for n divisible by 3, zero otherwise.
pub fn all_triangle_structures(n: usize) -> BigUint {
    if !n.is_multiple_of(3) {
        return BigUint::zero();
    }
    let mut count = BigUint::one();
    let mut m = n;
    while m >= 3 {
        count *= BigUint::from((m - 1) * (m - 2));
        m -= 3;
    }
    count
}

/// Upper quantile of the chi-square distribution with `df` degrees of freedom
/// via the Wilson-Hilferty cube approximation, adequate for the significance
/// levels used by the verification commands.
pub fn chi_square_quantile(df: f64, p: f64) -> f64 {
    let z = normal_quantile(p);
    let t = 1.0 - 2.0 / (9.0 * df) + z * (2.0 / (9.0 * df)).sqrt();
    df * t * t * t
}

/// Standard normal quantile (Acklam's rational approximation, |error| < 1.2e-9).
pub fn normal_quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile probability must lie in (0, 1)");
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -normal_quantile(1.0 - p)
    }
}

/// z-score for a one-sided 0.999 confidence bound.
pub const Z_999: f64 = 3.090_232_3;
