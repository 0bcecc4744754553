//! Small numeric helpers shared across modules.

/// Compensated (Neumaier) summation. Entropy and bound accumulations use this
/// so that results are deterministic and N-sweep identities hold to rounding.
pub(crate) fn kahan_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// ln(n!) accumulated termwise; exact for n = 0, 1 and accurate to a few ulps
/// for the occupation range used here (n <= 64).
pub(crate) fn ln_factorial(n: u32) -> f64 {
    (2..=u64::from(n)).map(|k| (k as f64).ln()).sum()
}
