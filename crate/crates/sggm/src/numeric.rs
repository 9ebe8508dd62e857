//! Deterministic floating-point reductions shared across modules.

/// Pairwise (tree) summation with a binary-counter accumulator.
///
/// Partial sums are combined only between blocks of equal input count, so the
/// rounding pattern depends solely on the input order. Error grows like
/// `O(log n)` in the input length instead of the `O(n)` of a running sum.
pub fn pairwise_sum<I>(values: I) -> f64
where
    I: IntoIterator<Item = f64>,
{
    // partials[b] holds the sum of a block of 2^b consecutive inputs.
    let mut partials = [0.0f64; 64];
    let mut filled: u64 = 0;
    for v in values {
        let mut carry = v;
        let mut bit = 0usize;
        while filled & (1 << bit) != 0 {
            carry += partials[bit];
            filled &= !(1 << bit);
            bit += 1;
        }
        partials[bit] = carry;
        filled |= 1 << bit;
    }
    let mut total = 0.0;
    for (bit, partial) in partials.iter().enumerate() {
        if filled & (1 << bit) != 0 {
            total += partial;
        }
    }
    total
}

/// Mean of a non-empty sequence via [`pairwise_sum`].
pub fn pairwise_mean(values: &[f64]) -> f64 {
    pairwise_sum(values.iter().copied()) / values.len() as f64
}
