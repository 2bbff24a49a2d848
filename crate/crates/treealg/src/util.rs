//! Small crate-internal helpers for iterating over argument tuples.
//!
//! Transition tables are stored densely: the row for arguments `(q_1, .., q_k)`
//! over `n` states lives at the mixed-radix rank with the *leftmost* argument
//! most significant. Keeping rank and iteration order here ensures every module
//! (deterministic, nondeterministic, weighted) agrees on the layout; the same
//! convention makes the weighted table line up with left-folded Kronecker
//! products.

/// Rank of an argument tuple in the dense table: `q_1 * n^(k-1) + .. + q_k`.
pub(crate) fn tuple_rank(args: &[usize], n: usize) -> usize {
    args.iter().fold(0, |acc, &q| acc * n + q)
}

/// Inverse of [`tuple_rank`]: digits of `rank` in base `n`, `len` wide.
pub(crate) fn tuple_unrank(mut rank: usize, n: usize, len: usize) -> Vec<usize> {
    let mut args = vec![0; len];
    for slot in args.iter_mut().rev() {
        *slot = rank % n;
        rank /= n;
    }
    args
}

/// All tuples of length `len` over `0..base`, in rank order.
///
/// `len == 0` yields exactly the empty tuple; `base == 0` with `len > 0`
/// yields nothing.
pub(crate) fn tuples(base: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = base.checked_pow(len as u32).unwrap_or(0);
    let total = if len == 0 { 1 } else { total };
    (0..total).map(move |rank| tuple_unrank(rank, base, len))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_unrank_agree() {
        for (rank, args) in tuples(3, 2).enumerate() {
            assert_eq!(tuple_rank(&args, 3), rank);
            assert_eq!(tuple_unrank(rank, 3, 2), args);
        }
    }

    #[test]
    fn leftmost_argument_is_most_significant() {
        assert_eq!(tuple_rank(&[1, 0], 2), 2);
        assert_eq!(tuple_rank(&[0, 1], 2), 1);
    }

    #[test]
    fn degenerate_tuple_counts() {
        assert_eq!(tuples(5, 0).count(), 1);
        assert_eq!(tuples(0, 2).count(), 0);
        assert_eq!(tuples(2, 3).count(), 8);
    }
}
