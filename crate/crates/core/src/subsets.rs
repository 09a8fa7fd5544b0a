//! Index-set helpers. Index sets are ascending `Vec<usize>` of 0-based indices
//! internally and are rendered 1-based wherever they leave the library.

use itertools::Itertools;

/// Binomial coefficient, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All `size`-subsets of `pool` (which must be ascending), in lexicographic order.
pub fn subsets_of(pool: &[usize], size: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    pool.iter().copied().combinations(size)
}

/// All `size`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, size: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..n).combinations(size)
}

/// `0..n` minus `set`.
pub fn complement(set: &[usize], n: usize) -> Vec<usize> {
    (0..n).filter(|i| !set.contains(i)).collect()
}

pub fn one_based(set: &[usize]) -> Vec<usize> {
    set.iter().map(|i| i + 1).collect()
}

/// Renders `{1,3,4}` style, 1-based.
pub fn fmt_set(set: &[usize]) -> String {
    format!("{{{}}}", set.iter().map(|i| (i + 1).to_string()).join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(60, 30), 118264581564861424);
        assert_eq!(binomial(1000, 500), u128::MAX);
    }

    #[test]
    fn lexicographic_subsets() {
        let all: Vec<_> = subsets(4, 2).collect();
        assert_eq!(all, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(subsets(3, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(subsets_of(&[1, 4, 6], 2).count(), 3);
        assert_eq!(complement(&[1, 3], 5), vec![0, 2, 4]);
        assert_eq!(fmt_set(&[0, 2]), "{1,3}");
        assert_eq!(fmt_set(&[]), "{}");
    }
}
