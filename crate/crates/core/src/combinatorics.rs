//! Binomial coefficients and lexicographic k-subset enumeration.

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) is integral, so den / g divides n - i
        let num = (n - i) as u128;
        let den = (i + 1) as u128;
        let g = gcd(acc, den);
        match (acc / g).checked_mul(num / (den / g)) {
            Some(v) => acc = v,
            None => return u128::MAX,
        }
    }
    acc
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The `rank`-th k-subset of `0..n` in lexicographic order.
pub fn unrank(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let remaining = k - slot - 1;
        loop {
            let c = binomial(n - next - 1, remaining);
            if rank < c {
                break;
            }
            rank -= c;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

/// Advances `idx` to the next k-subset of `0..n` in lexicographic order.
/// Returns `false` once `idx` was the last one.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Lexicographic iterator over the k-subsets of `0..n`.
#[derive(Clone, Debug)]
pub struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub fn new(n: usize, k: usize) -> Self {
        let current = (k <= n).then(|| (0..k).collect());
        Combinations { n, current }
    }

    /// Starts at the `rank`-th subset.
    pub fn starting_at(n: usize, k: usize, rank: u128) -> Self {
        let current = (k <= n && rank < binomial(n, k)).then(|| unrank(n, k, rank));
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        let mut succ = cur.clone();
        if next_combination(&mut succ, self.n) {
            self.current = Some(succ);
        }
        Some(cur)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(9, 5), 126);
        assert_eq!(binomial(10, 7), 120);
        assert_eq!(binomial(30, 15), 155_117_520);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(100, 50), 100_891_344_545_564_193_334_812_497_256);
        assert_eq!(binomial(1000, 500), u128::MAX);
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let all: Vec<_> = Combinations::new(5, 3).collect();
        assert_eq!(all.len(), 10);
        assert_eq!(all[0], vec![0, 1, 2]);
        assert_eq!(all[1], vec![0, 1, 3]);
        assert_eq!(all[9], vec![2, 3, 4]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for (r, c) in all.iter().enumerate() {
            assert_eq!(&unrank(5, 3, r as u128), c);
        }
    }

    #[test]
    fn edge_cases() {
        assert_eq!(Combinations::new(4, 0).collect::<Vec<_>>(), vec![Vec::<usize>::new()]);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(Combinations::new(4, 4).count(), 1);
        assert_eq!(Combinations::starting_at(6, 2, 14).count(), 1);
        assert_eq!(Combinations::starting_at(6, 2, 15).count(), 0);
    }
}
