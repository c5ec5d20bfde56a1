pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// All `k`-element subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] != i + n - k) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_counts_match_binomials() {
        for n in 0..8 {
            for k in 0..=n {
                let s = subsets(n, k);
                assert_eq!(s.len() as u64, binomial(n as u64, k as u64));
                assert!(s.windows(2).all(|w| w[0] < w[1]));
            }
        }
        assert_eq!(subsets(4, 2)[0], vec![0, 1]);
        assert!(subsets(2, 3).is_empty());
    }
}
