//! Small subsets of `[n]` as bitmasks, plus word and counting helpers.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// A subset of `{1, ..., 31}` stored as a bitmask (bit `i-1` for element `i`).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KSet(pub u32);

impl KSet {
    pub fn from_elems(elems: &[usize]) -> KSet {
        let mut m = 0u32;
        for &e in elems {
            debug_assert!((1..=31).contains(&e));
            m |= 1 << (e - 1);
        }
        KSet(m)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, e: usize) -> bool {
        (1..=32).contains(&e) && self.0 & (1 << (e - 1)) != 0
    }

    pub fn insert(&mut self, e: usize) {
        self.0 |= 1 << (e - 1);
    }

    /// Elements in increasing order.
    pub fn elems(self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut m = self.0;
        while m != 0 {
            let t = m.trailing_zeros() as usize;
            out.push(t + 1);
            m &= m - 1;
        }
        out
    }

    pub fn max_elem(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    /// Lexicographic comparison of the sorted element lists.
    pub fn lex_cmp(self, other: KSet) -> std::cmp::Ordering {
        self.elems().cmp(&other.elems())
    }
}

impl fmt::Display for KSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.elems().iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for KSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<KSet> {
        let mut set = KSet(0);
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let e: usize = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad subset element {part:?}")))?;
            if !(1..=31).contains(&e) {
                return Err(Error::OutOfRange(format!("subset element {e}")));
            }
            if set.contains(e) {
                return Err(Error::Parse(format!("repeated element {e} in {s:?}")));
            }
            set.insert(e);
        }
        Ok(set)
    }
}

/// All `k`-subsets of `[n]` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<KSet> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<KSet>) {
        if cur.len() == k {
            out.push(KSet::from_elems(cur));
            return;
        }
        for e in start..=n {
            if n - e + 1 < k - cur.len() {
                break;
            }
            cur.push(e);
            rec(e + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(1, n, k, &mut cur, &mut out);
    out
}

/// Parity of the number of inversions, as `+1` or `-1`.
pub fn inversion_sign<T: Ord>(word: &[T]) -> i64 {
    let mut inv = 0usize;
    for i in 0..word.len() {
        for j in i + 1..word.len() {
            if word[i] > word[j] {
                inv += 1;
            }
        }
    }
    if inv.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// All words of length `labels * copies` in which each of `1..=labels`
/// occurs exactly `copies` times, in lexicographic order.
pub fn balanced_words(labels: usize, copies: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut left = vec![copies; labels];
    let mut cur = Vec::with_capacity(labels * copies);
    fn rec(left: &mut [usize], cur: &mut Vec<u8>, total: usize, out: &mut Vec<Vec<u8>>) {
        if cur.len() == total {
            out.push(cur.clone());
            return;
        }
        for l in 0..left.len() {
            if left[l] > 0 {
                left[l] -= 1;
                cur.push(l as u8 + 1);
                rec(left, cur, total, out);
                cur.pop();
                left[l] += 1;
            }
        }
    }
    rec(&mut left, &mut cur, labels * copies, &mut out);
    out
}

/// Parse a comma separated list of non-negative integers such as `1,1,0,2`.
pub fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse()
                .map_err(|_| Error::Parse(format!("expected integer, got {p:?}")))
        })
        .collect()
}

/// Parse an exact rational written as `p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<crate::Q> {
    use num_bigint::BigInt;
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q == BigInt::from(0) {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(crate::Q::new(p, q))
        }
        None => {
            let p: BigInt = s.parse().map_err(|_| bad())?;
            Ok(crate::Q::from_integer(p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kset_roundtrip() {
        let s: KSet = "1,2,12".parse().unwrap();
        assert_eq!(s.elems(), vec![1, 2, 12]);
        assert_eq!(s.to_string(), "1,2,12");
        assert_eq!(s.max_elem(), 12);
        assert!("1,1".parse::<KSet>().is_err());
    }

    #[test]
    fn subsets_counts() {
        assert_eq!(k_subsets(6, 3).len(), 20);
        assert_eq!(k_subsets(12, 3).len(), 220);
        let s = k_subsets(4, 2);
        assert_eq!(s[0].elems(), vec![1, 2]);
        assert_eq!(s[5].elems(), vec![3, 4]);
    }

    #[test]
    fn words_and_signs() {
        assert_eq!(balanced_words(3, 2).len(), 90);
        assert_eq!(balanced_words(3, 3).len(), 1680);
        assert_eq!(inversion_sign(&[1, 2, 3]), 1);
        assert_eq!(inversion_sign(&[2, 1, 3]), -1);
        assert_eq!(binomial(9, 3), 84);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("-2/4").unwrap().to_string(), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert_eq!(parse_usize_list("1, 0,2").unwrap(), vec![1, 0, 2]);
    }
}
