//! Rectangular Young tableaux and the operators that index basis webs.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Largest `rows * cols` accepted by [`syt_enumerate`].
pub const SYT_SIZE_GUARD: usize = 16;

/// A rectangular `rows x cols` grid of positive integers, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u32>>", into = "Vec<Vec<u32>>")]
pub struct Tableau {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

impl TryFrom<Vec<Vec<u32>>> for Tableau {
    type Error = Error;

    fn try_from(grid: Vec<Vec<u32>>) -> Result<Tableau> {
        Tableau::from_rows(grid)
    }
}

impl From<Tableau> for Vec<Vec<u32>> {
    fn from(t: Tableau) -> Self {
        t.to_rows()
    }
}

impl Tableau {
    /// Build from a list of rows. Rows must be non-empty and of equal length
    /// and entries positive.
    pub fn from_rows(grid: Vec<Vec<u32>>) -> Result<Tableau> {
        let rows = grid.len();
        if rows == 0 {
            return Err(Error::InvalidTableau("no rows".into()));
        }
        let cols = grid[0].len();
        if cols == 0 || grid.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidTableau("ragged or empty rows".into()));
        }
        let entries: Vec<u32> = grid.into_iter().flatten().collect();
        if entries.contains(&0) {
            return Err(Error::InvalidTableau("entries must be positive".into()));
        }
        Ok(Tableau { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn size(&self) -> usize {
        self.rows * self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Entries read row by row.
    pub fn row_reading_word(&self) -> &[u32] {
        &self.entries
    }

    /// Rows weakly increase, columns strictly increase.
    pub fn is_semistandard(&self) -> bool {
        (0..self.rows).all(|i| (1..self.cols).all(|j| self.get(i, j - 1) <= self.get(i, j)))
            && (1..self.rows).all(|i| (0..self.cols).all(|j| self.get(i - 1, j) < self.get(i, j)))
    }

    /// Rows strictly increase, columns weakly increase.
    pub fn is_dual_semistandard(&self) -> bool {
        self.transpose().is_semistandard()
    }

    pub fn is_standard(&self) -> bool {
        let n = self.size() as u32;
        let mut seen = vec![false; self.size() + 1];
        for &e in &self.entries {
            if e > n || seen[e as usize] {
                return false;
            }
            seen[e as usize] = true;
        }
        (0..self.rows).all(|i| (1..self.cols).all(|j| self.get(i, j - 1) < self.get(i, j)))
            && (1..self.rows).all(|i| (0..self.cols).all(|j| self.get(i - 1, j) < self.get(i, j)))
    }

    fn require_standard(&self) -> Result<()> {
        if self.is_standard() {
            Ok(())
        } else {
            Err(Error::NotStandard)
        }
    }

    pub fn transpose(&self) -> Tableau {
        let mut entries = Vec::with_capacity(self.size());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        Tableau { rows: self.cols, cols: self.rows, entries }
    }

    /// For each value in increasing order, the (1-based) rows containing it,
    /// repeated once per occurrence.
    pub fn yamanouchi_word(&self) -> Vec<u8> {
        let mut cells: Vec<(u32, usize)> = Vec::with_capacity(self.size());
        for i in 0..self.rows {
            for j in 0..self.cols {
                cells.push((self.get(i, j), i));
            }
        }
        cells.sort();
        cells.into_iter().map(|(_, i)| i as u8 + 1).collect()
    }

    /// Standard tableau whose `i`-th value lies in row `word[i]`.
    pub fn from_yamanouchi_word(word: &[u8], rows: usize) -> Result<Tableau> {
        if rows == 0 || !word.len().is_multiple_of(rows) {
            return Err(Error::InvalidTableau("word length not a multiple of rows".into()));
        }
        let cols = word.len() / rows;
        let mut grid = vec![Vec::with_capacity(cols); rows];
        for (pos, &r) in word.iter().enumerate() {
            let r = r as usize;
            if r == 0 || r > rows {
                return Err(Error::InvalidTableau(format!("row index {r} out of range")));
            }
            grid[r - 1].push(pos as u32 + 1);
        }
        let t = Tableau::from_rows(grid)?;
        t.require_standard()?;
        Ok(t)
    }

    /// `{l : l+1 lies in a strictly lower row than l}`.
    pub fn descent_set(&self) -> BTreeSet<u32> {
        let mut row_of = std::collections::BTreeMap::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                row_of.entry(self.get(i, j)).or_insert(i);
            }
        }
        row_of
            .iter()
            .filter_map(|(&v, &r)| match row_of.get(&(v + 1)) {
                Some(&r2) if r2 > r => Some(v),
                _ => None,
            })
            .collect()
    }

    /// Jeu de taquin promotion: delete 1, slide the hole out, decrement, and
    /// place `rows*cols` in the vacated corner.
    pub fn promotion(&self) -> Result<Tableau> {
        self.require_standard()?;
        let n = self.size() as u32;
        let mut t = self.clone();
        let (mut i, mut j) = (0usize, 0usize);
        loop {
            let right = (j + 1 < t.cols).then(|| t.get(i, j + 1));
            let below = (i + 1 < t.rows).then(|| t.get(i + 1, j));
            match (right, below) {
                (None, None) => break,
                (Some(a), Some(b)) if b < a => {
                    t.set(i, j, b);
                    i += 1;
                }
                (Some(a), _) => {
                    t.set(i, j, a);
                    j += 1;
                }
                (None, Some(b)) => {
                    t.set(i, j, b);
                    i += 1;
                }
            }
        }
        t.set(i, j, n + 1);
        for e in &mut t.entries {
            *e -= 1;
        }
        Ok(t)
    }

    /// Schützenberger evacuation.
    pub fn evacuation(&self) -> Result<Tableau> {
        self.require_standard()?;
        let n = self.size() as u32;
        let mut cur: Vec<Option<u32>> = self.entries.iter().map(|&e| Some(e)).collect();
        let mut out = vec![0u32; self.size()];
        let cols = self.cols;
        let rows = self.rows;
        for step in 0..n {
            let pos = cur
                .iter()
                .enumerate()
                .filter_map(|(p, e)| e.map(|v| (v, p)))
                .min()
                .map(|(_, p)| p)
                .ok_or_else(|| Error::Internal("evacuation ran out of cells".into()))?;
            let (mut i, mut j) = (pos / cols, pos % cols);
            loop {
                let right = if j + 1 < cols { cur[i * cols + j + 1] } else { None };
                let below = if i + 1 < rows { cur[(i + 1) * cols + j] } else { None };
                let go_down = match (right, below) {
                    (None, None) => break,
                    (Some(a), Some(b)) => b < a,
                    (None, Some(_)) => true,
                    (Some(_), None) => false,
                };
                if go_down {
                    cur[i * cols + j] = below;
                    i += 1;
                } else {
                    cur[i * cols + j] = right;
                    j += 1;
                }
            }
            cur[i * cols + j] = None;
            out[i * cols + j] = n - step;
        }
        Ok(Tableau { rows, cols, entries: out })
    }
}

/// Hook-length count of standard tableaux of shape `r x k`.
pub fn syt_count(r: usize, k: usize) -> u128 {
    let n = r * k;
    let mut num: u128 = 1;
    for i in 1..=n as u128 {
        num *= i;
    }
    let mut den: u128 = 1;
    for i in 0..r {
        for j in 0..k {
            den *= ((r - i - 1) + (k - j - 1) + 1) as u128;
        }
    }
    num / den
}

/// All standard tableaux of shape `r x k`, ordered lexicographically by
/// row-reading word.
pub fn syt_enumerate(r: usize, k: usize) -> Result<Vec<Tableau>> {
    if r == 0 || k == 0 {
        return Err(Error::InvalidTableau("shape must be non-empty".into()));
    }
    if r * k > SYT_SIZE_GUARD {
        return Err(Error::SizeGuard(format!("{r}x{k} exceeds {SYT_SIZE_GUARD} cells")));
    }
    let mut out = Vec::new();
    let mut lens = vec![0usize; r];
    let mut word = Vec::with_capacity(r * k);
    fn rec(lens: &mut [usize], k: usize, word: &mut Vec<u8>, out: &mut Vec<Tableau>) {
        if word.len() == lens.len() * k {
            out.push(Tableau::from_yamanouchi_word(word, lens.len()).expect("lattice word"));
            return;
        }
        for i in 0..lens.len() {
            let ok = lens[i] < k && (i == 0 || lens[i - 1] > lens[i]);
            if ok {
                lens[i] += 1;
                word.push(i as u8 + 1);
                rec(lens, k, word, out);
                word.pop();
                lens[i] -= 1;
            }
        }
    }
    rec(&mut lens, k, &mut word, &mut out);
    out.sort_by(|a, b| a.row_reading_word().cmp(b.row_reading_word()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(rows: &[&[u32]]) -> Tableau {
        Tableau::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    /// Bender-Knuth involution t_i on a standard tableau: swap i and i+1
    /// unless they share a row or column.
    fn bk(tab: &Tableau, i: u32) -> Tableau {
        let pos = |v: u32| {
            let p = tab.entries.iter().position(|&e| e == v).unwrap();
            (p / tab.cols, p % tab.cols)
        };
        let (a, b) = (pos(i), pos(i + 1));
        if a.0 == b.0 || a.1 == b.1 {
            return tab.clone();
        }
        let mut out = tab.clone();
        out.set(a.0, a.1, i + 1);
        out.set(b.0, b.1, i);
        out
    }

    fn bk_promotion(tab: &Tableau) -> Tableau {
        let n = tab.size() as u32;
        let mut cur = tab.clone();
        for i in 1..n {
            cur = bk(&cur, i);
        }
        cur
    }

    fn brute_syt(r: usize, k: usize) -> usize {
        fn perms(v: &mut Vec<u32>, l: usize, out: &mut Vec<Vec<u32>>) {
            if l == v.len() {
                out.push(v.clone());
                return;
            }
            for i in l..v.len() {
                v.swap(l, i);
                perms(v, l + 1, out);
                v.swap(l, i);
            }
        }
        let mut all = Vec::new();
        perms(&mut (1..=(r * k) as u32).collect(), 0, &mut all);
        all.into_iter()
            .filter(|p| {
                let grid = p.chunks(k).map(|c| c.to_vec()).collect();
                Tableau::from_rows(grid).unwrap().is_standard()
            })
            .count()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(syt_enumerate(1, 1).unwrap(), vec![t(&[&[1]])]);
        assert_eq!(syt_enumerate(2, 3).unwrap().len(), brute_syt(2, 3));
        assert_eq!(syt_enumerate(2, 3).unwrap().len(), 5);
        assert_eq!(syt_enumerate(3, 4).unwrap().len(), 462);
        for (r, k) in [(2, 2), (3, 3), (2, 5), (4, 3), (3, 4), (2, 6)] {
            assert_eq!(syt_enumerate(r, k).unwrap().len() as u128, syt_count(r, k));
        }
        assert!(matches!(syt_enumerate(4, 5), Err(Error::SizeGuard(_))));
    }

    #[test]
    fn enumeration_is_lex_sorted() {
        let all = syt_enumerate(3, 3).unwrap();
        for w in all.windows(2) {
            assert!(w[0].row_reading_word() < w[1].row_reading_word());
        }
    }

    #[test]
    fn promotion_examples() {
        let col = t(&[&[1], &[2], &[3]]);
        assert_eq!(col.promotion().unwrap(), col);
        assert_eq!(t(&[&[1, 2], &[3, 4]]).promotion().unwrap(), t(&[&[1, 3], &[2, 4]]));
        for tab in syt_enumerate(3, 4).unwrap() {
            let mut cur = tab.clone();
            for _ in 0..12 {
                cur = cur.promotion().unwrap();
            }
            assert_eq!(cur, tab);
        }
    }

    #[test]
    fn promotion_matches_bender_knuth() {
        for (r, k) in [(2, 3), (3, 3), (3, 4), (4, 2)] {
            for tab in syt_enumerate(r, k).unwrap() {
                assert_eq!(tab.promotion().unwrap(), bk_promotion(&tab));
            }
        }
    }

    #[test]
    fn evacuation_examples() {
        let sq = t(&[&[1, 2], &[3, 4]]);
        assert_eq!(sq.evacuation().unwrap(), sq);
        for r in 1..=4 {
            let col = Tableau::from_rows((1..=r).map(|v| vec![v]).collect()).unwrap();
            assert_eq!(col.evacuation().unwrap(), col);
        }
        for tab in syt_enumerate(3, 3).unwrap() {
            assert_eq!(tab.evacuation().unwrap().evacuation().unwrap(), tab);
        }
    }

    #[test]
    fn evacuation_is_rotate_and_complement_on_rectangles() {
        for (r, k) in [(2, 3), (3, 3), (3, 4)] {
            for tab in syt_enumerate(r, k).unwrap() {
                let n = tab.size() as u32;
                let mut rot: Vec<u32> = tab.entries.iter().rev().map(|&e| n + 1 - e).collect();
                let expect = Tableau { rows: r, cols: k, entries: std::mem::take(&mut rot) };
                assert_eq!(tab.evacuation().unwrap(), expect);
            }
        }
    }

    #[test]
    fn transpose_and_words() {
        for tab in syt_enumerate(3, 4).unwrap() {
            assert_eq!(tab.transpose().transpose(), tab);
            assert_eq!(tab.promotion().unwrap().transpose(), tab.transpose().promotion().unwrap());
            let w = tab.yamanouchi_word();
            assert_eq!(Tableau::from_yamanouchi_word(&w, 3).unwrap(), tab);
        }
        let sup = t(&[&[1, 2, 3, 4], &[5, 6, 7, 8], &[9, 10, 11, 12]]);
        let w: String = sup.yamanouchi_word().iter().map(|d| d.to_string()).collect();
        assert_eq!(w, "111122223333");
        assert_eq!(t(&[&[1, 2], &[3, 4]]).descent_set(), BTreeSet::from([2]));
    }

    #[test]
    fn non_standard_rejected() {
        let bad = t(&[&[1, 1], &[2, 3]]);
        assert!(bad.is_semistandard());
        assert!(matches!(bad.promotion(), Err(Error::NotStandard)));
        assert!(matches!(bad.evacuation(), Err(Error::NotStandard)));
        assert!(Tableau::from_rows(vec![vec![1, 2], vec![3]]).is_err());
    }

    #[test]
    fn semistandard_word_repeats_rows() {
        let s = t(&[&[1, 1], &[2, 3]]);
        assert_eq!(s.yamanouchi_word(), vec![1, 1, 2, 2]);
    }
}
