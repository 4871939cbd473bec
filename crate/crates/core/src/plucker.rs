//! Laurent polynomials in Plücker symbols, evaluation at matrices, and the
//! twist of a matrix.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg;
use crate::subsets::{k_subsets, KSet};
use crate::{Error, Result, Q};

/// A Laurent monomial `prod_I Δ_I^{e_I}`; factors sorted, exponents non-zero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<(KSet, i32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(s: KSet) -> Monomial {
        Monomial(vec![(s, 1)])
    }

    pub fn from_powers<I: IntoIterator<Item = (KSet, i32)>>(powers: I) -> Monomial {
        let mut acc: BTreeMap<KSet, i32> = BTreeMap::new();
        for (s, e) in powers {
            *acc.entry(s).or_insert(0) += e;
        }
        Monomial(acc.into_iter().filter(|&(_, e)| e != 0).collect())
    }

    /// Product of the given factors (with repetition).
    pub fn product(factors: &[KSet]) -> Monomial {
        Monomial::from_powers(factors.iter().map(|&s| (s, 1)))
    }

    pub fn powers(&self) -> &[(KSet, i32)] {
        &self.0
    }

    pub fn exponent(&self, s: KSet) -> i32 {
        self.0.iter().find(|(t, _)| *t == s).map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_powers(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn pow(&self, p: i32) -> Monomial {
        Monomial::from_powers(self.0.iter().map(|&(s, e)| (s, e * p)))
    }

    pub fn is_polynomial(&self) -> bool {
        self.0.iter().all(|&(_, e)| e > 0)
    }

    /// Total number of factors counted with sign.
    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&(_, e)| e as i64).sum()
    }

    /// `sum_I e_I δ^I`, a vector indexed by `1..=n`.
    pub fn multidegree(&self, n: usize) -> Vec<i64> {
        let mut d = vec![0i64; n];
        for &(s, e) in &self.0 {
            for i in s.elems() {
                d[i - 1] += e as i64;
            }
        }
        d
    }

    /// Factors listed with repetition; `None` for a non-polynomial monomial.
    pub fn factors(&self) -> Option<Vec<KSet>> {
        if !self.is_polynomial() {
            return None;
        }
        let mut out = Vec::new();
        for &(s, e) in &self.0 {
            for _ in 0..e {
                out.push(s);
            }
        }
        Some(out)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, e)| if *e == 1 { format!("D[{s}]") } else { format!("D[{s}]^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Exact-rational Laurent polynomial in the symbols `Δ_I`, `|I| = k`, `I ⊆ [n]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PluckerPoly {
    k: usize,
    n: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl PluckerPoly {
    pub fn zero(k: usize, n: usize) -> PluckerPoly {
        PluckerPoly { k, n, terms: BTreeMap::new() }
    }

    pub fn constant(k: usize, n: usize, c: Q) -> PluckerPoly {
        let mut p = PluckerPoly::zero(k, n);
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn var(k: usize, n: usize, s: KSet) -> PluckerPoly {
        PluckerPoly::monomial(k, n, Monomial::var(s), Q::one())
    }

    pub fn monomial(k: usize, n: usize, m: Monomial, c: Q) -> PluckerPoly {
        let mut p = PluckerPoly::zero(k, n);
        p.add_term(m, c);
        p
    }

    /// Build from explicit terms, checking every index set.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(k: usize, n: usize, terms: I) -> Result<PluckerPoly> {
        let mut p = PluckerPoly::zero(k, n);
        for (m, c) in terms {
            for &(s, _) in m.powers() {
                if s.len() != k || s.max_elem() > n {
                    return Err(Error::SizeMismatch(format!("Δ_{{{s}}} is not a {k}-subset of [{n}]")));
                }
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &PluckerPoly) -> PluckerPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PluckerPoly) -> PluckerPoly {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> PluckerPoly {
        let mut out = PluckerPoly::zero(self.k, self.n);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &PluckerPoly) -> PluckerPoly {
        let mut out = PluckerPoly::zero(self.k, self.n.max(other.n));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(Monomial::is_polynomial)
    }

    /// Common multidegree of all terms, if homogeneous.
    pub fn multidegree(&self) -> Option<Vec<i64>> {
        let mut it = self.terms.keys().map(|m| m.multidegree(self.n));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Exact value at a Plücker vector.
    pub fn evaluate_vector(&self, pv: &PluckerVector) -> Result<Q> {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for &(s, e) in m.powers() {
                let x = pv.get(s);
                if x.is_zero() {
                    if e < 0 {
                        return Err(Error::PoleAtPoint(s.to_string()));
                    }
                    v = Q::zero();
                    break;
                }
                v *= Pow::pow(x, e);
            }
            total += v;
        }
        Ok(total)
    }

    /// Exact value at a matrix point.
    pub fn evaluate(&self, m: &MatrixPoint) -> Result<Q> {
        self.evaluate_vector(&m.plucker_vector())
    }

    /// Value at the coordinate tensor `E_S` given as a word: `Δ_I(E_S)` is the
    /// sign of the permutation read off the positions `I`, or 0. Only
    /// meaningful for polynomials.
    pub fn evaluate_word(&self, word: &[u8]) -> Result<i64> {
        let mut total = 0i64;
        for (m, c) in &self.terms {
            if !m.is_polynomial() {
                return Err(Error::Unsupported("evaluating a Laurent term on E_S".into()));
            }
            let mut v = 1i64;
            for &(s, e) in m.powers() {
                let d = word_minor(word, s);
                if d == 0 {
                    v = 0;
                    break;
                }
                if e % 2 == 1 {
                    v *= d;
                }
            }
            if v != 0 {
                if !c.is_integer() {
                    return Err(Error::Unsupported("non-integral coefficient on E_S".into()));
                }
                let ci: i64 = c
                    .to_integer()
                    .try_into()
                    .map_err(|_| Error::Internal("coefficient overflow".into()))?;
                total += v * ci;
            }
        }
        Ok(total)
    }
}

/// `Δ_I(E_S)` where row `word[i-1]` of column `i` is the only non-zero entry.
pub fn word_minor(word: &[u8], s: KSet) -> i64 {
    let labels: Vec<u8> = s.elems().iter().map(|&i| word[i - 1]).collect();
    let mut seen = 0u32;
    for &l in &labels {
        if seen & (1 << l) != 0 {
            return 0;
        }
        seen |= 1 << l;
    }
    if labels.iter().any(|&l| l as usize > labels.len() || l == 0) {
        return 0;
    }
    crate::subsets::inversion_sign(&labels)
}

impl fmt::Display for PluckerPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let sign = if c.is_negative() { "-" } else { "+" };
            let a = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

/// JSON term: `{"coeff": "p/q", "mono": {"1,2,4": 1}}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyTermJson {
    pub coeff: String,
    pub mono: BTreeMap<String, i32>,
}

impl PluckerPoly {
    pub fn to_json_terms(&self) -> Vec<PolyTermJson> {
        self.terms
            .iter()
            .map(|(m, c)| PolyTermJson {
                coeff: c.to_string(),
                mono: m.powers().iter().map(|(s, e)| (s.to_string(), *e)).collect(),
            })
            .collect()
    }

    /// Parse JSON terms. `k` and `n` are inferred from the index sets when
    /// not given.
    pub fn from_json_terms(terms: &[PolyTermJson], k: Option<usize>, n: Option<usize>) -> Result<PluckerPoly> {
        let mut parsed = Vec::new();
        let mut k_seen = None;
        let mut n_seen = 0;
        for t in terms {
            let c = crate::subsets::parse_rational(&t.coeff)?;
            let mut powers = Vec::new();
            for (key, &e) in &t.mono {
                let s: KSet = key.parse()?;
                match k_seen {
                    None => k_seen = Some(s.len()),
                    Some(kk) if kk != s.len() => {
                        return Err(Error::SizeMismatch(format!("mixed index set sizes at {key:?}")))
                    }
                    _ => {}
                }
                n_seen = n_seen.max(s.max_elem());
                powers.push((s, e));
            }
            parsed.push((Monomial::from_powers(powers), c));
        }
        let k = k.or(k_seen).ok_or_else(|| Error::Parse("cannot infer k from a constant polynomial".into()))?;
        let n = n.unwrap_or(n_seen);
        PluckerPoly::from_terms(k, n, parsed)
    }
}

/// Values of all Plücker coordinates of a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PluckerVector {
    k: usize,
    n: usize,
    values: HashMap<KSet, Q>,
}

impl PluckerVector {
    pub fn new(k: usize, n: usize, values: HashMap<KSet, Q>) -> PluckerVector {
        PluckerVector { k, n, values }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: KSet) -> Q {
        self.values.get(&s).cloned().unwrap_or_else(Q::zero)
    }

    /// Entries in lexicographic order of index sets.
    pub fn sorted(&self) -> Vec<(KSet, Q)> {
        k_subsets(self.n, self.k).into_iter().map(|s| (s, self.get(s))).collect()
    }

    /// Largest absolute residual-free check of every three-term Plücker
    /// relation `Δ_{Sac}Δ_{Sbd} = Δ_{Sab}Δ_{Scd} + Δ_{Sad}Δ_{Sbc}`,
    /// `a<b<c<d` outside the `(k-2)`-set `S`. Returns the number of relations
    /// checked, or the first failing one.
    pub fn check_three_term_relations(&self) -> std::result::Result<usize, String> {
        let k = self.k;
        if k < 2 || self.n < 4 {
            return Ok(0);
        }
        let mut count = 0;
        for base in k_subsets(self.n, k - 2) {
            let rest: Vec<usize> = (1..=self.n).filter(|&i| !base.contains(i)).collect();
            for a in 0..rest.len() {
                for b in a + 1..rest.len() {
                    for c in b + 1..rest.len() {
                        for d in c + 1..rest.len() {
                            let (a, b, c, d) = (rest[a], rest[b], rest[c], rest[d]);
                            let p = |x: usize, y: usize| {
                                let mut s = base;
                                s.insert(x);
                                s.insert(y);
                                self.get(s) * Q::from_integer(plucker_sign(base, x, y).into())
                            };
                            let lhs = p(a, c) * p(b, d);
                            let rhs = p(a, b) * p(c, d) + p(a, d) * p(b, c);
                            if lhs != rhs {
                                return Err(format!("S={{{base}}} a,b,c,d={a},{b},{c},{d}"));
                            }
                            count += 1;
                        }
                    }
                }
            }
        }
        Ok(count)
    }
}

/// Sign relating the ordered tuple `(S..., x, y)` to the sorted set.
fn plucker_sign(base: KSet, x: usize, y: usize) -> i64 {
    let mut w: Vec<usize> = base.elems();
    w.push(x);
    w.push(y);
    crate::subsets::inversion_sign(&w)
}

/// A full-rank `k x n` exact rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPoint {
    rows: Vec<Vec<Q>>,
}

impl MatrixPoint {
    pub fn new(rows: Vec<Vec<Q>>) -> Result<MatrixPoint> {
        let k = rows.len();
        if k == 0 || rows[0].is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
            return Err(Error::SizeMismatch("matrix must be a non-empty rectangle".into()));
        }
        let n = rows[0].len();
        if k > n {
            return Err(Error::SizeMismatch(format!("{k}x{n} matrix has k > n")));
        }
        let r = linalg::rank(&rows);
        if r != k {
            return Err(Error::RankLoss(format!("rank {r} < {k}")));
        }
        Ok(MatrixPoint { rows })
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    /// Column `i` (1-based).
    pub fn column(&self, i: usize) -> Vec<Q> {
        self.rows.iter().map(|r| r[i - 1].clone()).collect()
    }

    pub fn minor(&self, s: KSet) -> Q {
        let cols = s.elems();
        let sub: Vec<Vec<Q>> = self
            .rows
            .iter()
            .map(|r| cols.iter().map(|&c| r[c - 1].clone()).collect())
            .collect();
        linalg::det(&sub)
    }

    pub fn plucker_vector(&self) -> PluckerVector {
        let (k, n) = (self.k(), self.n());
        let values = k_subsets(n, k).into_iter().map(|s| (s, self.minor(s))).collect();
        PluckerVector::new(k, n, values)
    }

    /// `g * M` for a `k x k` matrix `g`.
    pub fn left_multiply(&self, g: &[Vec<Q>]) -> Result<MatrixPoint> {
        let (k, n) = (self.k(), self.n());
        if g.len() != k || g.iter().any(|r| r.len() != k) {
            return Err(Error::SizeMismatch("g must be k x k".into()));
        }
        let rows = (0..k)
            .map(|i| {
                (0..n)
                    .map(|j| (0..k).fold(Q::zero(), |acc, t| acc + &g[i][t] * &self.rows[t][j]))
                    .collect()
            })
            .collect();
        MatrixPoint::new(rows)
    }

    /// A matrix whose maximal minors are exactly the given Plücker vector,
    /// which must satisfy the Plücker relations and have `Δ_{I0} != 0` for
    /// some `I0`.
    pub fn from_plucker_vector(pv: &PluckerVector) -> Result<MatrixPoint> {
        let (k, n) = (pv.k(), pv.n());
        let base = k_subsets(n, k)
            .into_iter()
            .find(|&s| !pv.get(s).is_zero())
            .ok_or_else(|| Error::RankLoss("all Plücker coordinates vanish".into()))?;
        let d0 = pv.get(base);
        let cols0 = base.elems();
        let mut rows = vec![vec![Q::zero(); n]; k];
        for (t, &it) in cols0.iter().enumerate() {
            for j in 1..=n {
                // Column j written in the basis of columns I0: entry t equals the
                // minor with column it replaced by j, ordered as in I0.
                let mut tuple = cols0.clone();
                tuple[t] = j;
                let val = if tuple.iter().collect::<std::collections::BTreeSet<_>>().len() < k {
                    if j == it {
                        d0.clone()
                    } else {
                        Q::zero()
                    }
                } else {
                    let s = KSet::from_elems(&tuple);
                    pv.get(s) * Q::from_integer(crate::subsets::inversion_sign(&tuple).into())
                };
                rows[t][j - 1] = val / &d0;
            }
        }
        for v in rows[0].iter_mut() {
            *v *= &d0;
        }
        MatrixPoint::new(rows)
    }
}

/// The vector `v` with `v . w = det(v_1, ..., v_{k-1}, w)` for all `w`.
pub fn cross_product(vs: &[Vec<Q>]) -> Result<Vec<Q>> {
    let k = vs.len() + 1;
    if k < 2 || vs.iter().any(|v| v.len() != k) {
        return Err(Error::SizeMismatch(format!("need {} vectors of length {k}", k - 1)));
    }
    let mut out = Vec::with_capacity(k);
    for t in 0..k {
        let m: Vec<Vec<Q>> = (0..k)
            .map(|row| {
                let mut r: Vec<Q> = vs.iter().map(|v| v[row].clone()).collect();
                r.push(if row == t { Q::one() } else { Q::zero() });
                r
            })
            .collect();
        out.push(linalg::det(&m));
    }
    Ok(out)
}

/// The twist of `M`: column `i` is `v_{i+1} x ... x v_{i+k-1}` when
/// `i <= n-k+1`, and `(-1)^{k-n+i-1} v_1 x ... x v_{i-n+k-1} x v_{i+1} x ... x v_n`
/// otherwise.
pub fn twist_matrix(m: &MatrixPoint) -> Result<MatrixPoint> {
    let (k, n) = (m.k(), m.n());
    let cols: Vec<Vec<Q>> = (1..=n).map(|i| m.column(i)).collect();
    let mut tcols = Vec::with_capacity(n);
    for i in 1..=n {
        let (idx, sign): (Vec<usize>, i64) = if i + k <= n + 1 {
            ((i + 1..i + k).collect(), 1)
        } else {
            let idx = (1..=i + k - n - 1).chain(i + 1..=n).collect();
            let e = (k + i) as i64 - n as i64 - 1;
            (idx, if e % 2 == 0 { 1 } else { -1 })
        };
        let vs: Vec<Vec<Q>> = idx.iter().map(|&j| cols[j - 1].clone()).collect();
        let mut c = cross_product(&vs)?;
        if sign < 0 {
            for x in c.iter_mut() {
                *x = -x.clone();
            }
        }
        tcols.push(c);
    }
    let rows: Vec<Vec<Q>> = (0..k).map(|r| tcols.iter().map(|c| c[r].clone()).collect()).collect();
    match MatrixPoint::new(rows) {
        Err(Error::RankLoss(msg)) => Err(Error::RankLoss(format!("twist output: {msg}"))),
        other => other,
    }
}

/// The twist written with cyclic indices and the signs
/// `ε'_i = (-1)^{(k-1)(n-i+1)}` for `i >= n-k+2`.
pub fn twist_matrix_cyclic(m: &MatrixPoint) -> Result<MatrixPoint> {
    let (k, n) = (m.k(), m.n());
    let mut tcols = Vec::with_capacity(n);
    for i in 1..=n {
        let vs: Vec<Vec<Q>> = (1..k).map(|s| m.column((i + s - 1) % n + 1)).collect();
        let mut c = cross_product(&vs)?;
        if i + k >= n + 2 && ((k - 1) * (n - i + 1)) % 2 == 1 {
            for x in c.iter_mut() {
                *x = -x.clone();
            }
        }
        tcols.push(c);
    }
    let rows: Vec<Vec<Q>> = (0..k).map(|r| tcols.iter().map(|c| c[r].clone()).collect()).collect();
    MatrixPoint::new(rows)
}

pub fn eps_prime(k: usize, n: usize, i: usize) -> i64 {
    if i + k >= n + 2 && ((k - 1) * (n - i + 1)) % 2 == 1 {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn q(v: i64) -> Q {
        Q::from_integer(v.into())
    }

    fn s(x: &str) -> KSet {
        x.parse().unwrap()
    }

    #[test]
    fn identity_block_minor() {
        let mut rng = Rng::new(3);
        let mut m = rng.matrix(3, 6, 5);
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = if i == j { q(1) } else { q(0) };
            }
        }
        let m = MatrixPoint::new(m).unwrap();
        assert_eq!(PluckerPoly::var(3, 6, s("1,2,3")).evaluate(&m).unwrap(), q(1));
    }

    #[test]
    fn three_term_relation_residual() {
        let mut rng = Rng::new(7);
        for _ in 0..10 {
            let m = rng.generic_point(2, 4, 9);
            let d = |x: &str| PluckerPoly::var(2, 4, s(x));
            let f = d("1,3").mul(&d("2,4")).sub(&d("1,2").mul(&d("3,4"))).sub(&d("1,4").mul(&d("2,3")));
            assert!(f.evaluate(&m).unwrap().is_zero());
            assert!(m.plucker_vector().check_three_term_relations().is_ok());
        }
    }

    #[test]
    fn pole_detected() {
        let m = MatrixPoint::new(vec![vec![q(1), q(0), q(1)], vec![q(0), q(1), q(0)]]).unwrap();
        let p = PluckerPoly::monomial(2, 3, Monomial::var(s("1,3")).pow(-1), q(1));
        assert!(matches!(p.evaluate(&m), Err(Error::PoleAtPoint(_))));
    }

    #[test]
    fn cross_products() {
        let e = |i: usize| (0..3).map(|j| if i == j { q(1) } else { q(0) }).collect::<Vec<_>>();
        assert_eq!(cross_product(&[e(0), e(1)]).unwrap(), e(2));
        assert_eq!(cross_product(&[vec![q(2), q(5)]]).unwrap(), vec![q(-5), q(2)]);
        assert!(cross_product(&[vec![q(1), q(2)], vec![q(1), q(2)]]).is_err());
        let mut rng = Rng::new(11);
        for _ in 0..10 {
            let m = rng.matrix(4, 4, 7);
            let vs: Vec<Vec<Q>> = (0..3).map(|c| (0..4).map(|r| m[r][c].clone()).collect()).collect();
            let w: Vec<Q> = (0..4).map(|r| m[r][3].clone()).collect();
            let v = cross_product(&vs).unwrap();
            let dot = v.iter().zip(&w).fold(q(0), |a, (x, y)| a + x * y);
            assert_eq!(dot, linalg::det(&m));
        }
    }

    #[test]
    fn twist_first_column_for_gr24() {
        let mut rng = Rng::new(5);
        let m = rng.generic_point(2, 4, 9);
        let t = twist_matrix(&m).unwrap();
        let v2 = m.column(2);
        assert_eq!(t.column(1), vec![-v2[1].clone(), v2[0].clone()]);
    }

    #[test]
    fn eps_table() {
        assert_eq!(eps_prime(3, 6, 5), 1);
        assert_eq!(eps_prime(3, 6, 6), 1);
        assert_eq!(eps_prime(2, 5, 5), -1);
    }

    #[test]
    fn explicit_and_cyclic_twists_agree() {
        let mut rng = Rng::new(17);
        for (k, n) in [(2, 4), (2, 5), (3, 6), (3, 7), (4, 8), (3, 12)] {
            let m = rng.generic_point(k, n, 9);
            assert_eq!(twist_matrix(&m).unwrap(), twist_matrix_cyclic(&m).unwrap(), "k={k} n={n}");
        }
    }

    #[test]
    fn twist_invariant_under_sl_k() {
        let mut rng = Rng::new(23);
        for (k, n) in [(2, 4), (3, 6)] {
            let m = rng.generic_point(k, n, 9);
            let g = rng.sl_matrix(k, 5);
            let a = twist_matrix(&m).unwrap().plucker_vector();
            let b = twist_matrix(&m.left_multiply(&g).unwrap()).unwrap().plucker_vector();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn matrix_from_plucker_vector() {
        let mut rng = Rng::new(29);
        for (k, n) in [(2, 4), (3, 6), (3, 7)] {
            let m = rng.generic_point(k, n, 9);
            let pv = m.plucker_vector();
            assert_eq!(MatrixPoint::from_plucker_vector(&pv).unwrap().plucker_vector(), pv);
        }
    }

    #[test]
    fn json_roundtrip() {
        let p = PluckerPoly::var(3, 6, s("1,2,4"))
            .mul(&PluckerPoly::var(3, 6, s("3,5,6")))
            .sub(&PluckerPoly::constant(3, 6, Q::new(1.into(), 2.into())));
        let j = serde_json::to_string(&p.to_json_terms()).unwrap();
        let back: Vec<PolyTermJson> = serde_json::from_str(&j).unwrap();
        assert_eq!(PluckerPoly::from_json_terms(&back, None, Some(6)).unwrap(), p);
    }

    #[test]
    fn word_evaluation() {
        let p = PluckerPoly::var(3, 6, s("1,2,3")).mul(&PluckerPoly::var(3, 6, s("4,5,6")));
        assert_eq!(p.evaluate_word(&[1, 2, 3, 1, 2, 3]).unwrap(), 1);
        assert_eq!(p.evaluate_word(&[2, 1, 3, 1, 2, 3]).unwrap(), -1);
        assert_eq!(p.evaluate_word(&[1, 1, 3, 2, 2, 3]).unwrap(), 0);
    }
}
