//! The pairing between web invariants and Plücker monomials, two engines
//! for expanding web invariants into Plücker monomials, duality matrices,
//! and twist expansions through dimer covers.

use std::collections::{BTreeMap, HashSet};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::dimers::{enumerate_dimer_covers_with, face_weight_monomial, weblike_subgraph};
use crate::linalg::{is_lower_unitriangular, solve_general, solve_lower_triangular};
use crate::par::Exec;
use crate::plabic::PlabicGraph;
use crate::plucker::{word_minor, Monomial, PluckerPoly};
use crate::rng::Rng;
use crate::subsets::{balanced_words, binomial, inversion_sign, KSet};
use crate::tableaux::{syt_enumerate, Tableau};
use crate::webs::{label_set, BoundaryCondition, Web, WebCombination, FP_ORIENTATION};
use crate::{Color, Error, Result, Q};

/// Grids larger than this are sampled instead of checked exhaustively.
pub const FULL_GRID_LIMIT: u128 = 20_000;
/// Number of sampled grid points for large grids (on top of the solve rows).
pub const GRID_SAMPLE: usize = 3_000;
const GRID_SEED: u64 = 0x5eed_0001;

/// An ordered list of Plücker indices `(I_1, ..., I_r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialList(pub Vec<KSet>);

impl MonomialList {
    pub fn parse(s: &str) -> Result<MonomialList> {
        let sets = s
            .split(';')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(str::parse::<KSet>)
            .collect::<Result<Vec<_>>>()?;
        if sets.is_empty() {
            return Err(Error::Parse("empty monomial list".into()));
        }
        Ok(MonomialList(sets))
    }

    /// `S(i) = { j : i in I_j }`.
    pub fn dual_condition(&self, n: usize) -> BoundaryCondition {
        (1..=n)
            .map(|i| {
                let js: Vec<usize> = (1..=self.0.len()).filter(|&j| self.0[j - 1].contains(i)).collect();
                label_set(&js)
            })
            .collect()
    }

    pub fn multidegree(&self, n: usize) -> Vec<usize> {
        (1..=n).map(|i| self.0.iter().filter(|s| s.contains(i)).count()).collect()
    }
}

/// `<W, Delta_{I_1} ... Delta_{I_r}> = a(S; W)` with `S` dual to the list.
pub fn pair_with_monomial(w: &Web, list: &MonomialList) -> Result<i64> {
    if list.0.len() != w.r() {
        return Err(Error::DegreeMismatch(format!("{} factors against an SL_{} web", list.0.len(), w.r())));
    }
    if list.0.iter().any(|s| s.max_elem() > w.n()) {
        return Err(Error::DegreeMismatch("index exceeds the boundary size".into()));
    }
    if list.multidegree(w.n()) != w.degree() {
        return Err(Error::DegreeMismatch(format!(
            "monomial degree {:?} differs from web degree {:?}",
            list.multidegree(w.n()),
            w.degree()
        )));
    }
    w.count_labelings(&list.dual_condition(w.n()))
}

/// Bilinear extension of [`pair_with_monomial`] to a Plücker polynomial.
pub fn pair_with_poly(w: &Web, f: &PluckerPoly) -> Result<Q> {
    let mut total = Q::zero();
    for (m, c) in f.terms() {
        let factors = m.factors().ok_or_else(|| Error::DegreeMismatch("Laurent term in pairing".into()))?;
        let a = pair_with_monomial(w, &MonomialList(factors))?;
        if a != 0 {
            total += c * Q::from_integer(a.into());
        }
    }
    Ok(total)
}

pub fn pair_combination_with_poly(c: &WebCombination, f: &PluckerPoly) -> Result<Q> {
    let mut total = Q::zero();
    for (coeff, w) in c.terms() {
        total += coeff * pair_with_poly(w, f)?;
    }
    Ok(total)
}

/// Which sign convention turns a standard web into a function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Convention {
    /// `W(E_S) = sign(S) a(S; W)`.
    Web,
    /// The signed state sum with clockwise cyclic orientation (SL_3 only).
    Fp,
}

pub fn invariant_at_word(w: &Web, conv: Convention, word: &[u8]) -> Result<i64> {
    match conv {
        Convention::Web => w.evaluate_word(word),
        Convention::Fp => w.evaluate_fp_word(word),
    }
}

/// Exact value of a polynomial at `E_S`.
pub fn poly_at_word(f: &PluckerPoly, word: &[u8]) -> Result<Q> {
    let mut total = Q::zero();
    for (m, c) in f.terms() {
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
            total += c * Q::from_integer(v.into());
        }
    }
    Ok(total)
}

/// How much of the `E_S` grid an expansion was checked on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GridCertificate {
    pub grid_size: u128,
    pub checked: usize,
    pub full: bool,
    pub mismatches: usize,
}

impl GridCertificate {
    pub fn ok(&self) -> bool {
        self.mismatches == 0
    }
}

#[derive(Clone, Debug)]
pub struct Expansion {
    pub poly: PluckerPoly,
    pub certificate: GridCertificate,
}

/// Column-reading standard monomials of degree `(1^{k r})` on `Gr(k, kr)`,
/// paired with the tableau whose Yamanouchi word is their leading point.
pub fn standard_monomials(k: usize, r: usize) -> Result<Vec<(Tableau, Monomial)>> {
    Ok(syt_enumerate(k, r)?
        .into_iter()
        .map(|t| {
            let cols: Vec<KSet> =
                (0..r).map(|c| KSet::from_elems(&(0..k).map(|row| t.get(row, c) as usize).collect::<Vec<_>>())).collect();
            (t, Monomial::product(&cols))
        })
        .collect())
}

fn grid_size(k: usize, r: usize) -> u128 {
    let mut size = 1u128;
    let mut left = (k * r) as u64;
    for _ in 0..k {
        size *= binomial(left, r as u64);
        left -= r as u64;
    }
    size
}

fn random_balanced_word(rng: &mut Rng, k: usize, r: usize) -> Vec<u8> {
    let mut w: Vec<u8> = (1..=k as u8).flat_map(|l| std::iter::repeat_n(l, r)).collect();
    for i in (1..w.len()).rev() {
        let j = rng.below(i + 1);
        w.swap(i, j);
    }
    w
}

/// Grid points used to certify a degree `(1^{kr})` identity: every balanced
/// word when the grid is small, otherwise a seeded sample.
pub fn certificate_points(k: usize, r: usize) -> (Vec<Vec<u8>>, bool) {
    let size = grid_size(k, r);
    if size <= FULL_GRID_LIMIT {
        (balanced_words(k, r), true)
    } else {
        let mut rng = Rng::new(GRID_SEED);
        let mut seen = HashSet::new();
        let mut pts = Vec::new();
        while pts.len() < GRID_SAMPLE {
            let w = random_balanced_word(&mut rng, k, r);
            if seen.insert(w.clone()) {
                pts.push(w);
            }
        }
        (pts, false)
    }
}

/// Check `f(E_S) = value(S)` on the certificate grid.
pub fn certify<F>(f: &PluckerPoly, k: usize, r: usize, value: F, exec: Exec) -> Result<GridCertificate>
where
    F: Fn(&[u8]) -> Result<i64> + Sync,
{
    let (pts, full) = certificate_points(k, r);
    let results = exec.map(&pts, |w| -> Result<bool> { Ok(poly_at_word(f, w)? == Q::from_integer(value(w)?.into())) });
    let mut mismatches = 0;
    for r in results {
        if !r? {
            mismatches += 1;
        }
    }
    Ok(GridCertificate { grid_size: grid_size(k, r), checked: pts.len(), full, mismatches })
}

/// Solve for coefficients on the standard monomials reproducing `value` on
/// the Yamanouchi words, then certify on the grid.
pub fn expand_values<F>(k: usize, n: usize, value: F, exec: Exec) -> Result<Expansion>
where
    F: Fn(&[u8]) -> Result<i64> + Sync,
{
    if k == 0 || !n.is_multiple_of(k) {
        return Err(Error::DegreeMismatch(format!("n = {n} is not a multiple of k = {k}")));
    }
    let r = n / k;
    let basis = standard_monomials(k, r)?;
    let words: Vec<Vec<u8>> = basis.iter().map(|(t, _)| t.yamanouchi_word()).collect();
    let rhs: Vec<Q> = exec
        .map(&words, |w| value(w).map(|v| Q::from_integer(v.into())))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let polys: Vec<PluckerPoly> =
        basis.iter().map(|(_, m)| PluckerPoly::monomial(k, n, m.clone(), Q::one())).collect();
    let matrix: Vec<Vec<Q>> = exec.map(&words, |w| {
        polys.iter().map(|p| poly_at_word(p, w).expect("polynomial")).collect::<Vec<Q>>()
    });
    let coeffs = if is_lower_unitriangular(&matrix) {
        solve_lower_triangular(&matrix, &rhs)
    } else {
        solve_general(&matrix, &rhs).map(|(x, _)| x)
    }
    .ok_or_else(|| Error::Internal("standard monomial system is inconsistent".into()))?;
    let poly = PluckerPoly::from_terms(k, n, basis.into_iter().map(|(_, m)| m).zip(coeffs))?;
    let certificate = certify(&poly, k, r, &value, exec)?;
    if !certificate.ok() {
        return Err(Error::Internal(format!("expansion fails on {} grid points", certificate.mismatches)));
    }
    Ok(Expansion { poly, certificate })
}

fn require_standard_full(w: &Web) -> Result<()> {
    if !w.is_standard() || w.degree().iter().any(|&d| d != 1) {
        return Err(Error::Unsupported("expansion needs a standard web of degree (1^n)".into()));
    }
    if !w.n().is_multiple_of(w.r()) {
        return Err(Error::DegreeMismatch(format!("n = {} is not a multiple of r = {}", w.n(), w.r())));
    }
    Ok(())
}

/// Plücker expansion of a standard web invariant by exact linear solve.
pub fn expand_linear(w: &Web, conv: Convention) -> Result<Expansion> {
    expand_linear_with(w, conv, Exec::default())
}

pub fn expand_linear_with(w: &Web, conv: Convention, exec: Exec) -> Result<Expansion> {
    require_standard_full(w)?;
    expand_values(w.r(), w.n(), |s| invariant_at_word(w, conv, s), exec)
}

// ---- wrench rewriting ----

/// A trivalent SL_3 tensor diagram as a perfect matching on ports. Port `i`
/// (`i < n`) is boundary vertex `i+1`; port `n + 3v + s` is slot `s` of
/// internal vertex `v`, slots in clockwise order.
#[derive(Clone, Debug)]
struct Diagram {
    n: usize,
    white: Vec<bool>,
    alive: Vec<bool>,
    partner: Vec<usize>,
}

impl Diagram {
    fn from_web(w: &Web) -> Result<Diagram> {
        if w.r() != 3 || !w.is_standard() {
            return Err(Error::Unsupported("the wrench rewriter needs a standard SL_3 diagram".into()));
        }
        let n = w.n();
        let ni = w.num_vertices() - n;
        let mut partner = vec![usize::MAX; n + 3 * ni];
        let mut port_of = vec![[usize::MAX; 2]; w.edges().len()];
        for v in 0..w.num_vertices() {
            let rot = w.rotation(v);
            if v < n {
                for &e in rot {
                    let side = usize::from(w.edges()[e].ends[0] != v);
                    port_of[e][side] = v;
                }
                continue;
            }
            if rot.len() != 3 || rot.iter().any(|&e| w.edges()[e].mult != 1) {
                return Err(Error::Unsupported("the wrench rewriter needs trivalent vertices with single edges".into()));
            }
            for (s, &e) in rot.iter().rev().enumerate() {
                let ends = w.edges()[e].ends;
                // A loop-free bipartite edge meets v at exactly one end.
                let side = usize::from(ends[0] != v);
                port_of[e][side] = n + 3 * (v - n) + s;
            }
        }
        for [a, b] in port_of {
            partner[a] = b;
            partner[b] = a;
        }
        let white = (n..w.num_vertices()).map(|v| w.color(v) == Color::White).collect();
        Ok(Diagram { n, white, alive: vec![true; ni], partner })
    }

    fn port(&self, v: usize, s: usize) -> usize {
        self.n + 3 * v + s
    }

    fn owner(&self, p: usize) -> Option<(usize, usize)> {
        (p >= self.n).then(|| ((p - self.n) / 3, (p - self.n) % 3))
    }

    fn site(&self, protected: &[usize]) -> Result<Option<(usize, usize, usize, usize)>> {
        let mut blocked = false;
        for b in 0..self.white.len() {
            if self.white[b] || !self.alive[b] {
                continue;
            }
            for sb in 0..3 {
                let (w, sw) = self.owner(self.partner[self.port(b, sb)]).expect("black meets white");
                if protected.contains(&w) {
                    blocked = true;
                    continue;
                }
                return Ok(Some((w, sw, b, sb)));
            }
        }
        if blocked {
            return Err(Error::Internal("every wrench site touches a protected vertex".into()));
        }
        Ok(None)
    }

    /// `eps_{ijk} eps_{ilm} = delta_jl delta_km - delta_jm delta_kl` on the
    /// edge from slot `sw` of white `w` to slot `sb` of black `b`.
    fn wrench(&self, w: usize, sw: usize, b: usize, sb: usize) -> [(Diagram, i64); 2] {
        let x = self.port(w, (sw + 1) % 3);
        let y = self.port(w, (sw + 2) % 3);
        let p = self.port(b, (sb + 1) % 3);
        let q = self.port(b, (sb + 2) % 3);
        let ends = [x, y, p, q];
        let resolve = |rule: [(usize, usize); 2], sign: i64| -> (Diagram, i64) {
            let mate = |z: usize| -> usize {
                rule.iter().find_map(|&(a, c)| if a == z { Some(c) } else if c == z { Some(a) } else { None }).unwrap()
            };
            let mut d = self.clone();
            d.alive[w] = false;
            d.alive[b] = false;
            let inside = |z: usize| ends.contains(&z);
            let mut visited: Vec<usize> = Vec::new();
            for &z in &ends {
                if visited.contains(&z) || inside(self.partner[z]) {
                    continue;
                }
                visited.push(z);
                let mut t = mate(z);
                visited.push(t);
                while inside(self.partner[t]) {
                    let u = self.partner[t];
                    visited.push(u);
                    t = mate(u);
                    visited.push(t);
                }
                let (a, c) = (self.partner[z], self.partner[t]);
                d.partner[a] = c;
                d.partner[c] = a;
            }
            let mut coeff = sign;
            for &z in &ends {
                if visited.contains(&z) {
                    continue;
                }
                let mut cur = z;
                loop {
                    visited.push(cur);
                    let t = mate(cur);
                    visited.push(t);
                    let u = self.partner[t];
                    if visited.contains(&u) {
                        break;
                    }
                    cur = u;
                }
                coeff *= 3;
            }
            (d, coeff)
        };
        [resolve([(x, p), (y, q)], 1), resolve([(x, q), (y, p)], -1)]
    }

    /// Signed claw product of a diagram with no internal black vertex.
    fn claws(&self) -> Result<(i64, Monomial)> {
        let mut sign = 1;
        let mut factors = Vec::new();
        for v in 0..self.white.len() {
            if !self.alive[v] {
                continue;
            }
            if !self.white[v] {
                return Err(Error::Internal("black vertex left after rewriting".into()));
            }
            let mut labels = Vec::with_capacity(3);
            for s in 0..3 {
                let p = self.partner[self.port(v, s)];
                if p >= self.n {
                    return Err(Error::Internal("white vertex not attached to the boundary".into()));
                }
                labels.push(p + 1);
            }
            sign *= FP_ORIENTATION * inversion_sign(&labels);
            factors.push(KSet::from_elems(&labels));
        }
        Ok((sign, Monomial::product(&factors)))
    }
}

/// Plücker expansion of the FP invariant by repeated wrench relations.
pub fn wrench_expand(w: &Web) -> Result<PluckerPoly> {
    wrench_run(w, &[])
}

/// As [`wrench_expand`] but never resolving the white vertex of the fork at
/// `(i, j)`, so that every output monomial has a factor containing `i, j`.
pub fn wrench_expand_fork_preserving(w: &Web, i: usize, j: usize) -> Result<PluckerPoly> {
    if !w.has_fork(i, j) {
        return Err(Error::InvalidWeb(format!("no fork at ({i}, {j})")));
    }
    let v = w.other_end(w.boundary_edges(i)[0], i - 1);
    wrench_run(w, &[v - w.n()])
}

fn wrench_run(w: &Web, protected: &[usize]) -> Result<PluckerPoly> {
    let start = Diagram::from_web(w)?;
    let bound = start.white.iter().filter(|&&c| !c).count() + 1;
    let mut stack = vec![(start, 1i64, 0usize)];
    let mut acc: BTreeMap<Monomial, i64> = BTreeMap::new();
    while let Some((d, c, depth)) = stack.pop() {
        if depth > bound {
            return Err(Error::Internal("wrench rewriting did not terminate".into()));
        }
        match d.site(protected)? {
            Some((wv, sw, b, sb)) => {
                for (child, s) in d.wrench(wv, sw, b, sb) {
                    stack.push((child, c * s, depth + 1));
                }
            }
            None => {
                let (s, m) = d.claws()?;
                *acc.entry(m).or_insert(0) += c * s;
            }
        }
    }
    PluckerPoly::from_terms(3, w.n(), acc.into_iter().map(|(m, c)| (m, Q::from_integer(c.into()))))
}

/// Every monomial has a factor `Delta_I` with `i, j in I`.
pub fn fork_preserved(f: &PluckerPoly, i: usize, j: usize) -> bool {
    f.terms().all(|(m, _)| m.powers().iter().any(|&(s, _)| s.contains(i) && s.contains(j)))
}

/// Some `(i, j)` is a fork of both diagrams.
pub fn shared_fork(w: &Web, x: &Web) -> Option<(usize, usize)> {
    if w.n() != x.n() {
        return None;
    }
    let n = w.n();
    (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).find(|&(i, j)| w.has_fork(i, j) && x.has_fork(i, j))
}

/// `true` when the pairing is forced to vanish by a shared fork.
pub fn fork_prefilter(w: &Web, x: &Web) -> bool {
    shared_fork(w, x).is_some()
}

/// Expansion engine used for the right-hand argument of a pairing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Engine {
    Linear,
    Wrench,
}

/// Plücker polynomial representing the invariant of `x` (web convention).
pub fn web_polynomial(x: &Web, engine: Engine) -> Result<PluckerPoly> {
    match engine {
        Engine::Linear => Ok(expand_linear(x, Convention::Web)?.poly),
        Engine::Wrench => {
            let (_, _, sign) = x.word_and_sign()?;
            Ok(wrench_expand(x)?.scale(&Q::from_integer(sign.into())))
        }
    }
}

/// `<W, X>` through a Plücker expansion of `X`.
pub fn pair_webs(w: &Web, x: &Web) -> Result<Q> {
    pair_with_poly(w, &web_polynomial(x, Engine::Linear)?)
}

pub fn pair_webs_with(w: &Web, x: &Web, engine: Engine) -> Result<Q> {
    pair_with_poly(w, &web_polynomial(x, engine)?)
}

/// Bilinear extension to explicit combinations on both sides.
pub fn pair_combinations(w: &WebCombination, x: &WebCombination) -> Result<Q> {
    let mut f: Option<PluckerPoly> = None;
    for (c, web) in x.terms() {
        let p = web_polynomial(web, Engine::Linear)?.scale(c);
        f = Some(match f {
            Some(acc) => acc.add(&p),
            None => p,
        });
    }
    match f {
        Some(f) => pair_combination_with_poly(w, &f),
        None => Ok(Q::zero()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DualityReport {
    pub rows: usize,
    pub cols: usize,
    /// Entries as strings `p/q`, row-major.
    pub matrix: Vec<Vec<String>>,
    /// `(i, j)` with `T(A_i)` the transpose of `T(B_j)`.
    pub matching: Vec<(usize, usize)>,
    pub matched_entries: Vec<i64>,
    pub matched_all: bool,
    pub diagonal_unit: bool,
    pub off_diagonal_zero: bool,
    pub prefilter_hits: usize,
    pub prefilter_sound: bool,
}

impl DualityReport {
    pub fn is_dual(&self) -> bool {
        self.matched_all && self.diagonal_unit && self.off_diagonal_zero && self.prefilter_sound
    }
}

/// `[<A_i, B_j>]` with a summary against the transpose-tableau matching.
pub fn duality_matrix(a: &[Web], b: &[Web]) -> Result<(Vec<Vec<Q>>, DualityReport)> {
    duality_matrix_with(a, b, Exec::default())
}

pub fn duality_matrix_with(a: &[Web], b: &[Web], exec: Exec) -> Result<(Vec<Vec<Q>>, DualityReport)> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(format!("{} webs against {}", a.len(), b.len())));
    }
    let polys = exec.map(b, |x| web_polynomial(x, Engine::Linear)).into_iter().collect::<Result<Vec<_>>>()?;
    let cells: Vec<(usize, usize)> = (0..a.len()).flat_map(|i| (0..b.len()).map(move |j| (i, j))).collect();
    let values = exec.map(&cells, |&(i, j)| pair_with_poly(&a[i], &polys[j]));
    let mut m = vec![vec![Q::zero(); b.len()]; a.len()];
    for (&(i, j), v) in cells.iter().zip(values) {
        m[i][j] = v?;
    }
    let ta: Vec<Tableau> = a.iter().map(Web::tableau_of_web).collect::<Result<_>>()?;
    let tb: Vec<Tableau> = b.iter().map(|x| x.tableau_of_web().map(|t| t.transpose())).collect::<Result<_>>()?;
    let mut matching = Vec::new();
    for (i, t) in ta.iter().enumerate() {
        if let Some(j) = tb.iter().position(|u| u == t) {
            matching.push((i, j));
        }
    }
    let matched_all = matching.len() == a.len();
    let matched_entries: Vec<i64> = matching
        .iter()
        .map(|&(i, j)| if m[i][j].is_integer() { m[i][j].to_integer().try_into().unwrap_or(0) } else { 0 })
        .collect();
    let diagonal_unit = matching.iter().all(|&(i, j)| m[i][j].is_one() || (-m[i][j].clone()).is_one());
    let matched: HashSet<(usize, usize)> = matching.iter().copied().collect();
    let off_diagonal_zero = cells.iter().all(|c| matched.contains(c) || m[c.0][c.1].is_zero());
    let mut prefilter_hits = 0;
    let mut prefilter_sound = true;
    for &(i, j) in &cells {
        if fork_prefilter(&a[i], &b[j]) {
            prefilter_hits += 1;
            if !m[i][j].is_zero() {
                prefilter_sound = false;
            }
        }
    }
    let report = DualityReport {
        rows: a.len(),
        cols: b.len(),
        matrix: m.iter().map(|row| row.iter().map(ToString::to_string).collect()).collect(),
        matching,
        matched_entries,
        matched_all,
        diagonal_unit,
        off_diagonal_zero,
        prefilter_hits,
        prefilter_sound,
    };
    Ok((m, report))
}

/// `sum_D <D, f> fwt_G(D)` over the `r`-dimer covers with `lambda` the
/// multidegree of the homogeneous polynomial `f`.
pub fn twist_expand(f: &PluckerPoly, g: &PlabicGraph) -> Result<PluckerPoly> {
    twist_expand_with(f, g, Exec::default())
}

pub fn twist_expand_with(f: &PluckerPoly, g: &PlabicGraph, exec: Exec) -> Result<PluckerPoly> {
    let (k, n) = (g.k(), g.n());
    if f.k() != k || f.n() != n {
        return Err(Error::DegreeMismatch(format!("polynomial on Gr({},{}) against a ({k},{n}) graph", f.k(), f.n())));
    }
    if f.is_zero() {
        return Ok(PluckerPoly::zero(k, n));
    }
    let lambda = f
        .multidegree()
        .ok_or_else(|| Error::DegreeMismatch("polynomial is not homogeneous".into()))?;
    if !f.is_polynomial() || lambda.iter().any(|&d| d < 0) {
        return Err(Error::DegreeMismatch("twist expansion needs a polynomial".into()));
    }
    let lambda: Vec<usize> = lambda.into_iter().map(|d| d as usize).collect();
    let r = lambda.iter().sum::<usize>() / k;
    g.face_labels()?;
    let terms: Vec<(Monomial, Q)> = f.terms().map(|(m, c)| (m.clone(), c.clone())).collect();
    let lists: Vec<(MonomialList, Q)> = terms
        .iter()
        .map(|(m, c)| Ok((MonomialList(m.factors().ok_or_else(|| Error::Internal("factors".into()))?), c.clone())))
        .collect::<Result<_>>()?;
    let covers = enumerate_dimer_covers_with(g, r, &lambda, exec)?;
    let parts = exec.map(&covers, |d| -> Result<Option<(Monomial, Q)>> {
        let web = weblike_subgraph(g, d)?;
        let mut pairing = Q::zero();
        for (list, c) in &lists {
            let a = pair_with_monomial(&web, list)?;
            if a != 0 {
                pairing += c * Q::from_integer(a.into());
            }
        }
        if pairing.is_zero() {
            return Ok(None);
        }
        Ok(Some((face_weight_monomial(g, d)?, pairing)))
    });
    let mut out = PluckerPoly::zero(k, n);
    for p in parts {
        if let Some((m, c)) = p? {
            out.add_term(m, c);
        }
    }
    Ok(out)
}

/// Coefficients `C^D_W` of `D` in a basis, certified on every grid point.
#[derive(Clone, Debug, Serialize)]
pub struct BasisExpansion {
    pub coefficients: Vec<String>,
    pub checked: usize,
    pub integral: bool,
}

pub fn expand_in_web_basis(d: &Web, basis: &[Web]) -> Result<Vec<Q>> {
    expand_in_web_basis_with(d, basis, Exec::default())
}

pub fn expand_in_web_basis_with(d: &Web, basis: &[Web], exec: Exec) -> Result<Vec<Q>> {
    require_standard_full(d)?;
    for b in basis {
        require_standard_full(b)?;
        if b.r() != d.r() || b.n() != d.n() {
            return Err(Error::SizeMismatch("basis webs must match the web's type".into()));
        }
    }
    let (r, k) = (d.r(), d.n() / d.r());
    let words = balanced_words(r, k);
    let rows = exec
        .map(&words, |w| -> Result<(Vec<Q>, Q)> {
            let row = basis
                .iter()
                .map(|b| b.evaluate_word(w).map(|v| Q::from_integer(v.into())))
                .collect::<Result<Vec<_>>>()?;
            Ok((row, Q::from_integer(d.evaluate_word(w)?.into())))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let (a, rhs): (Vec<Vec<Q>>, Vec<Q>) = rows.into_iter().unzip();
    let (x, rank) = solve_general(&a, &rhs).ok_or_else(|| Error::RankLoss("web is not in the span of the basis".into()))?;
    if rank < basis.len() {
        return Err(Error::RankLoss(format!("basis has rank {rank} < {} on the grid", basis.len())));
    }
    Ok(x)
}

/// `sign * sum_D C^D_{dual} fwt_G(D)`: the twist of a basis invariant
/// through the coefficients of the weblike subgraphs on its dual web.
pub fn twist_via_dual(
    g: &PlabicGraph,
    dual_index: usize,
    basis: &[Web],
    sign: i64,
    exec: Exec,
) -> Result<PluckerPoly> {
    let (k, n) = (g.k(), g.n());
    let r = n / k;
    let covers = enumerate_dimer_covers_with(g, r, &vec![1; n], exec)?;
    let parts = exec.map(&covers, |d| -> Result<(Monomial, Q)> {
        let web = weblike_subgraph(g, d)?;
        let c = expand_in_web_basis_with(&web, basis, Exec::Sequential)?;
        Ok((face_weight_monomial(g, d)?, c[dual_index].clone()))
    });
    let mut out = PluckerPoly::zero(k, n);
    let s = Q::from_integer(sign.into());
    for p in parts {
        let (m, c) = p?;
        if !c.is_zero() {
            out.add_term(m, &c * &s);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basisgen::{sl2_basis, sl2_web, sl3_basis};
    use crate::dimers::enumerate_dimer_covers;
    use crate::plabic::make_rectangle_graph;
    use crate::plucker::twist_matrix;

    fn ks(e: &[usize]) -> KSet {
        KSet::from_elems(e)
    }

    #[test]
    fn monomial_list_duals() {
        let l = MonomialList::parse("1,2,4;3,5,6").unwrap();
        assert_eq!(l.dual_condition(6), vec![1, 1, 2, 1, 2, 2]);
        assert_eq!(l.multidegree(6), vec![1; 6]);
        assert!(MonomialList::parse("").is_err());
    }

    #[test]
    fn sl2_arcs_pairing() {
        let w = sl2_web(6, &[(1, 2), (3, 4), (5, 6)]).unwrap();
        let good = MonomialList(vec![ks(&[1, 3, 5]), ks(&[2, 4, 6])]);
        let bad = MonomialList(vec![ks(&[1, 2, 3]), ks(&[4, 5, 6])]);
        assert_eq!(pair_with_monomial(&w, &good).unwrap(), 1);
        assert_eq!(pair_with_monomial(&w, &bad).unwrap(), 0);
        let wrong = MonomialList(vec![ks(&[1, 2, 3])]);
        assert!(pair_with_monomial(&w, &wrong).is_err());
    }

    #[test]
    fn two_tripods_pair_with_transversal() {
        let w = Web::from_claws(3, 6, &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        let m = MonomialList(vec![ks(&[1, 4]), ks(&[2, 5]), ks(&[3, 6])]);
        assert_eq!(pair_with_monomial(&w, &m).unwrap(), 1);
    }

    #[test]
    fn linear_expansion_of_tripods() {
        let w = Web::from_claws(3, 6, &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        let e = expand_linear(&w, Convention::Fp).unwrap();
        assert!(e.certificate.full && e.certificate.ok());
        assert_eq!(e.poly.len(), 1);
        let (m, c) = e.poly.terms().next().unwrap();
        assert_eq!(m, &Monomial::product(&[ks(&[1, 2, 3]), ks(&[4, 5, 6])]));
        assert!(c.is_one() || (-c.clone()).is_one());
        let zero = expand_values(3, 6, |_| Ok(0), Exec::Sequential).unwrap();
        assert!(zero.poly.is_zero());
    }

    #[test]
    fn wrench_matches_fp_on_n6_and_n9() {
        for n in [6, 9] {
            for w in sl3_basis(&vec![1; n]).unwrap() {
                let p = wrench_expand(&w).unwrap();
                let cert = certify(&p, 3, n / 3, |s| w.evaluate_fp_word(s), Exec::Parallel).unwrap();
                assert!(cert.full && cert.ok(), "n={n}");
            }
        }
    }

    #[test]
    fn fork_preserving_wrench() {
        for w in sl3_basis(&[1; 9]).unwrap() {
            for i in 1..=9 {
                for j in i + 1..=9 {
                    if w.has_fork(i, j) {
                        let p = wrench_expand_fork_preserving(&w, i, j).unwrap();
                        assert!(fork_preserved(&p, i, j));
                        let cert = certify(&p, 3, 3, |s| w.evaluate_fp_word(s), Exec::Parallel).unwrap();
                        assert!(cert.ok());
                    }
                }
            }
        }
    }

    #[test]
    fn engines_give_equal_pairings() {
        let basis = sl3_basis(&[1; 6]).unwrap();
        let duals = sl2_basis(6).unwrap();
        for x in &basis {
            for w in &duals {
                assert_eq!(pair_webs_with(w, x, Engine::Linear).unwrap(), pair_webs_with(w, x, Engine::Wrench).unwrap());
            }
        }
    }

    #[test]
    fn duality_2_3_and_3_2() {
        let sl2 = sl2_basis(6).unwrap();
        let sl3 = sl3_basis(&[1; 6]).unwrap();
        let (_, rep) = duality_matrix(&sl2, &sl3).unwrap();
        assert!(rep.is_dual(), "{rep:?}");
        let (_, rep) = duality_matrix(&sl3, &sl2).unwrap();
        assert!(rep.is_dual(), "{rep:?}");
    }

    #[test]
    fn twist_expand_matches_matrix_twist() {
        let g = make_rectangle_graph(3, 6).unwrap();
        let mut rng = Rng::new(21);
        let f = PluckerPoly::var(3, 6, ks(&[1, 2, 4])).mul(&PluckerPoly::var(3, 6, ks(&[3, 5, 6])));
        let t = twist_expand(&f, &g).unwrap();
        let m = rng.generic_point(3, 6, 7);
        assert_eq!(t.evaluate(&m).unwrap(), f.evaluate(&twist_matrix(&m).unwrap()).unwrap());
    }

    #[test]
    fn cover_splitting_is_multiplicative() {
        let g = make_rectangle_graph(3, 6).unwrap();
        let lambda = vec![1; 6];
        let ones: Vec<Vec<usize>> = crate::subsets::k_subsets(6, 3)
            .into_iter()
            .map(|s| (1..=6).map(|i| usize::from(s.contains(i))).collect())
            .collect();
        let mut by_lambda: BTreeMap<Vec<usize>, Vec<crate::dimers::DimerCover>> = BTreeMap::new();
        for l in &ones {
            by_lambda.insert(l.clone(), enumerate_dimer_covers(&g, 1, l).unwrap());
        }
        for d in enumerate_dimer_covers(&g, 2, &lambda).unwrap().iter().take(40) {
            let web = weblike_subgraph(&g, d).unwrap();
            for l1 in &ones {
                let l2: Vec<usize> = l1.iter().map(|&x| 1 - x).collect();
                let s: BoundaryCondition = l1.iter().map(|&x| if x == 1 { 1 } else { 2 }).collect();
                let direct = web.count_labelings(&s).unwrap();
                let mut split = 0;
                for d1 in &by_lambda[l1] {
                    for d2 in &by_lambda[&l2] {
                        if d1.join(d2).mult == d.mult {
                            split += 1;
                        }
                    }
                }
                assert_eq!(direct, split);
            }
        }
    }

    #[test]
    fn basis_expansion_indicator_and_integrality() {
        let basis = sl2_basis(6).unwrap();
        for (i, w) in basis.iter().enumerate() {
            let c = expand_in_web_basis(w, &basis).unwrap();
            for (j, v) in c.iter().enumerate() {
                assert_eq!(v.is_one(), i == j);
                assert!(i == j || v.is_zero());
            }
        }
        let g = make_rectangle_graph(3, 6).unwrap();
        for d in enumerate_dimer_covers(&g, 2, &[1; 6]).unwrap() {
            let web = weblike_subgraph(&g, &d).unwrap();
            let c = expand_in_web_basis(&web, &basis).unwrap();
            assert!(c.iter().all(|v| v.is_integer()));
        }
    }

    #[test]
    fn prefilter_examples() {
        let a = Web::from_claws(3, 3, &[vec![1, 2, 3]]).unwrap();
        assert!(fork_prefilter(&a, &a));
        let path = sl2_web(2, &[(1, 2)]).unwrap();
        let b = sl2_web(2, &[(1, 2)]).unwrap();
        assert!(fork_prefilter(&path, &b));
    }
}
