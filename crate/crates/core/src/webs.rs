//! Webs and tensor diagrams: labelings, words and signs, invariant values in
//! both sign conventions, clasping, and the dihedral moves.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::ops::ControlFlow;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::plabic::parse_color;
use crate::plucker::MatrixPoint;
use crate::subsets::inversion_sign;
use crate::tableaux::Tableau;
use crate::{Color, Error, Result, Q};

/// Orientation in which [`Web::evaluate_fp`] counts a vertex as positive:
/// `1` means labels `1,2,3` appearing clockwise.
pub const FP_ORIENTATION: i64 = 1;

/// A subset of `[r]` as a bitmask (bit `j-1` for label `j`).
pub type LabelSet = u16;

/// One label set per boundary vertex.
pub type BoundaryCondition = Vec<LabelSet>;

pub fn label_set(labels: &[usize]) -> LabelSet {
    labels.iter().fold(0, |m, &l| m | (1 << (l - 1)))
}

pub fn label_elems(s: LabelSet) -> Vec<u8> {
    (0..16).filter(|b| s & (1 << b) != 0).map(|b| b as u8 + 1).collect()
}

/// Boundary condition of a standard web read off a word.
pub fn condition_from_word(word: &[u8]) -> BoundaryCondition {
    word.iter().map(|&l| 1 << (l - 1)).collect()
}

/// Concatenation of the sorted label sets.
pub fn condition_word(s: &[LabelSet]) -> Vec<u8> {
    s.iter().flat_map(|&m| label_elems(m)).collect()
}

pub fn condition_sign(s: &[LabelSet]) -> i64 {
    inversion_sign(&condition_word(s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WebEdge {
    pub ends: [usize; 2],
    pub mult: usize,
}

#[derive(Clone, Debug)]
struct Step {
    vertex: usize,
    new_edges: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Plan {
    steps: Vec<Step>,
}

/// A bicolored graph with boundary vertices `1..n` (vertex indices `0..n`,
/// all black) followed by internal vertices, edge multiplicities, and a
/// counterclockwise edge order at every vertex. At a boundary vertex the
/// order runs from the side of `i-1` to the side of `i+1`.
#[derive(Clone, Debug)]
pub struct Web {
    r: usize,
    n: usize,
    colors: Vec<Color>,
    edges: Vec<WebEdge>,
    rotation: Vec<Vec<usize>>,
    planar: bool,
    plan: OnceLock<Plan>,
}

/// Incremental construction of a [`Web`].
#[derive(Clone, Debug)]
pub struct WebBuilder {
    r: usize,
    n: usize,
    colors: Vec<Color>,
    edges: Vec<WebEdge>,
    rotation: Vec<Option<Vec<usize>>>,
}

impl WebBuilder {
    pub fn new(r: usize, n: usize) -> WebBuilder {
        WebBuilder { r, n, colors: vec![Color::Black; n], edges: Vec::new(), rotation: vec![None; n] }
    }

    /// Boundary vertex `i` (1-based) as a vertex index.
    pub fn boundary(&self, i: usize) -> usize {
        i - 1
    }

    pub fn add_vertex(&mut self, c: Color) -> usize {
        self.colors.push(c);
        self.rotation.push(None);
        self.colors.len() - 1
    }

    pub fn add_edge(&mut self, a: usize, b: usize, mult: usize) -> usize {
        self.edges.push(WebEdge { ends: [a, b], mult });
        self.edges.len() - 1
    }

    /// Counterclockwise edge order at `v`. Vertices left unset use insertion
    /// order.
    pub fn set_rotation(&mut self, v: usize, edges: Vec<usize>) {
        self.rotation[v] = Some(edges);
    }

    pub fn build(self) -> Result<Web> {
        let mut rotation: Vec<Vec<usize>> = vec![Vec::new(); self.colors.len()];
        for (e, edge) in self.edges.iter().enumerate() {
            for &v in &edge.ends {
                if v < rotation.len() {
                    rotation[v].push(e);
                }
            }
        }
        for (v, r) in self.rotation.into_iter().enumerate() {
            if let Some(r) = r {
                rotation[v] = r;
            }
        }
        Web::new(self.r, self.n, self.colors, self.edges, rotation)
    }
}

impl Web {
    /// Validate and build. `colors` covers all vertices, boundary first.
    pub fn new(r: usize, n: usize, colors: Vec<Color>, edges: Vec<WebEdge>, rotation: Vec<Vec<usize>>) -> Result<Web> {
        if r == 0 || r > 16 {
            return Err(Error::InvalidWeb(format!("r = {r} out of range")));
        }
        let nv = colors.len();
        if nv < n || colors[..n].iter().any(|&c| c != Color::Black) {
            return Err(Error::InvalidWeb("boundary vertices must be black".into()));
        }
        if rotation.len() != nv {
            return Err(Error::InvalidWeb("rotation must list every vertex".into()));
        }
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (e, edge) in edges.iter().enumerate() {
            let [a, b] = edge.ends;
            if a >= nv || b >= nv {
                return Err(Error::InvalidWeb(format!("edge {e} has an unknown endpoint")));
            }
            if colors[a] == colors[b] {
                return Err(Error::InvalidWeb(format!("edge {e} joins two vertices of the same color")));
            }
            if edge.mult == 0 {
                return Err(Error::InvalidWeb(format!("edge {e} has multiplicity 0")));
            }
            incident[a].push(e);
            incident[b].push(e);
        }
        for v in 0..nv {
            let mut a = rotation[v].clone();
            let mut b = incident[v].clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(Error::InvalidWeb(format!("rotation at vertex {v} does not match its edges")));
            }
            if v >= n {
                let s: usize = incident[v].iter().map(|&e| edges[e].mult).sum();
                if s != r {
                    return Err(Error::InvalidWeb(format!("internal vertex {v} has multiplicity sum {s} != {r}")));
                }
            }
        }
        let mut w = Web { r, n, colors, edges, rotation, planar: false, plan: OnceLock::new() };
        w.planar = w.euler_planar();
        Ok(w)
    }

    /// Disjoint claws: each list is a set of boundary labels joined to one
    /// new white vertex by single edges, clockwise in increasing order. Each
    /// claw must have exactly `r` legs.
    pub fn from_claws(r: usize, n: usize, claws: &[Vec<usize>]) -> Result<Web> {
        let mut b = WebBuilder::new(r, n);
        for claw in claws {
            let w = b.add_vertex(Color::White);
            let mut es = Vec::new();
            for &i in claw {
                if i == 0 || i > n {
                    return Err(Error::InvalidWeb(format!("boundary label {i} out of range")));
                }
                es.push(b.add_edge(i - 1, w, 1));
            }
            es.reverse();
            b.set_rotation(w, es);
        }
        b.build()
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_vertices(&self) -> usize {
        self.colors.len()
    }

    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    pub fn edges(&self) -> &[WebEdge] {
        &self.edges
    }

    pub fn is_planar(&self) -> bool {
        self.planar
    }

    /// Mark this diagram as a tensor diagram with crossings.
    pub fn with_planar_flag(mut self, planar: bool) -> Web {
        self.planar = planar && self.euler_planar();
        self
    }

    /// Counterclockwise edge order at `v`.
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let [a, b] = self.edges[e].ends;
        if a == v {
            b
        } else {
            a
        }
    }

    /// Edges at boundary vertex `i` (1-based), counterclockwise.
    pub fn boundary_edges(&self, i: usize) -> &[usize] {
        &self.rotation[i - 1]
    }

    pub fn degree(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.rotation[v].iter().map(|&e| self.edges[e].mult).sum()).collect()
    }

    /// Plücker degree `|λ| / r`, if integral.
    pub fn plucker_degree(&self) -> Option<usize> {
        let t: usize = self.degree().iter().sum();
        t.is_multiple_of(self.r).then_some(t / self.r)
    }

    pub fn is_semistandard(&self) -> bool {
        (0..self.n).all(|v| self.rotation[v].iter().all(|&e| self.edges[e].mult == 1))
    }

    pub fn is_dual_semistandard(&self) -> bool {
        (0..self.n).all(|v| self.rotation[v].len() <= 1)
    }

    pub fn is_standard(&self) -> bool {
        (0..self.n).all(|v| self.rotation[v].len() == 1 && self.edges[self.rotation[v][0]].mult == 1)
    }

    fn euler_planar(&self) -> bool {
        let faces = self.trace_faces();
        let nv = self.num_vertices();
        let ne = self.edges.len() + if self.n > 0 { self.n } else { 0 };
        let comps = self.components_with_circle();
        nv as i64 - ne as i64 + faces.len() as i64 == 2 * comps as i64
    }

    fn components_with_circle(&self) -> usize {
        let nv = self.num_vertices();
        let mut parent: Vec<usize> = (0..nv).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let union = |a: usize, b: usize, p: &mut Vec<usize>| {
            let (ra, rb) = (find(p, a), find(p, b));
            if ra != rb {
                p[ra] = rb;
            }
        };
        for e in &self.edges {
            union(e.ends[0], e.ends[1], &mut parent);
        }
        for i in 1..self.n {
            union(0, i, &mut parent);
        }
        (0..nv).filter(|&v| find(&mut parent, v) == v).count()
    }

    /// Faces of the map formed by the web plus the boundary circle. Each face
    /// is a list of half-edges; half-edge `2e` leaves `ends[0]`, `2e+1`
    /// leaves `ends[1]`; arcs are edges `E..E+n`.
    fn trace_faces(&self) -> Vec<Vec<usize>> {
        let ne = self.edges.len();
        let n = self.n;
        let mut ends: Vec<[usize; 2]> = self.edges.iter().map(|e| e.ends).collect();
        for i in 0..n {
            ends.push([i, (i + 1) % n]);
        }
        let out_half = |e: usize, v: usize| if ends[e][0] == v { 2 * e } else { 2 * e + 1 };
        let mut rot: Vec<Vec<usize>> = Vec::with_capacity(self.num_vertices());
        for v in 0..self.num_vertices() {
            let mut r: Vec<usize> = self.rotation[v].iter().map(|&e| out_half(e, v)).collect();
            if v < n {
                r.push(2 * (ne + v));
                r.push(2 * (ne + (v + n - 1) % n) + 1);
            }
            rot.push(r);
        }
        let nh = 2 * ends.len();
        let mut pos = vec![0usize; nh];
        for r in &rot {
            for (p, &h) in r.iter().enumerate() {
                pos[h] = p;
            }
        }
        let head = |h: usize| if h.is_multiple_of(2) { ends[h / 2][1] } else { ends[h / 2][0] };
        let mut seen = vec![false; nh];
        let mut faces = Vec::new();
        for s in 0..nh {
            if seen[s] {
                continue;
            }
            let mut f = Vec::new();
            let mut h = s;
            while !seen[h] {
                seen[h] = true;
                f.push(h);
                let w = head(h);
                let r = &rot[w];
                h = r[(pos[h ^ 1] + r.len() - 1) % r.len()];
            }
            faces.push(f);
        }
        faces
    }

    /// Sizes of the faces that do not touch the boundary circle, and whether
    /// some component avoids the boundary entirely.
    pub(crate) fn internal_face_sizes(&self) -> (Vec<usize>, bool) {
        let ne = self.edges.len();
        let faces = self.trace_faces();
        let touches: Vec<bool> = {
            let mut reach = vec![false; self.num_vertices()];
            let mut q: VecDeque<usize> = (0..self.n).collect();
            for v in 0..self.n {
                reach[v] = true;
            }
            while let Some(v) = q.pop_front() {
                for &e in &self.rotation[v] {
                    let w = self.other_end(e, v);
                    if !reach[w] {
                        reach[w] = true;
                        q.push_back(w);
                    }
                }
            }
            reach
        };
        let closed = touches.iter().any(|t| !t);
        let sizes = faces
            .iter()
            .filter(|f| f.iter().all(|h| h / 2 < ne))
            .filter(|f| touches[self.edges[f[0] / 2].ends[0]])
            .map(|f| f.len())
            .collect();
        (sizes, closed)
    }

    // ---- labelings ----

    fn plan(&self) -> &Plan {
        self.plan.get_or_init(|| {
            let nv = self.num_vertices();
            let mut order = Vec::new();
            let mut placed = vec![false; nv];
            let mut q = VecDeque::new();
            for v in 0..self.n {
                placed[v] = true;
                q.push_back(v);
            }
            let bfs = |q: &mut VecDeque<usize>, placed: &mut Vec<bool>, order: &mut Vec<usize>| {
                while let Some(v) = q.pop_front() {
                    if v >= self.n {
                        order.push(v);
                    }
                    for &e in &self.rotation[v] {
                        let w = self.other_end(e, v);
                        if !placed[w] {
                            placed[w] = true;
                            q.push_back(w);
                        }
                    }
                }
            };
            bfs(&mut q, &mut placed, &mut order);
            for v in self.n..nv {
                if !placed[v] {
                    placed[v] = true;
                    q.push_back(v);
                    bfs(&mut q, &mut placed, &mut order);
                }
            }
            let mut rank = vec![usize::MAX; nv];
            for (t, &v) in order.iter().enumerate() {
                rank[v] = t;
            }
            let steps = order
                .iter()
                .map(|&v| {
                    let new_edges = self.rotation[v]
                        .iter()
                        .copied()
                        .filter(|&e| {
                            let w = self.other_end(e, v);
                            w < self.n || rank[w] > rank[v]
                        })
                        .collect();
                    Step { vertex: v, new_edges }
                })
                .collect();
            Plan { steps }
        })
    }

    /// Visit every consistent labeling (edge label sets indexed by edge)
    /// whose boundary edges agree with `forced` where given.
    fn search<F>(&self, forced: &[Option<LabelSet>], visit: &mut F)
    where
        F: FnMut(&[LabelSet]) -> ControlFlow<()>,
    {
        let plan = self.plan();
        let mut labels = vec![0 as LabelSet; self.edges.len()];
        let mut used = vec![0 as LabelSet; self.num_vertices()];
        let full: LabelSet = if self.r == 16 { u16::MAX } else { (1 << self.r) - 1 };
        let _ = self.rec_vertex(plan, 0, full, forced, &mut labels, &mut used, visit);
    }

    #[allow(clippy::too_many_arguments)]
    fn rec_vertex<F>(
        &self,
        plan: &Plan,
        t: usize,
        full: LabelSet,
        forced: &[Option<LabelSet>],
        labels: &mut [LabelSet],
        used: &mut [LabelSet],
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[LabelSet]) -> ControlFlow<()>,
    {
        if t == plan.steps.len() {
            return visit(labels);
        }
        let step = &plan.steps[t];
        let remaining = full & !used[step.vertex];
        self.rec_edge(plan, t, 0, remaining, full, forced, labels, used, visit)
    }

    #[allow(clippy::too_many_arguments)]
    fn rec_edge<F>(
        &self,
        plan: &Plan,
        t: usize,
        j: usize,
        remaining: LabelSet,
        full: LabelSet,
        forced: &[Option<LabelSet>],
        labels: &mut [LabelSet],
        used: &mut [LabelSet],
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&[LabelSet]) -> ControlFlow<()>,
    {
        let step = &plan.steps[t];
        if j == step.new_edges.len() {
            if remaining != 0 {
                return ControlFlow::Continue(());
            }
            return self.rec_vertex(plan, t + 1, full, forced, labels, used, visit);
        }
        let e = step.new_edges[j];
        let m = self.edges[e].mult as u32;
        let u = self.other_end(e, step.vertex);
        let last = j + 1 == step.new_edges.len();
        let mut try_label = |lab: LabelSet, labels: &mut [LabelSet], used: &mut [LabelSet]| -> ControlFlow<()> {
            if lab & !remaining != 0 || lab.count_ones() != m {
                return ControlFlow::Continue(());
            }
            if u < self.n {
                if let Some(Some(f)) = forced.get(u) {
                    if *f != lab {
                        return ControlFlow::Continue(());
                    }
                }
            } else if used[u] & lab != 0 {
                return ControlFlow::Continue(());
            }
            labels[e] = lab;
            used[u] |= lab;
            let res = self.rec_edge(plan, t, j + 1, remaining & !lab, full, forced, labels, used, visit);
            used[u] &= !lab;
            res
        };
        if u < self.n {
            if let Some(Some(f)) = forced.get(u) {
                return try_label(*f, labels, used);
            }
        }
        if last {
            return try_label(remaining, labels, used);
        }
        let mut sub = remaining;
        let mut cands = Vec::new();
        loop {
            if sub.count_ones() == m {
                cands.push(sub);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & remaining;
        }
        cands.reverse();
        for lab in cands {
            try_label(lab, labels, used)?;
        }
        ControlFlow::Continue(())
    }

    fn require_dual_semistandard(&self) -> Result<()> {
        if self.is_dual_semistandard() {
            Ok(())
        } else {
            Err(Error::InvalidWeb("operation needs a dual semistandard web; unclasp first".into()))
        }
    }

    fn forced_from(&self, s: &[LabelSet]) -> Result<Vec<Option<LabelSet>>> {
        self.require_dual_semistandard()?;
        if s.len() != self.n {
            return Err(Error::SizeMismatch(format!("{} label sets for {} boundary vertices", s.len(), self.n)));
        }
        let lam = self.degree();
        for i in 0..self.n {
            if s[i].count_ones() as usize != lam[i] {
                return Err(Error::SizeMismatch(format!(
                    "|S({})| = {} but λ_{} = {}",
                    i + 1,
                    s[i].count_ones(),
                    i + 1,
                    lam[i]
                )));
            }
            if self.r < 16 && s[i] >> self.r != 0 {
                return Err(Error::SizeMismatch(format!("S({}) uses a label above r", i + 1)));
            }
        }
        Ok(s.iter().map(|&x| Some(x)).collect())
    }

    /// `a(S; W)`.
    pub fn count_labelings(&self, s: &[LabelSet]) -> Result<i64> {
        let forced = self.forced_from(s)?;
        let mut count = 0i64;
        self.search(&forced, &mut |_| {
            count += 1;
            ControlFlow::Continue(())
        });
        Ok(count)
    }

    /// All consistent labelings, as label sets indexed by edge.
    pub fn enumerate_labelings(&self, s: &[LabelSet]) -> Result<Vec<Vec<LabelSet>>> {
        let forced = self.forced_from(s)?;
        let mut out = Vec::new();
        self.search(&forced, &mut |l| {
            out.push(l.to_vec());
            ControlFlow::Continue(())
        });
        Ok(out)
    }

    fn has_labeling(&self, forced: &[Option<LabelSet>]) -> bool {
        let mut found = false;
        self.search(forced, &mut |_| {
            found = true;
            ControlFlow::Break(())
        });
        found
    }

    /// Lexicographically minimal word with a consistent labeling, its
    /// boundary condition, and the sign of that word.
    pub fn word_and_sign(&self) -> Result<(Vec<u8>, BoundaryCondition, i64)> {
        self.require_dual_semistandard()?;
        let lam = self.degree();
        let mut forced: Vec<Option<LabelSet>> = vec![None; self.n];
        if !self.has_labeling(&forced) {
            return Err(Error::ZeroInvariant);
        }
        for i in 0..self.n {
            let cands = sets_in_lex_order(self.r, lam[i]);
            let mut ok = false;
            for c in cands {
                forced[i] = Some(c);
                if self.has_labeling(&forced) {
                    ok = true;
                    break;
                }
            }
            if !ok {
                return Err(Error::Internal("lex search lost feasibility".into()));
            }
        }
        let s: BoundaryCondition = forced.into_iter().map(|x| x.unwrap_or(0)).collect();
        let w = condition_word(&s);
        let sign = inversion_sign(&w);
        Ok((w, s, sign))
    }

    /// `sign(S) a(S; W)`.
    pub fn evaluate_invariant(&self, s: &[LabelSet]) -> Result<i64> {
        let a = self.count_labelings(s)?;
        Ok(if a == 0 { 0 } else { condition_sign(s) * a })
    }

    /// Value on `E_S` for a standard web and a word `S`.
    pub fn evaluate_word(&self, word: &[u8]) -> Result<i64> {
        self.evaluate_invariant(&condition_from_word(word))
    }

    fn require_standard_sl3(&self) -> Result<()> {
        if self.r != 3 {
            return Err(Error::Unsupported("sign convention defined for r = 3 only".into()));
        }
        if !self.is_standard() {
            return Err(Error::InvalidWeb("diagram must be standard".into()));
        }
        Ok(())
    }

    fn fp_sign(&self, labels: &[LabelSet]) -> i64 {
        let mut sign = 1i64;
        for v in self.n..self.num_vertices() {
            let rot = &self.rotation[v];
            // Clockwise reading is the reverse of the stored order.
            let l: Vec<u16> = rot.iter().rev().map(|&e| labels[e]).collect();
            let cyclic = matches!((l[0], l[1], l[2]), (1, 2, 4) | (2, 4, 1) | (4, 1, 2));
            sign *= if cyclic { FP_ORIENTATION } else { -FP_ORIENTATION };
        }
        sign
    }

    /// `sum_L prod_v sign(L, v)` over consistent labelings with boundary `S`.
    pub fn evaluate_fp(&self, s: &[LabelSet]) -> Result<i64> {
        self.require_standard_sl3()?;
        let forced = self.forced_from(s)?;
        let mut total = 0i64;
        self.search(&forced, &mut |l| {
            total += self.fp_sign(l);
            ControlFlow::Continue(())
        });
        Ok(total)
    }

    pub fn evaluate_fp_word(&self, word: &[u8]) -> Result<i64> {
        self.evaluate_fp(&condition_from_word(word))
    }

    /// State sum `sum_L sign(L) prod_i M[label at i][i]` at a `3 x n` matrix.
    pub fn evaluate_fp_at_point(&self, m: &MatrixPoint) -> Result<Q> {
        self.require_standard_sl3()?;
        if m.k() != 3 || m.n() != self.n {
            return Err(Error::SizeMismatch("point must be 3 x n".into()));
        }
        let forced = vec![None; self.n];
        let legs: Vec<usize> = (0..self.n).map(|v| self.rotation[v][0]).collect();
        let mut total = Q::zero();
        self.search(&forced, &mut |l| {
            let mut v = Q::from_integer(self.fp_sign(l).into());
            for (i, &e) in legs.iter().enumerate() {
                let row = l[e].trailing_zeros() as usize;
                v *= &m.rows()[row][i];
                if v.is_zero() {
                    break;
                }
            }
            total += v;
            ControlFlow::Continue(())
        });
        Ok(total)
    }

    /// Row `j` of `T(W)` holds `{i : j in S_W(i)}` (with multiplicity for
    /// semistandard webs, computed through the unclasping).
    pub fn tableau_of_web(&self) -> Result<Tableau> {
        let (rows_sets, k) = if self.is_dual_semistandard() {
            let (_, s, _) = self.word_and_sign()?;
            let mut rows: Vec<Vec<u32>> = vec![Vec::new(); self.r];
            for (i, &set) in s.iter().enumerate() {
                for l in label_elems(set) {
                    rows[l as usize - 1].push(i as u32 + 1);
                }
            }
            let k = rows[0].len();
            (rows, k)
        } else {
            let (u, groups) = self.unclasp()?;
            let (_, s, _) = u.word_and_sign()?;
            let mut owner = Vec::new();
            for (i, &g) in groups.iter().enumerate() {
                for _ in 0..g {
                    owner.push(i as u32 + 1);
                }
            }
            let mut rows: Vec<Vec<u32>> = vec![Vec::new(); self.r];
            for (p, &set) in s.iter().enumerate() {
                for l in label_elems(set) {
                    rows[l as usize - 1].push(owner[p]);
                }
            }
            for r in rows.iter_mut() {
                r.sort_unstable();
            }
            let k = rows[0].len();
            (rows, k)
        };
        if k == 0 || rows_sets.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidTableau("label content is not rectangular".into()));
        }
        Tableau::from_rows(rows_sets)
    }

    /// Whether boundary vertices `i` and `j` are each joined by a single edge
    /// of multiplicity 1 to the same internal vertex.
    pub fn has_fork(&self, i: usize, j: usize) -> bool {
        if i == j || i == 0 || j == 0 || i > self.n || j > self.n {
            return false;
        }
        let attach = |b: usize| -> Option<usize> {
            let es = &self.rotation[b - 1];
            (es.len() == 1 && self.edges[es[0]].mult == 1).then(|| self.other_end(es[0], b - 1))
        };
        matches!((attach(i), attach(j)), (Some(a), Some(b)) if a == b)
    }

    // ---- structural moves ----

    fn relabel_boundary(&self, new_index: impl Fn(usize) -> usize, mirror: bool) -> Web {
        let nv = self.num_vertices();
        let map = |v: usize| if v < self.n { new_index(v) } else { v };
        let edges: Vec<WebEdge> =
            self.edges.iter().map(|e| WebEdge { ends: [map(e.ends[0]), map(e.ends[1])], mult: e.mult }).collect();
        let mut rotation = vec![Vec::new(); nv];
        for v in 0..nv {
            let mut r = self.rotation[v].clone();
            if mirror {
                r.reverse();
            }
            rotation[map(v)] = r;
        }
        Web::new(self.r, self.n, self.colors.clone(), edges, rotation).expect("relabeling preserves validity")
    }

    /// Boundary vertex `j` becomes `j-1`, and `1` becomes `n`.
    pub fn rotate(&self) -> Web {
        let n = self.n;
        self.relabel_boundary(|o| (o + n - 1) % n, false)
    }

    /// Boundary vertex `i` becomes `n+1-i`; the embedding is mirrored.
    pub fn reflect(&self) -> Web {
        let n = self.n;
        self.relabel_boundary(|o| n - 1 - o, true)
    }

    /// Split every boundary vertex with `λ_i` edges into `λ_i` consecutive
    /// boundary vertices. Returns the standard web and the group sizes.
    pub fn unclasp(&self) -> Result<(Web, Vec<usize>)> {
        if !self.is_semistandard() {
            return Err(Error::InvalidWeb("unclasping needs boundary edges of multiplicity 1".into()));
        }
        let groups: Vec<usize> = (0..self.n).map(|v| self.rotation[v].len()).collect();
        let new_n: usize = groups.iter().sum();
        let mut new_of_edge = HashMap::new();
        let mut next = 0;
        for v in 0..self.n {
            for &e in &self.rotation[v] {
                new_of_edge.insert(e, next);
                next += 1;
            }
        }
        let shift = |v: usize| v - self.n + new_n;
        let mut colors = vec![Color::Black; new_n];
        colors.extend_from_slice(&self.colors[self.n..]);
        let edges: Vec<WebEdge> = self
            .edges
            .iter()
            .enumerate()
            .map(|(e, ed)| {
                let m = |v: usize| if v < self.n { new_of_edge[&e] } else { shift(v) };
                WebEdge { ends: [m(ed.ends[0]), m(ed.ends[1])], mult: ed.mult }
            })
            .collect();
        let mut rotation = vec![Vec::new(); colors.len()];
        for v in 0..self.n {
            for &e in &self.rotation[v] {
                rotation[new_of_edge[&e]] = vec![e];
            }
        }
        for v in self.n..self.num_vertices() {
            rotation[shift(v)] = self.rotation[v].clone();
        }
        Ok((Web::new(self.r, new_n, colors, edges, rotation)?, groups))
    }

    /// Merge consecutive boundary vertices according to `grouping`, a
    /// composition of `n`.
    pub fn clasp(&self, grouping: &[usize]) -> Result<Web> {
        if grouping.iter().sum::<usize>() != self.n || grouping.contains(&0) {
            return Err(Error::SizeMismatch(format!("grouping {grouping:?} is not a composition of {}", self.n)));
        }
        let new_n = grouping.len();
        let mut owner = Vec::with_capacity(self.n);
        for (t, &g) in grouping.iter().enumerate() {
            for _ in 0..g {
                owner.push(t);
            }
        }
        let shift = |v: usize| v - self.n + new_n;
        let map = |v: usize| if v < self.n { owner[v] } else { shift(v) };
        let mut colors = vec![Color::Black; new_n];
        colors.extend_from_slice(&self.colors[self.n..]);
        let edges: Vec<WebEdge> =
            self.edges.iter().map(|e| WebEdge { ends: [map(e.ends[0]), map(e.ends[1])], mult: e.mult }).collect();
        let mut rotation = vec![Vec::new(); colors.len()];
        for v in 0..self.n {
            rotation[owner[v]].extend_from_slice(&self.rotation[v]);
        }
        for v in self.n..self.num_vertices() {
            rotation[shift(v)] = self.rotation[v].clone();
        }
        Web::new(self.r, new_n, colors, edges, rotation)
    }

    /// Remove adjacent pairs of 2-valent internal vertices, joining their
    /// outer neighbours directly.
    pub fn normalized(&self) -> Web {
        let mut cur = self.clone();
        loop {
            let deg2 = |w: &Web, v: usize| v >= w.n && w.rotation[v].len() == 2;
            let mut found = None;
            'outer: for u in cur.n..cur.num_vertices() {
                if !deg2(&cur, u) {
                    continue;
                }
                for &e2 in &cur.rotation[u] {
                    let v = cur.other_end(e2, u);
                    if !deg2(&cur, v) {
                        continue;
                    }
                    let e1 = *cur.rotation[u].iter().find(|&&e| e != e2).unwrap();
                    let e3 = *cur.rotation[v].iter().find(|&&e| e != e2).unwrap();
                    if e1 == e3 || e1 == e2 {
                        continue;
                    }
                    found = Some((u, v, e1, e2, e3));
                    break 'outer;
                }
            }
            let Some((u, v, e1, e2, e3)) = found else {
                return cur;
            };
            let x = cur.other_end(e1, u);
            let y = cur.other_end(e3, v);
            let mult = cur.edges[e1].mult;
            let keep_v: Vec<usize> = (0..cur.num_vertices()).filter(|&w| w != u && w != v).collect();
            let mut vmap = vec![usize::MAX; cur.num_vertices()];
            for (t, &w) in keep_v.iter().enumerate() {
                vmap[w] = t;
            }
            let keep_e: Vec<usize> = (0..cur.edges.len()).filter(|&e| e != e2 && e != e3).collect();
            let mut emap = vec![usize::MAX; cur.edges.len()];
            for (t, &e) in keep_e.iter().enumerate() {
                emap[e] = t;
            }
            let edges: Vec<WebEdge> = keep_e
                .iter()
                .map(|&e| {
                    if e == e1 {
                        WebEdge { ends: [vmap[x], vmap[y]], mult }
                    } else {
                        let ed = cur.edges[e];
                        WebEdge { ends: [vmap[ed.ends[0]], vmap[ed.ends[1]]], mult: ed.mult }
                    }
                })
                .collect();
            let colors: Vec<Color> = keep_v.iter().map(|&w| cur.colors[w]).collect();
            let rotation: Vec<Vec<usize>> = keep_v
                .iter()
                .map(|&w| cur.rotation[w].iter().map(|&e| if e == e3 { emap[e1] } else { emap[e] }).collect())
                .collect();
            cur = Web::new(cur.r, cur.n, colors, edges, rotation).expect("suppression preserves validity");
        }
    }

    /// Deterministic serialization up to boundary-fixing planar isomorphism.
    pub fn canonical_key(&self) -> String {
        let w = self.normalized();
        w.raw_key()
    }

    fn raw_key(&self) -> String {
        let nv = self.num_vertices();
        let mut key = format!("r{}n{}|", self.r, self.n);
        let mut id = vec![usize::MAX; nv];
        let mut entry = vec![usize::MAX; nv];
        for v in 0..self.n {
            id[v] = v;
        }
        let mut next = self.n;
        let mut q: VecDeque<usize> = (0..self.n).collect();
        let mut blocks: Vec<String> = Vec::new();
        while let Some(v) = q.pop_front() {
            let seq = self.cyclic_from(v, entry[v]);
            let mut s = format!("{}{}:", id[v], self.colors[v].as_char());
            for e in seq {
                let w = self.other_end(e, v);
                if id[w] == usize::MAX {
                    id[w] = next;
                    next += 1;
                    entry[w] = e;
                    q.push_back(w);
                }
                s.push_str(&format!("{}x{},", id[w], self.edges[e].mult));
            }
            blocks.push(s);
        }
        key.push_str(&blocks.join(";"));
        let mut closed: Vec<String> = Vec::new();
        for v in self.n..nv {
            if id[v] != usize::MAX {
                continue;
            }
            let comp = self.component_of(v);
            for &w in &comp {
                id[w] = 0;
            }
            let mut best: Option<String> = None;
            for &s in &comp {
                for &e in &self.rotation[s] {
                    let k = self.closed_key(s, e);
                    if best.as_ref().is_none_or(|b| k < *b) {
                        best = Some(k);
                    }
                }
            }
            closed.push(best.unwrap_or_default());
        }
        closed.sort();
        for c in closed {
            key.push('|');
            key.push_str(&c);
        }
        key
    }

    fn cyclic_from(&self, v: usize, start_edge: usize) -> Vec<usize> {
        let rot = &self.rotation[v];
        match rot.iter().position(|&e| e == start_edge) {
            Some(p) if v >= self.n => rot[p..].iter().chain(rot[..p].iter()).copied().collect(),
            _ => rot.clone(),
        }
    }

    fn component_of(&self, v: usize) -> Vec<usize> {
        let mut seen = vec![false; self.num_vertices()];
        let mut out = vec![v];
        seen[v] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &e in &self.rotation[x] {
                let y = self.other_end(e, x);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }

    fn closed_key(&self, start: usize, start_edge: usize) -> String {
        let mut id: HashMap<usize, usize> = HashMap::new();
        let mut entry: HashMap<usize, usize> = HashMap::new();
        id.insert(start, 0);
        entry.insert(start, start_edge);
        let mut q = VecDeque::from([start]);
        let mut s = String::new();
        while let Some(v) = q.pop_front() {
            s.push_str(&format!("{}{}:", id[&v], self.colors[v].as_char()));
            for e in self.cyclic_from(v, entry[&v]) {
                let w = self.other_end(e, v);
                if !id.contains_key(&w) {
                    id.insert(w, id.len());
                    entry.insert(w, e);
                    q.push_back(w);
                }
                s.push_str(&format!("{}x{},", id[&w], self.edges[e].mult));
            }
            s.push(';');
        }
        s
    }
}

/// Subsets of `[r]` of size `m` ordered lexicographically by sorted elements.
fn sets_in_lex_order(r: usize, m: usize) -> Vec<LabelSet> {
    crate::subsets::k_subsets(r, m).into_iter().map(|s| s.0 as LabelSet).collect()
}

/// A formal rational combination of webs, merged by canonical key.
#[derive(Clone, Debug, Default)]
pub struct WebCombination {
    terms: BTreeMap<String, (Q, Web)>,
}

impl WebCombination {
    pub fn new() -> WebCombination {
        WebCombination::default()
    }

    pub fn single(w: Web) -> WebCombination {
        let mut c = WebCombination::new();
        c.add(Q::from_integer(1.into()), w);
        c
    }

    pub fn add(&mut self, coeff: Q, w: Web) {
        if coeff.is_zero() {
            return;
        }
        let key = w.canonical_key();
        let remove = {
            let slot = self.terms.entry(key.clone()).or_insert_with(|| (Q::zero(), w));
            slot.0 += coeff;
            slot.0.is_zero()
        };
        if remove {
            self.terms.remove(&key);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Q, &Web)> {
        self.terms.values().map(|(c, w)| (c, w))
    }

    pub fn keyed_terms(&self) -> impl Iterator<Item = (&String, &Q, &Web)> {
        self.terms.iter().map(|(k, (c, w))| (k, c, w))
    }

    pub fn total_coefficient(&self) -> Q {
        self.terms.values().fold(Q::zero(), |a, (c, _)| a + c)
    }
}

// ---- JSON ----

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WebVertexJson {
    pub id: i64,
    pub color: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WebEdgeJson {
    pub id: i64,
    pub ends: [i64; 2],
    #[serde(default = "one")]
    pub mult: usize,
}

fn one() -> usize {
    1
}

/// Serialized web: boundary vertex `i` has id `-i`; `boundary[i-1]` lists
/// its edges counterclockwise.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WebJson {
    pub r: usize,
    pub n: usize,
    pub vertices: Vec<WebVertexJson>,
    pub edges: Vec<WebEdgeJson>,
    pub boundary: Vec<Vec<i64>>,
    pub rotation: BTreeMap<String, Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planar: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WebTermJson {
    pub coeff: String,
    pub web: WebJson,
}

impl Web {
    pub fn to_json(&self) -> WebJson {
        let n = self.n;
        let vid = |v: usize| if v < n { -(v as i64 + 1) } else { (v - n + 1) as i64 };
        WebJson {
            r: self.r,
            n,
            vertices: (n..self.num_vertices())
                .map(|v| WebVertexJson { id: vid(v), color: self.colors[v].as_char().to_string() })
                .collect(),
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(e, ed)| WebEdgeJson { id: e as i64 + 1, ends: [vid(ed.ends[0]), vid(ed.ends[1])], mult: ed.mult })
                .collect(),
            boundary: (0..n).map(|v| self.rotation[v].iter().map(|&e| e as i64 + 1).collect()).collect(),
            rotation: (n..self.num_vertices())
                .map(|v| (vid(v).to_string(), self.rotation[v].iter().map(|&e| e as i64 + 1).collect()))
                .collect(),
            planar: Some(self.planar),
        }
    }

    pub fn from_json(j: &WebJson) -> Result<Web> {
        let n = j.n;
        let mut index: HashMap<i64, usize> = (1..=n as i64).map(|i| (-i, (i - 1) as usize)).collect();
        let mut colors = vec![Color::Black; n];
        for v in &j.vertices {
            if v.id < 0 {
                return Err(Error::InvalidWeb(format!("internal vertex id {} must be non-negative", v.id)));
            }
            if index.insert(v.id, colors.len()).is_some() {
                return Err(Error::InvalidWeb(format!("duplicate vertex id {}", v.id)));
            }
            colors.push(parse_color(&v.color)?);
        }
        let mut eindex = HashMap::new();
        let mut edges = Vec::new();
        for (t, e) in j.edges.iter().enumerate() {
            let look = |x: i64| index.get(&x).copied().ok_or_else(|| Error::InvalidWeb(format!("edge {} endpoint {x}", e.id)));
            edges.push(WebEdge { ends: [look(e.ends[0])?, look(e.ends[1])?], mult: e.mult });
            if eindex.insert(e.id, t).is_some() {
                return Err(Error::InvalidWeb(format!("duplicate edge id {}", e.id)));
            }
        }
        let look_e = |x: &i64| eindex.get(x).copied().ok_or_else(|| Error::InvalidWeb(format!("unknown edge {x}")));
        if j.boundary.len() != n {
            return Err(Error::InvalidWeb("boundary list must have n entries".into()));
        }
        let mut rotation = vec![Vec::new(); colors.len()];
        for (i, list) in j.boundary.iter().enumerate() {
            rotation[i] = list.iter().map(look_e).collect::<Result<_>>()?;
        }
        for v in &j.vertices {
            let list = j
                .rotation
                .get(&v.id.to_string())
                .ok_or_else(|| Error::InvalidWeb(format!("no rotation for vertex {}", v.id)))?;
            rotation[index[&v.id]] = list.iter().map(look_e).collect::<Result<_>>()?;
        }
        let w = Web::new(j.r, n, colors, edges, rotation)?;
        Ok(match j.planar {
            Some(false) => w.with_planar_flag(false),
            _ => w,
        })
    }
}

impl WebCombination {
    pub fn to_json(&self) -> Vec<WebTermJson> {
        self.terms().map(|(c, w)| WebTermJson { coeff: c.to_string(), web: w.to_json() }).collect()
    }

    pub fn from_json(terms: &[WebTermJson]) -> Result<WebCombination> {
        let mut c = WebCombination::new();
        for t in terms {
            c.add(crate::subsets::parse_rational(&t.coeff)?, Web::from_json(&t.web)?);
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    fn tripod() -> Web {
        Web::from_claws(3, 3, &[vec![1, 2, 3]]).unwrap()
    }

    fn sets(v: &[&[usize]]) -> BoundaryCondition {
        v.iter().map(|s| label_set(s)).collect()
    }

    #[test]
    fn tripod_labelings() {
        let t = tripod();
        assert_eq!(t.count_labelings(&sets(&[&[1], &[2], &[3]])).unwrap(), 1);
        assert_eq!(t.count_labelings(&sets(&[&[1], &[1], &[2]])).unwrap(), 0);
        assert_eq!(t.evaluate_word(&[1, 2, 3]).unwrap(), 1);
        assert_eq!(t.evaluate_word(&[2, 1, 3]).unwrap(), -1);
        assert!(t.count_labelings(&sets(&[&[1, 2], &[2], &[3]])).is_err());
        let (w, _, sign) = t.word_and_sign().unwrap();
        assert_eq!((w, sign), (vec![1, 2, 3], 1));
        assert_eq!(t.tableau_of_web().unwrap().to_rows(), vec![vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn sl2_arc() {
        let a = Web::from_claws(2, 2, &[vec![1, 2]]).unwrap();
        assert_eq!(a.count_labelings(&sets(&[&[1], &[2]])).unwrap(), 1);
        assert_eq!(a.count_labelings(&sets(&[&[1], &[1]])).unwrap(), 0);
        let m = Web::from_claws(2, 4, &[vec![1, 2], vec![3, 4]]).unwrap();
        assert_eq!(m.word_and_sign().unwrap().0, vec![1, 2, 1, 2]);
    }

    #[test]
    fn two_tripods_word() {
        let w = Web::from_claws(3, 6, &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        let (word, _, sign) = w.word_and_sign().unwrap();
        assert_eq!(word, vec![1, 2, 3, 1, 2, 3]);
        // 2>1, 3>1, 3>2: three inversions.
        assert_eq!(sign, -1);
    }

    #[test]
    fn content_condition_forces_zero() {
        let w = Web::from_claws(3, 6, &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        for word in [[1, 1, 2, 2, 3, 3], [1, 2, 3, 1, 2, 2]] {
            assert_eq!(w.evaluate_word(&word).unwrap(), 0);
        }
    }

    #[test]
    fn fp_tripod_is_determinant() {
        let t = tripod();
        let mut rng = Rng::new(9);
        for _ in 0..5 {
            let m = rng.generic_point(3, 3, 9);
            let det = crate::linalg::det(m.rows());
            assert_eq!(t.evaluate_fp_at_point(&m).unwrap(), det * Q::from_integer(FP_ORIENTATION.into()));
        }
    }

    #[test]
    fn fp_multiplicative_on_disjoint_union() {
        let u = Web::from_claws(3, 6, &[vec![1, 3, 5], vec![2, 4, 6]]).unwrap().with_planar_flag(false);
        assert!(!u.is_planar());
        let a = Web::from_claws(3, 3, &[vec![1, 2, 3]]).unwrap();
        for word in crate::subsets::balanced_words(3, 2) {
            let left = u.evaluate_fp_word(&word).unwrap();
            let r1 = a.evaluate_fp_word(&[word[0], word[2], word[4]]).unwrap();
            let r2 = a.evaluate_fp_word(&[word[1], word[3], word[5]]).unwrap();
            assert_eq!(left, r1 * r2);
        }
    }

    #[test]
    fn rotation_and_reflection_relabel() {
        let w = Web::from_claws(3, 6, &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        let mut cur = w.clone();
        for _ in 0..6 {
            cur = cur.rotate();
        }
        assert_eq!(cur.canonical_key(), w.canonical_key());
        let rot = w.rotate();
        assert!(rot.has_fork(6, 1));
        assert!(rot.has_fork(1, 2) && !rot.has_fork(2, 3));
        assert_eq!(w.reflect().reflect().canonical_key(), w.canonical_key());
        assert!(w.has_fork(1, 2) && w.has_fork(2, 3) && !w.has_fork(3, 4));
    }

    #[test]
    fn clasp_unclasp() {
        let w = Web::from_claws(3, 6, &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        let (u, groups) = w.unclasp().unwrap();
        assert_eq!(groups, vec![1; 6]);
        assert_eq!(u.canonical_key(), w.canonical_key());
        let c = w.clasp(&[2, 1, 1, 1, 1]).unwrap();
        assert_eq!(c.degree(), vec![2, 1, 1, 1, 1]);
        assert!(c.is_semistandard() && !c.is_dual_semistandard());
        let (back, g) = c.unclasp().unwrap();
        assert_eq!(g, vec![2, 1, 1, 1, 1]);
        assert_eq!(back.canonical_key(), w.canonical_key());
        assert!(w.clasp(&[2, 2]).is_err());
    }

    #[test]
    fn normalization_suppresses_pairs() {
        let mut b = WebBuilder::new(2, 2);
        let w1 = b.add_vertex(Color::White);
        let b1 = b.add_vertex(Color::Black);
        let w2 = b.add_vertex(Color::White);
        b.add_edge(0, w1, 1);
        b.add_edge(w1, b1, 1);
        b.add_edge(b1, w2, 1);
        b.add_edge(w2, 1, 1);
        let long = b.build().unwrap();
        let short = Web::from_claws(2, 2, &[vec![1, 2]]).unwrap();
        assert_eq!(long.canonical_key(), short.canonical_key());
    }

    #[test]
    fn json_roundtrip() {
        let w = Web::from_claws(3, 6, &[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        let s = serde_json::to_string(&w.to_json()).unwrap();
        let back = Web::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back.canonical_key(), w.canonical_key());
        let mut comb = WebCombination::new();
        comb.add(Q::from_integer(1.into()), w.clone());
        comb.add(Q::from_integer((-1).into()), w.rotate());
        let s = serde_json::to_string(&comb.to_json()).unwrap();
        let back = WebCombination::from_json(&serde_json::from_str::<Vec<WebTermJson>>(&s).unwrap()).unwrap();
        assert_eq!(back.len(), 2);
    }

    #[test]
    fn invalid_webs_rejected() {
        let mut b = WebBuilder::new(3, 2);
        let w = b.add_vertex(Color::White);
        b.add_edge(0, w, 1);
        b.add_edge(1, w, 1);
        assert!(b.build().is_err());
    }
}
