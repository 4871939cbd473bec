//! Dimer covers of plabic graphs, edge and face weights, the boundary
//! measurement map, and the web combinations built from covers.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::par::Exec;
use crate::plabic::{PlabicGraph, PlabicJson};
use crate::plucker::{Monomial, PluckerPoly, PluckerVector};
use crate::rng::Rng;
use crate::subsets::{k_subsets, parse_rational, KSet};
use crate::webs::{Web, WebCombination, WebEdge};
use crate::{Error, Result, Q};

/// A plabic graph with a nonzero rational weight on every edge.
#[derive(Clone, Debug)]
pub struct Network {
    graph: PlabicGraph,
    weights: Vec<Q>,
}

impl Network {
    pub fn new(graph: PlabicGraph, weights: Vec<Q>) -> Result<Network> {
        if weights.len() != graph.num_edges() {
            return Err(Error::SizeMismatch(format!(
                "{} weights for {} edges",
                weights.len(),
                graph.num_edges()
            )));
        }
        if let Some(e) = weights.iter().position(Zero::is_zero) {
            return Err(Error::InvalidGraph(format!("edge {} has weight 0", graph.edge_id(e))));
        }
        Ok(Network { graph, weights })
    }

    pub fn unit(graph: PlabicGraph) -> Network {
        let weights = vec![Q::one(); graph.num_edges()];
        Network { graph, weights }
    }

    /// Positive random weights `p/q` with `1 <= p, q <= bound`.
    pub fn random(graph: PlabicGraph, rng: &mut Rng, bound: i64) -> Network {
        let weights = (0..graph.num_edges()).map(|_| rng.positive_rational(bound)).collect();
        Network { graph, weights }
    }

    pub fn graph(&self) -> &PlabicGraph {
        &self.graph
    }

    pub fn weight(&self, e: usize) -> &Q {
        &self.weights[e]
    }

    pub fn to_json(&self) -> NetworkJson {
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(e, w)| (self.graph.edge_id(e).to_string(), w.to_string()))
            .collect();
        NetworkJson { graph: self.graph.to_json(), weights }
    }

    pub fn from_json(j: &NetworkJson) -> Result<Network> {
        let graph = PlabicGraph::from_json(&j.graph)?;
        let mut weights = vec![None; graph.num_edges()];
        for (id, w) in &j.weights {
            let id: i64 = id.parse().map_err(|_| Error::Parse(format!("bad edge id {id:?}")))?;
            let e = graph.edge_index(id).ok_or_else(|| Error::Parse(format!("weight for unknown edge {id}")))?;
            weights[e] = Some(parse_rational(w)?);
        }
        let weights = weights
            .into_iter()
            .enumerate()
            .map(|(e, w)| w.ok_or_else(|| Error::Parse(format!("edge {} has no weight", graph.edge_id(e)))))
            .collect::<Result<Vec<_>>>()?;
        Network::new(graph, weights)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NetworkJson {
    pub graph: PlabicJson,
    /// Edge id to rational weight `"p/q"`.
    pub weights: BTreeMap<String, String>,
}

/// An edge multiset meeting every internal vertex `r` times and boundary
/// vertex `i` exactly `lambda[i-1]` times.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimerCover {
    pub mult: Vec<u8>,
    pub r: usize,
    pub lambda: Vec<usize>,
}

impl DimerCover {
    /// Check the multiplicity invariants against `g`.
    pub fn validate(&self, g: &PlabicGraph) -> Result<()> {
        if self.mult.len() != g.num_edges() || self.lambda.len() != g.n() {
            return Err(Error::SizeMismatch("cover does not belong to this graph".into()));
        }
        let mut sums = vec![0usize; g.num_vertices()];
        for (e, &m) in self.mult.iter().enumerate() {
            for v in g.ends(e) {
                sums[v] += m as usize;
            }
        }
        for (v, &s) in sums.iter().enumerate() {
            let want = if v < g.n() { self.lambda[v] } else { self.r };
            if s != want {
                return Err(Error::InvalidGraph(format!("vertex {} meets the cover {s} times, expected {want}", g.vertex_id(v))));
            }
        }
        Ok(())
    }

    /// Sum of two covers on the same graph.
    pub fn join(&self, other: &DimerCover) -> DimerCover {
        DimerCover {
            mult: self.mult.iter().zip(&other.mult).map(|(a, b)| a + b).collect(),
            r: self.r + other.r,
            lambda: self.lambda.iter().zip(&other.lambda).map(|(a, b)| a + b).collect(),
        }
    }

    /// Boundary labels whose leg is used (for 1-dimer covers, the set `I`).
    pub fn boundary_set(&self) -> KSet {
        let elems: Vec<usize> = (1..=self.lambda.len()).filter(|&i| self.lambda[i - 1] > 0).collect();
        KSet::from_elems(&elems)
    }
}

struct Search<'a> {
    g: &'a PlabicGraph,
    r: usize,
    order: Vec<usize>,
    incident: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn new(g: &PlabicGraph, r: usize) -> Search<'_> {
        let nv = g.num_vertices();
        let mut incident = vec![Vec::new(); nv];
        for e in 0..g.num_edges() {
            for v in g.ends(e) {
                incident[v].push(e);
            }
        }
        // Breadth-first from the boundary so that forced legs prune early.
        let mut seen = vec![false; nv];
        let mut order = Vec::new();
        let mut queue: std::collections::VecDeque<usize> = (0..g.n()).collect();
        for s in seen.iter_mut().take(g.n()) {
            *s = true;
        }
        while let Some(v) = queue.pop_front() {
            if v >= g.n() {
                order.push(v);
            }
            for &e in &incident[v] {
                let w = g.other_end(e, v);
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        for (v, s) in seen.iter().enumerate() {
            if !s {
                order.push(v);
            }
        }
        Search { g, r, order, incident }
    }

    /// Remaining capacity can still be met by the unassigned edges at `v`.
    fn feasible(&self, v: usize, rem: &[usize], mult: &[Option<u8>]) -> bool {
        let mut room = 0;
        for &e in &self.incident[v] {
            if mult[e].is_none() {
                room += rem[self.g.other_end(e, v)].min(self.r);
            }
        }
        rem[v] <= room
    }

    fn run(&self, rem: &mut Vec<usize>, mult: &mut Vec<Option<u8>>, depth: usize, out: &mut Vec<Vec<u8>>) {
        if depth == self.order.len() {
            if rem.iter().all(|&x| x == 0) {
                out.push(mult.iter().map(|m| m.unwrap_or(0)).collect());
            }
            return;
        }
        let v = self.order[depth];
        let free: Vec<usize> = self.incident[v].iter().copied().filter(|&e| mult[e].is_none()).collect();
        self.distribute(v, &free, 0, rem, mult, depth, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn distribute(
        &self,
        v: usize,
        free: &[usize],
        idx: usize,
        rem: &mut Vec<usize>,
        mult: &mut Vec<Option<u8>>,
        depth: usize,
        out: &mut Vec<Vec<u8>>,
    ) {
        if idx == free.len() {
            if rem[v] != 0 {
                return;
            }
            self.run(rem, mult, depth + 1, out);
            return;
        }
        let e = free[idx];
        let w = self.g.other_end(e, v);
        let last = idx + 1 == free.len();
        let hi = rem[v].min(rem[w]);
        let lo = if last { rem[v] } else { 0 };
        if lo > hi {
            return;
        }
        for m in lo..=hi {
            mult[e] = Some(m as u8);
            rem[v] -= m;
            rem[w] -= m;
            if self.feasible(w, rem, mult) {
                self.distribute(v, free, idx + 1, rem, mult, depth, out);
            }
            rem[v] += m;
            rem[w] += m;
        }
        mult[e] = None;
    }
}

fn enumerate_raw(g: &PlabicGraph, r: usize, lambda: &[usize], exec: Exec) -> Vec<Vec<u8>> {
    let s = Search::new(g, r);
    let mut rem: Vec<usize> = (0..g.num_vertices()).map(|v| if v < g.n() { lambda[v] } else { r }).collect();
    let mut mult: Vec<Option<u8>> = vec![None; g.num_edges()];
    // Legs are forced by lambda.
    for i in 1..=g.n() {
        let e = g.leg(i);
        let m = lambda[i - 1];
        let w = g.other_end(e, i - 1);
        if rem[w] < m {
            return Vec::new();
        }
        mult[e] = Some(m as u8);
        rem[i - 1] = 0;
        rem[w] -= m;
    }
    if s.order.is_empty() {
        let mut out = Vec::new();
        s.run(&mut rem, &mut mult, 0, &mut out);
        return out;
    }
    // Split at the first vertex: enumerate its local choices, then finish
    // each branch independently.
    let v = s.order[0];
    let free: Vec<usize> = s.incident[v].iter().copied().filter(|&e| mult[e].is_none()).collect();
    let mut branches = Vec::new();
    first_choices(&s, v, &free, 0, &mut rem.clone(), &mut mult.clone(), &mut branches);
    let parts = exec.map(&branches, |(rem, mult)| {
        let mut out = Vec::new();
        s.run(&mut rem.clone(), &mut mult.clone(), 1, &mut out);
        out
    });
    let mut all: Vec<Vec<u8>> = parts.into_iter().flatten().collect();
    all.sort();
    all
}

fn first_choices(
    s: &Search<'_>,
    v: usize,
    free: &[usize],
    idx: usize,
    rem: &mut Vec<usize>,
    mult: &mut Vec<Option<u8>>,
    out: &mut Vec<(Vec<usize>, Vec<Option<u8>>)>,
) {
    if idx == free.len() {
        if rem[v] == 0 {
            out.push((rem.clone(), mult.clone()));
        }
        return;
    }
    let e = free[idx];
    let w = s.g.other_end(e, v);
    let last = idx + 1 == free.len();
    let hi = rem[v].min(rem[w]);
    let lo = if last { rem[v] } else { 0 };
    if lo > hi {
        return;
    }
    for m in lo..=hi {
        mult[e] = Some(m as u8);
        rem[v] -= m;
        rem[w] -= m;
        if s.feasible(w, rem, mult) {
            first_choices(s, v, free, idx + 1, rem, mult, out);
        }
        rem[v] += m;
        rem[w] += m;
    }
    mult[e] = None;
}

/// All `r`-dimer covers with boundary condition `lambda`, sorted
/// lexicographically by multiplicity vector (edges in graph order).
pub fn enumerate_dimer_covers(g: &PlabicGraph, r: usize, lambda: &[usize]) -> Result<Vec<DimerCover>> {
    enumerate_dimer_covers_with(g, r, lambda, Exec::default())
}

pub fn enumerate_dimer_covers_with(g: &PlabicGraph, r: usize, lambda: &[usize], exec: Exec) -> Result<Vec<DimerCover>> {
    if lambda.len() != g.n() {
        return Err(Error::SizeMismatch(format!("lambda has {} entries, graph has {} boundary vertices", lambda.len(), g.n())));
    }
    if r == 0 || r > 16 || lambda.iter().any(|&l| l > r) {
        return Ok(Vec::new());
    }
    Ok(enumerate_raw(g, r, lambda, exec)
        .into_iter()
        .map(|mult| DimerCover { mult, r, lambda: lambda.to_vec() })
        .collect())
}

/// `prod_e wt(e)^mult(e)`.
pub fn edge_weight(n: &Network, d: &DimerCover) -> Result<Q> {
    if d.mult.len() != n.weights.len() {
        return Err(Error::SizeMismatch("cover does not belong to this network".into()));
    }
    let mut w = Q::one();
    for (e, &m) in d.mult.iter().enumerate() {
        for _ in 0..m {
            w *= &n.weights[e];
        }
    }
    Ok(w)
}

/// Rejects graphs whose trip permutation is not `i -> i+k`.
pub fn require_top_cell(g: &PlabicGraph) -> Result<usize> {
    let n = g.n();
    let pi = g.trip_permutation();
    let k = g.k();
    let ok = (1..=n).all(|i| pi[i - 1] == (i - 1 + k) % n + 1);
    if !ok || k == 0 || k >= n {
        return Err(Error::Unsupported(format!("graph is not a reduced top cell graph (trip permutation {pi:?})")));
    }
    g.face_labels()?;
    Ok(k)
}

/// `Delta_I(N) = sum over 1-dimer covers using exactly the legs in I`.
pub fn boundary_measurement(n: &Network) -> Result<PluckerVector> {
    boundary_measurement_with(n, Exec::default())
}

pub fn boundary_measurement_with(net: &Network, exec: Exec) -> Result<PluckerVector> {
    let g = &net.graph;
    let k = require_top_cell(g)?;
    let n = g.n();
    let subsets = k_subsets(n, k);
    let values = exec.map(&subsets, |s| {
        let lambda: Vec<usize> = (1..=n).map(|i| usize::from(s.contains(i))).collect();
        let mut total = Q::zero();
        for mult in enumerate_raw(g, 1, &lambda, Exec::Sequential) {
            let d = DimerCover { mult, r: 1, lambda: lambda.clone() };
            total += edge_weight(net, &d).expect("cover matches network");
        }
        total
    });
    let map: HashMap<KSet, Q> = subsets.into_iter().zip(values).collect();
    Ok(PluckerVector::new(k, n, map))
}

/// `prod_f Delta_{I_f}^{r W_f - D_f - r}` over the disk faces.
pub fn face_weight(g: &PlabicGraph, d: &DimerCover) -> Result<PluckerPoly> {
    Ok(PluckerPoly::monomial(g.k(), g.n(), face_weight_monomial(g, d)?, Q::one()))
}

pub fn face_weight_monomial(g: &PlabicGraph, d: &DimerCover) -> Result<Monomial> {
    let labels = g.face_labels()?;
    let r = d.r as i32;
    let mut powers = Vec::new();
    for f in g.disk_faces() {
        let face = &g.faces()[f];
        let used: i32 = face.edges.iter().filter(|&&e| !g.is_leg(e)).map(|&e| d.mult[e] as i32).sum();
        let exp = r * face.white_vertices as i32 - used - r;
        powers.push((labels[f], exp));
    }
    Ok(Monomial::from_powers(powers))
}

/// The web on the same boundary keeping exactly the edges of `d`, with
/// their multiplicities and the inherited rotation.
pub fn weblike_subgraph(g: &PlabicGraph, d: &DimerCover) -> Result<Web> {
    let mut index = vec![usize::MAX; g.num_edges()];
    let mut edges = Vec::new();
    for (e, &m) in d.mult.iter().enumerate() {
        if m > 0 {
            index[e] = edges.len();
            edges.push(WebEdge { ends: g.ends(e), mult: m as usize });
        }
    }
    let colors = (0..g.num_vertices()).map(|v| g.color(v)).collect();
    let rotation = (0..g.num_vertices())
        .map(|v| g.rotation(v).into_iter().filter(|&e| d.mult[e] > 0).map(|e| index[e]).collect())
        .collect();
    Web::new(d.r, g.n(), colors, edges, rotation)
}

fn cover_degree(g: &PlabicGraph, lambda: &[usize]) -> Result<usize> {
    let k = g.k();
    let total: usize = lambda.iter().sum();
    if lambda.len() != g.n() || k == 0 || !total.is_multiple_of(k) || total == 0 {
        return Err(Error::DegreeMismatch(format!("lambda {lambda:?} is not a multiple of k = {k}")));
    }
    Ok(total / k)
}

/// `sum_D ewt_N(D) D`, merged by canonical web key.
pub fn web_r(n: &Network, lambda: &[usize]) -> Result<WebCombination> {
    let g = &n.graph;
    let r = cover_degree(g, lambda)?;
    let mut out = WebCombination::new();
    for d in enumerate_dimer_covers(g, r, lambda)? {
        out.add(edge_weight(n, &d)?, weblike_subgraph(g, &d)?);
    }
    Ok(out)
}

/// `sum_D fwt_G(D)(X(N)) D`, the face weights evaluated at the boundary
/// measurement of `n`.
pub fn web_r_twisted(n: &Network, lambda: &[usize]) -> Result<WebCombination> {
    let g = &n.graph;
    let r = cover_degree(g, lambda)?;
    let pv = boundary_measurement(n)?;
    let mut out = WebCombination::new();
    for d in enumerate_dimer_covers(g, r, lambda)? {
        let c = face_weight(g, &d)?.evaluate_vector(&pv).map_err(|e| match e {
            Error::PoleAtPoint(s) => Error::TwistUndefined(s),
            other => other,
        })?;
        out.add(c, weblike_subgraph(g, &d)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plabic::{make_claw_graph, make_rectangle_graph};
    use crate::plucker::twist_matrix;

    fn delta(n: usize, s: &[usize]) -> Vec<usize> {
        (1..=n).map(|i| usize::from(s.contains(&i))).collect()
    }

    /// Independent oracle: every edge-multiplicity vector in `[0, r]^E`.
    fn brute_force(g: &PlabicGraph, r: usize, lambda: &[usize]) -> Vec<Vec<u8>> {
        let ne = g.num_edges();
        let mut out = Vec::new();
        let mut m = vec![0u8; ne];
        loop {
            let d = DimerCover { mult: m.clone(), r, lambda: lambda.to_vec() };
            if d.validate(g).is_ok() {
                out.push(m.clone());
            }
            let mut i = 0;
            while i < ne && m[i] as usize == r {
                m[i] = 0;
                i += 1;
            }
            if i == ne {
                break;
            }
            m[i] += 1;
        }
        out.sort();
        out
    }

    #[test]
    fn claw_covers() {
        let g = make_claw_graph(4).unwrap();
        for i in 1..=4 {
            let covers = enumerate_dimer_covers(&g, 1, &delta(4, &[i])).unwrap();
            assert_eq!(covers.len(), 1);
            assert_eq!(covers[0].mult[g.leg(i)], 1);
        }
        let pv = boundary_measurement(&Network::unit(g)).unwrap();
        assert!(pv.sorted().iter().all(|(_, v)| v.is_one()));
    }

    #[test]
    fn matches_brute_force_on_gr24() {
        let g = make_rectangle_graph(2, 4).unwrap();
        assert!(g.num_edges() <= 30);
        for r in 1..=2 {
            for lambda in [vec![1, 1, 1, 1], vec![r, 0, r, 0], vec![1, 0, 1, 0], vec![2, 1, 1, 0]] {
                let got: Vec<Vec<u8>> =
                    enumerate_dimer_covers(&g, r, &lambda).unwrap().into_iter().map(|d| d.mult).collect();
                assert_eq!(got, brute_force(&g, r, &lambda), "r={r} lambda={lambda:?}");
            }
        }
    }

    #[test]
    fn sequential_equals_parallel() {
        let g = make_rectangle_graph(3, 6).unwrap();
        let a = enumerate_dimer_covers_with(&g, 2, &[1; 6], Exec::Sequential).unwrap();
        let b = enumerate_dimer_covers_with(&g, 2, &[1; 6], Exec::Parallel).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b);
        for d in &a {
            d.validate(&g).unwrap();
            assert!((1..=6).all(|i| d.mult[g.leg(i)] == 1));
        }
    }

    #[test]
    fn unit_gr24_measurement() {
        let g = make_rectangle_graph(2, 4).unwrap();
        let covers = enumerate_dimer_covers(&g, 1, &delta(4, &[1, 3])).unwrap();
        let pv = boundary_measurement(&Network::unit(g)).unwrap();
        let d = |a: usize, b: usize| pv.get(KSet::from_elems(&[a, b]));
        assert_eq!(Q::from_integer(covers.len().into()), d(1, 3));
        assert_eq!(d(1, 3) * d(2, 4), d(1, 2) * d(3, 4) + d(1, 4) * d(2, 3));
    }

    #[test]
    fn random_networks_satisfy_plucker_relations() {
        let mut rng = Rng::new(7);
        for (k, n) in [(2, 4), (2, 5), (3, 6)] {
            let g = make_rectangle_graph(k, n).unwrap();
            let net = Network::random(g.clone(), &mut rng, 9);
            let pv = boundary_measurement(&net).unwrap();
            pv.check_three_term_relations().unwrap();
            for i in 1..=n {
                let s: Vec<usize> = (0..k).map(|t| (i - 1 + t) % n + 1).collect();
                assert!(!pv.get(KSet::from_elems(&s)).is_zero());
            }
        }
    }

    #[test]
    fn edge_weight_semantics() {
        let g = make_claw_graph(3).unwrap();
        let mut w = vec![Q::one(); g.num_edges()];
        w[g.leg(2)] = Q::new(2.into(), 3.into());
        let net = Network::new(g.clone(), w).unwrap();
        let d = &enumerate_dimer_covers(&g, 1, &[0, 1, 0]).unwrap()[0];
        assert_eq!(edge_weight(&net, d).unwrap(), Q::new(2.into(), 3.into()));
        let dd = d.join(d);
        assert_eq!(edge_weight(&net, &dd).unwrap(), Q::new(4.into(), 9.into()));
        assert!(Network::new(g.clone(), vec![Q::zero(); g.num_edges()]).is_err());
    }

    #[test]
    fn marsh_scott_gr24_and_gr36() {
        let mut rng = Rng::new(11);
        for (k, n) in [(2, 4), (3, 6)] {
            let g = make_rectangle_graph(k, n).unwrap();
            let m = rng.generic_point(k, n, 9);
            let t = twist_matrix(&m).unwrap();
            for s in k_subsets(n, k) {
                let lambda: Vec<usize> = (1..=n).map(|i| usize::from(s.contains(i))).collect();
                let mut sum = Q::zero();
                for d in enumerate_dimer_covers(&g, 1, &lambda).unwrap() {
                    sum += face_weight(&g, &d).unwrap().evaluate(&m).unwrap();
                }
                assert_eq!(sum, t.minor(s), "I = {s}");
            }
        }
    }

    #[test]
    fn doubling_squares_face_weight() {
        let g = make_rectangle_graph(3, 6).unwrap();
        for d in enumerate_dimer_covers(&g, 1, &delta(6, &[1, 3, 5])).unwrap() {
            let f = face_weight(&g, &d).unwrap();
            assert_eq!(face_weight(&g, &d.join(&d)).unwrap(), f.mul(&f));
        }
    }

    #[test]
    fn weblike_subgraphs() {
        let g = make_rectangle_graph(3, 6).unwrap();
        for d in enumerate_dimer_covers(&g, 1, &delta(6, &[2, 4, 6])).unwrap() {
            let w = weblike_subgraph(&g, &d).unwrap();
            assert_eq!(w.degree(), delta(6, &[2, 4, 6]));
            assert!(w.is_planar());
        }
        for d in enumerate_dimer_covers(&g, 2, &[1; 6]).unwrap().iter().take(20) {
            let w = weblike_subgraph(&g, d).unwrap();
            assert_eq!(w.degree(), vec![1; 6]);
        }
    }

    #[test]
    fn web_r_mass_is_measurement() {
        let mut rng = Rng::new(3);
        let g = make_rectangle_graph(2, 5).unwrap();
        let net = Network::random(g, &mut rng, 5);
        let pv = boundary_measurement(&net).unwrap();
        let comb = web_r(&net, &delta(5, &[2, 5])).unwrap();
        assert_eq!(comb.total_coefficient(), pv.get(KSet::from_elems(&[2, 5])));
    }

    #[test]
    fn network_json_roundtrip() {
        let mut rng = Rng::new(1);
        let net = Network::random(make_rectangle_graph(2, 4).unwrap(), &mut rng, 7);
        let j = serde_json::to_string(&net.to_json()).unwrap();
        let back = Network::from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(back.weights, net.weights);
    }
}
