//! Plabic graphs as rotation systems: trips, faces, face labels, and the
//! standard top-cell grid graph.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::subsets::KSet;
use crate::{Color, Error, Result};

/// A face of the disk, as traced by the rotation system.
#[derive(Clone, Debug)]
pub struct Face {
    /// Half-edges bounding the face, each with the face on its left.
    pub half_edges: Vec<usize>,
    /// Real (non-arc) edges on the face, without repetition.
    pub edges: Vec<usize>,
    /// Distinct white vertices on the face.
    pub white_vertices: usize,
    /// Whether the face touches the boundary circle.
    pub is_boundary: bool,
}

/// One trip: the half-edges traversed, starting at boundary `start`.
#[derive(Clone, Debug)]
pub struct Trip {
    pub start: usize,
    pub end: usize,
    pub half_edges: Vec<usize>,
}

#[derive(Clone, Debug)]
struct Derived {
    faces: Vec<Face>,
    face_of: Vec<usize>,
    outer: usize,
    trips: Vec<Trip>,
}

/// A properly bicolored plabic graph with boundary labels `1..n` clockwise.
///
/// Vertex `i-1` is boundary vertex `i`; internal vertices follow. Edge `e`
/// has half-edges `2e` (from `ends[0]`) and `2e+1`. The boundary circle is
/// modelled by `n` virtual arc edges `E..E+n`, arc `i` joining boundary `i+1`
/// and `i+2` (0-based `i`, cyclically).
#[derive(Debug)]
pub struct PlabicGraph {
    n: usize,
    colors: Vec<Color>,
    vertex_ids: Vec<i64>,
    ends: Vec<[usize; 2]>,
    edge_ids: Vec<i64>,
    /// Outgoing half-edges in counterclockwise order, arcs included.
    rotation: Vec<Vec<usize>>,
    derived: Derived,
    labels: OnceLock<std::result::Result<Vec<KSet>, String>>,
}

impl Clone for PlabicGraph {
    fn clone(&self) -> Self {
        PlabicGraph {
            n: self.n,
            colors: self.colors.clone(),
            vertex_ids: self.vertex_ids.clone(),
            ends: self.ends.clone(),
            edge_ids: self.edge_ids.clone(),
            rotation: self.rotation.clone(),
            derived: self.derived.clone(),
            labels: OnceLock::new(),
        }
    }
}

impl PlabicGraph {
    /// Build from internal vertex colors (with ids), edges (with ids,
    /// endpoints given as vertex indices) and counterclockwise edge orders of
    /// the internal vertices.
    pub fn from_parts(
        n: usize,
        internal: Vec<(i64, Color)>,
        edges: Vec<(i64, [usize; 2])>,
        internal_rotation: Vec<Vec<usize>>,
    ) -> Result<PlabicGraph> {
        if n == 0 {
            return Err(Error::InvalidGraph("no boundary vertices".into()));
        }
        let nv = n + internal.len();
        let mut colors = vec![Color::Black; n];
        let mut vertex_ids: Vec<i64> = (1..=n as i64).map(|i| -i).collect();
        for (id, c) in &internal {
            colors.push(*c);
            vertex_ids.push(*id);
        }
        let ne = edges.len();
        let mut ends = Vec::with_capacity(ne + n);
        let mut edge_ids = Vec::with_capacity(ne);
        for (id, [a, b]) in &edges {
            if *a >= nv || *b >= nv {
                return Err(Error::InvalidGraph(format!("edge {id} has an unknown endpoint")));
            }
            if colors[*a] == colors[*b] {
                return Err(Error::InvalidGraph(format!("edge {id} joins two vertices of the same color")));
            }
            ends.push([*a, *b]);
            edge_ids.push(*id);
        }
        let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
        for (e, [a, b]) in ends.iter().enumerate() {
            incident[*a].push(e);
            incident[*b].push(e);
        }
        for i in 0..n {
            if incident[i].len() != 1 {
                return Err(Error::InvalidGraph(format!(
                    "boundary vertex {} has {} incident edges",
                    i + 1,
                    incident[i].len()
                )));
            }
        }
        if internal_rotation.len() != internal.len() {
            return Err(Error::InvalidGraph("rotation missing for some internal vertex".into()));
        }
        for (idx, rot) in internal_rotation.iter().enumerate() {
            let v = n + idx;
            if incident[v].is_empty() {
                return Err(Error::DanglingVertex(vertex_ids[v]));
            }
            let mut a = rot.clone();
            let mut b = incident[v].clone();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(Error::InvalidGraph(format!(
                    "rotation at vertex {} does not list its incident edges",
                    vertex_ids[v]
                )));
            }
            if ends.iter().enumerate().any(|(e, [x, y])| x == y && rot.contains(&e)) {
                return Err(Error::InvalidGraph("loops are not allowed".into()));
            }
        }
        for i in 0..n {
            ends.push([i, (i + 1) % n]);
        }
        let out_half = |e: usize, v: usize| if ends[e][0] == v { 2 * e } else { 2 * e + 1 };
        let mut rotation: Vec<Vec<usize>> = Vec::with_capacity(nv);
        for i in 0..n {
            let leg = incident[i][0];
            let arc_next = ne + i;
            let arc_prev = ne + (i + n - 1) % n;
            let mut r = vec![out_half(leg, i), 2 * arc_next];
            r.push(2 * arc_prev + 1);
            rotation.push(r);
        }
        for (idx, rot) in internal_rotation.iter().enumerate() {
            let v = n + idx;
            rotation.push(rot.iter().map(|&e| out_half(e, v)).collect());
        }
        let derived = derive(n, &colors, &ends, ne, &rotation)?;
        let g = PlabicGraph { n, colors, vertex_ids, ends, edge_ids, rotation, derived, labels: OnceLock::new() };
        let v = g.num_vertices() as i64;
        let e = (g.num_edges() + n) as i64;
        let f = (g.derived.faces.len()) as i64;
        if v - e + f != 2 {
            return Err(Error::InvalidGraph(format!("Euler check failed: V-E+F = {}", v - e + f)));
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `#internal white - #internal black`.
    pub fn k(&self) -> usize {
        let w = self.colors[self.n..].iter().filter(|&&c| c == Color::White).count();
        let b = self.colors[self.n..].len() - w;
        w.saturating_sub(b)
    }

    pub fn num_vertices(&self) -> usize {
        self.colors.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_ids.len()
    }

    pub fn color(&self, v: usize) -> Color {
        self.colors[v]
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        v < self.n
    }

    pub fn vertex_id(&self, v: usize) -> i64 {
        self.vertex_ids[v]
    }

    pub fn edge_id(&self, e: usize) -> i64 {
        self.edge_ids[e]
    }

    pub fn edge_index(&self, id: i64) -> Option<usize> {
        self.edge_ids.iter().position(|&x| x == id)
    }

    pub fn ends(&self, e: usize) -> [usize; 2] {
        self.ends[e]
    }

    pub fn other_end(&self, e: usize, v: usize) -> usize {
        let [a, b] = self.ends[e];
        if a == v {
            b
        } else {
            a
        }
    }

    /// Edge attached to boundary vertex `i` (1-based label).
    pub fn leg(&self, i: usize) -> usize {
        self.rotation[i - 1][0] / 2
    }

    /// Whether `e` is incident to a boundary vertex.
    pub fn is_leg(&self, e: usize) -> bool {
        let [a, b] = self.ends[e];
        a < self.n || b < self.n
    }

    /// Real edges around `v` in counterclockwise order.
    pub fn rotation(&self, v: usize) -> Vec<usize> {
        self.rotation[v].iter().map(|h| h / 2).filter(|&e| e < self.num_edges()).collect()
    }

    pub fn faces(&self) -> &[Face] {
        &self.derived.faces
    }

    /// Indices of the disk faces (all faces except the outer region).
    pub fn disk_faces(&self) -> Vec<usize> {
        (0..self.derived.faces.len()).filter(|&f| f != self.derived.outer).collect()
    }

    pub fn trips(&self) -> &[Trip] {
        &self.derived.trips
    }

    /// `pi(i)` as a vector indexed by `i-1`.
    pub fn trip_permutation(&self) -> Vec<usize> {
        self.derived.trips.iter().map(|t| t.end).collect()
    }

    /// Face labels indexed by face index (the outer face gets the empty set).
    pub fn face_labels(&self) -> Result<&[KSet]> {
        self.labels
            .get_or_init(|| self.compute_labels())
            .as_deref()
            .map_err(|e| Error::NotReduced(e.clone()))
    }

    fn compute_labels(&self) -> std::result::Result<Vec<KSet>, String> {
        let ne = self.num_edges();
        let mut used = vec![0u8; 2 * ne];
        for t in &self.derived.trips {
            let mut seen = std::collections::HashSet::new();
            for &h in &t.half_edges {
                if !seen.insert(h / 2) {
                    return Err(format!("trip from {} passes an edge twice", t.start));
                }
                used[h] += 1;
            }
        }
        if used.contains(&0) {
            return Err("graph has a closed trip".into());
        }
        let k = self.k();
        let first = self.labels_for_side(false);
        if self.labels_valid(&first, k) {
            return Ok(first);
        }
        let second = self.labels_for_side(true);
        if self.labels_valid(&second, k) {
            return Ok(second);
        }
        Err("face labels are not of size k with consecutive boundary labels".into())
    }

    fn labels_valid(&self, labels: &[KSet], k: usize) -> bool {
        let d = &self.derived;
        for f in 0..d.faces.len() {
            if f == d.outer {
                continue;
            }
            if labels[f].len() != k {
                return false;
            }
        }
        (0..self.n).all(|i| {
            let f = self.boundary_face(i + 1);
            let expect: Vec<usize> = (1..=k).map(|t| (i + t) % self.n + 1).collect();
            labels[f] == KSet::from_elems(&expect)
        })
    }

    fn labels_for_side(&self, right: bool) -> Vec<KSet> {
        let d = &self.derived;
        let ne = self.num_edges();
        let mut labels = vec![KSet(0); d.faces.len()];
        for t in &d.trips {
            let trip_edges: std::collections::HashSet<usize> = t.half_edges.iter().map(|h| h / 2).collect();
            let mut seen = vec![false; d.faces.len()];
            let mut queue = VecDeque::new();
            for &h in &t.half_edges {
                let f = d.face_of[if right { h ^ 1 } else { h }];
                if f != d.outer && !seen[f] {
                    seen[f] = true;
                    queue.push_back(f);
                }
            }
            while let Some(f) = queue.pop_front() {
                for &h in &d.faces[f].half_edges {
                    let e = h / 2;
                    if e >= ne || trip_edges.contains(&e) {
                        continue;
                    }
                    let g = d.face_of[h ^ 1];
                    if g != d.outer && !seen[g] {
                        seen[g] = true;
                        queue.push_back(g);
                    }
                }
            }
            for (f, s) in seen.iter().enumerate() {
                if *s {
                    labels[f].insert(t.end);
                }
            }
        }
        labels
    }

    /// Face index on the left of half-edge `h`.
    pub fn face_of_half_edge(&self, h: usize) -> usize {
        self.derived.face_of[h]
    }

    /// The disk face touching the boundary circle between boundary `i` and
    /// `i+1` (cyclically).
    pub fn boundary_face(&self, i: usize) -> usize {
        let h = 2 * (self.num_edges() + i - 1);
        let f = self.derived.face_of[h];
        if f == self.derived.outer {
            self.derived.face_of[h ^ 1]
        } else {
            f
        }
    }

    pub fn outer_face(&self) -> usize {
        self.derived.outer
    }
}

fn derive(n: usize, colors: &[Color], ends: &[[usize; 2]], ne: usize, rotation: &[Vec<usize>]) -> Result<Derived> {
    let nh = 2 * ends.len();
    let head = |h: usize| if h.is_multiple_of(2) { ends[h / 2][1] } else { ends[h / 2][0] };
    let mut pos = vec![usize::MAX; nh];
    for rot in rotation {
        for (p, &h) in rot.iter().enumerate() {
            pos[h] = p;
        }
    }
    if pos.contains(&usize::MAX) {
        return Err(Error::InvalidGraph("rotation system does not cover every half-edge".into()));
    }
    let mut face_of = vec![usize::MAX; nh];
    let mut faces = Vec::new();
    for start in 0..nh {
        if face_of[start] != usize::MAX {
            continue;
        }
        let fid = faces.len();
        let mut hs = Vec::new();
        let mut h = start;
        while face_of[h] == usize::MAX {
            face_of[h] = fid;
            hs.push(h);
            let w = head(h);
            let rot = &rotation[w];
            let p = pos[h ^ 1];
            h = rot[(p + rot.len() - 1) % rot.len()];
        }
        if h != start {
            return Err(Error::InvalidGraph("face tracing did not close up".into()));
        }
        let mut edges: Vec<usize> = hs.iter().map(|h| h / 2).filter(|&e| e < ne).collect();
        edges.sort_unstable();
        edges.dedup();
        let mut whites: Vec<usize> = hs.iter().map(|&h| head(h)).filter(|&v| colors[v] == Color::White).collect();
        whites.sort_unstable();
        whites.dedup();
        let is_boundary = hs.iter().any(|h| h / 2 >= ne);
        faces.push(Face { half_edges: hs, edges, white_vertices: whites.len(), is_boundary });
    }
    let outer = faces
        .iter()
        .position(|f| f.half_edges.iter().all(|h| h / 2 >= ne))
        .ok_or_else(|| Error::InvalidGraph("no outer face".into()))?;

    let mut trips = Vec::with_capacity(n);
    for i in 0..n {
        let mut h = rotation[i][0];
        let mut hs = vec![h];
        let mut steps = 0;
        loop {
            let w = head(h);
            if w < n {
                trips.push(Trip { start: i + 1, end: w + 1, half_edges: hs });
                break;
            }
            let rot = &rotation[w];
            let d = rot.len();
            let p = pos[h ^ 1];
            h = match colors[w] {
                Color::White => rot[(p + d - 1) % d],
                Color::Black => rot[(p + 1) % d],
            };
            hs.push(h);
            steps += 1;
            if steps > nh {
                return Err(Error::InvalidGraph("trip does not terminate".into()));
            }
        }
    }
    Ok(Derived { faces, face_of, outer, trips })
}

/// Graph for `Gr(1,n)`: one white vertex joined to every boundary vertex.
pub fn make_claw_graph(n: usize) -> Result<PlabicGraph> {
    if n < 1 {
        return Err(Error::OutOfRange("claw graph needs n >= 1".into()));
    }
    let edges: Vec<(i64, [usize; 2])> = (0..n).map(|i| (i as i64 + 1, [n, i])).collect();
    let rot: Vec<usize> = (0..n).rev().collect();
    PlabicGraph::from_parts(n, vec![(1, Color::White)], edges, vec![rot])
}

/// The standard `k x (n-k)` grid top-cell plabic graph. For `k = 1` this is
/// the claw graph.
pub fn make_rectangle_graph(k: usize, n: usize) -> Result<PlabicGraph> {
    if k < 1 || k >= n {
        return Err(Error::OutOfRange(format!("need 1 <= k < n, got k={k}, n={n}")));
    }
    if k == 1 {
        return make_claw_graph(n);
    }
    let m = n - k;
    let mut pos: Vec<(f64, f64)> = Vec::new();
    let mut colors: Vec<Color> = Vec::new();
    // Boundary vertices first: east legs are labels 1..k (top to bottom),
    // south legs are labels k+1..n (right to left).
    for i in 1..=k {
        pos.push((m as f64 + 1.2, -(i as f64) + 0.2));
        colors.push(Color::Black);
    }
    for j in (1..=m).rev() {
        pos.push((j as f64 - 0.2, -(k as f64) - 1.2));
        colors.push(Color::Black);
    }
    let mut wv = vec![vec![0usize; m + 1]; k + 1];
    let mut bv = vec![vec![0usize; m + 1]; k + 1];
    for i in 1..=k {
        for j in 1..=m {
            wv[i][j] = pos.len();
            pos.push((j as f64 - 0.2, -(i as f64) - 0.2));
            colors.push(Color::White);
            bv[i][j] = pos.len();
            pos.push((j as f64 + 0.2, -(i as f64) + 0.2));
            colors.push(Color::Black);
        }
    }
    let mut uv = vec![0usize; k + 1];
    for (i, u) in uv.iter_mut().enumerate().skip(1) {
        *u = pos.len();
        pos.push((m as f64 + 0.6, -(i as f64) + 0.2));
        colors.push(Color::White);
    }
    let mut edges: Vec<[usize; 2]> = Vec::new();
    for i in 1..=k {
        for j in 1..=m {
            edges.push([wv[i][j], bv[i][j]]);
            if j > 1 {
                edges.push([wv[i][j], bv[i][j - 1]]);
            }
            if i < k {
                edges.push([wv[i][j], bv[i + 1][j]]);
            }
        }
    }
    for i in 1..=k {
        edges.push([bv[i][m], uv[i]]);
        edges.push([uv[i], i - 1]);
    }
    for (t, j) in (1..=m).rev().enumerate() {
        edges.push([wv[k][j], k + t]);
    }
    let nv = pos.len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (e, [a, b]) in edges.iter().enumerate() {
        incident[*a].push(e);
        incident[*b].push(e);
    }
    let mut rotation = Vec::new();
    for v in n..nv {
        let mut inc = incident[v].clone();
        let (x, y) = pos[v];
        inc.sort_by(|&e1, &e2| {
            let ang = |e: usize| {
                let o = if edges[e][0] == v { edges[e][1] } else { edges[e][0] };
                (pos[o].1 - y).atan2(pos[o].0 - x)
            };
            ang(e1).partial_cmp(&ang(e2)).expect("finite angles")
        });
        rotation.push(inc);
    }
    let internal: Vec<(i64, Color)> = (n..nv).map(|v| ((v - n + 1) as i64, colors[v])).collect();
    let edge_list: Vec<(i64, [usize; 2])> = edges.into_iter().enumerate().map(|(e, ab)| (e as i64 + 1, ab)).collect();
    PlabicGraph::from_parts(n, internal, edge_list, rotation)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: i64,
    pub color: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EdgeJson {
    pub id: i64,
    pub ends: [i64; 2],
}

/// Serialized form of a plabic graph. Boundary vertex `i` has id `-i`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PlabicJson {
    pub n: usize,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
    pub boundary: Vec<i64>,
    pub rotation: BTreeMap<String, Vec<i64>>,
}

pub(crate) fn parse_color(s: &str) -> Result<Color> {
    match s {
        "b" | "black" => Ok(Color::Black),
        "w" | "white" => Ok(Color::White),
        other => Err(Error::Parse(format!("unknown color {other:?}"))),
    }
}

impl PlabicGraph {
    pub fn to_json(&self) -> PlabicJson {
        let n = self.n;
        let vid = |v: usize| self.vertex_ids[v];
        PlabicJson {
            n,
            vertices: (n..self.num_vertices())
                .map(|v| VertexJson { id: vid(v), color: self.colors[v].as_char().to_string() })
                .collect(),
            edges: (0..self.num_edges())
                .map(|e| EdgeJson { id: self.edge_ids[e], ends: [vid(self.ends[e][0]), vid(self.ends[e][1])] })
                .collect(),
            boundary: (1..=n).map(|i| self.edge_ids[self.leg(i)]).collect(),
            rotation: (n..self.num_vertices())
                .map(|v| (vid(v).to_string(), self.rotation(v).iter().map(|&e| self.edge_ids[e]).collect()))
                .collect(),
        }
    }

    pub fn from_json(j: &PlabicJson) -> Result<PlabicGraph> {
        let n = j.n;
        let mut index: HashMap<i64, usize> = (1..=n as i64).map(|i| (-i, (i - 1) as usize)).collect();
        let mut internal = Vec::new();
        for (t, v) in j.vertices.iter().enumerate() {
            if v.id < 0 {
                return Err(Error::InvalidGraph(format!("internal vertex id {} must be non-negative", v.id)));
            }
            if index.insert(v.id, n + t).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate vertex id {}", v.id)));
            }
            internal.push((v.id, parse_color(&v.color)?));
        }
        let mut eindex = HashMap::new();
        let mut edges = Vec::new();
        for (t, e) in j.edges.iter().enumerate() {
            let a = *index.get(&e.ends[0]).ok_or_else(|| Error::InvalidGraph(format!("edge {} endpoint", e.id)))?;
            let b = *index.get(&e.ends[1]).ok_or_else(|| Error::InvalidGraph(format!("edge {} endpoint", e.id)))?;
            if eindex.insert(e.id, t).is_some() {
                return Err(Error::InvalidGraph(format!("duplicate edge id {}", e.id)));
            }
            edges.push((e.id, [a, b]));
        }
        if j.boundary.len() != n {
            return Err(Error::InvalidGraph("boundary list must have n entries".into()));
        }
        for (i, eid) in j.boundary.iter().enumerate() {
            let e = *eindex.get(eid).ok_or_else(|| Error::InvalidGraph(format!("unknown boundary edge {eid}")))?;
            if !edges[e].1.contains(&i) {
                return Err(Error::InvalidGraph(format!("boundary edge {eid} is not attached to {}", i + 1)));
            }
        }
        let mut rotation = Vec::new();
        for v in &j.vertices {
            let list = j
                .rotation
                .get(&v.id.to_string())
                .ok_or_else(|| Error::InvalidGraph(format!("no rotation for vertex {}", v.id)))?;
            let mut r = Vec::new();
            for eid in list {
                r.push(*eindex.get(eid).ok_or_else(|| Error::InvalidGraph(format!("unknown edge {eid} in rotation")))?);
            }
            rotation.push(r);
        }
        PlabicGraph::from_parts(n, internal, edges, rotation)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsets::k_subsets;

    #[test]
    fn claw_trips_and_labels() {
        for n in 2..7 {
            let g = make_claw_graph(n).unwrap();
            assert_eq!(g.k(), 1);
            let pi = g.trip_permutation();
            for i in 1..=n {
                assert_eq!(pi[i - 1], i % n + 1);
            }
            let labels = g.face_labels().unwrap();
            for i in 1..=n {
                let f = g.boundary_face(i);
                assert_eq!(labels[f].elems(), vec![i % n + 1]);
            }
        }
    }

    #[test]
    fn single_edge_graph() {
        let g = PlabicGraph::from_parts(1, vec![(1, Color::White)], vec![(1, [1, 0])], vec![vec![0]]).unwrap();
        assert_eq!(g.trip_permutation(), vec![1]);
    }

    #[test]
    fn rectangle_graphs() {
        for n in 2..=12 {
            for k in 1..n {
                let g = make_rectangle_graph(k, n).unwrap();
                assert_eq!(g.k(), k);
                assert_eq!(g.disk_faces().len(), k * (n - k) + 1, "k={k} n={n}");
                let pi = g.trip_permutation();
                for i in 1..=n {
                    assert_eq!(pi[i - 1], (i + k - 1) % n + 1, "k={k} n={n}");
                }
                let labels = g.face_labels().unwrap();
                let mut seen = std::collections::HashSet::new();
                for f in g.disk_faces() {
                    assert_eq!(labels[f].len(), k);
                    assert!(seen.insert(labels[f]), "repeated face label");
                }
            }
        }
    }

    #[test]
    fn rectangle_36_boundary_faces_are_cyclic_intervals() {
        let g = make_rectangle_graph(3, 6).unwrap();
        let labels = g.face_labels().unwrap();
        let mut got: Vec<KSet> = g.disk_faces().into_iter().filter(|&f| g.faces()[f].is_boundary).map(|f| labels[f]).collect();
        got.sort();
        let mut expect: Vec<KSet> =
            (0..6).map(|i| KSet::from_elems(&[(i % 6) + 1, ((i + 1) % 6) + 1, ((i + 2) % 6) + 1])).collect();
        expect.sort();
        assert_eq!(got, expect);
    }

    #[test]
    fn adjacent_faces_exchange_one_element() {
        let g = make_rectangle_graph(3, 7).unwrap();
        let labels = g.face_labels().unwrap();
        for e in 0..g.num_edges() {
            let f1 = g.face_of_half_edge(2 * e);
            let f2 = g.face_of_half_edge(2 * e + 1);
            if f1 == g.outer_face() || f2 == g.outer_face() || f1 == f2 {
                continue;
            }
            let a = labels[f1];
            let b = labels[f2];
            assert_eq!((a.0 & !b.0).count_ones(), 1);
            assert_eq!((b.0 & !a.0).count_ones(), 1);
        }
    }

    #[test]
    fn labels_are_all_subsets_for_gr24() {
        let g = make_rectangle_graph(2, 4).unwrap();
        assert_eq!(g.disk_faces().len(), 5);
        let labels = g.face_labels().unwrap();
        let all: std::collections::HashSet<KSet> = k_subsets(4, 2).into_iter().collect();
        for f in g.disk_faces() {
            assert!(all.contains(&labels[f]));
        }
    }

    #[test]
    fn json_roundtrip() {
        let g = make_rectangle_graph(3, 6).unwrap();
        let j = serde_json::to_string(&g.to_json()).unwrap();
        let back: PlabicJson = serde_json::from_str(&j).unwrap();
        let h = PlabicGraph::from_json(&back).unwrap();
        assert_eq!(h.trip_permutation(), g.trip_permutation());
        assert_eq!(h.face_labels().unwrap(), g.face_labels().unwrap());
    }

    #[test]
    fn invalid_inputs() {
        assert!(make_rectangle_graph(0, 4).is_err());
        assert!(make_rectangle_graph(4, 4).is_err());
        let same_color = PlabicGraph::from_parts(2, vec![(1, Color::Black)], vec![(1, [2, 0]), (2, [2, 1])], vec![vec![0, 1]]);
        assert!(same_color.is_err());
        let dangling =
            PlabicGraph::from_parts(1, vec![(1, Color::White), (2, Color::Black)], vec![(1, [1, 0])], vec![vec![0], vec![]]);
        assert!(matches!(dangling, Err(Error::DanglingVertex(2))));
    }
}
