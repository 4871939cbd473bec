//! Rotation-invariant web bases: non-crossing matchings for SL_2 and
//! non-elliptic webs for SL_3, grown from standard tableaux.

use std::cmp::Ordering;

use crate::par::Exec;
use crate::tableaux::{syt_enumerate, Tableau};
use crate::webs::{Web, WebBuilder};
use crate::{Color, Error, Result};

/// Largest `n` accepted by [`sl2_basis`].
pub const SL2_MAX_N: usize = 16;

/// The arcs of the non-crossing matching attached to a `2 x m` standard
/// tableau: row 1 holds openers, each closer takes the nearest open opener.
pub fn matching_of_tableau(t: &Tableau) -> Result<Vec<(usize, usize)>> {
    if t.rows() != 2 || !t.is_standard() {
        return Err(Error::NotStandard);
    }
    let word = t.yamanouchi_word();
    let mut stack = Vec::new();
    let mut arcs = Vec::new();
    for (p, &row) in word.iter().enumerate() {
        if row == 1 {
            stack.push(p + 1);
        } else {
            let o = stack.pop().ok_or(Error::NotStandard)?;
            arcs.push((o, p + 1));
        }
    }
    arcs.sort_unstable();
    Ok(arcs)
}

/// SL_2 web of a non-crossing matching, one white midpoint per arc.
pub fn sl2_web(n: usize, arcs: &[(usize, usize)]) -> Result<Web> {
    let claws: Vec<Vec<usize>> = arcs.iter().map(|&(a, b)| vec![a.min(b), a.max(b)]).collect();
    Web::from_claws(2, n, &claws)
}

/// All `Catalan(n/2)` SL_2 basis webs, in the order of their tableaux.
pub fn sl2_basis(n: usize) -> Result<Vec<Web>> {
    if n == 0 || !n.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!("SL_2 basis needs even n, got {n}")));
    }
    if n > SL2_MAX_N {
        return Err(Error::SizeGuard(format!("n = {n} exceeds {SL2_MAX_N}")));
    }
    syt_enumerate(2, n / 2)?.iter().map(|t| sl2_web(n, &matching_of_tableau(t)?)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ArcKind {
    /// From a `1` (black boundary end, on the left) to a `2`.
    OneTwo,
    /// From a `2` to a `3` (black boundary end, on the right).
    TwoThree,
}

#[derive(Clone, Debug)]
struct Arc {
    left: usize,
    right: usize,
    kind: ArcKind,
}

impl Arc {
    fn black_end_left(&self) -> bool {
        self.kind == ArcKind::OneTwo
    }
}

/// `x`-coordinate of the crossing of two semicircles over `[l1,r1]` and
/// `[l2,r2]`, as a fraction with positive denominator.
fn crossing_x(a: &Arc, b: &Arc) -> (i64, i64) {
    let num = (b.left * b.right) as i64 - (a.left * a.right) as i64;
    let den = (b.left + b.right) as i64 - (a.left + a.right) as i64;
    if den < 0 {
        (-num, -den)
    } else {
        (num, den)
    }
}

fn cmp_frac(x: (i64, i64), y: (i64, i64)) -> Ordering {
    (x.0 * y.1).cmp(&(y.0 * x.1))
}

/// The non-elliptic SL_3 web of a `3 x k` standard tableau.
///
/// The Yamanouchi word is read as two non-crossing arc diagrams: each `2`
/// is joined to the nearest unmatched `1` on its left and each `3` to the
/// nearest unmatched `2` on its left. Every `2` becomes a white vertex on
/// its boundary edge, and every crossing of a 1-2 arc with a 2-3 arc is
/// resolved into a white-black pair joined by an edge.
pub fn sl3_growth(t: &Tableau) -> Result<Web> {
    if t.rows() != 3 || !t.is_standard() {
        return Err(Error::NotStandard);
    }
    if t.cols() > 5 {
        return Err(Error::SizeGuard(format!("3 x {} exceeds the supported size", t.cols())));
    }
    let word = t.yamanouchi_word();
    let n = word.len();
    let mut ones = Vec::new();
    let mut twos = Vec::new();
    let mut arcs: Vec<Arc> = Vec::new();
    for (p, &row) in word.iter().enumerate() {
        let pos = p + 1;
        match row {
            1 => ones.push(pos),
            2 => {
                let l = ones.pop().ok_or(Error::NotStandard)?;
                arcs.push(Arc { left: l, right: pos, kind: ArcKind::OneTwo });
                twos.push(pos);
            }
            _ => {
                let l = twos.pop().ok_or(Error::NotStandard)?;
                arcs.push(Arc { left: l, right: pos, kind: ArcKind::TwoThree });
            }
        }
    }

    let mut b = WebBuilder::new(3, n);
    let mut two_vertex = vec![usize::MAX; n + 1];
    for (p, &row) in word.iter().enumerate() {
        if row == 2 {
            two_vertex[p + 1] = b.add_vertex(Color::White);
        }
    }

    struct Crossing {
        a: usize,
        b: usize,
        white: usize,
        black: usize,
        x: (i64, i64),
    }
    let mut crossings: Vec<Crossing> = Vec::new();
    for i in 0..arcs.len() {
        for j in 0..arcs.len() {
            let (a, c) = (&arcs[i], &arcs[j]);
            if a.kind == c.kind || a.left >= c.left {
                continue;
            }
            if a.left < c.left && c.left < a.right && a.right < c.right {
                let white = b.add_vertex(Color::White);
                let black = b.add_vertex(Color::Black);
                crossings.push(Crossing { a: i, b: j, white, black, x: crossing_x(a, c) });
            }
        }
    }

    // Per arc: crossings in left-to-right order.
    let mut on_arc: Vec<Vec<usize>> = vec![Vec::new(); arcs.len()];
    for (ci, c) in crossings.iter().enumerate() {
        on_arc[c.a].push(ci);
        on_arc[c.b].push(ci);
    }
    for list in on_arc.iter_mut() {
        list.sort_by(|&p, &q| cmp_frac(crossings[p].x, crossings[q].x));
    }

    let endpoint = |arc: &Arc, left: bool| -> usize {
        let pos = if left { arc.left } else { arc.right };
        let at_boundary = if left { arc.black_end_left() } else { !arc.black_end_left() };
        if at_boundary {
            pos - 1
        } else {
            two_vertex[pos]
        }
    };

    // Segment edges along each arc; seg[arc][t] joins node t and node t+1.
    let mut seg: Vec<Vec<usize>> = Vec::with_capacity(arcs.len());
    for (ai, arc) in arcs.iter().enumerate() {
        let mut nodes = vec![endpoint(arc, true)];
        for &ci in &on_arc[ai] {
            let c = &crossings[ci];
            if arc.black_end_left() {
                nodes.push(c.white);
                nodes.push(c.black);
            } else {
                nodes.push(c.black);
                nodes.push(c.white);
            }
        }
        nodes.push(endpoint(arc, false));
        let edges = nodes.chunks(2).map(|pair| b.add_edge(pair[0], pair[1], 1)).collect();
        seg.push(edges);
    }
    let mid: Vec<usize> = crossings.iter().map(|c| b.add_edge(c.white, c.black, 1)).collect();

    // Counterclockwise orders in the upper half plane.
    for (pos, &row) in word.iter().enumerate() {
        let pos = pos + 1;
        if row != 2 {
            continue;
        }
        let v = two_vertex[pos];
        let bedge = b.add_edge(pos - 1, v, 1);
        let in12 = arcs.iter().position(|a| a.kind == ArcKind::OneTwo && a.right == pos).expect("1-2 arc");
        let out23 = arcs.iter().position(|a| a.kind == ArcKind::TwoThree && a.left == pos).expect("2-3 arc");
        let last12 = *seg[in12].last().expect("segment");
        let first23 = seg[out23][0];
        b.set_rotation(v, vec![bedge, first23, last12]);
    }
    for (ci, c) in crossings.iter().enumerate() {
        let side = |ai: usize| -> (usize, usize) {
            let t = on_arc[ai].iter().position(|&x| x == ci).expect("crossing on arc");
            (seg[ai][t], seg[ai][t + 1])
        };
        let (a_left, a_right) = side(c.a);
        let (b_left, b_right) = side(c.b);
        let a_in = if arcs[c.a].black_end_left() { a_left } else { a_right };
        let b_in = if arcs[c.b].black_end_left() { b_left } else { b_right };
        let cyc = [a_right, b_right, a_left, b_left];
        let s = (0..4)
            .find(|&s| {
                let (x, y) = (cyc[s], cyc[(s + 1) % 4]);
                (x == a_in || x == b_in) && (y == a_in || y == b_in)
            })
            .expect("incoming ends are adjacent");
        let at = |t: usize| cyc[(s + t) % 4];
        b.set_rotation(c.white, vec![at(0), at(1), mid[ci]]);
        b.set_rotation(c.black, vec![at(2), at(3), mid[ci]]);
    }
    let upper = b.build()?;
    // Boundary points left to right in the upper half plane run
    // counterclockwise; mirror so that labels run clockwise.
    Ok(mirror(&upper))
}

fn mirror(w: &Web) -> Web {
    let rotation: Vec<Vec<usize>> = (0..w.num_vertices())
        .map(|v| {
            let mut r = w.rotation(v).to_vec();
            r.reverse();
            r
        })
        .collect();
    let colors: Vec<Color> = (0..w.num_vertices()).map(|v| w.color(v)).collect();
    Web::new(w.r(), w.n(), colors, w.edges().to_vec(), rotation).expect("mirror preserves validity")
}

/// Every face away from the boundary has at least six sides and no
/// component is closed.
pub fn is_non_elliptic(w: &Web) -> bool {
    if !w.is_planar() {
        return false;
    }
    let (sizes, closed) = w.internal_face_sizes();
    !closed && sizes.iter().all(|&s| s >= 6)
}

/// Check the properties that characterise the growth output: non-elliptic,
/// `T(W) = T` and `a(S_W; W) = 1`.
pub fn certify_sl3_web(w: &Web, t: &Tableau) -> Result<()> {
    if !is_non_elliptic(w) {
        return Err(Error::Internal(format!("web for {:?} is elliptic", t.to_rows())));
    }
    let (_, s, _) = w.word_and_sign()?;
    if w.count_labelings(&s)? != 1 {
        return Err(Error::Internal(format!("a(S_W;W) != 1 for {:?}", t.to_rows())));
    }
    let back = w.tableau_of_web()?;
    if &back != t {
        return Err(Error::Internal(format!("round trip failed: {:?} -> {:?}", t.to_rows(), back.to_rows())));
    }
    Ok(())
}

/// All SL_3 basis webs of degree `(1^n)`, `n in {3, 6, 9, 12}`, certified.
pub fn sl3_basis(lambda: &[usize]) -> Result<Vec<Web>> {
    sl3_basis_with(lambda, Exec::default())
}

pub fn sl3_basis_with(lambda: &[usize], exec: Exec) -> Result<Vec<Web>> {
    let n = lambda.len();
    if lambda.iter().any(|&l| l != 1) || !n.is_multiple_of(3) || n == 0 || n > 12 {
        return Err(Error::Unsupported(format!("sl3_basis supports (1^n) with n in {{3,6,9,12}}, got {lambda:?}")));
    }
    let tabs = syt_enumerate(3, n / 3)?;
    exec.map(&tabs, |t| {
        let w = sl3_growth(t)?;
        certify_sl3_web(&w, t)?;
        Ok(w)
    })
    .into_iter()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn brute_matchings(n: usize) -> usize {
        fn rec(free: Vec<usize>) -> usize {
            if free.is_empty() {
                return 1;
            }
            let mut total = 0;
            for j in (1..free.len()).step_by(2) {
                let inside: Vec<usize> = free[1..j].to_vec();
                let outside: Vec<usize> = free[j + 1..].to_vec();
                total += rec(inside) * rec(outside);
            }
            total
        }
        rec((1..=n).collect())
    }

    #[test]
    fn sl2_counts() {
        assert_eq!(sl2_basis(2).unwrap().len(), 1);
        assert_eq!(sl2_basis(4).unwrap().len(), 2);
        assert_eq!(sl2_basis(6).unwrap().len(), brute_matchings(6));
        assert_eq!(sl2_basis(10).unwrap().len(), 42);
        assert!(sl2_basis(5).is_err());
    }

    #[test]
    fn sl2_basis_words_round_trip() {
        for t in syt_enumerate(2, 4).unwrap() {
            let w = sl2_web(8, &matching_of_tableau(&t).unwrap()).unwrap();
            assert_eq!(w.tableau_of_web().unwrap(), t);
            let (_, s, _) = w.word_and_sign().unwrap();
            assert_eq!(w.count_labelings(&s).unwrap(), 1);
        }
    }

    #[test]
    fn growth_small() {
        let col = Tableau::from_rows(vec![vec![1], vec![2], vec![3]]).unwrap();
        let w = sl3_growth(&col).unwrap();
        assert_eq!(w.canonical_key(), Web::from_claws(3, 3, &[vec![1, 2, 3]]).unwrap().canonical_key());
        let six = sl3_basis(&[1; 6]).unwrap();
        assert_eq!(six.len(), 5);
        let tripod_pairs = six.iter().filter(|w| w.num_vertices() == 8).count();
        assert_eq!(tripod_pairs, 3);
    }

    #[test]
    fn growth_n9_certified_and_distinct() {
        let basis = sl3_basis(&[1; 9]).unwrap();
        assert_eq!(basis.len(), 42);
        let keys: HashSet<String> = basis.iter().map(Web::canonical_key).collect();
        assert_eq!(keys.len(), 42);
    }

    #[test]
    fn non_elliptic_examples() {
        assert!(is_non_elliptic(&Web::from_claws(3, 3, &[vec![1, 2, 3]]).unwrap()));
        // Bigon: 1 - w = b - w' - (2, 3).
        let mut b = WebBuilder::new(3, 3);
        let w = b.add_vertex(Color::White);
        let k = b.add_vertex(Color::Black);
        let w2 = b.add_vertex(Color::White);
        let e0 = b.add_edge(0, w, 1);
        let e1 = b.add_edge(w, k, 1);
        let e2 = b.add_edge(w, k, 1);
        let e3 = b.add_edge(k, w2, 1);
        let e4 = b.add_edge(1, w2, 1);
        let e5 = b.add_edge(2, w2, 1);
        b.set_rotation(w, vec![e0, e2, e1]);
        b.set_rotation(k, vec![e1, e2, e3]);
        b.set_rotation(w2, vec![e3, e5, e4]);
        let bigon = b.build().unwrap();
        assert!(bigon.is_planar());
        assert!(!is_non_elliptic(&bigon));
    }

    #[test]
    fn hexagon_web_is_non_elliptic() {
        let basis = sl3_basis(&[1; 9]).unwrap();
        let with_hexagon = basis.iter().find(|w| {
            let (sizes, _) = w.internal_face_sizes();
            sizes.contains(&6)
        });
        assert!(with_hexagon.is_some_and(is_non_elliptic));
    }

    #[test]
    fn growth_n12_certified_and_distinct() {
        let basis = sl3_basis(&[1; 12]).unwrap();
        assert_eq!(basis.len(), 462);
        let keys: HashSet<String> = basis.iter().map(Web::canonical_key).collect();
        assert_eq!(keys.len(), 462);
    }
}
