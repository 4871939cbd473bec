//! The acceptance checks, each producing a pass/fail report.

use std::collections::{BTreeMap, HashSet};
use std::path::PathBuf;

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::basisgen::{sl2_basis, sl3_basis_with};
use crate::dimers::{
    boundary_measurement_with, enumerate_dimer_covers_with, face_weight, web_r, web_r_twisted, Network,
};
use crate::enumeration::{
    degree_counts, dihedral_orbits, enumerate_sl3_tree_webs_with, enumerate_sl4_tree_webs_with, is_tree,
    quaternary_pairs, tree_bijection, tree_bijection_inverse, tree_count_closed_form, SL4_FINGERPRINT_SEED,
    THM55_COEFFICIENTS,
};
use crate::io::read_web_dir;
use crate::pairing::{
    certificate_points, certify, duality_matrix_with, expand_linear_with, fork_preserved, pair_with_poly,
    pair_combination_with_poly, pair_webs_with, poly_at_word, twist_expand_with, web_polynomial, wrench_expand,
    wrench_expand_fork_preserving, Convention, Engine,
};
use crate::par::Exec;
use crate::plabic::make_rectangle_graph;
use crate::plucker::{twist_matrix, MatrixPoint, PluckerPoly};
use crate::rng::Rng;
use crate::subsets::{binomial, k_subsets, KSet};
use crate::webs::Web;
use crate::{Result, Q};

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub summary: String,
    pub seed: u64,
    pub details: Value,
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub exec: Exec,
    /// Directory of SL_4 web files on 12 points for the optional spot checks.
    pub sl4_dir: Option<PathBuf>,
}

impl Default for VerifyConfig {
    fn default() -> VerifyConfig {
        VerifyConfig { seed: DEFAULT_SEED, exec: Exec::default(), sl4_dir: None }
    }
}

/// Suite names accepted by [`run_suite`].
pub const SUITES: &[(&str, &str)] = &[
    ("all", "criteria 1 to 10"),
    ("plucker-relations", "1"),
    ("marsh-scott", "2"),
    ("twist", "3"),
    ("x28", "4"),
    ("duality", "5"),
    ("duality-2-3", "5, (2,3) and (3,2) on 6 points only"),
    ("duality-3-3", "5, (3,3) on 9 points only"),
    ("basis", "6"),
    ("engines", "7"),
    ("counting", "8"),
    ("pairing", "9"),
    ("excluded", "10"),
];

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<Vec<CriterionReport>> {
    let one = |id: u8| -> Result<Vec<CriterionReport>> { Ok(vec![run_criterion(id, cfg)?]) };
    match name {
        "all" => (1..=10).map(|id| run_criterion(id, cfg)).collect(),
        "plucker-relations" => one(1),
        "marsh-scott" => one(2),
        "twist" => one(3),
        "x28" => one(4),
        "duality" => one(5),
        "duality-2-3" => Ok(vec![duality_2_3(cfg)?]),
        "duality-3-3" => Ok(vec![duality_3_3(cfg)?]),
        "basis" => one(6),
        "engines" => one(7),
        "counting" => one(8),
        "pairing" => one(9),
        "excluded" => one(10),
        other => match other.parse::<u8>() {
            Ok(id @ 1..=10) => one(id),
            _ => Err(crate::Error::Parse(format!("unknown suite {other:?}"))),
        },
    }
}

pub fn run_criterion(id: u8, cfg: &VerifyConfig) -> Result<CriterionReport> {
    match id {
        1 => criterion_1(cfg),
        2 => criterion_2(cfg),
        3 => criterion_3(cfg),
        4 => criterion_4(cfg),
        5 => criterion_5(cfg),
        6 => criterion_6(cfg),
        7 => criterion_7(cfg),
        8 => criterion_8(cfg),
        9 => criterion_9(cfg),
        10 => criterion_10(cfg),
        _ => Err(crate::Error::OutOfRange(format!("criterion {id}"))),
    }
}

fn seed_for(cfg: &VerifyConfig, id: u8) -> u64 {
    cfg.seed.wrapping_add(u64::from(id))
}

fn report(id: u8, name: &str, seed: u64, failures: &[String], ok_summary: String, details: Value) -> CriterionReport {
    let passed = failures.is_empty();
    let summary = if passed {
        ok_summary
    } else {
        format!("{} failure(s); first: {}", failures.len(), failures[0])
    };
    CriterionReport { id, name: name.to_string(), passed, summary, seed, details }
}

fn random_product(rng: &mut Rng, k: usize, n: usize, r: usize) -> PluckerPoly {
    let sets = k_subsets(n, k);
    let mut f = PluckerPoly::constant(k, n, Q::one());
    for _ in 0..r {
        f = f.mul(&PluckerPoly::var(k, n, sets[rng.below(sets.len())]));
    }
    f
}

fn nonneg_degree(f: &PluckerPoly) -> Vec<usize> {
    f.multidegree().unwrap_or_default().into_iter().map(|d| d.max(0) as usize).collect()
}

/// Boundary measurements of random networks satisfy the three-term relations.
pub fn criterion_1(cfg: &VerifyConfig) -> Result<CriterionReport> {
    let seed = seed_for(cfg, 1);
    let mut rng = Rng::new(seed);
    let mut failures = Vec::new();
    let mut checked = BTreeMap::new();
    for (k, n) in [(2, 4), (2, 5), (3, 6)] {
        let g = make_rectangle_graph(k, n)?;
        let mut relations = 0;
        for t in 0..20 {
            let net = Network::random(g.clone(), &mut rng, 9);
            let pv = boundary_measurement_with(&net, cfg.exec)?;
            match pv.check_three_term_relations() {
                Ok(c) => relations += c,
                Err(e) => failures.push(format!("({k},{n}) network {t}: {e}")),
            }
        }
        checked.insert(format!("({k},{n})"), relations);
    }
    Ok(report(
        1,
        "Plücker relations of boundary measurements",
        seed,
        &failures,
        "20 networks per graph; every three-term relation vanishes".into(),
        json!({ "networks_per_graph": 20, "relations_checked": checked }),
    ))
}

/// Face-weight sums over single dimer covers equal the minors of the twist.
pub fn criterion_2(cfg: &VerifyConfig) -> Result<CriterionReport> {
    let seed = seed_for(cfg, 2);
    let mut rng = Rng::new(seed);
    let mut failures = Vec::new();
    let mut checked = 0;
    for (k, n) in [(2, 4), (3, 6)] {
        let g = make_rectangle_graph(k, n)?;
        let mut table = Vec::new();
        for s in k_subsets(n, k) {
            let lambda: Vec<usize> = (1..=n).map(|i| usize::from(s.contains(i))).collect();
            let covers = enumerate_dimer_covers_with(&g, 1, &lambda, cfg.exec)?;
            let weights = covers.iter().map(|d| face_weight(&g, d)).collect::<Result<Vec<_>>>()?;
            table.push((s, weights));
        }
        for t in 0..10 {
            let m = rng.generic_point(k, n, 9);
            let tau = twist_matrix(&m)?;
            for (s, weights) in &table {
                let mut sum = Q::zero();
                for w in weights {
                    sum += w.evaluate(&m)?;
                }
                checked += 1;
                if sum != tau.minor(*s) {
                    failures.push(format!("({k},{n}) point {t}, I = {s}"));
                }
            }
        }
    }
    Ok(report(
        2,
        "minors of the twist as face-weight dimer sums",
        seed,
        &failures,
        format!("{checked} minors agree exactly"),
        json!({ "points_per_graph": 10, "minors_checked": checked }),
    ))
}

/// Twist expansion against the matrix twist, and the twisted pairing on networks.
pub fn criterion_3(cfg: &VerifyConfig) -> Result<CriterionReport> {
    let seed = seed_for(cfg, 3);
    let mut rng = Rng::new(seed);
    let (k, n, r) = (3, 6, 2);
    let g = make_rectangle_graph(k, n)?;
    let mut failures = Vec::new();
    for t in 0..25 {
        let f = random_product(&mut rng, k, n, r);
        let expanded = twist_expand_with(&f, &g, cfg.exec)?;
        let m = rng.generic_point(k, n, 9);
        if expanded.evaluate(&m)? != f.evaluate(&twist_matrix(&m)?)? {
            failures.push(format!("twist expansion {t}"));
        }
    }
    for t in 0..10 {
        let net = Network::random(g.clone(), &mut rng, 9);
        let f = random_product(&mut rng, k, n, r);
        let lambda = nonneg_degree(&f);
        let pv = boundary_measurement_with(&net, cfg.exec)?;
        let x = MatrixPoint::from_plucker_vector(&pv)?;
        let twisted = pair_combination_with_poly(&web_r_twisted(&net, &lambda)?, &f)?;
        if twisted != f.evaluate(&twist_matrix(&x)?)? {
            failures.push(format!("twisted pairing on network {t}"));
        }
        let plain = pair_combination_with_poly(&web_r(&net, &lambda)?, &f)?;
        if plain != f.evaluate_vector(&pv)? {
            failures.push(format!("untwisted pairing on network {t}"));
        }
    }
    Ok(report(
        3,
        "twist as a sum of pairings",
        seed,
        &failures,
        "25 products expanded and 10 networks paired, all exact".into(),
        json!({ "graph": "rectangle(3,6)", "r": r, "products": 25, "networks": 10 }),
    ))
}

fn minor_poly(n: usize, e: &[usize]) -> PluckerPoly {
    PluckerPoly::var(3, n, KSet::from_elems(e))
}

/// The degree-four polynomial whose twist is tested in criterion 4.
pub fn x28_polynomial() -> PluckerPoly {
    let d = |e: &[usize]| minor_poly(12, e);
    let a = d(&[1, 3, 4]).mul(&d(&[2, 7, 8])).sub(&d(&[1, 7, 8]).mul(&d(&[2, 3, 4])));
    let b = d(&[5, 9, 10]).mul(&d(&[6, 11, 12])).sub(&d(&[5, 11, 12]).mul(&d(&[6, 9, 10])));
    let c = d(&[1, 3, 4]).mul(&d(&[2, 5, 6])).sub(&d(&[1, 5, 6]).mul(&d(&[2, 3, 4])));
    let e = d(&[7, 9, 10]).mul(&d(&[8, 11, 12])).sub(&d(&[7, 11, 12]).mul(&d(&[8, 9, 10])));
    a.mul(&b).sub(&c.mul(&e))
}

/// The published Laurent expression for the twist of [`x28_polynomial`].
pub fn x28_twist_expected(m: &MatrixPoint) -> Q {
    let d = |e: &[usize]| m.minor(KSet::from_elems(e));
    let frozen = d(&[1, 2, 12]) * d(&[2, 3, 4]) * d(&[4, 5, 6]) * d(&[6, 7, 8]) * d(&[8, 9, 10]) * d(&[10, 11, 12]);
    let binom = d(&[1, 3, 5]) * d(&[1, 9, 11]) * d(&[5, 7, 9]) + d(&[1, 5, 11]) * d(&[1, 7, 9]) * d(&[3, 5, 9]);
    frozen * binom / d(&[1, 5, 9])
}

/// Twist expansion on the (3,12) rectangle graph against the printed formula.
pub fn criterion_4(cfg: &VerifyConfig) -> Result<CriterionReport> {
    let seed = seed_for(cfg, 4);
    let mut rng = Rng::new(seed);
    let g = make_rectangle_graph(3, 12)?;
    let f = x28_polynomial();
    let expanded = twist_expand_with(&f, &g, cfg.exec)?;
    let mut failures = Vec::new();
    for t in 0..5 {
        let m = rng.generic_point(3, 12, 9);
        let value = expanded.evaluate(&m)?;
        if value != x28_twist_expected(&m) {
            failures.push(format!("printed expression differs at point {t}"));
        }
        if value != f.evaluate(&twist_matrix(&m)?)? {
            failures.push(format!("matrix twist differs at point {t}"));
        }
    }
    Ok(report(
        4,
        "twist of the degree-four worked example",
        seed,
        &failures,
        format!("{} Laurent terms; printed formula matched at 5 points", expanded.len()),
        json!({ "input_terms": f.len(), "expansion_terms": expanded.len(), "points": 5 }),
    ))
}

fn duality_details(label: &str, a: &[Web], b: &[Web], exec: Exec) -> Result<(Value, bool)> {
    let (m, rep) = duality_matrix_with(a, b, exec)?;
    let signs = b.iter().map(|x| x.word_and_sign().map(|t| t.2)).collect::<Result<Vec<_>>>()?;
    let sign_agrees = rep.matching.iter().filter(|&&(i, j)| m[i][j] == Q::from_integer(signs[j].into())).count();
    let plus = rep.matched_entries.iter().filter(|&&v| v == 1).count();
    let minus = rep.matched_entries.iter().filter(|&&v| v == -1).count();
    let ok = rep.is_dual();
    Ok((
        json!({
            "case": label,
            "shape": [rep.rows, rep.cols],
            "matched": rep.matching.len(),
            "diagonal_plus_one": plus,
            "diagonal_minus_one": minus,
            "diagonal_equals_sign_of_column": sign_agrees,
            "off_diagonal_zero": rep.off_diagonal_zero,
            "prefilter_hits": rep.prefilter_hits,
            "prefilter_sound": rep.prefilter_sound,
            "dual": ok,
        }),
        ok,
    ))
}

/// `(2,3)` and `(3,2)` duality on 6 points.
pub fn duality_2_3(cfg: &VerifyConfig) -> Result<CriterionReport> {
    let sl2 = sl2_basis(6)?;
    let sl3 = sl3_basis_with(&[1; 6], cfg.exec)?;
    let (a, ok_a) = duality_details("(2,3)", &sl2, &sl3, cfg.exec)?;
    let (b, ok_b) = duality_details("(3,2)", &sl3, &sl2, cfg.exec)?;
    let mut failures = Vec::new();
    if !ok_a {
        failures.push("(2,3) matrix is not a signed permutation of the matching".into());
    }
    if !ok_b {
        failures.push("(3,2) matrix is not a signed permutation of the matching".into());
    }
    Ok(report(5, "duality (2,3) on 6 points", cfg.seed, &failures, "5x5, diagonal ±1, zero elsewhere".into(), json!([a, b])))
}

/// `(3,3)` duality on 9 points.
pub fn duality_3_3(cfg: &VerifyConfig) -> Result<CriterionReport> {
    let sl3 = sl3_basis_with(&[1; 9], cfg.exec)?;
    let (d, ok) = duality_details("(3,3)", &sl3, &sl3, cfg.exec)?;
    let failures: Vec<String> =
        if ok { Vec::new() } else { vec!["(3,3) matrix is not a signed permutation of the matching".into()] };
    let summary = format!(
        "{}x{}, diagonal {} x (+1) and {} x (-1), zero elsewhere",
        d["shape"][0], d["shape"][1], d["diagonal_plus_one"], d["diagonal_minus_one"]
    );
    Ok(report(5, "duality (3,3) on 9 points", cfg.seed, &failures, summary, d))
}

fn sl4_spot_checks(cfg: &VerifyConfig, failures: &mut Vec<String>) -> Result<Value> {
    let Some(dir) = &cfg.sl4_dir else {
        return Ok(json!("skipped: no SL_4 web files supplied"));
    };
    let supplied = read_web_dir(dir)?;
    let basis = sl3_basis_with(&[1; 12], cfg.exec)?;
    let polys = cfg.exec.map(&basis, |x| web_polynomial(x, Engine::Wrench)).into_iter().collect::<Result<Vec<_>>>()?;
    let signs = basis.iter().map(|x| x.word_and_sign().map(|t| t.2)).collect::<Result<Vec<_>>>()?;
    let transposed = basis.iter().map(|x| x.tableau_of_web().map(|t| t.transpose())).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (path, w) in &supplied {
        let name = path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        if w.r() != 4 || w.n() != 12 {
            failures.push(format!("{name}: expected an SL_4 web on 12 points"));
            continue;
        }
        let t = w.tableau_of_web()?;
        let Some(j) = transposed.iter().position(|u| *u == t) else {
            failures.push(format!("{name}: no basis web with the transposed tableau"));
            continue;
        };
        let values = cfg
            .exec
            .map(&polys, |p| pair_with_poly(w, p))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let diag_ok = values[j] == Q::from_integer(signs[j].into());
        let off_nonzero = values.iter().enumerate().filter(|&(i, v)| i != j && !v.is_zero()).count();
        if !diag_ok || off_nonzero > 0 {
            failures.push(format!("{name}: diagonal {} (sign {}), {off_nonzero} non-zero off-diagonal", values[j], signs[j]));
        }
        rows.push(json!({ "file": name, "matched": j, "diagonal": values[j].to_string(), "sign": signs[j], "off_diagonal_nonzero": off_nonzero }));
    }
    Ok(Value::Array(rows))
}

pub fn criterion_5(cfg: &VerifyConfig) -> Result<CriterionReport> {
    let a = duality_2_3(cfg)?;
    let b = duality_3_3(cfg)?;
    let mut failures = Vec::new();
    for r in [&a, &b] {
        if !r.passed {
            failures.push(r.summary.clone());
        }
    }
    let sl4 = sl4_spot_checks(cfg, &mut failures)?;
    Ok(report(
        5,
        "duality matrices under the transpose matching",
        cfg.seed,
        &failures,
        "5x5 and 42x42 matrices are signed permutation matrices".into(),
        json!({ "n6": a.details, "n9": b.details, "sl4_spot_checks": sl4 }),
    ))
}

/// Basis sizes, `a(S_W; W) = 1`, rotation/promotion, reflection/evacuation
/// and forks at descents.
pub fn criterion_6(cfg: &VerifyConfig) -> Result<CriterionReport> {
    let mut failures = Vec::new();
    let mut sizes = BTreeMap::new();
    let mut orbits = BTreeMap::new();
    for n in [3usize, 6, 9, 12] {
        let basis = sl3_basis_with(&vec![1; n], cfg.exec)?;
        sizes.insert(n, basis.len());
        let expected = [1, 5, 42, 462][n / 3 - 1];
        if basis.len() != expected {
            failures.push(format!("n = {n}: {} webs, expected {expected}", basis.len()));
        }
        let keys: HashSet<String> = basis.iter().map(Web::canonical_key).collect();
        if keys.len() != basis.len() {
            failures.push(format!("n = {n}: repeated webs"));
        }
        let checks = cfg.exec.map(&basis, |w| -> Result<Vec<String>> {
            let mut bad = Vec::new();
            let (_, s, _) = w.word_and_sign()?;
            if w.count_labelings(&s)? != 1 {
                bad.push("a(S_W; W) != 1".to_string());
            }
            let t = w.tableau_of_web()?;
            if w.rotate().tableau_of_web()? != t.promotion()? {
                bad.push("rotation does not act as promotion".into());
            }
            if w.reflect().tableau_of_web()? != t.evacuation()? {
                bad.push("reflection does not act as evacuation".into());
            }
            if n <= 9 {
                let descents = t.descent_set();
                for i in 1..n {
                    if w.has_fork(i, i + 1) != descents.contains(&(i as u32)) {
                        bad.push(format!("fork at ({i},{}) does not match descents", i + 1));
                    }
                }
            }
            Ok(bad)
        });
        for (idx, c) in checks.into_iter().enumerate() {
            for b in c? {
                failures.push(format!("n = {n}, web {idx}: {b}"));
            }
        }
        orbits.insert(n, dihedral_orbits(&basis).len());
    }
    if orbits.get(&12) != Some(&32) {
        failures.push(format!("n = 12 basis has {:?} dihedral orbits, expected 32", orbits.get(&12)));
    }
    Ok(report(
        6,
        "SL_3 basis integrity",
        cfg.seed,
        &failures,
        "sizes 1/5/42/462; promotion, evacuation and fork checks hold".into(),
        json!({ "sizes": sizes, "dihedral_orbits": orbits }),
    ))
}

/// Wrench and linear expansions agree on the full grid; fork-preserving
/// wrench outputs keep the fork.
pub fn criterion_7(cfg: &VerifyConfig) -> Result<CriterionReport> {
    let mut failures = Vec::new();
    let mut webs_checked = 0;
    let mut forks_checked = 0;
    let mut grid_points = BTreeMap::new();
    for n in [3usize, 6, 9] {
        let basis = sl3_basis_with(&vec![1; n], cfg.exec)?;
        let (points, full) = certificate_points(3, n / 3);
        if !full {
            failures.push(format!("n = {n}: grid is not complete"));
        }
        grid_points.insert(n, points.len());
        for (idx, w) in basis.iter().enumerate() {
            webs_checked += 1;
            let (_, _, sign) = w.word_and_sign()?;
            let wrench = wrench_expand(w)?;
            let linear = expand_linear_with(w, Convention::Web, cfg.exec)?;
            if !linear.certificate.ok() {
                failures.push(format!("n = {n}, web {idx}: linear expansion not certified"));
            }
            let s = Q::from_integer(sign.into());
            let mismatches: usize = cfg
                .exec
                .map(&points, |p| -> Result<bool> {
                    let a = poly_at_word(&wrench, p)? * &s;
                    let b = poly_at_word(&linear.poly, p)?;
                    let fp = w.evaluate_fp_word(p)?;
                    let web = w.evaluate_word(p)?;
                    Ok(a != b || fp != sign * web)
                })
                .into_iter()
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|&bad| bad)
                .count();
            if mismatches > 0 {
                failures.push(format!("n = {n}, web {idx}: {mismatches} grid mismatches"));
            }
            for i in 1..=n {
                for j in i + 1..=n {
                    if w.has_fork(i, j) {
                        forks_checked += 1;
                        let p = wrench_expand_fork_preserving(w, i, j)?;
                        if !fork_preserved(&p, i, j) {
                            failures.push(format!("n = {n}, web {idx}: fork ({i},{j}) lost"));
                        }
                        let cert = certify(&p, 3, n / 3, |x| w.evaluate_fp_word(x), Exec::Sequential)?;
                        if !cert.ok() {
                            failures.push(format!("n = {n}, web {idx}: fork-preserving output differs"));
                        }
                    }
                }
            }
        }
    }
    Ok(report(
        7,
        "cross-engine expansion equality",
        cfg.seed,
        &failures,
        format!("{webs_checked} webs on full grids, {forks_checked} fork-preserving expansions"),
        json!({ "webs": webs_checked, "forks": forks_checked, "grid_points": grid_points }),
    ))
}

/// Tree counts, the SL_4 count with its convention, and the lower bounds.
pub fn criterion_8(cfg: &VerifyConfig) -> Result<CriterionReport> {
    let mut failures = Vec::new();
    let mut counts = Vec::new();
    for r in 1..=5 {
        let webs = enumerate_sl3_tree_webs_with(r, cfg.exec)?;
        let closed = tree_count_closed_form(r);
        let pairs = quaternary_pairs(r - 1).len();
        let keys: HashSet<String> = webs.iter().map(Web::canonical_key).collect();
        if webs.len() as u128 != closed || pairs as u128 != closed || keys.len() != webs.len() {
            failures.push(format!("r = {r}: {} webs, {pairs} pairs of 4-ary trees, closed form {closed}", webs.len()));
        }
        let round_trips = webs
            .iter()
            .all(|w| tree_bijection(w).and_then(|(_, q)| tree_bijection_inverse(&q)).map(|v| v.canonical_key()).ok()
                == Some(w.canonical_key()));
        if !round_trips {
            failures.push(format!("r = {r}: bijection does not round-trip"));
        }
        counts.push(json!({ "r": r, "webs": webs.len(), "closed_form": closed.to_string() }));
    }
    let basis = sl3_basis_with(&[1; 12], cfg.exec)?;
    let basis_trees: Vec<Web> = basis.into_iter().filter(is_tree).collect();
    let tree_keys: HashSet<String> = enumerate_sl3_tree_webs_with(4, cfg.exec)?.iter().map(Web::canonical_key).collect();
    let basis_keys: HashSet<String> = basis_trees.iter().map(Web::canonical_key).collect();
    if tree_keys != basis_keys {
        failures.push("degree-four trees differ from the tree webs of the basis".into());
    }
    let orbit_sizes: Vec<usize> = dihedral_orbits(&basis_trees).iter().map(Vec::len).collect();

    let (_, sl4) = enumerate_sl4_tree_webs_with(12, SL4_FINGERPRINT_SEED, cfg.exec)?;
    if sl4.distinct_invariants != 123 {
        failures.push(format!("SL_4 trees on 12 points: {} distinct invariants, expected 123", sl4.distinct_invariants));
    }

    let mut bounds = BTreeMap::new();
    let enumerated: Vec<u128> = counts.iter().map(|c| c["webs"].as_u64().unwrap_or(0) as u128).collect();
    for n in 3..=15usize {
        let d = degree_counts(n)?;
        let direct: u128 = (1..=n / 3).map(|r| binomial(n as u64, (3 * r) as u64) * enumerated[r - 1]).sum();
        if d.lower_bound != direct.to_string() {
            failures.push(format!("lower bound at n = {n}: {} vs {direct}", d.lower_bound));
        }
        bounds.insert(n, d.lower_bound);
    }
    if bounds.get(&9).map(String::as_str) != Some("261") {
        failures.push("lower bound at n = 9 is not 261".into());
    }
    Ok(report(
        8,
        "tree web counts",
        SL4_FINGERPRINT_SEED,
        &failures,
        format!("1, 2, 9, 52, 340 trees; {} SL_4 tree invariants on 12 points", sl4.distinct_invariants),
        json!({
            "sl3_trees": counts,
            "basis_tree_orbit_sizes": orbit_sizes,
            "sl4": sl4,
            "lower_bounds": bounds,
        }),
    ))
}

/// Fork prefilter soundness, symmetry and rotation covariance of the pairing.
pub fn criterion_9(cfg: &VerifyConfig) -> Result<CriterionReport> {
    let seed = seed_for(cfg, 9);
    let mut rng = Rng::new(seed);
    let basis = sl3_basis_with(&[1; 9], cfg.exec)?;
    let (_, rep) = duality_matrix_with(&basis, &basis, cfg.exec)?;
    let mut failures = Vec::new();
    if !rep.prefilter_sound {
        failures.push("a fork-sharing pair has non-zero pairing".into());
    }
    let pairs: Vec<(usize, usize)> = (0..100).map(|_| (rng.below(basis.len()), rng.below(basis.len()))).collect();
    let outcomes = cfg.exec.map(&pairs, |&(i, j)| -> Result<(Vec<String>, bool)> {
        let (w, x) = (&basis[i], &basis[j]);
        let mut bad = Vec::new();
        let wx = pair_webs_with(w, x, Engine::Wrench)?;
        let fp_wx = pair_with_poly(w, &wrench_expand(x)?)?;
        let fp_xw = pair_with_poly(x, &wrench_expand(w)?)?;
        if fp_wx != fp_xw {
            bad.push(format!("<W{i}, X{j}> is not symmetric"));
        }
        let web_symmetric = wx == pair_webs_with(x, w, Engine::Wrench)?;
        let (rw, rx) = (w.rotate(), x.rotate());
        let sign_x = x.word_and_sign()?.2;
        let sign_rx = rx.word_and_sign()?.2;
        let rotated = pair_webs_with(&rw, &rx, Engine::Wrench)?;
        if Q::from_integer(sign_rx.into()) * &wx != Q::from_integer(sign_x.into()) * rotated {
            bad.push(format!("rotation covariance fails for ({i}, {j})"));
        }
        Ok((bad, web_symmetric))
    });
    let mut nonzero = 0;
    let mut web_asymmetric = 0;
    for (o, &(i, j)) in outcomes.into_iter().zip(&pairs) {
        let (bad, web_symmetric) = o?;
        failures.extend(bad);
        if !web_symmetric {
            web_asymmetric += 1;
        }
        if rep.matrix[i][j] != "0" {
            nonzero += 1;
        }
    }
    Ok(report(
        9,
        "pairing soundness",
        seed,
        &failures,
        format!("prefilter sound on {} pairs; symmetry and rotation hold on 100 samples", rep.prefilter_hits),
        json!({
            "prefilter_hits": rep.prefilter_hits,
            "prefilter_sound": rep.prefilter_sound,
            "sampled_pairs": pairs.len(),
            "sampled_nonzero": nonzero,
            "symmetry_convention": "right-hand argument read in the FP convention",
            "web_convention_asymmetric_pairs": web_asymmetric,
        }),
    ))
}

/// Items that are out of reach at this scale, reported as excluded.
pub fn criterion_10(cfg: &VerifyConfig) -> Result<CriterionReport> {
    let mut failures = Vec::new();
    let trees = enumerate_sl3_tree_webs_with(4, cfg.exec)?.len() as u128;
    let coefficients: Vec<Value> = THM55_COEFFICIENTS
        .iter()
        .map(|&(m, c, status)| json!({ "binomial": format!("C(n,{m})"), "coefficient": c, "status": status }))
        .collect();
    if THM55_COEFFICIENTS[3].1 != trees {
        failures.push(format!("leading coefficient {} differs from the tree count {trees}", THM55_COEFFICIENTS[3].1));
    }
    Ok(report(
        10,
        "excluded items",
        cfg.seed,
        &failures,
        "excluded: coefficients 288/400/264 need arborization of non-standard webs; the tabulated webs are figures".into(),
        json!({
            "degree_four_coefficients": coefficients,
            "tabulated_webs": "not reproduced: encoded only as figures",
            "substitutes": [5, 6, 7, 8],
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x28_pieces_have_expected_shape() {
        let f = x28_polynomial();
        assert_eq!(f.len(), 8);
        assert_eq!(f.multidegree().unwrap(), vec![1; 12]);
        let mut rng = Rng::new(3);
        let m = rng.generic_point(3, 12, 5);
        assert!(!x28_twist_expected(&m).is_zero());
    }

    #[test]
    fn fast_criteria_pass() {
        let cfg = VerifyConfig::default();
        for id in [1, 2, 10] {
            let r = run_criterion(id, &cfg).unwrap();
            assert!(r.passed, "{r:?}");
        }
        assert!(run_suite("duality-2-3", &cfg).unwrap()[0].passed);
        assert!(run_suite("nope", &cfg).is_err());
    }
}
