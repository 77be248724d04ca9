//! Acceptance gate: ten exact end-to-end checks covering the relation
//! engine, rewriting confluence, the tableau degree identity, the worked
//! Garnir example, the brick intertwiner theorems, the Specht grids, and
//! the character-level theorems. Every comparison is exact integer
//! arithmetic; each check also enforces its runtime budget.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use klr_specht::bricks;
use klr_specht::ground::GroundData;
use klr_specht::klr::{self, CheckReport, Rewriter, Token};
use klr_specht::specht::{self, multinomial};
use klr_specht::tableaux::garnir::{garnir_data, Orientation};
use klr_specht::tableaux::{
    all_shapes, codegree, content, degree, enumerate, initial_tableaux, parse_node, parse_shape,
    parse_tableau, FillingKind, Multipartition,
};

fn finish(criterion: usize, what: &str, start: Instant, budget: Duration) {
    let elapsed = start.elapsed();
    assert!(
        elapsed <= budget,
        "criterion {criterion} took {elapsed:?}, over its {budget:?} budget"
    );
    println!("PASS criterion {criterion}: {what} ({elapsed:.2?})");
}

fn assert_all_pass(reports: &[CheckReport], context: &str) {
    for r in reports {
        assert!(
            r.passed(),
            "{context}: {} failed: {}",
            r.name,
            r.failures[0]
        );
    }
}

// The shape grid shared by the Specht-level criteria: level 1 up to the
// given size with charge (0), level 2 one size lower with charges (0,0)
// and (0,1).
fn specht_grid(e: i64, level_one_max: usize, level_two_max: usize) -> Vec<(GroundData, Vec<Multipartition>)> {
    let mut grid = Vec::new();
    for charge in [vec![0i64], vec![0, 0], vec![0, 1]] {
        let max = if charge.len() == 1 { level_one_max } else { level_two_max };
        let g = GroundData::new(e, &charge).unwrap();
        grid.push((g, all_shapes(max, charge.len())));
    }
    grid
}

#[test]
fn criterion_1_defining_relations_normalize_to_zero() {
    let start = Instant::now();
    let mut family_cases: HashMap<(i64, String), usize> = HashMap::new();
    for &e in &[0i64, 2, 3] {
        let g = GroundData::new(e, &[0]).unwrap();
        for d in 3..=6usize {
            let seed = 9000 + 100 * e as u64 + d as u64;
            let reports =
                klr::verify_relations(&g, d, 140, seed, klr::DEFAULT_BUDGET).unwrap();
            assert_all_pass(&reports, &format!("relations e={e} d={d}"));
            for r in &reports {
                *family_cases.entry((e, r.name.clone())).or_insert(0) += r.cases;
            }
        }
    }
    for ((e, family), cases) in &family_cases {
        assert!(
            *cases >= 500,
            "family {family} at e={e} ran only {cases} instances"
        );
    }
    // The e = 2 braid corrections exhaustively: every rank-3 idempotent,
    // including the doubled special case i_r = i_{r+2} = i_{r+1} -+ 1.
    let g = GroundData::new(2, &[0]).unwrap();
    let rw = Rewriter::new(&g);
    for bits in 0..8u32 {
        let seq: Vec<_> = (0..3).map(|s| g.residue(((bits >> s) & 1) as i64)).collect();
        let mut raw = vec![
            (
                BigInt::from(1),
                vec![Token::Psi(1), Token::Psi(2), Token::Psi(1), Token::E(seq.clone())],
            ),
            (
                BigInt::from(-1),
                vec![Token::Psi(2), Token::Psi(1), Token::Psi(2), Token::E(seq.clone())],
            ),
        ];
        for (c, ys) in klr::braid_coefficients(&g, &seq, 1) {
            let mut tokens: Vec<Token> = ys.iter().map(|&r| Token::Y(r)).collect();
            tokens.push(Token::E(seq.clone()));
            raw.push((-c, tokens));
        }
        let normal = rw.normal_form(&raw, 3).unwrap();
        assert!(normal.is_zero(), "braid special case fails at {seq:?}");
    }
    finish(
        1,
        "all defining relation families normalize to zero, 560 instances each, e in {0,2,3}, d <= 6",
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_2_rewriting_is_confluent_across_strategies() {
    let start = Instant::now();
    let reports = klr::verify_confluence(1000, 17, klr::DEFAULT_BUDGET).unwrap();
    assert_all_pass(&reports, "confluence");
    let cases: usize = reports.iter().map(|r| r.cases).sum();
    assert!(cases >= 1000, "only {cases} confluence cases ran");
    finish(
        2,
        "1000 random products reach identical normal forms under both fold strategies",
        start,
        Duration::from_secs(120),
    );
}

#[test]
fn criterion_3_degree_plus_codegree_is_the_defect() {
    let start = Instant::now();
    let mut checked = 0usize;
    for &e in &[0i64, 2, 3] {
        for (g, shapes) in specht_grid(e, 8, 6) {
            for mu in shapes {
                let alpha = content(&mu, &g);
                let def = g.defect(&alpha).unwrap();
                for t in enumerate(&mu, FillingKind::Standard) {
                    let total = degree(&t, &g).unwrap() + codegree(&t, &g).unwrap();
                    assert_eq!(total, def, "deg+codeg != defect at {t} (e={e})");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 10_000, "grid unexpectedly small: {checked} tableaux");
    finish(
        3,
        "deg(T) + codeg(T) = def(content) exhaustively over both level grids",
        start,
        Duration::from_secs(60),
    );
}

#[test]
fn criterion_4_worked_garnir_example() {
    let start = Instant::now();
    let g = GroundData::new(2, &[0, 0]).unwrap();
    let mu = parse_shape("1|7,7,4,1").unwrap();
    let node = parse_node("(2,3,2)").unwrap();
    let data = garnir_data(&mu, &node, Orientation::Row, &g).unwrap();
    assert_eq!(data.k, 3);
    assert_eq!(data.f, 2);
    assert_eq!(data.n, Some(12));
    let (t_row, _) = initial_tableaux(&mu);
    assert_eq!(t_row.entry(&node), Some(11));
    assert_eq!(t_row.entry(&parse_node("(3,3,2)").unwrap()), Some(18));
    let garnir = parse_tableau("1;2,3,4,5,6,7,8|9,10,14,15,16,17,18|11,12,13,19|20").unwrap();
    let top = parse_tableau("1;2,3,4,5,6,7,8|9,10,12,13,14,15,18|11,16,17,19|20").unwrap();
    assert_eq!(data.garnir_tableau, garnir);
    assert_eq!(data.top_tableau, top);
    assert_eq!(data.gar_tableaux.len(), 3);
    let column_node = parse_node("(3,1,2)").unwrap();
    let column = garnir_data(&mu, &column_node, Orientation::Column, &g).unwrap();
    assert_eq!(column.k, 2);
    assert_eq!(column.n, Some(4));
    finish(
        4,
        "the printed example reproduces k=3, f=2, n=12, u=11, v=18, both tableaux, |Gar|=3, and the column case k=2, n=4",
        start,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_5_brick_intertwiner_theorems() {
    let start = Instant::now();
    let compositions: &[&[usize]] = &[&[2], &[1, 1], &[3], &[2, 1], &[1, 2], &[1, 1, 1]];
    for &e in &[2i64, 3] {
        let g = GroundData::new(e, &[0]).unwrap();
        for &lambda in compositions {
            for orientation in [Orientation::Row, Orientation::Column] {
                let space = bricks::brick_space(g.residue(0), lambda, orientation, &g).unwrap();
                let reports = bricks::verify_brick_theorems(&space).unwrap();
                assert_all_pass(&reports, &format!("bricks e={e} lambda={lambda:?}"));
                let k: usize = lambda.iter().sum();
                assert_eq!(BigInt::from(space.dimension()), multinomial(k, lambda));
            }
            let report = bricks::verify_sign_translation(g.residue(0), lambda, &g).unwrap();
            assert_all_pass(
                &[report],
                &format!("sign translation e={e} lambda={lambda:?}"),
            );
        }
    }
    finish(
        5,
        "annihilation, quadratic, braid, tau Coxeter, and dimension identities for all bricks up to d=9",
        start,
        Duration::from_secs(600),
    );
}

#[test]
fn criterion_6_specht_construction_grid() {
    let start = Instant::now();
    for &e in &[0i64, 2, 3] {
        for (g, shapes) in specht_grid(e, 6, 5) {
            for mu in shapes {
                for orientation in [Orientation::Row, Orientation::Column] {
                    let reports = specht::verify_specht(&mu, orientation, &g).unwrap();
                    assert_all_pass(&reports, &format!("specht e={e} mu={mu}"));
                }
            }
        }
    }
    finish(
        6,
        "standard rank, basis degrees, Garnir kill, matrix relations, and straightening triangularity over the grid",
        start,
        Duration::from_secs(900),
    );
}

#[test]
fn criterion_7_sign_twist_grid() {
    let start = Instant::now();
    for &e in &[0i64, 2, 3] {
        for (g, shapes) in specht_grid(e, 6, 5) {
            for mu in shapes {
                let reports = specht::verify_sign_twist(&mu, &g).unwrap();
                assert_all_pass(&reports, &format!("sign twist e={e} mu={mu}"));
            }
        }
    }
    finish(
        7,
        "conjugation swaps deg and codeg, negates residues, and matches the sign-twisted characters and Garnir elements",
        start,
        Duration::from_secs(900),
    );
}

#[test]
fn criterion_8_duality_grid() {
    let start = Instant::now();
    for &e in &[0i64, 2, 3] {
        for (g, shapes) in specht_grid(e, 6, 5) {
            for mu in shapes {
                let reports = specht::verify_duality(&mu, &g).unwrap();
                assert_all_pass(&reports, &format!("duality e={e} mu={mu}"));
            }
        }
    }
    finish(
        8,
        "gdim S_mu(q) = q^def gdim S^mu(1/q) and the dual generator satisfies the defining relations",
        start,
        Duration::from_secs(900),
    );
}

#[test]
fn criterion_9_induction_product_level_two() {
    let start = Instant::now();
    for &e in &[2i64, 3] {
        for charge in [vec![0i64, 0], vec![0, 1]] {
            let g = GroundData::new(e, &charge).unwrap();
            for mu in all_shapes(5, 2) {
                let reports = specht::verify_induction(&mu, &g).unwrap();
                assert_all_pass(&reports, &format!("induction e={e} mu={mu}"));
            }
        }
    }
    finish(
        9,
        "level-2 graded dimensions equal the shifted induced product of the level-1 factors, and count cosets at q=1",
        start,
        Duration::from_secs(900),
    );
}

#[test]
fn criterion_10_dual_basis_degree_formula() {
    let start = Instant::now();
    for &e in &[0i64, 2, 3] {
        for (g, shapes) in specht_grid(e, 6, 5) {
            for mu in shapes {
                let row = specht::build_specht(&mu, Orientation::Row, &g).unwrap();
                let column = specht::build_specht(&mu, Orientation::Column, &g).unwrap();
                let def = row.defect().unwrap();
                for s in 0..row.rank() {
                    let t = row.standard_tableau(s);
                    // deg f_T both ways: minus the constructed degree of
                    // v^T, and codeg T - def from the tableau statistics.
                    assert_eq!(
                        codegree(&t, &g).unwrap() - def,
                        -row.basis_degree(s),
                        "deg f_T mismatch at {t}"
                    );
                    // deg f^T both ways, through the column module.
                    let c = column.standard_coordinate(&t).unwrap();
                    assert_eq!(
                        degree(&t, &g).unwrap() - def,
                        -column.basis_degree(c),
                        "deg f^T mismatch at {t}"
                    );
                }
            }
        }
    }
    finish(
        10,
        "deg f_T = codeg T - def and deg f^T = deg T - def, recomputed from the module gradings, over the grid",
        start,
        Duration::from_secs(900),
    );
}
