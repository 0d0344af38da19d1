mod common;

use common::{c, crossed_product, random_pair, random_word, signs, small_groups, to_crossed};
use orbipoisson::catalog::{self, GammaN};
use orbipoisson::group::MatrixGroup;
use orbipoisson::pbw::{
    check_bg, graded_dimension, koszul_total, solve_b, Condition, Letter, NCElement, PbwError,
    RewriteSystem, StructurePair,
};
use orbipoisson::polyvec::{schouten, PolyVectorField};
use orbipoisson::scalars::HScalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn bg_agrees_with_confluence_on_random_structures() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let groups = small_groups();
    let (mut pass, mut fail) = (0, 0);
    for t in 0..36 {
        let g = &groups[t % groups.len()];
        assert!(g.order() <= 12);
        let pair = random_pair(&mut rng, g);
        let bg = check_bg(g, &pair).unwrap().passes();
        let conf = RewriteSystem::new(g, &pair).overlap_confluence().is_empty();
        assert_eq!(bg, conf, "case {t}: pi = {} b = {}", pair.pi, pair.b);
        if bg {
            pass += 1;
        } else {
            fail += 1;
        }
    }
    assert!(pass >= 5 && fail >= 5, "pass {pass} fail {fail}");
}

#[test]
fn normal_form_examples() {
    let z2 = signs(1, &[&[-1, -1]]);
    let pair = catalog::z2_constant(&c(1, 2)).unwrap().pair;
    let rs = RewriteSystem::new(&z2, &pair);
    let e = rs.normal_form(&[Letter::G(1), Letter::X(0)]);
    let one = HScalar::constant(c(1, 1));
    assert_eq!(e, NCElement::monomial(vec![1, 0], 1, -&one));
    let sorted = rs.normal_form(&[Letter::X(0), Letter::X(0), Letter::X(1), Letter::G(1)]);
    assert_eq!(sorted, NCElement::monomial(vec![2, 1], 1, one.clone()));

    // coordinates ordered (y, x) with pi(x, y) = g, so x y = y x + h g
    let mut b = PolyVectorField::zero(2, 1);
    b.add_term(1, vec![0, 0], &[0, 1], &c(1, -1));
    let pair = StructurePair::new(PolyVectorField::zero(2, 1), b, (1, 1)).unwrap();
    let rs = RewriteSystem::new(&z2, &pair);
    let mut expect = NCElement::monomial(vec![1, 1], 0, one.clone());
    expect.add_term(vec![0, 0], 1, &HScalar::monomial(c(1, 1), 1));
    assert_eq!(rs.normal_form(&[Letter::X(1), Letter::X(0)]), expect);
}

fn as_words(e: &NCElement) -> Vec<(Vec<Letter>, HScalar)> {
    e.terms()
        .map(|((exps, g), c)| {
            let mut w: Vec<Letter> = exps
                .iter()
                .enumerate()
                .flat_map(|(i, &k)| std::iter::repeat_n(Letter::X(i), k as usize))
                .collect();
            w.push(Letter::G(*g));
            (w, c.clone())
        })
        .collect()
}

fn confluent_entries() -> Vec<(MatrixGroup, StructurePair)> {
    let g1 = GammaN::new(1, &c(3, 1), None).unwrap();
    let pair = StructurePair::new(g1.pi(), g1.b(), (1, 2)).unwrap();
    let e = catalog::z2_r3_linear(2).unwrap();
    let q = catalog::cyclic_qmoyal(3).unwrap();
    vec![(g1.group, pair), (e.group, e.pair), (q.group, q.pair)]
}

#[test]
fn normal_form_idempotent_and_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (g, pair) in confluent_entries() {
        let rs = RewriteSystem::new(&g, &pair);
        assert!(rs.overlap_confluence().is_empty());
        for _ in 0..15 {
            let w = random_word(&mut rng, &g, 5);
            let nf = rs.normal_form(&w);
            let mut again = NCElement::zero();
            for (word, coef) in as_words(&nf) {
                again.add_scaled(&rs.normal_form(&word), &coef);
            }
            assert_eq!(again, nf);

            let (u, v, x) = (
                random_word(&mut rng, &g, 2),
                random_word(&mut rng, &g, 2),
                random_word(&mut rng, &g, 2),
            );
            let whole: Vec<Letter> = [u.clone(), v.clone(), x.clone()].concat();
            let (nu, nv, nx) = (rs.normal_form(&u), rs.normal_form(&v), rs.normal_form(&x));
            let left = rs.multiply(&rs.multiply(&nu, &nv), &nx);
            let right = rs.multiply(&nu, &rs.multiply(&nv, &nx));
            assert_eq!(left, right);
            assert_eq!(left, rs.normal_form(&whole));
        }
    }
}

#[test]
fn hbar_zero_is_crossed_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let entries = confluent_entries();
    for t in 0..100 {
        let (g, pair) = &entries[t % entries.len()];
        let rs = RewriteSystem::new(g, pair);
        let len = rng.gen_range(1..7);
        let w = random_word(&mut rng, g, len);
        let nf = rs.normal_form(&w).at_hbar_zero();
        assert_eq!(to_crossed(&nf, g.dim(), g.conductor()), crossed_product(g, &w));
    }
}

#[test]
fn graded_dimension_examples() {
    assert_eq!(graded_dimension(2, 2, 3), 20);
    for n in 1..8 {
        assert_eq!(graded_dimension(2, n, 2), 6 * n);
    }
    assert_eq!(graded_dimension(4, 6, 1), 30);
}

#[test]
fn solve_b_cases() {
    // abelian groups: linear Poisson structures need no correction
    for v in [1, 2] {
        let e = catalog::z2_r3_linear(v).unwrap();
        assert!(solve_b(&e.group, &e.pair.pi).unwrap().is_zero());
    }

    // a linear structure failing Jacobi on the trivial group has no constant fix
    let g = MatrixGroup::generate(&[], 3, 1, 1).unwrap();
    let mut pi = PolyVectorField::zero(3, 1);
    pi.add_term(0, vec![1, 0, 0], &[0, 1], &c(1, 1));
    pi.add_term(0, vec![0, 1, 0], &[1, 2], &c(1, 1));
    assert!(!schouten(&g, &pi, &pi).is_zero());
    assert!(matches!(solve_b(&g, &pi), Err(PbwError::Infeasible { label: 0, .. })));
}

#[test]
fn gamma1_without_correction() {
    let g1 = GammaN::new(1, &c(3, 1), None).unwrap();
    let g = &g1.group;
    let zero = StructurePair::new(g1.pi(), PolyVectorField::zero(4, 3), (1, 2)).unwrap();
    let report = check_bg(g, &zero).unwrap();
    assert!(!report.passes());
    let labels: Vec<usize> = report.failing(Condition::Coboundary).map(|f| f.label).collect();
    assert!(!labels.is_empty());
    assert!(report.failures.iter().all(|f| f.condition == Condition::Coboundary));
    for l in &labels {
        assert!(g1.alpha[1..].contains(l));
        assert_eq!(g.codim(*l), 4);
    }
    let failures = RewriteSystem::new(g, &zero).overlap_confluence();
    assert!(!failures.is_empty());
    // the disagreements live at the same labels
    for f in &failures {
        for ((_, label), _) in f.difference.terms() {
            assert!(labels.contains(label), "{:?}", f.word);
        }
    }

    let b = solve_b(g, &g1.pi()).unwrap();
    let pair = StructurePair::new(g1.pi(), b.clone(), (1, 2)).unwrap();
    assert!(check_bg(g, &pair).unwrap().passes());
    assert!(RewriteSystem::new(g, &pair).overlap_confluence().is_empty());
    assert!(koszul_total(g, &b.sub(&g1.b())).unwrap().is_zero());
}

#[test]
fn check_bg_examples() {
    // pi = 0 with an invariant closed constant b
    let e = catalog::symplectic_cyclic(3, &c(1, 0), &c(1, 1)).unwrap();
    assert!(check_bg(&e.group, &e.pair).unwrap().passes());

    let z2 = signs(1, &[&[-1, -1]]);
    let mut b = PolyVectorField::zero(2, 1);
    b.add_term(0, vec![1, 0], &[0, 1], &c(1, 1));
    let pair = StructurePair::new(b, PolyVectorField::zero(2, 1), (1, 2)).unwrap();
    assert!(matches!(check_bg(&z2, &pair), Err(PbwError::NotInvariant)));
}
