use std::collections::BTreeMap;

use orbipoisson::catalog::{
    self, lie_poisson_family, r3_lie_poisson, symplectic_reflection, unit_class_function,
    z2_r3_group, CatalogEntry, CatalogError, GammaN,
};
use orbipoisson::group::MatrixGroup;
use orbipoisson::linalg::Matrix;
use orbipoisson::pbw::{check_bg, RewriteSystem};
use orbipoisson::polyvec::{is_poisson, schouten, PolyVectorField};
use orbipoisson::scalars::{parse_cyclotomic, Cyclotomic};

fn c(m: u32, v: i64) -> Cyclotomic {
    Cyclotomic::from_i64(m, v)
}

fn diag(m: u32, d: &[i64]) -> Matrix {
    let mut a = Matrix::zeros(d.len(), d.len(), m);
    for (i, &v) in d.iter().enumerate() {
        a[(i, i)] = c(m, v);
    }
    a
}

fn plane_form(m: u32) -> Matrix {
    Matrix::from_rows(vec![vec![c(m, 0), c(m, 1)], vec![c(m, -1), c(m, 0)]], m)
}

fn entries() -> Vec<CatalogEntry> {
    let g1 = GammaN::new(1, &c(3, 1), None).unwrap();
    let c0 = parse_cyclotomic("1 + z", 5).unwrap();
    let g2 = GammaN::new(2, &c0, None).unwrap();
    vec![
        g1.entry(&c(3, 1), false).unwrap(),
        g2.entry(&c0, false).unwrap(),
        catalog::z2_constant(&c(1, 3)).unwrap(),
        catalog::z2_r3_linear(1).unwrap(),
        catalog::z2_r3_linear(2).unwrap(),
        catalog::cyclic_qmoyal(2).unwrap(),
        catalog::cyclic_qmoyal(5).unwrap(),
        catalog::symplectic_cyclic(3, &c(1, 1), &c(1, 2)).unwrap(),
    ]
}

#[test]
fn entries_are_invariant_poisson_and_pbw() {
    for e in entries() {
        let total = e.pair.total();
        assert!(total.is_invariant(&e.group), "{}", e.name);
        assert!(is_poisson(&e.group, &total).unwrap().is_poisson(), "{}", e.name);
        assert!(check_bg(&e.group, &e.pair).unwrap().passes(), "{}", e.name);
        assert!(RewriteSystem::new(&e.group, &e.pair).overlap_confluence().is_empty(), "{}", e.name);
        if let Some(swap) = &e.swap {
            assert!(total.is_real(&e.group, swap).unwrap(), "{}", e.name);
        }
    }
}

#[test]
fn z2_constant_is_a_symplectic_reflection() {
    let z2 = MatrixGroup::generate(&[diag(1, &[-1, -1])], 2, 1, 2).unwrap();
    for v in [-2, 1, 5] {
        let cfun = BTreeMap::from([(1, c(1, v))]);
        let b = symplectic_reflection(&z2, &plane_form(1), &c(1, 0), &cfun).unwrap();
        assert_eq!(b, catalog::z2_constant(&c(1, v)).unwrap().pair.b);
    }
    // c = 0 leaves the Weyl relations
    let b = symplectic_reflection(&z2, &plane_form(1), &c(1, 1), &BTreeMap::new()).unwrap();
    let mut weyl = PolyVectorField::zero(2, 1);
    weyl.add_term(0, vec![0, 0], &[0, 1], &c(1, -1));
    assert_eq!(b, weyl);
}

#[test]
fn symplectic_reflection_terms_sit_at_codim_two() {
    let w = Matrix::from_rows(
        vec![
            vec![c(1, 0), c(1, 1), c(1, 0), c(1, 0)],
            vec![c(1, -1), c(1, 0), c(1, 0), c(1, 0)],
            vec![c(1, 0), c(1, 0), c(1, 0), c(1, 1)],
            vec![c(1, 0), c(1, 0), c(1, -1), c(1, 0)],
        ],
        1,
    );
    let g = MatrixGroup::generate(&[diag(1, &[-1, -1, 1, 1]), diag(1, &[1, 1, -1, -1])], 4, 1, 4).unwrap();
    let b = symplectic_reflection(&g, &w, &c(1, 1), &unit_class_function(&g)).unwrap();
    for l in b.labels() {
        assert!(g.codim(l) == 0 || g.codim(l) == 2);
    }
    assert_eq!(b.labels().len(), 3);
}

#[test]
fn scaled_parameters_keep_pbw() {
    for n in [2, 3, 4] {
        for t in [-3, -1, 1, 2, 7] {
            let e = catalog::symplectic_cyclic(n, &c(1, 1), &c(1, t)).unwrap();
            assert!(check_bg(&e.group, &e.pair).unwrap().passes());
            assert!(RewriteSystem::new(&e.group, &e.pair).overlap_confluence().is_empty());
        }
    }
}

#[test]
fn lie_poisson_family_examples() {
    let g = z2_r3_group(1);
    let cfun = unit_class_function(&g);
    let zero = PolyVectorField::zero(3, 1);
    assert!(lie_poisson_family(&g, &zero, &cfun).unwrap().is_zero());

    // the projection keeps z e1^e2 and drops the terms leaving the fixed line
    let mut expect = r3_lie_poisson(1, 1).unwrap();
    expect.add_term(1, vec![0, 0, 1], &[0, 1], &c(1, 1));
    for v in [1, 2] {
        let pi = lie_poisson_family(&g, &r3_lie_poisson(v, 1).unwrap(), &cfun).unwrap();
        let extra = pi.sub(&r3_lie_poisson(v, 1).unwrap());
        assert_eq!(extra, expect.sub(&r3_lie_poisson(1, 1).unwrap()));
        assert!(is_poisson(&g, &pi).unwrap().is_poisson());
        assert_eq!(pi, catalog::z2_r3_linear(v).unwrap().pair.pi);
    }
    let pi2 = r3_lie_poisson(2, 1).unwrap();
    assert!(schouten(&g, &pi2, &pi2).is_zero());
}

#[test]
fn catalog_errors() {
    let g = z2_r3_group(1);
    let cfun = unit_class_function(&g);

    let mut moved = PolyVectorField::zero(3, 1);
    moved.add_term(1, vec![0, 0, 1], &[0, 1], &c(1, 1));
    assert!(matches!(lie_poisson_family(&g, &moved, &cfun), Err(CatalogError::NotInvariant)));
    let mut odd = PolyVectorField::zero(3, 1);
    odd.add_term(0, vec![0, 0, 1], &[0, 2], &c(1, 1));
    assert!(matches!(lie_poisson_family(&g, &odd, &cfun), Err(CatalogError::NotInvariant)));

    let trivial = MatrixGroup::generate(&[], 3, 1, 1).unwrap();
    let mut bad = PolyVectorField::zero(3, 1);
    bad.add_term(0, vec![1, 0, 0], &[0, 1], &c(1, 1));
    bad.add_term(0, vec![0, 1, 0], &[1, 2], &c(1, 1));
    assert!(matches!(
        lie_poisson_family(&trivial, &bad, &BTreeMap::new()),
        Err(CatalogError::Jacobi)
    ));

    let g1 = GammaN::new(1, &c(3, 1), None).unwrap();
    let one_beta = BTreeMap::from([(g1.beta[0], c(3, 1))]);
    let zero = PolyVectorField::zero(4, 3);
    assert!(matches!(
        lie_poisson_family(&g1.group, &zero, &one_beta),
        Err(CatalogError::NotClassFunction)
    ));

    let refl = MatrixGroup::generate(&[diag(1, &[-1, 1])], 2, 1, 2).unwrap();
    assert!(matches!(
        symplectic_reflection(&refl, &plane_form(1), &c(1, 1), &BTreeMap::new()),
        Err(CatalogError::FormNotPreserved(0))
    ));

    assert!(GammaN::new(1, &c(3, 1), Some(&c(3, 2))).is_ok());
    assert!(matches!(
        GammaN::new(2, &c(5, 1), Some(&c(5, 2))),
        Err(CatalogError::Parameter(_))
    ));
    assert!(catalog::cyclic_qmoyal(1).is_err());
    assert!(catalog::z2_r3_linear(3).is_err());
}
