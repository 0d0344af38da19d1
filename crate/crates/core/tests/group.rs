use std::collections::BTreeMap;

use orbipoisson::catalog::{symplectic_cyclic, GammaN};
use orbipoisson::group::{GroupError, MatrixGroup};
use orbipoisson::linalg::Matrix;
use orbipoisson::scalars::Cyclotomic;

fn c(m: u32, v: i64) -> Cyclotomic {
    Cyclotomic::from_i64(m, v)
}

fn mat(m: u32, rows: Vec<Vec<Cyclotomic>>) -> Matrix {
    Matrix::from_rows(rows, m)
}

fn minus_identity() -> MatrixGroup {
    let g = mat(1, vec![vec![c(1, -1), c(1, 0)], vec![c(1, 0), c(1, -1)]]);
    MatrixGroup::generate(&[g], 2, 1, 10).unwrap()
}

/// Gamma_1 as 2x2 complex matrices: diag(r, 1/r) and the swap.
fn gamma1_complex() -> MatrixGroup {
    let r = Cyclotomic::root_of_unity(3, 1);
    let a = mat(3, vec![vec![r.clone(), c(3, 0)], vec![c(3, 0), r.inv().unwrap()]]);
    let b = mat(3, vec![vec![c(3, 0), c(3, 1)], vec![c(3, 1), c(3, 0)]]);
    MatrixGroup::generate(&[a, b], 2, 3, 100).unwrap()
}

fn cyclic(n: u32) -> MatrixGroup {
    let q = Cyclotomic::root_of_unity(n, 1);
    let g = mat(n, vec![vec![q.clone(), c(n, 0)], vec![c(n, 0), q.inv().unwrap()]]);
    MatrixGroup::generate(&[g], 2, n, 100).unwrap()
}

fn klein_r3() -> MatrixGroup {
    let d = |a: i64, b: i64, cc: i64| {
        mat(1, vec![
            vec![c(1, a), c(1, 0), c(1, 0)],
            vec![c(1, 0), c(1, b), c(1, 0)],
            vec![c(1, 0), c(1, 0), c(1, cc)],
        ])
    };
    MatrixGroup::generate(&[d(-1, -1, 1), d(-1, 1, -1)], 3, 1, 10).unwrap()
}

fn hform(h: &Matrix, u: &[Cyclotomic], v: &[Cyclotomic]) -> Cyclotomic {
    let hv = h.mul_vec(v);
    let mut s = Cyclotomic::zero(h.conductor());
    for (a, b) in u.iter().zip(&hv) {
        s += &(&a.conj() * b);
    }
    s
}

fn check_invariants(g: &MatrixGroup) {
    let n = g.order();
    let id = Matrix::identity(g.dim(), g.conductor());
    let mut class_sizes = 0;
    for a in 0..n {
        assert_eq!(g.matrix(a) == &id, a == g.identity());
        assert_eq!(n % g.element_order(a), 0);
        assert_eq!(g.from_word(g.word(a)), Some(a));
        assert_eq!(g.mul(a, g.inv(a)), g.identity());
        for b in 0..n {
            let prod = g.matrix(a) * g.matrix(b);
            assert_eq!(g.find(&prod), Some(g.mul(a, b)));
            assert_eq!(g.codim(g.conjugate(b, a)), g.codim(a));
        }
        let cent = g.centralizer(a);
        assert!(cent.contains(&a));
        for &x in &cent {
            for &y in &cent {
                assert!(cent.contains(&g.mul(x, y)));
            }
        }
        assert_eq!(g.class_of(a).len() * cent.len(), n);

        let geo = g.geometry(a);
        assert_eq!(geo.fixed.len() + geo.normal.len(), g.dim());
        for v in &geo.fixed {
            assert_eq!(&g.matrix(a).mul_vec(v), v);
            for w in &geo.normal {
                assert!(hform(g.hermitian_form(), v, w).is_zero());
            }
        }
        // N^g is g-stable: g w has no component outside the normal span
        let mut cols = geo.normal.clone();
        let r0 = Matrix::from_columns(&cols, g.dim(), g.conductor()).rank();
        for w in &geo.normal {
            cols.push(g.matrix(a).mul_vec(w));
        }
        assert_eq!(Matrix::from_columns(&cols, g.dim(), g.conductor()).rank(), r0);
    }
    let mut seen = vec![false; n];
    for class in g.classes() {
        class_sizes += class.len();
        for &x in class {
            assert!(!std::mem::replace(&mut seen[x], true));
        }
    }
    assert_eq!(class_sizes, n);
    let counts: usize = g.codim_class_counts().values().sum();
    assert_eq!(counts, g.classes().len());
}

#[test]
fn small_groups() {
    let z2 = minus_identity();
    assert_eq!(z2.order(), 2);
    assert_eq!(z2.codim(1), 2);
    assert!(z2.geometry(1).fixed.is_empty());
    assert_eq!(z2.codim_class_counts(), BTreeMap::from([(0, 1), (2, 1)]));

    let g1 = gamma1_complex();
    assert_eq!(g1.order(), 6);
    let mut sizes: Vec<usize> = g1.classes().iter().map(|c| c.len()).collect();
    sizes.sort();
    assert_eq!(sizes, vec![1, 2, 3]);

    for n in 2..=7 {
        assert_eq!(cyclic(n).order(), n as usize);
    }

    let k = klein_r3();
    assert_eq!(k.order(), 4);
    assert!(k.classes().iter().all(|c| c.len() == 1));
    for a in 0..4 {
        assert_eq!(k.centralizer(a).len(), 4);
    }

    let trivial = MatrixGroup::generate(&[], 2, 1, 1).unwrap();
    assert_eq!(trivial.codim_class_counts(), BTreeMap::from([(0, 1)]));
}

#[test]
fn group_invariants() {
    for g in [minus_identity(), gamma1_complex(), cyclic(5), klein_r3()] {
        check_invariants(&g);
    }
    let gn = GammaN::new(2, &c(5, 1), None).unwrap();
    check_invariants(&gn.group);
}

#[test]
fn gamma_n_geometry() {
    for n in 1..=2 {
        let g = GammaN::new(n, &c(2 * n + 1, 1), None).unwrap();
        assert_eq!(g.group.order(), 4 * n as usize + 2);
        for k in 0..=2 * n as usize {
            assert_eq!(g.group.codim(g.beta[k]), 2);
            if k > 0 {
                assert_eq!(g.group.codim(g.alpha[k]), 4);
            }
        }
    }
    let g = GammaN::new(1, &c(3, 1), None).unwrap();
    assert_eq!(g.group.codim_class_counts(), BTreeMap::from([(0, 1), (2, 1), (4, 1)]));
}

#[test]
fn symplectic_groups_have_even_codimension() {
    for n in 2..=6 {
        let e = symplectic_cyclic(n, &c(1, 1), &c(1, 1)).unwrap();
        for g in 0..e.group.order() {
            assert_eq!(e.group.codim(g) % 2, 0);
        }
    }
}

#[test]
fn generate_errors() {
    let singular = mat(1, vec![vec![c(1, 1), c(1, 0)], vec![c(1, 0), c(1, 0)]]);
    assert_eq!(MatrixGroup::generate(&[singular], 2, 1, 10).err(), Some(GroupError::Singular(0)));
    let wrong = mat(1, vec![vec![c(1, 1)]]);
    assert_eq!(MatrixGroup::generate(&[wrong], 2, 1, 10).err(), Some(GroupError::Shape(0, 2)));
    let q = Cyclotomic::root_of_unity(7, 1);
    let g = mat(7, vec![vec![q.clone(), c(7, 0)], vec![c(7, 0), q.inv().unwrap()]]);
    assert_eq!(MatrixGroup::generate(&[g], 2, 7, 5).err(), Some(GroupError::OrderExceeded(5)));
}
