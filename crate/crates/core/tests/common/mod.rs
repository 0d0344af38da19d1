//! Random structures and oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use orbipoisson::catalog::{self, GammaN};
use orbipoisson::group::MatrixGroup;
use orbipoisson::linalg::Matrix;
use orbipoisson::pbw::{solve_b, Letter, NCElement, StructurePair};
use orbipoisson::polyvec::{Poly, PolyVectorField, TermKey};
use orbipoisson::scalars::Cyclotomic;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(m: u32, v: i64) -> Cyclotomic {
    Cyclotomic::from_i64(m, v)
}


pub fn diag_group(m: u32, diags: &[Vec<Cyclotomic>]) -> MatrixGroup {
    let n = diags[0].len();
    let gens: Vec<Matrix> = diags
        .iter()
        .map(|d| {
            let mut a = Matrix::zeros(n, n, m);
            for (i, v) in d.iter().enumerate() {
                a[(i, i)] = v.clone();
            }
            a
        })
        .collect();
    MatrixGroup::generate(&gens, n, m, 64).unwrap()
}


pub fn signs(m: u32, rows: &[&[i64]]) -> MatrixGroup {
    let d: Vec<Vec<Cyclotomic>> = rows.iter().map(|r| r.iter().map(|&v| c(m, v)).collect()).collect();
    diag_group(m, &d)
}


pub fn small_groups() -> Vec<MatrixGroup> {
    let r = Cyclotomic::root_of_unity(3, 1);
    vec![
        signs(1, &[&[-1, -1]]),
        diag_group(3, &[vec![r.clone(), r.inv().unwrap()]]),
        signs(1, &[&[-1, -1, 1, 1], &[1, 1, -1, -1]]),
        signs(1, &[&[-1, 1, 1], &[1, -1, 1], &[1, 1, -1]]),
        GammaN::new(1, &c(3, 1), None).unwrap().group,
        catalog::symplectic_cyclic(4, &c(1, 1), &c(1, 1)).unwrap().group,
    ]
}


/// A random non-zero invariant bivector, or zero when averaging keeps
/// killing the samples.
pub fn random_bivector(rng: &mut ChaCha8Rng, g: &MatrixGroup, poly_deg: u32) -> PolyVectorField {
    for _ in 0..50 {
        let x = random_sample(rng, g, poly_deg).average(g);
        if !x.is_zero() {
            return x;
        }
    }
    PolyVectorField::zero(g.dim(), g.conductor())
}


pub fn random_sample(rng: &mut ChaCha8Rng, g: &MatrixGroup, poly_deg: u32) -> PolyVectorField {
    let n = g.dim();
    let m = g.conductor();
    let mut x = PolyVectorField::zero(n, m);
    for _ in 0..rng.gen_range(1..4) {
        let label = rng.gen_range(0..g.order());
        let mut exps = vec![0u32; n];
        if poly_deg > 0 {
            exps[rng.gen_range(0..n)] = 1;
        }
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let k = &Cyclotomic::root_of_unity(m, rng.gen_range(0..m as i64)) * &c(m, rng.gen_range(1..=3));
        x.add_term(label, exps, &[i, j], &k);
    }
    x
}


/// A random invariant pair; some kinds pass the conditions by construction,
/// others typically fail.
pub fn random_pair(rng: &mut ChaCha8Rng, g: &MatrixGroup) -> StructurePair {
    let n = g.dim();
    let m = g.conductor();
    let zero = PolyVectorField::zero(n, m);
    let weights = if rng.gen_bool(0.5) { (1, 2) } else { (1, 1) };
    match rng.gen_range(0..4) {
        0 => StructurePair::new(zero, random_bivector(rng, g, 0).project(g), weights).unwrap(),
        1 => StructurePair::new(zero, random_bivector(rng, g, 0), weights).unwrap(),
        2 => StructurePair::new(random_bivector(rng, g, 1), zero, weights).unwrap(),
        _ => {
            let pi = random_bivector(rng, g, 1).project(g);
            let b = solve_b(g, &pi).unwrap_or(zero);
            StructurePair::new(pi, b, (1, 2)).unwrap()
        }
    }
}


pub fn random_word(rng: &mut ChaCha8Rng, g: &MatrixGroup, len: usize) -> Vec<Letter> {
    (0..len)
        .map(|_| {
            if rng.gen_bool(0.7) {
                Letter::X(rng.gen_range(0..g.dim()))
            } else {
                Letter::G(rng.gen_range(0..g.order()))
            }
        })
        .collect()
}


/// Product in the undeformed crossed product, computed with commutative
/// polynomials: p g * x_i = p (g.x_i) g.
pub fn crossed_product(g: &MatrixGroup, word: &[Letter]) -> BTreeMap<usize, Poly> {
    let n = g.dim();
    let m = g.conductor();
    let mut acc = BTreeMap::from([(g.identity(), Poly::constant(n, c(m, 1)))]);
    for &l in word {
        let mut next: BTreeMap<usize, Poly> = BTreeMap::new();
        for (h, p) in acc {
            match l {
                Letter::X(i) => {
                    let hinv = g.matrix(g.inv(h));
                    let form = Poly::linear(hinv.row(i), m);
                    let entry = next.entry(h).or_insert_with(|| Poly::zero(n, m));
                    entry.add_scaled(&p.mul(&form), &c(m, 1));
                }
                Letter::G(k) => {
                    let entry = next.entry(g.mul(h, k)).or_insert_with(|| Poly::zero(n, m));
                    entry.add_scaled(&p, &c(m, 1));
                }
            }
        }
        acc = next.into_iter().filter(|(_, p)| !p.is_zero()).collect();
    }
    acc
}


pub fn to_crossed(e: &NCElement, n: usize, m: u32) -> BTreeMap<usize, Poly> {
    let mut out: BTreeMap<usize, Poly> = BTreeMap::new();
    for ((exps, g), coef) in e.terms() {
        let v = coef.at_zero().expect("specialized element has no h terms");
        assert_eq!(coef.degree(), Some(0));
        out.entry(*g).or_insert_with(|| Poly::zero(n, m)).add_term(exps.clone(), v);
    }
    out.into_iter().filter(|(_, p)| !p.is_zero()).collect()
}

/// Rank of a family of polyvectors by forward elimination on term maps.
pub fn span_rank(fs: &[PolyVectorField]) -> usize {
    let mut rows: Vec<(TermKey, PolyVectorField)> = Vec::new();
    for f in fs {
        let mut v = f.clone();
        for (k, r) in &rows {
            if let Some(x) = v.coeff(k) {
                let s = &(-x) * &r.coeff(k).unwrap().inv().unwrap();
                v.add_scaled(r, &s);
            }
        }
        let lead = v.terms().next().map(|(k, _)| k.clone());
        if let Some(k) = lead {
            rows.push((k, v));
        }
    }
    rows.len()
}

pub fn same_span(a: &[PolyVectorField], b: &[PolyVectorField]) -> bool {
    let both: Vec<PolyVectorField> = a.iter().chain(b).cloned().collect();
    let r = span_rank(&both);
    r == span_rank(a) && r == span_rank(b)
}

pub fn function(p: &Poly) -> PolyVectorField {
    let mut f = PolyVectorField::zero(p.nvars(), p.conductor());
    f.add_poly(0, p, 0, &Cyclotomic::one(p.conductor()));
    f
}
