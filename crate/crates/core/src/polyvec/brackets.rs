use std::collections::BTreeMap;

use super::{wedge, Poly, PolyVecError, PolyVectorField};
use crate::group::MatrixGroup;
use crate::scalars::Cyclotomic;

/// Bivector component at one label, as a map (i, j) with i < j to the
/// coefficient polynomial of e_i ^ e_j.
fn bivector_polys(x: &PolyVectorField, label: usize) -> Result<Vec<(usize, usize, Poly)>, PolyVecError> {
    let mut out = Vec::new();
    for ((l, mask), p) in x.polys() {
        if l != label {
            continue;
        }
        if wedge::degree(mask) != 2 {
            return Err(PolyVecError::NotBivector);
        }
        let idx = wedge::indices(mask);
        out.push((idx[0], idx[1], p));
    }
    Ok(out)
}

/// Evaluates a bivector on two linear forms, giving a polynomial.
fn eval_bivector(parts: &[(usize, usize, Poly)], u: &[Cyclotomic], w: &[Cyclotomic], n: usize, m: u32) -> Poly {
    let mut out = Poly::zero(n, m);
    for (i, j, p) in parts {
        let s = &(&u[*i] * &w[*j]) - &(&u[*j] * &w[*i]);
        out.add_scaled(p, &s);
    }
    out
}

/// The generalized bracket of two group-labelled bivectors,
/// [[P, Q]]_(ab)(x, y, z) = sum_cyclic P_a(Q_b(x, y), (z + b.z)/2),
/// placed at label ab. The inner argument must have polynomial degree at
/// most one (constant terms have no derivative and drop out).
pub fn gen_bracket(
    group: &MatrixGroup,
    outer: &PolyVectorField,
    inner: &PolyVectorField,
) -> Result<PolyVectorField, PolyVecError> {
    let n = outer.dim();
    let m = outer.conductor();
    if inner.poly_degrees().iter().any(|&d| d > 1) {
        return Err(PolyVecError::NotLinear);
    }
    let half = Cyclotomic::from_ratio(m, 1, 2);
    let mut out = PolyVectorField::zero(n, m);
    let inner_lin = inner.poly_degree_part(1);
    for a in outer.labels() {
        let pa = bivector_polys(outer, a)?;
        for b in inner_lin.labels() {
            let pb = bivector_polys(&inner_lin, b)?;
            // Q_b(x_i, x_j) as a linear form, i < j
            let mut q: BTreeMap<(usize, usize), Vec<Cyclotomic>> = BTreeMap::new();
            for (i, j, p) in &pb {
                let form = q
                    .entry((*i, *j))
                    .or_insert_with(|| vec![Cyclotomic::zero(m); n]);
                for (e, c) in p.terms() {
                    let v = e.iter().position(|&x| x == 1).unwrap();
                    form[v] += c;
                }
            }
            let qf = |i: usize, j: usize| -> Vec<Cyclotomic> {
                if i < j {
                    q.get(&(i, j)).cloned().unwrap_or_else(|| vec![Cyclotomic::zero(m); n])
                } else {
                    q.get(&(j, i))
                        .map(|f| f.iter().map(|x| -x).collect())
                        .unwrap_or_else(|| vec![Cyclotomic::zero(m); n])
                }
            };
            let binv = group.matrix(group.inv(b));
            let twisted: Vec<Vec<Cyclotomic>> = (0..n)
                .map(|c| {
                    (0..n)
                        .map(|j| {
                            let mut v = binv[(c, j)].clone();
                            if c == j {
                                v += &Cyclotomic::one(m);
                            }
                            &v * &half
                        })
                        .collect()
                })
                .collect();
            let label = group.mul(a, b);
            for i in 0..n {
                for j in i + 1..n {
                    for k in j + 1..n {
                        let mut t = Poly::zero(n, m);
                        for (x, y, z) in [(i, j, k), (j, k, i), (k, i, j)] {
                            let u = qf(x, y);
                            if u.iter().all(|c| c.is_zero()) {
                                continue;
                            }
                            t.add_scaled(&eval_bivector(&pa, &u, &twisted[z], n, m), &Cyclotomic::one(m));
                        }
                        out.add_poly(label, &t, (1 << i) | (1 << j) | (1 << k), &Cyclotomic::one(m));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Schouten-Nijenhuis bracket, extended to labels by multiplying them. The
/// convention is [X, f] = X(f) and [P, Q] = -(-1)^((p-1)(q-1)) [Q, P].
pub fn schouten(group: &MatrixGroup, x: &PolyVectorField, y: &PolyVectorField) -> PolyVectorField {
    let n = x.dim();
    let m = x.conductor();
    let mut out = PolyVectorField::zero(n, m);
    for (kx, cx) in x.terms() {
        for (ky, cy) in y.terms() {
            let label = group.mul(kx.label, ky.label);
            let c = cx * cy;
            for i in 0..n {
                // (P d/dxi_i from the right) * d/dx_i Q
                if ky.exps[i] > 0 {
                    if let Some((s1, rest)) = wedge::right_remove(kx.wedge, i) {
                        if let Some((s2, mask)) = wedge::mul(rest, ky.wedge) {
                            let mut e: Vec<u32> = kx.exps.iter().zip(&ky.exps).map(|(a, b)| a + b).collect();
                            e[i] -= 1;
                            let mut v = &c * &Cyclotomic::from_i64(m, ky.exps[i] as i64);
                            if s1 ^ s2 {
                                v = -v;
                            }
                            out.add_raw(label, e, mask, &v);
                        }
                    }
                }
                // - (d/dx_i P) * (d/dxi_i Q from the left)
                if kx.exps[i] > 0 {
                    if let Some((s1, rest)) = wedge::left_remove(ky.wedge, i) {
                        if let Some((s2, mask)) = wedge::mul(kx.wedge, rest) {
                            let mut e: Vec<u32> = kx.exps.iter().zip(&ky.exps).map(|(a, b)| a + b).collect();
                            e[i] -= 1;
                            let mut v = &c * &Cyclotomic::from_i64(m, -(kx.exps[i] as i64));
                            if s1 ^ s2 {
                                v = -v;
                            }
                            out.add_raw(label, e, mask, &v);
                        }
                    }
                }
            }
        }
    }
    out
}

/// The Jacobiator of a bivector, [pi, pi]_Schouten.
pub fn jacobi_residue(group: &MatrixGroup, pi: &PolyVectorField) -> PolyVectorField {
    schouten(group, pi, pi)
}

#[derive(Clone, Debug)]
pub struct PoissonReport {
    /// Projected residue of [[Pi, Pi]] per label; empty when Poisson.
    pub residues: BTreeMap<usize, PolyVectorField>,
}

impl PoissonReport {
    pub fn is_poisson(&self) -> bool {
        self.residues.is_empty()
    }
}

/// Checks pr_g([[Pi, Pi]]_g) = 0 for every label g. Pi may mix polynomial
/// degrees zero and one.
pub fn is_poisson(group: &MatrixGroup, pi: &PolyVectorField) -> Result<PoissonReport, PolyVecError> {
    if let Some(&d) = pi.poly_degrees().iter().find(|&&d| d > 1) {
        return Err(PolyVecError::PolynomialDegree(d));
    }
    let br = gen_bracket(group, pi, pi)?;
    let residues = br
        .components()
        .into_iter()
        .map(|(l, c)| (l, c.project_at(group, l)))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    Ok(PoissonReport { residues })
}

/// The Poisson differential d_Pi X = [Pi, X] on group-labelled cochains:
/// (d X)_g = sum over a b = g with codim g = codim a + codim b of
/// pr_g [Pi_a, X_b].
pub fn poisson_differential(
    group: &MatrixGroup,
    pi: &PolyVectorField,
    x: &PolyVectorField,
) -> Result<PolyVectorField, PolyVecError> {
    let mut out = PolyVectorField::zero(x.dim(), x.conductor());
    let pcs = pi.components();
    let xcs = x.components();
    for xb in xcs.values() {
        let deg = xb
            .terms()
            .map(|(k, _)| wedge::degree(k.wedge))
            .max()
            .unwrap_or(0);
        if deg > 2 {
            return Err(PolyVecError::CochainDegree(deg));
        }
    }
    let mut by_label: BTreeMap<usize, PolyVectorField> = BTreeMap::new();
    for (a, pa) in &pcs {
        for (b, xb) in &xcs {
            let g = group.mul(*a, *b);
            if group.codim(g) != group.codim(*a) + group.codim(*b) {
                continue;
            }
            let s = schouten(group, pa, xb);
            if s.is_zero() {
                continue;
            }
            if !group.classes_commute(*a, *b) {
                return Err(PolyVecError::NonCommutingClasses(*a, *b));
            }
            by_label
                .entry(g)
                .or_insert_with(|| PolyVectorField::zero(x.dim(), x.conductor()))
                .add_assign(&s);
        }
    }
    for (g, s) in by_label {
        out.add_assign(&s.project_at(group, g));
    }
    Ok(out)
}
