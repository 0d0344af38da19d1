//! Built-in groups and structures.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::group::{GroupError, MatrixGroup};
use crate::linalg::Matrix;
use crate::pbw::{PbwError, StructurePair};
use crate::polyvec::{jacobi_residue, PolyVectorField};
use crate::scalars::Cyclotomic;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Pbw(#[from] PbwError),
    #[error("the form is degenerate on the normal space of element {0}")]
    Degenerate(usize),
    #[error("the parameter function is not constant on conjugacy classes")]
    NotClassFunction,
    #[error("the structure is not invariant under the group")]
    NotInvariant,
    #[error("the bracket does not satisfy the Jacobi identity")]
    Jacobi,
    #[error("generator {0} does not preserve the symplectic form")]
    FormNotPreserved(usize),
}

fn check_class_function(group: &MatrixGroup, cfun: &BTreeMap<usize, Cyclotomic>) -> Result<(), CatalogError> {
    let m = group.conductor();
    for (&g, v) in cfun {
        for &h in group.class_of(g) {
            let other = cfun.get(&h).cloned().unwrap_or_else(|| Cyclotomic::zero(m));
            if other != *v {
                return Err(CatalogError::NotClassFunction);
            }
        }
    }
    Ok(())
}

/// A named group with a structure pair and optional real structure.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub group: MatrixGroup,
    pub pair: StructurePair,
    /// Coordinate permutation of the real structure, if any.
    pub swap: Option<Vec<usize>>,
    pub params: BTreeMap<String, String>,
}

fn c(m: u32, v: i64) -> Cyclotomic {
    Cyclotomic::from_i64(m, v)
}

fn diag(entries: &[Cyclotomic], m: u32) -> Matrix {
    let n = entries.len();
    let mut a = Matrix::zeros(n, n, m);
    for (i, e) in entries.iter().enumerate() {
        a[(i, i)] = e.lift(m);
    }
    a
}

fn unit_exps(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// The dihedral-type group of order 2(2n+1) acting on C^2, written on the
/// real coordinates (z1, z2, zb1, zb2) so complex conjugation is a
/// coordinate swap, together with its linear structures and constant
/// corrections.
#[derive(Clone, Debug)]
pub struct GammaN {
    pub n: u32,
    pub group: MatrixGroup,
    /// `alpha[j]` is diag(r^j, r^-j) with r a primitive (2n+1)-th root.
    pub alpha: Vec<usize>,
    /// `beta[j]` is the anti-diagonal element with entries r^-j, r^j.
    pub beta: Vec<usize>,
    /// `pi_parts[j]` is the linear bivector at `beta[j]`.
    pub pi_parts: Vec<PolyVectorField>,
    /// `b_parts[j]` is the constant bivector at `alpha[j]`.
    pub b_parts: Vec<PolyVectorField>,
    /// Identity-label bivector, only for n = 1.
    pub pi_identity: Option<PolyVectorField>,
}

impl GammaN {
    pub fn new(n: u32, c0: &Cyclotomic, a: Option<&Cyclotomic>) -> Result<GammaN, CatalogError> {
        if n == 0 {
            return Err(CatalogError::Parameter("n must be at least 1".into()));
        }
        let odd = 2 * n + 1;
        let mut m = num_integer::lcm(odd, c0.conductor());
        if let Some(a) = a {
            if n != 1 {
                return Err(CatalogError::Parameter("the identity part exists only for n = 1".into()));
            }
            m = num_integer::lcm(m, a.conductor());
        }
        let step = (m / odd) as i64;
        let rho = |k: i64| Cyclotomic::root_of_unity(m, k * step);
        let block = |g: [[Cyclotomic; 2]; 2]| -> Matrix {
            let mut a = Matrix::zeros(4, 4, m);
            for i in 0..2 {
                for j in 0..2 {
                    a[(i, j)] = g[i][j].clone();
                    a[(i + 2, j + 2)] = g[i][j].conj();
                }
            }
            a
        };
        let alpha_m = |k: i64| block([[rho(k), c(m, 0)], [c(m, 0), rho(-k)]]);
        let beta_m = |k: i64| block([[c(m, 0), rho(-k)], [rho(k), c(m, 0)]]);
        let group = MatrixGroup::generate(&[alpha_m(1), beta_m(0)], 4, m, 4 * odd as usize)?;
        let alpha: Vec<usize> = (0..odd as i64).map(|j| group.find(&alpha_m(j)).unwrap()).collect();
        let beta: Vec<usize> = (0..odd as i64).map(|j| group.find(&beta_m(j)).unwrap()).collect();

        let c0 = c0.lift(m);
        let c0b = c0.conj();
        let norm = &c0 * &c0b;
        let mut pi_parts = vec![PolyVectorField::zero(4, m); odd as usize];
        let mut b_parts = vec![PolyVectorField::zero(4, m); odd as usize];
        for k in 0..odd as i64 {
            let j = (2 * k).rem_euclid(odd as i64) as usize;
            // coefficient c0 (r^k z1 + r^-k z2) - conj(c0) (r^-k zb1 + r^k zb2)
            let coeffs = [
                &c0 * &rho(k),
                &c0 * &rho(-k),
                -&(&c0b * &rho(-k)),
                -&(&c0b * &rho(k)),
            ];
            let wedges: [(usize, usize, Cyclotomic); 4] = [
                (0, 2, c(m, 1)),
                (0, 3, -&rho(-2 * k)),
                (1, 2, -&rho(2 * k)),
                (1, 3, c(m, 1)),
            ];
            let mut p = PolyVectorField::zero(4, m);
            for (v, cv) in coeffs.iter().enumerate() {
                for (i, jj, w) in &wedges {
                    p.add_term(beta[j], unit_exps(4, v), &[*i, *jj], &(cv * w));
                }
            }
            pi_parts[j] = p;

            let scale = &c(m, odd as i64) * &(&rho(k) - &rho(-k));
            let mut b = PolyVectorField::zero(4, m);
            for (i, jj, w) in [
                (1usize, 3usize, -&norm),
                (0, 2, norm.clone()),
                (0, 1, &c0b * &c0b),
                (2, 3, -&(&c0 * &c0)),
            ] {
                b.add_term(alpha[j], vec![0; 4], &[i, jj], &(&scale * &w));
            }
            b_parts[j] = b;
        }

        let pi_identity = a.map(|a| {
            let a = a.lift(m);
            let ab = a.conj();
            let mut p = PolyVectorField::zero(4, m);
            p.add_term(0, unit_exps(4, 0), &[2, 1], &a);
            p.add_term(0, unit_exps(4, 1), &[0, 3], &-&a);
            p.add_term(0, unit_exps(4, 2), &[0, 3], &ab);
            p.add_term(0, unit_exps(4, 3), &[2, 1], &-&ab);
            p
        });

        Ok(GammaN {
            n,
            group,
            alpha,
            beta,
            pi_parts,
            b_parts,
            pi_identity,
        })
    }

    pub fn pi(&self) -> PolyVectorField {
        let mut p = PolyVectorField::zero(4, self.group.conductor());
        for x in &self.pi_parts {
            p.add_assign(x);
        }
        if let Some(x) = &self.pi_identity {
            p.add_assign(x);
        }
        p
    }

    pub fn b(&self) -> PolyVectorField {
        let mut p = PolyVectorField::zero(4, self.group.conductor());
        for x in &self.b_parts {
            p.add_assign(x);
        }
        p
    }

    /// Complex conjugation swaps z_i and zb_i.
    pub fn swap() -> Vec<usize> {
        vec![2, 3, 0, 1]
    }

    pub fn entry(&self, c0: &Cyclotomic, zero_b: bool) -> Result<CatalogEntry, CatalogError> {
        let b = if zero_b {
            PolyVectorField::zero(4, self.group.conductor())
        } else {
            self.b()
        };
        let mut params = BTreeMap::from([
            ("n".to_string(), self.n.to_string()),
            ("c0".to_string(), c0.to_string()),
        ]);
        if self.pi_identity.is_some() {
            params.insert("identity_part".into(), "true".into());
        }
        Ok(CatalogEntry {
            name: "gamma_n".into(),
            group: self.group.clone(),
            pair: StructurePair::new(self.pi(), b, (1, 2))?,
            swap: Some(GammaN::swap()),
            params,
        })
    }
}

/// Z/2 acting by -1 on the plane with the constant structure c * pi at the
/// non-trivial element, pi = -e1 ^ e2.
pub fn z2_constant(cc: &Cyclotomic) -> Result<CatalogEntry, CatalogError> {
    let m = cc.conductor();
    let group = MatrixGroup::generate(&[diag(&[c(m, -1), c(m, -1)], m)], 2, m, 2)?;
    let mut b = PolyVectorField::zero(2, m);
    b.add_term(1, vec![0, 0], &[0, 1], &-cc);
    Ok(CatalogEntry {
        name: "z2_constant".into(),
        group,
        pair: StructurePair::new(PolyVectorField::zero(2, m), b, (1, 1))?,
        swap: None,
        params: BTreeMap::from([("c".to_string(), cc.to_string())]),
    })
}

/// Z/2 acting on K^3 by diag(-1, -1, 1).
pub fn z2_r3_group(m: u32) -> MatrixGroup {
    MatrixGroup::generate(&[diag(&[c(m, -1), c(m, -1), c(m, 1)], m)], 3, m, 2).unwrap()
}

/// The identity-label Lie-Poisson structures on K^3 used with `z2_r3_group`:
/// variant 1 is z e1^e2, variant 2 adds x e1^e3 - y e2^e3.
pub fn r3_lie_poisson(variant: u32, m: u32) -> Result<PolyVectorField, CatalogError> {
    let mut p = PolyVectorField::zero(3, m);
    p.add_term(0, vec![0, 0, 1], &[0, 1], &c(m, 1));
    match variant {
        1 => {}
        2 => {
            p.add_term(0, vec![1, 0, 0], &[0, 2], &c(m, 1));
            p.add_term(0, vec![0, 1, 0], &[1, 2], &c(m, -1));
        }
        _ => return Err(CatalogError::Parameter("variant must be 1 or 2".into())),
    }
    Ok(p)
}

/// pi at the identity plus c(g) pr_g(pi) at every element g with a normal
/// space of dimension two. pi must be an invariant linear bivector at the
/// identity satisfying Jacobi; `cfun` must be a class function, and
/// elements absent from it get zero.
pub fn lie_poisson_family(
    group: &MatrixGroup,
    pi: &PolyVectorField,
    cfun: &BTreeMap<usize, Cyclotomic>,
) -> Result<PolyVectorField, CatalogError> {
    if !pi.is_invariant(group) || pi.labels().iter().any(|&l| l != group.identity()) {
        return Err(CatalogError::NotInvariant);
    }
    if !jacobi_residue(group, pi).is_zero() {
        return Err(CatalogError::Jacobi);
    }
    check_class_function(group, cfun)?;
    let mut out = pi.clone();
    for (&g, cv) in cfun {
        if group.codim(g) == 2 && !cv.is_zero() {
            out.add_scaled(&pi.relabel(|_| g).project_at(group, g), cv);
        }
    }
    Ok(out)
}

/// Every non-trivial element weighted by one.
pub fn unit_class_function(group: &MatrixGroup) -> BTreeMap<usize, Cyclotomic> {
    (0..group.order())
        .filter(|&g| g != group.identity())
        .map(|g| (g, Cyclotomic::one(group.conductor())))
        .collect()
}

pub fn z2_r3_linear(variant: u32) -> Result<CatalogEntry, CatalogError> {
    let m = 1;
    let group = z2_r3_group(m);
    let pi = lie_poisson_family(&group, &r3_lie_poisson(variant, m)?, &unit_class_function(&group))?;
    Ok(CatalogEntry {
        name: "z2_r3_linear".into(),
        group,
        pair: StructurePair::new(pi, PolyVectorField::zero(3, m), (1, 2))?,
        swap: None,
        params: BTreeMap::from([("variant".to_string(), variant.to_string())]),
    })
}

/// The bivector dual to the symplectic form with Gram matrix `w`
/// (w_ij = omega(e_i, e_j)) restricted to the span of `basis`.
pub fn dual_bivector(w: &Matrix, basis: &[Vec<Cyclotomic>], label: usize) -> Option<PolyVectorField> {
    let n = w.rows();
    let m = w.conductor();
    let k = basis.len();
    let mut wn = Matrix::zeros(k, k, m);
    for a in 0..k {
        for b in 0..k {
            let wb = w.mul_vec(&basis[b]);
            let mut s = Cyclotomic::zero(m);
            for i in 0..n {
                s += &(&basis[a][i] * &wb[i]);
            }
            wn[(a, b)] = s;
        }
    }
    let inv = wn.inverse()?;
    let mut out = PolyVectorField::zero(n, m);
    for a in 0..k {
        for b in a + 1..k {
            let coef = &inv[(a, b)];
            if coef.is_zero() {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let v = &(&basis[a][i] * &basis[b][j]) * coef;
                    out.add_term(label, vec![0; n], &[i, j], &v);
                }
            }
        }
    }
    Some(out)
}

/// Constant structure t * omega^-1 at the identity plus c(g) times the dual
/// of omega on N^g at every element g with codim 2. `cfun` must be a class
/// function; elements absent from it get zero.
pub fn symplectic_reflection(
    group: &MatrixGroup,
    w: &Matrix,
    t: &Cyclotomic,
    cfun: &BTreeMap<usize, Cyclotomic>,
) -> Result<PolyVectorField, CatalogError> {
    let n = group.dim();
    let m = group.conductor();
    for t in 0..group.n_generators() {
        let g = group.matrix(group.generator(t));
        if &(&g.transpose() * w) * g != *w {
            return Err(CatalogError::FormNotPreserved(t));
        }
    }
    check_class_function(group, cfun)?;
    let mut out = PolyVectorField::zero(n, m);
    if !t.is_zero() {
        let std: Vec<Vec<Cyclotomic>> = (0..n)
            .map(|i| (0..n).map(|j| c(m, (i == j) as i64)).collect())
            .collect();
        let p = dual_bivector(w, &std, 0).ok_or(CatalogError::Degenerate(0))?;
        out.add_scaled(&p, t);
    }
    for g in 0..group.order() {
        if group.codim(g) != 2 {
            continue;
        }
        let Some(cv) = cfun.get(&g) else { continue };
        if cv.is_zero() {
            continue;
        }
        let p = dual_bivector(w, &group.geometry(g).normal, g).ok_or(CatalogError::Degenerate(g))?;
        out.add_scaled(&p, cv);
    }
    Ok(out)
}

fn cyclic_group(n: u32) -> Result<(MatrixGroup, u32), CatalogError> {
    if n < 2 {
        return Err(CatalogError::Parameter("n must be at least 2".into()));
    }
    let m = crate::scalars::qmoyal_conductor(n);
    let q = Cyclotomic::root_of_unity(m, (m / n) as i64);
    let g = diag(&[q.clone(), q.inv().unwrap()], m);
    Ok((MatrixGroup::generate(&[g], 2, m, n as usize)?, m))
}

/// Z/n acting on the complex coordinates (z, zb) by (q, 1/q), with the
/// constant structure pi(z, zb) = -i/2 at the generator.
pub fn cyclic_qmoyal(n: u32) -> Result<CatalogEntry, CatalogError> {
    let (group, m) = cyclic_group(n)?;
    let gen = group.generator(0);
    let i = Cyclotomic::root_of_unity(m, (m / 4) as i64);
    let mut b = PolyVectorField::zero(2, m);
    b.add_term(gen, vec![0, 0], &[0, 1], &(&i * &Cyclotomic::from_ratio(m, -1, 2)));
    Ok(CatalogEntry {
        name: "cyclic_qmoyal".into(),
        group,
        pair: StructurePair::new(PolyVectorField::zero(2, m), b, (1, 1))?,
        swap: None,
        params: BTreeMap::from([("n".to_string(), n.to_string())]),
    })
}

/// Symplectic reflection structure for Z/n on the plane with omega = dz ^ dzb,
/// the same parameter `cc` at every non-trivial element and `t` at the
/// identity.
pub fn symplectic_cyclic(n: u32, t: &Cyclotomic, cc: &Cyclotomic) -> Result<CatalogEntry, CatalogError> {
    let (group, m) = cyclic_group(n)?;
    let w = Matrix::from_rows(vec![vec![c(m, 0), c(m, 1)], vec![c(m, -1), c(m, 0)]], m);
    let cfun: BTreeMap<usize, Cyclotomic> = (1..group.order()).map(|g| (g, cc.lift(m))).collect();
    let b = symplectic_reflection(&group, &w, &t.lift(m), &cfun)?;
    Ok(CatalogEntry {
        name: "symplectic_cyclic".into(),
        group,
        pair: StructurePair::new(PolyVectorField::zero(2, m), b, (1, 1))?,
        swap: None,
        params: BTreeMap::from([
            ("n".to_string(), n.to_string()),
            ("t".to_string(), t.to_string()),
            ("c".to_string(), cc.to_string()),
        ]),
    })
}

/// Names of the built-in entries.
pub const NAMES: &[&str] = &[
    "gamma_n",
    "z2_constant",
    "z2_r3_linear",
    "cyclic_qmoyal",
    "symplectic_cyclic",
];
