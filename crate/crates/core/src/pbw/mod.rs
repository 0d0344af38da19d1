//! PBW deformations of S(V*) x G: the Braverman-Gaitsgory style conditions on
//! a pair (pi, b), solving for b, and a rewriting system whose overlap
//! confluence is the direct PBW test.

mod rewrite;

use std::collections::BTreeMap;

use thiserror::Error;

pub use rewrite::{CriticalFailure, Letter, NCElement, RewriteSystem};

use crate::group::MatrixGroup;
use crate::linalg::Matrix;
use crate::polyvec::{gen_bracket, wedge, PolyVecError, PolyVectorField};
use crate::scalars::Cyclotomic;

#[derive(Debug, Error, Clone)]
pub enum PbwError {
    #[error("the linear part must consist of bivectors with linear coefficients")]
    BadLinearPart,
    #[error("the constant part must consist of bivectors with constant coefficients")]
    BadConstantPart,
    #[error("polynomial degree {0} does not fit a PBW pair")]
    BadDegree(u32),
    #[error("dimension mismatch")]
    Dimension,
    #[error("the structure is not invariant under the group")]
    NotInvariant,
    #[error("no constant correction exists at label {label}; obstruction:\n{residue}")]
    Infeasible { label: usize, residue: PolyVectorField },
    #[error(transparent)]
    PolyVec(#[from] PolyVecError),
}

/// A linear part pi and constant part b, with the powers of h multiplying
/// each in the deformed relations
/// x y - y x = sum_g (h^wp pi_g(x, y) + h^wb b_g(x, y)) g.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructurePair {
    pub pi: PolyVectorField,
    pub b: PolyVectorField,
    pub weights: (u32, u32),
}

impl StructurePair {
    pub fn new(pi: PolyVectorField, b: PolyVectorField, weights: (u32, u32)) -> Result<StructurePair, PbwError> {
        if pi.dim() != b.dim() {
            return Err(PbwError::Dimension);
        }
        if pi.terms().any(|(k, _)| wedge::degree(k.wedge) != 2 || k.exps.iter().sum::<u32>() != 1) {
            return Err(PbwError::BadLinearPart);
        }
        if b.terms().any(|(k, _)| wedge::degree(k.wedge) != 2 || k.exps.iter().any(|&e| e != 0)) {
            return Err(PbwError::BadConstantPart);
        }
        Ok(StructurePair { pi, b, weights })
    }

    /// Splits a bivector field into its linear and constant parts.
    pub fn from_total(total: &PolyVectorField, weights: (u32, u32)) -> Result<StructurePair, PbwError> {
        if let Some(&d) = total.poly_degrees().iter().find(|&&d| d > 1) {
            return Err(PbwError::BadDegree(d));
        }
        StructurePair::new(total.poly_degree_part(1), total.poly_degree_part(0), weights)
    }

    pub fn total(&self) -> PolyVectorField {
        self.pi.add(&self.b)
    }

    pub fn dim(&self) -> usize {
        self.pi.dim()
    }

    pub fn conductor(&self) -> u32 {
        self.pi.conductor()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Condition {
    /// Each linear component is closed for the Koszul differential.
    KoszulClosed,
    /// [[pi, pi]] = d b.
    Coboundary,
    /// [[b, pi]] = 0.
    Compatibility,
}

#[derive(Clone, Debug)]
pub struct BgFailure {
    pub condition: Condition,
    pub label: usize,
    pub residue: PolyVectorField,
}

#[derive(Clone, Debug, Default)]
pub struct BgReport {
    pub failures: Vec<BgFailure>,
}

impl BgReport {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failing(&self, c: Condition) -> impl Iterator<Item = &BgFailure> {
        self.failures.iter().filter(move |f| f.condition == c)
    }
}

/// Koszul differential of every component at its own label.
pub fn koszul_total(group: &MatrixGroup, x: &PolyVectorField) -> Result<PolyVectorField, PolyVecError> {
    let mut out = PolyVectorField::zero(x.dim(), x.conductor());
    for (l, c) in x.components() {
        out.add_assign(&c.koszul(group, l)?);
    }
    Ok(out)
}

fn push_components(out: &mut Vec<BgFailure>, c: Condition, x: &PolyVectorField) {
    for (label, residue) in x.components() {
        out.push(BgFailure {
            condition: c,
            label,
            residue,
        });
    }
}

/// Checks the three conditions for the pair. When 2 wp = wb the linear and
/// constant contributions to the quadratic condition sit at the same power of
/// h and must cancel; otherwise each must vanish on its own.
pub fn check_bg(group: &MatrixGroup, pair: &StructurePair) -> Result<BgReport, PbwError> {
    if !pair.pi.is_invariant(group) || !pair.b.is_invariant(group) {
        return Err(PbwError::NotInvariant);
    }
    let mut failures = Vec::new();
    for (l, c) in pair.pi.components() {
        let d = c.koszul(group, l)?;
        if !d.is_zero() {
            failures.push(BgFailure {
                condition: Condition::KoszulClosed,
                label: l,
                residue: d,
            });
        }
    }
    let br = gen_bracket(group, &pair.pi, &pair.pi)?;
    let db = koszul_total(group, &pair.b)?;
    let (wp, wb) = pair.weights;
    if 2 * wp == wb {
        push_components(&mut failures, Condition::Coboundary, &br.sub(&db));
    } else {
        push_components(&mut failures, Condition::Coboundary, &br);
        push_components(&mut failures, Condition::Coboundary, &db);
    }
    let bp = gen_bracket(group, &pair.b, &pair.pi)?;
    push_components(&mut failures, Condition::Compatibility, &bp);
    Ok(BgReport { failures })
}

/// Finds an invariant constant b with d b = [[pi, pi]] and [[b, pi]] = 0, or
/// returns the obstructing residue.
pub fn solve_b(group: &MatrixGroup, pi: &PolyVectorField) -> Result<PolyVectorField, PbwError> {
    let n = pi.dim();
    let m = pi.conductor();
    let target = gen_bracket(group, pi, pi)?;
    let pairs: Vec<u32> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (1u32 << i) | (1u32 << j)))
        .collect();
    let mut b = PolyVectorField::zero(n, m);
    for (label, t) in target.components() {
        let images: Vec<PolyVectorField> = pairs
            .iter()
            .map(|&mask| {
                let mut e = PolyVectorField::zero(n, m);
                e.add_raw(label, vec![0; n], mask, &Cyclotomic::one(m));
                e.koszul(group, label)
            })
            .collect::<Result<_, _>>()?;
        let mut keys: BTreeMap<_, usize> = BTreeMap::new();
        for x in images.iter().chain(std::iter::once(&t)) {
            for (k, _) in x.terms() {
                let len = keys.len();
                keys.entry(k.clone()).or_insert(len);
            }
        }
        let mut a = Matrix::zeros(keys.len(), pairs.len(), m);
        for (j, x) in images.iter().enumerate() {
            for (k, c) in x.terms() {
                a[(keys[k], j)] = c.clone();
            }
        }
        let mut rhs = vec![Cyclotomic::zero(m); keys.len()];
        for (k, c) in t.terms() {
            rhs[keys[k]] = c.clone();
        }
        match a.solve(&rhs) {
            Some(x) => {
                for (j, c) in x.iter().enumerate() {
                    b.add_raw(label, vec![0; n], pairs[j], c);
                }
            }
            None => {
                return Err(PbwError::Infeasible {
                    label,
                    residue: t.clone(),
                })
            }
        }
    }
    let b = b.average(group);
    let check = koszul_total(group, &b)?.sub(&target);
    if let Some((label, residue)) = check.components().into_iter().next() {
        return Err(PbwError::Infeasible { label, residue });
    }
    let bp = gen_bracket(group, &b, pi)?;
    if let Some((label, residue)) = bp.components().into_iter().next() {
        return Err(PbwError::Infeasible { label, residue });
    }
    Ok(b)
}

/// Dimension of the degree <= d part of S(V*) x G as a vector space, which is
/// what a PBW deformation must reproduce.
pub fn graded_dimension(dim: usize, order: usize, d: usize) -> usize {
    let mut total = 1usize;
    let mut c = 1usize; // C(dim + k - 1, k)
    for k in 1..=d {
        c = c * (dim + k - 1) / k;
        total += c;
    }
    total * order
}
