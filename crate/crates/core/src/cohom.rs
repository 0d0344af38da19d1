//! Truncated Poisson cohomology of a group-labelled Poisson structure.
//!
//! Cochains of degree k are the invariant elements of the sum over g of
//! S(V^g*) (x) wedge^(k - l(g)) V^g (x) top(N^g), and the differential is
//! `poisson_differential`. Everything is cut off at coefficient degree d:
//! kernels are taken on cochains of degree at most d, images come from
//! sources of degree at most d + 1 and are intersected with the window.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::group::MatrixGroup;
use crate::linalg::Matrix;
use crate::polyvec::{is_poisson, poisson_differential, PolyVecError, PolyVectorField, TermKey};
use crate::scalars::Cyclotomic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomError {
    #[error("cohomology is only computed in cochain degrees 0, 1 and 2 (got {0})")]
    Degree(usize),
    #[error("the structure is not Poisson")]
    NotPoisson,
    #[error("the structure is not invariant")]
    NotInvariant,
    #[error("the assembled differential does not square to zero")]
    NotComplex,
    #[error(transparent)]
    PolyVec(#[from] PolyVecError),
}

/// Dimensions restricted to one conjugacy class of labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassDims {
    /// Smallest element of the class.
    pub label: usize,
    pub cochains: usize,
    /// Rank of the kernel after projecting onto the class.
    pub kernel: usize,
    /// Rank of the windowed image after projecting onto the class.
    pub image: usize,
}

#[derive(Clone, Debug)]
pub struct Cohomology {
    pub degree: usize,
    pub polydeg: u32,
    pub cochains: usize,
    pub kernel: Vec<PolyVectorField>,
    pub image: Vec<PolyVectorField>,
    /// Kernel elements reduced modulo the image; a basis of the quotient.
    pub representatives: Vec<PolyVectorField>,
    pub per_class: Vec<ClassDims>,
}

impl Cohomology {
    pub fn dim(&self) -> usize {
        self.representatives.len()
    }
}

/// A basis of the invariant cochains of degree `k` with coefficients of
/// degree at most `d`, in reduced echelon form.
pub fn invariant_cochains(group: &MatrixGroup, k: usize, d: u32) -> Vec<PolyVectorField> {
    let n = group.dim();
    let m = group.conductor();
    let mut raw = Vec::new();
    for class in group.classes() {
        let g = class[0];
        let geo = group.geometry(g);
        let r = geo.fixed.len();
        let l = n - r;
        if k < l {
            continue;
        }
        let normal: u32 = ((1u32 << n) - 1) & !((1u32 << r) - 1);
        let fixed_wedges: Vec<u32> = (0u32..(1 << r))
            .filter(|w| w.count_ones() as usize == k - l)
            .collect();
        for exps in monomials(r, d) {
            let mut full = exps.clone();
            full.resize(n, 0);
            for &w in &fixed_wedges {
                let mut x = PolyVectorField::zero(n, m);
                x.add_raw(g, full.clone(), w | normal, &Cyclotomic::one(m));
                let x = x.transform(&geo.adapted, &geo.adapted_inv).average(group);
                if !x.is_zero() {
                    raw.push(x);
                }
            }
        }
    }
    echelon(&raw)
}

/// Exponent vectors in `r` variables of total degree at most `d`.
fn monomials(r: usize, d: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; r]];
    for i in 0..r {
        let mut next = Vec::new();
        for e in &out {
            let used: u32 = e.iter().sum();
            for a in 0..=d - used {
                let mut f = e.clone();
                f[i] = a;
                next.push(f);
            }
        }
        out = next;
    }
    out
}

fn degree_of(key: &TermKey) -> u32 {
    key.exps.iter().sum()
}

/// Coordinates of polyvectors against a common sorted key list.
struct Coords {
    keys: Vec<TermKey>,
    index: BTreeMap<TermKey, usize>,
    dim: usize,
    m: u32,
}

impl Coords {
    fn new<'a>(fields: impl IntoIterator<Item = &'a PolyVectorField>, dim: usize, m: u32) -> Coords {
        let set: BTreeSet<TermKey> = fields
            .into_iter()
            .flat_map(|f| f.terms().map(|(k, _)| k.clone()))
            .collect();
        let keys: Vec<TermKey> = set.into_iter().collect();
        let index = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        Coords { keys, index, dim, m }
    }

    fn vector(&self, f: &PolyVectorField) -> Vec<Cyclotomic> {
        let mut v = vec![Cyclotomic::zero(self.m); self.keys.len()];
        for (k, c) in f.terms() {
            v[self.index[k]] = c.clone();
        }
        v
    }

    fn field(&self, v: &[Cyclotomic]) -> PolyVectorField {
        let mut f = PolyVectorField::zero(self.dim, self.m);
        for (k, c) in self.keys.iter().zip(v) {
            f.add_raw(k.label, k.exps.clone(), k.wedge, c);
        }
        f
    }
}

fn combine(basis: &[PolyVectorField], coeffs: &[Cyclotomic], dim: usize, m: u32) -> PolyVectorField {
    let mut out = PolyVectorField::zero(dim, m);
    for (b, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            out.add_scaled(b, c);
        }
    }
    out
}

/// Reduced echelon basis of the span.
fn echelon(fields: &[PolyVectorField]) -> Vec<PolyVectorField> {
    let Some(first) = fields.first() else {
        return Vec::new();
    };
    let coords = Coords::new(fields, first.dim(), first.conductor());
    let rows: Vec<Vec<Cyclotomic>> = fields.iter().map(|f| coords.vector(f)).collect();
    let (r, piv) = Matrix::from_rows(rows, coords.m).rref();
    (0..piv.len()).map(|i| coords.field(r.row(i))).collect()
}

fn rank(fields: &[PolyVectorField]) -> usize {
    echelon(fields).len()
}

fn check_invariant(group: &MatrixGroup, pi: &PolyVectorField) -> Result<(), CohomError> {
    if !pi.is_invariant(group) {
        return Err(CohomError::NotInvariant);
    }
    if !is_poisson(group, pi)?.is_poisson() {
        return Err(CohomError::NotPoisson);
    }
    Ok(())
}

/// H^k of d_Pi in coefficient degree at most `d`.
pub fn h_truncated(group: &MatrixGroup, pi: &PolyVectorField, k: usize, d: u32) -> Result<Cohomology, CohomError> {
    if k > 2 {
        return Err(CohomError::Degree(k));
    }
    check_invariant(group, pi)?;
    let n = group.dim();
    let m = pi.conductor();
    let diff = |x: &PolyVectorField| poisson_differential(group, pi, x);

    let window = invariant_cochains(group, k, d);
    let images: Vec<PolyVectorField> = window.iter().map(diff).collect::<Result<_, _>>()?;
    for y in &images {
        if k < 2 && !diff(y)?.is_zero() {
            return Err(CohomError::NotComplex);
        }
    }
    let kernel = kernel_of(&window, &images, n, m);

    let mut image = Vec::new();
    if k > 0 {
        let sources = invariant_cochains(group, k - 1, d + 1);
        let outs: Vec<PolyVectorField> = sources.iter().map(diff).collect::<Result<_, _>>()?;
        for y in &outs {
            if !diff(y)?.is_zero() {
                return Err(CohomError::NotComplex);
            }
        }
        // combinations of the images with nothing above degree d
        let above: Vec<PolyVectorField> = outs
            .iter()
            .map(|y| y.filter(|key| degree_of(key) > d))
            .collect();
        let inside = kernel_of(&outs, &above, n, m);
        image = echelon(&inside);
    }

    let representatives = quotient(&kernel, &image);
    let per_class = group
        .classes()
        .iter()
        .filter_map(|class| {
            let label = *class.iter().min().unwrap();
            let on = |fs: &[PolyVectorField]| -> Vec<PolyVectorField> {
                fs.iter().map(|f| f.filter(|key| class.contains(&key.label))).collect()
            };
            let cochains = rank(&on(&window));
            (cochains > 0).then(|| ClassDims {
                label,
                cochains,
                kernel: rank(&on(&kernel)),
                image: rank(&on(&image)),
            })
        })
        .collect();

    Ok(Cohomology {
        degree: k,
        polydeg: d,
        cochains: window.len(),
        kernel,
        image,
        representatives,
        per_class,
    })
}

/// Combinations of `basis` whose images under the map given by `values`
/// vanish, as elements of the span of `basis`.
fn kernel_of(basis: &[PolyVectorField], values: &[PolyVectorField], dim: usize, m: u32) -> Vec<PolyVectorField> {
    if basis.is_empty() {
        return Vec::new();
    }
    let coords = Coords::new(values, dim, m);
    if coords.keys.is_empty() {
        return echelon(basis);
    }
    let cols: Vec<Vec<Cyclotomic>> = values.iter().map(|v| coords.vector(v)).collect();
    let a = Matrix::from_columns(&cols, coords.keys.len(), m);
    let ker: Vec<PolyVectorField> = a
        .kernel()
        .iter()
        .map(|v| combine(basis, v, dim, m))
        .collect();
    echelon(&ker)
}

/// Reduces `kernel` modulo the span of `image` and returns an echelon basis
/// of what is left.
fn quotient(kernel: &[PolyVectorField], image: &[PolyVectorField]) -> Vec<PolyVectorField> {
    let Some(first) = kernel.first() else {
        return Vec::new();
    };
    let (dim, m) = (first.dim(), first.conductor());
    let coords = Coords::new(kernel.iter().chain(image), dim, m);
    let im_rows: Vec<Vec<Cyclotomic>> = image.iter().map(|f| coords.vector(f)).collect();
    let (im, piv) = if im_rows.is_empty() {
        (Matrix::zeros(0, coords.keys.len(), m), Vec::new())
    } else {
        Matrix::from_rows(im_rows, m).rref()
    };
    let reduced: Vec<PolyVectorField> = kernel
        .iter()
        .map(|f| {
            let mut v = coords.vector(f);
            for (i, &p) in piv.iter().enumerate() {
                if v[p].is_zero() {
                    continue;
                }
                let s = v[p].clone();
                for (j, x) in im.row(i).iter().enumerate() {
                    if !x.is_zero() {
                        v[j] -= &(x * &s);
                    }
                }
            }
            coords.field(&v)
        })
        .filter(|f| !f.is_zero())
        .collect();
    echelon(&reduced)
}

/// Dimensions of H^0 at coefficient degree `d` for the full structure and
/// for its identity component alone.
pub fn compare_h0(group: &MatrixGroup, pi: &PolyVectorField, d: u32) -> Result<(usize, usize), CohomError> {
    let full = h_truncated(group, pi, 0, d)?.dim();
    let id = h_truncated(group, &pi.component(group.identity()), 0, d)?.dim();
    Ok((full, id))
}
