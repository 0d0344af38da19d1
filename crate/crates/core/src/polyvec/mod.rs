//! Group-labelled polynomial polyvector fields: finite sums of
//! c * x^a * e_I * g with x^a a monomial on V, e_I a wedge of basis vectors of
//! V and g a group element.

mod brackets;
pub mod poly;
pub mod wedge;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use thiserror::Error;

pub use brackets::{
    gen_bracket, is_poisson, jacobi_residue, poisson_differential, schouten, PoissonReport,
};
pub use poly::Poly;

use crate::group::MatrixGroup;
use crate::linalg::Matrix;
use crate::scalars::Cyclotomic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyVecError {
    #[error("expected a single label {0}, found several")]
    MixedLabels(usize),
    #[error("expected a polyvector of polynomial degree at most one in the inner slot")]
    NotLinear,
    #[error("expected bivectors")]
    NotBivector,
    #[error("polynomial degree {0} is not supported here")]
    PolynomialDegree(u32),
    #[error("cochain degree {0} is not supported (at most 2)")]
    CochainDegree(usize),
    #[error("unsupported: conjugacy classes of labels {0} and {1} do not commute")]
    NonCommutingClasses(usize, usize),
    #[error("invalid coordinate swap")]
    BadSwap,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TermKey {
    pub label: usize,
    pub exps: Vec<u32>,
    /// Bitmask of the basis vectors in the wedge, ascending order implied.
    pub wedge: u32,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyVectorField {
    dim: usize,
    m: u32,
    terms: BTreeMap<TermKey, Cyclotomic>,
}

impl PolyVectorField {
    pub fn zero(dim: usize, m: u32) -> PolyVectorField {
        PolyVectorField {
            dim,
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &TermKey) -> Option<&Cyclotomic> {
        self.terms.get(key)
    }

    /// Adds `c * x^exps * e_mask` at `label`.
    pub fn add_raw(&mut self, label: usize, exps: Vec<u32>, mask: u32, c: &Cyclotomic) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(exps.len(), self.dim);
        let key = TermKey {
            label,
            exps,
            wedge: mask,
        };
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Adds `c * x^exps * e_i1 ^ e_i2 ^ ...` at `label`; the wedge indices may
    /// come in any order.
    pub fn add_term(&mut self, label: usize, exps: Vec<u32>, wedge: &[usize], c: &Cyclotomic) {
        if let Some((neg, mask)) = wedge::from_indices(wedge) {
            let c = if neg { -c } else { c.clone() };
            self.add_raw(label, exps, mask, &c);
        }
    }

    /// Adds `poly * e_mask` at `label`.
    pub fn add_poly(&mut self, label: usize, p: &Poly, mask: u32, s: &Cyclotomic) {
        for (e, c) in p.terms() {
            self.add_raw(label, e.clone(), mask, &(c * s));
        }
    }

    pub fn add_assign(&mut self, other: &PolyVectorField) {
        for (k, c) in &other.terms {
            self.add_raw(k.label, k.exps.clone(), k.wedge, c);
        }
    }

    pub fn add_scaled(&mut self, other: &PolyVectorField, s: &Cyclotomic) {
        for (k, c) in &other.terms {
            self.add_raw(k.label, k.exps.clone(), k.wedge, &(c * s));
        }
    }

    pub fn add(&self, other: &PolyVectorField) -> PolyVectorField {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &PolyVectorField) -> PolyVectorField {
        let mut out = self.clone();
        out.add_scaled(other, &Cyclotomic::from_i64(self.m, -1));
        out
    }

    pub fn scale(&self, s: &Cyclotomic) -> PolyVectorField {
        let mut out = PolyVectorField::zero(self.dim, self.m);
        out.add_scaled(self, s);
        out
    }

    pub fn labels(&self) -> BTreeSet<usize> {
        self.terms.keys().map(|k| k.label).collect()
    }

    pub fn filter(&self, mut keep: impl FnMut(&TermKey) -> bool) -> PolyVectorField {
        PolyVectorField {
            dim: self.dim,
            m: self.m,
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn component(&self, label: usize) -> PolyVectorField {
        self.filter(|k| k.label == label)
    }

    pub fn components(&self) -> BTreeMap<usize, PolyVectorField> {
        self.labels()
            .into_iter()
            .map(|l| (l, self.component(l)))
            .collect()
    }

    /// Terms of the given polynomial degree.
    pub fn poly_degree_part(&self, d: u32) -> PolyVectorField {
        self.filter(|k| k.exps.iter().sum::<u32>() == d)
    }

    pub fn wedge_degrees(&self) -> BTreeSet<usize> {
        self.terms.keys().map(|k| wedge::degree(k.wedge)).collect()
    }

    pub fn poly_degrees(&self) -> BTreeSet<u32> {
        self.terms.keys().map(|k| k.exps.iter().sum()).collect()
    }

    /// The coefficient polynomial of every (label, wedge) pair.
    pub fn polys(&self) -> BTreeMap<(usize, u32), Poly> {
        let mut out: BTreeMap<(usize, u32), Poly> = BTreeMap::new();
        for (k, c) in &self.terms {
            out.entry((k.label, k.wedge))
                .or_insert_with(|| Poly::zero(self.dim, self.m))
                .add_term(k.exps.clone(), c);
        }
        out
    }

    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> PolyVectorField {
        let mut out = PolyVectorField::zero(self.dim, self.m);
        for (k, c) in &self.terms {
            out.add_raw(f(k.label), k.exps.clone(), k.wedge, c);
        }
        out
    }

    /// Pushforward along the linear map `t` (with inverse `t_inv`): basis
    /// vectors go to `t e_i`, coordinate functions to `x o t^-1`. Labels are
    /// left alone.
    pub fn transform(&self, t: &Matrix, t_inv: &Matrix) -> PolyVectorField {
        let n = self.dim;
        let forms: Vec<Vec<Cyclotomic>> = (0..n).map(|v| t_inv.row(v).to_vec()).collect();
        let mut wedge_cache: HashMap<u32, Vec<(u32, Cyclotomic)>> = HashMap::new();
        let mut out = PolyVectorField::zero(n, self.m);
        for ((label, mask), p) in self.polys() {
            let img = wedge_cache
                .entry(mask)
                .or_insert_with(|| wedge_image(t, mask, self.m))
                .clone();
            let q = p.substitute_linear(&forms);
            for (wm, wc) in &img {
                out.add_poly(label, &q, *wm, wc);
            }
        }
        out
    }

    /// The action of the group element `g`: transport by its matrix and
    /// conjugate the labels.
    pub fn act(&self, group: &MatrixGroup, g: usize) -> PolyVectorField {
        let moved = self.transform(group.matrix(g), group.matrix(group.inv(g)));
        moved.relabel(|l| group.conjugate(g, l))
    }

    pub fn is_invariant(&self, group: &MatrixGroup) -> bool {
        (0..group.order()).all(|g| self.act(group, g) == *self)
    }

    /// Average over the group.
    pub fn average(&self, group: &MatrixGroup) -> PolyVectorField {
        let mut out = PolyVectorField::zero(self.dim, self.m);
        for g in 0..group.order() {
            out.add_assign(&self.act(group, g));
        }
        out.scale(&Cyclotomic::from_ratio(self.m, 1, group.order() as i64))
    }

    fn single_label(&self, label: usize) -> Result<(), PolyVecError> {
        if self.terms.keys().any(|k| k.label != label) {
            return Err(PolyVecError::MixedLabels(label));
        }
        Ok(())
    }

    /// The Koszul differential at `g`:
    /// p e_I -> sum_k (x_k - g.x_k) p e_k ^ e_I. The field must be
    /// supported at `g` only.
    pub fn koszul(&self, group: &MatrixGroup, g: usize) -> Result<PolyVectorField, PolyVecError> {
        self.single_label(g)?;
        let n = self.dim;
        let ginv = group.matrix(group.inv(g));
        let mut out = PolyVectorField::zero(n, self.m);
        for k in 0..n {
            let mut form: Vec<Cyclotomic> = ginv.row(k).iter().map(|x| -x).collect();
            form[k] += &Cyclotomic::one(self.m);
            if form.iter().all(|x| x.is_zero()) {
                continue;
            }
            let lin = Poly::linear(&form, self.m);
            for ((label, mask), p) in self.polys() {
                if let Some((neg, wm)) = wedge::mul(1 << k, mask) {
                    let s = Cyclotomic::from_i64(self.m, if neg { -1 } else { 1 });
                    out.add_poly(label, &lin.mul(&p), wm, &s);
                }
            }
        }
        Ok(out)
    }

    /// Projection of the component at `g` onto S(V^g*) (x) wedge(V^g) (x)
    /// top(N^g): restrict coefficients to the fixed space and keep only
    /// wedges containing every normal direction.
    pub fn project_at(&self, group: &MatrixGroup, g: usize) -> PolyVectorField {
        let geo = group.geometry(g);
        let r = geo.fixed.len();
        let normal_mask: u32 = ((1u32 << self.dim) - 1) & !((1u32 << r) - 1);
        let adapted = self
            .component(g)
            .transform(&geo.adapted_inv, &geo.adapted);
        let kept = adapted.filter(|k| {
            k.exps[r..].iter().all(|&e| e == 0) && k.wedge & normal_mask == normal_mask
        });
        kept.transform(&geo.adapted, &geo.adapted_inv)
    }

    /// Projection of every component onto its own label.
    pub fn project(&self, group: &MatrixGroup) -> PolyVectorField {
        let mut out = PolyVectorField::zero(self.dim, self.m);
        for l in self.labels() {
            out.add_assign(&self.project_at(group, l));
        }
        out
    }

    /// Reality with respect to the antilinear involution that conjugates
    /// scalars and permutes coordinates by `swap`.
    pub fn is_real(&self, group: &MatrixGroup, swap: &[usize]) -> Result<bool, PolyVecError> {
        let n = self.dim;
        let mut seen = vec![false; n];
        if swap.len() != n || swap.iter().any(|&s| s >= n || std::mem::replace(&mut seen[s], true)) {
            return Err(PolyVecError::BadSwap);
        }
        let mut perm = Matrix::zeros(n, n, self.m);
        for (i, &s) in swap.iter().enumerate() {
            perm[(s, i)] = Cyclotomic::one(self.m);
        }
        let perm_inv = perm.transpose();
        let mut image = PolyVectorField::zero(n, self.m);
        for (k, c) in &self.terms {
            let target = &(&perm * &group.matrix(k.label).conj()) * &perm_inv;
            let Some(label) = group.find(&target) else {
                return Ok(false);
            };
            let mut exps = vec![0; n];
            for (v, &e) in k.exps.iter().enumerate() {
                exps[swap[v]] = e;
            }
            let idx: Vec<usize> = wedge::indices(k.wedge).iter().map(|&i| swap[i]).collect();
            image.add_term(label, exps, &idx, &c.conj());
        }
        Ok(image == *self)
    }
}

/// Image of e_mask under the linear map t, as (mask, coefficient) pairs.
fn wedge_image(t: &Matrix, mask: u32, m: u32) -> Vec<(u32, Cyclotomic)> {
    let mut acc: BTreeMap<u32, Cyclotomic> = BTreeMap::from([(0u32, Cyclotomic::one(m))]);
    for i in wedge::indices(mask) {
        let mut next: BTreeMap<u32, Cyclotomic> = BTreeMap::new();
        for (wm, wc) in &acc {
            for a in 0..t.rows() {
                let ta = &t[(a, i)];
                if ta.is_zero() {
                    continue;
                }
                if let Some((neg, nm)) = wedge::mul(*wm, 1 << a) {
                    let v = wc * ta;
                    let e = next.entry(nm).or_insert_with(|| Cyclotomic::zero(m));
                    if neg {
                        *e -= &v;
                    } else {
                        *e += &v;
                    }
                }
            }
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    acc.into_iter().collect()
}

impl fmt::Display for PolyVectorField {
    /// One term per line: `[label] coeff * x1^2*x3 * e1^e2`, 1-based indices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(
                f,
                "[{}] ({}) * {} * {}",
                k.label,
                c,
                monomial_string(&k.exps),
                wedge_string(k.wedge)
            )?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// `x1^2*x3`, or `1` for the empty monomial.
pub fn monomial_string(exps: &[u32]) -> String {
    let parts: Vec<String> = exps
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| {
            if e == 1 {
                format!("x{}", v + 1)
            } else {
                format!("x{}^{}", v + 1, e)
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// `e1^e2`, or `1` for the empty wedge.
pub fn wedge_string(mask: u32) -> String {
    let idx = wedge::indices(mask);
    if idx.is_empty() {
        return "1".into();
    }
    idx.iter()
        .map(|i| format!("e{}", i + 1))
        .collect::<Vec<_>>()
        .join("^")
}
