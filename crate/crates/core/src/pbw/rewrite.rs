use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::StructurePair;
use crate::group::MatrixGroup;
use crate::polyvec::monomial_string;
use crate::scalars::{Cyclotomic, HScalar};

/// A letter of a word in the deformed algebra: a coordinate x_i or a group
/// element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    X(usize),
    G(usize),
}

/// An element in normal form: a combination of x^a g with the coordinates
/// in ascending order to the left of a single group element.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NCElement {
    terms: BTreeMap<(Vec<u32>, usize), HScalar>,
}

impl NCElement {
    pub fn zero() -> NCElement {
        NCElement::default()
    }

    pub fn monomial(exps: Vec<u32>, g: usize, c: HScalar) -> NCElement {
        let mut e = NCElement::zero();
        e.add_term(exps, g, &c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Vec<u32>, usize), &HScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32], g: usize) -> Option<&HScalar> {
        self.terms.get(&(exps.to_vec(), g))
    }

    pub fn add_term(&mut self, exps: Vec<u32>, g: usize, c: &HScalar) {
        if c.is_zero() {
            return;
        }
        let key = (exps, g);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v = &*v + c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &NCElement, s: &HScalar) {
        for ((e, g), c) in &other.terms {
            self.add_term(e.clone(), *g, &(c * s));
        }
    }

    pub fn add(&self, other: &NCElement) -> NCElement {
        let mut out = self.clone();
        for ((e, g), c) in &other.terms {
            out.add_term(e.clone(), *g, c);
        }
        out
    }

    pub fn sub(&self, other: &NCElement) -> NCElement {
        let mut out = self.clone();
        for ((e, g), c) in &other.terms {
            out.add_term(e.clone(), *g, &-c);
        }
        out
    }

    /// Specialization h = 0.
    pub fn at_hbar_zero(&self) -> NCElement {
        let mut out = NCElement::zero();
        for ((e, g), c) in &self.terms {
            if let Some(v) = c.at_zero() {
                out.add_term(e.clone(), *g, &HScalar::constant(v.clone()));
            }
        }
        out
    }
}

impl fmt::Display for NCElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((e, g), c)| format!("({}) * {} * [{}]", c, monomial_string(e), g))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for NCElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A critical word whose two reductions disagree.
#[derive(Clone, Debug)]
pub struct CriticalFailure {
    pub word: Vec<Letter>,
    pub difference: NCElement,
}

type Key = (usize, Vec<u32>, usize);

/// Reduction to normal form for the algebra with relations
/// x_i x_j = x_j x_i + C_ij (i > j) and g x_i = (g.x_i) g.
pub struct RewriteSystem<'a> {
    group: &'a MatrixGroup,
    dim: usize,
    m: u32,
    /// `comm[i][j]` for i > j.
    comm: Vec<Vec<NCElement>>,
    /// `act[g][k]` is the linear form g.x_k.
    act: Vec<Vec<Vec<Cyclotomic>>>,
    left_memo: RefCell<HashMap<Key, NCElement>>,
    group_memo: RefCell<HashMap<Key, NCElement>>,
}

impl<'a> RewriteSystem<'a> {
    pub fn new(group: &'a MatrixGroup, pair: &StructurePair) -> RewriteSystem<'a> {
        let n = pair.dim();
        let m = pair.conductor();
        let (wp, wb) = pair.weights;
        let mut comm = vec![vec![NCElement::zero(); n]; n];
        for (field, w) in [(&pair.pi, wp), (&pair.b, wb)] {
            for (k, c) in field.terms() {
                let idx = crate::polyvec::wedge::indices(k.wedge);
                let (lo, hi) = (idx[0], idx[1]);
                // c x^a e_lo ^ e_hi evaluated on (x_hi, x_lo) is -c x^a
                let coef = HScalar::monomial(-c, w as usize);
                comm[hi][lo].add_term(k.exps.clone(), k.label, &coef);
            }
        }
        let act = (0..group.order())
            .map(|g| {
                let ginv = group.matrix(group.inv(g));
                (0..n).map(|k| ginv.row(k).to_vec()).collect()
            })
            .collect();
        RewriteSystem {
            group,
            dim: n,
            m,
            comm,
            act,
            left_memo: RefCell::new(HashMap::new()),
            group_memo: RefCell::new(HashMap::new()),
        }
    }

    fn one(&self) -> HScalar {
        HScalar::constant(Cyclotomic::one(self.m))
    }

    /// x_i * (x^a g).
    fn left_x(&self, i: usize, exps: &[u32], g: usize) -> NCElement {
        let j = exps.iter().position(|&e| e > 0);
        let j = match j {
            Some(j) if j < i => j,
            _ => {
                let mut e = exps.to_vec();
                e[i] += 1;
                return NCElement::monomial(e, g, self.one());
            }
        };
        let key = (i, exps.to_vec(), g);
        if let Some(v) = self.left_memo.borrow().get(&key) {
            return v.clone();
        }
        let mut rest = exps.to_vec();
        rest[j] -= 1;
        // x_i x_j r g = x_j (x_i r g) + C_ij r g
        let inner = self.left_x(i, &rest, g);
        let mut out = self.left_x_elem(j, &inner);
        let tail = NCElement::monomial(rest, g, self.one());
        out = out.add(&self.multiply(&self.comm[i][j], &tail));
        self.left_memo.borrow_mut().insert(key, out.clone());
        out
    }

    fn left_x_elem(&self, i: usize, e: &NCElement) -> NCElement {
        let mut out = NCElement::zero();
        for ((ex, g), c) in e.terms() {
            out.add_scaled(&self.left_x(i, ex, *g), c);
        }
        out
    }

    /// Left multiplication by the linear form sum_v l_v x_v.
    fn left_form(&self, form: &[Cyclotomic], e: &NCElement) -> NCElement {
        let mut out = NCElement::zero();
        for (v, l) in form.iter().enumerate() {
            if !l.is_zero() {
                out.add_scaled(&self.left_x_elem(v, e), &HScalar::constant(l.clone()));
            }
        }
        out
    }

    /// d * (x^a g) = (d.x)^a d g.
    fn left_group(&self, d: usize, exps: &[u32], g: usize) -> NCElement {
        let key = (d, exps.to_vec(), g);
        if let Some(v) = self.group_memo.borrow().get(&key) {
            return v.clone();
        }
        let mut out = NCElement::monomial(vec![0; self.dim], self.group.mul(d, g), self.one());
        for (k, &e) in exps.iter().enumerate().rev() {
            for _ in 0..e {
                out = self.left_form(&self.act[d][k], &out);
            }
        }
        self.group_memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// Product of two normal forms.
    pub fn multiply(&self, a: &NCElement, b: &NCElement) -> NCElement {
        let mut out = NCElement::zero();
        for ((ea, ga), ca) in a.terms() {
            let mut acc = NCElement::zero();
            for ((eb, gb), cb) in b.terms() {
                acc.add_scaled(&self.left_group(*ga, eb, *gb), cb);
            }
            for (k, &e) in ea.iter().enumerate().rev() {
                for _ in 0..e {
                    acc = self.left_x_elem(k, &acc);
                }
            }
            out.add_scaled(&acc, ca);
        }
        out
    }

    pub fn letter(&self, l: Letter) -> NCElement {
        match l {
            Letter::X(i) => {
                let mut e = vec![0; self.dim];
                e[i] = 1;
                NCElement::monomial(e, self.group.identity(), self.one())
            }
            Letter::G(g) => NCElement::monomial(vec![0; self.dim], g, self.one()),
        }
    }

    /// Normal form of a word, reducing from the right.
    pub fn normal_form(&self, word: &[Letter]) -> NCElement {
        let mut acc = NCElement::monomial(vec![0; self.dim], self.group.identity(), self.one());
        for &l in word.iter().rev() {
            acc = match l {
                Letter::X(i) => self.left_x_elem(i, &acc),
                Letter::G(d) => {
                    let mut out = NCElement::zero();
                    for ((e, g), c) in acc.terms() {
                        out.add_scaled(&self.left_group(d, e, *g), c);
                    }
                    out
                }
            };
        }
        acc
    }

    /// Reduces every critical word both ways and reports the disagreements.
    pub fn overlap_confluence(&self) -> Vec<CriticalFailure> {
        let n = self.dim;
        let mut out = Vec::new();
        let mut record = |word: Vec<Letter>, a: NCElement, b: NCElement| {
            let d = a.sub(&b);
            if !d.is_zero() {
                out.push(CriticalFailure { word, difference: d });
            }
        };
        let nf = |w: &[Letter]| self.normal_form(w);
        for i in 0..n {
            for j in 0..i {
                for k in 0..j {
                    // (x_i x_j) x_k versus x_i (x_j x_k)
                    let a = nf(&[Letter::X(j), Letter::X(i), Letter::X(k)])
                        .add(&self.multiply(&self.comm[i][j], &self.letter(Letter::X(k))));
                    let b = nf(&[Letter::X(i), Letter::X(k), Letter::X(j)])
                        .add(&self.multiply(&self.letter(Letter::X(i)), &self.comm[j][k]));
                    record(vec![Letter::X(i), Letter::X(j), Letter::X(k)], a, b);
                }
            }
        }
        for g in 0..self.group.order() {
            for i in 0..n {
                for j in 0..i {
                    // (g x_i) x_j versus g (x_i x_j)
                    let gx = self.left_group(g, &unit(n, i), self.group.identity());
                    let a = self.multiply(&gx, &self.letter(Letter::X(j)));
                    let mut ij = unit(n, i);
                    ij[j] += 1;
                    let b = self
                        .left_group(g, &ij, self.group.identity())
                        .add(&self.multiply(&self.letter(Letter::G(g)), &self.comm[i][j]));
                    record(vec![Letter::G(g), Letter::X(i), Letter::X(j)], a, b);
                }
            }
        }
        for g in 0..self.group.order() {
            for h in 0..self.group.order() {
                for i in 0..n {
                    let a = self.left_group(self.group.mul(g, h), &unit(n, i), self.group.identity());
                    let hx = self.left_group(h, &unit(n, i), self.group.identity());
                    let b = self.multiply(&self.letter(Letter::G(g)), &hx);
                    record(vec![Letter::G(g), Letter::G(h), Letter::X(i)], a, b);
                }
            }
        }
        out
    }
}

fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}
