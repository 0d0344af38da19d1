//! Finite matrix groups generated by closure, with the fixed/normal geometry
//! of each element.

use std::collections::{BTreeMap, HashMap, VecDeque};

use thiserror::Error;

use crate::linalg::Matrix;
use crate::scalars::Cyclotomic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generator {0} is not a {1}x{1} matrix")]
    Shape(usize, usize),
    #[error("generator {0} is not invertible")]
    Singular(usize),
    #[error("group order exceeds the bound {0}")]
    OrderExceeded(usize),
}

/// Fixed space V^g = ker(g - 1) and its complement N^g, orthogonal for the
/// invariant hermitian form. `adapted` has the fixed basis in its first
/// columns and the normal basis after it.
#[derive(Clone, Debug)]
pub struct Geometry {
    pub fixed: Vec<Vec<Cyclotomic>>,
    pub normal: Vec<Vec<Cyclotomic>>,
    pub adapted: Matrix,
    pub adapted_inv: Matrix,
}

impl Geometry {
    pub fn codim(&self) -> usize {
        self.normal.len()
    }
}

#[derive(Clone, Debug)]
pub struct MatrixGroup {
    dim: usize,
    m: u32,
    elements: Vec<Matrix>,
    index: HashMap<Matrix, usize>,
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    words: Vec<Vec<usize>>,
    gen_elems: Vec<usize>,
    hermitian: Matrix,
    geometry: Vec<Geometry>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl MatrixGroup {
    /// Closes the generators under multiplication. Element 0 is the identity
    /// and every element carries a shortest word in the generators.
    pub fn generate(
        generators: &[Matrix],
        dim: usize,
        m: u32,
        bound: usize,
    ) -> Result<MatrixGroup, GroupError> {
        for (i, g) in generators.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(GroupError::Shape(i, dim));
            }
            if g.inverse().is_none() {
                return Err(GroupError::Singular(i));
            }
        }
        let gens: Vec<Matrix> = generators
            .iter()
            .map(|g| Matrix::from_rows((0..dim).map(|i| g.row(i).to_vec()).collect(), m))
            .collect();
        let id = Matrix::identity(dim, m);
        let mut elements = vec![id.clone()];
        let mut words = vec![Vec::new()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (t, s) in gens.iter().enumerate() {
                let h = &elements[i] * s;
                if index.contains_key(&h) {
                    continue;
                }
                if elements.len() >= bound {
                    return Err(GroupError::OrderExceeded(bound));
                }
                let mut w = words[i].clone();
                w.push(t);
                index.insert(h.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(h);
                words.push(w);
            }
        }
        let n = elements.len();
        let mut mul = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in 0..n {
                mul[i][j] = index[&(&elements[i] * &elements[j])];
            }
        }
        let inv: Vec<usize> = (0..n)
            .map(|i| (0..n).find(|&j| mul[i][j] == 0).unwrap())
            .collect();

        let mut hermitian = Matrix::zeros(dim, dim, m);
        for g in &elements {
            let t = &g.adjoint() * g;
            for a in 0..dim {
                for b in 0..dim {
                    hermitian[(a, b)] += &t[(a, b)];
                }
            }
        }
        let hermitian = hermitian.scale(&Cyclotomic::from_ratio(m, 1, n as i64));

        let geometry = elements
            .iter()
            .map(|g| geometry_of(g, &hermitian, dim, m))
            .collect();

        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..n).map(|h| mul[mul[h][g]][inv[h]]).collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                class_of[c] = classes.len();
            }
            classes.push(class);
        }

        let gen_elems = gens.iter().map(|s| index[s]).collect();
        Ok(MatrixGroup {
            dim,
            m,
            elements,
            index,
            mul,
            inv,
            words,
            gen_elems,
            hermitian,
            geometry,
            classes,
            class_of,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn n_generators(&self) -> usize {
        self.gen_elems.len()
    }

    /// Element index of generator `t`.
    pub fn generator(&self, t: usize) -> usize {
        self.gen_elems[t]
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.elements[g]
    }

    pub fn find(&self, a: &Matrix) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// g h g^-1.
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul[self.mul[g][h]][self.inv[g]]
    }

    /// Generator indices whose product (left to right) is the element.
    pub fn word(&self, g: usize) -> &[usize] {
        &self.words[g]
    }

    /// The element with the given generator word.
    pub fn from_word(&self, word: &[usize]) -> Option<usize> {
        let mut acc = 0;
        for &t in word {
            acc = self.mul[acc][*self.gen_elems.get(t)?];
        }
        Some(acc)
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut p = g;
        while p != 0 {
            p = self.mul[p][g];
            k += 1;
        }
        k
    }

    /// The averaged hermitian form, invariant under every element.
    pub fn hermitian_form(&self) -> &Matrix {
        &self.hermitian
    }

    pub fn geometry(&self, g: usize) -> &Geometry {
        &self.geometry[g]
    }

    /// codim V^g.
    pub fn codim(&self, g: usize) -> usize {
        self.geometry[g].codim()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> &[usize] {
        &self.classes[self.class_of[g]]
    }

    pub fn centralizer(&self, g: usize) -> Vec<usize> {
        (0..self.order())
            .filter(|&h| self.mul[g][h] == self.mul[h][g])
            .collect()
    }

    /// Number of conjugacy classes per codimension of the fixed space.
    pub fn codim_class_counts(&self) -> BTreeMap<usize, usize> {
        let mut out = BTreeMap::new();
        for c in &self.classes {
            *out.entry(self.codim(c[0])).or_insert(0) += 1;
        }
        out
    }

    /// True when every element of the class of `a` commutes with every
    /// element of the class of `b`.
    pub fn classes_commute(&self, a: usize, b: usize) -> bool {
        let cb = self.class_of(b);
        self.class_of(a)
            .iter()
            .all(|&x| cb.iter().all(|&y| self.mul[x][y] == self.mul[y][x]))
    }
}

fn geometry_of(g: &Matrix, h: &Matrix, dim: usize, m: u32) -> Geometry {
    let fixed = (g - &Matrix::identity(dim, m)).kernel();
    let normal = if fixed.is_empty() {
        (0..dim)
            .map(|i| {
                let mut v = vec![Cyclotomic::zero(m); dim];
                v[i] = Cyclotomic::one(m);
                v
            })
            .collect()
    } else {
        let f = Matrix::from_columns(&fixed, dim, m);
        (&f.adjoint() * h).kernel()
    };
    let mut cols = fixed.clone();
    cols.extend(normal.iter().cloned());
    let adapted = Matrix::from_columns(&cols, dim, m);
    let adapted_inv = adapted.inverse().expect("fixed and normal spaces are complementary");
    Geometry {
        fixed,
        normal,
        adapted,
        adapted_inv,
    }
}
