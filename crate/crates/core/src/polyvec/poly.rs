use std::collections::BTreeMap;

use crate::scalars::Cyclotomic;

/// A polynomial in `nvars` commuting variables, keyed by exponent vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    m: u32,
    terms: BTreeMap<Vec<u32>, Cyclotomic>,
}

impl Poly {
    pub fn zero(nvars: usize, m: u32) -> Poly {
        Poly {
            nvars,
            m,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Cyclotomic) -> Poly {
        Poly::monomial(vec![0; nvars], c)
    }

    pub fn monomial(exps: Vec<u32>, c: Cyclotomic) -> Poly {
        let mut p = Poly::zero(exps.len(), c.conductor());
        p.add_term(exps, &c);
        p
    }

    /// sum_k coeffs[k] x_k.
    pub fn linear(coeffs: &[Cyclotomic], m: u32) -> Poly {
        let n = coeffs.len();
        let mut p = Poly::zero(n, m);
        for (k, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[k] = 1;
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Cyclotomic)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: &Cyclotomic) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
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

    pub fn add_scaled(&mut self, other: &Poly, s: &Cyclotomic) {
        if s.is_zero() {
            return;
        }
        for (e, c) in &other.terms {
            self.add_term(e.clone(), &(c * s));
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero(self.nvars, self.m);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e: Vec<u32> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(e, &(x * y));
            }
        }
        out
    }

    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars, self.m);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, &(c * &Cyclotomic::from_i64(self.m, e[i] as i64)));
        }
        out
    }

    /// Total degree, `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Substitutes x_v -> sum_c forms[v][c] x_c.
    pub fn substitute_linear(&self, forms: &[Vec<Cyclotomic>]) -> Poly {
        let n = self.nvars;
        let mut powers: Vec<Vec<Poly>> = (0..n)
            .map(|_| vec![Poly::constant(n, Cyclotomic::one(self.m))])
            .collect();
        let mut out = Poly::zero(n, self.m);
        for (e, c) in &self.terms {
            let mut acc = Poly::constant(n, c.clone());
            for v in 0..n {
                let k = e[v] as usize;
                if k == 0 {
                    continue;
                }
                while powers[v].len() <= k {
                    let next = powers[v].last().unwrap().mul(&Poly::linear(&forms[v], self.m));
                    powers[v].push(next);
                }
                acc = acc.mul(&powers[v][k]);
            }
            out.add_scaled(&acc, &Cyclotomic::one(self.m));
        }
        out
    }
}
