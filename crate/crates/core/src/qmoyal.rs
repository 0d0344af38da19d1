//! The q-Moyal star product on C[z, zb] x Z/n with q = exp(2 pi i / n), its
//! q-difference operators, and the center of the resulting algebra.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use crate::scalars::{
    parse_hscalar, q_binomial, q_factorial, q_integer, qmoyal_conductor, Cyclotomic, HScalar, LiteralError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QMoyalError {
    #[error("n must be at least 2 (got {0})")]
    Order(u32),
    #[error("operands belong to different n ({0} and {1})")]
    MismatchedN(u32, u32),
    #[error("the polynomial is not invariant under the generator")]
    NotInvariant,
    #[error("exact division by {0} failed")]
    Divisibility(&'static str),
    #[error("expected a plain polynomial without group elements")]
    HasGroupPart,
    #[error("the result is not a scalar")]
    NotScalar,
    #[error("parse error: {0}")]
    Parse(String),
}

impl From<LiteralError> for QMoyalError {
    fn from(e: LiteralError) -> Self {
        QMoyalError::Parse(e.to_string())
    }
}

/// (z exponent, zb exponent, group power mod n).
pub type QMono = (u32, u32, u32);

/// A combination of z^a zb^b g^k with coefficients polynomial in h.
#[derive(Clone, PartialEq, Eq)]
pub struct QPoly {
    n: u32,
    terms: BTreeMap<QMono, HScalar>,
}

impl QPoly {
    pub fn zero(n: u32) -> QPoly {
        QPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(n: u32, mono: QMono, c: HScalar) -> QPoly {
        let mut p = QPoly::zero(n);
        p.add_term(mono, &c);
        p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&QMono, &HScalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mono: QMono) -> Option<&HScalar> {
        self.terms.get(&mono)
    }

    pub fn add_term(&mut self, (a, b, k): QMono, c: &HScalar) {
        if c.is_zero() {
            return;
        }
        let key = (a, b, k % self.n);
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

    pub fn add(&self, other: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, &-c);
        }
        out
    }

    pub fn scale(&self, s: &HScalar) -> QPoly {
        let mut out = QPoly::zero(self.n);
        for (k, c) in &self.terms {
            out.add_term(*k, &(c * s));
        }
        out
    }

    /// Specialization h = 0.
    pub fn at_hbar_zero(&self) -> QPoly {
        let mut out = QPoly::zero(self.n);
        for (k, c) in &self.terms {
            if let Some(v) = c.at_zero() {
                out.add_term(*k, &HScalar::constant(v.clone()));
            }
        }
        out
    }

    /// The coefficient of g^k as a plain polynomial.
    pub fn group_part(&self, k: u32) -> QPoly {
        let mut out = QPoly::zero(self.n);
        for (&(a, b, kk), c) in &self.terms {
            if kk == k % self.n {
                out.add_term((a, b, 0), c);
            }
        }
        out
    }

    fn map_terms(&self, mut f: impl FnMut(QMono, &HScalar) -> Option<(QMono, HScalar)>) -> QPoly {
        let mut out = QPoly::zero(self.n);
        for (k, c) in &self.terms {
            if let Some((k2, c2)) = f(*k, c) {
                out.add_term(k2, &c2);
            }
        }
        out
    }
}

impl fmt::Display for QPoly {
    /// `(coeff)*Z^a*Zb^b*g^k` terms joined by ` + `; parseable back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(a, b, k), c)| {
                let mut s = format!("({})", c);
                for (name, e) in [("Z", a), ("Zb", b), ("g", k)] {
                    match e {
                        0 => {}
                        1 => s.push_str(&format!("*{}", name)),
                        _ => s.push_str(&format!("*{}^{}", name, e)),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

type StarMemo = HashMap<(QMono, QMono), Vec<(QMono, HScalar)>>;

/// Operators and the star product for a fixed n.
pub struct QMoyal {
    n: u32,
    m: u32,
    q: Cyclotomic,
    qinv: Cyclotomic,
    /// (i/2) h
    step: HScalar,
    /// (i h / 2)^j / [j]_q!
    weights: Vec<HScalar>,
    memo: RefCell<StarMemo>,
}

impl QMoyal {
    pub fn new(n: u32) -> Result<QMoyal, QMoyalError> {
        if n < 2 {
            return Err(QMoyalError::Order(n));
        }
        let m = qmoyal_conductor(n);
        let q = Cyclotomic::root_of_unity(m, (m / n) as i64);
        let qinv = q.inv().unwrap();
        let i = Cyclotomic::root_of_unity(m, (m / 4) as i64);
        let step = HScalar::monomial(&i * &Cyclotomic::from_ratio(m, 1, 2), 1);
        let weights = (0..n as u64)
            .map(|j| step.pow(j as u32).scale(&q_factorial(j, &q).inv().unwrap()))
            .collect();
        Ok(QMoyal {
            n,
            m,
            q,
            qinv,
            step,
            weights,
            memo: RefCell::new(HashMap::new()),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> &Cyclotomic {
        &self.q
    }

    /// (i/2) h.
    pub fn half_i_hbar(&self) -> &HScalar {
        &self.step
    }

    fn one(&self) -> HScalar {
        HScalar::constant(Cyclotomic::one(self.m))
    }

    pub fn scalar(&self, c: HScalar) -> QPoly {
        QPoly::monomial(self.n, (0, 0, 0), c)
    }

    pub fn z(&self) -> QPoly {
        QPoly::monomial(self.n, (1, 0, 0), self.one())
    }

    pub fn zbar(&self) -> QPoly {
        QPoly::monomial(self.n, (0, 1, 0), self.one())
    }

    pub fn gamma(&self) -> QPoly {
        QPoly::monomial(self.n, (0, 0, 1), self.one())
    }

    fn check(&self, f: &QPoly) -> Result<(), QMoyalError> {
        if f.n != self.n {
            return Err(QMoyalError::MismatchedN(self.n, f.n));
        }
        Ok(())
    }

    /// D_z(z^a zb^b) = [a]_q z^(a-1) zb^b, termwise.
    pub fn d_z(&self, f: &QPoly) -> QPoly {
        f.map_terms(|(a, b, k), c| {
            (a > 0).then(|| ((a - 1, b, k), c.scale(&q_integer(a as u64, &self.q))))
        })
    }

    /// D_zb(z^a zb^b) = [b]_(1/q) z^a zb^(b-1), termwise.
    pub fn d_zbar(&self, f: &QPoly) -> QPoly {
        f.map_terms(|(a, b, k), c| {
            (b > 0).then(|| ((a, b - 1, k), c.scale(&q_integer(b as u64, &self.qinv))))
        })
    }

    pub fn sigma_z(&self, f: &QPoly) -> QPoly {
        f.map_terms(|(a, b, k), c| Some(((a, b, k), c.scale(&self.q.pow(a as i64)))))
    }

    pub fn sigma_zbar(&self, f: &QPoly) -> QPoly {
        f.map_terms(|(a, b, k), c| Some(((a, b, k), c.scale(&self.qinv.pow(b as i64)))))
    }

    /// The generator acting on functions: sigma_z sigma_zb.
    pub fn gamma_act(&self, f: &QPoly) -> QPoly {
        self.sigma_z(&self.sigma_zbar(f))
    }

    pub fn d_z_iter(&self, m: u32, f: &QPoly) -> QPoly {
        let mut g = f.clone();
        for _ in 0..m {
            g = self.d_z(&g);
        }
        g
    }

    /// D_z^m through the closed form
    /// sum_i (-1)^(m-i) binom_q(m, i) q^(i(i-1)/2) sigma_z^(m-i) f
    /// divided by (1-q)^m q^(m(m-1)/2) z^m.
    pub fn d_z_closed(&self, m: u32, f: &QPoly) -> Result<QPoly, QMoyalError> {
        let mut num = QPoly::zero(self.n);
        let mut sig = f.clone();
        // sig runs through sigma_z^(m-i) f for i = m, m-1, ..., 0
        for i in (0..=m).rev() {
            let mut c = &q_binomial(m as u64, i as u64, &self.q) * &self.q.pow((i as i64) * (i as i64 - 1) / 2);
            if (m - i) % 2 == 1 {
                c = -c;
            }
            num = num.add(&sig.scale(&HScalar::constant(c)));
            sig = self.sigma_z(&sig);
        }
        let one_minus_q = &Cyclotomic::one(self.m) - &self.q;
        let den = &one_minus_q.pow(m as i64) * &self.q.pow((m as i64) * (m as i64 - 1) / 2);
        let inv = HScalar::constant(den.inv().unwrap());
        let mut out = QPoly::zero(self.n);
        for (&(a, b, k), c) in num.terms() {
            if a < m {
                return Err(QMoyalError::Divisibility("z^m"));
            }
            out.add_term((a - m, b, k), &(c * &inv));
        }
        Ok(out)
    }

    /// Commutative product of two plain polynomials.
    pub fn pointwise(&self, f: &QPoly, g: &QPoly) -> Result<QPoly, QMoyalError> {
        if f.terms().chain(g.terms()).any(|(&(_, _, k), _)| k != 0) {
            return Err(QMoyalError::HasGroupPart);
        }
        let mut out = QPoly::zero(self.n);
        for (&(a, b, _), c) in f.terms() {
            for (&(a2, b2, _), c2) in g.terms() {
                out.add_term((a + a2, b + b2, 0), &(c * c2));
            }
        }
        Ok(out)
    }

    /// q-Leibniz rule
    /// D_z^k(fg) = sum_i binom_q(k, i) D_z^i(f) sigma_z^i D_z^(k-i)(g).
    pub fn q_leibniz(&self, k: u32, f: &QPoly, g: &QPoly) -> Result<QPoly, QMoyalError> {
        let mut out = QPoly::zero(self.n);
        for i in 0..=k {
            let left = self.d_z_iter(i, f);
            let right = self.sigma_z_pow(i, &self.d_z_iter(k - i, g));
            let c = HScalar::constant(q_binomial(k as u64, i as u64, &self.q));
            out = out.add(&self.pointwise(&left, &right)?.scale(&c));
        }
        Ok(out)
    }

    fn sigma_z_pow(&self, i: u32, f: &QPoly) -> QPoly {
        let mut g = f.clone();
        for _ in 0..i {
            g = self.sigma_z(&g);
        }
        g
    }

    /// Product of two basis monomials z^a zb^b g^k and z^c zb^d g^l:
    /// sum_(j<n) (ih/2)^j/[j]! D_z^j(z^a zb^b) sigma_z^j D_zb^j(g^k(z^c zb^d)) g^(j+k+l).
    fn star_mono(&self, x: QMono, y: QMono) -> Vec<(QMono, HScalar)> {
        if let Some(v) = self.memo.borrow().get(&(x, y)) {
            return v.clone();
        }
        let (a, b, k) = x;
        let (c, d, l) = y;
        let n = self.n;
        let twist = self.q.pow(k as i64 * (c as i64 - d as i64));
        let mut out = Vec::new();
        let mut fall_a = Cyclotomic::one(self.m);
        let mut fall_d = Cyclotomic::one(self.m);
        for j in 0..n.min(a + 1).min(d + 1) {
            if j > 0 {
                fall_a = &fall_a * &q_integer((a - j + 1) as u64, &self.q);
                fall_d = &fall_d * &q_integer((d - j + 1) as u64, &self.qinv);
            }
            if fall_a.is_zero() || fall_d.is_zero() {
                break;
            }
            let s = &(&(&fall_a * &fall_d) * &self.q.pow(j as i64 * c as i64)) * &twist;
            let coef = self.weights[j as usize].scale(&s);
            out.push(((a - j + c, b + d - j, (j + k + l) % n), coef));
        }
        self.memo.borrow_mut().insert((x, y), out.clone());
        out
    }

    pub fn star(&self, f: &QPoly, g: &QPoly) -> Result<QPoly, QMoyalError> {
        self.check(f)?;
        self.check(g)?;
        let mut out = QPoly::zero(self.n);
        for (x, cx) in f.terms() {
            for (y, cy) in g.terms() {
                let cxy = cx * cy;
                for (mono, c) in self.star_mono(*x, *y) {
                    out.add_term(mono, &(&cxy * &c));
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, f: &QPoly, g: &QPoly) -> Result<QPoly, QMoyalError> {
        Ok(self.star(f, g)?.sub(&self.star(g, f)?))
    }

    fn require_invariant(&self, f0: &QPoly) -> Result<(), QMoyalError> {
        self.check(f0)?;
        if f0.terms().any(|(&(_, _, k), _)| k != 0) {
            return Err(QMoyalError::HasGroupPart);
        }
        if self.gamma_act(f0) != *f0 {
            return Err(QMoyalError::NotInvariant);
        }
        Ok(())
    }

    /// The central element with group-free part f0:
    /// f_j = (ih/2)^j D_z^j(f0) / ([j]_q! (1 - 1/q)^j zb^j).
    pub fn center_lift(&self, f0: &QPoly) -> Result<QPoly, QMoyalError> {
        self.require_invariant(f0)?;
        let one_minus = &Cyclotomic::one(self.m) - &self.qinv;
        let mut out = f0.clone();
        let mut d = f0.clone();
        for j in 1..self.n {
            d = self.d_z(&d);
            let s = self.step.pow(j).scale(
                &(&q_factorial(j as u64, &self.q) * &one_minus.pow(j as i64))
                    .inv()
                    .unwrap(),
            );
            for (&(a, b, _), c) in d.terms() {
                if b < j {
                    return Err(QMoyalError::Divisibility("zb^j"));
                }
                out.add_term((a, b - j, j), &(c * &s));
            }
        }
        Ok(out)
    }

    /// The same lift through the second expression
    /// f_j = (-ih/2)^j q^(-j(j-1)/2) sigma_z^j D_zb^j(f0) / ((1-q)^j [j]_q! z^j).
    pub fn center_lift_conjugate_form(&self, f0: &QPoly) -> Result<QPoly, QMoyalError> {
        self.require_invariant(f0)?;
        let one_minus = &Cyclotomic::one(self.m) - &self.q;
        let neg_step = -&self.step;
        let mut out = f0.clone();
        let mut d = f0.clone();
        for j in 1..self.n {
            d = self.d_zbar(&d);
            let num = neg_step
                .pow(j)
                .scale(&self.q.pow(-((j as i64) * (j as i64 - 1) / 2)));
            let s = num.scale(
                &(&one_minus.pow(j as i64) * &q_factorial(j as u64, &self.q))
                    .inv()
                    .unwrap(),
            );
            for (&(a, b, _), c) in self.sigma_z_pow(j, &d).terms() {
                if a < j {
                    return Err(QMoyalError::Divisibility("z^j"));
                }
                out.add_term((a - j, b, j), &(c * &s));
            }
        }
        Ok(out)
    }

    /// Commutes with z, zb and g under the star product.
    pub fn is_central(&self, f: &QPoly) -> Result<bool, QMoyalError> {
        for g in [self.z(), self.zbar(), self.gamma()] {
            if !self.commutator(f, &g)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// u = z^n, v = zb^n, w = z zb + (ih/2)/(1 - 1/q) g.
    pub fn center_generators(&self) -> (QPoly, QPoly, QPoly) {
        let u = QPoly::monomial(self.n, (self.n, 0, 0), self.one());
        let v = QPoly::monomial(self.n, (0, self.n, 0), self.one());
        let one_minus = &Cyclotomic::one(self.m) - &self.qinv;
        let w = QPoly::monomial(self.n, (1, 1, 0), self.one()).add(&QPoly::monomial(
            self.n,
            (0, 0, 1),
            self.step.scale(&one_minus.inv().unwrap()),
        ));
        (u, v, w)
    }

    pub fn star_pow(&self, f: &QPoly, e: u32) -> Result<QPoly, QMoyalError> {
        let mut acc = self.scalar(self.one());
        for _ in 0..e {
            acc = self.star(&acc, f)?;
        }
        Ok(acc)
    }

    /// The constant c with u * v - w^n = c.
    pub fn center_relation(&self) -> Result<HScalar, QMoyalError> {
        let (u, v, w) = self.center_generators();
        let d = self.star(&u, &v)?.sub(&self.star_pow(&w, self.n)?);
        let mut c = HScalar::zero();
        for (&mono, x) in d.terms() {
            if mono != (0, 0, 0) {
                return Err(QMoyalError::NotScalar);
            }
            c = x.clone();
        }
        Ok(c)
    }

    /// Parses an expression in `Z`, `Zb`, `g` with scalar literals in `z`,
    /// `h` and `i`, e.g. `Z^2*Zb + (1/2*h)*g`.
    pub fn parse(&self, s: &str) -> Result<QPoly, QMoyalError> {
        let mut p = QParser {
            ctx: self,
            s: s.as_bytes(),
            pos: 0,
        };
        let v = p.expr()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(QMoyalError::Parse(format!("trailing input at offset {}", p.pos)));
        }
        Ok(v)
    }
}

struct QParser<'a> {
    ctx: &'a QMoyal,
    s: &'a [u8],
    pos: usize,
}

impl QParser<'_> {
    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, what: &str) -> Result<T, QMoyalError> {
        Err(QMoyalError::Parse(format!("{} at offset {}", what, self.pos)))
    }

    fn expr(&mut self) -> Result<QPoly, QMoyalError> {
        let n = self.ctx.n;
        let mut acc = QPoly::zero(n);
        let mut neg = false;
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                neg = true;
            }
            Some(b'+') => self.pos += 1,
            _ => {}
        }
        loop {
            let t = self.term()?;
            acc = if neg { acc.sub(&t) } else { acc.add(&t) };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    neg = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    neg = true;
                }
                _ => return Ok(acc),
            }
        }
    }

    /// A product of factors; products are commutative polynomial products
    /// with group powers collected on the right.
    fn term(&mut self) -> Result<QPoly, QMoyalError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let f = self.factor()?;
            acc = self.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn mul(&self, x: &QPoly, y: &QPoly) -> QPoly {
        let mut out = QPoly::zero(self.ctx.n);
        for (&(a, b, k), c) in x.terms() {
            for (&(a2, b2, k2), c2) in y.terms() {
                out.add_term((a + a2, b + b2, k + k2), &(c * c2));
            }
        }
        out
    }

    fn factor(&mut self) -> Result<QPoly, QMoyalError> {
        let ctx = self.ctx;
        let base = match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected )");
                }
                self.pos += 1;
                v
            }
            Some(b'Z') => {
                self.pos += 1;
                if self.s.get(self.pos) == Some(&b'b') {
                    self.pos += 1;
                    ctx.zbar()
                } else {
                    ctx.z()
                }
            }
            Some(b'g') => {
                self.pos += 1;
                ctx.gamma()
            }
            Some(c) if c.is_ascii_digit() || matches!(c, b'z' | b'h' | b'i') => {
                // a scalar atom, possibly with a rational slash and exponent
                let start = self.pos;
                self.pos += 1;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'/')
                {
                    self.pos += 1;
                }
                let lit = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                ctx.scalar(parse_hscalar(lit, ctx.m)?)
            }
            _ => return self.err("unexpected input"),
        };
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = std::str::from_utf8(&self.s[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| QMoyalError::Parse(format!("bad exponent at offset {}", start)))?;
            let mut acc = ctx.scalar(ctx.one());
            for _ in 0..e {
                acc = self.mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }
}
