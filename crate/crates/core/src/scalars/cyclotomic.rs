use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

type Coeffs = SmallVec<[i64; 8]>;

/// Precomputed data for Q(zeta_m): the cyclotomic polynomial and the
/// reductions of x^k modulo it.
pub struct FieldData {
    m: u32,
    phi: usize,
    /// `reduce[k]` is x^k mod Phi_m as a coefficient vector of length phi.
    reduce: Vec<Coeffs>,
}

impl FieldData {
    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    fn reduction(&self, k: usize) -> &[i64] {
        &self.reduce[k]
    }
}

impl fmt::Debug for FieldData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.m)
    }
}

/// Integer coefficients of Phi_m, lowest degree first.
pub fn cyclotomic_polynomial(m: u32) -> Vec<i64> {
    assert!(m >= 1, "conductor must be positive");
    // x^m - 1 divided by Phi_d for every proper divisor d
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m.is_multiple_of(d) {
            let div = cyclotomic_polynomial(d);
            num = exact_div_monic(&num, &div);
        }
    }
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for k in (0..=qd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn build_field(m: u32) -> FieldData {
    let phi_poly = cyclotomic_polynomial(m);
    let phi = phi_poly.len() - 1;
    let len = (m as usize).max(2 * phi).max(1);
    let mut reduce: Vec<Coeffs> = Vec::with_capacity(len);
    for k in 0..len {
        let mut v: Coeffs = SmallVec::from_elem(0, phi);
        if k < phi {
            v[k] = 1;
        } else {
            // x^k = x * x^(k-1); shift and fold the top coefficient
            let prev = &reduce[k - 1];
            let top = prev[phi - 1];
            for t in (1..phi).rev() {
                v[t] = prev[t - 1];
            }
            v[0] = 0;
            if top != 0 {
                for t in 0..phi {
                    v[t] -= top * phi_poly[t];
                }
            }
        }
        reduce.push(v);
    }
    FieldData { m, phi, reduce }
}

/// The shared field descriptor for conductor `m`.
pub fn field(m: u32) -> &'static FieldData {
    static FIELDS: OnceLock<Mutex<HashMap<u32, &'static FieldData>>> = OnceLock::new();
    let map = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = map.lock().unwrap();
    guard
        .entry(m)
        .or_insert_with(|| Box::leak(Box::new(build_field(m))))
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Num {
    Small { c: Coeffs, d: i64 },
    Big { c: Vec<BigInt>, d: BigInt },
}

/// An exact element of Q(zeta_m), stored in the power basis
/// 1, zeta, ..., zeta^(phi(m)-1) with a common positive denominator.
#[derive(Clone)]
pub struct Cyclotomic {
    f: &'static FieldData,
    n: Num,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if std::ptr::eq(self.f, other.f) {
            return self.n == other.n;
        }
        let (a, b) = unify(self, other);
        a.n == b.n
    }
}

impl Eq for Cyclotomic {}

impl Hash for Cyclotomic {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.f.m.hash(state);
        self.n.hash(state);
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    a.gcd(&b)
}

impl Cyclotomic {
    fn from_small(f: &'static FieldData, c: &[i128], d: i128) -> Cyclotomic {
        debug_assert!(d != 0);
        let mut g = d;
        for &x in c {
            if g == 1 {
                break;
            }
            if x != 0 {
                g = gcd_i128(g, x);
            }
        }
        if g < 0 {
            g = -g;
        }
        if d < 0 {
            g = -g;
        }
        let mut out: Coeffs = SmallVec::with_capacity(c.len());
        let mut fits = true;
        for &x in c {
            let v = x / g;
            match i64::try_from(v) {
                Ok(v) => out.push(v),
                Err(_) => {
                    fits = false;
                    break;
                }
            }
        }
        let dd = d / g;
        if fits {
            if let Ok(dd) = i64::try_from(dd) {
                if out.iter().all(|&x| x == 0) {
                    return Cyclotomic::zero_in(f);
                }
                return Cyclotomic {
                    f,
                    n: Num::Small { c: out, d: dd },
                };
            }
        }
        let big: Vec<BigInt> = c.iter().map(|&x| BigInt::from(x)).collect();
        Cyclotomic::from_big(f, big, BigInt::from(d))
    }

    fn from_big(f: &'static FieldData, mut c: Vec<BigInt>, mut d: BigInt) -> Cyclotomic {
        debug_assert!(!d.is_zero());
        if c.iter().all(|x| x.is_zero()) {
            return Cyclotomic::zero_in(f);
        }
        let mut g = d.clone();
        for x in &c {
            if g.is_one() {
                break;
            }
            if !x.is_zero() {
                g = g.gcd(x);
            }
        }
        if d.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for x in c.iter_mut() {
                *x = &*x / &g;
            }
            d = &d / &g;
        }
        let small: Option<Coeffs> = c.iter().map(|x| x.to_i64()).collect();
        match (small, d.to_i64()) {
            (Some(sc), Some(sd)) => Cyclotomic {
                f,
                n: Num::Small { c: sc, d: sd },
            },
            _ => Cyclotomic {
                f,
                n: Num::Big { c, d },
            },
        }
    }

    fn big_parts(&self) -> (Vec<BigInt>, BigInt) {
        match &self.n {
            Num::Small { c, d } => (c.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(*d)),
            Num::Big { c, d } => (c.clone(), d.clone()),
        }
    }

    fn zero_in(f: &'static FieldData) -> Cyclotomic {
        Cyclotomic {
            f,
            n: Num::Small {
                c: SmallVec::from_elem(0, f.phi),
                d: 1,
            },
        }
    }

    pub fn zero(m: u32) -> Cyclotomic {
        Cyclotomic::zero_in(field(m))
    }

    pub fn one(m: u32) -> Cyclotomic {
        Cyclotomic::from_i64(m, 1)
    }

    pub fn from_i64(m: u32, v: i64) -> Cyclotomic {
        Cyclotomic::from_ratio(m, v, 1)
    }

    /// The rational `num/den` in Q(zeta_m). Panics if `den == 0`.
    pub fn from_ratio(m: u32, num: i64, den: i64) -> Cyclotomic {
        assert!(den != 0, "zero denominator");
        let f = field(m);
        let mut c = vec![0i128; f.phi];
        c[0] = num as i128;
        Cyclotomic::from_small(f, &c, den as i128)
    }

    pub fn from_rational(m: u32, r: &BigRational) -> Cyclotomic {
        let f = field(m);
        let mut c = vec![BigInt::zero(); f.phi];
        c[0] = r.numer().clone();
        Cyclotomic::from_big(f, c, r.denom().clone())
    }

    /// Builds sum_j coeffs[j] zeta^j; the vector may be longer than phi(m).
    pub fn from_power_coeffs(m: u32, coeffs: &[BigRational]) -> Cyclotomic {
        let mut acc = Cyclotomic::zero(m);
        for (j, r) in coeffs.iter().enumerate() {
            if !r.is_zero() {
                acc += &(&Cyclotomic::root_of_unity(m, j as i64) * &Cyclotomic::from_rational(m, r));
            }
        }
        acc
    }

    /// zeta_m^k for any integer k.
    pub fn root_of_unity(m: u32, k: i64) -> Cyclotomic {
        let f = field(m);
        let e = k.rem_euclid(m as i64) as usize;
        let c: Vec<i128> = f.reduction(e).iter().map(|&x| x as i128).collect();
        Cyclotomic::from_small(f, &c, 1)
    }

    pub fn conductor(&self) -> u32 {
        self.f.m
    }

    pub fn field(&self) -> &'static FieldData {
        self.f
    }

    pub fn is_zero(&self) -> bool {
        match &self.n {
            Num::Small { c, .. } => c.iter().all(|&x| x == 0),
            Num::Big { c, .. } => c.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.n {
            Num::Small { c, d } => *d == 1 && c[0] == 1 && c[1..].iter().all(|&x| x == 0),
            Num::Big { .. } => false,
        }
    }

    /// Coefficients in the power basis, as rationals.
    pub fn coeffs(&self) -> Vec<BigRational> {
        let (c, d) = self.big_parts();
        c.into_iter()
            .map(|x| BigRational::new(x, d.clone()))
            .collect()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        let cs = self.coeffs();
        if cs[1..].iter().all(|x| x.is_zero()) {
            Some(cs[0].clone())
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.to_rational().is_some()
    }

    /// Re-expresses this value in Q(zeta_m) for a multiple m of its conductor.
    pub fn lift(&self, m: u32) -> Cyclotomic {
        if m == self.f.m {
            return self.clone();
        }
        assert!(m.is_multiple_of(self.f.m), "cannot embed Q(zeta_{}) in Q(zeta_{})", self.f.m, m);
        let step = (m / self.f.m) as i64;
        let cs = self.coeffs();
        let mut acc = Cyclotomic::zero(m);
        for (j, r) in cs.iter().enumerate() {
            if !r.is_zero() {
                acc += &(&Cyclotomic::root_of_unity(m, j as i64 * step) * &Cyclotomic::from_rational(m, r));
            }
        }
        acc
    }

    /// The Galois automorphism zeta -> zeta^k (k coprime to the conductor).
    pub fn galois(&self, k: i64) -> Cyclotomic {
        let m = self.f.m as i64;
        let f = self.f;
        match &self.n {
            Num::Small { c, d } => {
                let mut out = vec![0i128; f.phi];
                for (j, &cj) in c.iter().enumerate() {
                    if cj == 0 {
                        continue;
                    }
                    let e = (j as i64 * k).rem_euclid(m) as usize;
                    for (t, &r) in f.reduction(e).iter().enumerate() {
                        out[t] += cj as i128 * r as i128;
                    }
                }
                Cyclotomic::from_small(f, &out, *d as i128)
            }
            Num::Big { c, d } => {
                let mut out = vec![BigInt::zero(); f.phi];
                for (j, cj) in c.iter().enumerate() {
                    if cj.is_zero() {
                        continue;
                    }
                    let e = (j as i64 * k).rem_euclid(m) as usize;
                    for (t, &r) in f.reduction(e).iter().enumerate() {
                        if r != 0 {
                            out[t] += cj * r;
                        }
                    }
                }
                Cyclotomic::from_big(f, out, d.clone())
            }
        }
    }

    /// Complex conjugation, zeta -> zeta^-1.
    pub fn conj(&self) -> Cyclotomic {
        self.galois(-1)
    }

    /// Multiplicative inverse via the product of the other Galois conjugates
    /// divided by the (rational) norm. `None` for zero.
    pub fn inv(&self) -> Option<Cyclotomic> {
        if self.is_zero() {
            return None;
        }
        let m = self.f.m as i64;
        let mut others = Cyclotomic::one(self.f.m);
        for k in 2..=m.max(1) {
            if k < m && k.gcd(&m) == 1 {
                others = &others * &self.galois(k);
            }
        }
        let norm = (self * &others)
            .to_rational()
            .expect("field norm is rational");
        let inv_norm = Cyclotomic::from_rational(self.f.m, &norm.recip());
        Some(&others * &inv_norm)
    }

    pub fn pow(&self, e: i64) -> Cyclotomic {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let mut base = self.clone();
        let mut acc = Cyclotomic::one(self.f.m);
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn add_same(&self, other: &Cyclotomic, sign: i128) -> Cyclotomic {
        let f = self.f;
        if let (Num::Small { c: a, d: da }, Num::Small { c: b, d: db }) = (&self.n, &other.n) {
            let (da, db) = (*da as i128, *db as i128);
            let mut out: SmallVec<[i128; 8]> = SmallVec::with_capacity(f.phi);
            if da == db {
                for (x, y) in a.iter().zip(b.iter()) {
                    out.push(*x as i128 + sign * *y as i128);
                }
                return Cyclotomic::from_small(f, &out, da);
            }
            for (x, y) in a.iter().zip(b.iter()) {
                out.push(*x as i128 * db + sign * *y as i128 * da);
            }
            return Cyclotomic::from_small(f, &out, da * db);
        }
        let (a, da) = self.big_parts();
        let (b, db) = other.big_parts();
        let out: Vec<BigInt> = a
            .iter()
            .zip(b.iter())
            .map(|(x, y)| {
                let t = y * &da;
                if sign > 0 {
                    x * &db + t
                } else {
                    x * &db - t
                }
            })
            .collect();
        Cyclotomic::from_big(f, out, da * db)
    }

    fn mul_same(&self, other: &Cyclotomic) -> Cyclotomic {
        let f = self.f;
        let phi = f.phi;
        if let (Num::Small { c: a, d: da }, Num::Small { c: b, d: db }) = (&self.n, &other.n) {
            if let Some(r) = mul_small(f, a, b) {
                if let Some(d) = (*da as i128).checked_mul(*db as i128) {
                    return Cyclotomic::from_small(f, &r, d);
                }
            }
        }
        let (a, da) = self.big_parts();
        let (b, db) = other.big_parts();
        let mut prod = vec![BigInt::zero(); 2 * phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out = vec![BigInt::zero(); phi];
        for (k, p) in prod.into_iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            if k < phi {
                out[k] += p;
            } else {
                for (t, &r) in f.reduction(k).iter().enumerate() {
                    if r != 0 {
                        out[t] += &p * r;
                    }
                }
            }
        }
        Cyclotomic::from_big(f, out, da * db)
    }
}

fn mul_small(f: &FieldData, a: &[i64], b: &[i64]) -> Option<SmallVec<[i128; 8]>> {
    let phi = f.phi;
    let mut prod: SmallVec<[i128; 16]> = SmallVec::from_elem(0, 2 * phi - 1);
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y != 0 {
                prod[i + j] = prod[i + j].checked_add(x as i128 * y as i128)?;
            }
        }
    }
    let mut out: SmallVec<[i128; 8]> = SmallVec::from_elem(0, phi);
    out.copy_from_slice(&prod[..phi]);
    for (k, &p) in prod.iter().enumerate().skip(phi) {
        if p == 0 {
            continue;
        }
        for (t, &r) in f.reduction(k).iter().enumerate() {
            if r != 0 {
                out[t] = out[t].checked_add(p.checked_mul(r as i128)?)?;
            }
        }
    }
    Some(out)
}

fn unify(a: &Cyclotomic, b: &Cyclotomic) -> (Cyclotomic, Cyclotomic) {
    let m = a.f.m.lcm(&b.f.m);
    (a.lift(m), b.lift(m))
}

impl<'a> Add<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        if std::ptr::eq(self.f, rhs.f) {
            self.add_same(rhs, 1)
        } else {
            let (a, b) = unify(self, rhs);
            a.add_same(&b, 1)
        }
    }
}

impl<'a> Sub<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        if std::ptr::eq(self.f, rhs.f) {
            self.add_same(rhs, -1)
        } else {
            let (a, b) = unify(self, rhs);
            a.add_same(&b, -1)
        }
    }
}

impl<'a> Mul<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        if std::ptr::eq(self.f, rhs.f) {
            self.mul_same(rhs)
        } else {
            let (a, b) = unify(self, rhs);
            a.mul_same(&b)
        }
    }
}

impl<'a> Div<&'a Cyclotomic> for &'a Cyclotomic {
    type Output = Cyclotomic;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Cyclotomic) -> Cyclotomic {
        self * &rhs.inv().expect("division by zero")
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        match &self.n {
            Num::Small { c, d } => Cyclotomic {
                f: self.f,
                // i64::MIN cannot occur after normalization with d > 0 in practice,
                // but route through i128 to stay exact
                n: {
                    let v: Vec<i128> = c.iter().map(|&x| -(x as i128)).collect();
                    Cyclotomic::from_small(self.f, &v, *d as i128).n
                },
            },
            Num::Big { c, d } => Cyclotomic {
                f: self.f,
                n: Num::Big {
                    c: c.iter().map(|x| -x).collect(),
                    d: d.clone(),
                },
            },
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Cyclotomic> for Cyclotomic {
            type Output = Cyclotomic;
            fn $m(self, rhs: &Cyclotomic) -> Cyclotomic {
                (&self).$m(rhs)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Cyclotomic> for Cyclotomic {
    fn mul_assign(&mut self, rhs: &Cyclotomic) {
        *self = &*self * rhs;
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Cyclotomic {
    /// Literal form, highest power of z first: `1/2*z^3 - 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs = self.coeffs();
        let mut out = String::new();
        for (k, c) in cs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            let body = match (k, a.is_one()) {
                (0, _) => fmt_rational(&a),
                (1, true) => "z".to_string(),
                (1, false) => format!("{}*z", fmt_rational(&a)),
                (_, true) => format!("z^{}", k),
                (_, false) => format!("{}*z^{}", fmt_rational(&a), k),
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [M={}]", self, self.f.m)
    }
}
