use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Cyclotomic;

/// A polynomial in h with cyclotomic coefficients. `c[k]` is the coefficient
/// of h^k; trailing zeros are trimmed so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct HScalar {
    c: Vec<Cyclotomic>,
}

impl HScalar {
    pub fn zero() -> HScalar {
        HScalar { c: Vec::new() }
    }

    pub fn constant(v: Cyclotomic) -> HScalar {
        HScalar::monomial(v, 0)
    }

    /// `v * h^k`.
    pub fn monomial(v: Cyclotomic, k: usize) -> HScalar {
        if v.is_zero() {
            return HScalar::zero();
        }
        let mut c = vec![Cyclotomic::zero(v.conductor()); k];
        c.push(v);
        HScalar { c }
    }

    pub fn from_coeffs(c: Vec<Cyclotomic>) -> HScalar {
        let mut s = HScalar { c };
        s.trim();
        s
    }

    fn trim(&mut self) {
        while self.c.last().is_some_and(|x| x.is_zero()) {
            self.c.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree in h; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Coefficient of h^k (`None` if it is zero).
    pub fn coeff(&self, k: usize) -> Option<&Cyclotomic> {
        self.c.get(k).filter(|x| !x.is_zero())
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.c
    }

    /// Specialization h = 0.
    pub fn at_zero(&self) -> Option<&Cyclotomic> {
        self.coeff(0)
    }

    pub fn scale(&self, s: &Cyclotomic) -> HScalar {
        HScalar::from_coeffs(self.c.iter().map(|x| x * s).collect())
    }

    /// Multiplication by h^k.
    pub fn shift(&self, k: usize) -> HScalar {
        if self.is_zero() {
            return HScalar::zero();
        }
        let m = self.c[0].conductor();
        let mut c = vec![Cyclotomic::zero(m); k];
        c.extend(self.c.iter().cloned());
        HScalar { c }
    }

    pub fn pow(&self, e: u32) -> HScalar {
        let mut acc: Option<HScalar> = None;
        for _ in 0..e {
            acc = Some(match acc {
                None => self.clone(),
                Some(a) => &a * self,
            });
        }
        acc.unwrap_or_else(|| {
            let m = self.c.first().map(|x| x.conductor()).unwrap_or(1);
            HScalar::constant(Cyclotomic::one(m))
        })
    }

    fn combine(&self, other: &HScalar, neg: bool) -> HScalar {
        let n = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(n);
        for k in 0..n {
            let v = match (self.c.get(k), other.c.get(k)) {
                (Some(a), Some(b)) if neg => a - b,
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) if neg => -b,
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            };
            c.push(v);
        }
        HScalar::from_coeffs(c)
    }
}

impl Add for &HScalar {
    type Output = HScalar;
    fn add(self, rhs: &HScalar) -> HScalar {
        self.combine(rhs, false)
    }
}

impl Sub for &HScalar {
    type Output = HScalar;
    fn sub(self, rhs: &HScalar) -> HScalar {
        self.combine(rhs, true)
    }
}

impl Neg for &HScalar {
    type Output = HScalar;
    fn neg(self) -> HScalar {
        HScalar {
            c: self.c.iter().map(|x| -x).collect(),
        }
    }
}

impl Mul for &HScalar {
    type Output = HScalar;
    fn mul(self, rhs: &HScalar) -> HScalar {
        if self.is_zero() || rhs.is_zero() {
            return HScalar::zero();
        }
        let m = self.c[0].conductor();
        let mut c = vec![Cyclotomic::zero(m); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += &(a * b);
                }
            }
        }
        HScalar::from_coeffs(c)
    }
}

impl AddAssign<&HScalar> for HScalar {
    fn add_assign(&mut self, rhs: &HScalar) {
        *self = &*self + rhs;
    }
}

fn single_term(c: &Cyclotomic) -> Option<(BigRational, usize)> {
    let cs = c.coeffs();
    let mut found = None;
    for (k, r) in cs.into_iter().enumerate() {
        if !r.is_zero() {
            if found.is_some() {
                return None;
            }
            found = Some((r, k));
        }
    }
    found
}

impl fmt::Display for HScalar {
    /// Ascending powers of h, e.g. `1 + (z - 1)*h + 1/2*z^2*h^3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut out = String::new();
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let hpart = match k {
                0 => String::new(),
                1 => "h".to_string(),
                _ => format!("h^{}", k),
            };
            let (neg, body) = if k == 0 {
                let s = c.to_string();
                match s.strip_prefix('-') {
                    Some(rest) if single_term(c).is_some() => (true, rest.to_string()),
                    _ => (false, s),
                }
            } else {
                match single_term(c) {
                    Some((r, j)) => {
                        let neg = r.is_negative();
                        let a = r.abs();
                        let mut parts = Vec::new();
                        if !a.is_one() {
                            parts.push(if a.denom().is_one() {
                                a.numer().to_string()
                            } else {
                                format!("{}/{}", a.numer(), a.denom())
                            });
                        }
                        match j {
                            0 => {}
                            1 => parts.push("z".into()),
                            _ => parts.push(format!("z^{}", j)),
                        }
                        parts.push(hpart);
                        (neg, parts.join("*"))
                    }
                    None => (false, format!("({})*{}", c, hpart)),
                }
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
        f.write_str(&out)
    }
}

impl fmt::Debug for HScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
