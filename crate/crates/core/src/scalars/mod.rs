//! Exact scalars: elements of a cyclotomic field Q(zeta_M), polynomials in
//! the formal parameter h (hbar) over it, and q-numbers.

mod cyclotomic;
mod hscalar;
mod literal;

pub use cyclotomic::{cyclotomic_polynomial, field, Cyclotomic, FieldData};
pub use hscalar::HScalar;
pub use literal::{parse_cyclotomic, parse_hscalar, LiteralError};

/// Conductor needed for the q-Moyal product with q a primitive n-th root of
/// unity: both q and i must be available.
pub fn qmoyal_conductor(n: u32) -> u32 {
    num_integer::lcm(4, n)
}

/// The q-integer [n]_q = 1 + q + ... + q^(n-1).
pub fn q_integer(n: u64, q: &Cyclotomic) -> Cyclotomic {
    let mut acc = Cyclotomic::zero(q.conductor());
    let mut p = Cyclotomic::one(q.conductor());
    for _ in 0..n {
        acc += &p;
        p = &p * q;
    }
    acc
}

/// [n]_q! = [1]_q [2]_q ... [n]_q.
pub fn q_factorial(n: u64, q: &Cyclotomic) -> Cyclotomic {
    let mut acc = Cyclotomic::one(q.conductor());
    for j in 1..=n {
        acc = &acc * &q_integer(j, q);
    }
    acc
}

/// Gaussian binomial coefficient, computed with the q-Pascal recurrence so it
/// stays valid when q is a root of unity and some [j]_q vanish.
pub fn q_binomial(n: u64, k: u64, q: &Cyclotomic) -> Cyclotomic {
    let m = q.conductor();
    if k > n {
        return Cyclotomic::zero(m);
    }
    let mut row = vec![Cyclotomic::one(m)];
    for r in 1..=n {
        let mut next = vec![Cyclotomic::one(m); (r + 1) as usize];
        for j in 1..r as usize {
            next[j] = &row[j - 1] + &(&q.pow(j as i64) * &row[j]);
        }
        row = next;
    }
    row[k as usize].clone()
}
