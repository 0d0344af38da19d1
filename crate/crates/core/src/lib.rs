//! Exact symbolic engine for noncommutative Poisson structures on crossed
//! products S(V*) x G with G a finite linear group.
//!
//! Everything is computed over a cyclotomic field Q(zeta_M); there is no
//! floating point anywhere.

pub mod scalars;
pub mod group;
pub mod linalg;
pub mod polyvec;
pub mod pbw;
pub mod catalog;
pub mod qmoyal;
pub mod cohom;
