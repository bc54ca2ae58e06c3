//! Cyclic quotients of holomorphic symplectic and abelian varieties: canonical index,
//! quotient singularities, and exact torsion-point checks of explicit constructions.

pub mod abelian;
pub mod arith;
pub mod catalog;
pub mod index;
pub mod rational;
pub mod singular;
