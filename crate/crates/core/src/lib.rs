//! Exact arithmetic, polynomial nonpositivity certificates, closed-form
//! eigenvalue bounds for triangles and the catalog of inequality proofs
//! built on them.

pub mod exactq;
pub mod poly;
pub mod certifier;
pub mod check;
pub mod bounds;
pub mod proofs;
