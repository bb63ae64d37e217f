//! Exact twisted conjugacy, conjugacy and orbit decisions in the even
//! dihedral Artin groups `G(m)`, `m = 2n`, written as the semidirect product
//! `F_n x| Z` with `y^-1 x_i y = x_{i+1}`.
//!
//! Every positive answer carries a conjugator that is re-checked by exact
//! multiplication before it is returned.

pub mod automorphism;
pub mod cli;
pub mod decide;

pub mod error;
pub mod oracle;

pub mod repset;
pub mod shifts;
pub mod words;

pub use automorphism::{FullAuto, OuterAuto};
pub use decide::{Answer, Verdict};

pub use error::{Error, Result};
pub use words::{FreeLetter, FreeWord, GeodesicNF, GroupParams, ModularNF};
