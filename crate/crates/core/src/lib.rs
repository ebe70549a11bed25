//! Proposition algebra: conditional composition over atomic propositions,
//! the six valuation congruences with canonical forms, reactive valuations
//! as an executable oracle, satisfiability, expressiveness searches,
//! projective approximation of recursive statements, and transformations.

pub mod cli;
pub mod congruence;
pub mod enumerate;
pub mod error;
pub mod expressive;
pub mod laws;
pub mod projective;
pub mod sat;
pub mod syntax;
pub mod term;
pub mod transform;
pub mod valuation;

pub use error::{Error, Result};
pub use syntax::{desugar, parse, parse_term, print, print_sugared, Connective, SugaredTerm};
pub use term::{atom, atoms, depth, is_basic, is_k_basic, neg, pos, subst_atom, Atom, Term, Variety};
