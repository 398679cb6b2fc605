pub mod error;
pub mod formula;
pub mod semantics;
pub mod seq;
pub mod subst;
pub mod tableau;
pub mod hilbert;
pub mod relevance;
pub mod random;
