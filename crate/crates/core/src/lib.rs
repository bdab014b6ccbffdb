//! Flip words, recoupling invariants and GF(2) Ptolemy algebras.
//!
//! * [`gamma`]: words in the groups Γₙ⁴ and their GF(2) abelianization.
//! * [`braid`]: pure braid words and the map `f_n: PB_n -> Γ_n^4`.
//! * [`kinetic`]: Delaunay triangulations of moving points and their flip words.
//! * [`recoupling`]: quantum 6j symbols and flip operators on coloured triangulations.
//! * [`spine`]: the GF(2) Ptolemy algebra of a special spine.
//! * [`report`]: the deterministic braid-map consistency report.

pub mod braid;
pub mod example;
pub mod gamma;
pub mod kinetic;
pub mod recoupling;
pub mod report;
pub mod spine;
