//! Exact symbolic computation with universal graded Specht modules over
//! cyclotomic KLR (quiver Hecke) algebras.
//!
//! The crate is organized bottom-up:
//!
//! * [`ground`] — the quiver parameter `e`, multicharge, residues, the root
//!   and weight lattices, Cartan pairings, and the defect.
//! * [`perm`] — permutations of `{1..d}`: lengths, Bruhat order, preferred
//!   reduced words, coset representatives, full commutativity.
//! * [`tableaux`] — multipartitions, Young diagrams, tableaux, degrees and
//!   codegrees, dominance, and the row/column Garnir combinatorics.
//! * [`klr`] — the graded KLR algebra `R_alpha`: elements, relation-driven
//!   rewriting to the `psi_w y^m e(i)` normal form, star and sign maps.
//! * [`laurent`] — Laurent polynomials in `q` with integer coefficients.
//! * [`modules`] — cyclic graded modules presented by generator residues and
//!   annihilators: segment and permutation modules, action matrices, graded
//!   dimensions, induced graded dimensions.
//! * [`bricks`] — the block intertwiners `sigma_r`, `tau_r` and their signed
//!   column analogues, with mechanical verification of their identities.
//! * [`specht`] — universal row and column Specht modules: Garnir elements,
//!   straightening to the standard basis, graded characters, and the
//!   verification suites (relations, sign twist, duality, induction).
//!
//! All arithmetic is exact; there are no floating-point numbers anywhere.

pub mod bricks;
pub mod ground;
pub mod klr;
pub mod laurent;
pub mod matrix;
pub mod modules;
pub mod perm;
pub mod specht;
pub mod tableaux;

pub use ground::{GroundData, GroundError, Residue, RootElement, WeightElement};

/// Name of the reduced-word policy used everywhere in this crate.
///
/// Persisted outputs record it so that raw matrices and basis expansions are
/// comparable across runs and across implementations.
pub const REDUCED_WORD_POLICY: &str = "leftmost-descent-greedy";

/// Library version string embedded in machine-readable outputs.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
