//! Cyclic difference covering arrays DCA(4, n+1; n) over `Z_n`.
//!
//! The crate builds difference covering arrays whose off-pair difference
//! multisets are `Z_n \ {0}` with `n/2` doubled, checks them with an
//! independent per-pair counter, and turns them into sets of mutually nearly
//! orthogonal, row-complete Latin squares.
//!
//! Layout:
//!
//! - [`residue`], [`array`], [`diff`], [`format`]: the data model shared by
//!   difference matrices (DM), holey difference matrices (HDM) and difference
//!   covering arrays (DCA), plus the text/JSON file formats.
//! - [`verify`]: structural verifiers returning a [`verify::VerificationReport`].
//! - [`construct`]: the three direct families, the tabulated small orders,
//!   prime-field difference matrices, the composition combinators and the
//!   spectrum bookkeeping.
//! - [`latin`]: Latin squares derived from reduced arrays, orthogonality
//!   classification and Williams orderings.
//! - [`search`]: deterministic backtracking for third columns and small HDMs.
//! - [`cli`]: the `dca` command-line front end.

pub mod array;
pub mod cli;
pub mod construct;
pub mod diff;
pub mod format;
pub mod latin;
pub mod residue;
pub mod search;
pub mod verify;

pub use array::{ArrayError, ArrayKind, Form, ResidueArray};
pub use diff::{diff_multiset, DiffMultiset};
pub use residue::Residue;
