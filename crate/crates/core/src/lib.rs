//! Countable societies, ultrafilters on countable algebras of sets, and the
//! two-way correspondence between social welfare functions and ultrafilters.
//!
//! Everything here is a pure construction over natural-number codes:
//!
//! - [`order`]: weak orders on finite alternative sets and their codes.
//! - [`setalg`]: countable atomic algebras indexed by boolean formation
//!   sequences.
//! - [`ultra`]: ultrafilters with decidable (or stage-bounded) membership.
//! - [`society`]: the canonical quasi-partition profile family and its
//!   measurability maps.
//! - [`swf`]: social welfare functions, decisive coalitions, ultrafilter
//!   extraction and the converse construction.
//! - [`arrowcheck`]: exhaustive search for Arrovian aggregators on two
//!   voters and three alternatives.
//! - [`reversal`]: a society built from an enumeration whose
//!   non-dictatorial welfare functions decide the enumeration's range.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod arrowcheck;
mod error;
pub mod order;
pub mod pairing;
pub mod reversal;
pub mod setalg;
pub mod society;
pub mod swf;
pub mod ultra;

pub use error::{Error, Result};
pub use pairing::Index;
