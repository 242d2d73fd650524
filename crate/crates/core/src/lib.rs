//! Tournaments as packed bit matrices, with exact order-3/order-4 density
//! counting, per-arc flag statistics, local-transitivity structure and
//! diagnostics against the carousel and quasi-random limit profiles.
//!
//! ```
//! use tourney::{counting::quad_counts, generators::carousel};
//!
//! let q = quad_counts(&carousel(9).unwrap()).unwrap();
//! assert_eq!((q.w4, q.l4), (0, 0));
//! ```

pub mod analysis;
pub mod bits;
pub mod cli;
pub mod counting;
pub mod error;
pub mod generators;
pub mod loctrans;
pub mod tournament;

pub use error::{Error, Result};
pub use tournament::{SmallClass3, SmallClass4, Tournament};
