//! Exact higher-order Bell numbers, higher-order Stirling numbers of the
//! second kind, and the iterated partition sets they count.
//!
//! Four independent routes compute the same numbers:
//!
//! * [`triangles`]: Stirling triangles by recurrence and by matrix power,
//!   Bell numbers as row sums and by several recurrences;
//! * [`egf`]: truncated exponential generating functions over exact rationals;
//! * [`enumerator`]: literal construction of every nested partition.
//!
//! Everything is exact; there is no floating point in any computation path.

pub mod egf;
pub mod enumerator;
pub mod error;
pub mod exact;
pub mod triangles;

pub use error::{Error, Result};
pub use exact::{Nat, Rat};
