//! Composite seat apportionment for assemblies of member states.
//!
//! Every state receives a fixed number of base seats; the remaining seats
//! are apportioned by a divisor method, either to populations (optionally
//! with a per-state cap) or to power-weighted indices `p^E`, where `E` is
//! chosen so that the largest state lands exactly on the cap.
//!
//! ```
//! use camcom_core::{camcom, data, model::ApportionmentProblem};
//!
//! let problem = ApportionmentProblem::new(data::eu27());
//! let capped = camcom::camcom_apportion(&problem).unwrap();
//! assert_eq!(capped.seats[0], 96);
//!
//! let variants = camcom::power_variant(&problem).unwrap();
//! assert_eq!(variants.len(), 2);
//! ```

pub mod camcom;
pub mod data;
pub mod divisor;
pub mod error;
pub mod model;
pub mod nice;
pub mod powerlaw;
pub mod sweep;

pub use error::{Error, Result};
