//! Random beta-transformations over algebraic beta: exact Markov partitions,
//! subshift-of-finite-type codings, transfer-operator numerics and exact
//! Markov realizations of the associated g-measures.
//!
//! The pipeline runs field -> partition -> sft -> { thermo, measures } ->
//! simulate. Everything touching orbit points or partition endpoints is exact
//! arithmetic in Q(beta); floating point appears only in operator numerics,
//! entropy computations and reports.

mod poly;

pub mod field;
pub mod linalg;
pub mod measures;
pub mod partition;
pub mod sft;
pub mod simulate;
pub mod thermo;

pub use field::{FieldContext, FieldElement, FieldError};
pub use measures::{LebesgueChain, MeasureError, MeasureRep, NoveltyReport};
pub use partition::{ClassBVerdict, IntervalQB, OrbitSetF, PartitionC, PartitionError};
pub use sft::{SftCoding, SftError};
pub use simulate::{SimConfig, SimReport};
pub use thermo::{PotentialSpec, ThermoError, TransferOperator};
