//! Field census: ingest field records, compose `S_d` and abelian fields,
//! and count the composita by discriminant.

pub mod compose;
pub mod count;
pub mod record;
pub mod uniformity;

pub use compose::{compose_disc, linearly_disjoint, ComposedDisc, PrimeContribution, PrimeSource, WildOverrides};
pub use count::{composita_discriminants, count_n, count_n_truncated, CensusResult};
pub use record::{parse_record, Dataset, FieldGroup, FieldRecord, LocalDatum, LocalKind, Pairing};
pub use uniformity::{measure_uniformity, UniformityResult, UniformitySpec, UniformityTerm};
