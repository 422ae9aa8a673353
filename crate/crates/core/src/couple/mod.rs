//! Exact couples, spectral-sequence pages and filtrations of abutments.

mod bidegree;
mod exact;
mod filtered;
mod filtration;
mod page;

pub use bidegree::{Bidegree, Slice};
pub use exact::{couple_from_tower, ExactCouple};
pub use filtered::FilteredComplex;
pub use filtration::{assemble_filtration, Abutment, FiltrationReport};
pub use page::{einfty, homology_at, page_turn, Beyond, Differential, Point, Slot, Stable, TriPage, Window};
