//! Bigraded-commutative rings over `Z` or `Z/m`, and products on pages.

mod leibniz;
mod ring;

pub use leibniz::{apply_linear, leibniz_check, LeibnizReport, PagePairing};
pub use ring::{collinear_check, Generator, Monomial, RingElement, RingPresentation};
