//! Instance-file parsers: transportation networks (whitespace-separated
//! link tables) and a minimal keyword-based tour-instance subset.

pub mod tntp;
pub mod tsplib;

pub use tntp::{parse_tntp, TntpArc, TntpNetwork};
pub use tsplib::{parse_tsplib_lite, TsplibLiteInstance};
