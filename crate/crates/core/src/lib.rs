//! Exact intersection theory, cohomology and Kähler-cone classification for
//! Calabi-Yau threefolds `X ∈ |−K_Z|` in `P²`-bundles `Z = P(E)` over `P²`.

pub mod bundle;
pub mod chow;
pub mod cli;
pub mod cohom;
pub mod cone;
pub mod cyinv;
pub mod error;
pub mod exactnum;
pub mod report;
pub mod selftest;
pub mod tri;

pub use error::{Error, Result};
