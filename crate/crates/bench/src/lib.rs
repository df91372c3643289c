//! Inputs shared by the benchmarks.

use std::path::PathBuf;

use conic_floors::absolute::{Engine, Provider};

/// The table of `X̃_{8,1}` values shipped with the repository.
pub fn shipped_provider() -> Provider {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/tx81_2c1.table");
    Provider::load(&path).expect("shipped provider table")
}

/// A fresh engine holding the shipped table.
pub fn x8_engine() -> Engine {
    Engine::with_provider(shipped_provider())
}
