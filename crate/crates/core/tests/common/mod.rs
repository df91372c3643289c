//! Helpers shared by the integration tests.

#![allow(dead_code)]

use conic_floors::absolute::{Engine, Provider};
use conic_floors::relative_complex::{gw_relative, RelativeQuery};
use conic_floors::relative_real::{RealEngine, RealQuery, Variant};
use conic_floors::{Int, MultiSeq};

pub mod properties;

/// `u_1`-multiples and friends.
pub fn ones(n: u64) -> MultiSeq {
    MultiSeq::unit(1, n)
}

/// `GW^{0,β}_{X̃_n}(dd·D − Σ mu_i E_i, g)`.
pub fn gw_rel(dd: i64, mu: &[i64], genus: i64, beta: MultiSeq) -> Int {
    gw_relative(&RelativeQuery::new(dd, mu.to_vec(), genus, MultiSeq::zero(), beta)).unwrap()
}

/// `FW^{0,β^ℜ,0,β^ℑ}_{X̃_n(κ)}(d, s)` of the given variant.
pub fn fw(engine: &mut RealEngine, dd: i64, mu: &[i64], kappa: usize, s: usize, re: u64, im: u64, variant: Variant) -> Int {
    let q = RealQuery::new(dd, mu.to_vec(), kappa, s, ones(re), ones(im));
    engine.fw(&q, variant).unwrap()
}

/// The provider table shipped with the repository.
pub fn shipped_provider() -> Provider {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/tx81_2c1.table");
    Provider::load(&path).unwrap()
}

/// Engine loaded with the shipped provider table.
pub fn x8_engine() -> Engine {
    Engine::with_provider(shipped_provider())
}

/// `2c_1(X_n) = 6D − 2Σ E_i` as coefficients.
pub fn two_c1(n: usize) -> (i64, Vec<i64>) {
    (6, vec![2; n])
}

/// Sorted multiset of integers.
pub fn multiset(mut v: Vec<Int>) -> Vec<Int> {
    v.sort_unstable();
    v
}
