//! Parameter grids shared by the integration tests.

#![allow(dead_code)]

use hankel_paths::{IdentityParams, Parity};

/// All `(k, m, n, parity)` with `1 <= k <= kmax`, `1 <= m <= mmax`,
/// `0 <= n <= nmax`, both parities.
pub fn grid(kmax: u32, mmax: u32, nmax: u32) -> impl Iterator<Item = IdentityParams> {
    Parity::ALL.into_iter().flat_map(move |parity| {
        (1..=kmax).flat_map(move |k| {
            (1..=mmax).flat_map(move |m| (0..=nmax).map(move |n| IdentityParams::new(k, m, n, parity)))
        })
    })
}
