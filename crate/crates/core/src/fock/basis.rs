use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Occupation-number label `|n_0, n_1, ..., n_{m-1}>`.
///
/// Ordering is lexicographic *descending* on the occupation vector, so a
/// `BTreeMap` keyed by basis states iterates in canonical order:
/// `(2,0) < (1,1) < (0,2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FockBasisState(Vec<u32>);

impl FockBasisState {
    pub fn new(occupations: Vec<u32>) -> Self {
        Self(occupations)
    }

    pub fn vacuum(mode_count: usize) -> Self {
        Self(vec![0; mode_count])
    }

    /// One photon in `mode`, vacuum elsewhere.
    pub fn single(mode_count: usize, mode: usize) -> Self {
        let mut occ = vec![0; mode_count];
        occ[mode] = 1;
        Self(occ)
    }

    pub fn occupations(&self) -> &[u32] {
        &self.0
    }

    pub fn occupation(&self, mode: usize) -> u32 {
        self.0[mode]
    }

    pub fn mode_count(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub(crate) fn with_occupation(&self, mode: usize, n: u32) -> Self {
        let mut occ = self.0.clone();
        occ[mode] = n;
        Self(occ)
    }

    /// The same label with `mode` deleted from the register.
    pub fn without_mode(&self, mode: usize) -> Self {
        let mut occ = self.0.clone();
        occ.remove(mode);
        Self(occ)
    }

    /// Concatenation `|self>|other>`.
    pub fn concat(&self, other: &FockBasisState) -> Self {
        let mut occ = self.0.clone();
        occ.extend_from_slice(&other.0);
        Self(occ)
    }
}

impl Ord for FockBasisState {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for FockBasisState {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for FockBasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for (k, n) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, ">")
    }
}

impl From<Vec<u32>> for FockBasisState {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

/// Number of ways to place `photons` bosons in `modes` modes.
pub fn basis_size(mode_count: usize, photons: u32) -> u64 {
    if mode_count == 0 {
        return u64::from(photons == 0);
    }
    binomial(photons as u64 + mode_count as u64 - 1, mode_count as u64 - 1)
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// All basis states with `total_photons` photons in `mode_count` modes, in
/// canonical (lexicographic descending) order.
pub fn enumerate_basis(mode_count: usize, total_photons: u32) -> Result<Vec<FockBasisState>> {
    if mode_count == 0 {
        return Err(Error::ZeroModes);
    }
    let mut out = Vec::with_capacity(basis_size(mode_count, total_photons) as usize);
    let mut occ = vec![0u32; mode_count];
    fill(&mut occ, 0, total_photons, &mut out);
    Ok(out)
}

fn fill(occ: &mut [u32], k: usize, remaining: u32, out: &mut Vec<FockBasisState>) {
    if k + 1 == occ.len() {
        occ[k] = remaining;
        out.push(FockBasisState(occ.to_vec()));
        return;
    }
    for n in (0..=remaining).rev() {
        occ[k] = n;
        fill(occ, k + 1, remaining - n, out);
    }
}

/// Position of `state` within `enumerate_basis(state.mode_count(), state.total())`.
pub fn basis_index(state: &FockBasisState) -> u64 {
    let m = state.mode_count();
    let mut remaining = state.total();
    let mut index = 0;
    for k in 0..m.saturating_sub(1) {
        let n = state.occupation(k);
        // States sharing the prefix but with more photons in mode k come first.
        for v in (n + 1)..=remaining {
            index += basis_size(m - k - 1, remaining - v);
        }
        remaining -= n;
    }
    index
}

/// Inverse of [`basis_index`].
pub fn basis_state_at(mode_count: usize, total_photons: u32, index: u64) -> Result<FockBasisState> {
    if mode_count == 0 {
        return Err(Error::ZeroModes);
    }
    let size = basis_size(mode_count, total_photons);
    if index >= size {
        return Err(crate::error::invalid(
            "index",
            format!("{index} out of range for basis of size {size}"),
        ));
    }
    let mut occ = vec![0u32; mode_count];
    let mut remaining = total_photons;
    let mut index = index;
    #[allow(clippy::needless_range_loop)]
    for k in 0..mode_count - 1 {
        let mut v = remaining;
        loop {
            let block = basis_size(mode_count - k - 1, remaining - v);
            if index < block {
                break;
            }
            index -= block;
            v -= 1;
        }
        occ[k] = v;
        remaining -= v;
    }
    occ[mode_count - 1] = remaining;
    Ok(FockBasisState(occ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn states(v: &[&[u32]]) -> Vec<FockBasisState> {
        v.iter().map(|o| FockBasisState::new(o.to_vec())).collect()
    }

    #[test]
    fn two_modes_one_photon() {
        assert_eq!(enumerate_basis(2, 1).unwrap(), states(&[&[1, 0], &[0, 1]]));
    }

    #[test]
    fn two_modes_two_photons() {
        assert_eq!(
            enumerate_basis(2, 2).unwrap(),
            states(&[&[2, 0], &[1, 1], &[0, 2]])
        );
    }

    #[test]
    fn four_modes_three_photons_has_twenty_states() {
        // C(6,3) computed by hand: 6*5*4/6.
        let basis = enumerate_basis(4, 3).unwrap();
        assert_eq!(basis.len(), 20);
        let mut dedup = basis.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 20);
        assert!(basis.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn zero_modes_rejected() {
        assert_eq!(enumerate_basis(0, 2), Err(Error::ZeroModes));
    }

    #[test]
    fn vacuum_basis() {
        assert_eq!(enumerate_basis(3, 0).unwrap(), states(&[&[0, 0, 0]]));
    }

    proptest! {
        #[test]
        fn index_round_trip(m in 1usize..6, n in 0u32..6) {
            let basis = enumerate_basis(m, n).unwrap();
            prop_assert_eq!(basis.len() as u64, basis_size(m, n));
            for (i, s) in basis.iter().enumerate() {
                prop_assert_eq!(basis_index(s), i as u64);
                prop_assert_eq!(&basis_state_at(m, n, i as u64).unwrap(), s);
            }
        }
    }
}
