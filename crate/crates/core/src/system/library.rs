use bitvec::prelude::*;
use rand::seq::index;
use rand::Rng;

use super::SystemParams;
use crate::error::Result;
use crate::fapset::FapSet;
use crate::rng::{stream_rng, Stream};

/// The `N` files of `F` bits each, addressed `1..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Library {
    file_bits: usize,
    files: Vec<BitVec<u64, Lsb0>>,
}

impl Library {
    pub fn from_files(files: Vec<BitVec<u64, Lsb0>>) -> Self {
        let file_bits = files.first().map_or(0, |f| f.len());
        assert!(files.iter().all(|f| f.len() == file_bits), "files must share one length");
        Library { file_bits, files }
    }

    pub fn file_count(&self) -> usize {
        self.files.len()
    }

    pub fn file_bits(&self) -> usize {
        self.file_bits
    }

    pub fn file(&self, n: usize) -> &BitSlice<u64, Lsb0> {
        &self.files[n - 1]
    }
}

/// Fills the library with uniformly random bits from the library stream of `seed`.
pub fn generate_library(params: &SystemParams, seed: u64) -> Result<Library> {
    params.validate()?;
    let mut rng = stream_rng(seed, Stream::Library);
    let words = params.f.div_ceil(64);
    let files = (0..params.n)
        .map(|_| {
            let raw: Vec<u64> = (0..words).map(|_| rng.gen()).collect();
            let mut bits = BitVec::<u64, Lsb0>::from_vec(raw);
            bits.truncate(params.f);
            bits
        })
        .collect();
    Ok(Library {
        file_bits: params.f,
        files,
    })
}

/// Which bit positions of every file each F-AP holds after placement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheLayout {
    faps: usize,
    files: usize,
    file_bits: usize,
    // [(k - 1) * files + (n - 1)], each sorted ascending
    cached: Vec<Vec<u32>>,
}

impl CacheLayout {
    pub fn from_positions(faps: usize, files: usize, file_bits: usize, cached: Vec<Vec<u32>>) -> Self {
        assert_eq!(cached.len(), faps * files);
        let cached = cached
            .into_iter()
            .map(|mut v| {
                v.sort_unstable();
                v.dedup();
                v
            })
            .collect();
        CacheLayout {
            faps,
            files,
            file_bits,
            cached,
        }
    }

    pub fn fap_count(&self) -> usize {
        self.faps
    }

    pub fn file_count(&self) -> usize {
        self.files
    }

    pub fn file_bits(&self) -> usize {
        self.file_bits
    }

    /// Sorted bit positions of file `n` cached at F-AP `k`.
    pub fn cached(&self, k: usize, n: usize) -> &[u32] {
        &self.cached[(k - 1) * self.files + (n - 1)]
    }

    /// For every bit position of file `n`, the set of F-APs caching it.
    pub fn holders(&self, n: usize) -> Vec<FapSet> {
        let mut holders = vec![FapSet::EMPTY; self.file_bits];
        for k in 1..=self.faps {
            for &pos in self.cached(k, n) {
                holders[pos as usize] = holders[pos as usize].with(k);
            }
        }
        holders
    }

    /// `Z_k`: the bits F-AP `k` actually stores.
    pub fn contents(&self, k: usize, library: &Library) -> CacheContent {
        let files = (1..=self.files)
            .map(|n| {
                let positions = self.cached(k, n).to_vec();
                let file = library.file(n);
                let bits = positions.iter().map(|&p| file[p as usize]).collect();
                (positions, bits)
            })
            .collect();
        CacheContent { fap: k, files }
    }
}

/// The cache content `Z_k` of one F-AP: for every file, the positions it holds
/// and the bit values at those positions.
#[derive(Debug, Clone)]
pub struct CacheContent {
    fap: usize,
    files: Vec<(Vec<u32>, BitVec<u64, Lsb0>)>,
}

impl CacheContent {
    pub fn fap(&self) -> usize {
        self.fap
    }

    /// Bit `pos` of file `n`, if cached here.
    pub fn bit(&self, n: usize, pos: u32) -> Option<bool> {
        let (positions, bits) = &self.files[n - 1];
        positions.binary_search(&pos).ok().map(|i| bits[i])
    }

    pub fn cached_bits(&self) -> usize {
        self.files.iter().map(|(p, _)| p.len()).sum()
    }
}

/// Decentralized placement: every F-AP independently caches `round(MF/N)`
/// bits of every file, chosen uniformly without replacement.
pub fn place_caches(params: &SystemParams, seed: u64) -> Result<CacheLayout> {
    params.validate()?;
    let mut rng = stream_rng(seed, Stream::Placement);
    let per_file = params.cached_bits_per_file();
    let mut cached = Vec::with_capacity(params.k * params.n);
    for _k in 0..params.k {
        for _n in 0..params.n {
            let mut picks: Vec<u32> = index::sample(&mut rng, params.f, per_file)
                .into_iter()
                .map(|p| p as u32)
                .collect();
            picks.sort_unstable();
            cached.push(picks);
        }
    }
    Ok(CacheLayout {
        faps: params.k,
        files: params.n,
        file_bits: params.f,
        cached,
    })
}
