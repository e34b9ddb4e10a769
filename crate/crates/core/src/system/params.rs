use crate::error::{invalid, Result};

/// Network and library dimensions.
///
/// `m` is the per-F-AP cache size in file units. `t` (the wall-clock length
/// of the request interval) is informational only; the model works in slots.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemParams {
    pub k: usize,
    pub n: usize,
    pub m: f64,
    pub f: usize,
    pub b: usize,
    pub delta_b: usize,
    pub t: f64,
}

impl SystemParams {
    pub fn new(k: usize, n: usize, m: f64, f: usize, b: usize, delta_b: usize) -> Result<Self> {
        let params = SystemParams {
            k,
            n,
            m,
            f,
            b,
            delta_b,
            t: b as f64,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn with_interval(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn with_delta_b(&self, delta_b: usize) -> Result<Self> {
        let mut p = self.clone();
        p.delta_b = delta_b;
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(invalid("K must be at least 1"));
        }
        if self.k > crate::fapset::MAX_FAPS {
            return Err(invalid(format!("K = {} exceeds {}", self.k, crate::fapset::MAX_FAPS)));
        }
        if self.n < self.k {
            return Err(invalid(format!("N = {} must be at least K = {}", self.n, self.k)));
        }
        if !self.m.is_finite() || self.m <= 0.0 || self.m >= self.n as f64 {
            return Err(invalid(format!("M = {} must satisfy 0 < M < N = {}", self.m, self.n)));
        }
        if self.f == 0 {
            return Err(invalid("F must be at least 1 bit"));
        }
        if self.b < 2 {
            return Err(invalid(format!("B = {} must be at least 2", self.b)));
        }
        if self.delta_b == 0 || self.delta_b > self.b {
            return Err(invalid(format!(
                "delta_b = {} must satisfy 1 <= delta_b <= B = {}",
                self.delta_b, self.b
            )));
        }
        Ok(())
    }

    pub fn slot_duration(&self) -> f64 {
        self.t / self.b as f64
    }

    /// `M / N`, the fraction of every file each F-AP caches.
    pub fn cache_fraction(&self) -> f64 {
        self.m / self.n as f64
    }

    /// `M F / N` in bits before rounding.
    pub fn exact_cached_bits(&self) -> f64 {
        self.m * self.f as f64 / self.n as f64
    }

    /// `round(M F / N)`: how many bits of every file each F-AP stores.
    pub fn cached_bits_per_file(&self) -> usize {
        (self.exact_cached_bits().round() as usize).min(self.f)
    }

    /// `|round(MF/N) - MF/N| / F`.
    pub fn rounding_error(&self) -> f64 {
        (self.cached_bits_per_file() as f64 - self.exact_cached_bits()).abs() / self.f as f64
    }

    /// Rejects configurations whose per-file cache allotment is not
    /// (numerically) an integer number of bits.
    pub fn ensure_integral_cache(&self, tol: f64) -> Result<()> {
        if self.rounding_error() > tol {
            return Err(invalid(format!(
                "M F / N = {} is not integral (relative rounding error {:.3e} > {tol:e})",
                self.exact_cached_bits(),
                self.rounding_error()
            )));
        }
        Ok(())
    }

    /// `true` when the synchronous transmission method applies.
    pub fn is_synchronous(&self) -> bool {
        self.delta_b == self.b
    }
}
