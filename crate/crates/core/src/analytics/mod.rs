//! Closed-form fronthaul loads and the bounds for general schedules.
//!
//! All loads are normalized by `F`.

mod counting;
mod oracle;

pub use counting::{
    b_count, binom, c_count, q1_count, q2_count, q_count, q_count_as_published, q_total, q_triples, y_range,
    CountTriple,
};
pub use oracle::{brute_force_histogram, brute_force_q_total, EtaHistogram, MAX_BRUTE_FORCE_FAPS};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;
use crate::system::{RequestSchedule, SystemParams};

/// A system whose schedule has `|U_b| = L` in every slot.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedLConfig {
    pub k: usize,
    pub n: usize,
    pub m: f64,
    pub f: usize,
    pub b: usize,
    pub l: usize,
    pub delta_b: usize,
}

impl FixedLConfig {
    pub fn new(k: usize, n: usize, m: f64, f: usize, b: usize, l: usize, delta_b: usize) -> Result<Self> {
        let config = FixedLConfig {
            k,
            n,
            m,
            f,
            b,
            l,
            delta_b,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l == 0 || self.b.checked_mul(self.l) != Some(self.k) {
            return Err(invalid(format!(
                "fixed-L systems need K = B L, got K = {}, B = {}, L = {}",
                self.k, self.b, self.l
            )));
        }
        self.params().map(|_| ())
    }

    pub fn with_delta_b(&self, delta_b: usize) -> Result<Self> {
        let mut c = self.clone();
        c.delta_b = delta_b;
        c.validate()?;
        Ok(c)
    }

    pub fn params(&self) -> Result<SystemParams> {
        SystemParams::new(self.k, self.n, self.m, self.f, self.b, self.delta_b)
    }

    /// `U_b = {(b-1)L+1, ..., bL}` with `d_k = k`.
    pub fn schedule(&self) -> Result<RequestSchedule> {
        RequestSchedule::fixed_l(self.k, self.b, self.l, None)
    }
}

fn fraction<T: Scalar>(m: f64, n: usize) -> T {
    T::from_real(m) / T::from_usize(n)
}

/// `sum_s Q(s, delta_b) (M/N)^(s-1) (1 - M/N)^(K-s+1)`.
pub fn closed_form_load<T: Scalar>(config: &FixedLConfig) -> Result<T> {
    config.validate()?;
    let p: T = fraction(config.m, config.n);
    let rest = T::one() - p.clone();
    let k = config.k;
    Ok((1..=k).fold(T::zero(), |acc, s| {
        let size = p.powu(s - 1) * rest.powu(k - s + 1);
        acc + T::from_count(&q_total(s, config)) * size
    }))
}

/// Decentralized synchronous coded caching: `(1 - M/N) (N/M) (1 - (1 - M/N)^K)`.
pub fn mn_sync_load<T: Scalar>(m: f64, n: usize, k: usize) -> T {
    let p: T = fraction(m, n);
    let rest = T::one() - p.clone();
    rest.clone() / p * (T::one() - rest.powu(k))
}

/// Uncoded delivery: `K (1 - M/N)`.
pub fn uncoded_load<T: Scalar>(m: f64, n: usize, k: usize) -> T {
    T::from_usize(k) * (T::one() - fraction::<T>(m, n))
}

/// Lower and upper bounds on the load for any schedule:
/// `R_S <= R <= K (1 - M/N) min{ceil(B/delta_b) R_S / (K (1 - M/N)), 1}`.
pub fn load_bounds<T: Scalar>(m: f64, n: usize, k: usize, b: usize, delta_b: usize) -> (T, T) {
    let lower: T = mn_sync_load(m, n, k);
    let uncoded: T = uncoded_load(m, n, k);
    let scaled = T::from_usize(b.div_ceil(delta_b)) * lower.clone();
    let upper = scaled.min_of(uncoded);
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::relative_gap;
    use num_rational::BigRational;

    fn example(delta_b: usize) -> FixedLConfig {
        FixedLConfig::new(4, 4, 2.0, 1 << 20, 4, 1, delta_b).unwrap()
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn example_ladder() {
        let got: Vec<f64> = (1..=4).map(|db| closed_form_load(&example(db)).unwrap()).collect();
        assert_eq!(got, [2.0, 1.4375, 1.1875, 0.9375]);
        let exact: Vec<BigRational> = (1..=4).map(|db| closed_form_load(&example(db)).unwrap()).collect();
        assert_eq!(exact, [ratio(2, 1), ratio(23, 16), ratio(19, 16), ratio(15, 16)]);
        let single: f32 = closed_form_load(&example(2)).unwrap();
        assert_eq!(single, 1.4375);
    }

    #[test]
    fn reference_loads() {
        assert_eq!(mn_sync_load::<f64>(2.0, 4, 4), 0.9375);
        assert_eq!(uncoded_load::<f64>(2.0, 4, 4), 2.0);
        assert_eq!(load_bounds::<f64>(2.0, 4, 4, 4, 2), (0.9375, 1.875));
        assert_eq!(load_bounds::<f64>(2.0, 4, 4, 4, 1), (0.9375, 2.0));
        assert!((mn_sync_load::<f64>(1.0, 4, 1) - 0.75).abs() < 1e-15);
        assert!(mn_sync_load::<f64>(3.999_999, 4, 4) < 1e-6);
        assert_eq!(uncoded_load::<f64>(1.0, 4, 1), 0.75);
    }

    // Frozen from exhaustive enumeration of the 63 encoding sets, p = 1/4.
    #[test]
    fn six_faps_exact_loads() {
        let c = FixedLConfig::new(6, 8, 2.0, 1000, 3, 2, 1).unwrap();
        let want = [ratio(63, 16), ratio(12453, 4096), ratio(10101, 4096)];
        for (db, w) in (1..=3).zip(want) {
            let got: BigRational = closed_form_load(&c.with_delta_b(db).unwrap()).unwrap();
            assert_eq!(got, w, "delta_b = {db}");
        }
        let rs: BigRational = mn_sync_load(2.0, 8, 6);
        assert_eq!(rs, ratio(10101, 4096));
    }

    #[test]
    fn synchronous_equality_and_sandwich() {
        for b in 3..=5 {
            for l in 1..=2 {
                let k = b * l;
                for frac in [0.25, 0.5, 0.75] {
                    let n = 2 * k;
                    let m = frac * n as f64;
                    let base = FixedLConfig::new(k, n, m, 1000, b, l, b).unwrap();
                    let sync: f64 = closed_form_load(&base).unwrap();
                    assert!(relative_gap(sync, mn_sync_load(m, n, k)) < 1e-12);
                    let mut last = f64::INFINITY;
                    for db in 1..=b {
                        let c = base.with_delta_b(db).unwrap();
                        let load: f64 = closed_form_load(&c).unwrap();
                        let (lo, hi) = load_bounds::<f64>(m, n, k, b, db);
                        assert!(lo <= load * (1.0 + 1e-12) && load <= hi * (1.0 + 1e-12));
                        let r = load / lo;
                        assert!(r >= 1.0 - 1e-12 && r <= b.div_ceil(db) as f64 + 1e-12);
                        assert!(load <= last * (1.0 + 1e-12));
                        last = load;
                    }
                }
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(FixedLConfig::new(5, 5, 1.0, 10, 2, 2, 1).is_err());
        assert!(FixedLConfig::new(4, 3, 1.0, 10, 2, 2, 1).is_err());
        assert!(FixedLConfig::new(4, 4, 1.0, 10, 2, 2, 3).is_err());
        assert!(FixedLConfig::new(4, 4, 4.0, 10, 2, 2, 1).is_err());
        let c = FixedLConfig::new(4, 4, 1.0, 10, 2, 2, 1).unwrap();
        assert_eq!(c.schedule().unwrap().uniform_slot_size(), Some(2));
        assert_eq!(c.params().unwrap().delta_b, 1);
    }
}
