use fogcache::analytics::{binom, brute_force_histogram, q_count, q_count_as_published, q_total, y_range};
use fogcache::{FixedLConfig, RequestSchedule};
use num_bigint::BigUint;

fn fixed_l_grid(max_k: usize) -> impl Iterator<Item = (usize, usize)> {
    (2..=max_k).flat_map(move |b| (1..=max_k / b).map(move |l| (b, l)))
}

#[test]
fn counts_match_enumeration_up_to_ten_faps() {
    for (b, l) in fixed_l_grid(10) {
        let k = b * l;
        let schedule = RequestSchedule::fixed_l(k, b, l, None).unwrap();
        for db in 1..=b {
            let config = FixedLConfig::new(k, k, 1.0, 100, b, l, db).unwrap();
            let hist = brute_force_histogram(&schedule, db).unwrap();
            for s in 1..=k {
                assert_eq!(q_total(s, &config), hist.total(s), "K={k} B={b} db={db} s={s}");
                for y in 1..=s {
                    let want = BigUint::from(hist.q(s, y));
                    assert_eq!(q_count(s, y, &config), want, "K={k} B={b} db={db} s={s} Y={y}");
                    if hist.q(s, y) > 0 {
                        assert!(y_range(s, &config).contains(&y));
                    }
                }
                let sum: BigUint = y_range(s, &config).map(|y| q_count(s, y, &config)).sum();
                assert_eq!(sum, binom(k as i64, s as i64));
            }
        }
    }
}

#[test]
fn counts_do_not_depend_on_which_faps_share_a_slot() {
    for seed in 0..5 {
        let canonical = RequestSchedule::fixed_l(8, 4, 2, None).unwrap();
        let shuffled = RequestSchedule::fixed_l(8, 4, 2, Some(seed)).unwrap();
        for db in 1..=4 {
            let a = brute_force_histogram(&canonical, db).unwrap();
            let b = brute_force_histogram(&shuffled, db).unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn published_piecewise_form_disagrees_somewhere() {
    let mut mismatches = Vec::new();
    for (b, l) in fixed_l_grid(8) {
        let k = b * l;
        for db in 1..=b {
            let config = FixedLConfig::new(k, k, 1.0, 100, b, l, db).unwrap();
            for s in 1..=k {
                for y in y_range(s, &config) {
                    if q_count_as_published(s, y, &config) != q_count(s, y, &config) {
                        mismatches.push((k, b, l, db, s, y));
                    }
                }
            }
        }
    }
    assert!(mismatches.contains(&(4, 4, 1, 2, 3, 2)));
    // every Delta_b = 1 and Delta_b = B entry agrees
    assert!(mismatches.iter().all(|&(_, b, _, db, _, _)| db > 1 && db < b));
}
