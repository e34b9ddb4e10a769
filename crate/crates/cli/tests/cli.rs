use std::fs;
use std::process::{Command, Output};

fn fogcache(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fogcache"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn column(header: &str, name: &str) -> usize {
    header.split(',').position(|c| c == name).unwrap()
}

#[test]
fn sweeps_are_byte_identical_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for path in &paths {
        let out = fogcache(&[
            "sweep", "--k", "8", "--mode", "analytic", "--trials", "5", "--seed", "9", "--sweep", "m", "--values",
            "4,8,12", "--delta-b", "1,3", "--out", path.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = fs::read(&paths[0]).unwrap();
    assert_eq!(a, fs::read(&paths[1]).unwrap());
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(!text.contains('\r'));
}

#[test]
fn rows_respect_the_bounds() {
    let out = fogcache(&["sweep", "--k", "8", "--mode", "analytic", "--trials", "8", "--sweep", "deltab", "--values", "1,2,3,4,5"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    let (m, lo, hi) = (column(header, "measured_load"), column(header, "lower_bound"), column(header, "upper_bound"));
    let mut last = f64::INFINITY;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let [load, lower, upper] = [m, lo, hi].map(|i| cells[i].parse::<f64>().unwrap());
        assert!(lower <= load * (1.0 + 1e-9) && load <= upper * (1.0 + 1e-9), "{line}");
        assert!(load <= last);
        last = load;
    }
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# example system\nk=4\nn=4\nm=2\nb=4\nl=1\ndelta-b=2\nmode=analytic\ntrials=1\n").unwrap();
    let out = fogcache(&["simulate", "--config", cfg.to_str().unwrap(), "--delta-b", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    assert!(row.starts_with("4,4,2.0,10000,4,3,1,analytic,1,1,1.1875,1.1875,"), "{row}");
}

#[test]
fn invalid_fixed_l_is_reported() {
    let out = fogcache(&["simulate", "--k", "7", "--b", "5", "--l", "2"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("invalid parameters") && err.contains("K = B L"), "{err}");
    let out = fogcache(&["simulate", "--l", "1", "--random"]);
    assert!(!out.status.success());
}

#[test]
fn failing_sweep_cells_keep_the_run_going() {
    let out = fogcache(&["sweep", "--mode", "analytic", "--trials", "2", "--sweep", "m", "--values", "5,20,15"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].ends_with(','));
    assert!(rows[1].contains("invalid parameters"));
    assert!(rows[2].ends_with(','));
}

#[test]
fn verify_exit_codes() {
    let ok = fogcache(&["verify", "--k", "4", "--seeds", "1", "--f", "400"]);
    assert!(ok.status.success(), "{}", stdout(&ok));
    assert!(stdout(&ok).contains("all checks passed"));
    let broken = fogcache(&["verify", "--k", "4", "--seeds", "1", "--f", "400", "--fault", "invert-skip"]);
    assert_eq!(broken.status.code(), Some(1));
    assert!(stdout(&broken).contains("FAIL     decodability K=4"));
    let big = fogcache(&["verify", "--k", "25", "--seeds", "1", "--f", "64"]);
    assert!(big.status.success());
    assert!(stdout(&big).contains("SKIPPED  oracle K=25"));
}

#[test]
fn tables_and_plotmap() {
    let out = fogcache(&["tables"]);
    assert!(out.status.success());
    assert!(stdout(&out).ends_with("total transmissions: 23\n"));
    let tsv = stdout(&fogcache(&["tables", "--format", "tsv"]));
    assert_eq!(tsv.lines().count(), 23);
    let plot = stdout(&fogcache(&["plotmap", "out.csv"]));
    assert!(plot.contains("'out.csv' using 7:11"));
}
