use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_irs-throughput"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn single_link_prints_rates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = bin(&["single", "--l", "100", "--d", "10", "--N", "2000", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    for key in ["C_d =", "C_ir =", "kappa =", "D ="] {
        assert!(text.contains(key), "{text}");
    }
    let csv = fs::read_to_string(dir.path().join("single.csv")).unwrap();
    assert!(csv.starts_with("l,d,r,n,g_d,g_i,g_r,kappa,kappa_approx,coverage_range,c_d,c_ir\n"));
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn config_errors_name_key_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "alpha = 2.2\n# comment\nwidth = 3\n").unwrap();
    let o = bin(&["single", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("run.cfg:3") && err.contains("`width`") && err.contains("unknown key"), "{err}");

    let o = bin(&["single", "--alpha", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`alpha`"));
}

#[test]
fn flags_override_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "alpha = 2.2\nseed = 5\n").unwrap();
    let o = bin(&["single", "--config", cfg.to_str().unwrap(), "--alpha", "3", "--print-config"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("alpha = 3\n") && text.contains("seed = 5\n"), "{text}");
}

#[test]
fn unwritable_output_is_an_io_failure() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let o = bin(&["single", "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
}

fn fig3_csv(out: &Path, seed: &str) -> Vec<u8> {
    let o = bin(&[
        "fig3", "--seed", seed, "--topologies", "3", "--fading", "4", "--K", "60",
        "--q-total", "500", "--fig3-m-values", "1,5,50", "--alphas", "2.5",
        "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    fs::read(out.join("fig3.csv")).unwrap()
}

#[test]
fn same_seed_gives_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let a = fig3_csv(&dir.path().join("a"), "9");
    let b = fig3_csv(&dir.path().join("b"), "9");
    let c = fig3_csv(&dir.path().join("c"), "10");
    assert_eq!(a, b);
    assert_ne!(a, c);
    let header = String::from_utf8(a).unwrap();
    assert!(header.starts_with("alpha,m,n,coverage_m,mean_rate,standard_error,jain,jain_standard_error\n"));
}

#[test]
fn validate_miss_has_distinct_exit_code() {
    // one topology with one fading draw cannot reach the 5% system tolerance
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&[
        "validate", "--topologies", "1", "--fading", "1", "--K", "3", "--m-values", "25",
        "--grid-step", "120", "--out", dir.path().to_str().unwrap(),
    ]);
    let code = o.status.code();
    let text = stdout(&o);
    assert!(text.contains("PASS moments"), "{text}");
    assert_eq!(code, Some(3), "{text}");
    assert!(text.contains("FAIL spatial_throughput"), "{text}");
    assert!(dir.path().join("validate.csv").exists());
}
