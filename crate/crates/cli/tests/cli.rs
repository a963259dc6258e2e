use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cacheroute(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cacheroute"))
        .args(args)
        .env("CACHEROUTE_OUT_DIR", out)
        .output()
        .expect("binary runs")
}

fn csvs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn same_seed_gives_byte_identical_csvs() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["run", "--preset", "paper-centralized", "--cache-size", "100", "--seed", "42", "--arrivals", "50000"];
    assert!(cacheroute(&args, a.path()).status.success());
    assert!(cacheroute(&args, b.path()).status.success());
    let (x, y) = (csvs(a.path()), csvs(b.path()));
    let names: Vec<_> = x.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(
        names,
        [
            "paper-centralized-lru.csv",
            "paper-centralized-optimal.csv",
            "paper-centralized-optimized-caching.csv",
            "paper-centralized-optimized-routing.csv"
        ]
    );
    assert_eq!(x, y);
    let text = String::from_utf8(x[0].1.clone()).unwrap();
    assert!(text.starts_with("window_end_arrivals,mean_delay,hit_rate,miss_rate,deflect_rate,uncached_rate\n"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn different_seeds_differ() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let run = |seed: &str, dir: &Path| {
        cacheroute(&["run", "--preset", "paper-dcr", "--seed", seed, "--arrivals", "20000"], dir);
        csvs(dir)
    };
    assert_ne!(run("1", a.path()), run("2", b.path()));
}

#[test]
fn scenario_file_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("s.toml");
    fs::write(&scenario, "name = \"tiny\"\nseed = 5\narrivals = 3000\nwindow = 1000\n[catalog]\nfiles = 50\n[policy]\nkind = \"lru\"\ncache_size = 5\n").unwrap();
    let out = dir.path().join("out");
    let args = ["run", scenario.to_str().unwrap(), "--override", "policy.kind=dcr", "--out", out.to_str().unwrap()];
    let result = cacheroute(&args, dir.path());
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let files = csvs(&out);
    assert_eq!(files.len(), 1);
    assert_eq!(files[0].0, "tiny-dcr.csv");
}

#[test]
fn config_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("bad.toml");
    fs::write(&scenario, "seed = 1\nunknown_key = 3\n").unwrap();
    assert_eq!(cacheroute(&["run", scenario.to_str().unwrap()], dir.path()).status.code(), Some(2));
    assert_eq!(cacheroute(&["run", "--preset", "missing"], dir.path()).status.code(), Some(2));
    assert_eq!(cacheroute(&["run", "--preset", "paper-dcr", "--override", "policy.bogus=1"], dir.path()).status.code(), Some(2));
    assert_eq!(cacheroute(&["sweep", "--preset", "paper-dcr", "--dimension", "mu", "--range", "1:2:1"], dir.path()).status.code(), Some(2));
}

#[test]
fn unstable_queue_exits_with_3() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "run", "--preset", "paper-two-lru", "--arrivals", "100000",
        "--override", "policy.id_cache_size=5", "--override", "path.service_rate=0.1",
    ];
    let out = cacheroute(&args, dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unstable"));
}

#[test]
fn alpha_sweep_has_model_and_simulation_columns() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "--preset", "paper-two-lru", "--dimension", "alpha", "--range", "0:1:0.1", "--arrivals", "20000", "--replications", "1"];
    assert!(cacheroute(&args, dir.path()).status.success());
    let text = fs::read_to_string(dir.path().join("paper-two-lru-sweep-alpha.csv")).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "alpha,sim_hit,sim_miss,sim_deflect,model_hit,model_miss,model_deflect");
    assert_eq!(lines.len(), 12);
}

#[test]
fn id_cache_sweep_reports_static_reference() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sweep", "--preset", "paper-two-lru", "--dimension", "id_cache_size", "--range", "100,400", "--arrivals", "20000", "--replications", "2"];
    let out = cacheroute(&args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("paper-two-lru-sweep-id_cache_size.csv")).unwrap();
    assert!(text.starts_with("id_cache_size,model_mean_delay,sim_mean_delay,sim_std_error,static_optimal_delay\n"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn presets_are_listed() {
    let dir = tempfile::tempdir().unwrap();
    let out = cacheroute(&["presets", "list"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["paper-centralized", "paper-dcr", "paper-two-lru"] {
        assert!(text.contains(name));
    }
    let show = cacheroute(&["presets", "show", "paper-two-lru"], dir.path());
    assert!(String::from_utf8(show.stdout).unwrap().contains("model = \"mm1\""));
}

#[test]
fn validate_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = cacheroute(&["validate"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert_eq!(text.lines().filter(|l| l.ends_with("PASS")).count(), 5);
}
