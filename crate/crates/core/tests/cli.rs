use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mis-ising")).args(args).output().expect("binary runs")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures/coding").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_mis_prints_set() {
    let o = cli(&["solve-mis", &fixture("1tc.16"), "--solver", "min", "--runs", "5", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("# size 8\n"));
}

#[test]
fn every_mis_solver_runs() {
    for s in ["min", "max", "sg3", "sec", "sa", "rank2"] {
        let o = cli(&["solve-mis", &fixture("1tc.8"), "--solver", s, "--runs", "3", "--sweeps", "200"]);
        assert_eq!(o.status.code(), Some(0), "{s}");
        assert!(stdout(&o).starts_with("# size 4\n"), "{s}");
    }
}

#[test]
fn oracle_and_generators() {
    let o = cli(&["oracle", "mis", &fixture("1tc.8")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("# size 4"));

    let dir = tempfile::tempdir().unwrap();
    let sk = dir.path().join("sk.txt");
    let o = cli(&["gen", "sk", "--n", "8", "--seed", "5", "--output", sk.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let exact = stdout(&cli(&["oracle", "maxcut", sk.to_str().unwrap()]));
    let sa = stdout(&cli(&["solve-maxcut", sk.to_str().unwrap(), "--solver", "sa", "--runs", "8", "--sweeps", "2000"]));
    assert_eq!(exact.lines().next(), sa.lines().next());

    let er = dir.path().join("er.dimacs");
    assert_eq!(cli(&["gen", "er", "--n", "30", "--p", "0.2", "--output", er.to_str().unwrap()]).status.code(), Some(0));
    assert!(std::fs::read_to_string(&er).unwrap().starts_with("p edge 30 "));
    assert_eq!(cli(&["gen", "regular", "--n", "9", "--d", "3"]).status.code(), Some(2));
    let coding = stdout(&cli(&["gen", "coding", "--family", "1tc", "--k", "3"]));
    assert!(coding.contains("p edge 8 6"));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    let rows = dir.path().join("rows.csv");
    std::fs::write(
        &config,
        r#"{"experiment": "er-dense", "sizes": [20], "instances_per_point": 2, "solvers": [{"solver": "min"}]}"#,
    )
    .unwrap();
    let o = cli(&["bench", "er-dense", "--config", config.to_str().unwrap(), "--output", rows.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&rows).unwrap();
    assert_eq!(text.lines().count(), 3);
    let o = cli(&["bench", "er-dense", "--config", config.to_str().unwrap(), "--output", rows.to_str().unwrap(), "--store-witness"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&rows).unwrap().starts_with("experiment,point_n,point_d,instance,solver,seed,objective,elapsed_ms,witness\n"));
    assert!(stdout(&o).starts_with("point_n,"));
    let o = cli(&["bench", "sk", "--config", config.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn fixture_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    std::fs::write(&config, r#"{"experiment": "coding", "instances": ["1tc.8"], "solvers": [{"solver": "min"}]}"#).unwrap();
    let run = |fixtures: &str| {
        Command::new(env!("CARGO_BIN_EXE_mis-ising"))
            .args(["bench", "coding", "--config", config.to_str().unwrap()])
            .env("MIS_ISING_FIXTURES", fixtures)
            .output()
            .unwrap()
    };
    assert_eq!(run(dir.path().to_str().unwrap()).status.code(), Some(2));
    let o = run(Path::new(&fixture("1tc.8")).parent().unwrap().to_str().unwrap());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("1tc.8,min,1,4.0"));
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&[]).status.code(), Some(1));
    assert_eq!(cli(&["solve-mis", "x", "--solver", "dec"]).status.code(), Some(1));
    assert_eq!(cli(&["solve-mis", "/no/such/file", "--solver", "min"]).status.code(), Some(2));
    assert_eq!(cli(&["oracle", "mis", &fixture("1dc.128")]).status.code(), Some(1));
    assert_eq!(cli(&["--help"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.dimacs");
    std::fs::write(&bad, "p edge 3 1\ne 1 9\n").unwrap();
    assert_eq!(cli(&["solve-mis", bad.to_str().unwrap(), "--solver", "min"]).status.code(), Some(2));
}
