use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use densebandit::bench::{read_results, RunRecord};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_densebandit"))
}

fn karate() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/karate.txt")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn without_time(mut records: Vec<RunRecord>) -> Vec<RunRecord> {
    for r in &mut records {
        r.elapsed_ms = 0.0;
    }
    records
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["--version"])), 0);
    assert_eq!(code(&run(&[])), 1);
    assert_eq!(code(&run(&["dssr", "--bogus"])), 1);
}

#[test]
fn missing_inputs_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let out = out.to_str().unwrap();
    assert_eq!(
        code(&run(&["dssr", "--graph", "/no/such/file", "--out", out])),
        1
    );
    assert_eq!(code(&run(&["run", "--config", "/no/such/config"])), 1);
    let g = karate();
    let g = g.to_str().unwrap();
    assert_eq!(
        code(&run(&["dssr", "--graph", g, "--seeds", "", "--out", out])),
        1
    );
    assert_eq!(
        code(&run(&[
            "dslin",
            "--graph",
            g,
            "--stop-mode",
            "eager",
            "--out",
            out
        ])),
        1
    );
}

#[test]
fn runtime_failures_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let g = karate();
    let result = run(&[
        "dssr",
        "--graph",
        g.to_str().unwrap(),
        "--budget",
        "100",
        "--seeds",
        "0,1",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&result), 2);
    let failures = fs::read_to_string(out.join("failures.csv")).unwrap();
    assert_eq!(failures.lines().count(), 3);
    assert!(read_results(&out.join("results.csv")).unwrap().is_empty());
}

#[test]
fn frozen_weights_batch_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let weights = dir.path().join("karate.w");
    let g = karate();
    let g = g.to_str().unwrap();
    let made = run(&[
        "gen-weights",
        "--graph",
        g,
        "--weight-seed",
        "4",
        "--out",
        weights.to_str().unwrap(),
    ]);
    assert_eq!(code(&made), 0, "{}", String::from_utf8_lossy(&made.stderr));
    assert_eq!(fs::read_to_string(&weights).unwrap().lines().count(), 78);

    let out = dir.path().join("dssr");
    let first = run(&[
        "dssr",
        "--graph",
        g,
        "--weights",
        weights.to_str().unwrap(),
        "--seeds",
        "0..4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(
        code(&first),
        0,
        "{}",
        String::from_utf8_lossy(&first.stderr)
    );
    let header = fs::read_to_string(out.join("results.csv")).unwrap();
    assert!(header.starts_with(
        "algo,graph,seed,budget,quality,opt,out_size,total_queries,single_edge_queries,elapsed_ms\n"
    ));
    let records = read_results(&out.join("results.csv")).unwrap();
    assert_eq!(records.len(), 4);

    for r in &records {
        assert!(r.total_queries <= r.budget);
        assert!(r.quality <= r.opt.unwrap() * (1.0 + 1e-9));
        let hist = fs::read_to_string(out.join(format!("hist_dssr_seed{}.csv", r.seed))).unwrap();
        let mut total = 0;
        let mut single = 0;
        for line in hist.lines().skip(1) {
            let (size, count) = line.split_once(',').unwrap();
            let count: u64 = count.parse().unwrap();
            total += count;
            if size == "1" {
                single = count;
            }
        }
        assert_eq!(total, r.total_queries);
        assert_eq!(single, r.single_edge_queries);
        let trace = fs::read_to_string(out.join(format!("trace_dssr_seed{}.csv", r.seed))).unwrap();
        assert_eq!(trace.lines().count(), 34);
    }

    // The saved config uses absolute paths; point it at a fresh directory.
    let saved = fs::read_to_string(out.join("config.txt")).unwrap();
    let replay_out = dir.path().join("replay");
    let replay: String = saved
        .lines()
        .map(|l| {
            if l.starts_with("out=") {
                format!("out={}\n", replay_out.display())
            } else {
                format!("{l}\n")
            }
        })
        .collect();
    let config = dir.path().join("replay.txt");
    fs::write(&config, replay).unwrap();
    let again = run(&["run", "--config", config.to_str().unwrap()]);
    assert_eq!(
        code(&again),
        0,
        "{}",
        String::from_utf8_lossy(&again.stderr)
    );
    let replayed = read_results(&replay_out.join("results.csv")).unwrap();
    assert_eq!(without_time(replayed), without_time(records));

    let report = run(&["report", out.join("results.csv").to_str().unwrap()]);
    assert_eq!(code(&report), 0);
    assert!(String::from_utf8_lossy(&report.stdout).contains("dssr on karate: 4 runs"));
}

#[test]
fn offline_solvers_are_seed_independent() {
    let dir = tempfile::tempdir().unwrap();
    let g = karate();
    for algo in ["g-oracle", "exact"] {
        let out = dir.path().join(algo);
        let result = run(&[
            algo,
            "--graph",
            g.to_str().unwrap(),
            "--seeds",
            "0..3",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code(&result), 0);
        let records = without_time(read_results(&out.join("results.csv")).unwrap());
        assert_eq!(records.len(), 3);
        for r in &records {
            assert_eq!(r.total_queries, 0);
            assert_eq!(
                (r.quality, r.out_size),
                (records[0].quality, records[0].out_size)
            );
        }
    }
    let exact = read_results(&dir.path().join("exact/results.csv")).unwrap();
    assert_eq!(exact[0].quality, exact[0].opt.unwrap());
}

#[test]
fn r_oracle_and_naive_run() {
    let dir = tempfile::tempdir().unwrap();
    let g = karate();
    let out = dir.path().join("ro");
    let ro = run(&[
        "r-oracle",
        "--graph",
        g.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&ro), 0);
    let r = &read_results(&out.join("results.csv")).unwrap()[0];
    assert_eq!(r.total_queries, r.single_edge_queries);
    assert_eq!(r.budget, r.total_queries);

    let literal = run(&[
        "r-oracle",
        "--graph",
        g.to_str().unwrap(),
        "--literal-intervals",
        "--out",
        dir.path().join("lit").to_str().unwrap(),
    ]);
    assert_eq!(code(&literal), 2);

    let out = dir.path().join("naive");
    let naive = run(&[
        "naive",
        "--graph",
        g.to_str().unwrap(),
        "--budget",
        "500",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&naive), 0);
    let r = &read_results(&out.join("results.csv")).unwrap()[0];
    assert!(r.total_queries <= 500);
}
