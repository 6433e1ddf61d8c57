use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resample"))
        .args(args)
        .env_remove("RESAMPLE_SEED")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["shuffle-test", "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn domain_errors_exit_1() {
    let o = run(&["bootstrap", "--fixture", "nope"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nope"));
    let o = run(&["bootstrap", "--csv", "/definitely/missing.csv"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["clip", "--estimate", "1", "--p", "0.2", "--null", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn manifest_is_in_every_report() {
    let o = run(&["bootstrap", "--fixture", "veg9", "--n", "200", "--seed", "4"]);
    let text = stdout(&o);
    for needle in [
        "subcommand",
        "bootstrap",
        "seed",
        "4",
        "replicates",
        "200",
        "fixture:veg9",
    ] {
        assert!(text.contains(needle), "{needle} missing from\n{text}");
    }
}

#[test]
fn csv_format_has_key_values_and_histogram() {
    let text = stdout(&run(&[
        "shuffle-test",
        "--fixture",
        "veg6",
        "--n",
        "500",
        "--format",
        "csv",
    ]));
    assert!(text.starts_with("key,value\n"));
    assert!(text.contains("\nmanifest.seed,0\n"));
    assert!(text.contains("\np value (probability of data this extreme under the baseline hypothesis),"));
    assert!(text.contains("\nbin_center,count\n"));
}

#[test]
fn out_writes_histogram_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hist.csv");
    let o = run(&["bootstrap", "--fixture", "veg9", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let hist = std::fs::read_to_string(&path).unwrap();
    assert!(hist.starts_with("bin_center,count\n"));
    let total: u64 = hist
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap())
        .sum();
    assert_eq!(total, 1000);
    assert!(!stdout(&o).contains("bootstrap distribution --"));
}

#[test]
fn seed_from_environment_and_flag_wins() {
    let with_env = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_resample"))
            .args(args)
            .env("RESAMPLE_SEED", "42")
            .output()
            .unwrap()
    };
    let env = stdout(&with_env(&[
        "poll",
        "--fixture",
        "poll500",
        "--k",
        "20",
        "--format",
        "csv",
    ]));
    assert!(env.contains("\nmanifest.seed,42\n"));
    let flag = stdout(&with_env(&[
        "poll",
        "--fixture",
        "poll500",
        "--k",
        "20",
        "--seed",
        "3",
        "--format",
        "csv",
    ]));
    assert!(flag.contains("\nmanifest.seed,3\n"));
}

#[test]
fn csv_input_is_hashed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scores.csv");
    std::fs::write(&path, "score,diet\n74,veg\n65,veg\n69,omni\n37,omni\n57,veg\n26,omni\n").unwrap();
    let p = path.to_str().unwrap();
    let o = run(&[
        "shuffle-test",
        "--csv",
        p,
        "--value",
        "score",
        "--group",
        "diet",
        "--exact",
    ]);
    let text = stdout(&o);
    assert!(text.contains("sha256:"), "{text}");
    assert!(text.contains("6/20 = 0.3"));
}

#[test]
fn correlation_from_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pairs.csv");
    std::fs::write(&path, "x,y\n1,2\n2,4\n3,5\n4,8\n5,9\n6,13\n").unwrap();
    let p = path.to_str().unwrap();
    let o = run(&[
        "shuffle-test",
        "--csv",
        p,
        "--x",
        "x",
        "--y",
        "y",
        "--stat",
        "correlation",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("observed correlation"));
}

#[test]
fn asymmetry_warning_goes_to_stderr() {
    let o = run(&["clip", "--ci", "0.79,0.99", "--estimate", "0.83"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("asymmetric"));
    let o = run(&["clip", "--ci", "0.79,0.99", "--estimate", "0.88"]);
    assert!(o.stderr.is_empty());
}

#[test]
fn ratios_from_table() {
    let text = stdout(&run(&[
        "clip",
        "--ci",
        "0.79,0.99",
        "--table",
        "4,6,8,2",
        "--format",
        "csv",
    ]));
    assert!(text.contains("\nodds ratio,0.16666666666666666\n"));
    assert!(text.contains("\nrisk ratio,0.5\n"));
}

#[test]
fn reports_avoid_the_word_significant() {
    let commands: [&[&str]; 4] = [
        &["shuffle-test", "--fixture", "veg6"],
        &["bootstrap", "--fixture", "skewed9", "--bounds", "0,100", "--tail", "50"],
        &["clip", "--estimate", "10", "--p", "0.02"],
        &["montecarlo", "--trials", "3", "--event", "exactly 2"],
    ];
    for args in commands {
        let o = run(args);
        let all = format!("{}{}", stdout(&o), String::from_utf8_lossy(&o.stderr)).to_lowercase();
        assert!(!all.contains("significan"), "{args:?}");
    }
}

#[test]
fn fixtures_listing_and_show() {
    let list = stdout(&run(&["fixtures"]));
    for name in ["veg9", "skewed9", "veg6", "poll500"] {
        assert!(list.contains(name));
    }
    let veg6 = stdout(&run(&["fixtures", "--show", "veg6"]));
    assert_eq!(veg6.lines().count(), 7);
    let poll = stdout(&run(&["fixtures", "--show", "poll500"]));
    assert_eq!(poll.lines().filter(|l| *l == "1").count(), 300);
}

#[test]
fn bayes_sequential_update() {
    let text = stdout(&run(&[
        "bayes",
        "--hypothesis",
        "guessing:3/4:1/50",
        "--hypothesis",
        "telepathy:1/4:1",
        "--update",
        "1/50,1",
    ]));
    assert!(text.contains("50/53"));
    assert!(text.contains("2500/2503"));
}
