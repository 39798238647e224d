use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn egorec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_egorec"))
        .args(args)
        .output()
        .expect("spawn egorec")
}

fn synth(dir: &Path, alpha: &str, seed: &str) -> (PathBuf, PathBuf) {
    let social = dir.join("social.tsv");
    let likes = dir.join("likes.tsv");
    let out = egorec(&[
        "synth",
        "--cores",
        "40",
        "--fringe",
        "460",
        "--items",
        "800",
        "--likes-per-user",
        "15",
        "--friends",
        "15",
        "--alpha",
        alpha,
        "--seed",
        seed,
        "--social",
        social.to_str().unwrap(),
        "--likes",
        likes.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    (social, likes)
}

fn report(args: &[&str], social: &Path, likes: &Path) -> String {
    let mut full: Vec<&str> = args.to_vec();
    full.extend([
        "--social",
        social.to_str().unwrap(),
        "--likes",
        likes.to_str().unwrap(),
    ]);
    let out = egorec(&full);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn synth_files_follow_the_input_format() {
    let dir = tempfile::tempdir().unwrap();
    let (social, likes) = synth(dir.path(), "0.5", "2");
    let text = std::fs::read_to_string(&social).unwrap();
    assert!(text.lines().all(|l| l.split('\t').count() == 2));
    let (d, _) = egorec::dataset::load_dataset(&social, &likes).unwrap();
    assert_eq!(d.core_users().len(), 40);
    assert_eq!(d.n_users(), 500);
}

#[test]
fn evaluate_twice_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (s, l) = synth(dir.path(), "0.8", "7");
    let args = ["evaluate", "--k", "50", "--splits", "10", "--seed", "7"];
    assert_eq!(report(&args, &s, &l), report(&args, &s, &l));
}

#[test]
fn high_locality_friends_beat_non_friends_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let (s, l) = synth(dir.path(), "0.8", "1");
    let out = report(
        &["evaluate", "--k", "20", "--pool", "friends,non-friends"],
        &s,
        &l,
    );
    let agg: Vec<f64> = out
        .lines()
        .filter(|l| l.contains(",aggregate,"))
        .map(|l| l.split(',').nth(5).unwrap().parse().unwrap())
        .collect();
    assert_eq!(agg.len(), 2);
    assert!(agg[0] > agg[1], "{out}");
}

#[test]
fn locality_report_names_every_metric() {
    let dir = tempfile::tempdir().unwrap();
    let (s, l) = synth(dir.path(), "0.4", "3");
    let out = report(
        &[
            "locality",
            "--null",
            "degree-preserving",
            "--replicates",
            "10",
        ],
        &s,
        &l,
    );
    assert!(out.starts_with("metric,null_model,replicate,value\n"));
    for metric in [
        "friends_similarity",
        "random_similarity",
        "ego_sparsity_pct",
        "network_sparsity_pct",
        "uncovered_ego_pct",
        "random_item_ego",
        "random_friend_ego",
    ] {
        assert!(
            out.lines().any(|l| l.starts_with(&format!("{metric},"))),
            "{metric}"
        );
    }
    let replicate_rows = out
        .lines()
        .filter(|l| l.starts_with("random_item_ego,degree-preserving,"))
        .count();
    assert_eq!(replicate_rows, 11);
}

#[test]
fn similarity_and_table_format() {
    let dir = tempfile::tempdir().unwrap();
    let (s, l) = synth(dir.path(), "0.4", "3");
    let out = report(&["similarity", "--k", "5,10", "--format", "table"], &s, &l);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("measure"));
    assert!(lines.next().unwrap().starts_with("-------"));
    assert_eq!(
        out.lines()
            .filter(|l| l.starts_with("topk_similarity"))
            .count(),
        4
    );
}

#[test]
fn out_flag_and_timestamp() {
    let dir = tempfile::tempdir().unwrap();
    let (s, l) = synth(dir.path(), "0.4", "3");
    let out_path = dir.path().join("stats.csv");
    let stdout = report(
        &["stats", "--timestamp", "--out", out_path.to_str().unwrap()],
        &s,
        &l,
    );
    assert!(stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("# generated-at "));
    assert!(text.lines().nth(1).unwrap() == "statistic,value");
}

#[test]
fn errors_exit_nonzero_with_diagnostics() {
    let out = egorec(&["evaluate", "--pool", "enemies"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("enemies"));

    let out = egorec(&[
        "stats",
        "--social",
        "/nonexistent/s.tsv",
        "--likes",
        "/nonexistent/l.tsv",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/s.tsv"));

    let dir = tempfile::tempdir().unwrap();
    let social = dir.path().join("s.tsv");
    let likes = dir.path().join("l.tsv");
    std::fs::write(&social, "a\tb\nbroken line here\n").unwrap();
    std::fs::write(&likes, "a\tX\n").unwrap();
    let out = egorec(&[
        "stats",
        "--social",
        social.to_str().unwrap(),
        "--likes",
        likes.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("s.tsv:2:"));

    let out = egorec(&[
        "evaluate",
        "--ratio",
        "1.5",
        "--social",
        social.to_str().unwrap(),
        "--likes",
        likes.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
}

#[test]
fn inputs_are_not_modified() {
    let dir = tempfile::tempdir().unwrap();
    let (s, l) = synth(dir.path(), "0.4", "5");
    let before = (std::fs::read(&s).unwrap(), std::fs::read(&l).unwrap());
    report(&["locality", "--replicates", "2"], &s, &l);
    report(&["evaluate", "--k", "10", "--splits", "2"], &s, &l);
    assert_eq!(
        before,
        (std::fs::read(&s).unwrap(), std::fs::read(&l).unwrap())
    );
}
