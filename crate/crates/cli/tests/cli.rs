use std::path::Path;
use std::process::{Command, Output};

fn planartest(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_planartest"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

#[test]
fn usage_errors_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path();
    assert_eq!(planartest(&["family-build", "--s", "4"], out).status.code(), Some(2));
    assert_eq!(
        planartest(&["distinguish-sweep", "--s", "4", "--max-members", "0"], out).status.code(),
        Some(2)
    );
    assert_eq!(planartest(&["test-run", "--family", "missing"], out).status.code(), Some(2));
    assert_eq!(planartest(&["decompose-demo", "--eps", "0"], out).status.code(), Some(2));
    assert_eq!(planartest(&["no-such-command"], out).status.code(), Some(2));
}

#[test]
fn family_build_radius_two_has_twelve_members() {
    let tmp = tempfile::tempdir().unwrap();
    let o = planartest(&["family-build", "--s", "4", "--gadgetless", "--radius", "2"], tmp.path());
    assert_eq!(o.status.code(), Some(0));
    let rows = std::fs::read_to_string(tmp.path().join("family_build.csv")).unwrap();
    assert!(rows.lines().count() - 1 >= 12);
    assert!(tmp.path().join("manifest.json").exists());
}

#[test]
fn output_directory_comes_from_the_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_planartest"))
        .args(["tree-family", "--s", "6"])
        .env("PLANARTEST_OUT", tmp.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let sidecar: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("tree_family.json")).unwrap()).unwrap();
    assert_eq!(sidecar["seed"], 0);
    assert_eq!(sidecar["summary"]["unrooted"], 4);
}

#[test]
fn fixed_two_samples_match_the_closed_form() {
    let tmp = tempfile::tempdir().unwrap();
    let o = planartest(
        &["distinguish-sweep", "--qfixed", "2", "--trials", "1000", "--s", "3,4", "--assert"],
        tmp.path(),
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn decompose_assertions_pass_on_paths_and_trees() {
    let tmp = tempfile::tempdir().unwrap();
    for args in [
        vec!["decompose-demo", "--graph", "path", "--n", "1000", "--assert"],
        vec!["decompose-demo", "--graph", "path", "--n", "1000", "--eps", "1", "--assert"],
        vec!["decompose-demo", "--trials", "2", "--mode", "treewidth", "--assert"],
        vec!["decompose-demo", "--graph", "grid", "--n", "400", "--d", "4", "--tau", "20", "--eps", "0.5", "--assert"],
    ] {
        let o = planartest(&args, tmp.path());
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let text = std::fs::read_to_string(tmp.path().join("partition.txt")).unwrap();
    assert!(text.contains("# cut_edges"));
}

#[test]
fn failed_assertions_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let family = tmp.path().join("family");
    assert_eq!(planartest(&["family-build", "--s", "4", "--gadgetless"], &family).status.code(), Some(0));
    let o = planartest(
        &["verify-suitable", "--family", family.to_str().unwrap(), "--skip-distances", "--assert"],
        &tmp.path().join("verify"),
    );
    // members with a 3-vertex balanced separator miss the eps * t = 4 floor
    assert_eq!(o.status.code(), Some(1));
}
