use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const TRI: &str = r#"{"nodes":["p","c","s"],"flags":[{"id":"pc","dom":"p","cod":"c"},{"id":"cs","dom":"c","cod":"s"},{"id":"ps","dom":"p","cod":"s"}],"comp":[["pc","cs","ps"]]}"#;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nestgraph")).args(args).current_dir(dir).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn report(o: &Output) -> Value {
    serde_json::from_str(String::from_utf8(o.stderr.clone()).unwrap().trim()).expect("JSON error report")
}

#[test]
fn validate_triangle_reports_grading() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "tri.json", TRI);
    let o = run(&["validate", "tri.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "valid, grading {p:0,c:1,s:2}");
}

#[test]
fn invalid_graph_exits_one_with_ids() {
    let dir = TempDir::new().unwrap();
    write(
        dir.path(),
        "loop.json",
        r#"{"nodes":["a","b"],"flags":[{"id":"ab","dom":"a","cod":"b"},{"id":"ba","dom":"b","cod":"a"}],"comp":[]}"#,
    );
    let o = run(&["validate", "loop.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o);
    assert_eq!(r["error"], "CycleDetected");
    assert_eq!(r["ids"], serde_json::json!(["a", "b"]));

    write(
        dir.path(),
        "incomplete.json",
        r#"{"nodes":["p","c","s"],"flags":[{"id":"pc","dom":"p","cod":"c"},{"id":"cs","dom":"c","cod":"s"}]}"#,
    );
    let o = run(&["validate", "incomplete.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(&o)["error"], "CompositionIncomplete");
    assert_eq!(report(&o)["ids"], serde_json::json!(["pc", "cs"]));
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(&["frobnicate"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["compose", "only-one.json"], dir.path()).status.code(), Some(2));
    assert_eq!(run(&["gen-random", "--seed", "minus"], dir.path()).status.code(), Some(2));
}

#[test]
fn missing_file_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    let o = run(&["validate", "absent.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(&o)["error"], "IoError");
}

#[test]
fn generated_epi_decomposes() {
    let dir = TempDir::new().unwrap();
    let o = run(&["gen-random", "--kind", "admissible-epi", "--seed", "7", "--out", "epi.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["decompose", "epi.json", "--out", "m.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8(o.stderr).unwrap().contains("composite verified"));
    let o = run(&["validate", "m.json"], dir.path());
    assert_eq!(stdout(&o).trim(), "valid morphism, canonical");
}

#[test]
fn compose_with_mismatched_boundary() {
    let dir = TempDir::new().unwrap();
    run(&["gen-random", "--kind", "morphism", "--seed", "3", "--out", "a.json"], dir.path());
    write(dir.path(), "tri.json", TRI);
    write(
        dir.path(),
        "id.json",
        r#"{"graphs":{"t":"tri.json"},"merger":{"source":"t","target":"t","node_map":{"p":"p","c":"c","s":"s"},"flag_map":{"pc":{"flag":"pc"},"cs":{"flag":"cs"},"ps":{"flag":"ps"}}},
            "contraction":{"source":"t","target":"t","node_map":{"p":"p","c":"c","s":"s"},"flag_map":{"pc":{"flag":"pc"},"cs":{"flag":"cs"},"ps":{"flag":"ps"}}}}"#,
    );
    let o = run(&["compose", "a.json", "id.json"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(report(&o)["error"], "SourceTargetMismatch");
    let o = run(&["compose", "id.json", "id.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    write(dir.path(), "twice.json", &stdout(&o));
    let o = run(&["equal", "twice.json", "id.json"], dir.path());
    assert_eq!(stdout(&o).trim(), "equal");
}

#[test]
fn gen_random_is_deterministic() {
    let dir = TempDir::new().unwrap();
    for kind in
        ["graph", "merger", "contraction", "admissible-epi", "morphism", "diagram", "square", "morphism-diagram"]
    {
        let a = run(&["gen-random", "--kind", kind, "--seed", "11"], dir.path());
        let b = run(&["gen-random", "--kind", kind, "--seed", "11"], dir.path());
        assert_eq!(a.status.code(), Some(0), "{kind}");
        assert_eq!(a.stdout, b.stdout, "{kind}");
        write(dir.path(), "v.json", &stdout(&a));
        assert_eq!(run(&["validate", "v.json"], dir.path()).status.code(), Some(0), "{kind}");
    }
    let o = run(&["gen-random", "--kind", "graph", "--seed", "1", "--max-nodes", "1"], dir.path());
    let g: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(g["nodes"].as_array().unwrap().len(), 1);
    assert!(g["flags"].as_array().unwrap().is_empty());
    let o = run(&["gen-random", "--kind", "sphere"], dir.path());
    assert_eq!(report(&o)["error"], "InvalidBounds");
}

#[test]
fn restrict_glue_and_export() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "tri.json", TRI);
    // contract the whole triangle to a point, then restrict along the identity
    write(
        dir.path(),
        "collapse.json",
        r#"{"graphs":{"pt":{"nodes":["x"]}},"source":"tri.json","target":"pt","node_map":{"p":"x","c":"x","s":"x"},
            "flag_map":{"pc":{"id_at":"x"},"cs":{"id_at":"x"},"ps":{"id_at":"x"}}}"#,
    );
    let o = run(&["decompose", "collapse.json", "--out", "m.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    write(
        dir.path(),
        "dep.json",
        r#"{"graphs":{"pt":{"nodes":["x"]}},"source":"pt","target":"pt","node_map":{"x":"x"}}"#,
    );
    let o = run(&["restrict", "m.json", "dep.json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    write(dir.path(), "sq.json", &stdout(&o));
    assert_eq!(stdout(&run(&["validate", "sq.json"], dir.path())).trim(), "valid square");

    write(
        dir.path(),
        "span.json",
        r#"{"graphs":{"k":{"nodes":["p"]},
                      "a":{"nodes":["p","c1"],"flags":[{"id":"pc1","dom":"p","cod":"c1"}]},
                      "b":{"nodes":["p","c2"],"flags":[{"id":"pc2","dom":"p","cod":"c2"}]}},
            "arrows":[{"from":"k","to":"a","functor":{"source":"k","target":"a","node_map":{"p":"p"}}},
                      {"from":"k","to":"b","functor":{"source":"k","target":"b","node_map":{"p":"p"}}}]}"#,
    );
    let o = run(&["glue", "span.json"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let g: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(g["nodes"], serde_json::json!(["a/c1", "a/p+b/p+k/p", "b/c2"]));

    let o = run(&["export-dot", "tri.json"], dir.path());
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches(" -> ").count(), 2);

    let o = run(&["info", "tri.json"], dir.path());
    let info: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(info["vertices"], serde_json::json!(["s"]));
    assert_eq!(info["irreducible"], serde_json::json!(["cs", "pc"]));
}
