use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let files = [
            ("a2.quiver", "vertices 1 2\narrow a 1 2\n"),
            (
                "kronecker.quiver",
                "vertices 1 2\narrow a 1 2\narrow b 1 2\n",
            ),
            ("a2_brick.rep", "quiver a2.quiver\ndims 1=1 2=1\nmap a 1\n"),
            ("s1s1.rep", "quiver a2.quiver\ndims 1=2 2=0\n"),
            ("zero.rep", "quiver a2.quiver\ndims 1=0 2=0\n"),
            (
                "k12.rep",
                "quiver kronecker.quiver\ndims 1=1 2=2\nmap a 1; 0\nmap b 0; 1\n",
            ),
            (
                "k11.rep",
                "quiver kronecker.quiver\ndims 1=1 2=1\nmap a 1\nmap b 0\n",
            ),
            ("broken.rep", "quiver a2.quiver\ndims 1=1 2=1\nmap a 1 2\n"),
        ];
        for (name, text) in files {
            fs::write(dir.path().join(name), text).unwrap();
        }
        Fixture { dir }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_quiverepi"))
            .current_dir(self.dir.path())
            .args(args)
            .output()
            .unwrap()
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn check_reports_brick_status() {
    let f = Fixture::new();
    let o = f.run(&["check", "a2_brick.rep"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("End dimension: 1"));
    assert!(out.contains("Ext^1 dimension: 0"));
    assert!(out.contains("brick: true"));
    assert!(out.contains("exceptional: true"));

    let out = stdout(&f.run(&["check", "s1s1.rep"]));
    assert!(out.contains("End dimension: 4"));
    assert!(out.contains("brick: false"));

    assert_eq!(f.run(&["check", "zero.rep"]).status.code(), Some(2));
}

#[test]
fn parse_errors_exit_with_position() {
    let f = Fixture::new();
    let o = f.run(&["check", "broken.rep"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    assert_eq!(f.run(&["check", "missing.rep"]).status.code(), Some(2));
}

#[test]
fn extension_builds_and_verifies() {
    let f = Fixture::new();
    let o = f.run(&[
        "build",
        "extend",
        "a2_brick.rep",
        "kronecker.quiver",
        "--out",
        "ext.json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let hom = json(&f.path("ext.json"));
    assert_eq!(hom["alphabet"], serde_json::json!(["x_b_1_1"]));
    assert_eq!(hom["arrows"][1]["rows"][1][0], "x_b_1_1");

    let o = f.run(&[
        "verify",
        "ext.json",
        "--degree",
        "3",
        "--out",
        "report.json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = json(&f.path("report.json"));
    assert_eq!(report["schema"], 1);
    assert_eq!(report["verdict"]["status"], "verified");
    assert_eq!(report["specialization"]["outcome"]["result"], "pass");
}

#[test]
fn non_brick_is_refuted() {
    let f = Fixture::new();
    assert_eq!(
        f.run(&["build", "brick", "s1s1.rep"]).status.code(),
        Some(2)
    );
    let o = f.run(&[
        "build",
        "brick",
        "s1s1.rep",
        "--allow-non-brick",
        "--out",
        "h.json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("not a brick"));

    let o = f.run(&["verify", "h.json", "--degree", "2", "--seed", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["verdict"]["status"], "refuted");
    assert_eq!(report["verdict"]["witness"]["path_end_dim"], 4);
    assert_eq!(report["verdict"]["witness"]["target_end_dim"], 1);
}

#[test]
fn small_bound_without_trials_is_undetermined() {
    let f = Fixture::new();
    f.run(&[
        "build",
        "brick",
        "s1s1.rep",
        "--allow-non-brick",
        "--out",
        "h.json",
    ]);
    let o = f.run(&["verify", "h.json", "--degree", "1", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("--degree"));
}

#[test]
fn reports_are_byte_identical() {
    let f = Fixture::new();
    f.run(&[
        "build", "glue", "k12.rep", "--vertex", "2", "--out", "g.json",
    ]);
    let args = |out: &'static str| {
        [
            "verify", "g.json", "--seed", "11", "--sizes", "1,2", "--out", out,
        ]
    };
    assert_eq!(f.run(&args("r1.json")).status.code(), Some(0));
    assert_eq!(f.run(&args("r2.json")).status.code(), Some(0));
    let (a, b) = (
        fs::read(f.path("r1.json")).unwrap(),
        fs::read(f.path("r2.json")).unwrap(),
    );
    assert_eq!(a, b);
    assert_eq!(json(&f.path("r1.json"))["specialization"]["seed"], 11);
}

#[test]
fn glue_needs_dimension_above_one() {
    let f = Fixture::new();
    let o = f.run(&["build", "glue", "k12.rep", "--vertex", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("dimension 1"), "{}", stderr(&o));
}

#[test]
fn presentation_lists_generators() {
    let f = Fixture::new();
    let o = f.run(&[
        "build",
        "presentation",
        "kronecker.quiver",
        "a2_brick.rep",
        "--embed",
        "a=a",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(
        doc["generators"],
        serde_json::json!([{ "source": "a[2,1]", "generator": "x_a_1_1 - 1" }])
    );
    assert_eq!(
        doc["canonical"]["alphabet"],
        serde_json::json!(["x_a_1_1", "x_b_1_1"])
    );

    let o = f.run(&[
        "build",
        "presentation",
        "kronecker.quiver",
        "a2_brick.rep",
        "--embed",
        "a=c",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invariant_and_canonical_builds() {
    let f = Fixture::new();
    let o = f.run(&[
        "build",
        "invariant",
        "k11.rep",
        "--arrow",
        "b",
        "--case",
        "i",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let hom: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(hom["alphabet"], serde_json::json!(["x21_b_1_1"]));

    let o = f.run(&[
        "build",
        "canonical",
        "kronecker.quiver",
        "--dims",
        "1=1, 2=2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let hom: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(hom["alphabet"].as_array().unwrap().len(), 4);
    assert_eq!(
        f.run(&[
            "build",
            "invariant",
            "k11.rep",
            "--arrow",
            "b",
            "--case",
            "v"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn prime_field_and_mismatch() {
    let f = Fixture::new();
    let o = f.run(&[
        "build",
        "brick",
        "a2_brick.rep",
        "--field",
        "fp:7",
        "--out",
        "p.json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&f.path("p.json"))["field"], "fp:7");
    assert_eq!(
        f.run(&["verify", "p.json", "--degree", "1"]).status.code(),
        Some(0)
    );
    let o = f.run(&["verify", "p.json", "--field", "q"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("fp:7"));
    assert_eq!(
        f.run(&["check", "a2_brick.rep", "--field", "fp:6"])
            .status
            .code(),
        Some(2)
    );
}
