use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn taxograph(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taxograph"))
        .args(args)
        .current_dir(dir)
        .env_remove("TAXOGRAPH_THESAURUS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn initialized() -> (TempDir, PathBuf) {
    let dir = tempfile::tempdir().unwrap();
    let out = taxograph(dir.path(), &["init", "--dcase", "--out", "t.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.path().join("t.json");
    (dir, path)
}

#[test]
fn init_writes_document_and_report() {
    let (dir, path) = initialized();
    let doc = fs::read_to_string(&path).unwrap();
    assert!(doc.starts_with("{\n  \"format_version\": 1"));
    let again = taxograph(dir.path(), &["init", "--dcase"]);
    assert_eq!(stdout(&again), doc);
    assert!(String::from_utf8_lossy(&again.stderr).contains("errors=0"));
}

#[test]
fn context_vector() {
    let (dir, _) = initialized();
    let out = taxograph(
        dir.path(),
        &["cut", "--kind", "context", "--vector", "--graph", "t.json"],
    );
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "meeting\noffice\nshopping\n");

    let default_graph = taxograph(dir.path(), &["cut", "--kind", "context", "--vector"]);
    assert_eq!(stdout(&default_graph), "meeting\noffice\nshopping\n");
}

#[test]
fn validate_fresh_graph() {
    let (dir, _) = initialized();
    let out = taxograph(dir.path(), &["validate", "t.json"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("errors=0 warnings=0"));
}

#[test]
fn add_duplicate_speech() {
    let (dir, path) = initialized();
    let before = fs::read(&path).unwrap();
    let out = taxograph(
        dir.path(),
        &[
            "add",
            "speech",
            "--cluster",
            "d13t2",
            "--kind",
            "event",
            "--graph",
            "t.json",
            "--out",
            "t2.json",
        ],
    );
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("[duplicate]"), "{}", stdout(&out));
    assert_eq!(fs::read(&path).unwrap(), before);

    let diff = taxograph(dir.path(), &["diff", "t.json", "t2.json"]);
    assert_eq!(code(&diff), 0, "{}", stdout(&diff));
}

#[test]
fn add_new_label_then_diff() {
    let (dir, _) = initialized();
    let out = taxograph(
        dir.path(),
        &[
            "add",
            "Tram Bell",
            "--cluster",
            "extra",
            "--kind",
            "event",
            "--tag",
            "obj",
            "--graph",
            "t.json",
            "-o",
            "t2.json",
        ],
    );
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("bell [added]"), "{}", stdout(&out));
    let diff = taxograph(dir.path(), &["diff", "t.json", "t2.json"]);
    assert_eq!(code(&diff), 1);
    let text = stdout(&diff);
    assert!(text.contains("+ label \"bell\""), "{text}");
    assert!(text.contains("+ cluster \"extra\""), "{text}");
}

#[test]
fn merge_label_file() {
    let (dir, _) = initialized();
    fs::write(
        dir.path().join("new.txt"),
        "# garden sounds\nBird song\nlawn-mower\tcluster=garden machines\n",
    )
    .unwrap();
    let out = taxograph(
        dir.path(),
        &[
            "merge",
            "new.txt",
            "--cluster",
            "garden",
            "--kind",
            "event",
            "--graph",
            "t.json",
            "--out",
            "t2.json",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let vector = taxograph(
        dir.path(),
        &["cut", "--cluster", "garden machines", "--vector", "--graph", "t2.json"],
    );
    assert_eq!(stdout(&vector), "lawn\nmower\n");
}

#[test]
fn edge_list_round_trip() {
    let (dir, _) = initialized();
    assert_eq!(
        code(&taxograph(dir.path(), &["export-edges", "t.json", "-o", "t.edges"])),
        0
    );
    let edges = fs::read_to_string(dir.path().join("t.edges")).unwrap();
    assert!(edges.starts_with("taxograph-edges v1\n"));
    assert_eq!(
        code(&taxograph(dir.path(), &["import-edges", "t.edges", "-o", "back.json"])),
        0
    );
    assert_eq!(code(&taxograph(dir.path(), &["diff", "t.json", "back.json"])), 0);
    assert_eq!(code(&taxograph(dir.path(), &["validate", "t.edges"])), 0);
}

#[test]
fn union_of_cuts_restores_graph() {
    let (dir, _) = initialized();
    let cut = |args: &[&str], out: &str| {
        let mut all = vec!["cut", "--graph", "t.json", "--out", out];
        all.extend_from_slice(args);
        assert_eq!(code(&taxograph(dir.path(), &all)), 0);
    };
    cut(&["--kind", "event"], "events.json");
    cut(&["--kind", "environment", "--kind", "context"], "rest.json");
    let out = taxograph(
        dir.path(),
        &["union", "events.json", "rest.json", "--out", "joined.json"],
    );
    assert_eq!(code(&out), 0);
    let vector = |file: &str| stdout(&taxograph(dir.path(), &["vector", file]));
    assert_eq!(vector("joined.json"), vector("t.json"));
    assert_eq!(vector("t.json").lines().count(), 92);
}

#[test]
fn exit_codes() {
    let (dir, _) = initialized();
    fs::write(
        dir.path().join("broken.edges"),
        "taxograph-edges v1\n@cluster a\nx\tnot-a-kind\n",
    )
    .unwrap();
    fs::write(dir.path().join("future.edges"), "taxograph-edges v9\n").unwrap();
    fs::write(
        dir.path().join("collision.edges"),
        "taxograph-edges v1\n@cluster a\nbicycle\tevent\nbike\tevent\n",
    )
    .unwrap();

    assert_eq!(code(&taxograph(dir.path(), &["validate", "broken.edges"])), 2);
    assert_eq!(code(&taxograph(dir.path(), &["validate", "future.edges"])), 2);
    let collision = taxograph(dir.path(), &["validate", "collision.edges"]);
    assert_eq!(code(&collision), 1);
    assert!(stdout(&collision).contains("SYNONYM_COLLISION"));

    assert_eq!(code(&taxograph(dir.path(), &["cut", "--graph", "t.json"])), 64);
    assert_eq!(code(&taxograph(dir.path(), &["frobnicate"])), 64);
    assert_eq!(
        code(&taxograph(
            dir.path(),
            &["add", "x", "--cluster", "c", "--kind", "weather"]
        )),
        64
    );
    assert_eq!(code(&taxograph(dir.path(), &["validate", "missing.json"])), 66);
    assert_eq!(
        code(&taxograph(
            dir.path(),
            &["cut", "--cluster", "nowhere", "--graph", "t.json"]
        )),
        1
    );
    assert_eq!(code(&taxograph(dir.path(), &["--help"])), 0);
}

#[test]
fn golden_mismatch_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    fs::create_dir(&data).unwrap();
    for (name, text) in taxograph::dcase::embedded_files() {
        if let Some(file) = name.strip_prefix("dcase/") {
            let text = if file == "context.txt" {
                text.replace("meeting", "party")
            } else {
                text.to_owned()
            };
            fs::write(data.join(file), text).unwrap();
        }
    }
    let out = taxograph(dir.path(), &["init", "--dcase", "--data", "data"]);
    assert_eq!(code(&out), 3);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("c missing: meeting"), "{err}");
}

#[test]
fn thesaurus_override() {
    let (dir, _) = initialized();
    fs::write(
        dir.path().join("th.toml"),
        "[[synset]]\npreferred = \"speech\"\nvariants = [\"talking\"]\n",
    )
    .unwrap();
    let run = |env: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_taxograph"));
        cmd.args([
            "add",
            "talking",
            "--cluster",
            "x",
            "--kind",
            "event",
            "--graph",
            "t.json",
        ])
        .current_dir(dir.path())
        .env_remove("TAXOGRAPH_THESAURUS");
        if let Some(path) = env {
            cmd.env("TAXOGRAPH_THESAURUS", path);
        }
        String::from_utf8(cmd.output().unwrap().stderr).unwrap()
    };
    assert!(run(None).contains("talking [added]"));
    assert!(run(Some("th.toml")).contains("\"talking\" =\"speech\" -> speech [duplicate]"));

    fs::write(dir.path().join("bad.toml"), "[[synset]]\npreferred = \"Bad\"\n").unwrap();
    let out = taxograph(dir.path(), &["--thesaurus", "bad.toml", "validate", "t.json"]);
    assert_eq!(code(&out), 2);
}
