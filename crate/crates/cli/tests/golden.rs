//! Output schemas checked against files in `tests/golden/`.

mod common;

use common::*;

fn golden(name: &str) -> String {
    std::fs::read_to_string(std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

/// Dotted key paths of a JSON value, one per line, arrays collapsed to `[]`.
fn shape(v: &serde_json::Value, prefix: &str, out: &mut Vec<String>) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, child) in map {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                out.push(p.clone());
                shape(child, &p, out);
            }
        }
        serde_json::Value::Array(items) => {
            out.push(format!("{prefix}[] len {}", items.len()));
        }
        _ => {}
    }
}

fn shape_of(v: &serde_json::Value) -> String {
    let mut lines = Vec::new();
    shape(v, "", &mut lines);
    lines.sort();
    lines.join("\n") + "\n"
}

#[test]
fn bench_csv_matches_golden() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.json");
    std::fs::write(
        &cfg,
        r#"{"seed": 3, "trials": 2, "noise_levels": [2], "outlier_levels": [0.25], "scene": {"num_points": 30}, "robust": {"iterations": 30}}"#,
    )
    .unwrap();
    let out = dir.path().join("o.csv");
    let res = relpose(&["bench", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(res.status.success(), "{}", stderr(&res));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), golden("bench_header.csv").trim_end());
    assert_eq!(text, golden("bench_small.csv"));

    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("o.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(shape_of(&manifest), golden("bench_manifest.shape"));
}

#[test]
fn estimate_json_matches_golden_shape() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture(dir.path(), 21, 50);
    let mut args = vec![
        "estimate",
        f.corr.to_str().unwrap(),
        "--iterations",
        "40",
        "--prior",
        "oracle:5,5,0.05",
        "--gt",
        f.gt.to_str().unwrap(),
    ];
    args.extend(INTRINSICS);
    let res = relpose(&args);
    assert!(res.status.success(), "{}", stderr(&res));
    let json: serde_json::Value = serde_json::from_str(&stdout(&res)).unwrap();
    assert_eq!(shape_of(&json), golden("estimate_prior.shape"));

    let mut args = vec!["estimate", f.corr.to_str().unwrap(), "--iterations", "40"];
    args.extend(INTRINSICS);
    let json: serde_json::Value = serde_json::from_str(&stdout(&relpose(&args))).unwrap();
    assert_eq!(shape_of(&json), golden("estimate_plain.shape"));
}
