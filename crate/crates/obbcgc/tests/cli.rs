use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use obbcgc::dota::{parse_dota, read_records};
use obbcgc_core::OrientedBox;
use proptest::prelude::*;

const SAMPLE: &str = "imagesource:GoogleEarth\ngsd:0.5\n\
    100 100 140 100 140 120 100 120 ship 0\n\
    200 150 260 210 245 225 185 165 plane 1\n";

fn obbcgc(args: &[&str], out_dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obbcgc"))
        .arg("--out-dir")
        .arg(out_dir)
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

#[test]
fn inline_geometry() {
    let tmp = tempfile::tempdir().unwrap();
    let o = obbcgc(&["o2mer", "--box", "1,2,6,2,30"], tmp.path());
    assert!(o.status.success());
    assert_eq!(stdout(&o), "1,2,6.196152,4.732051\n");
    let o = obbcgc(
        &["iou", "--a", "0,0,4,2,0", "--b", "0,0,4,2,-90"],
        tmp.path(),
    );
    assert_eq!(stdout(&o), "0.333333\n");
}

#[test]
fn bad_input_exits_nonzero_with_a_diagnostic() {
    let tmp = tempfile::tempdir().unwrap();
    let o = obbcgc(&["frobnicate"], tmp.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("frobnicate"));

    let o = obbcgc(&["iou", "--a", "0,0,4,2,0", "--c", "1"], tmp.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("--c"));

    let missing = tmp.path().join("missing.txt");
    let o = obbcgc(&["convert", missing.to_str().unwrap()], tmp.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("missing.txt"));

    let bad = write(
        tmp.path(),
        "bad.txt",
        "0 0 4 0 4 2 0 2 ship 0\n0 0 4 0 4 2 0 2 ship 2\n",
    );
    let o = obbcgc(&["convert", bad.to_str().unwrap()], tmp.path());
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("bad.txt") && err.contains("line 2"), "{err}");

    let o = obbcgc(&["o2mer", "--box", "1,2,-6,2,30"], tmp.path());
    assert!(!o.status.success());
    assert!(stderr(&o).contains("--box"));
}

#[test]
fn assign_without_objects_is_all_negative() {
    let tmp = tempfile::tempdir().unwrap();
    let empty = write(
        tmp.path(),
        "empty.txt",
        "imagesource:GoogleEarth\ngsd:0.5\n",
    );
    let out = tmp.path().join("out");
    let o = obbcgc(
        &["assign", empty.to_str().unwrap(), "--image-size", "64,64"],
        &out,
    );
    assert!(o.status.success(), "{}", stderr(&o));

    let csv = std::fs::read_to_string(out.join("empty_ocp.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("anchor_index,label,gt_id,d_gh,d_go,t_g"));
    // 4x4 cells, 3 scales, 3 ratios
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 144);
    assert!(rows.iter().all(|r| r.split(',').nth(1) == Some("negative")));

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("assign_summary.json")).unwrap())
            .unwrap();
    assert_eq!(summary["images"][0]["ocp"]["positive"], 0);
    assert_eq!(summary["images"][0]["classic"]["positive"], 0);
    assert_eq!(summary["config"]["assignment"]["threshold"], 0.7);
}

#[test]
fn assign_labels_sample_objects() {
    let tmp = tempfile::tempdir().unwrap();
    let ann = write(tmp.path(), "P0001.txt", SAMPLE);
    let out = tmp.path().join("out");
    let o = obbcgc(
        &["assign", ann.to_str().unwrap(), "--image-size", "320,320"],
        &out,
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(out.join("P0001_ocp.csv")).unwrap();
    let positives: Vec<Vec<&str>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect::<Vec<_>>())
        .filter(|r| r[1] == "positive")
        .collect();
    assert!(!positives.is_empty());
    for r in &positives {
        assert!(r[2] == "0" || r[2] == "1");
        let t: f64 = r[5].parse().unwrap();
        let (d_gh, d_go): (f64, f64) = (r[3].parse().unwrap(), r[4].parse().unwrap());
        assert!((t - (d_gh + d_go) / 2.0).abs() <= 1e-6);
    }
}

#[test]
fn identical_invocations_write_identical_files() {
    let tmp = tempfile::tempdir().unwrap();
    let ann = write(tmp.path(), "P0001.txt", SAMPLE);
    let ann = ann.to_str().unwrap();
    let runs: Vec<Vec<(String, Vec<u8>)>> = (0..2)
        .map(|i| {
            let out = tmp.path().join(format!("run{i}"));
            for args in [
                vec!["--seed", "5", "bench", "--trials", "8", "--steps", "40"],
                vec![
                    "--seed",
                    "5",
                    "hist",
                    "--synthetic",
                    "--trials",
                    "8",
                    "--steps",
                    "40",
                ],
                vec!["assign", ann, "--image-size", "320,320"],
                vec!["convert", ann],
            ] {
                let o = obbcgc(&args, &out);
                assert!(o.status.success(), "{}", stderr(&o));
            }
            read_dir_sorted(&out)
        })
        .collect();
    assert_eq!(runs[0].len(), 8);
    assert_eq!(runs[0], runs[1]);

    let other = tmp.path().join("other");
    obbcgc(
        &["--seed", "6", "bench", "--trials", "8", "--steps", "40"],
        &other,
    );
    assert_ne!(
        std::fs::read(other.join("bench_cgc_on.json")).unwrap(),
        runs[0]
            .iter()
            .find(|f| f.0 == "bench_cgc_on.json")
            .unwrap()
            .1
    );
}

#[test]
fn bench_reports_pair_up() {
    let tmp = tempfile::tempdir().unwrap();
    let o = obbcgc(
        &["--seed", "3", "bench", "--trials", "10", "--steps", "100"],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let read = |name: &str| -> serde_json::Value {
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join(name)).unwrap()).unwrap()
    };
    let (on, off, summary) = (
        read("bench_cgc_on.json"),
        read("bench_cgc_off.json"),
        read("bench_summary.json"),
    );
    assert_eq!(on["config"]["seed"], 3);
    assert_eq!(on["config"]["lambda_cgc"], 1.0);
    assert_eq!(off["config"]["lambda_cgc"], 0.0);
    assert_eq!(on["trials"].as_array().unwrap().len(), 10);
    for (a, b) in on["trials"]
        .as_array()
        .unwrap()
        .iter()
        .zip(off["trials"].as_array().unwrap())
    {
        assert_eq!(a["seed"], b["seed"]);
        assert_eq!(a["initial"], b["initial"]);
    }
    let win = summary["win_rate"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&win));
}

#[test]
fn config_file_sets_defaults_and_flags_override() {
    let tmp = tempfile::tempdir().unwrap();
    let ann = write(tmp.path(), "scene.txt", SAMPLE);
    let cfg = write(
        tmp.path(),
        "run.toml",
        &format!(
            "[bench]\nseed = 9\ntrials = 4\nsteps = 10\n\n[anchor_grid]\nstride = 32.0\nscales = [64.0]\nratios = [1.0]\n\n\
             [io]\nannotations = [{:?}]\nimage_size = [320.0, 320.0]\nout_dir = {:?}\n",
            ann.to_str().unwrap(),
            tmp.path().join("from_config").to_str().unwrap()
        ),
    );
    let run = |args: &[&str]| {
        let o = Command::new(env!("CARGO_BIN_EXE_obbcgc"))
            .arg("--config")
            .arg(&cfg)
            .args(args)
            .output()
            .unwrap();
        assert!(o.status.success(), "{}", stderr(&o));
    };
    run(&["assign"]);
    let csv = std::fs::read_to_string(tmp.path().join("from_config/scene_ocp.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 100);

    run(&["bench"]);
    let on: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(tmp.path().join("from_config/bench_cgc_on.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(
        (
            on["config"]["seed"].as_u64(),
            on["trials"].as_array().unwrap().len()
        ),
        (Some(9), 4)
    );

    let flagged = tmp.path().join("flagged");
    run(&[
        "--seed",
        "1",
        "--out-dir",
        flagged.to_str().unwrap(),
        "bench",
        "--trials",
        "2",
    ]);
    let on: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(flagged.join("bench_cgc_on.json")).unwrap())
            .unwrap();
    assert_eq!(
        (
            on["config"]["seed"].as_u64(),
            on["trials"].as_array().unwrap().len()
        ),
        (Some(1), 2)
    );

    let broken = write(tmp.path(), "broken.toml", "[bench]\ntrials = 0\n");
    let o = Command::new(env!("CARGO_BIN_EXE_obbcgc"))
        .arg("--config")
        .arg(&broken)
        .args(["bench"])
        .output()
        .unwrap();
    assert!(!o.status.success());
    assert!(stderr(&o).contains("broken.toml"));
}

#[test]
fn hist_from_proposals_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let ann = write(tmp.path(), "gt.txt", "0 0 4 0 4 2 0 2 ship 0\n");
    let props = write(
        tmp.path(),
        "props.csv",
        "hbb_cx,hbb_cy,hbb_w,hbb_h,cx,cy,w,h,theta_deg\n2,1,4,2,2,1,4,2,0\n2.2,1,4,2,2,1,4,2,90\n50,50,1,1,50,50,1,1,0\n",
    );
    let o = obbcgc(
        &[
            "hist",
            "--annotations",
            ann.to_str().unwrap(),
            "--proposals",
            props.to_str().unwrap(),
        ],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(tmp.path().join("hist.csv")).unwrap();
    let rows: Vec<Vec<String>> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_owned).collect())
        .collect();
    assert_eq!(rows.len(), 10);
    assert_eq!((rows[0][0].as_str(), rows[9][1].as_str()), ("0.5", "1"));
    // hbb IoUs: 1 and 7.6/8.4 (bin 0.9-0.95); obb IoUs: 1 and 1/3 (dropped)
    assert_eq!((rows[9][2].as_str(), rows[9][3].as_str()), ("1", "1"));
    assert_eq!(rows[8][2], "1");
    let total_obb: u64 = rows.iter().map(|r| r[3].parse::<u64>().unwrap()).sum();
    assert_eq!(total_obb, 1);

    let bad = write(
        tmp.path(),
        "bad.csv",
        "hbb_cx,hbb_cy,hbb_w,hbb_h,cx,cy,w,h,theta_deg\n2,1,4,2,2,1,4,x,0\n",
    );
    let o = obbcgc(
        &[
            "hist",
            "--annotations",
            ann.to_str().unwrap(),
            "--proposals",
            bad.to_str().unwrap(),
        ],
        tmp.path(),
    );
    assert!(!o.status.success());
    assert!(stderr(&o).contains("bad.csv"));
}

fn rect_line(b: &OrientedBox) -> String {
    let coords: Vec<String> = b
        .corners()
        .vertices()
        .iter()
        .flat_map(|p| [format!("{:.9}", p.x), format!("{:.9}", p.y)])
        .collect();
    format!("{} vehicle 0", coords.join(" "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn convert_round_trip(boxes in prop::collection::vec(
        (10.0..1000.0f64, 10.0..1000.0f64, 2.0..200.0f64, 1.0..8.0f64, -90.0..90.0f64), 1..8,
    )) {
        let boxes: Vec<OrientedBox> =
            boxes.into_iter().map(|(x, y, w, a, t)| OrientedBox::from_degrees(x, y, w, w / a, t).unwrap()).collect();
        let text: String = boxes.iter().map(|b| rect_line(b) + "\n").collect();
        let parsed = parse_dota(&text).unwrap();
        let bytes = obbcgc::dota::write_records(&parsed).unwrap();
        let records = read_records(std::str::from_utf8(&bytes).unwrap()).unwrap();
        prop_assert_eq!(records.len(), boxes.len());
        for (r, o) in records.iter().zip(&parsed) {
            let (obb, hbb) = r.boxes().unwrap();
            // same rectangle: corner sets agree
            let (a, b) = (obb.corners(), o.obb.corners());
            prop_assert!(a.vertices().iter().all(|p| b.vertices().iter().any(|q| p.distance(*q) <= 1e-5)));
            for (x, y) in hbb.params().iter().zip(o.hbb.params()) {
                prop_assert!((x - y).abs() <= 1e-6);
            }
            for (x, y) in [(obb.cx(), o.obb.cx()), (obb.cy(), o.obb.cy()), (obb.w(), o.obb.w()), (obb.h(), o.obb.h())] {
                prop_assert!((x - y).abs() <= 1e-6);
            }
        }
    }
}
