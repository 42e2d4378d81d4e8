//! End-to-end runs of the binary against the toy fixture model.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_reservoirflux"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn assert_success(out: &Output) {
    assert!(
        out.status.success(),
        "stdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn simulate_writes_full_trajectory_with_sidecar_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let res = run(&[
        "simulate",
        "--model",
        fixture("toy_two_sugar.json").to_str().unwrap(),
        "--glucose",
        "10",
        "--xylose",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_success(&res);

    let csv = read(&out);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 201, "header plus 200 samples");
    assert_eq!(lines[0], "time_h,biomass_gdw_per_l,glucose_mM,xylose_mM");

    let sidecar = read(&dir.path().join("traj.resolved_config.json"));
    for key in [
        "\"V_g_max\": 10.0",
        "\"K_g\": 0.015",
        "\"V_x_max\": 9.0",
        "\"K_x\": 0.01",
        "\"K_ig\": 0.01",
    ] {
        assert!(sidecar.contains(key), "missing {key} in {sidecar}");
    }
}

#[test]
fn simulate_without_sugars_keeps_biomass_flat() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("flat.csv");
    let res = run(&[
        "simulate",
        "--model",
        fixture("toy_two_sugar.json").to_str().unwrap(),
        "--glucose",
        "0",
        "--xylose",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_success(&res);
    let csv = read(&out);
    let biomass: Vec<&str> = csv
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(biomass.len(), 200);
    assert!(biomass.iter().all(|&b| b == biomass[0]), "{:?}", &biomass[..3]);
}

#[test]
fn screen_emits_sorted_gene_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("screen.csv");
    let res = run(&[
        "screen",
        "--model",
        fixture("toy_two_sugar.json").to_str().unwrap(),
        "--glucose",
        "0.015",
        "--xylose",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_success(&res);
    let csv = read(&out);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "gene,growth_ratio,retained,group_id");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("ga,") && lines[1].ends_with(",true,GROW_XYL"));
    assert!(lines[2].starts_with("gb,") && lines[2].ends_with(",true,GROW_XYL"));
    assert!(lines[3].starts_with("gg,") && lines[3].ends_with(",true,GROW_GLC"));
}

#[test]
fn bench_and_ranks_are_deterministic_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let model = fixture("toy_two_sugar.json");
    let bench_args = |out: &Path| {
        vec![
            "bench".to_string(),
            "--model".into(),
            model.to_str().unwrap().into(),
            "--duration".into(),
            "1.0".into(),
            "--n-templates".into(),
            "4".into(),
            "--n-per-template".into(),
            "3".into(),
            "--n-train-per-template".into(),
            "2".into(),
            "--n-tasks".into(),
            "6".into(),
            "--prefixes".into(),
            "1,5,10".into(),
            "--out".into(),
            out.to_str().unwrap().into(),
        ]
    };
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let res = bin().args(bench_args(out)).output().unwrap();
        assert_success(&res);
    }
    let text = read(&a);
    assert_eq!(text, read(&b));
    assert!(text.starts_with("model,T,mean_accuracy,std_accuracy\n"));
    assert_eq!(text.lines().count(), 4);

    let r = dir.path().join("r.csv");
    let res = run(&[
        "ranks",
        "--model",
        model.to_str().unwrap(),
        "--duration",
        "1.0",
        "--n-kernel-templates",
        "5",
        "--n-gen-templates",
        "2",
        "--n-gen-variants",
        "3",
        "--prefixes",
        "1,5,10",
        "--out",
        r.to_str().unwrap(),
    ]);
    assert_success(&res);
    let rtext = read(&r);
    assert!(rtext.starts_with("model,T,kernel_rank,gen_rank,rank_diff\n"));
    assert_eq!(rtext.lines().count(), 4);
}

#[test]
fn baseline_flag_skips_simulation_entirely() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("base.csv");
    // a missing model path is fine: the baseline never loads it
    let res = run(&[
        "bench",
        "--model",
        dir.path().join("missing.json").to_str().unwrap(),
        "--baseline",
        "--n-templates",
        "4",
        "--n-per-template",
        "3",
        "--n-train-per-template",
        "2",
        "--n-tasks",
        "6",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_success(&res);
    let text = read(&out);
    assert!(text.starts_with("mean_accuracy,std_accuracy\n"));
    assert_eq!(text.lines().count(), 2);
}

fn study_config(dir: &Path) -> PathBuf {
    let cfg = format!(
        r#"{{
  "models": [{{"id": "toy", "path": {:?}}}],
  "duration": 1.0,
  "ensemble": {{"n_templates": 4, "n_per_template": 3, "n_train_per_template": 2}},
  "n_tasks": 6,
  "rank": {{"n_kernel_templates": 5, "n_gen_templates": 2, "n_gen_variants": 3}},
  "prefixes": [1, 5, 10],
  "screen_input": [0.015, 10.0]
}}"#,
        fixture("toy_two_sugar.json").to_str().unwrap()
    );
    let path = dir.join("study.json");
    std::fs::write(&path, cfg).unwrap();
    path
}

#[test]
fn study_reruns_byte_identical_payloads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = study_config(dir.path());
    let run1 = dir.path().join("run1");
    let run2 = dir.path().join("run2");
    for out in [&run1, &run2] {
        let res = run(&[
            "study",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_success(&res);
    }
    for file in [
        "accuracy.csv",
        "ranks.csv",
        "baseline.csv",
        "pareto.json",
        "resolved_config.json",
        "failures.json",
    ] {
        assert_eq!(
            read(&run1.join(file)),
            read(&run2.join(file)),
            "{file} differs between reruns"
        );
    }
    let acc = read(&run1.join("accuracy.csv"));
    assert_eq!(acc.lines().count(), 4, "{acc}");
    assert_eq!(read(&run1.join("failures.json")).trim(), "[]");
    // wall-clock metadata stays out of the data payloads
    assert!(read(&run1.join("meta.json")).contains("wall_clock_s"));
    let resolved = read(&run1.join("resolved_config.json"));
    for key in ["\"ensemble\": 0", "\"tasks\": 1", "\"kernel\": 2", "\"generalisation\": 3"] {
        assert!(resolved.contains(key), "missing {key}");
    }
}

#[test]
fn mutant_study_reports_groups_and_wild_type() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = study_config(dir.path());
    let out = dir.path().join("mut");
    let res = run(&[
        "study",
        "--config",
        cfg.to_str().unwrap(),
        "--mutants",
        "toy",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_success(&res);
    let acc = read(&out.join("accuracy.csv"));
    for id in ["toy,", "toy~GROW_GLC,", "toy~GROW_XYL,"] {
        assert!(acc.contains(id), "missing {id} in {acc}");
    }
    let groups = read(&out.join("groups.json"));
    assert!(groups.contains("\"wild_type_dominates\""));
    assert!(groups.contains("\"ga\""));
    assert!(groups.contains("\"gb\""));

    let front = dir.path().join("front.json");
    let res = run(&[
        "pareto",
        "--report",
        out.to_str().unwrap(),
        "--threshold",
        "0.7",
        "--out",
        front.to_str().unwrap(),
    ]);
    assert_success(&res);
    assert!(read(&front).contains("\"front\""));
}

#[test]
fn failure_exit_codes_distinguish_config_and_model_errors() {
    let dir = tempfile::tempdir().unwrap();

    // unreadable model file: model error
    let res = run(&[
        "simulate",
        "--model",
        dir.path().join("missing.json").to_str().unwrap(),
        "--glucose",
        "1",
        "--xylose",
        "1",
        "--out",
        dir.path().join("t.csv").to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(2));

    // config typo is a hard error, not a silent default
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"models": [{"id": "toy", "path": "x.json"}], "n_taskz": 3}"#,
    )
    .unwrap();
    let res = run(&[
        "study",
        "--config",
        bad.to_str().unwrap(),
        "--out",
        dir.path().join("out").to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&res.stderr).contains("n_taskz"));

    // zero worker threads make no sense
    let res = run(&[
        "screen",
        "--model",
        fixture("toy_two_sugar.json").to_str().unwrap(),
        "--jobs",
        "0",
        "--out",
        dir.path().join("s.csv").to_str().unwrap(),
    ]);
    assert_eq!(res.status.code(), Some(1));
}
