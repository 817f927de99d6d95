use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pimkit(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pimkit"))
        .current_dir(dir)
        .env_remove("PIMKIT_OUT")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn amdahl_prints_speedup() {
    let dir = tempfile::tempdir().unwrap();
    let o = pimkit(dir.path(), &["bnn", "amdahl", "--conv-time", "0.9", "--speedup", "10"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("5.263"), "{}", stdout(&o));
}

#[test]
fn verify_from_config() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("exp.ini"),
        "kind = pum-verify\nout = results\n[verify]\nops = add\nbits = 8\n",
    )
    .unwrap();
    let o = pimkit(dir.path(), &["--config", "exp.ini", "run"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(dir.path().join("results/verify.csv")).unwrap();
    assert_eq!(csv, "op,bits,signed,mode,cases,mismatches\nadd,8,false,exhaustive,65536,0\n");
    assert!(dir.path().join("results/verify.txt").exists());
}

#[test]
fn config_diagnostics_fail_the_run() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.ini"), "kind = throughput\n[throughput]\nbankz = 4\n").unwrap();
    let o = pimkit(dir.path(), &["--config", "a.ini", "run"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("bankz") && stderr(&o).contains(":3:"), "{}", stderr(&o));

    fs::write(dir.path().join("b.ini"), "kind = throughput\n[throughput]\nbanks = -1\n").unwrap();
    let o = pimkit(dir.path(), &["--config", "b.ini", "run"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("1..=16"), "{}", stderr(&o));

    let o = pimkit(dir.path(), &["--config", "missing.ini", "run"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("not found"), "{}", stderr(&o));
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |out: &str, seed: &str| {
        let o = pimkit(
            dir.path(),
            &["--seed", seed, "--out", out, "verify", "--op", "mul,ifthenelse", "--bits", "16", "--vectors", "300"],
        );
        assert!(o.status.success(), "{}", stderr(&o));
        let g = pimkit(dir.path(), &["--seed", seed, "--out", out, "upmem", "gemv", "--rows", "40", "--cols", "9"]);
        assert!(g.status.success(), "{}", stderr(&g));
        (
            fs::read(dir.path().join(out).join("verify.csv")).unwrap(),
            fs::read(dir.path().join(out).join("upmem_gemv.csv")).unwrap(),
        )
    };
    assert_eq!(run("a", "7"), run("b", "7"));
    assert_ne!(run("c", "7").1, run("d", "8").1);
}

#[test]
fn roofline_attainable_is_monotone() {
    let dir = tempfile::tempdir().unwrap();
    let o = pimkit(dir.path(), &["roofline", "--points", "50"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = fs::read_to_string(dir.path().join("pimkit-out/roofline.csv")).unwrap();
    let values: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(values.len(), 50);
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn output_directory_precedence() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("c.ini"), "out = from-config\n").unwrap();
    let base = ["bnn", "amdahl"];
    let with_env = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_pimkit"))
            .current_dir(dir.path())
            .env("PIMKIT_OUT", "from-env")
            .args(args)
            .output()
            .unwrap()
    };
    assert!(with_env(&base).status.success());
    assert!(dir.path().join("from-env/bnn_amdahl.csv").exists());
    let mut args = vec!["--config", "c.ini"];
    args.extend(base);
    assert!(with_env(&args).status.success());
    assert!(dir.path().join("from-config/bnn_amdahl.csv").exists());
    args.extend(["--out", "from-flag"]);
    assert!(with_env(&args).status.success());
    assert!(dir.path().join("from-flag/bnn_amdahl.csv").exists());
}

#[test]
fn mensa_reads_layer_csv() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("m.csv"),
        "name,kind,mac_count,param_footprint_bytes,param_reuse,activation_footprint_bytes\n\
         conv,conv,5e7,1e5,1000,6.4e4\nlstm,lstm,6e6,6e6,2,1.6e4\nfc,fc,5e6,5e6,2,4e3\n",
    )
    .unwrap();
    let o = pimkit(dir.path(), &["mensa", "--model", "m.csv", "--system", "mensa-g"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let layers = fs::read_to_string(dir.path().join("pimkit-out/mensa_layers.csv")).unwrap();
    for acc in ["pascal", "pavlov", "jacquard"] {
        assert!(layers.contains(acc), "{layers}");
    }
}

#[test]
fn bnn_inference_matches_reference() {
    let dir = tempfile::tempdir().unwrap();
    let o = pimkit(dir.path(), &["bnn", "infer", "--inputs", "2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("2 of 2 inputs identical"));
}

#[test]
fn bad_arguments_fail() {
    let dir = tempfile::tempdir().unwrap();
    assert!(!pimkit(dir.path(), &["throughput", "--banks", "17"]).status.success());
    assert!(!pimkit(dir.path(), &["verify", "--op", "frobnicate"]).status.success());
    assert!(!pimkit(dir.path(), &["upmem", "compare", "--pim-time", "1", "--ref", "gpu=0"]).status.success());
    assert!(!pimkit(dir.path(), &["run"]).status.success());
}
