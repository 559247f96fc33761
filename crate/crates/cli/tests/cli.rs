use std::process::{Command, Output};

fn xxchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xxchain"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn spectrum_csv_shape() {
    let o = xxchain(&["spectrum", "--n", "40", "--alpha-range", "0:3:0.01"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,j,energy,label"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 301 * 40);
    // α = 3: two isolated states.
    let isolated = rows
        .iter()
        .filter(|r| r[0] == "3" && r[3] != "InBand")
        .count();
    assert_eq!(isolated, 2);
    assert!(text.ends_with('\n'));
}

#[test]
fn invalid_n_exits_2() {
    let o = xxchain(&["spectrum", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("InvalidN"), "{}", stderr(&o));
}

#[test]
fn usage_errors_name_the_flag() {
    let o = xxchain(&["spectrum", "--n", "10", "--alpha-range", "1:0:0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--alpha-range"), "{}", stderr(&o));

    let o = xxchain(&["evolve", "--kind", "bogus", "--n", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--kind"), "{}", stderr(&o));

    let o = xxchain(&["spectrum"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--n"));

    let o = xxchain(&["spectrum", "--n", "5", "--out", "/nonexistent/dir/x.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--out"));

    let o = xxchain(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_alpha_is_input_error() {
    let o = xxchain(&["evolve", "--n", "10", "--alpha", "-0.5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NegativeAlpha"));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let o = xxchain(&[
            "evolve",
            "--n",
            "30",
            "--mirror",
            "--alpha",
            "0.5",
            "--kind",
            "concurrence",
            "--t-range",
            "0:30:0.1",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        assert!(o.stdout.is_empty());
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn twelve_significant_digits() {
    let o = xxchain(&[
        "evolve",
        "--n",
        "2",
        "--t-range",
        "1:1:1",
        "--kind",
        "fidelity",
    ]);
    assert_eq!(stdout(&o), format!("t,value\n1,{}\n", "0.708073418274"));
}

#[test]
fn single_state_sweep() {
    let o = xxchain(&[
        "ipr-sweep",
        "--n",
        "4",
        "--alpha-range",
        "0.5:0.5:0.1",
        "--states",
        "2",
    ]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert_eq!(text.lines().next(), Some("alpha,j,value"));
    assert!(text.lines().nth(1).unwrap().starts_with("0.5,2,"));
}

#[test]
fn eigenvector_coefficients() {
    let o = xxchain(&[
        "spectrum",
        "--n",
        "40",
        "--alpha-range",
        "0.1:1.6:1.5",
        "--states",
        "1,20",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("alpha,j,site,coefficient"));
    assert_eq!(text.lines().count(), 1 + 2 * 2 * 40);
    let norm: f64 = text
        .lines()
        .filter(|l| l.starts_with("1.6,1,"))
        .map(|l| {
            l.rsplit(',')
                .next()
                .unwrap()
                .parse::<f64>()
                .unwrap()
                .powi(2)
        })
        .sum();
    assert!((norm - 1.0).abs() < 1e-9);
    assert_eq!(
        xxchain(&["spectrum", "--n", "4", "--states", "5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("chain.cfg");
    std::fs::write(
        &cfg,
        "# mirror chain\nn_sites = 8\nimpurities = 1:0.4, 7:0.4\n",
    )
    .unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec![
            "evolve",
            "--config",
            cfg.to_str().unwrap(),
            "--t-range",
            "3:3:1",
        ];
        args.extend_from_slice(extra);
        let o = xxchain(&args);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        stdout(&o)
    };
    let from_file = run(&[]);
    let explicit = {
        let o = xxchain(&[
            "evolve",
            "--n",
            "8",
            "--mirror",
            "--alpha",
            "0.4",
            "--t-range",
            "3:3:1",
        ]);
        stdout(&o)
    };
    assert_eq!(from_file, explicit);
    // --alpha rescales the configured impurities.
    let overridden = run(&["--alpha", "0.9"]);
    let o = xxchain(&[
        "evolve",
        "--n",
        "8",
        "--mirror",
        "--alpha",
        "0.9",
        "--t-range",
        "3:3:1",
    ]);
    assert_eq!(overridden, stdout(&o));
    assert_ne!(overridden, from_file);
}

#[test]
fn optimize_json_report() {
    let o = xxchain(&["optimize", "--n", "31", "--seedless"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let alpha = v["alpha_opt"].as_f64().unwrap();
    assert!((0.5..=0.7).contains(&alpha), "alpha_opt {alpha}");
    assert_eq!(v["per_alpha"].as_array().unwrap().len(), 71);
}

#[test]
fn landscape_rows() {
    let o = xxchain(&[
        "landscape",
        "--n",
        "11",
        "--alpha-range",
        "0.5:0.6:0.1",
        "--t-range",
        "0:1:0.5",
    ]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("alpha,t,fidelity"));
    assert_eq!(text.lines().count(), 1 + 2 * 3);
}

#[test]
fn oracle_check_small() {
    let o = xxchain(&["oracle-check", "--n-max", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("18 of 18 checks passed"));
}
