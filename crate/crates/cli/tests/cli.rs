use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpgraphene")).args(args).output().expect("binary runs")
}

fn run_threads(args: &[&str], threads: usize) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpgraphene"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads.to_string())
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// (metadata, header, rows) of a CSV document.
fn parse_csv(text: &str) -> (Vec<String>, Vec<String>, Vec<Vec<String>>) {
    let meta: Vec<String> = text.lines().filter(|l| l.starts_with('#')).map(String::from).collect();
    let mut body = text.lines().filter(|l| !l.starts_with('#'));
    let header = body.next().unwrap().split(',').map(String::from).collect();
    let rows = body.map(|l| l.split(',').map(String::from).collect()).collect();
    (meta, header, rows)
}

fn column(text: &str, name: &str) -> Vec<f64> {
    let (_, header, rows) = parse_csv(text);
    let i = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn compute_csv_layout_and_round_trip() {
    let out =
        stdout(&run(&["compute", "--atom", "Rb", "--material", "SiO2", "--coated", "--separations", "100,250,1000"]));
    let (meta, header, rows) = parse_csv(&out);
    assert_eq!(header, ["a_nm", "value_SI", "value_dimensionless", "terms_used", "est_error"]);
    assert!(meta.iter().any(|m| m.starts_with("# program = cpgraphene")));
    assert!(meta.iter().any(|m| m == "# coated = true"));
    assert!(meta.iter().any(|m| m.starts_with("# hbar_c_eV_nm")));
    assert_eq!(rows.len(), 3);
    for row in &rows {
        for (i, cell) in row.iter().enumerate() {
            if i == 3 {
                cell.parse::<usize>().unwrap();
                continue;
            }
            let x: f64 = cell.parse().unwrap();
            assert_eq!(&format!("{x:.16e}"), cell, "17 significant digits, exact re-emission");
        }
        let value: f64 = row[1].parse().unwrap();
        assert!(value < 0.0);
    }
    assert_eq!(column(&out, "a_nm"), [100.0, 250.0, 1000.0]);
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let args = [
        "ratio",
        "--atom",
        "He*",
        "--material",
        "Al2O3",
        "--a-start",
        "100",
        "--a-stop",
        "5000",
        "--a-count",
        "9",
        "--quantity",
        "force",
    ];
    let one = stdout(&run_threads(&args, 1));
    assert_eq!(one, stdout(&run_threads(&args, 4)));
    assert_eq!(one, stdout(&run_threads(&args, 2)));
}

#[test]
fn ratio_sweep_passes_through_reference_points() {
    let out = stdout(&run(&[
        "ratio",
        "--atom",
        "Rb",
        "--material",
        "SiO2",
        "--a-start",
        "100",
        "--a-stop",
        "6000",
        "--a-count",
        "5",
    ]));
    let r = column(&out, "ratio_coated_over_bare");
    assert!((r[0] - 1.10).abs() < 0.02 && (r[4] - 1.70).abs() < 0.02, "{r:?}");
}

#[test]
fn json_output() {
    let out = stdout(&run(&[
        "compute",
        "--atom",
        "Cs",
        "--material",
        "Au",
        "--separations",
        "300",
        "--format",
        "json",
        "--quantity",
        "force",
    ]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["columns"][0], "a_nm");
    assert_eq!(v["rows"][0][0], 300.0);
    assert!(v["rows"][0][1].as_f64().unwrap() < 0.0);
    assert_eq!(v["metadata"]["quantity"], "force");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    let out = dir.path().join("out.csv");
    std::fs::write(
        &cfg,
        "# sweep\natom = Rb\nmaterial = silica\ncoated = true\ntemperature = 300\nseparations = 100, 200\n",
    )
    .unwrap();
    let o =
        run(&["compute", "--config", cfg.to_str().unwrap(), "--separations", "400", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(column(&text, "a_nm"), [400.0]);
    assert!(text.contains("# coated = true"));

    std::fs::write(&cfg, "atom = Rb\nmaterial = SiO2\ntemperature = warm\nseparations = 100\n").unwrap();
    let o = run(&["compute", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("run.cfg:3, field `temperature`"));
}

#[test]
fn exit_codes() {
    let base = ["compute", "--atom", "Rb", "--separations", "100"];
    let code = |extra: &[&str]| {
        let mut args: Vec<&str> = base.to_vec();
        args.extend_from_slice(extra);
        run(&args).status.code()
    };
    assert_eq!(code(&["--material", "unobtainium"]), Some(1));
    assert_eq!(code(&["--material", "SiO2", "--format", "xml"]), Some(1));
    assert_eq!(code(&["--material", "SiO2", "--temperature", "0"]), Some(1));
    assert_eq!(code(&["--material", "SiO2", "--no-such-flag"]), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("bad.db");
    std::fs::write(&db, "glass oscillator 1.0:oops:0\n").unwrap();
    assert_eq!(code(&["--material", "glass", "--materials-db", db.to_str().unwrap()]), Some(2));

    assert_eq!(code(&["--material", "SiO2", "--max-terms", "12"]), Some(3));
    // far from the classical regime at 10 K
    let o = run(&["crossover", "--atom", "He*", "--material", "SiO2", "--coated", "--temperature", "10"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

fn narrow_table_db(dir: &Path) -> String {
    // ε(iξ) known only on [0.1, 1] eV, no extrapolation
    let rows: String = (0..=10)
        .map(|i| {
            let xi = 0.1 * 10f64.powf(i as f64 / 10.0);
            format!("{xi} {}\n", 1.0 + 2.8 / (1.0 + xi * xi / 100.0))
        })
        .collect();
    std::fs::write(dir.join("narrow.txt"), rows).unwrap();
    let db = dir.join("extra.db");
    std::fs::write(&db, "narrow imaginary-table narrow.txt\n").unwrap();
    db.to_str().unwrap().to_string()
}

#[test]
fn keep_going_records_failed_points() {
    let dir = tempfile::tempdir().unwrap();
    let db = narrow_table_db(dir.path());
    let out = dir.path().join("kg.csv");
    let args = ["compute", "--atom", "Rb", "--material", "narrow", "--materials-db", &db, "--separations", "100,20000"];
    let strict = run(&args);
    assert_eq!(strict.status.code(), Some(2));

    let mut kg: Vec<&str> = args.to_vec();
    kg.extend_from_slice(&["--keep-going", "--out", out.to_str().unwrap()]);
    let o = run(&kg);
    assert_eq!(o.status.code(), Some(2));
    let text = std::fs::read_to_string(&out).unwrap();
    let (_, header, rows) = parse_csv(&text);
    assert_eq!(header.last().unwrap(), "status");
    assert!(rows[0].last().unwrap().starts_with("error:"));
    assert_eq!(rows[0][1], "nan");
    assert_eq!(rows[1].last().unwrap(), "ok");
    assert!(rows[1][1].parse::<f64>().unwrap() < 0.0);
}

#[test]
fn inline_atom_and_material() {
    let out = stdout(&run(&[
        "compute",
        "--atom",
        "X:319.9:5.46",
        "--material",
        "oscillator 1.098:13.39:0 1.702:0.1237:0",
        "--separations",
        "500",
    ]));
    let named = stdout(&run(&["compute", "--atom", "Rb", "--material", "SiO2", "--separations", "500"]));
    assert_eq!(column(&out, "value_SI"), column(&named, "value_SI"));
}

#[test]
fn perfect_conductor_force_approaches_closed_form() {
    let out =
        stdout(&run(&["classical", "--atom", "He*", "--material", "perfect-conductor", "--separations", "6000,12000"]));
    let dev = column(&out, "rel_deviation");
    // the first nonzero Matsubara term still contributes ~2% at 6 μm
    assert!(dev[0] < 0.025 && dev[1] < 1e-4, "{dev:?}");
}

#[test]
fn crossover_for_coated_silica() {
    let out = stdout(&run(&["crossover", "--atom", "He*", "--material", "SiO2", "--coated"]));
    let line = out.lines().find(|l| l.starts_with("# crossover_a_nm")).unwrap();
    let a: f64 = line.rsplit(' ').next().unwrap().parse().unwrap();
    assert!((a - 5000.0).abs() <= 500.0, "{a}");
    assert_eq!(column(&out, "a_nm").len(), 66);
}

#[test]
fn figures() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["figures", "--out-dir", dir.path().to_str().unwrap(), "--a-count", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let read = |n: &str| std::fs::read_to_string(dir.path().join(format!("{n}.csv"))).unwrap();
    for n in ["fig1", "fig2a", "fig2b", "fig3", "fig4", "fig5", "fig6"] {
        assert_eq!(parse_csv(&read(n)).2.len(), 4, "{n}");
    }

    let fig5 = read("fig5");
    let last: Vec<f64> = ["Au", "Si", "Al2O3", "SiO2"].iter().map(|m| *column(&fig5, m).last().unwrap()).collect();
    assert_eq!(*column(&fig5, "a_nm").last().unwrap(), 10000.0);
    let (lo, hi) = last.iter().fold((f64::MAX, f64::MIN), |(l, h), &x| (l.min(x), h.max(x)));
    assert!(hi / lo - 1.0 < 0.03, "{last:?}");

    let fig6 = read("fig6");
    let au = *column(&fig6, "Au").last().unwrap();
    let sio2 = *column(&fig6, "SiO2").last().unwrap();
    assert!((sio2 / au / (2.8 / 4.8) - 1.0).abs() < 0.03);

    let fig1 = read("fig1");
    assert!(column(&fig1, "Au").iter().all(|r| (r - 1.0).abs() < 2e-3));
}
