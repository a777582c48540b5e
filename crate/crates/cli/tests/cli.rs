use multipole::presets::Preset;
use multipole::Scene;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multipole"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_far_scene(dir: &Path) {
    let out = run(dir, &["validate", "--preset", "far", "--echo"]);
    assert_eq!(code(&out), 0);
    fs::write(dir.join("far.json"), &out.stdout).unwrap();
}

#[test]
fn echo_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        &["validate", "--preset", "close", "-k", "3", "--echo"],
    );
    assert_eq!(code(&out), 0);
    let parsed = Scene::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(parsed, Preset::Close.scene(3.0));

    fs::write(dir.path().join("s.json"), &out.stdout).unwrap();
    let again = run(dir.path(), &["validate", "s.json", "--echo"]);
    assert_eq!(again.stdout, out.stdout);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    fs::write(
        d.join("overlap.json"),
        r#"{"cylinders":[{"center":[0,0],"radius":1},{"center":[1.5,0],"radius":1}],
            "wavenumber":1,"incident":{"type":"plane","angle":0}}"#,
    )
    .unwrap();
    fs::write(d.join("junk.json"), "{nope").unwrap();

    assert_eq!(code(&run(d, &["validate", "overlap.json"])), 1);
    assert_eq!(code(&run(d, &["solve", "overlap.json"])), 1);
    assert_eq!(code(&run(d, &["solve", "junk.json"])), 1);
    assert_eq!(code(&run(d, &["solve", "missing.json"])), 3);
    assert_eq!(code(&run(d, &["sweep", "--preset", "far", "-k", "15"])), 1);
    // output directory blocked by a plain file
    fs::write(d.join("blocked"), "").unwrap();
    assert_eq!(
        code(&run(d, &["bounds", "--preset", "far", "-o", "blocked"])),
        3
    );
    // too few reflections for an almost-touching pair
    fs::write(
        d.join("touching.json"),
        r#"{"cylinders":[{"center":[0,0],"radius":1},{"center":[2.01,0],"radius":1},{"center":[4.02,0],"radius":1}],
            "wavenumber":1,"incident":{"type":"plane","angle":0.4}}"#,
    )
    .unwrap();
    assert_eq!(
        code(&run(
            d,
            &["solve", "touching.json", "--backend", "reflections"]
        )),
        2
    );
}

#[test]
fn sweep_on_the_well_separated_scene() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    write_far_scene(d);
    let out = run(d, &["sweep", "far.json", "-k", "0.6", "-n", "1..25"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(d.join("out/far_k0.6.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("N,E,gamma1,gamma2"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 25);
    for (i, row) in rows.iter().enumerate() {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols[0], (i + 1).to_string());
        assert!(cols[1].parse::<f64>().unwrap() > 0.0);
    }
    let script = fs::read_to_string(d.join("out/far_k0.6.gp")).unwrap();
    assert!(script.contains("'far_k0.6.csv'"));
}

#[test]
fn sweep_options() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run(
        d,
        &[
            "sweep",
            "--preset",
            "moderate",
            "-k",
            "0.6,3",
            "-n",
            "0..12",
            "--norm",
            "lhalf",
            "--first-order",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    for k in ["0.6", "3"] {
        let csv = fs::read_to_string(d.join(format!("out/moderate_k{k}.csv"))).unwrap();
        assert!(csv.starts_with("N,E,gamma1,gamma2,E1_surrogate\n"));
        assert_eq!(csv.lines().count(), 14);
    }
    assert_ne!(
        code(&run(d, &["sweep", "--preset", "far", "-n", "9..3"])),
        0
    );
}

#[test]
fn bounds_at_zero_modes_are_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["bounds", "--preset", "close", "-n", "0..4"]);
    assert_eq!(code(&out), 0);
    let csv = fs::read_to_string(dir.path().join("out/close_bounds.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "N,gamma1,gamma2");
    let zero: Vec<f64> = rows[1].split(',').map(|c| c.parse().unwrap()).collect();
    assert_eq!(zero, vec![0.0, 1.0, 1.0]);
    assert_eq!(rows.len(), 6);
}

#[test]
fn solve_writes_every_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for backend in ["dense", "gmres", "reflections", "first-order"] {
        let out = run(
            d,
            &[
                "solve",
                "--preset",
                "moderate",
                "-n",
                "4",
                "--backend",
                backend,
                "-o",
                backend,
            ],
        );
        assert_eq!(
            code(&out),
            0,
            "{backend}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let csv =
            fs::read_to_string(d.join(backend).join("moderate_k0.6_N4_coefficients.csv")).unwrap();
        let rows: Vec<&str> = csv.lines().collect();
        assert_eq!(rows[0], "p,m,re,im");
        assert_eq!(rows.len(), 1 + 3 * 9);
        assert!(rows[1].starts_with("0,-4,"));
    }
    let dense = fs::read_to_string(d.join("dense/moderate_k0.6_N4_coefficients.csv")).unwrap();
    let gmres = fs::read_to_string(d.join("gmres/moderate_k0.6_N4_coefficients.csv")).unwrap();
    for (a, b) in dense.lines().zip(gmres.lines()).skip(1) {
        let a: Vec<f64> = a.split(',').skip(2).map(|c| c.parse().unwrap()).collect();
        let b: Vec<f64> = b.split(',').skip(2).map(|c| c.parse().unwrap()).collect();
        assert!((a[0] - b[0]).abs() < 1e-10 && (a[1] - b[1]).abs() < 1e-10);
    }
}

#[test]
fn field_grid() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = run(
        d,
        &[
            "field",
            "--preset",
            "close",
            "-n",
            "12",
            "--window=-3,3,-2,2",
            "--resolution",
            "13,9",
        ],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(d.join("out/close_k0.6_field.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "x,y,re_total,im_total,abs_total,inside");
    assert_eq!(rows.len(), 1 + 13 * 9);
    // the grid centre is the centre of the largest cylinder
    assert_eq!(
        rows[1 + 4 * 13 + 6],
        "0.0000000000000000e0,0.0000000000000000e0,nan,nan,nan,1"
    );
    assert!(rows[1].ends_with(",0"));
    assert!(d.join("out/close_k0.6_field.gp").exists());
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for (threads, out) in [("1", "a"), ("3", "b")] {
        let args = [
            "--threads",
            threads,
            "sweep",
            "--preset",
            "close",
            "-k",
            "0.6,3",
            "-n",
            "0..15",
            "-o",
            out,
        ];
        assert_eq!(code(&run(d, &args)), 0);
        let args = [
            "--threads",
            threads,
            "field",
            "--preset",
            "moderate",
            "-n",
            "10",
            "--resolution",
            "30,20",
            "-o",
            out,
        ];
        assert_eq!(code(&run(d, &args)), 0);
    }
    for name in ["close_k0.6.csv", "close_k3.csv", "moderate_k0.6_field.csv"] {
        let a = fs::read(d.join("a").join(name)).unwrap();
        let b = fs::read(d.join("b").join(name)).unwrap();
        assert!(a == b, "{name} differs between thread counts");
    }
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["selftest"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[PASS]"));
}
