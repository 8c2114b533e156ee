use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qaoa_symmetry::graphio::families;
use rand::SeedableRng;
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qaoa-sym"));
    c.env_remove("QAOA_SYM_THREADS");
    c
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str], path: &Path) -> Output {
    bin().args(args).arg(path).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn orbits_of_triangle_and_path() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", "0 1\n1 2\n2 0\n");
    let v = json(&run(&["orbits"], &tri));
    assert_eq!(v["classes"].as_array().unwrap().len(), 1);
    assert_eq!(v["classes"][0]["rep"], serde_json::json!([0, 1]));
    assert_eq!(v["classes"][0]["size"], 3);

    let p3 = write(&dir, "p3.txt", "a b\nb c\n");
    let v = json(&run(&["orbits"], &p3));
    assert_eq!(v["classes"].as_array().unwrap().len(), 1);
    assert_eq!(v["classes"][0]["size"], 2);
}

#[test]
fn weights_only_count_when_asked() {
    let dir = TempDir::new().unwrap();
    let p3 = write(&dir, "p3.txt", "0 1 1\n1 2 2\n");
    assert_eq!(
        json(&run(&["orbits"], &p3))["classes"]
            .as_array()
            .unwrap()
            .len(),
        1
    );
    assert_eq!(
        json(&run(&["orbits", "--weighted"], &p3))["classes"]
            .as_array()
            .unwrap()
            .len(),
        2
    );
}

#[test]
fn random_cubic_graph_is_asymmetric() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let g = families::random_bounded_degree(100, 3, &mut rng);
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "r3.txt", &g.to_edge_list());
    let v = json(&run(&["orbits"], &path));
    assert_eq!(v["classes"].as_array().unwrap().len(), g.n_edges());
}

#[test]
fn energy_modes_agree() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", "0 1\n1 2\n2 0\n");
    for mode in ["--full", "--reduced"] {
        let v = json(&run(
            &[
                "energy", "--p", "1", "--betas", "0.3", "--gammas", "0", mode,
            ],
            &tri,
        ));
        assert_eq!(v["energy"], 1.5);
    }

    let pet = write(&dir, "petersen.txt", &families::petersen().to_edge_list());
    let args = [
        "energy", "--p", "2", "--betas", "0.3,0.1", "--gammas", "0.4,0.9",
    ];
    let full = json(&run(&[&args[..], &["--full"]].concat(), &pet));
    let reduced = json(&run(&args, &pet));
    assert_eq!(reduced["n_terms_evaluated"], 1);
    assert_eq!(full["n_terms_evaluated"], 15);
    let diff = full["energy"].as_f64().unwrap() - reduced["energy"].as_f64().unwrap();
    assert!(diff.abs() <= 1e-9);
}

#[test]
fn energy_with_saved_orbits() {
    let dir = TempDir::new().unwrap();
    let c6 = write(&dir, "c6.txt", &families::cycle(6).to_edge_list());
    let orbits = run(&["orbits"], &c6);
    let saved = write(
        &dir,
        "orbits.json",
        std::str::from_utf8(&orbits.stdout).unwrap(),
    );
    let saved = saved.to_str().unwrap();
    let args = ["energy", "--p", "1", "--betas", "0.2", "--gammas", "0.5"];
    let a = json(&run(&[&args[..], &["--orbits", saved]].concat(), &c6));
    let b = json(&run(&args, &c6));
    assert_eq!(a, b);

    // A partition for a different instance is refused as bad input.
    let c5 = write(&dir, "c5.txt", &families::cycle(5).to_edge_list());
    let out = run(&[&args[..], &["--orbits", saved]].concat(), &c5);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.txt", "0 0\n");
    assert_eq!(run(&["orbits"], &bad).status.code(), Some(2));
    assert_eq!(
        run(&["orbits"], &dir.path().join("missing.txt"))
            .status
            .code(),
        Some(2)
    );

    let tri = write(&dir, "tri.txt", "0 1\n1 2\n2 0\n");
    let wrong_len = run(
        &[
            "energy", "--p", "2", "--betas", "0.1", "--gammas", "0.1,0.2",
        ],
        &tri,
    );
    assert_eq!(wrong_len.status.code(), Some(2));

    let k8 = write(&dir, "k8.txt", &families::complete(8).to_edge_list());
    let wide = run(
        &[
            "energy",
            "--p",
            "1",
            "--betas",
            "0.1",
            "--gammas",
            "0.2",
            "--width-guard",
            "4",
        ],
        &k8,
    );
    assert_eq!(wide.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&wide.stderr).contains("spans 8 qubits"));

    let slow = run(&["orbits", "--timeout", "0"], &k8);
    assert_eq!(slow.status.code(), Some(4));
}

#[test]
fn optimize_single_edge() {
    let dir = TempDir::new().unwrap();
    let edge = write(&dir, "edge.txt", "0 1\n");
    let v = json(&run(&["optimize", "--p", "1"], &edge));
    assert!((v["energy"].as_f64().unwrap() - 1.0).abs() <= 1e-4);
    assert!(v["n_evaluations"].as_u64().unwrap() > 64);
    assert_eq!(v["params"]["betas"].as_array().unwrap().len(), 1);
}

#[test]
fn rqaoa_on_hexagon() {
    let dir = TempDir::new().unwrap();
    let c6 = write(&dir, "c6.txt", &families::cycle(6).to_edge_list());
    let v = json(&run(&["rqaoa", "--p", "1"], &c6));
    assert_eq!(v["objective"], 6.0);
    assert_eq!(v["steps"].as_array().unwrap().len(), 4);
    assert_eq!(v["assignment"].as_array().unwrap().len(), 6);
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let pet = write(&dir, "petersen.txt", &families::petersen().to_edge_list());
    for args in [
        &["optimize", "--p", "1", "--seed", "9"][..],
        &["rqaoa", "--seed", "4", "--cutoff", "5"][..],
        &["energy", "--p", "1", "--betas", "0.3", "--gammas", "0.2"][..],
    ] {
        let a = run(args, &pet);
        let b = bin()
            .args(args)
            .arg(&pet)
            .env("QAOA_SYM_THREADS", "1")
            .output()
            .unwrap();
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn bench_reports_one_orbit_on_torus() {
    let dir = TempDir::new().unwrap();
    let torus = write(
        &dir,
        "grid-w-2-8.txt",
        &families::torus(&[8, 8]).to_edge_list(),
    );
    let v = json(&run(&["bench", "--p", "1"], &torus));
    assert_eq!(v[0]["n_orb"], 1);
    assert_eq!(v[0]["n_edges"], 128);
    assert_eq!(v[0]["graph_name"], "grid-w-2-8");
    assert_eq!(v[0]["simulations_reduced"], 1);

    let out = run(&["bench", "--csv"], &torus);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("Name,|E|,|V|,N_orb,t_aut,t_s,t_acc,S"));
    assert!(lines.next().unwrap().starts_with("grid-w-2-8,128,64,1,"));
}
