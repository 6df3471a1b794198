use std::path::Path;
use std::process::{Command, Output};

use algcohom::extension::{ExtensionContext, ThreeCocycle, ThreeCocycleJson, TwoCocycle, TwoCocycleJson};
use algcohom::presentation::builtins::{bundle, CATALOG};
use algcohom::FieldSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_algcohom")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn dims(report: &Value) -> Vec<u64> {
    report["degrees"].as_array().unwrap().iter().map(|d| d["dim"].as_u64().unwrap()).collect()
}

fn write(dir: &Path, name: &str, v: &impl serde::Serialize) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string_pretty(v).unwrap()).unwrap();
    path.display().to_string()
}

const DUAL: [&str; 3] = ["builtin:dual_numbers", "builtin:quotient_k", "builtin:trivial_module"];

#[test]
fn dual_numbers_cohomology_table() {
    let o = run(&["cohomology", DUAL[0], DUAL[1], DUAL[2], "--n", "4"]);
    assert_eq!(code(&o), 0);
    let expected = "\
H^n(A,R,M) over Q, N = 4
n  dim C^n  dim Z^n  dim B^n  dim H^n
-  -------  -------  -------  -------
0        1        1        0        1
1        1        0        0        0
2        3        2        1        1
3        9        2        1        1
";
    assert_eq!(stdout(&o), expected);
}

#[test]
fn projective_comparison_is_iso() {
    for m in ["builtin:regular", "builtin:trivial_module"] {
        let v = json(&["compare", "builtin:k_times_k", "builtin:quotient_point", m]);
        let entries = v["entries"].as_array().unwrap();
        assert_eq!(entries.len(), 4);
        assert!(entries.iter().all(|e| e["iso"] == Value::Bool(true)));
    }
}

#[test]
fn selftest_passes() {
    let o = run(&["selftest", "--seed", "42"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["--format", "json", "cohomology", DUAL[0], DUAL[1], DUAL[2]][..],
        &["--format", "json", "compare", "builtin:dual_numbers", "builtin:r_equals_a", "builtin:regular"][..],
        &["builtin", "emit", "sl2", "--field", "Fp:7"][..],
        &["selftest", "--seed", "3", "--format", "json"][..],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout, "{args:?}");
    }
}

#[test]
fn usage_errors_exit_64() {
    for args in [
        &["cohomology", "builtin:nope", "builtin:quotient_k", "builtin:trivial_module"][..],
        &["cohomology", DUAL[0], DUAL[1], DUAL[2], "--n", "0"][..],
        &["cohomology", DUAL[0], DUAL[1], DUAL[2], "--cap", "999"][..],
        &["cohomology", DUAL[0], DUAL[1]][..],
        &["cohomology", DUAL[0], DUAL[1], DUAL[2], "--format", "xml"][..],
        &["cohomology", DUAL[0], DUAL[1], "/nonexistent/m.json"][..],
        &["ext2", "classify", DUAL[0], DUAL[1], DUAL[2]][..],
        &["frobnicate"][..],
    ] {
        let o = run(args);
        assert_eq!(code(&o), 64, "{args:?}");
        assert!(o.stdout.is_empty());
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn size_cap_is_a_rejection() {
    let o =
        run(&["cohomology", "builtin:k_times_k", "builtin:regular", "builtin:regular", "--n", "9", "--cap", "1000"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn lie_cohomology_of_sl2() {
    let v = json(&["cohomology", "builtin:base_field", "builtin:sl2", "builtin:trivial_module", "--lie"]);
    assert_eq!(dims(&v)[1..], [0, 0, 1]);
    let v = json(&["compare", "builtin:k_times_k", "builtin:projective_lie", "builtin:trivial_module", "--lie"]);
    assert!(v["entries"].as_array().unwrap().iter().all(|e| e["iso"] == Value::Bool(true)));
}

#[test]
fn hochschild_over_field_and_over_a() {
    let over_k = json(&["hochschild", "builtin:dual_numbers", "builtin:regular"]);
    let total = json(&["cohomology", "builtin:base_field", "builtin:dual_numbers", "builtin:regular"]);
    assert_eq!(dims(&over_k), dims(&total));
    let over_a = json(&["hochschild", DUAL[1], DUAL[2], "--over-a", DUAL[0]]);
    assert_eq!(dims(&over_a)[2], 0);
}

#[test]
fn builtin_list_names_every_builtin() {
    let o = run(&["builtin", "list"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for e in CATALOG {
        assert!(text.lines().any(|l| l.starts_with(e.name)), "{}", e.name);
    }
}

#[test]
fn emitted_builtins_validate() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["dual_numbers", "k_times_k", "trunc_poly:3", "sl2", "projective_lie"] {
        let v = json(&["builtin", "emit", name, "--field", "Fp:5"]);
        let files: Vec<String> = v["presentations"]
            .as_array()
            .unwrap()
            .iter()
            .enumerate()
            .map(|(i, p)| write(dir.path(), &format!("{}-{i}.json", name.replace(':', "_")), p))
            .collect();
        let mut args = vec!["validate"];
        args.extend(files.iter().map(String::as_str));
        let o = run(&args);
        assert_eq!(code(&o), 0, "{name}: {}", stdout(&o));
    }
}

#[test]
fn broken_presentation_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let mut v = json(&["builtin", "emit", "dual_numbers"]);
    let a = &mut v["presentations"][0];
    a["mult"][1][0][0] = Value::String("1".into());
    let path = write(dir.path(), "a.json", a);
    let o = run(&["validate", &path]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    assert!(stdout(&o).contains("invalid"));
}

#[test]
fn file_inputs_match_builtins() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&["builtin", "emit", "dual_numbers"]);
    let files: Vec<String> = (0..3).map(|i| write(dir.path(), &format!("{i}.json"), &v["presentations"][i])).collect();
    let from_files = run(&["cohomology", &files[0], &files[1], &files[2]]);
    let from_builtins = run(&["cohomology", DUAL[0], DUAL[1], DUAL[2]]);
    assert_eq!(code(&from_files), 0);
    assert_eq!(from_files.stdout, from_builtins.stdout);
    let o = run(&["cohomology", &files[0], &files[1], &files[2], "--field", "Fp:3"]);
    assert_eq!(code(&o), 64);
}

#[test]
fn extension_roundtrip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let field = FieldSpec::prime(5).unwrap();
    let t = bundle("dual_numbers", field, &[]).unwrap().expect_assoc().unwrap();
    let ctx = ExtensionContext::new(&t).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let base = ["--field", "Fp:5"];
    let with = |extra: &[&str]| -> Vec<String> {
        let mut v: Vec<String> = base.iter().map(|s| s.to_string()).collect();
        v.extend(extra.iter().map(|s| s.to_string()));
        v
    };
    for i in 0..3 {
        let z = ctx.random_cocycle2(&mut rng);
        let zf = write(dir.path(), &format!("z{i}.json"), &z.to_json());
        let args = with(&["ext2", "check", DUAL[0], DUAL[1], DUAL[2], "--cocycle", &zf]);
        assert_eq!(code(&run(&args.iter().map(String::as_str).collect::<Vec<_>>())), 0);

        let args = with(&["ext2", "build", DUAL[0], DUAL[1], DUAL[2], "--cocycle", &zf]);
        let o = run(&args.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let ef = dir.path().join(format!("e{i}.json"));
        std::fs::write(&ef, &o.stdout).unwrap();
        let ef = ef.display().to_string();

        for section in ["first", "last"] {
            let args = with(&["ext2", "extract", DUAL[0], DUAL[1], DUAL[2], "--extension", &ef, "--section", section]);
            let o = run(&args.iter().map(String::as_str).collect::<Vec<_>>());
            assert_eq!(code(&o), 0);
            let back: TwoCocycleJson = serde_json::from_slice(&o.stdout).unwrap();
            assert!(ctx.cohomologous2(&z, &TwoCocycle::from_json(&back).unwrap()).unwrap());
        }

        let ext = ctx.build_extension(&z).unwrap();
        let cf = write(dir.path(), &format!("c{i}.json"), &ctx.crossed_from_extension(&ext).unwrap().to_json());
        let args = with(&["ext3", "from-crossed", DUAL[0], DUAL[1], DUAL[2], "--crossed", &cf]);
        let o = run(&args.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        let w: ThreeCocycleJson = serde_json::from_slice(&o.stdout).unwrap();
        assert!(ctx.is_coboundary3(&ThreeCocycle::from_json(&w).unwrap()).unwrap().is_some());
        let wf = dir.path().join(format!("w{i}.json"));
        std::fs::write(&wf, &o.stdout).unwrap();
        let args = with(&["ext3", "check", DUAL[0], DUAL[1], DUAL[2], "--cocycle", &wf.display().to_string()]);
        assert_eq!(code(&run(&args.iter().map(String::as_str).collect::<Vec<_>>())), 0);
    }
}

#[test]
fn non_cocycle_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let field = FieldSpec::Rationals;
    let t = bundle("k_times_k", field, &[]).unwrap().expect_assoc().unwrap();
    let ctx = ExtensionContext::new(&t).unwrap();
    let mut z = ctx.zero2();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        z.f = ctx.random_cochain(&mut rng, z.f.degree);
        if !ctx.check_z2(&z).unwrap().is_cocycle {
            break;
        }
    }
    assert!(!ctx.check_z2(&z).unwrap().is_cocycle);
    let zf = write(dir.path(), "z.json", &z.to_json());
    let r = ["builtin:k_times_k", "builtin:regular", "builtin:regular"];
    let o = run(&["ext2", "check", r[0], r[1], r[2], "--cocycle", &zf]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("not a cocycle"));
    let o = run(&["ext2", "build", r[0], r[1], r[2], "--cocycle", &zf]);
    assert_eq!(code(&o), 1);
}

#[test]
fn classify_over_f2() {
    let v = json(&["ext2", "classify", DUAL[0], DUAL[1], DUAL[2], "--field", "Fp:2"]);
    assert_eq!(v["classes"], 1u64 << v["h2_dim"].as_u64().unwrap());
}
