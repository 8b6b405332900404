use std::path::PathBuf;
use std::process::{Command, Output};

use dgdef::format::{artin_to_text, dgla_to_text, parse, to_artin, to_dgla};
use dgdef::harness::zoo;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn dgdef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgdef"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn temp_file(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

#[test]
fn shipped_files_validate() {
    for f in [
        "lobs.dgla",
        "labh1.dgla",
        "aff.dgla",
        "t2.artin",
        "t3.artin",
        "dual1.artin",
        "t3_to_t2.ext",
        "square.bigraded",
        "point.complex",
    ] {
        let o = dgdef(&["validate", &data(f)]);
        assert_eq!(code(&o), 0, "{f}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).starts_with("valid"));
    }
}

#[test]
fn parse_errors_exit_4_with_position() {
    let f = temp_file("[meta]\nkind = dgla\n[space]\nu x\n");
    let o = dgdef(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 4);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 4, column 3"), "{err}");
    let o = dgdef(&["validate", "/nonexistent/file.dgla"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn validation_errors_exit_2() {
    // [u, u] = u has the wrong degree
    let f = temp_file("[meta]\nkind = dgla\n[space]\nu 1\n[bracket]\nu, u -> u\n");
    assert_eq!(code(&dgdef(&["validate", f.path().to_str().unwrap()])), 2);
    // d^2 != 0
    let f = temp_file("[meta]\nkind = dgla\n[space]\na 0\nb 1\nc 2\n[differential]\na -> b\nb -> c\n");
    assert_eq!(code(&dgdef(&["validate", f.path().to_str().unwrap()])), 2);
    // u@t is not MC over k[t]/t^3 in Lobs
    let o = dgdef(&["mc-check", &data("lobs.dgla"), &data("t3.artin"), &data("lobs_t.elem")]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("v@t^2"));
}

#[test]
fn mc_lift_exit_codes() {
    let o = dgdef(&["mc-lift", &data("lobs.dgla"), "--tower", "t^4"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("no lift"));
    let o = dgdef(&["mc-lift", &data("labh1.dgla"), "--tower", "t^5"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 4);
    let o = dgdef(&["mc-lift", &data("lobs.dgla"), "--tower", "t^4", "--element", &data("lobs_u.elem")]);
    assert_eq!(code(&o), 3);
    let o = dgdef(&["mc-lift", &data("lobs.dgla"), "--tower", "s^4"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn obstruction_routes() {
    let o = dgdef(&["obstruction", &data("lobs.dgla"), &data("t3_to_t2.ext"), &data("lobs_t.elem")]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("liftable: false") && s.contains("routes agree: true"), "{s}");
    let o = dgdef(&[
        "--json",
        "obstruction",
        &data("labh1.dgla"),
        &data("t3_to_t2.ext"),
        &data("labh1_t.elem"),
    ]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["liftable"], serde_json::Value::Bool(true));
}

#[test]
fn gauge_and_simplex() {
    let args = [&data("aff.dgla"), &data("t3.artin"), &data("aff_gauge.elem"), &data("aff_omega.elem")];
    let o = dgdef(&["gauge-act", args[0], args[1], args[2], args[3]]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("y@t + y@t^2"));
    let o = dgdef(&["one-simplex", args[0], args[1], args[2], args[3]]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("MC on the simplex: true"));
}

#[test]
fn emitted_algebras_reparse() {
    for (cmd, file, flag) in [
        ("bar", "lobs.dgla", "--order"),
        ("bar", "aff.dgla", "--order"),
        ("cobar", "t3.artin", "--order"),
    ] {
        let o = dgdef(&[cmd, &data(file), flag, "3"]);
        assert_eq!(code(&o), 0);
        let f = temp_file(&stdout(&o));
        assert_eq!(code(&dgdef(&["validate", f.path().to_str().unwrap()])), 0, "{cmd} {file}");
    }
    let o = dgdef(&["tot", &data("square.bigraded")]);
    let f = temp_file(&stdout(&o));
    assert_eq!(code(&dgdef(&["validate", f.path().to_str().unwrap()])), 0);
}

#[test]
fn zoo_roundtrips_through_text() {
    for l in zoo() {
        assert_eq!(to_dgla(&parse(&dgla_to_text(&l)).unwrap()).unwrap(), l);
    }
    for n in 2..6 {
        let a = dgdef::artin::truncated_polynomial(n).unwrap();
        assert_eq!(to_artin(&parse(&artin_to_text(&a)).unwrap()).unwrap(), a);
    }
}

#[test]
fn reports_and_checks() {
    let o = dgdef(&["cohomology", &data("lobs.dgla"), "--range", "0..3"]);
    assert_eq!(stdout(&o), "H^0: 0\nH^1: 1  [u]\nH^2: 1  [v]\nH^3: 0\n");
    let o = dgdef(&["nerve-pi", &data("lobs.dgla"), &data("dual1.artin")]);
    assert_eq!(stdout(&o), "pi_0: 1\npi_1: 1\npi_2: 0\n");
    let o = dgdef(&["adjunction-check", &data("aff.dgla"), &data("t3.artin"), &data("aff_omega.elem")]);
    assert_eq!(code(&o), 0);
    let o = dgdef(&["counit-check", &data("aff.dgla"), "--weight", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("acyclic: true\n"));
    let o = dgdef(&["denormalize", &data("square.bigraded"), "--level", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).matches("kind = artin").count(), 3);
    let o = dgdef(&["tangent", &data("lobs.dgla"), "--range", "0..2", "--dd", &data("point.complex")]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("H^0(F): 1"));
}

#[test]
fn battery_is_deterministic_and_flags_broken_functor() {
    let run = || dgdef(&["battery", &data("lobs.dgla"), "--functor", "broken", "--samples", "2"]);
    let (a, b) = (run(), run());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let s = stdout(&a);
    assert!(s.contains("[FAIL] axiom 4-inj") && s.contains("verdict: PreDeformation"), "{s}");
    let o = dgdef(&["--json", "battery", &data("lobs.dgla"), "--functor", "def", "--kind", "manetti"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["verdict"], "Deformation");
}
