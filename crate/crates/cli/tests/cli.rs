use std::process::{Command, Output};

fn ppsl2(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppsl2")).args(args).env("FAREY_PPSL2_THREADS", "2").output().unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn verify_usa_passes() {
    let o = ppsl2(&["verify", "usa", "--max-gen", "4", "--seed", "1", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!(j["schema"], 1);
    assert_eq!(j["passed"], true);
    assert_eq!(j["convention"]["display_sign"], -1);
    assert_eq!(j["convention"]["gamma_over_omega"], "-1/2");
}

#[test]
fn verify_flip_on_the_doe() {
    let o = ppsl2(&["verify", "flip", "--case", "doe"]);
    assert_eq!(o.status.code(), Some(0));
    let j = json(&o);
    assert_eq!(j["detail"]["cases"][0]["rows"].as_array().unwrap().len(), 8);
    assert_eq!(ppsl2(&["verify", "flip", "--case", "U^-1"]).status.code(), Some(0));
    assert_eq!(ppsl2(&["verify", "flip", "--case", "nonsense"]).status.code(), Some(2));
}

#[test]
fn forms_ratio_reports_the_measured_constant() {
    let o = ppsl2(&["verify", "forms-ratio", "--max-gen", "3"]);
    assert_eq!(o.status.code(), Some(1));
    let j = json(&o);
    assert_eq!(j["detail"]["ratio"], "-1/2");
    assert_eq!(j["failure"]["reason"], "|gamma/omega| != 4");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ppsl2(&["verify"]).status.code(), Some(2));
    assert_eq!(ppsl2(&["verify", "usa"]).status.code(), Some(2), "seed is mandatory");
    assert_eq!(ppsl2(&["fourier", "wavelet", "--word", "S X"]).status.code(), Some(2));
    assert_eq!(ppsl2(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "bracket", "--samples", "50", "--seed", "9"];
    let (a, b) = (ppsl2(&args), ppsl2(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let e = ["verify", "eisenstein", "--seed", "3"];
    assert_eq!(ppsl2(&e).stdout, ppsl2(&e).stdout);
}

#[test]
fn fourier_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("w.csv");
    let o = ppsl2(&["fourier", "wavelet", "--word", "ST", "--nmax", "8", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "word,n,re,im,oracle_re,oracle_im,abs_err");
    assert_eq!(lines.len(), 1 + 14);
    let h = ppsl2(&["fourier", "hyperfan", "--word", "I", "--nmax", "3"]);
    assert_eq!(String::from_utf8(h.stdout).unwrap().lines().count(), 1 + 7);
    let wt = String::from_utf8(ppsl2(&["fourier", "witt", "-n", "4", "--max-gen", "5"]).stdout).unwrap();
    assert_eq!(wt.lines().next(), Some("n,g,max_error"));
    assert_eq!(wt.lines().count(), 6);
}

#[test]
fn enumerate_and_classify() {
    let j = json(&ppsl2(&["enumerate", "farey", "--count", "4"]));
    let pts: Vec<&str> = j["points"].as_array().unwrap().iter().map(|p| p["point"].as_str().unwrap()).collect();
    assert_eq!(pts, ["0/1", "1/0", "1/1", "-1/1"]);
    let c = json(&ppsl2(&["coset", "classify", "S", "US", "T^-1"]));
    let ks: Vec<u64> = c["classes"].as_array().unwrap().iter().map(|x| x["coset"].as_u64().unwrap()).collect();
    assert_eq!(ks, [3, 4, 1]);
}

#[test]
fn tess_build_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let lam = dir.path().join("l.json");
    std::fs::write(&lam, r#"{"I": "9/4"}"#).unwrap();
    let out = dir.path().join("t.json");
    let o = ppsl2(&["tess", "build", "--max-gen", "3", "--lambdas", lam.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = ppsl2(&["verify", "tess-roundtrip", "--max-gen", "3", "--samples", "3", "--seed", "1", "--input", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    std::fs::write(&lam, r#"{"I": "2"}"#).unwrap();
    assert_eq!(ppsl2(&["tess", "build", "--max-gen", "3", "--lambdas", lam.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn expand_a_field() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("f.json");
    let field = ppsl2::wavelets::hyperfan(&ppsl2::GroupElement::identity()).scale(&ppsl2::rat(3, 2));
    std::fs::write(&f, field.to_json().to_string()).unwrap();
    let j = json(&ppsl2(&["expand", "basis", "--field", f.to_str().unwrap()]));
    assert_eq!(j["by_word"]["I"], "3/2");
    std::fs::write(&f, "{}").unwrap();
    assert_eq!(ppsl2(&["expand", "basis", "--field", f.to_str().unwrap()]).status.code(), Some(2));
}
