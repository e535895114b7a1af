use std::process::Command;

fn airytr(args: &[&str]) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_airytr")).args(args).output().unwrap();
    (o.status.code().unwrap(), String::from_utf8(o.stdout).unwrap())
}

#[test]
fn exit_codes_of_the_binary() {
    let dir = std::env::temp_dir().join(format!("airytr-bin-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("airy.json");
    let (c, _) = airytr(&["curve", "run", "--curve", "airy", "--chi-max", "4", "--order", "24", "--out", out.to_str().unwrap()]);
    assert_eq!(c, 0);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let w03 = doc["correlators"].as_array().unwrap().iter().find(|b| b["h"] == 0 && b["n"] == 3).unwrap();
    assert_eq!(w03["entries"][0], serde_json::json!({"index": [1, 1, 1], "num": "1", "den": "2"}));

    assert_eq!(airytr(&["curve", "run", "--curve", "airy", "--chi-max", "0"]).0, 2);
    let (c, o) = airytr(&["airy", "expand", "--conic", "--degree", "12"]);
    assert_eq!((c, o.trim()), (0, "1,2,5,14,42,132,429,1430,4862,16796,58786"));
    assert_eq!(airytr(&["cross-validate"]).0, 0);
    assert_eq!(airytr(&["cross-validate", "--test-kernel-factor", "2/3"]).0, 3);
    assert_eq!(airytr(&["family", "check", "--skip", "relat"]).0, 0);
    // relat fails on this family; see the README
    assert_eq!(airytr(&["family", "check"]).0, 3);
    assert_eq!(airytr(&["family", "check", "--q", "x^4-2x^2+1"]).0, 4);
    let (c, o) = airytr(&["family", "check", "--tol", "1e-15", "--skip", "relat"]);
    assert_eq!(c, 3);
    assert!(o.contains("below the numeric floor"));
}
