use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn pblin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pblin"))
        .args(args)
        .env_remove("PBLIN_SOLVER_CMD")
        .env_remove("PBLIN_SOLVER_MODE")
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = pblin(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    pblin(args).status.code().unwrap()
}

#[test]
fn expand_labs() {
    assert_eq!(
        stdout(&["expand", "--labs", "3"]),
        "n=3\n5\n-4 * x1\n-4 * x3\n8 * x1*x3\n"
    );
    assert_eq!(code(&["expand", "--labs", "2"]), 2);
    assert_eq!(code(&["expand", "--labs", "21"]), 3);
}

#[test]
fn expand_canonicalizes_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("affine.poly");
    std::fs::write(&path, "n=2\n# comment\nx2\n3/6\n2 * x1\n").unwrap();
    assert_eq!(
        stdout(&["expand", path.to_str().unwrap()]),
        "n=2\n1/2\n2 * x1\n1 * x2\n"
    );
}

#[test]
fn lc_families() {
    let worked = golden("worked.poly");
    let worked = worked.to_str().unwrap();
    let out = stdout(&["lc", worked, "--family", "C"]);
    assert!(out.starts_with("family=C n=3 k=1 exact=true verified=true\n"), "{out}");
    assert!(stdout(&["lc", worked, "--family", "M"]).contains(" k=4 "));
    assert!(stdout(&["lc", worked, "--family", "B"]).contains(" k=1 "));
    assert_eq!(
        stdout(&["lc", worked, "--family", "B", "--csv"]),
        "family,n,k,exact,verified\nB,3,1,true,true\n"
    );

    let dir = tempfile::tempdir().unwrap();
    let affine = dir.path().join("affine.poly");
    std::fs::write(&affine, "n=3\n2\nx1\n-x3\n").unwrap();
    for family in ["M", "C", "B"] {
        assert!(stdout(&["lc", affine.to_str().unwrap(), "--family", family]).contains(" k=0 "));
    }
    assert_eq!(code(&["lc", "/nonexistent.poly"]), 2);
}

#[test]
fn models() {
    assert!(stdout(&["model", "value-indicator", "10", "--compat"])
        .starts_with("model=labs_value_indicator_10 vars=199 cons=198 "));
    assert!(stdout(&["model", "standard", "3"]).contains(" vars=4 cons=3 "));
    assert!(stdout(&["model", "indicator-only", "3"]).contains(" vars=8 cons=40 "));
    assert_eq!(code(&["model", "indicator-only", "9"]), 3);

    let dir = tempfile::tempdir().unwrap();
    let wide = dir.path().join("wide.poly");
    std::fs::write(&wide, "n=13\nx1*x13\n").unwrap();
    assert_eq!(code(&["model", "nogood", wide.to_str().unwrap()]), 3);
    assert!(stdout(&["model", "nogood", golden("worked.poly").to_str().unwrap()]).contains(" vars=7 cons=32 "));
}

#[test]
fn lp_files_match_golden() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &str); 3] = [
        (&["model", "value-indicator", "3"], "value_indicator_3.lp"),
        (&["model", "fortet", "WORKED", "--family", "C"], "fortet_worked.lp"),
        (&["model", "standard", "3", "--relaxation"], "standard_3.lp"),
    ];
    let worked = golden("worked.poly");
    for (args, name) in cases {
        let out = dir.path().join(name);
        let mut args: Vec<&str> = args
            .iter()
            .map(|a| if *a == "WORKED" { worked.to_str().unwrap() } else { a })
            .collect();
        args.extend(["--write-lp", out.to_str().unwrap()]);
        stdout(&args);
        assert_eq!(
            std::fs::read_to_string(&out).unwrap(),
            std::fs::read_to_string(golden(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn labs_commands() {
    let out = stdout(&["labs", "solve", "13"]);
    assert!(out.starts_with("N=13 opt=6 witness="), "{out}");
    assert_eq!(stdout(&["labs", "energy", "+++-"]), "energy=2\n");
    assert_eq!(code(&["labs", "energy", "++x"]), 2);

    let csv = stdout(&["labs", "table", "3..10", "--csv"]);
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').collect()).collect();
    let opt: Vec<&str> = rows.iter().map(|r| r[1]).collect();
    let vi_cons: Vec<&str> = rows.iter().map(|r| r[6]).collect();
    assert_eq!(opt, ["1", "2", "2", "7", "3", "8", "12", "13"]);
    assert_eq!(vi_cons, ["16", "30", "48", "70", "96", "126", "160", "198"]);
    assert_eq!(csv, stdout(&["labs", "table", "3..10", "--csv", "--workers", "4"]));
}

#[test]
fn separation() {
    let dir = tempfile::tempdir().unwrap();
    let and = dir.path().join("and.tt");
    std::fs::write(&and, "n=2\n0001\n").unwrap();
    let and = and.to_str().unwrap();
    assert_eq!(
        stdout(&["separate", and, "--x", "0.9,0.8", "--y", "0.1"]),
        "violated: (1 - x1) + (1 - x2) + y >= 1 (violation 0.600000)\n"
    );
    assert_eq!(stdout(&["separate", and, "--x", "1,1", "--y", "1"]), "none\n");
    assert_eq!(code(&["separate", and, "--x", "0.5", "--y", "0"]), 2);
    assert_eq!(code(&["separate", and, "--x", "a,b", "--y", "0"]), 2);
}

#[test]
fn check_random_is_seeded() {
    let a = stdout(&["check-random", "--seed", "5"]);
    assert!(a.starts_with("n=3 samples=100 seed=5 bound=4 at_bound="), "{a}");
    assert!(a.trim_end().ends_with("max_lc=4"));
    assert_eq!(a, stdout(&["check-random", "--seed", "5"]));
}

#[test]
fn config_and_caps() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("pblin.conf");
    std::fs::write(&config, "format = csv\ncap.labs_exhaustive = 10\n").unwrap();
    let config = config.to_str().unwrap();
    assert_eq!(
        stdout(&["labs", "energy", "+-", "--config", config]),
        "sequence,energy\n+-,1\n"
    );
    assert_eq!(code(&["labs", "solve", "11", "--config", config]), 3);
    assert_eq!(code(&["labs", "solve", "11", "--enum-cap", "10"]), 3);
    assert_eq!(code(&["labs", "solve", "5", "--cap", "labs_exhaustive=30"]), 2);
    assert_eq!(
        code(&["labs", "solve", "5", "--cap", "labs_exhaustive=30", "--unsafe-caps"]),
        0
    );
}

#[test]
fn bridge_failures_exit_4() {
    let out = Command::new(env!("CARGO_BIN_EXE_pblin"))
        .args(["model", "standard", "3", "--solve"])
        .env("PBLIN_SOLVER_CMD", "exit 7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    let out = Command::new(env!("CARGO_BIN_EXE_pblin"))
        .args(["model", "standard", "3", "--solve"])
        .env("PBLIN_SOLVER_CMD", "printf '=obj= 3\\n=status= optimal\\n' > {sol}")
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "model=labs_standard_3 vars=4 cons=3 nonzeros=10\nmode=integer status=optimal objective=8\n"
    );
}
