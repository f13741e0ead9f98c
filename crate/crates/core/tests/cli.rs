use std::process::Command;

use fso_relay::cli::{parse_config, run, CSV_HEADER, EXIT_CONFIG, EXIT_OK, EXIT_VALIDATION};

const A0: &str = "0.019792086945219322638";

fn invoke(args: &[&str]) -> (u8, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("fso-relay").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn values(csv: &str) -> Vec<f64> {
    csv.lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect()
}

#[test]
fn snr_grid_is_inclusive() {
    let cfg = parse_config([
        "fso-relay",
        "curve-outage",
        "--a0",
        A0,
        "--g",
        "1.2",
        "--snr-db",
        "0:60:1",
    ])
    .unwrap();
    assert_eq!(cfg.snr_grid_db.points().len(), 61);
    let (code, out, _) = invoke(&[
        "curve-outage",
        "--a0",
        A0,
        "--g",
        "1.2",
        "--snr-db",
        "0:60:10",
    ]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 8);
    assert!(
        lines[1].starts_with("0,") && lines[7].starts_with("60,"),
        "{out}"
    );
}

#[test]
fn binary_rejects_g_without_a0() {
    let o = Command::new(env!("CARGO_BIN_EXE_fso-relay"))
        .args(["curve-outage", "--g", "1.2"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(EXIT_CONFIG as i32));
    let msg = String::from_utf8_lossy(&o.stderr);
    assert!(msg.contains("--a0") && msg.contains("--omega-z"), "{msg}");
    assert!(o.stdout.is_empty());
}

#[test]
fn flags_override_config_file() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    std::io::Write::write_all(&mut f, format!("g = 1.2\na0 = {A0}\nseed = 5\n").as_bytes())
        .unwrap();
    let path = f.path().to_str().unwrap();
    let cfg = parse_config(["fso-relay", "curve-outage", "--config", path, "--g", "4"]).unwrap();
    assert_eq!(cfg.pointing.unwrap().g, 4.0);
    assert_eq!(cfg.seed, 5);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    std::io::Write::write_all(&mut bad, b"gee = 1.2\n").unwrap();
    let path = bad.path().to_str().unwrap();
    assert!(parse_config(["fso-relay", "curve-ber", "--config", path]).is_err());
}

#[test]
fn config_errors_exit_two() {
    for args in [
        &[
            "curve-outage",
            "--a0",
            A0,
            "--g",
            "1.2",
            "--snr-db",
            "10:0:1",
        ][..],
        &["curve-outage", "--a0", A0, "--g", "1.2", "--alpha1", "-1"],
        &["curve-ber", "--a0", A0, "--g", "1.2", "--r", "0.1"],
        &["curve-outage", "--a0", A0, "--g", "1.2", "--gs", "4"],
        &["validate", "--g", "1.2", "--a0", A0],
    ] {
        let (code, out, err) = invoke(args);
        assert_eq!(code, EXIT_CONFIG, "{args:?}: {err}");
        assert!(out.is_empty() && err.contains("error"), "{args:?}");
    }
}

#[test]
fn repeated_runs_are_bit_identical() {
    let args = [
        "mc-ber",
        "--a0",
        A0,
        "--g",
        "4",
        "--snr-db",
        "20:30:10",
        "--samples",
        "20000",
        "--seed",
        "3",
    ];
    let (c1, o1, _) = invoke(&args);
    let (c2, o2, _) = invoke(&args);
    assert_eq!((c1, c2), (EXIT_OK, EXIT_OK));
    assert_eq!(o1, o2);
    let line = o1.lines().nth(1).unwrap();
    assert!(
        line.ends_with(",monte-carlo") && line.split(',').nth(2).unwrap() != "",
        "{line}"
    );
}

#[test]
fn curves_order_as_expected() {
    let grid = ["--a0", A0, "--snr-db", "10:50:10"];
    let outage = |g: &str| {
        let mut a = vec!["curve-outage", "--g", g];
        a.extend(grid);
        values(&invoke(&a).1)
    };
    for (lo, hi) in outage("4").iter().zip(outage("1.2")) {
        assert!(*lo <= hi);
    }
    let ber = |m: &str| {
        let mut a = vec!["curve-ber", "--g", "1.2", "--modulation", m];
        a.extend(grid);
        values(&invoke(&a).1)
    };
    let (c, n) = (ber("cbpsk"), ber("nbfsk"));
    assert_eq!(c.len(), 5);
    for (c, n) in c.iter().zip(&n) {
        assert!(c <= n);
    }
    let closed = invoke(&["curve-ber", "--g", "1.2", "--a0", A0, "--snr-db", "30:30:1"]).1;
    let quad = invoke(&[
        "curve-ber",
        "--g",
        "1.2",
        "--a0",
        A0,
        "--snr-db",
        "30:30:1",
        "--method",
        "quadrature",
    ])
    .1;
    let (c, q) = (values(&closed)[0], values(&quad)[0]);
    assert!(((c - q) / q).abs() < 1e-9, "{c} vs {q}");
    assert!(quad.lines().nth(1).unwrap().ends_with(",,quadrature"));
}

#[test]
fn validate_passes_and_printed_forms_fail() {
    let small = [
        "validate",
        "--a0",
        A0,
        "--alphas",
        "2",
        "--gs",
        "1.2",
        "--mus-db",
        "20",
        "--samples",
        "200000",
    ];
    let (code, out, _) = invoke(&small);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("overall = pass"));

    let mut printed = small.to_vec();
    printed.extend(["--closed-form", "printed"]);
    let (code, out, err) = invoke(&printed);
    assert_eq!(code, EXIT_VALIDATION);
    assert!(out.contains("overall = fail"));
    assert!(err.contains("case 0 failed"), "{err}");
}
