use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn hgmono(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgmono"))
        .args(args)
        .env_remove("HGMONO_FIXTURES")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const BUNDLED_FIXTURE: &str = include_str!("../../core/data/census.tsv");

#[test]
fn enumerate_default() {
    let o = hgmono(&["enumerate"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 79);
    assert!(lines[0].starts_with("alpha\tbeta"));
    assert_eq!(*lines.last().unwrap(), "finite=4 sig41=17 sig32=56");
    assert_eq!(text, stdout(&hgmono(&["enumerate"])));
}

#[test]
fn enumerate_raw_lists_all_pairs() {
    let o = hgmono(&["enumerate", "--raw", "--format", "json-lines"]);
    assert_eq!(o.status.code(), Some(0));
    let recs: Vec<Value> = stdout(&o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(recs.len(), 147);
    assert_eq!(recs.iter().filter(|r| r["tau_fixed"] == true).count(), 7);
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn is_reduced(s: &str) -> bool {
    match s.split_once('/') {
        None => s.parse::<i64>().is_ok(),
        Some((p, q)) => {
            let (p, q): (i64, u64) = (p.parse().unwrap(), q.parse().unwrap());
            q > 1 && gcd(p.unsigned_abs(), q) == 1
        }
    }
}

#[test]
fn json_lines_round_trip() {
    let o = hgmono(&["enumerate", "--format", "json-lines"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&o.stderr).trim(),
        "finite=4 sig41=17 sig32=56"
    );
    let text = stdout(&o);
    let tsv = stdout(&hgmono(&["enumerate"]));
    let rows: Vec<&str> = tsv.lines().skip(1).take(77).collect();
    assert_eq!(text.lines().count(), 77);
    for (line, row) in text.lines().zip(rows) {
        let v: Value = serde_json::from_str(line).unwrap();
        let back: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(back, v);
        let join = |k: &str| {
            v[k].as_array()
                .unwrap()
                .iter()
                .map(|r| r.as_str().unwrap())
                .inspect(|s| assert!(is_reduced(s), "{s}"))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let fields = [
            join("alpha"),
            join("beta"),
            v["tau_fixed"].to_string(),
            v["monomial"].to_string(),
            v["kind"].as_str().unwrap().to_string(),
            v["signature"].as_str().unwrap().to_string(),
            v["q_rank"].to_string(),
            v["bh_delta"].to_string(),
            v["table"].to_string(),
            v["row"].to_string(),
            v["attribution"].as_str().unwrap().to_string(),
        ];
        assert_eq!(fields.join("\t"), row);
    }
}

#[test]
fn by_table_follows_fixture_layout() {
    let text = stdout(&hgmono(&["enumerate", "--by-table"]));
    let headings: Vec<&str> = text.lines().filter(|l| l.starts_with("# Table")).collect();
    assert_eq!(
        headings,
        (1..=7).map(|t| format!("# Table {t}")).collect::<Vec<_>>()
    );
    let t5: Vec<&str> = text
        .lines()
        .skip_while(|l| *l != "# Table 5")
        .skip(2)
        .take(4)
        .collect();
    assert!(t5.iter().all(|l| l.contains("\tfinite\t")));
}

#[test]
fn fixture_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.tsv");
    fs::write(&good, BUNDLED_FIXTURE).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hgmono"))
        .arg("enumerate")
        .env("HGMONO_FIXTURES", &good)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));

    let bad = dir.path().join("bad.tsv");
    let dropped: Vec<&str> = BUNDLED_FIXTURE
        .lines()
        .filter(|l| !l.starts_with("5\t1\t"))
        .collect();
    fs::write(&bad, dropped.join("\n")).unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_hgmono"))
        .arg("enumerate")
        .env("HGMONO_FIXTURES", &bad)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("computed, not in fixture"), "{err}");
    assert!(err.contains("table 5"), "{err}");
}

#[test]
fn corrupted_fixture_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tsv");
    fs::write(&bad, BUNDLED_FIXTURE.replacen("1/3", "1/x", 1)).unwrap();
    let o = hgmono(&["enumerate", "--fixtures", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let missing = dir.path().join("absent.tsv");
    let o = hgmono(&["enumerate", "--fixtures", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_bs1() {
    let o = hgmono(&[
        "classify",
        "--alpha",
        "0 0 0 1/3 2/3",
        "--beta",
        "1/2 1/4 1/4 3/4 3/4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("signature  (3,2)\n"));
    assert!(text.contains("q_rank     2\n"));
    assert!(text.contains("infinite (roots do not interlace)"));
}

#[test]
fn classify_finite_pair() {
    let o = hgmono(&[
        "classify",
        "--alpha",
        "0, 1/3, 2/3, 1/4, 3/4",
        "--beta",
        "1/2 1/10 3/10 7/10 9/10",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("finite (roots interlace)"));
    assert!(text.contains("signature  (5,0)\n"));
}

#[test]
fn classify_rejects_bad_parameters() {
    for (a, b) in [
        ("1/3 0 0 0 0", "1/2 1/4 1/4 3/4 3/4"),
        ("0 0 0 1/3 2/3", "0 1/4 1/4 3/4 3/4"),
        ("0 0 0 1/3", "1/2 1/4 1/4 3/4 3/4"),
        ("0 0 0 1/3 two", "1/2 1/4 1/4 3/4 3/4"),
    ] {
        assert_eq!(
            hgmono(&["classify", "--alpha", a, "--beta", b])
                .status
                .code(),
            Some(2),
            "{a} | {b}"
        );
    }
}

#[test]
fn verify_all_passes() {
    let o = hgmono(&["verify", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("23/23 pass"));
    assert!(text.contains("BS1    rank2-flag  pass   index=32\n"));
    let ids: Vec<&str> = text
        .lines()
        .skip(1)
        .take(23)
        .map(|l| l.split_whitespace().next().unwrap())
        .collect();
    assert_eq!(ids, (1..=23).map(|i| format!("BS{i}")).collect::<Vec<_>>());
}

#[test]
fn verify_single_cases() {
    let o = hgmono(&["verify", "--case", "BS22"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("roots=(-3840,7372800)"));
    let o = hgmono(&["verify", "--case", "BS16", "--report"]);
    assert!(stdout(&o).contains("root parameters highest=84 second=-24"));
    assert_eq!(hgmono(&["verify", "--case", "BS99"]).status.code(), Some(2));
}

#[test]
fn verify_failures_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("certs.txt");
    let text = fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../core/data/certificates.txt"
    ))
    .unwrap();
    fs::write(
        &path,
        text.replacen("w2 = a^-1 b^4 a", "w2 = a^-1 b^3 a", 1),
    )
    .unwrap();
    let p = path.to_str().unwrap();
    let o = hgmono(&["verify", "--all", "--cert", p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("22/23 pass"));
    assert_eq!(
        hgmono(&["verify", "--case", "BS2", "--cert", p])
            .status
            .code(),
        Some(0)
    );

    fs::write(&path, "[case]\nid = BS1\nalpha = 0 0\n").unwrap();
    assert_eq!(hgmono(&["verify", "--cert", p]).status.code(), Some(2));
    let absent = dir.path().join("none.txt");
    assert_eq!(
        hgmono(&["verify", "--cert", absent.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
