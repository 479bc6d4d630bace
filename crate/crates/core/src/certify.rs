//! Arithmeticity certificates: file format, data model, and verification.
//!
//! A certificate names a change of basis X into a Witt basis of the
//! invariant form, a word program in a = X⁻¹AX and b = X⁻¹BX, and the
//! unipotent matrices the program must produce. Verification recomputes
//! everything from α and β and runs steps S1–S8:
//!
//! - S1 rebuild A, B, Q and check invariance
//! - S2 check the shape of XᵗQX and the ℚ-rank against the mode
//! - S3 evaluate the word program
//! - S4 compare against the expected matrices
//! - S5 unipotency
//! - S6 flag or root-group membership
//! - S7 integrality
//! - S8 lattice index of the flag coordinates (flag modes)

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::cyclo::{tau_involution, ParamPair};
use crate::exactlin::{lattice_index, parse_rat, Mat, Rat, SymMat};
use crate::hgcore::{analyze, primitive_form};
use crate::witt::{
    flag_membership, q_rank, root_group_membership, FlagCoords, Root, WittBasis, WittKind,
};
use crate::wordlang::{parse_word, run_program, WordProgram};

/// The shipped certificates for the 23 arithmetic cases.
pub const DEFAULT_CERTIFICATES: &str = include_str!("../data/certificates.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Rank2Flag,
    Rank2Roots,
    Rank1Flag,
}

impl Mode {
    pub fn parse(s: &str) -> Option<Mode> {
        match s {
            "rank2-flag" => Some(Mode::Rank2Flag),
            "rank2-roots" => Some(Mode::Rank2Roots),
            "rank1-flag" => Some(Mode::Rank1Flag),
            _ => None,
        }
    }

    pub fn kind(self) -> WittKind {
        match self {
            Mode::Rank1Flag => WittKind::Rank1,
            _ => WittKind::Rank2,
        }
    }

    pub fn q_rank(self) -> u8 {
        match self {
            Mode::Rank1Flag => 1,
            _ => 2,
        }
    }

    /// Number of final unipotents the mode requires.
    pub fn unipotent_count(self) -> usize {
        match self {
            Mode::Rank2Roots => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Rank2Flag => "rank2-flag",
            Mode::Rank2Roots => "rank2-roots",
            Mode::Rank1Flag => "rank1-flag",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub id: String,
    pub params: ParamPair,
    pub mode: Mode,
    pub tau_fixed: bool,
    /// The invariant form as printed with the case, if given.
    pub q_display: Option<Mat>,
    pub x: Mat,
    pub program: WordProgram,
    pub unipotents: Vec<String>,
    pub expected: Vec<(String, Mat)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("case {id}: {msg}")]
    Schema { id: String, msg: String },
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T, CertError> {
    Err(CertError::Parse {
        line,
        msg: msg.into(),
    })
}

#[derive(Default)]
struct Draft {
    line: usize,
    id: Option<String>,
    alpha: Option<Vec<Rat>>,
    beta: Option<Vec<Rat>>,
    mode: Option<Mode>,
    tau_fixed: bool,
    q: Option<Mat>,
    x: Option<Mat>,
    words: Vec<(String, crate::wordlang::WordExpr)>,
    unipotents: Option<Vec<String>>,
    expected: Vec<(String, Mat)>,
}

impl Draft {
    fn finish(self) -> Result<Certificate, CertError> {
        let line = self.line;
        let Some(id) = self.id else {
            return perr(line, "case has no id");
        };
        let schema = |msg: String| CertError::Schema {
            id: id.clone(),
            msg,
        };
        let missing = |what: &str| schema(format!("missing {what}"));
        let alpha = self.alpha.ok_or_else(|| missing("alpha"))?;
        let beta = self.beta.ok_or_else(|| missing("beta"))?;
        let params = ParamPair::new(alpha, beta).map_err(|e| schema(e.to_string()))?;
        let mode = self.mode.ok_or_else(|| missing("mode"))?;
        let x = self.x.ok_or_else(|| missing("X"))?;
        let unipotents = self.unipotents.ok_or_else(|| missing("[unipotents]"))?;
        if unipotents.len() != mode.unipotent_count() {
            return Err(schema(format!(
                "mode {mode} needs {} unipotents, found {}",
                mode.unipotent_count(),
                unipotents.len()
            )));
        }
        let program = WordProgram::new(self.words).map_err(|e| schema(e.to_string()))?;
        let bound: BTreeSet<&str> = program.bindings().iter().map(|(n, _)| n.as_str()).collect();
        for n in &unipotents {
            if !bound.contains(n.as_str()) {
                return Err(schema(format!("unipotent {n} is not defined in [words]")));
            }
        }
        let mut seen = BTreeSet::new();
        for (n, _) in &self.expected {
            if !bound.contains(n.as_str()) {
                return Err(schema(format!("expected matrix {n} is not defined in [words]")));
            }
            if !seen.insert(n.as_str()) {
                return Err(schema(format!("expected matrix {n} given twice")));
            }
        }
        Ok(Certificate {
            id,
            params,
            mode,
            tau_fixed: self.tau_fixed,
            q_display: self.q,
            x,
            program,
            unipotents,
            expected: self.expected,
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Words,
    Unipotents,
    Expected,
}

fn parse_row(line: usize, s: &str) -> Result<Vec<Rat>, CertError> {
    let row: Vec<Rat> = s
        .split_whitespace()
        .map(|t| parse_rat(t).or_else(|e| perr(line, e.to_string())))
        .collect::<Result<_, _>>()?;
    if row.len() != 5 {
        return perr(line, format!("expected 5 entries, found {}", row.len()));
    }
    Ok(row)
}

fn parse_rats(line: usize, s: &str) -> Result<Vec<Rat>, CertError> {
    s.split_whitespace()
        .map(|t| parse_rat(t).or_else(|e| perr(line, e.to_string())))
        .collect()
}

pub fn load_certificates(text: &str) -> Result<Vec<Certificate>, CertError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut certs = Vec::new();
    let mut draft: Option<Draft> = None;
    let mut section = Section::Header;
    let mut k = 0;
    while k < lines.len() {
        let (line, l) = lines[k];
        k += 1;
        if l == "[case]" {
            if let Some(d) = draft.take() {
                certs.push(d.finish()?);
            }
            draft = Some(Draft {
                line,
                ..Draft::default()
            });
            section = Section::Header;
            continue;
        }
        let Some(d) = draft.as_mut() else {
            return perr(line, "content before the first [case]");
        };
        match l {
            "[words]" => {
                section = Section::Words;
                continue;
            }
            "[unipotents]" => {
                section = Section::Unipotents;
                continue;
            }
            "[expected]" => {
                section = Section::Expected;
                continue;
            }
            _ if l.starts_with('[') && l.ends_with(']') && section != Section::Words => {
                return perr(line, format!("unknown section {l}"));
            }
            _ => {}
        }
        if section == Section::Unipotents {
            if d.unipotents.is_some() {
                return perr(line, "[unipotents] takes a single line");
            }
            let names: Vec<String> = l.split(',').map(|s| s.trim().to_string()).collect();
            if names.iter().any(String::is_empty) {
                return perr(line, "empty unipotent name");
            }
            d.unipotents = Some(names);
            continue;
        }
        let Some((key, value)) = l.split_once('=') else {
            return perr(line, "expected `key = value`");
        };
        let (key, value) = (key.trim(), value.trim());
        let read_matrix = |k: &mut usize| -> Result<Mat, CertError> {
            if !value.is_empty() {
                return perr(line, format!("matrix {key} must start on the next line"));
            }
            let mut rows = Vec::new();
            for _ in 0..5 {
                let Some(&(rl, rs)) = lines.get(*k) else {
                    return perr(line, format!("matrix {key} is truncated"));
                };
                *k += 1;
                rows.push(parse_row(rl, rs)?);
            }
            Ok(Mat::from_rows(rows).expect("5×5"))
        };
        match section {
            Section::Header => match key {
                "id" => d.id = Some(value.to_string()),
                "alpha" => d.alpha = Some(parse_rats(line, value)?),
                "beta" => d.beta = Some(parse_rats(line, value)?),
                "mode" => {
                    d.mode = Some(
                        Mode::parse(value)
                            .ok_or_else(|| CertError::Parse {
                                line,
                                msg: format!("unknown mode {value:?}"),
                            })?,
                    )
                }
                "tau_fixed" => {
                    d.tau_fixed = match value {
                        "true" => true,
                        "false" => false,
                        _ => return perr(line, "tau_fixed must be true or false"),
                    }
                }
                "Q" => d.q = Some(read_matrix(&mut k)?),
                "X" => d.x = Some(read_matrix(&mut k)?),
                _ => return perr(line, format!("unknown key {key:?}")),
            },
            Section::Words => {
                let expr = parse_word(value).or_else(|e| {
                    perr(line, format!("{} (column {})", e.msg, l.len() - value.len() + e.pos + 1))
                })?;
                d.words.push((key.to_string(), expr));
            }
            Section::Expected => {
                let m = read_matrix(&mut k)?;
                d.expected.push((key.to_string(), m));
            }
            Section::Unipotents => unreachable!(),
        }
    }
    if let Some(d) = draft.take() {
        certs.push(d.finish()?);
    }
    let mut ids = BTreeSet::new();
    for c in &certs {
        if !ids.insert(c.id.clone()) {
            return Err(CertError::Schema {
                id: c.id.clone(),
                msg: "duplicate id".into(),
            });
        }
    }
    Ok(certs)
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skipped => "skip",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StepResult {
    /// 1..=8
    pub step: u8,
    pub status: Status,
    pub detail: String,
}

pub const ZARISKI_ASSUMPTION: &str =
    "assumed, not verified: the group is Zariski dense in SO_Q (Beukers-Heckman)";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub id: String,
    pub mode: Mode,
    pub steps: Vec<StepResult>,
    pub q_rank: Option<u8>,
    pub coords: Vec<(String, FlagCoords)>,
    pub lattice_index: Option<BigUint>,
    pub root_x: Option<(Rat, Rat)>,
    pub assumptions: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.status != Status::Fail)
    }

    /// First failing step, if any.
    pub fn first_failure(&self) -> Option<&StepResult> {
        self.steps.iter().find(|s| s.status == Status::Fail)
    }

    /// Short summary: lattice index or root parameters.
    pub fn evidence(&self) -> String {
        if let Some(i) = &self.lattice_index {
            format!("index={i}")
        } else if let Some((x1, x2)) = &self.root_x {
            format!("roots=({x1},{x2})")
        } else {
            "-".into()
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} {} {}",
            self.id,
            self.mode,
            if self.passed() { "PASS" } else { "FAIL" }
        )?;
        for s in &self.steps {
            writeln!(f, "  S{} {:<4} {}", s.step, s.status.to_string(), s.detail)?;
        }
        for (n, c) in &self.coords {
            writeln!(f, "  coords {n} = {c}")?;
        }
        if let Some(q) = self.q_rank {
            writeln!(f, "  q_rank {q}")?;
        }
        if let Some(i) = &self.lattice_index {
            writeln!(f, "  lattice index {i}")?;
        }
        if let Some((x1, x2)) = &self.root_x {
            writeln!(f, "  root parameters highest={x1} second={x2}")?;
        }
        for a in &self.assumptions {
            writeln!(f, "  {a}")?;
        }
        Ok(())
    }
}

struct Steps(Vec<StepResult>);

impl Steps {
    fn push(&mut self, step: u8, ok: bool, detail: impl Into<String>) -> bool {
        self.0.push(StepResult {
            step,
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        });
        ok
    }

    fn skip_from(&mut self, step: u8, why: &str) {
        for s in step..=8 {
            self.0.push(StepResult {
                step: s,
                status: Status::Skipped,
                detail: why.to_string(),
            });
        }
    }
}

fn first_difference(got: &Mat, want: &Mat) -> Option<String> {
    for i in 0..want.dim() {
        for j in 0..want.dim() {
            if got.get(i, j) != want.get(i, j) {
                return Some(format!(
                    "entry ({},{}) is {} but {} was expected",
                    i + 1,
                    j + 1,
                    got.get(i, j),
                    want.get(i, j)
                ));
            }
        }
    }
    None
}

pub fn verify_certificate(cert: &Certificate) -> VerificationReport {
    verify_certificate_scaled(cert, &Rat::one())
}

/// Verification with the recomputed form multiplied by `scale` before the
/// shape and membership steps. Any nonzero scale gives the same verdicts.
pub fn verify_certificate_scaled(cert: &Certificate, scale: &Rat) -> VerificationReport {
    let mut report = VerificationReport {
        id: cert.id.clone(),
        mode: cert.mode,
        steps: Vec::new(),
        q_rank: None,
        coords: Vec::new(),
        lattice_index: None,
        root_x: None,
        assumptions: vec![ZARISKI_ASSUMPTION.to_string()],
    };
    let mut steps = Steps(Vec::new());
    run_steps(cert, scale, &mut steps, &mut report);
    report.steps = steps.0;
    report
}

fn run_steps(cert: &Certificate, scale: &Rat, steps: &mut Steps, report: &mut VerificationReport) {
    // S1
    let an = match analyze(&cert.params) {
        Ok(an) => an,
        Err(e) => {
            steps.push(1, false, e.to_string());
            steps.skip_from(2, "not run");
            return;
        }
    };
    let mut notes = vec![format!(
        "A and B preserve Q, signature {}",
        an.form.signature
    )];
    let mut ok = true;
    if let Some(d) = &cert.q_display {
        match SymMat::new(d.clone()) {
            Ok(s) if primitive_form(&s) == an.form.q => {
                notes.push("printed Q agrees up to scalar".into())
            }
            _ => {
                ok = false;
                notes.push("printed Q is not a multiple of the recomputed form".into());
            }
        }
    }
    let fixed = tau_involution(&cert.params) == cert.params;
    if fixed != cert.tau_fixed {
        ok = false;
        notes.push(format!("tau_fixed is {} but the pair is {}", cert.tau_fixed, if fixed { "fixed" } else { "not fixed" }));
    }
    if !steps.push(1, ok, notes.join("; ")) {
        steps.skip_from(2, "not run");
        return;
    }
    let q = an.form.q.scale(scale);

    // S2
    let basis = match WittBasis::from_matrix(&q, cert.x.clone(), cert.mode.kind()) {
        Ok(b) => b,
        Err(e) => {
            steps.push(2, false, e.to_string());
            steps.skip_from(3, "not run");
            return;
        }
    };
    let rank = q_rank(&q).ok();
    report.q_rank = rank;
    let detail = match &basis.lambdas {
        Some([l1, l2, l3]) => format!("XᵗQX anti-diagonal, lambda = ({l1}, {l2}, {l3})"),
        None => "XᵗQX hyperbolic corners, middle block anisotropic".into(),
    };
    if rank != Some(cert.mode.q_rank()) {
        steps.push(
            2,
            false,
            format!("q_rank {rank:?} does not match mode {}", cert.mode),
        );
        steps.skip_from(3, "not run");
        return;
    }
    steps.push(2, true, format!("{detail}; q_rank {}", cert.mode.q_rank()));

    // S3
    let xinv = cert.x.inverse().expect("checked in S2");
    let a = xinv.matmul(&an.pair.a).matmul(&cert.x);
    let b = xinv.matmul(&an.pair.b).matmul(&cert.x);
    let env = match run_program(&cert.program, &a, &b) {
        Ok(env) => env,
        Err(e) => {
            steps.push(3, false, e.to_string());
            steps.skip_from(4, "not run");
            return;
        }
    };
    steps.push(3, true, format!("{} words evaluated", cert.program.bindings().len()));

    // S4
    let mut bad = Vec::new();
    for (name, want) in &cert.expected {
        if let Some(diff) = first_difference(&env[name], want) {
            bad.push(format!("{name}: {diff}"));
        }
    }
    let names: Vec<&str> = cert.expected.iter().map(|(n, _)| n.as_str()).collect();
    steps.push(
        4,
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} match", names.join(" "))
        } else {
            bad.join("; ")
        },
    );

    let finals: Vec<(&str, &Mat)> = cert
        .unipotents
        .iter()
        .map(|n| (n.as_str(), &env[n]))
        .collect();

    // S5
    let not_unip: Vec<&str> = finals
        .iter()
        .filter(|(_, m)| !m.is_unipotent())
        .map(|(n, _)| *n)
        .collect();
    steps.push(
        5,
        not_unip.is_empty(),
        if not_unip.is_empty() {
            "all unipotent".to_string()
        } else {
            format!("not unipotent: {}", not_unip.join(" "))
        },
    );

    // S6
    let mut errs = Vec::new();
    match cert.mode {
        Mode::Rank2Flag | Mode::Rank1Flag => {
            for (n, m) in &finals {
                match flag_membership(m, &basis) {
                    Ok(c) => report.coords.push((n.to_string(), c)),
                    Err(e) => errs.push(format!("{n}: {e}")),
                }
            }
        }
        Mode::Rank2Roots => {
            let h = root_group_membership(finals[0].1, &basis, Root::Highest);
            let s = root_group_membership(finals[1].1, &basis, Root::SecondHighest);
            match (h, s) {
                (Ok(x1), Ok(x2)) => report.root_x = Some((x1, x2)),
                (h, s) => {
                    if let Err(e) = h {
                        errs.push(format!("{} (highest): {e}", finals[0].0));
                    }
                    if let Err(e) = s {
                        errs.push(format!("{} (second highest): {e}", finals[1].0));
                    }
                }
            }
        }
    }
    let s6_ok = errs.is_empty();
    steps.push(
        6,
        s6_ok,
        if s6_ok {
            match cert.mode {
                Mode::Rank2Roots => "in the highest and second highest root groups".to_string(),
                _ => "in the unipotent radical of the flag parabolic".to_string(),
            }
        } else {
            errs.join("; ")
        },
    );

    // S7
    let non_int: Vec<&str> = finals
        .iter()
        .filter(|(_, m)| !m.is_integral())
        .map(|(n, _)| *n)
        .collect();
    steps.push(
        7,
        non_int.is_empty(),
        if non_int.is_empty() {
            "integral".to_string()
        } else {
            format!("non-integral: {}", non_int.join(" "))
        },
    );

    // S8
    match cert.mode {
        Mode::Rank2Roots => steps.0.push(StepResult {
            step: 8,
            status: Status::Skipped,
            detail: "not applicable to root-group certificates".into(),
        }),
        _ if !s6_ok => steps.0.push(StepResult {
            step: 8,
            status: Status::Skipped,
            detail: "no flag coordinates".into(),
        }),
        _ => {
            let rows: Option<Vec<[BigInt; 3]>> =
                report.coords.iter().map(|(_, c)| c.to_integers()).collect();
            match rows {
                None => {
                    steps.push(8, false, "flag coordinates are not integral");
                }
                Some(rows) => {
                    let rows: [[BigInt; 3]; 3] = rows.try_into().expect("three unipotents");
                    let idx = lattice_index(&rows);
                    let ok = !idx.is_zero();
                    report.lattice_index = Some(idx.clone());
                    steps.push(
                        8,
                        ok,
                        if ok {
                            format!("coordinates span a sublattice of index {idx}")
                        } else {
                            "coordinates are linearly dependent".to_string()
                        },
                    );
                }
            }
        }
    }
}

/// Sort key placing BS2 before BS10.
fn id_key(id: &str) -> (String, u64, String) {
    let split = id.find(|c: char| c.is_ascii_digit()).unwrap_or(id.len());
    let (prefix, rest) = id.split_at(split);
    let digits: String = rest.chars().take_while(char::is_ascii_digit).collect();
    let num = digits.parse().unwrap_or(0);
    (prefix.to_string(), num, rest[digits.len()..].to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Summary {
    pub reports: Vec<VerificationReport>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(VerificationReport::passed)
    }

    pub fn pass_count(&self) -> usize {
        self.reports.iter().filter(|r| r.passed()).count()
    }
}

/// Verifies every certificate, in parallel threads, reporting in id order.
pub fn verify_all(certs: &[Certificate]) -> Summary {
    let mut reports: Vec<VerificationReport> = std::thread::scope(|s| {
        let handles: Vec<_> = certs
            .iter()
            .map(|c| s.spawn(move || verify_certificate(c)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification does not panic"))
            .collect()
    });
    reports.sort_by_key(|r| id_key(&r.id));
    Summary { reports }
}
