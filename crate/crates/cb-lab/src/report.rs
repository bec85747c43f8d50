//! Run reports: everything a run computed, in a form that can be re-read.
//!
//! A report records the scenario (with the seed and degrees needed to rebuild
//! it), one entry per task in declaration order, and the overall verdict.
//! Serialization is deterministic: field order is fixed, collections are
//! `Vec`s, and wall-clock timing stays out of the report unless explicitly
//! requested, so two runs with the same inputs emit identical bytes.

use serde::{Deserialize, Serialize};

use cb_core::Field;

/// Complete result of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: ScenarioInfo,
    pub tasks: Vec<TaskReport>,
    /// True when every non-vacuous check in every task passed.
    pub pass: bool,
    /// Populated only on request (`--timing`); deliberately excluded from
    /// the default output so reports are byte-for-byte reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

/// What was checked: enough to rebuild the scenario exactly.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioInfo {
    pub name: String,
    /// `"Q"` or `"Fp:<p>"`, same syntax as the `--field` flag.
    pub field: String,
    pub ambient_dim: usize,
    /// Section degrees, or row degrees for a purely determinantal scenario.
    pub degrees: Vec<usize>,
    pub num_points: usize,
    /// Seed used by a built-in constructor; absent for file scenarios,
    /// whose data is already explicit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// `"builtin:<name>"` or `"file:<path>"`.
    pub source: String,
}

/// One task's result, tagged by the kind of check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TaskReport {
    Cb(CbTaskReport),
    Tv(TvTaskReport),
    Det(DetTaskReport),
    Koszul(KoszulTaskReport),
}

impl TaskReport {
    pub fn name(&self) -> &str {
        match self {
            TaskReport::Cb(r) => &r.name,
            TaskReport::Tv(r) => &r.name,
            TaskReport::Det(r) => &r.name,
            TaskReport::Koszul(r) => &r.name,
        }
    }

    pub fn pass(&self) -> bool {
        match self {
            TaskReport::Cb(r) => r.pass,
            TaskReport::Tv(r) => r.pass,
            TaskReport::Det(r) => r.pass,
            TaskReport::Koszul(r) => r.pass,
        }
    }
}

/// Propagation at one degree, one row per omitted point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CbTaskReport {
    pub name: String,
    pub degree: i64,
    /// Jet order imposed along the excess locus, when any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub jet_order: Option<usize>,
    /// The task asserts failure: it passes when some omission does not
    /// propagate.
    pub expect_fail: bool,
    pub omissions: Vec<OmissionReport>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmissionReport {
    pub omit: usize,
    pub holds: bool,
    pub vacuous: bool,
    pub h0_without: usize,
    pub h0_with: usize,
    /// On failure: a form through everything but the omitted point, nonzero
    /// there, printed in the scenario's coordinates.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// The cokernel inequality over a sweep of twists and splits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TvTaskReport {
    pub name: String,
    pub multiplier: bool,
    pub cases: Vec<TvCaseReport>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TvCaseReport {
    pub a: i64,
    pub z1: Vec<usize>,
    pub v1: usize,
    pub v2: usize,
    pub vacuous: bool,
    pub pass: bool,
}

/// The determinantal comparison over one or many splits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetTaskReport {
    pub name: String,
    pub cases: Vec<DetCaseReport>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DetCaseReport {
    pub z1: Vec<usize>,
    pub c1: usize,
    pub c2: usize,
    pub vacuous: bool,
    /// Expected exact counts, when the task pinned them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_c1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_c2: Option<usize>,
    pub pass: bool,
}

/// Koszul homology across a twist window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KoszulTaskReport {
    pub name: String,
    /// `"full"` or `"skoda"`.
    pub variant: String,
    /// `"exact"` or `"excess"`; what each twist must show to pass.
    pub expect: String,
    pub twists: Vec<TwistReport>,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistReport {
    pub twist: i64,
    /// Term dimensions from position `n` down to 0, matching `homology`.
    pub term_dims: Vec<usize>,
    pub homology: Vec<usize>,
    pub dd_zero: bool,
    /// Rank of the bottom differential (Skoda variant only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_rank: Option<usize>,
    /// Dimension the tail image must fill (Skoda variant only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_target: Option<usize>,
    pub pass: bool,
}

/// Render a field the way the `--field` flag spells it.
pub fn field_string(field: Field) -> String {
    match field {
        Field::Q => "Q".to_string(),
        Field::Fp(p) => format!("Fp:{p}"),
    }
}

/// Emit the report as stable pretty-printed JSON.
pub fn to_json(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("reports always serialize")
}

/// Parse a report back; inverse of [`to_json`].
pub fn from_json(text: &str) -> anyhow::Result<RunReport> {
    Ok(serde_json::from_str(text)?)
}

/// Render the report for a terminal: one block per task, one line per
/// aggregate, failing cases spelled out.
pub fn to_text(report: &RunReport) -> String {
    use std::fmt::Write;

    let mut out = String::new();
    let s = &report.scenario;
    let _ = writeln!(
        out,
        "scenario {}  [{}]  P^{}  degrees {:?}  points {}{}",
        s.name,
        s.field,
        s.ambient_dim,
        s.degrees,
        s.num_points,
        match s.seed {
            Some(seed) => format!("  seed {seed}"),
            None => String::new(),
        }
    );
    for task in &report.tasks {
        match task {
            TaskReport::Cb(r) => {
                let held = r.omissions.iter().filter(|o| o.holds).count();
                let _ = writeln!(
                    out,
                    "  cb {}  degree {}{}{}: {}/{} omissions propagate  [{}]",
                    r.name,
                    r.degree,
                    match r.jet_order {
                        Some(k) => format!("  jets {k}"),
                        None => String::new(),
                    },
                    if r.expect_fail { "  (failure expected)" } else { "" },
                    held,
                    r.omissions.len(),
                    verdict(r.pass)
                );
                for o in r.omissions.iter().filter(|o| !o.holds) {
                    let _ = writeln!(
                        out,
                        "      omit {}: h0 {} -> {}{}",
                        o.omit,
                        o.h0_without,
                        o.h0_with,
                        match &o.witness {
                            Some(w) => format!("  witness {w}"),
                            None => String::new(),
                        }
                    );
                }
            }
            TaskReport::Tv(r) => {
                let _ = writeln!(
                    out,
                    "  tv {}  multiplier {}: {} cases  [{}]",
                    r.name,
                    if r.multiplier { "on" } else { "off" },
                    r.cases.len(),
                    verdict(r.pass)
                );
                for c in r.cases.iter().filter(|c| !c.pass) {
                    let _ = writeln!(
                        out,
                        "      a {}  z1 {:?}: v2 {} > v1 {}",
                        c.a, c.z1, c.v2, c.v1
                    );
                }
            }
            TaskReport::Det(r) => {
                let _ = writeln!(out, "  det {}: {} cases  [{}]", r.name, r.cases.len(), verdict(r.pass));
                for c in r.cases.iter().filter(|c| !c.pass) {
                    let _ = writeln!(
                        out,
                        "      z1 {:?}: c1 {}  c2 {}{}",
                        c.z1,
                        c.c1,
                        c.c2,
                        match (c.expect_c1, c.expect_c2) {
                            (Some(e1), Some(e2)) => format!("  expected {e1}/{e2}"),
                            _ => String::new(),
                        }
                    );
                }
            }
            TaskReport::Koszul(r) => {
                let _ = writeln!(
                    out,
                    "  koszul {}  {}  expect {}: twists {}..{}  [{}]",
                    r.name,
                    r.variant,
                    r.expect,
                    r.twists.first().map(|t| t.twist).unwrap_or(0),
                    r.twists.last().map(|t| t.twist).unwrap_or(0),
                    verdict(r.pass)
                );
                for t in &r.twists {
                    let _ = writeln!(
                        out,
                        "      t {}: terms {:?}  homology {:?}{}  [{}]",
                        t.twist,
                        t.term_dims,
                        t.homology,
                        match (t.tail_rank, t.tail_target) {
                            (Some(r), Some(d)) => format!("  tail {r}/{d}"),
                            _ => String::new(),
                        },
                        verdict(t.pass)
                    );
                }
            }
        }
    }
    if let Some(ms) = report.timing_ms {
        let _ = writeln!(out, "  elapsed {ms} ms");
    }
    let _ = writeln!(out, "overall [{}]", verdict(report.pass));
    out
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> RunReport {
        RunReport {
            scenario: ScenarioInfo {
                name: "square".into(),
                field: "Q".into(),
                ambient_dim: 2,
                degrees: vec![2, 2],
                num_points: 4,
                seed: Some(11),
                source: "builtin:line-grid".into(),
            },
            tasks: vec![
                TaskReport::Cb(CbTaskReport {
                    name: "cb-classical".into(),
                    degree: 1,
                    jet_order: None,
                    expect_fail: false,
                    omissions: vec![OmissionReport {
                        omit: 0,
                        holds: true,
                        vacuous: false,
                        h0_without: 1,
                        h0_with: 1,
                        witness: None,
                    }],
                    pass: true,
                }),
                TaskReport::Koszul(KoszulTaskReport {
                    name: "koszul-full".into(),
                    variant: "full".into(),
                    expect: "exact".into(),
                    twists: vec![TwistReport {
                        twist: 2,
                        term_dims: vec![1, 8, 10],
                        homology: vec![0, 0, 4],
                        dd_zero: true,
                        tail_rank: None,
                        tail_target: None,
                        pass: true,
                    }],
                    pass: true,
                }),
            ],
            pass: true,
            timing_ms: None,
        }
    }

    #[test]
    fn json_round_trips() {
        let r = sample();
        assert_eq!(from_json(&to_json(&r)).unwrap(), r);
    }

    #[test]
    fn json_is_deterministic() {
        assert_eq!(to_json(&sample()), to_json(&sample()));
    }

    #[test]
    fn timing_stays_out_of_the_default_output() {
        let r = sample();
        assert!(!to_json(&r).contains("timing_ms"));
        let mut timed = r;
        timed.timing_ms = Some(12);
        assert!(to_json(&timed).contains("timing_ms"));
    }

    #[test]
    fn text_report_flags_failures() {
        let mut r = sample();
        if let TaskReport::Cb(cb) = &mut r.tasks[0] {
            cb.omissions[0].holds = false;
            cb.omissions[0].h0_with = 0;
            cb.omissions[0].witness = Some("x0".into());
            cb.pass = false;
        }
        r.pass = false;
        let text = to_text(&r);
        assert!(text.contains("FAIL"));
        assert!(text.contains("witness x0"));
        assert!(text.trim_end().ends_with("overall [FAIL]"));
    }

    #[test]
    fn field_strings_match_the_flag_syntax() {
        assert_eq!(field_string(Field::Q), "Q");
        assert_eq!(field_string(Field::fp(97).unwrap()), "Fp:97");
    }
}
