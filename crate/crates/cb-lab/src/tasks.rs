//! Task assembly and execution.
//!
//! A [`Workload`] couples one scenario (built in from a seed, or loaded from
//! a file) with a list of resolved task definitions.  [`execute`] runs the
//! tasks, in parallel when the list allows it, and assembles the
//! [`RunReport`] in declaration order regardless of scheduling.  Every
//! quantity in the report comes from exact rank computations; nothing here
//! rounds or estimates.
//!
//! Defaults are scenario-derived.  The propagation degree falls back to the
//! adjoint degree `sum d_i - (n+1)`; Koszul windows start at the adjoint
//! degree, one higher on excess scenarios so the window sits where the
//! excess signature is stable; Tan-Viehweg sweeps default to every proper
//! split with the multiplier switched on exactly when the scenario carries
//! an excess locus.

use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use rayon::prelude::*;

use cb_core::cb::{cb_propagation, li_degree, tv_check, CIScenario, Split};
use cb_core::detloci::{det_cb_check_split, DetScenario};
use cb_core::koszul::{GradedComplex, KoszulVariant};
use cb_core::scenario::{
    build_det_eleven_points, build_line_grid, build_twisted_cubic, ELEVEN_COLLINEAR_PAIR,
};
use cb_core::vanishing::Condition;
use cb_core::Field;

use crate::file::{parse_scenario, ExpectSpec, TaskSpec, VariantSpec};
use crate::report::{
    field_string, CbTaskReport, DetCaseReport, DetTaskReport, KoszulTaskReport, OmissionReport,
    RunReport, ScenarioInfo, TaskReport, TvCaseReport, TvTaskReport, TwistReport,
};

/// Which task kinds to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckSel {
    All,
    Cb,
    Tv,
    Det,
    Koszul,
}

impl std::str::FromStr for CheckSel {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<CheckSel> {
        match s {
            "all" => Ok(CheckSel::All),
            "cb" => Ok(CheckSel::Cb),
            "tv" => Ok(CheckSel::Tv),
            "det" => Ok(CheckSel::Det),
            "koszul" => Ok(CheckSel::Koszul),
            other => bail!("unknown check {other:?}, expected all, cb, tv, det or koszul"),
        }
    }
}

/// Options shared by both subcommands.
#[derive(Clone, Debug)]
pub struct RunOptions {
    pub check: CheckSel,
    /// Inclusive twist range for Tan-Viehweg sweeps.
    pub a_range: Option<(i64, i64)>,
    /// Inclusive twist window for Koszul tasks.
    pub twist_window: Option<(i64, i64)>,
    pub field: Option<Field>,
    pub seed: Option<u64>,
    pub timing: bool,
}

impl Default for RunOptions {
    fn default() -> RunOptions {
        RunOptions {
            check: CheckSel::All,
            a_range: None,
            twist_window: None,
            field: None,
            seed: None,
            timing: false,
        }
    }
}

/// Builder parameters accepted by `builtin`; each applies to the builtins
/// that use it and is rejected elsewhere.
#[derive(Clone, Debug, Default)]
pub struct BuiltinArgs {
    pub d1: Option<usize>,
    pub d2: Option<usize>,
    pub d: Option<usize>,
    pub roots: Option<Vec<i64>>,
    pub collinear: Option<bool>,
}

/// A fully resolved check; no defaults left to fill.
#[derive(Clone, Debug)]
pub enum TaskDef {
    Cb { name: String, degree: i64, jet_order: Option<usize>, expect_fail: bool },
    Tv { name: String, a_values: Vec<i64>, multiplier: bool, splits: Option<Vec<Vec<usize>>> },
    Det { name: String, cases: Vec<DetCaseDef> },
    Koszul { name: String, variant: KoszulVariant, lo: i64, hi: i64, expect: ExpectSpec },
}

#[derive(Clone, Debug)]
pub struct DetCaseDef {
    pub z1: Vec<usize>,
    pub expect_c1: Option<usize>,
    pub expect_c2: Option<usize>,
}

impl TaskDef {
    fn kind(&self) -> CheckSel {
        match self {
            TaskDef::Cb { .. } => CheckSel::Cb,
            TaskDef::Tv { .. } => CheckSel::Tv,
            TaskDef::Det { .. } => CheckSel::Det,
            TaskDef::Koszul { .. } => CheckSel::Koszul,
        }
    }
}

/// One scenario plus its resolved tasks, ready to run.
#[derive(Clone, Debug)]
pub struct Workload {
    pub info: ScenarioInfo,
    pub ci: Option<CIScenario>,
    pub det: Option<DetScenario>,
    pub tasks: Vec<TaskDef>,
    pub timing: bool,
}

/// Inclusive `lo..hi` range, as written on the command line.
pub fn parse_range(s: &str) -> anyhow::Result<(i64, i64)> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| anyhow!("range {s:?} must look like lo..hi"))?;
    let lo: i64 = lo.trim().parse().with_context(|| format!("range {s:?}"))?;
    let hi: i64 = hi.trim().parse().with_context(|| format!("range {s:?}"))?;
    if lo > hi {
        bail!("range {s:?} is empty, both ends are inclusive");
    }
    Ok((lo, hi))
}

/// `Q` or `Fp:<p>`, as written on the command line.
pub fn parse_field(s: &str) -> anyhow::Result<Field> {
    if s == "Q" {
        return Ok(Field::Q);
    }
    if let Some(p) = s.strip_prefix("Fp:") {
        let p: u64 = p.parse().with_context(|| format!("field {s:?}"))?;
        return Ok(Field::fp(p)?);
    }
    bail!("unknown field {s:?}, expected Q or Fp:<prime>")
}

fn range_values((lo, hi): (i64, i64)) -> Vec<i64> {
    (lo..=hi).collect()
}

/// Default Koszul window: four twists starting at the adjoint degree, one
/// higher when an excess locus shifts where the interesting homology sits.
fn default_window(ci: &CIScenario) -> (i64, i64) {
    let base = ci.adjoint_degree(0) + if ci.excess().is_some() { 1 } else { 0 };
    (base, base + 3)
}

fn keep(tasks: Vec<TaskDef>, sel: CheckSel) -> Vec<TaskDef> {
    match sel {
        CheckSel::All => tasks,
        sel => tasks.into_iter().filter(|t| t.kind() == sel).collect(),
    }
}

/// Every singleton and every pair of `num` indices, singletons first.
fn singleton_and_pair_cases(num: usize) -> Vec<DetCaseDef> {
    let mut cases = Vec::new();
    for i in 0..num {
        cases.push(DetCaseDef { z1: vec![i], expect_c1: None, expect_c2: None });
    }
    for i in 0..num {
        for j in i + 1..num {
            cases.push(DetCaseDef { z1: vec![i, j], expect_c1: None, expect_c2: None });
        }
    }
    cases
}

/// Assemble the workload for a named built-in scenario.
pub fn builtin_workload(
    name: &str,
    args: &BuiltinArgs,
    opts: &RunOptions,
) -> anyhow::Result<Workload> {
    let field = opts.field.unwrap_or(Field::Q);
    let reject = |flag: &str, present: bool| {
        if present {
            bail!("--{flag} does not apply to builtin {name:?}");
        }
        Ok(())
    };
    match name {
        "line-grid" => {
            reject("d", args.d.is_some())?;
            reject("roots", args.roots.is_some())?;
            reject("collinear", args.collinear.is_some())?;
            let d1 = args.d1.unwrap_or(2);
            let d2 = args.d2.unwrap_or(3);
            let seed = opts.seed.unwrap_or(11);
            let ci = build_line_grid(field, d1, d2, seed)?;
            let a_values = range_values(opts.a_range.unwrap_or((0, 2)));
            let (lo, hi) = opts.twist_window.unwrap_or_else(|| default_window(&ci));
            let tasks = keep(
                vec![
                    TaskDef::Cb {
                        name: "cb-classical".into(),
                        degree: ci.adjoint_degree(0),
                        jet_order: None,
                        expect_fail: false,
                    },
                    TaskDef::Tv {
                        name: "tv-sweep".into(),
                        a_values,
                        multiplier: false,
                        splits: None,
                    },
                    TaskDef::Koszul {
                        name: "koszul-full".into(),
                        variant: KoszulVariant::Full,
                        lo,
                        hi,
                        expect: ExpectSpec::Exact,
                    },
                ],
                opts.check,
            );
            if tasks.is_empty() {
                bail!("check selects no task for builtin {name:?}");
            }
            let info = ScenarioInfo {
                name: ci.name().to_string(),
                field: field_string(field),
                ambient_dim: ci.n(),
                degrees: ci.degrees().to_vec(),
                num_points: ci.num_points(),
                seed: Some(seed),
                source: format!("builtin:{name}"),
            };
            Ok(Workload { info, ci: Some(ci), det: None, tasks, timing: opts.timing })
        }
        "twisted-cubic" => {
            reject("d1", args.d1.is_some())?;
            reject("d2", args.d2.is_some())?;
            reject("collinear", args.collinear.is_some())?;
            let d = args.d.unwrap_or(5);
            let roots: Vec<i64> = match &args.roots {
                Some(r) => r.clone(),
                None => (1..=d.saturating_sub(2) as i64).collect(),
            };
            let seed = opts.seed.unwrap_or(7);
            let ci = build_twisted_cubic(field, d, &roots, seed)?;
            let locus = ci.excess().expect("the builder always attaches the curve");
            let li = li_degree(ci.degrees(), ci.n(), locus.dim(), locus.eq_degree());
            let a_values = range_values(opts.a_range.unwrap_or((0, 1)));
            let (lo, hi) = opts.twist_window.unwrap_or_else(|| default_window(&ci));
            let tasks = keep(
                vec![
                    TaskDef::Cb {
                        name: "cb-naive".into(),
                        degree: d as i64,
                        jet_order: Some(1),
                        expect_fail: true,
                    },
                    TaskDef::Cb {
                        name: "cb-jets".into(),
                        degree: d as i64,
                        jet_order: Some(2),
                        expect_fail: false,
                    },
                    TaskDef::Cb {
                        name: "cb-li".into(),
                        degree: li,
                        jet_order: Some(1),
                        expect_fail: false,
                    },
                    TaskDef::Tv {
                        name: "tv-sweep".into(),
                        a_values,
                        multiplier: true,
                        splits: None,
                    },
                    TaskDef::Koszul {
                        name: "koszul-full".into(),
                        variant: KoszulVariant::Full,
                        lo,
                        hi,
                        expect: ExpectSpec::Excess,
                    },
                    TaskDef::Koszul {
                        name: "koszul-skoda".into(),
                        variant: KoszulVariant::Skoda,
                        lo,
                        hi,
                        expect: ExpectSpec::Exact,
                    },
                ],
                opts.check,
            );
            if tasks.is_empty() {
                bail!("check selects no task for builtin {name:?}");
            }
            let info = ScenarioInfo {
                name: ci.name().to_string(),
                field: field_string(field),
                ambient_dim: ci.n(),
                degrees: ci.degrees().to_vec(),
                num_points: ci.num_points(),
                seed: Some(seed),
                source: format!("builtin:{name}"),
            };
            Ok(Workload { info, ci: Some(ci), det: None, tasks, timing: opts.timing })
        }
        "det-eleven" => {
            reject("d1", args.d1.is_some())?;
            reject("d2", args.d2.is_some())?;
            reject("d", args.d.is_some())?;
            reject("roots", args.roots.is_some())?;
            let collinear = args.collinear.unwrap_or(true);
            let seed = opts.seed.unwrap_or(3);
            let det = build_det_eleven_points(field, seed, collinear)?;
            // The designated pair shares the third kernel point exactly when
            // it is the collinear one.
            let (e1, e2) = if collinear { (1, 1) } else { (0, 0) };
            let designated = DetCaseDef {
                z1: det.split().z1().to_vec(),
                expect_c1: Some(e1),
                expect_c2: Some(e2),
            };
            debug_assert!(!collinear || designated.z1 == ELEVEN_COLLINEAR_PAIR);
            let tasks = keep(
                vec![
                    TaskDef::Det { name: "det-designated".into(), cases: vec![designated] },
                    TaskDef::Det {
                        name: "det-sweep".into(),
                        cases: singleton_and_pair_cases(det.points().len()),
                    },
                ],
                opts.check,
            );
            if tasks.is_empty() {
                bail!("check selects no task for builtin {name:?}");
            }
            let info = ScenarioInfo {
                name: det.name().to_string(),
                field: field_string(field),
                ambient_dim: det.matrix().n(),
                degrees: det.matrix().row_degrees().to_vec(),
                num_points: det.points().len(),
                seed: Some(seed),
                source: format!("builtin:{name}"),
            };
            Ok(Workload { info, ci: None, det: Some(det), tasks, timing: opts.timing })
        }
        other => bail!("unknown builtin {other:?}, expected line-grid, twisted-cubic or det-eleven"),
    }
}

/// Load a scenario file and resolve its tasks against the options.
/// Command-line `--a` and `--twist-window` fill fields a task left out;
/// explicit task fields win.
pub fn file_workload(path: &Path, opts: &RunOptions) -> anyhow::Result<Workload> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let file =
        parse_scenario(&text).with_context(|| format!("in {}", path.display()))?;
    let loaded = file.build(opts.field)?;

    let mut tasks = Vec::with_capacity(loaded.tasks.len());
    for (idx, spec) in loaded.tasks.iter().enumerate() {
        let auto = |kind: &str| format!("{kind}-{}", idx + 1);
        match spec {
            TaskSpec::Cb { name, degree, jet_order, expect_fail } => {
                let ci = loaded
                    .ci
                    .as_ref()
                    .ok_or_else(|| anyhow!("tasks[{idx}]: cb needs sections"))?;
                tasks.push(TaskDef::Cb {
                    name: name.clone().unwrap_or_else(|| auto("cb")),
                    degree: degree.unwrap_or_else(|| ci.adjoint_degree(0)),
                    jet_order: *jet_order,
                    expect_fail: *expect_fail,
                });
            }
            TaskSpec::Tv { name, a, splits, multiplier } => {
                let ci = loaded
                    .ci
                    .as_ref()
                    .ok_or_else(|| anyhow!("tasks[{idx}]: tv needs sections"))?;
                let a_values = match a {
                    Some(list) => list.clone(),
                    None => range_values(opts.a_range.unwrap_or((0, 0))),
                };
                tasks.push(TaskDef::Tv {
                    name: name.clone().unwrap_or_else(|| auto("tv")),
                    a_values,
                    multiplier: multiplier.unwrap_or_else(|| ci.excess().is_some()),
                    splits: splits.clone().or_else(|| loaded.splits.clone()),
                });
            }
            TaskSpec::Det { name, z1, sweep, expect_c1, expect_c2 } => {
                let det = loaded
                    .det
                    .as_ref()
                    .ok_or_else(|| anyhow!("tasks[{idx}]: det needs a det block"))?;
                let cases = if *sweep {
                    if z1.is_some() || expect_c1.is_some() || expect_c2.is_some() {
                        bail!("tasks[{idx}]: sweep does not combine with z1 or expected counts");
                    }
                    singleton_and_pair_cases(det.points().len())
                } else {
                    vec![DetCaseDef {
                        z1: z1.clone().unwrap_or_else(|| det.split().z1().to_vec()),
                        expect_c1: *expect_c1,
                        expect_c2: *expect_c2,
                    }]
                };
                tasks.push(TaskDef::Det { name: name.clone().unwrap_or_else(|| auto("det")), cases });
            }
            TaskSpec::Koszul { name, variant, twists, expect } => {
                let ci = loaded
                    .ci
                    .as_ref()
                    .ok_or_else(|| anyhow!("tasks[{idx}]: koszul needs sections"))?;
                let variant = match variant {
                    VariantSpec::Full => KoszulVariant::Full,
                    VariantSpec::Skoda => KoszulVariant::Skoda,
                };
                let (lo, hi) = match twists {
                    Some([lo, hi]) => (*lo, *hi),
                    None => opts.twist_window.unwrap_or_else(|| default_window(ci)),
                };
                if lo > hi {
                    bail!("tasks[{idx}]: empty twist window {lo}..{hi}");
                }
                let expect = expect.unwrap_or(
                    if variant == KoszulVariant::Full && ci.excess().is_some() {
                        ExpectSpec::Excess
                    } else {
                        ExpectSpec::Exact
                    },
                );
                tasks.push(TaskDef::Koszul {
                    name: name.clone().unwrap_or_else(|| auto("koszul")),
                    variant,
                    lo,
                    hi,
                    expect,
                });
            }
        }
    }
    let tasks = keep(tasks, opts.check);
    if tasks.is_empty() {
        bail!("check selects no task in {}", path.display());
    }

    let degrees = match (&loaded.ci, &loaded.det) {
        (Some(ci), _) => ci.degrees().to_vec(),
        (None, Some(det)) => det.matrix().row_degrees().to_vec(),
        (None, None) => unreachable!("build rejects scenarios with no data"),
    };
    let info = ScenarioInfo {
        name: loaded.name.clone(),
        field: field_string(loaded.field),
        ambient_dim: file.ambient_dim,
        degrees,
        num_points: file.points.len(),
        seed: None,
        source: format!("file:{}", path.display()),
    };
    Ok(Workload {
        info,
        ci: loaded.ci,
        det: loaded.det,
        tasks,
        timing: opts.timing,
    })
}

/// Run every task and assemble the report in declaration order.  Tasks run
/// in parallel; set `CB_LAB_THREADS` to cap the worker count.
pub fn execute(w: &Workload) -> anyhow::Result<RunReport> {
    let start = Instant::now();
    let run_all = || {
        w.tasks
            .par_iter()
            .map(|def| run_task(w, def))
            .collect::<anyhow::Result<Vec<TaskReport>>>()
    };
    let tasks = match std::env::var("CB_LAB_THREADS") {
        Err(_) => run_all()?,
        Ok(s) => {
            let threads: usize = s.parse().context("CB_LAB_THREADS")?;
            if threads == 0 {
                bail!("CB_LAB_THREADS must be positive");
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .context("CB_LAB_THREADS")?
                .install(run_all)?
        }
    };
    let pass = tasks.iter().all(|t| t.pass());
    Ok(RunReport {
        scenario: w.info.clone(),
        tasks,
        pass,
        timing_ms: w.timing.then(|| start.elapsed().as_millis() as u64),
    })
}

fn need_ci<'a>(w: &'a Workload, name: &str) -> anyhow::Result<&'a CIScenario> {
    w.ci.as_ref().ok_or_else(|| anyhow!("task {name}: the scenario has no sections"))
}

fn run_task(w: &Workload, def: &TaskDef) -> anyhow::Result<TaskReport> {
    match def {
        TaskDef::Cb { name, degree, jet_order, expect_fail } => {
            let ci = need_ci(w, name)?;
            let extra: Vec<Condition> = match jet_order {
                None => Vec::new(),
                Some(order) => {
                    let locus = ci.excess().ok_or_else(|| {
                        anyhow!("task {name}: jets requested but the scenario has no excess locus")
                    })?;
                    vec![Condition::subvariety_jet(locus.param().clone(), *order)]
                }
            };
            let mut omissions = Vec::with_capacity(ci.num_points());
            for omit in 0..ci.num_points() {
                let rep = cb_propagation(ci, &extra, *degree, omit)?;
                omissions.push(OmissionReport {
                    omit,
                    holds: rep.holds,
                    vacuous: rep.vacuous,
                    h0_without: rep.h0_without,
                    h0_with: rep.h0_with,
                    witness: rep.witness.map(|f| f.to_string()),
                });
            }
            let all_hold = omissions.iter().all(|o| o.holds);
            let pass = if *expect_fail { !all_hold } else { all_hold };
            Ok(TaskReport::Cb(CbTaskReport {
                name: name.clone(),
                degree: *degree,
                jet_order: *jet_order,
                expect_fail: *expect_fail,
                omissions,
                pass,
            }))
        }
        TaskDef::Tv { name, a_values, multiplier, splits } => {
            let ci = need_ci(w, name)?;
            let splits: Vec<Split> = match splits {
                Some(lists) => lists
                    .iter()
                    .map(|z1| Split::new(ci.num_points(), z1.clone()))
                    .collect::<cb_core::Result<_>>()?,
                None => Split::enumerate_proper(ci.num_points()),
            };
            let mut cases = Vec::with_capacity(a_values.len() * splits.len());
            for &a in a_values {
                for split in &splits {
                    let rep = tv_check(ci, a, split, *multiplier)?;
                    cases.push(TvCaseReport {
                        a,
                        z1: rep.z1,
                        v1: rep.v1,
                        v2: rep.v2,
                        vacuous: rep.vacuous,
                        pass: rep.pass,
                    });
                }
            }
            let pass = cases.iter().all(|c| c.pass);
            Ok(TaskReport::Tv(TvTaskReport {
                name: name.clone(),
                multiplier: *multiplier,
                cases,
                pass,
            }))
        }
        TaskDef::Det { name, cases } => {
            let det = w
                .det
                .as_ref()
                .ok_or_else(|| anyhow!("task {name}: the scenario has no matrix of forms"))?;
            let mut out = Vec::with_capacity(cases.len());
            for case in cases {
                let split = Split::new(det.points().len(), case.z1.clone())?;
                let rep = det_cb_check_split(det, &split)?;
                let mut pass = rep.pass;
                if let Some(e1) = case.expect_c1 {
                    pass = pass && rep.c1 == e1;
                }
                if let Some(e2) = case.expect_c2 {
                    pass = pass && rep.c2 == e2;
                }
                out.push(DetCaseReport {
                    z1: rep.z1,
                    c1: rep.c1,
                    c2: rep.c2,
                    vacuous: rep.vacuous,
                    expect_c1: case.expect_c1,
                    expect_c2: case.expect_c2,
                    pass,
                });
            }
            let pass = out.iter().all(|c| c.pass);
            Ok(TaskReport::Det(DetTaskReport { name: name.clone(), cases: out, pass }))
        }
        TaskDef::Koszul { name, variant, lo, hi, expect } => {
            let ci = need_ci(w, name)?;
            let mut twists = Vec::with_capacity((hi - lo + 1).max(0) as usize);
            for twist in *lo..=*hi {
                let cx = GradedComplex::build(ci, twist, *variant)?;
                let n = cx.n();
                let term_dims: Vec<usize> = (0..=n).rev().map(|p| cx.term_dim(p)).collect();
                let homology = cx.homology_dims();
                let dd_zero = cx.dd_is_zero();
                let (tail_rank, tail_target) = match variant {
                    KoszulVariant::Full => (None, None),
                    KoszulVariant::Skoda => {
                        (Some(cx.tail_image_rank()), Some(cx.skoda_tail_target_dim()?))
                    }
                };
                // Positions n..1 sit in front of the bottom entry.
                let upper = &homology[..n];
                let pass = dd_zero
                    && match expect {
                        ExpectSpec::Exact => {
                            upper.iter().all(|&h| h == 0) && tail_rank == tail_target
                        }
                        ExpectSpec::Excess => upper.iter().any(|&h| h != 0),
                    };
                twists.push(TwistReport {
                    twist,
                    term_dims,
                    homology,
                    dd_zero,
                    tail_rank,
                    tail_target,
                    pass,
                });
            }
            let pass = twists.iter().all(|t| t.pass);
            Ok(TaskReport::Koszul(KoszulTaskReport {
                name: name.clone(),
                variant: match variant {
                    KoszulVariant::Full => "full".into(),
                    KoszulVariant::Skoda => "skoda".into(),
                },
                expect: match expect {
                    ExpectSpec::Exact => "exact".into(),
                    ExpectSpec::Excess => "excess".into(),
                },
                twists,
                pass,
            }))
        }
    }
}
