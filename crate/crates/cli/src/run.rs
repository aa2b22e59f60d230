//! Command dispatch and table/CSV/JSON rendering.

use std::fmt::Write as _;

use clap::{ArgGroup, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cylproj_core::discrete_core::DiscreteBase;
use cylproj_core::measure_engine::{fiber_profile, FiberProfile, Lebesgue, PowerMeasure};
use cylproj_core::oracle::{n_fold_measure_by_materialization, Mode, OracleConfig};
use cylproj_core::projection_engine::{
    continuity_check, convergence_table, lemma1_audit, strong_co_project, strong_project,
    theorem4_audit, AuditReport, ConvergenceReport, Verdict,
};
use cylproj_core::rational::{fmt_decimal, fmt_exact, Q};
use cylproj_core::set_core::{Component, CylSet, DimVar};

use crate::model::{Entry, ModelFile};

const DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Measure of a set, or the total of a profile.
    Measure { name: String },
    /// Ordinary or strong (co-)projection along a dimension.
    Project {
        name: String,
        #[arg(long)]
        dim: String,
        /// Keep parameters whose section has positive (with --dual: full) measure.
        #[arg(long)]
        strong: bool,
        /// Dual operator: co-cylindrification or strong co-projection.
        #[arg(long)]
        dual: bool,
    },
    /// Exact n-fold union and intersection measures for n = 1..N.
    Converge {
        name: String,
        #[arg(long)]
        dim: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_n: u64,
    },
    /// Whether the projection measure equals the sup of the union sequence.
    CheckContinuity {
        name: String,
        #[arg(long)]
        dim: String,
    },
    /// Audit of the inf-property criterion or the majorant-rectangle theorem.
    #[command(group(ArgGroup::new("which").required(true).args(["lemma1", "thm4"])))]
    Audit {
        name: String,
        #[arg(long)]
        lemma1: bool,
        #[arg(long)]
        thm4: bool,
        #[arg(long)]
        dim: String,
    },
    /// Closed forms against literal materialization of the n-fold stages.
    OracleDiff {
        name: String,
        #[arg(long)]
        dim: String,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        max_n: u64,
    },
}

/// Successful command output. `failed` marks a verdict that fails.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub output: String,
    pub failed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct CommandError(pub String);

fn cerr<E: std::fmt::Display>(e: E) -> CommandError {
    CommandError(e.to_string())
}

fn jq(v: &Q) -> Value {
    json!({
        "num": v.numer().to_string(),
        "den": v.denom().to_string(),
        "decimal": fmt_decimal(v, DIGITS),
    })
}

fn shown(v: &Q) -> String {
    format!("{} ({})", fmt_exact(v), fmt_decimal(v, DIGITS))
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(fields: &[String]) -> String {
    let v: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
    v.join(",") + "\n"
}

fn json_out(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("json values serialize") + "\n"
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|i| {
            rows.iter()
                .filter_map(|r| r.get(i))
                .map(|s| s.chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (i, cell) in r.iter().enumerate() {
            if i + 1 == r.len() {
                line.push_str(cell);
            } else {
                let pad = widths[i] - cell.chars().count();
                line.push_str(cell);
                line.push_str(&" ".repeat(pad + 2));
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn discrete_base<'m>(model: &'m ModelFile, name: &str) -> Result<&'m DiscreteBase, CommandError> {
    model.base().ok_or_else(|| {
        CommandError(format!(
            "discrete set `{name}` needs a `base` declaration in the model"
        ))
    })
}

fn lookup<'m>(model: &'m ModelFile, name: &str) -> Result<&'m Entry, CommandError> {
    model
        .get(name)
        .ok_or_else(|| CommandError(format!("no set, dset or profile named `{name}`")))
}

fn lookup_dim(model: &ModelFile, dim: &str) -> Result<DimVar, CommandError> {
    model
        .dim(dim)
        .ok_or_else(|| CommandError(format!("unknown dimension `{dim}`")))
}

fn profile_refused(name: &str, what: &str) -> CommandError {
    CommandError(format!(
        "`{name}` is a raw profile with no underlying set; {what} needs the ordinary projection. \
         Profiles support `measure`, `converge` and `project --strong` only"
    ))
}

pub fn run(
    model: &ModelFile,
    cmd: &Command,
    format: Format,
    max_cells: Option<u64>,
) -> Result<Outcome, CommandError> {
    match cmd {
        Command::Measure { name } => {
            let v = match lookup(model, name)? {
                Entry::Set(s) => Lebesgue.measure(s).map_err(cerr)?.exact,
                Entry::DSet(s) => discrete_base(model, name)?.measure(s).map_err(cerr)?.exact,
                Entry::Profile(p) => p.fubini_total(),
            };
            Ok(done(match format {
                Format::Table => format!("{}\n", shown(&v)),
                Format::Csv => {
                    csv_line(&["name".into(), "exact".into(), "decimal".into()])
                        + &csv_line(&[name.clone(), fmt_exact(&v), fmt_decimal(&v, DIGITS)])
                }
                Format::Json => json_out(json!({ "name": name, "measure": jq(&v) })),
            }))
        }
        Command::Project {
            name,
            dim,
            strong,
            dual,
        } => {
            let operator = match (strong, dual) {
                (false, false) => "projection",
                (false, true) => "co_projection",
                (true, false) => "strong_projection",
                (true, true) => "strong_co_projection",
            };
            let (set, v) = match lookup(model, name)? {
                Entry::Profile(p) => {
                    if !strong {
                        return Err(profile_refused(name, "`project` without --strong"));
                    }
                    let (sup, inf) = p.limits();
                    (None, if *dual { inf.exact } else { sup.exact })
                }
                Entry::Set(s) => {
                    let y = lookup_dim(model, dim)?;
                    let (r, v) = project(s, y, *strong, *dual, &Lebesgue)?;
                    (Some(model.render(&r)), v)
                }
                Entry::DSet(s) => {
                    let y = lookup_dim(model, dim)?;
                    let base = discrete_base(model, name)?;
                    let (r, v) = project(s, y, *strong, *dual, base)?;
                    (Some(model.render(&r)), v)
                }
            };
            Ok(done(match format {
                Format::Table => match &set {
                    Some(s) => format!("{s}\n"),
                    None => format!("{}\n", shown(&v)),
                },
                Format::Csv => {
                    csv_line(&[
                        "name".into(),
                        "dim".into(),
                        "operator".into(),
                        "set".into(),
                        "exact".into(),
                        "decimal".into(),
                    ]) + &csv_line(&[
                        name.clone(),
                        dim.clone(),
                        operator.into(),
                        set.clone().unwrap_or_default(),
                        fmt_exact(&v),
                        fmt_decimal(&v, DIGITS),
                    ])
                }
                Format::Json => json_out(json!({
                    "name": name,
                    "dim": dim,
                    "operator": operator,
                    "set": set,
                    "measure": jq(&v),
                })),
            }))
        }
        Command::Converge { name, dim, max_n } => {
            let (report, uncorrected, measure_name) = match lookup(model, name)? {
                Entry::Profile(p) => (ConvergenceReport::from_profile(p, *max_n), None, "mu"),
                Entry::Set(s) => {
                    let y = lookup_dim(model, dim)?;
                    let r = convergence_table(s, y, *max_n, &Lebesgue).map_err(cerr)?;
                    (r, None, "lambda")
                }
                Entry::DSet(s) => {
                    let y = lookup_dim(model, dim)?;
                    let base = discrete_base(model, name)?;
                    let r = convergence_table(s, y, *max_n, base).map_err(cerr)?;
                    let p = fiber_profile(s, y, base).map_err(cerr)?;
                    let u: Vec<Q> = (1..=*max_n)
                        .map(|n| p.n_fold_intersection_uncorrected(n))
                        .collect();
                    (r, Some(u), "nu")
                }
            };
            let failed =
                report.continuity_holds == Some(false) || report.co_continuity_holds == Some(false);
            Ok(Outcome {
                output: render_convergence(&report, uncorrected.as_deref(), measure_name, format),
                failed,
            })
        }
        Command::CheckContinuity { name, dim } => {
            let report = match lookup(model, name)? {
                Entry::Profile(_) => return Err(profile_refused(name, "`check-continuity`")),
                Entry::Set(s) => {
                    let y = lookup_dim(model, dim)?;
                    rendered(model, continuity_check(s, y, &Lebesgue).map_err(cerr)?)
                }
                Entry::DSet(s) => {
                    let y = lookup_dim(model, dim)?;
                    let base = discrete_base(model, name)?;
                    rendered(model, continuity_check(s, y, base).map_err(cerr)?)
                }
            };
            Ok(audit_outcome(&report, format))
        }
        Command::Audit {
            name, lemma1, dim, ..
        } => {
            let report = match lookup(model, name)? {
                Entry::Profile(_) => return Err(profile_refused(name, "`audit`")),
                Entry::Set(s) => {
                    let y = lookup_dim(model, dim)?;
                    let r = if *lemma1 {
                        lemma1_audit(s, y, &Lebesgue)
                    } else {
                        theorem4_audit(s, y, &Lebesgue)
                    };
                    rendered(model, r.map_err(cerr)?)
                }
                Entry::DSet(s) => {
                    let y = lookup_dim(model, dim)?;
                    let base = discrete_base(model, name)?;
                    let r = if *lemma1 {
                        lemma1_audit(s, y, base)
                    } else {
                        theorem4_audit(s, y, base)
                    };
                    rendered(model, r.map_err(cerr)?)
                }
            };
            Ok(audit_outcome(&report, format))
        }
        Command::OracleDiff { name, dim, max_n } => {
            let cfg = OracleConfig {
                max_cells,
                ..OracleConfig::default()
            };
            if *max_n > cfg.max_n {
                return Err(CommandError(format!(
                    "--max-n {max_n} exceeds the materialization bound {}",
                    cfg.max_n
                )));
            }
            let rows = match lookup(model, name)? {
                Entry::Profile(_) => return Err(profile_refused(name, "`oracle-diff`")),
                Entry::Set(s) => oracle_rows(s, lookup_dim(model, dim)?, *max_n, &Lebesgue, &cfg)?,
                Entry::DSet(s) => {
                    let base = discrete_base(model, name)?;
                    oracle_rows(s, lookup_dim(model, dim)?, *max_n, base, &cfg)?
                }
            };
            Ok(render_oracle(&rows, format))
        }
    }
}

fn done(output: String) -> Outcome {
    Outcome {
        output,
        failed: false,
    }
}

fn project<C, M>(
    a: &CylSet<C>,
    y: DimVar,
    strong: bool,
    dual: bool,
    m: &M,
) -> Result<(CylSet<C>, Q), CommandError>
where
    C: Component,
    M: PowerMeasure<C> + ?Sized,
{
    let r = match (strong, dual) {
        (false, false) => a.cylindrify(y),
        (false, true) => a.co_cylindrify(y),
        (true, false) => strong_project(a, y, m).map_err(cerr)?,
        (true, true) => strong_co_project(a, y, m).map_err(cerr)?,
    };
    let v = m.measure(&r).map_err(cerr)?.exact;
    Ok((r, v))
}

fn render_convergence(
    r: &ConvergenceReport,
    uncorrected: Option<&[Q]>,
    mu: &str,
    format: Format,
) -> String {
    let opt_q = |v: &Option<Q>| v.as_ref().map_or("n/a".to_string(), fmt_exact);
    let opt_b = |v: Option<bool>| v.map_or("n/a".to_string(), |b| b.to_string());
    let footer = [
        format!(
            "sup_limit={}, {mu}_C_y={}, continuity={}",
            fmt_exact(&r.sup_limit),
            opt_q(&r.ordinary_projection_measure),
            opt_b(r.continuity_holds)
        ),
        format!(
            "inf_limit={}, {mu}_Cd_y={}, co_continuity={}",
            fmt_exact(&r.inf_limit),
            opt_q(&r.ordinary_co_projection_measure),
            opt_b(r.co_continuity_holds)
        ),
    ];
    let mut header = vec!["n".to_string(), "union".into(), "intersection".into()];
    if uncorrected.is_some() {
        header.push("intersection_uncorrected".into());
    }
    match format {
        Format::Csv => {
            let mut out = csv_line(&header);
            for (i, row) in r.rows.iter().enumerate() {
                let mut f = vec![
                    row.n.to_string(),
                    fmt_exact(&row.union),
                    fmt_exact(&row.intersection),
                ];
                if let Some(u) = uncorrected {
                    f.push(fmt_exact(&u[i]));
                }
                out += &csv_line(&f);
            }
            for l in &footer {
                out.push_str(l);
                out.push('\n');
            }
            out
        }
        Format::Table => {
            let mut rows = vec![header];
            for (i, row) in r.rows.iter().enumerate() {
                let mut f = vec![
                    row.n.to_string(),
                    shown(&row.union),
                    shown(&row.intersection),
                ];
                if let Some(u) = uncorrected {
                    f.push(shown(&u[i]));
                }
                rows.push(f);
            }
            let mut out = table(&rows);
            for l in &footer {
                out.push_str(l);
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let rows: Vec<Value> = r
                .rows
                .iter()
                .enumerate()
                .map(|(i, row)| {
                    let mut v = json!({
                        "n": row.n,
                        "union": jq(&row.union),
                        "intersection": jq(&row.intersection),
                    });
                    if let Some(u) = uncorrected {
                        v["intersection_uncorrected"] = jq(&u[i]);
                    }
                    v
                })
                .collect();
            json_out(json!({
                "rows": rows,
                "sup_limit": jq(&r.sup_limit),
                "inf_limit": jq(&r.inf_limit),
                "projection_measure": r.ordinary_projection_measure.as_ref().map(jq),
                "co_projection_measure": r.ordinary_co_projection_measure.as_ref().map(jq),
                "continuity": r.continuity_holds,
                "co_continuity": r.co_continuity_holds,
            }))
        }
    }
}

fn rendered<C: Component>(model: &ModelFile, r: AuditReport<CylSet<C>>) -> AuditReport<String> {
    AuditReport {
        subject: r.subject,
        hypothesis_evaluations: r.hypothesis_evaluations,
        conclusion_evaluations: r.conclusion_evaluations,
        verdict: r.verdict,
        witness: r.witness.map(|w| model.render(&w)),
        derived: r
            .derived
            .into_iter()
            .map(|(k, s)| (k, model.render(&s)))
            .collect(),
        notes: r.notes,
    }
}

fn audit_outcome(r: &AuditReport<String>, format: Format) -> Outcome {
    let values = |e: &cylproj_core::projection_engine::Evaluation| {
        e.values
            .iter()
            .map(|(k, v)| format!("{k}={}", fmt_exact(v)))
            .collect::<Vec<_>>()
            .join("; ")
    };
    let output = match format {
        Format::Table => {
            let mut out = format!("subject: {}\n", r.subject);
            for (kind, list) in [
                ("hypothesis", &r.hypothesis_evaluations),
                ("conclusion", &r.conclusion_evaluations),
            ] {
                for e in list {
                    let _ = writeln!(out, "{kind}: {e}");
                }
            }
            for (k, s) in &r.derived {
                let _ = writeln!(out, "derived {k}: {s}");
            }
            for n in &r.notes {
                let _ = writeln!(out, "note: {n}");
            }
            if let Some(w) = &r.witness {
                let _ = writeln!(out, "witness: {w}");
            }
            let _ = writeln!(out, "verdict: {}", r.verdict);
            out
        }
        Format::Csv => {
            let mut out = csv_line(&[
                "section".into(),
                "label".into(),
                "holds".into(),
                "values".into(),
            ]);
            for (kind, list) in [
                ("hypothesis", &r.hypothesis_evaluations),
                ("conclusion", &r.conclusion_evaluations),
            ] {
                for e in list {
                    out +=
                        &csv_line(&[kind.into(), e.label.clone(), e.holds.to_string(), values(e)]);
                }
            }
            for (k, s) in &r.derived {
                out += &csv_line(&["derived".into(), k.clone(), String::new(), s.clone()]);
            }
            for n in &r.notes {
                out += &csv_line(&["note".into(), String::new(), String::new(), n.clone()]);
            }
            if let Some(w) = &r.witness {
                out += &csv_line(&["witness".into(), String::new(), String::new(), w.clone()]);
            }
            out += &csv_line(&[
                "verdict".into(),
                r.subject.into(),
                String::new(),
                r.verdict.to_string(),
            ]);
            out
        }
        Format::Json => {
            let evals = |list: &[cylproj_core::projection_engine::Evaluation]| -> Vec<Value> {
                list.iter()
                    .map(|e| {
                        json!({
                            "label": e.label,
                            "holds": e.holds,
                            "values": e.values.iter().map(|(k, v)| json!({
                                "name": k,
                                "value": jq(v),
                            })).collect::<Vec<_>>(),
                        })
                    })
                    .collect()
            };
            json_out(json!({
                "subject": r.subject,
                "hypotheses": evals(&r.hypothesis_evaluations),
                "conclusions": evals(&r.conclusion_evaluations),
                "derived": r.derived.iter().map(|(k, s)| json!({"name": k, "set": s})).collect::<Vec<_>>(),
                "notes": r.notes,
                "witness": r.witness,
                "verdict": r.verdict.to_string(),
            }))
        }
    };
    Outcome {
        output,
        failed: r.verdict == Verdict::Fails,
    }
}

struct OracleRow {
    n: u64,
    mode: Mode,
    closed: Q,
    materialized: Q,
}

fn oracle_rows<C, M>(
    a: &CylSet<C>,
    y: DimVar,
    max_n: u64,
    m: &M,
    cfg: &OracleConfig,
) -> Result<Vec<OracleRow>, CommandError>
where
    C: Component,
    M: PowerMeasure<C> + ?Sized,
{
    let p: FiberProfile<C> = fiber_profile(a, y, m).map_err(cerr)?;
    let mut rows = Vec::new();
    for n in 1..=max_n {
        for mode in [Mode::Union, Mode::Intersection] {
            let closed = match mode {
                Mode::Union => p.n_fold_union(n).exact,
                Mode::Intersection => p.n_fold_intersection(n).exact,
            };
            let materialized = n_fold_measure_by_materialization(a, y, n, mode, m, cfg)
                .map_err(cerr)?
                .exact;
            rows.push(OracleRow {
                n,
                mode,
                closed,
                materialized,
            });
        }
    }
    Ok(rows)
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Union => "union",
        Mode::Intersection => "intersection",
    }
}

fn render_oracle(rows: &[OracleRow], format: Format) -> Outcome {
    let all = rows.iter().all(|r| r.closed == r.materialized);
    let output = match format {
        Format::Table => {
            let mut t = vec![vec![
                "n".to_string(),
                "mode".into(),
                "closed_form".into(),
                "materialized".into(),
                "match".into(),
            ]];
            for r in rows {
                t.push(vec![
                    r.n.to_string(),
                    mode_name(r.mode).into(),
                    shown(&r.closed),
                    shown(&r.materialized),
                    (r.closed == r.materialized).to_string(),
                ]);
            }
            table(&t) + &format!("all_match={all}\n")
        }
        Format::Csv => {
            let mut out = csv_line(&[
                "n".into(),
                "mode".into(),
                "closed_form".into(),
                "materialized".into(),
                "match".into(),
            ]);
            for r in rows {
                out += &csv_line(&[
                    r.n.to_string(),
                    mode_name(r.mode).into(),
                    fmt_exact(&r.closed),
                    fmt_exact(&r.materialized),
                    (r.closed == r.materialized).to_string(),
                ]);
            }
            out + &format!("all_match={all}\n")
        }
        Format::Json => json_out(json!({
            "rows": rows.iter().map(|r| json!({
                "n": r.n,
                "mode": mode_name(r.mode),
                "closed_form": jq(&r.closed),
                "materialized": jq(&r.materialized),
                "match": r.closed == r.materialized,
            })).collect::<Vec<_>>(),
            "all_match": all,
        })),
    };
    Outcome {
        output,
        failed: !all,
    }
}
