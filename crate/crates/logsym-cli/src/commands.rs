//! Command dispatch. Every command produces both a TSV table and a JSON
//! value; `check_failed` marks mathematical failures (exit code 2) as opposed
//! to input errors (exit code 1), so scripts can tell "false" from "broken".

use logsym_core::decomposition::{
    decompose_class, derive_partition, induced_cosymplectic, is_partitionable, IntersectionType,
    Violation,
};
use logsym_core::logcohom::b_cohomology;
use logsym_core::oracle::{de_rham_betti_oracle, truncated_lichnerowicz};
use logsym_core::poisson::{poisson_cohomology_of_decomposition, poisson_cohomology_report};
use logsym_core::symcalc::{is_k_cosymplectic, verify_inverse, CosymplecticReport};
use logsym_core::{ClassDecomposition, ComponentRule, Error as CoreError, Parity, PoissonReport};
use serde_json::{json, Value};

use crate::model::{InputError, Model, OracleSettings};
use crate::report::{certification_parts, dims_json, dims_rows, witness_json, witness_text, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    BCohomology,
    Decompose,
    CheckPartitionable,
    Partition,
    PoissonCohomology,
    VerifySymplectic,
    Cosymplectic,
    Oracle,
    All,
}

pub struct Flags {
    pub cutoff: Option<i64>,
    pub strict_jk: bool,
    pub strict_components: bool,
    pub max_matrix: Option<usize>,
}

pub struct Outcome {
    pub json: Value,
    pub table: String,
    pub check_failed: bool,
}

enum Fail {
    Math(Outcome),
    Input(InputError),
}

impl From<InputError> for Fail {
    fn from(e: InputError) -> Fail {
        Fail::Input(e)
    }
}

pub fn run(cmd: Command, model: &Model, flags: &Flags) -> Result<Outcome, InputError> {
    match dispatch(cmd, model, flags) {
        Ok(out) => Ok(out),
        Err(Fail::Math(out)) => Ok(out),
        Err(Fail::Input(e)) => Err(e),
    }
}

fn dispatch(cmd: Command, model: &Model, flags: &Flags) -> Result<Outcome, Fail> {
    match cmd {
        Command::BCohomology => cmd_b_cohomology(model),
        Command::Decompose => cmd_decompose(model),
        Command::CheckPartitionable => cmd_check_partitionable(model, flags),
        Command::Partition => cmd_partition(model, flags),
        Command::PoissonCohomology => cmd_poisson(model, flags),
        Command::VerifySymplectic => cmd_verify_symplectic(model),
        Command::Cosymplectic => cmd_cosymplectic(model, flags),
        Command::Oracle => cmd_oracle(model, flags),
        Command::All => cmd_all(model, flags),
    }
}

fn rule(flags: &Flags) -> ComponentRule {
    if flags.strict_components {
        ComponentRule::EveryComponent
    } else {
        ComponentRule::ClassLevel
    }
}

fn input(msg: impl Into<String>) -> Fail {
    Fail::Input(InputError(msg.into()))
}

/// Sort the mathematical failures (exit 2, structured report on stdout) from
/// input problems (exit 1, message on stderr).
fn classify(cmd: &str, model: &Model, e: CoreError) -> Fail {
    let kind = match &e {
        CoreError::NotClosed => "not_closed",
        CoreError::NotPoisson => "not_poisson",
        CoreError::PairingMissing(_) => "pairing_missing",
        CoreError::PairingAmbiguous(_, _) => "pairing_ambiguous",
        CoreError::NotPartitionable(rep) => {
            let rep = rep.clone();
            return Fail::Math(gate_outcome(cmd, model, &rep.violations));
        }
        _ => return Fail::Input(InputError(e.to_string())),
    };
    let mut t = Table::new(vec!["key", "value"]);
    t.comment(format!("logsym {cmd}\t{}", model.label));
    t.row(vec!["error".into(), kind.into()]);
    t.row(vec!["message".into(), e.to_string()]);
    Fail::Math(Outcome {
        json: json!({
            "command": cmd,
            "model": model.label,
            "check_failed": true,
            "error": {"kind": kind, "message": e.to_string()},
        }),
        table: t.render(),
        check_failed: true,
    })
}

fn violation_text(v: &Violation) -> String {
    match v {
        Violation::Condition1 { s, i } => {
            format!("condition (1): b[{s}] ≠ 0 while pairing c[{i},{s}] ≠ 0")
        }
        Violation::Condition2Restriction { s, t, offender } => {
            format!("condition (2): c[{s},{t}] ≠ 0 but b[{offender}] does not vanish on {s}∩{t}")
        }
        Violation::Condition2Matching {
            shared,
            first,
            second,
        } => {
            format!("condition (2): {shared} is paired with both {first} and {second}")
        }
        Violation::MixedComponents { s, t } => {
            format!("pairing c[{s},{t}] vanishes on some intersection components but not all")
        }
    }
}

/// Exit-2 report for a failed partitionability gate.
fn gate_outcome(cmd: &str, model: &Model, violations: &[Violation]) -> Outcome {
    let mut t = Table::new(vec!["key", "value"]);
    t.comment(format!("logsym {cmd}\t{}", model.label));
    t.row(vec!["partitionable".into(), "false".into()]);
    for v in violations {
        t.row(vec!["violation".into(), violation_text(v)]);
    }
    Outcome {
        json: json!({
            "command": cmd,
            "model": model.label,
            "check_failed": true,
            "partitionable": false,
            "violations": serde_json::to_value(violations).expect("violations serialize"),
        }),
        table: t.render(),
        check_failed: true,
    }
}

/// The class decomposition the partition commands run on: the abstract block
/// if declared, otherwise extracted from ω.
fn the_decomposition(cmd: &str, model: &Model) -> Result<ClassDecomposition, Fail> {
    if let Some(dec) = &model.decomposition {
        return Ok(dec.clone());
    }
    let omega = model.omega.as_ref().ok_or_else(|| {
        input(format!(
            "{cmd} needs a symbolic omega or an abstract decomposition"
        ))
    })?;
    decompose_class(omega, &model.arrangement).map_err(|e| classify(cmd, model, e))
}

fn cmd_b_cohomology(model: &Model) -> Result<Outcome, Fail> {
    let dims = b_cohomology(&model.arrangement);
    let mut t = Table::new(vec!["p", "dim"]);
    t.comment(format!("logsym b-cohomology\t{}", model.label));
    dims_rows(&mut t, &dims);
    Ok(Outcome {
        json: json!({
            "command": "b-cohomology",
            "model": model.label,
            "dims": dims_json(&dims),
        }),
        table: t.render(),
        check_failed: false,
    })
}

fn decomposition_json(dec: &ClassDecomposition, names: &[String]) -> Value {
    let b: Vec<Value> = dec
        .b
        .iter()
        .map(|(id, cls)| {
            let restrictions: Vec<Value> = cls
                .restriction_vanishes
                .iter()
                .map(|(other, vanishes)| json!({"other": other, "vanishes": vanishes}))
                .collect();
            json!({"hypersurface": id, "nonzero": cls.nonzero, "restrictions": restrictions})
        })
        .collect();
    let c: Vec<Value> = dec
        .c
        .iter()
        .map(|e| {
            json!({
                "pair": [e.pair.0, e.pair.1],
                "scalars": e.scalars.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "nonzero": e.class_nonzero(),
            })
        })
        .collect();
    json!({
        "a": {
            "nonzero": dec.a.nonzero,
            "representative": dec.a.representative.as_ref().map(|f| f.render(names)),
        },
        "b": b,
        "c": c,
    })
}

fn cmd_decompose(model: &Model) -> Result<Outcome, Fail> {
    let dec = the_decomposition("decompose", model)?;
    let mut t = Table::new(vec!["class", "location", "property", "value"]);
    t.comment(format!("logsym decompose\t{}", model.label));
    t.row(vec![
        "a".into(),
        "-".into(),
        "nonzero".into(),
        dec.a.nonzero.to_string(),
    ]);
    if let Some(rep) = &dec.a.representative {
        t.row(vec![
            "a".into(),
            "-".into(),
            "representative".into(),
            rep.render(&model.names),
        ]);
    }
    for (id, cls) in &dec.b {
        t.row(vec![
            "b".into(),
            id.clone(),
            "nonzero".into(),
            cls.nonzero.to_string(),
        ]);
        for (other, vanishes) in &cls.restriction_vanishes {
            t.row(vec![
                "b".into(),
                format!("{id}∩{other}"),
                "restriction vanishes".into(),
                vanishes.to_string(),
            ]);
        }
    }
    for e in &dec.c {
        let loc = format!("{}∩{}", e.pair.0, e.pair.1);
        let scalars = e
            .scalars
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        t.row(vec!["c".into(), loc.clone(), "scalars".into(), scalars]);
        t.row(vec![
            "c".into(),
            loc,
            "nonzero".into(),
            e.class_nonzero().to_string(),
        ]);
    }
    Ok(Outcome {
        json: json!({
            "command": "decompose",
            "model": model.label,
            "decomposition": decomposition_json(&dec, &model.names),
        }),
        table: t.render(),
        check_failed: false,
    })
}

fn cmd_check_partitionable(model: &Model, flags: &Flags) -> Result<Outcome, Fail> {
    let dec = the_decomposition("check-partitionable", model)?;
    let rep = is_partitionable(&dec, &model.arrangement, rule(flags))
        .map_err(|e| classify("check-partitionable", model, e))?;
    if !rep.partitionable {
        let mut out = gate_outcome("check-partitionable", model, &rep.violations);
        out.json["decomposition"] = decomposition_json(&dec, &model.names);
        return Ok(out);
    }
    let mut t = Table::new(vec!["key", "value"]);
    t.comment(format!("logsym check-partitionable\t{}", model.label));
    t.row(vec!["partitionable".into(), "true".into()]);
    Ok(Outcome {
        json: json!({
            "command": "check-partitionable",
            "model": model.label,
            "partitionable": true,
            "violations": [],
            "decomposition": decomposition_json(&dec, &model.names),
        }),
        table: t.render(),
        check_failed: false,
    })
}

fn cmd_partition(model: &Model, flags: &Flags) -> Result<Outcome, Fail> {
    let dec = the_decomposition("partition", model)?;
    let rep = is_partitionable(&dec, &model.arrangement, rule(flags))
        .map_err(|e| classify("partition", model, e))?;
    if !rep.partitionable {
        return Ok(gate_outcome("partition", model, &rep.violations));
    }
    let part = derive_partition(&dec, &model.arrangement, rule(flags))
        .map_err(|e| classify("partition", model, e))?;
    let mut t = Table::new(vec!["kind", "first", "second", "note"]);
    t.comment(format!("logsym partition\t{}", model.label));
    for (x, y) in part.pairs() {
        t.row(vec!["pair".into(), x.clone(), y.clone(), "-".into()]);
    }
    for z in part.zs() {
        t.row(vec!["z".into(), z.clone(), "-".into(), "-".into()]);
    }
    let ids: Vec<&str> = model
        .arrangement
        .hypersurfaces()
        .iter()
        .map(|h| h.id.as_str())
        .collect();
    let mut intersections = Vec::new();
    for (i, s) in ids.iter().enumerate() {
        for tid in &ids[i + 1..] {
            let ty = part
                .intersection_type(s, tid)
                .map_err(|e| Fail::Input(InputError(e.to_string())))?;
            let label = match ty {
                IntersectionType::Type1 => "type1",
                IntersectionType::Type2 => "type2",
            };
            t.row(vec![
                "intersection".into(),
                s.to_string(),
                tid.to_string(),
                label.into(),
            ]);
            intersections.push(json!({"pair": [s, tid], "kind": label}));
        }
    }
    Ok(Outcome {
        json: json!({
            "command": "partition",
            "model": model.label,
            "pairs": part.pairs().iter().map(|(x, y)| json!([x, y])).collect::<Vec<_>>(),
            "zs": part.zs(),
            "k": part.k(),
            "ell": part.ell(),
            "intersections": intersections,
        }),
        table: t.render(),
        check_failed: false,
    })
}

fn poisson_json(report: &PoissonReport, label: &str) -> Value {
    let summands: Vec<Value> = report
        .summands
        .iter()
        .map(|s| {
            json!({
                "collection": serde_json::to_value(&s.collection).expect("index sets serialize"),
                "stratum": s.stratum,
                "weight": s.weight,
                "empty": s.empty,
                "twist": serde_json::to_value(&s.twist).expect("twist serializes"),
                "contribution": dims_json(&s.contribution),
            })
        })
        .collect();
    json!({
        "command": "poisson-cohomology",
        "model": label,
        "pairs": report.pairs.iter().map(|(x, y)| json!([x, y])).collect::<Vec<_>>(),
        "zs": report.zs,
        "log_part": dims_json(&report.log_part),
        "summands": summands,
        "total": dims_json(&report.total),
    })
}

fn cmd_poisson(model: &Model, flags: &Flags) -> Result<Outcome, Fail> {
    let report = if let Some(dec) = &model.decomposition {
        poisson_cohomology_of_decomposition(dec, &model.arrangement, rule(flags), flags.strict_jk)
    } else {
        let omega = model.omega.as_ref().ok_or_else(|| {
            input("poisson-cohomology needs a symbolic omega or an abstract decomposition")
        })?;
        poisson_cohomology_report(omega, &model.arrangement, rule(flags), flags.strict_jk)
    }
    .map_err(|e| classify("poisson-cohomology", model, e))?;
    let mut t = Table::new(vec!["p", "dim"]);
    t.comment(format!("logsym poisson-cohomology\t{}", model.label));
    let pairs = report
        .pairs
        .iter()
        .map(|(x, y)| format!("({x},{y})"))
        .collect::<Vec<_>>()
        .join(" ");
    t.comment(format!(
        "pairs\t{}",
        if pairs.is_empty() { "-".into() } else { pairs }
    ));
    let zs = report.zs.join(" ");
    t.comment(format!(
        "zs\t{}",
        if zs.is_empty() { "-".into() } else { zs }
    ));
    dims_rows(&mut t, &report.total);
    Ok(Outcome {
        json: poisson_json(&report, &model.label),
        table: t.render(),
        check_failed: false,
    })
}

fn cmd_verify_symplectic(model: &Model) -> Result<Outcome, Fail> {
    let omega = model
        .omega
        .as_ref()
        .ok_or_else(|| input("verify-symplectic needs a symbolic omega"))?;
    let rep = omega
        .is_log_symplectic()
        .map_err(|e| Fail::Input(InputError(e.to_string())))?;
    let (status, witness) = certification_parts(&rep.nondegenerate);
    let mut t = Table::new(vec!["check", "result", "detail"]);
    t.comment(format!("logsym verify-symplectic\t{}", model.label));
    t.row(vec![
        "closed".into(),
        if rep.closed { "pass" } else { "fail" }.into(),
        "-".into(),
    ]);
    let detail = match (status, witness) {
        ("nonvanishing", _) => {
            format!(
                "top coefficient: {}",
                rep.top_coefficient.render(&model.names)
            )
        }
        ("vanishes", Some(q)) => format!("witness: {}", witness_text(&model.names, q)),
        ("vanishes", None) => "top power identically zero".into(),
        _ => "certificate inconclusive".into(),
    };
    t.row(vec![
        "nondegenerate".into(),
        if status == "nonvanishing" {
            "pass"
        } else {
            "fail"
        }
        .into(),
        detail,
    ]);
    let mut poisson: Option<bool> = None;
    let mut inverse: Option<bool> = None;
    if let Some(pi) = &model.pi {
        let is_p = pi.is_poisson();
        poisson = Some(is_p);
        t.row(vec![
            "poisson".into(),
            if is_p { "pass" } else { "fail" }.into(),
            "[π,π] = 0".into(),
        ]);
        let inv = match verify_inverse(omega, pi) {
            Ok(b) => b,
            // a pole that fails to cancel means π is not the log inverse
            Err(CoreError::NonCancellingDenominator { .. }) => false,
            Err(e) => return Err(Fail::Input(InputError(e.to_string()))),
        };
        inverse = Some(inv);
        t.row(vec![
            "inverse".into(),
            if inv { "pass" } else { "fail" }.into(),
            "ω·π = id".into(),
        ]);
    }
    let verified = rep.closed
        && status == "nonvanishing"
        && poisson.unwrap_or(true)
        && inverse.unwrap_or(true);
    t.row(vec![
        "verdict".into(),
        if verified { "pass" } else { "fail" }.into(),
        "-".into(),
    ]);
    Ok(Outcome {
        json: json!({
            "command": "verify-symplectic",
            "model": model.label,
            "closed": rep.closed,
            "nondegenerate": status,
            "witness": witness_json(witness),
            "top_coefficient": rep.top_coefficient.render(&model.names),
            "poisson": poisson,
            "inverse": inverse,
            "verified": verified,
        }),
        table: t.render(),
        check_failed: !verified,
    })
}

fn cosym_rows(
    t: &mut Table,
    rep: &CosymplecticReport,
    names: &[String],
    alphas: &[String],
    beta: &str,
) {
    for (i, closed) in rep.alphas_closed.iter().enumerate() {
        t.row(vec![
            format!("alpha[{i}] closed"),
            if *closed { "pass" } else { "fail" }.into(),
            alphas.get(i).cloned().unwrap_or_default(),
        ]);
    }
    t.row(vec![
        "beta closed".into(),
        if rep.beta_closed { "pass" } else { "fail" }.into(),
        beta.to_string(),
    ]);
    let (status, witness) = certification_parts(&rep.nonvanishing);
    let detail = match (status, witness) {
        ("nonvanishing", _) => {
            format!("top coefficient: {}", rep.top_coefficient.render(names))
        }
        ("vanishes", Some(q)) => format!("witness: {}", witness_text(names, q)),
        ("vanishes", None) => "volume form identically zero".into(),
        _ => "certificate inconclusive".into(),
    };
    t.row(vec![
        "nonvanishing".into(),
        if status == "nonvanishing" {
            "pass"
        } else {
            "fail"
        }
        .into(),
        detail,
    ]);
    let verdict = rep.verdict();
    t.row(vec![
        "verdict".into(),
        match verdict {
            Some(true) => "pass",
            Some(false) => "fail",
            None => "undetermined",
        }
        .into(),
        "-".into(),
    ]);
}

fn cosym_json(rep: &CosymplecticReport, names: &[String]) -> Value {
    let (status, witness) = certification_parts(&rep.nonvanishing);
    json!({
        "alphas_closed": rep.alphas_closed,
        "beta_closed": rep.beta_closed,
        "certification": status,
        "witness": witness_json(witness),
        "top_coefficient": rep.top_coefficient.render(names),
        "verdict": rep.verdict(),
    })
}

fn cmd_cosymplectic(model: &Model, flags: &Flags) -> Result<Outcome, Fail> {
    if let Some(spec) = &model.cosymplectic {
        let rep = is_k_cosymplectic(&spec.alphas, &spec.beta, spec.dim)
            .map_err(|e| Fail::Input(InputError(e.to_string())))?;
        let alphas: Vec<String> = spec.alphas.iter().map(|a| a.render(&model.names)).collect();
        let beta = spec.beta.render(&model.names);
        let mut t = Table::new(vec!["check", "result", "detail"]);
        t.comment(format!("logsym cosymplectic\t{}", model.label));
        t.row(vec![
            "mode".into(),
            "direct".into(),
            format!("k = {}", spec.alphas.len()),
        ]);
        cosym_rows(&mut t, &rep, &model.names, &alphas, &beta);
        let mut json = cosym_json(&rep, &model.names);
        json["command"] = json!("cosymplectic");
        json["model"] = json!(model.label);
        json["mode"] = json!("direct");
        json["alphas"] = json!(alphas);
        json["beta"] = json!(beta);
        let failed = rep.verdict() != Some(true);
        return Ok(Outcome {
            json,
            table: t.render(),
            check_failed: failed,
        });
    }

    let omega = model.omega.as_ref().ok_or_else(|| {
        input("cosymplectic needs a cosymplectic block, or omega plus a stratum query")
    })?;
    let query = model.stratum_query.as_ref().ok_or_else(|| {
        input("cosymplectic on omega needs a stratum query picking the component")
    })?;
    let subset: Vec<&str> = query.subset.iter().map(|s| s.as_str()).collect();
    let induced = induced_cosymplectic(
        omega,
        &model.arrangement,
        &subset,
        &query.parities,
        rule(flags),
    )
    .map_err(|e| classify("cosymplectic", model, e))?;
    let alphas: Vec<String> = induced
        .alphas
        .iter()
        .map(|a| a.render(&model.names))
        .collect();
    let beta = induced.beta.render(&model.names);
    let parities: Vec<&str> = query
        .parities
        .iter()
        .map(|p| match p {
            Parity::Zero => "0",
            Parity::Pi => "pi",
        })
        .collect();
    let mut t = Table::new(vec!["check", "result", "detail"]);
    t.comment(format!("logsym cosymplectic\t{}", model.label));
    t.row(vec![
        "mode".into(),
        "induced".into(),
        format!(
            "stratum {} at ({})",
            query.subset.join("∩"),
            parities.join(", ")
        ),
    ]);
    t.row(vec![
        "stratum dimension".into(),
        induced.stratum_dim.to_string(),
        format!("k = {}", induced.alphas.len()),
    ]);
    cosym_rows(&mut t, &induced.report, &model.names, &alphas, &beta);
    let mut json = cosym_json(&induced.report, &model.names);
    json["command"] = json!("cosymplectic");
    json["model"] = json!(model.label);
    json["mode"] = json!("induced");
    json["alphas"] = json!(alphas);
    json["beta"] = json!(beta);
    json["subset"] = json!(query.subset);
    json["parities"] = json!(parities);
    json["stratum_dim"] = json!(induced.stratum_dim);
    json["pairs"] = induced
        .subpartition
        .pairs()
        .iter()
        .map(|(x, y)| json!([x, y]))
        .collect::<Vec<_>>()
        .into();
    json["zs"] = json!(induced.subpartition.zs());
    let failed = induced.verified() != Some(true);
    Ok(Outcome {
        json,
        table: t.render(),
        check_failed: failed,
    })
}

fn oracle_settings(model: &Model, flags: &Flags) -> OracleSettings {
    let mut s = model.oracle.clone();
    if let Some(n) = flags.cutoff {
        s.cutoffs = vec![n];
    }
    if let Some(m) = flags.max_matrix {
        s.max_columns = m;
    }
    s
}

fn cmd_oracle(model: &Model, flags: &Flags) -> Result<Outcome, Fail> {
    let settings = oracle_settings(model, flags);
    let n = model.arrangement.dim();
    let de_rham = de_rham_betti_oracle(n, settings.de_rham_cutoff)
        .map_err(|e| Fail::Input(InputError(e.to_string())))?;
    let mut t = Table::new(vec!["kind", "degree", "cutoff", "dim"]);
    t.comment(format!("logsym oracle\t{}", model.label));
    for (p, d) in de_rham.dims().iter().enumerate() {
        t.row(vec![
            "de-rham".into(),
            p.to_string(),
            settings.de_rham_cutoff.to_string(),
            d.to_string(),
        ]);
    }
    let mut estimates = Vec::new();
    if let Some(pi) = &model.pi {
        for &degree in &settings.degrees {
            let est = truncated_lichnerowicz(pi, degree, &settings.cutoffs, settings.max_columns)
                .map_err(|e| match e {
                CoreError::ResourceCap { columns, cap } => input(format!(
                    "oracle needs {columns} matrix columns, over the cap {cap}; raise --max-matrix"
                )),
                other => classify("oracle", model, other),
            })?;
            for (cutoff, dim) in &est.dims {
                t.row(vec![
                    "estimate".into(),
                    degree.to_string(),
                    cutoff.to_string(),
                    dim.to_string(),
                ]);
            }
            t.row(vec![
                "stabilized".into(),
                degree.to_string(),
                "-".into(),
                est.stabilized
                    .map(|d| d.to_string())
                    .unwrap_or_else(|| "unstable".into()),
            ]);
            estimates.push(json!({
                "degree": degree,
                "dims": est.dims.iter().map(|(c, d)| json!([c, d])).collect::<Vec<_>>(),
                "stabilized": est.stabilized,
            }));
        }
    }
    Ok(Outcome {
        json: json!({
            "command": "oracle",
            "model": model.label,
            "de_rham": {"cutoff": settings.de_rham_cutoff, "dims": dims_json(&de_rham)},
            "estimates": estimates,
            "max_columns": settings.max_columns,
        }),
        table: t.render(),
        check_failed: false,
    })
}

fn skipped(cmd: &str, model: &Model, why: &str) -> Outcome {
    let mut t = Table::new(vec!["key", "value"]);
    t.comment(format!("logsym {cmd}\t{}", model.label));
    t.row(vec!["skipped".into(), why.into()]);
    Outcome {
        json: json!({"command": cmd, "model": model.label, "skipped": why}),
        table: t.render(),
        check_failed: false,
    }
}

fn cmd_all(model: &Model, flags: &Flags) -> Result<Outcome, Fail> {
    let has_class = model.omega.is_some() || model.decomposition.is_some();
    let mut sections: Vec<Outcome> = Vec::new();
    let mut gate_ok = true;

    sections.push(run_sub(Command::BCohomology, model, flags)?);
    if model.omega.is_some() {
        sections.push(run_sub(Command::VerifySymplectic, model, flags)?);
    }
    if has_class {
        sections.push(run_sub(Command::Decompose, model, flags)?);
        let gate = run_sub(Command::CheckPartitionable, model, flags)?;
        gate_ok = !gate.check_failed;
        sections.push(gate);
        if gate_ok {
            sections.push(run_sub(Command::Partition, model, flags)?);
            sections.push(run_sub(Command::PoissonCohomology, model, flags)?);
        } else {
            sections.push(skipped("partition", model, "not partitionable"));
            sections.push(skipped("poisson-cohomology", model, "not partitionable"));
        }
    }
    if model.cosymplectic.is_some()
        || (model.omega.is_some() && model.stratum_query.is_some() && gate_ok)
    {
        sections.push(run_sub(Command::Cosymplectic, model, flags)?);
    }
    if model.file.oracle.is_some() {
        sections.push(run_sub(Command::Oracle, model, flags)?);
    }

    let check_failed = sections.iter().any(|s| s.check_failed);
    let table = sections
        .iter()
        .map(|s| s.table.as_str())
        .collect::<Vec<_>>()
        .join("\n");
    let reports: Vec<Value> = sections.into_iter().map(|s| s.json).collect();
    Ok(Outcome {
        json: json!({
            "command": "all",
            "model": model.label,
            "check_failed": check_failed,
            "reports": reports,
        }),
        table,
        check_failed,
    })
}

/// Run a sub-command of `all`: mathematical failures fold into the aggregate,
/// input errors abort the whole invocation.
fn run_sub(cmd: Command, model: &Model, flags: &Flags) -> Result<Outcome, Fail> {
    match dispatch(cmd, model, flags) {
        Ok(out) => Ok(out),
        Err(Fail::Math(out)) => Ok(out),
        Err(Fail::Input(e)) => Err(Fail::Input(e)),
    }
}
