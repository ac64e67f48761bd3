use rayon::prelude::*;
use serde_json::{json, Value};

use fuzzy_osf::formats::{parse_interpretation, write_ontology};
use fuzzy_osf::graphs::graph_to_dot;
use fuzzy_osf::lattice::{enrich_from_similarity, lattice_to_dot, validate_lattice, DropReason};
use fuzzy_osf::normalize::{normalize_with, NormalizeOptions, RuleApplication, RuleOrder};
use fuzzy_osf::semantics::{check_theorems, denotation_at, validate_interpretation, HarnessConfig};
use fuzzy_osf::subsumption::{fuzzy_subsumption, Image};
use fuzzy_osf::terms::{print_clause, print_term, term_to_clause, TermStyle};
use fuzzy_osf::unify::unify_with;
use fuzzy_osf::{parse_clause, NormalForm, Signature, SortId, Unifier};

use crate::session::{argument_text, load_ontology, read_file, CliError, CliResult, Options, Session};

/// What a command prints: plain lines or one JSON value.
pub enum Output {
    Text(String),
    Json(Value),
}

impl Output {
    fn new(options: &Options, text: String, value: impl FnOnce() -> Value) -> Output {
        if options.json {
            Output::Json(value())
        } else {
            Output::Text(text)
        }
    }
}

fn normalize_options(options: &Options, trace: bool) -> NormalizeOptions {
    NormalizeOptions {
        order: match options.seed {
            0 => RuleOrder::Deterministic,
            s => RuleOrder::Randomized(s),
        },
        trace,
    }
}

fn describe_step(step: &RuleApplication, sig: &Signature) -> String {
    let s = |id: SortId| sig.sort_name(id).to_string();
    match step {
        RuleApplication::SortIntersection { tag, left, right, result } => {
            format!("sort intersection: {tag} : {} & {} => {}", s(*left), s(*right), s(*result))
        }
        RuleApplication::FeatureFunctionality { tag, feature, first, second } => format!(
            "feature functionality: {tag}.{} = {first} and {second}",
            sig.feature_name(*feature)
        ),
        RuleApplication::InconsistentSort { tag } => format!("inconsistent sort: {tag} : bot"),
        RuleApplication::TagElimination { kept, eliminated } => {
            format!("tag elimination: {eliminated} := {kept}")
        }
    }
}

pub fn check(path: &str, options: &Options) -> CliResult<Output> {
    let ontology = load_ontology(path)?;
    let lattice =
        validate_lattice(ontology.graph).map_err(|e| CliError::input(format!("{path}: {e}")))?;
    let sorts = lattice.sort_count();
    let edges = lattice.graph().edges().len();
    let features = lattice.signature().feature_count();
    Ok(Output::new(
        options,
        format!("ok: {sorts} sorts, {edges} edges, {features} features\n"),
        || json!({"ok": true, "sorts": sorts, "edges": edges, "features": features}),
    ))
}

pub fn closure(session: &Session) -> Output {
    let sig = session.lattice.signature();
    let mut rows = Vec::new();
    for s in sig.sorts() {
        for t in sig.sorts() {
            let d = session.degree(s, t);
            let trivial = s == t || s == SortId::BOT || t == SortId::TOP;
            if d > 0.0 && !trivial {
                rows.push((sig.sort_name(s), sig.sort_name(t), d));
            }
        }
    }
    let text = rows.iter().map(|(s, t, d)| format!("{s} {t} {d}\n")).collect();
    Output::new(&session.options, text, || {
        Value::Array(rows.iter().map(|(s, t, d)| json!({"sub": s, "sup": t, "degree": d})).collect())
    })
}

pub fn degree(session: &Session, s: &str, t: &str) -> CliResult<Output> {
    let d = session.degree(session.sort(s)?, session.sort(t)?);
    Ok(Output::new(&session.options, format!("{d}\n"), || json!({"sub": s, "sup": t, "degree": d})))
}

pub fn glb(session: &Session, s: &str, t: &str) -> CliResult<Output> {
    let g = session.lattice.glb(session.sort(s)?, session.sort(t)?);
    let name = session.lattice.signature().sort_name(g);
    Ok(Output::new(&session.options, format!("{name}\n"), || json!({"glb": name})))
}

pub fn normalize(session: &Session, input: &str, as_term: bool) -> CliResult<Output> {
    let sig = session.lattice.signature();
    let text = argument_text(input)?;
    let clause = if as_term {
        term_to_clause(&fuzzy_osf::parse_term(&text, sig).map_err(CliError::input)?)
    } else {
        parse_clause(&text, sig).map_err(CliError::input)?
    };
    let run = normalize_with(&clause, &session.lattice, normalize_options(&session.options, session.options.trace));
    let steps: Vec<String> = run.trace.iter().map(|s| describe_step(s, sig)).collect();
    let mut out: String = steps.iter().map(|s| format!("# {s}\n")).collect();
    let value = match &run.result {
        NormalForm::Inconsistent { tag } => {
            out.push_str(&format!("INCONSISTENT at {tag}\n"));
            json!({"inconsistent": true, "tag": tag.as_str(), "steps": run.steps, "trace": steps})
        }
        NormalForm::Normalized { solved, equalities } => {
            let printed = print_clause(solved, sig);
            out.push_str(&format!("{printed}\n"));
            for (rep, member) in equalities {
                out.push_str(&format!("{member} = {rep}\n"));
            }
            let eqs: Vec<Value> = equalities
                .iter()
                .map(|(r, m)| json!({"tag": m.as_str(), "representative": r.as_str()}))
                .collect();
            json!({
                "inconsistent": false,
                "solved": printed,
                "equalities": eqs,
                "steps": run.steps,
                "trace": steps,
            })
        }
    };
    Ok(Output::new(&session.options, out, || value))
}

struct UnifyLine {
    text: String,
    value: Value,
}

fn unify_pair(session: &Session, a: &str, b: &str) -> CliResult<UnifyLine> {
    let sig = session.lattice.signature();
    let (Some(t1), Some(t2)) = (session.term(a)?, session.term(b)?) else {
        return Ok(bottom_line(Vec::new()));
    };
    let r = unify_with(&t1, &t2, &session.lattice, normalize_options(&session.options, session.options.trace))
        .map_err(CliError::input)?;
    let steps: Vec<String> = r.trace.iter().map(|s| describe_step(s, sig)).collect();
    let Unifier::Term(u) = &r.unifier else {
        return Ok(bottom_line(steps));
    };
    let compact = print_term(u.term(), sig, TermStyle::Compact);
    let explicit = print_term(u.term(), sig, TermStyle::Explicit);
    let classes: serde_json::Map<String, Value> = r
        .classes
        .iter()
        .map(|(z, members)| {
            (z.to_string(), Value::Array(members.iter().map(|m| json!(m.as_str())).collect()))
        })
        .collect();
    let mut text: String = steps.iter().map(|s| format!("# {s}\n")).collect();
    text.push_str(&format!(
        "{compact}\nbeta1={} beta2={} beta={}\n",
        r.beta1, r.beta2, r.beta
    ));
    Ok(UnifyLine {
        text,
        value: json!({
            "unifier": explicit,
            "beta1": r.beta1,
            "beta2": r.beta2,
            "beta": r.beta,
            "classes": classes,
            "trace": steps,
        }),
    })
}

fn bottom_line(steps: Vec<String>) -> UnifyLine {
    let mut text: String = steps.iter().map(|s| format!("# {s}\n")).collect();
    text.push_str("BOTTOM beta=1\n");
    UnifyLine {
        text,
        value: json!({"unifier": null, "beta1": 1.0, "beta2": 1.0, "beta": 1.0, "classes": {}, "trace": steps}),
    }
}

pub fn unify(session: &Session, a: &str, b: &str) -> CliResult<Output> {
    let line = unify_pair(session, a, b)?;
    Ok(Output::new(&session.options, line.text, || line.value))
}

/// One pair per line, `first ; second`. Blank lines and `#` comments are
/// skipped. Pairs run in parallel; output keeps input order. A failing line
/// is reported in place and makes the whole run fail.
pub fn unify_batch(session: &Session, path: &str) -> CliResult<(Output, bool)> {
    let text = read_file(path)?;
    let jobs: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    let results: Vec<(usize, CliResult<UnifyLine>)> = jobs
        .par_iter()
        .map(|&(n, line)| {
            let r = match line.split_once(';') {
                Some((a, b)) => unify_pair(session, a.trim(), b.trim()),
                None => Err(CliError::input("expected `first ; second`")),
            };
            (n, r)
        })
        .collect();
    let ok = results.iter().all(|(_, r)| r.is_ok());
    let mut out = String::new();
    let mut values = Vec::new();
    for (n, r) in results {
        match r {
            Ok(line) => {
                for l in line.text.lines() {
                    out.push_str(&format!("{n}: {l}\n"));
                }
                values.push(json!({"line": n, "result": line.value}));
            }
            Err(e) => {
                out.push_str(&format!("{n}: error: {}\n", e.message));
                values.push(json!({"line": n, "error": e.message}));
            }
        }
    }
    Ok((Output::new(&session.options, out, || Value::Array(values)), ok))
}

pub fn subsumes(session: &Session, specific: &str, general: &str) -> CliResult<Output> {
    let sig = session.lattice.signature();
    let (Some(t0), Some(t1)) = (session.term(specific)?, session.term(general)?) else {
        return Err(CliError::semantic("term is inconsistent"));
    };
    let witness = fuzzy_subsumption(&t0, &t1, &session.lattice).filter(|w| w.degree > 0.0);
    let Some(w) = witness else {
        return Ok(Output::new(&session.options, "degree=0\nnone\n".into(), || {
            json!({"degree": 0.0, "mapping": null})
        }));
    };
    let mut text = format!("degree={}\n", w.degree);
    let mut mapping = serde_json::Map::new();
    for (tag, image) in &w.h {
        let target = image.describe(sig);
        let d = &w.per_tag[tag];
        text.push_str(&format!(
            "{target} <- {tag}  {} <= {} : {}\n",
            sig.sort_name(d.image_sort),
            sig.sort_name(d.sort),
            d.degree
        ));
        let completed = matches!(image, Image::Completed { .. });
        mapping.insert(
            tag.to_string(),
            json!({"image": target, "completed": completed, "degree": d.degree}),
        );
    }
    Ok(Output::new(&session.options, text, || json!({"degree": w.degree, "mapping": mapping})))
}

pub fn enrich(session: &Session) -> CliResult<Output> {
    let sig = session.lattice.signature();
    let result = enrich_from_similarity(&session.ontology.graph, &session.ontology.similarity)
        .map_err(CliError::input)?;
    validate_lattice(result.graph.clone())
        .map_err(|e| CliError::semantic(format!("enriched ontology: {e}")))?;
    let mut text = write_ontology(&result.graph, None);
    let mut dropped = Vec::new();
    for d in &result.dropped {
        let reason = match d.reason {
            DropReason::SelfEdge => "self edge",
            DropReason::Cycle => "cycle",
        };
        let (a, b) = (sig.sort_name(d.edge.sub), sig.sort_name(d.edge.sup));
        text.push_str(&format!("# dropped {a} {b} {} ({reason})\n", d.edge.degree));
        dropped.push(json!({"sub": a, "sup": b, "degree": d.edge.degree, "reason": reason}));
    }
    let added: Vec<Value> = result
        .added
        .iter()
        .map(|e| json!({"sub": sig.sort_name(e.sub), "sup": sig.sort_name(e.sup), "degree": e.degree}))
        .collect();
    Ok(Output::new(&session.options, text, || {
        json!({"added": added, "dropped": dropped})
    }))
}

pub fn dot(session: &Session, term: Option<&str>) -> CliResult<Output> {
    let text = match term {
        None => lattice_to_dot(session.lattice.graph()),
        Some(t) => {
            let t = session.term(t)?.ok_or_else(|| CliError::semantic("term is inconsistent"))?;
            graph_to_dot(t.graph(), session.lattice.signature())
        }
    };
    Ok(Output::new(&session.options, text.clone(), || json!({"dot": text})))
}

pub fn eval(session: &Session, interp_path: &str, term: &str, elem: Option<&str>) -> CliResult<Output> {
    let sig = session.lattice.signature();
    let interp = parse_interpretation::<f64>(&read_file(interp_path)?, sig)
        .map_err(|e| CliError::input(format!("{interp_path}: {e}")))?;
    let violations = validate_interpretation(&interp, &session.lattice);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(|v| format!("{v:?}")).collect();
        return Err(CliError::semantic(format!("invalid interpretation: {}", list.join("; "))));
    }
    let text = argument_text(term)?;
    let t = fuzzy_osf::parse_term(&text, sig).map_err(CliError::input)?;
    let elements: Vec<usize> = match elem {
        Some(name) => vec![interp
            .element(name)
            .ok_or_else(|| CliError::input(format!("unknown element {name}")))?],
        None => (0..interp.domain_size()).collect(),
    };
    let rows: Vec<(&str, f64)> = elements
        .iter()
        .map(|&e| (interp.name(e), denotation_at(&t, &interp, &e)))
        .collect();
    let text = if elem.is_some() {
        format!("{}\n", rows[0].1)
    } else {
        rows.iter().map(|(n, d)| format!("{n} {d}\n")).collect()
    };
    Ok(Output::new(&session.options, text, || {
        Value::Array(rows.iter().map(|(n, d)| json!({"element": n, "degree": d})).collect())
    }))
}

pub fn theorems(options: &Options, config: HarnessConfig) -> (Output, bool) {
    let report = check_theorems(config);
    let passed = report.passed();
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "cases": c.cases, "passed": c.passed(), "failures": c.failures}))
        .collect();
    (Output::new(options, report.to_string(), || json!({"passed": passed, "checks": checks})), passed)
}
