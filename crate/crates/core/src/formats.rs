//! Line-oriented text formats.
//!
//! Ontology:
//! ```text
//! # comment
//! sort director person movie
//! feature directed_by title
//! edge director person 1
//! sim horror thriller 0.6
//! ```
//!
//! Interpretation (names may be double-quoted):
//! ```text
//! elem psycho hitchcock "Psycho" null
//! deg thriller psycho 1
//! fun directed_by psycho hitchcock
//! fun directed_by * null
//! ```
//! `fun f * e` sends every element without an explicit `fun f` line to `e`.
//! `top` is 1 everywhere unless stated; other unstated degrees are 0.

use std::collections::HashMap;

use crate::degree::Degree;
use crate::error::FormatError;
use crate::lattice::{Edge, SimilarityRelation, SubsumptionGraph};
use crate::semantics::Interpretation;
use crate::signature::{Signature, SortId};

fn line_error(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Line {
        line,
        message: message.into(),
    }
}

/// Split on whitespace, keeping `"quoted words"` together and dropping
/// `#` comments outside quotes.
fn tokens(line: &str, number: usize) -> Result<Vec<String>, FormatError> {
    let mut out = Vec::new();
    let mut chars = line.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c == '#' {
            break;
        } else if c == '"' {
            chars.next();
            let mut word = String::from('"');
            loop {
                match chars.next() {
                    Some('"') => break,
                    Some(c) => word.push(c),
                    None => return Err(line_error(number, "unterminated quote")),
                }
            }
            word.push('"');
            out.push(word);
        } else {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_whitespace() || c == '#' {
                    break;
                }
                word.push(c);
                chars.next();
            }
            out.push(word);
        }
    }
    Ok(out)
}

fn parse_degree<D: Degree>(text: &str, line: usize) -> Result<D, FormatError> {
    D::parse_degree(text).ok_or_else(|| line_error(line, format!("bad degree `{text}`")))
}

#[derive(Clone, Debug)]
pub struct Ontology<D> {
    pub graph: SubsumptionGraph<D>,
    pub similarity: SimilarityRelation<D>,
}

pub fn parse_ontology<D: Degree>(text: &str) -> Result<Ontology<D>, FormatError> {
    let mut sorts: Vec<String> = Vec::new();
    let mut features: Vec<String> = Vec::new();
    let mut edges: Vec<(usize, String, String, D)> = Vec::new();
    let mut sims: Vec<(usize, String, String, D)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let toks = tokens(raw, n)?;
        let Some((kw, rest)) = toks.split_first() else { continue };
        match kw.as_str() {
            "sort" => sorts.extend(rest.iter().cloned()),
            "feature" => features.extend(rest.iter().cloned()),
            "edge" | "sim" => {
                let [a, b, d] = rest else {
                    return Err(line_error(n, format!("`{kw}` takes two sorts and a degree")));
                };
                let entry = (n, a.clone(), b.clone(), parse_degree(d, n)?);
                if kw == "edge" {
                    edges.push(entry)
                } else {
                    sims.push(entry)
                }
            }
            other => return Err(line_error(n, format!("unknown keyword `{other}`"))),
        }
    }
    let signature = Signature::new(&sorts, &features)?;
    let lookup = |name: &str, n: usize| {
        signature
            .sort(name)
            .ok_or_else(|| line_error(n, format!("undeclared sort `{name}`")))
    };
    let mut resolved = Vec::new();
    for (n, a, b, d) in &edges {
        resolved.push(Edge {
            sub: lookup(a, *n)?,
            sup: lookup(b, *n)?,
            degree: *d,
        });
    }
    let mut similarity = SimilarityRelation::new();
    for (n, a, b, d) in &sims {
        similarity.insert(lookup(a, *n)?, lookup(b, *n)?, *d)?;
    }
    let graph = SubsumptionGraph::new(signature, resolved)?;
    Ok(Ontology { graph, similarity })
}

pub fn write_ontology<D: Degree>(
    graph: &SubsumptionGraph<D>,
    similarity: Option<&SimilarityRelation<D>>,
) -> String {
    let sig = graph.signature();
    let mut out = String::new();
    let sorts: Vec<&str> = sig
        .sorts()
        .filter(|&s| s != SortId::BOT && s != SortId::TOP)
        .map(|s| sig.sort_name(s))
        .collect();
    if !sorts.is_empty() {
        out.push_str(&format!("sort {}\n", sorts.join(" ")));
    }
    let features: Vec<&str> = sig.features().map(|f| sig.feature_name(f)).collect();
    if !features.is_empty() {
        out.push_str(&format!("feature {}\n", features.join(" ")));
    }
    for e in graph.edges() {
        out.push_str(&format!(
            "edge {} {} {}\n",
            sig.sort_name(e.sub),
            sig.sort_name(e.sup),
            e.degree
        ));
    }
    if let Some(sim) = similarity {
        for a in sig.sorts() {
            for (b, d) in sim.neighbours(a) {
                if a < b {
                    out.push_str(&format!(
                        "sim {} {} {}\n",
                        sig.sort_name(a),
                        sig.sort_name(b),
                        d
                    ));
                }
            }
        }
    }
    out
}

pub fn parse_interpretation<D: Degree>(
    text: &str,
    sig: &Signature,
) -> Result<Interpretation<D>, FormatError> {
    let mut names: Vec<String> = Vec::new();
    let mut degs = Vec::new();
    let mut funs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let toks = tokens(raw, n)?;
        let Some((kw, rest)) = toks.split_first() else { continue };
        match kw.as_str() {
            "elem" => names.extend(rest.iter().cloned()),
            "deg" => {
                let [s, e, d] = rest else {
                    return Err(line_error(n, "`deg` takes a sort, an element and a degree"));
                };
                degs.push((n, s.clone(), e.clone(), parse_degree::<D>(d, n)?));
            }
            "fun" => {
                let [f, a, b] = rest else {
                    return Err(line_error(n, "`fun` takes a feature and two elements"));
                };
                funs.push((n, f.clone(), a.clone(), b.clone()));
            }
            other => return Err(line_error(n, format!("unknown keyword `{other}`"))),
        }
    }
    let mut index = HashMap::new();
    for (i, name) in names.iter().enumerate() {
        if index.insert(name.clone(), i).is_some() {
            return Err(line_error(0, format!("duplicate element {name}")));
        }
    }
    if names.is_empty() {
        return Err(line_error(0, "empty domain"));
    }
    let elem = |name: &str, n: usize| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| line_error(n, format!("unknown element {name}")))
    };
    let mut interp = Interpretation::new(sig.clone(), names.clone());
    for (n, s, e, d) in degs {
        let sort = sig
            .sort(&s)
            .ok_or_else(|| line_error(n, format!("unknown sort `{s}`")))?;
        interp.set_degree(sort, elem(&e, n)?, d);
    }
    let mut defined = vec![vec![false; names.len()]; sig.feature_count()];
    let mut defaults: Vec<Option<usize>> = vec![None; sig.feature_count()];
    for (n, f, a, b) in funs {
        let feature = sig
            .feature(&f)
            .ok_or_else(|| line_error(n, format!("unknown feature `{f}`")))?;
        let target = elem(&b, n)?;
        if a == "*" {
            defaults[feature.index()] = Some(target);
        } else {
            let source = elem(&a, n)?;
            interp.set_feature(feature, source, target);
            defined[feature.index()][source] = true;
        }
    }
    for f in sig.features() {
        for e in 0..names.len() {
            if defined[f.index()][e] {
                continue;
            }
            match defaults[f.index()] {
                Some(t) => interp.set_feature(f, e, t),
                None => {
                    return Err(line_error(
                        0,
                        format!(
                            "feature `{}` is undefined on {}",
                            sig.feature_name(f),
                            names[e]
                        ),
                    ))
                }
            }
        }
    }
    Ok(interp)
}
