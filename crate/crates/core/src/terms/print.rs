use std::collections::HashMap;

use crate::signature::{Signature, SortId};

use super::{Clause, Constraint, Tag, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TermStyle {
    /// Hide tags that occur only once.
    #[default]
    Compact,
    /// Show every tag; the output parses back to an identical term.
    Explicit,
}

enum Piece<'a> {
    Node(usize),
    Text(&'a str),
    Feature(usize, usize),
}

/// Render a term, e.g. `X: movie(directed_by -> Y: person, written_by -> Y)`.
pub fn print_term(term: &Term, sig: &Signature, style: TermStyle) -> String {
    let mut count: HashMap<&Tag, usize> = HashMap::new();
    for n in term.nodes() {
        *count.entry(&n.tag).or_default() += 1;
    }
    let mut out = String::new();
    let mut work = vec![Piece::Node(0)];
    while let Some(piece) = work.pop() {
        match piece {
            Piece::Text(s) => out.push_str(s),
            Piece::Feature(parent, k) => {
                let (f, _) = term.node_at(parent).args[k];
                out.push_str(sig.feature_name(f));
                out.push_str(" -> ");
            }
            Piece::Node(i) => {
                let n = term.node_at(i);
                let hide_tag = style == TermStyle::Compact && count[&n.tag] == 1;
                if hide_tag {
                    out.push_str(sig.sort_name(n.sort));
                } else if n.sort == SortId::TOP && n.args.is_empty() {
                    out.push_str(n.tag.as_str());
                } else {
                    out.push_str(n.tag.as_str());
                    out.push_str(": ");
                    out.push_str(sig.sort_name(n.sort));
                }
                if n.args.is_empty() {
                    continue;
                }
                out.push('(');
                work.push(Piece::Text(")"));
                for (k, &(_, c)) in n.args.iter().enumerate().rev() {
                    work.push(Piece::Node(c));
                    work.push(Piece::Feature(i, k));
                    if k > 0 {
                        work.push(Piece::Text(", "));
                    }
                }
            }
        }
    }
    out
}

/// Render a clause as `X: s & X.f = Y & X = Z`.
pub fn print_clause(clause: &Clause, sig: &Signature) -> String {
    clause
        .constraints
        .iter()
        .map(|c| match c {
            Constraint::Sort(x, s) => format!("{x}: {}", sig.sort_name(*s)),
            Constraint::Feature(x, f, y) => format!("{x}.{} = {y}", sig.feature_name(*f)),
            Constraint::Eq(x, y) => format!("{x} = {y}"),
        })
        .collect::<Vec<_>>()
        .join(" & ")
}
