use std::fmt;
use std::fs;

use fuzzy_osf::formats::{parse_ontology, Ontology};
use fuzzy_osf::lattice::{maxmin_closure, validate_lattice, SortLattice};
use fuzzy_osf::normalize::normalize_term;
use fuzzy_osf::{parse_term, NormalTerm, SortId};

/// A failed command. `code` is the process exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    /// Bad input: unreadable files, parse errors, invalid ontologies.
    pub fn input(message: impl fmt::Display) -> Self {
        CliError { code: 1, message: message.to_string() }
    }

    /// Well-formed input that fails a semantic check.
    pub fn semantic(message: impl fmt::Display) -> Self {
        CliError { code: 2, message: message.to_string() }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// `@path` reads the file, anything else is taken literally.
pub fn argument_text(arg: &str) -> CliResult<String> {
    match arg.strip_prefix('@') {
        Some(path) => fs::read_to_string(path)
            .map(|s| s.trim().to_string())
            .map_err(|e| CliError::input(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

pub fn read_file(path: &str) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{path}: {e}")))
}

pub fn load_ontology(path: &str) -> CliResult<Ontology<f64>> {
    parse_ontology(&read_file(path)?).map_err(|e| CliError::input(format!("{path}: {e}")))
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub json: bool,
    pub trace: bool,
    pub dense: bool,
    pub seed: u64,
}

pub struct Session {
    pub lattice: SortLattice<f64>,
    pub ontology: Ontology<f64>,
    pub options: Options,
    dense: Option<Vec<Vec<f64>>>,
}

impl Session {
    pub fn open(path: &str, options: Options) -> CliResult<Self> {
        let ontology = load_ontology(path)?;
        let lattice = validate_lattice(ontology.graph.clone())
            .map_err(|e| CliError::input(format!("{path}: {e}")))?;
        let dense = options.dense.then(|| {
            // Closure of the raw edge matrix by the dense route.
            let n = lattice.sort_count();
            let mut m = vec![vec![0.0f64; n]; n];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = 1.0;
                row[SortId::TOP.index()] = 1.0;
            }
            m[SortId::BOT.index()] = vec![1.0; n];
            for e in lattice.graph().edges() {
                let slot = &mut m[e.sub.index()][e.sup.index()];
                *slot = slot.max(e.degree);
            }
            maxmin_closure(&mut m);
            m
        });
        Ok(Session { lattice, ontology, options, dense })
    }

    pub fn sort(&self, name: &str) -> CliResult<SortId> {
        self.lattice
            .signature()
            .sort(name)
            .ok_or_else(|| CliError::input(format!("unknown sort `{name}`")))
    }

    pub fn degree(&self, s: SortId, t: SortId) -> f64 {
        match &self.dense {
            Some(m) => m[s.index()][t.index()],
            None => self.lattice.degree(s, t),
        }
    }

    /// Parse a term argument. Terms that are not in normal form are
    /// normalized first; `None` means the term is inconsistent.
    pub fn term(&self, arg: &str) -> CliResult<Option<NormalTerm>> {
        let text = argument_text(arg)?;
        let term = parse_term(&text, self.lattice.signature()).map_err(CliError::input)?;
        match NormalTerm::new(term.clone()) {
            Ok(t) => Ok(Some(t)),
            Err(_) => Ok(normalize_term(&term, &self.lattice)),
        }
    }
}
