use std::fmt;

/// Errors produced by the workbench.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("unknown {kind} `{name}`")]
    NotFound { kind: &'static str, name: String },

    #[error("syntax error at byte {offset}: expected one of {}, found {found}", expected.join(", "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },

    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("malformed algebra document: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("{table} entry {value} at {position} is outside a universe of size {size}")]
    OutOfRange {
        table: &'static str,
        position: String,
        value: usize,
        size: usize,
    },

    #[error("table `{table}` has the wrong shape: {detail}")]
    Shape { table: &'static str, detail: String },

    #[error("lattice axiom `{axiom}` fails at {}", Witness(witness))]
    LatticeAxiom { axiom: &'static str, witness: Vec<usize> },

    #[error("labels must be unique; `{0}` occurs twice")]
    DuplicateLabel(String),

    #[error("{what} needs {needed}, above the cap of {cap}")]
    CapExceeded { what: &'static str, needed: u128, cap: u128 },

    #[error("variable `{0}` is unbound")]
    UnboundVariable(String),

    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("partition is not a congruence of {0}")]
    NotCongruence(String),

    #[error("{algebra} is not an Almost Gautama algebra: `{sentence}` fails at {witness}")]
    NotInAg {
        algebra: String,
        sentence: String,
        witness: String,
    },

    #[error("{algebra} is not in {variety}: `{sentence}` fails at {witness}")]
    NotInVariety {
        algebra: String,
        variety: String,
        sentence: String,
        witness: String,
    },

    #[error("invalid input: {0}")]
    Invalid(String),
}

struct Witness<'a>(&'a [usize]);

impl fmt::Display for Witness<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
