//! Paired stimulus/response samples.

use crate::context::{Alphabet, Symbol};
use crate::error::{Error, Result};

/// A real matrix with `dim` rows and one column per step, stored column-major
/// so that each response chunk is a contiguous slice.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalResponses {
    dim: usize,
    data: Vec<f64>,
}

impl FunctionalResponses {
    pub fn from_columns(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("functional chunks need at least one point".into()));
        }
        if data.len() % dim != 0 {
            return Err(Error::ChunkLength {
                expected: dim,
                found: data.len() % dim,
            });
        }
        Ok(Self { dim, data })
    }

    /// Builds from a `dim × n` row-major matrix (one row per grid point).
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::ChunkLength {
                expected: n,
                found: bad.len(),
            });
        }
        let mut data = Vec::with_capacity(dim * n);
        for t in 0..n {
            data.extend(rows.iter().map(|r| r[t]));
        }
        Self::from_columns(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Chunk at 0-based step `t`.
    pub fn column(&self, t: usize) -> &[f64] {
        &self.data[t * self.dim..(t + 1) * self.dim]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_columns(&self) -> &[f64] {
        &self.data
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Responses {
    Categorical {
        symbols: Vec<Symbol>,
        alphabet: Alphabet,
    },
    Functional(FunctionalResponses),
}

impl Responses {
    pub fn len(&self) -> usize {
        match self {
            Responses::Categorical { symbols, .. } => symbols.len(),
            Responses::Functional(f) => f.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Responses::Categorical { .. } => "categorical",
            Responses::Functional(_) => "functional",
        }
    }
}

/// A stimulus chain `x` with its aligned responses `y` (`y[t]` answers `x[t]`).
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSample {
    alphabet: Alphabet,
    x: Vec<Symbol>,
    y: Responses,
}

impl PairedSample {
    pub fn new(alphabet: Alphabet, x: Vec<Symbol>, y: Responses) -> Result<Self> {
        alphabet.check_all(&x)?;
        if y.len() != x.len() {
            return Err(Error::LengthMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        if let Responses::Categorical { symbols, alphabet } = &y {
            alphabet.check_all(symbols)?;
        }
        Ok(Self { alphabet, x, y })
    }

    pub fn categorical(
        alphabet: Alphabet,
        x: Vec<Symbol>,
        y: Vec<Symbol>,
        response_alphabet: Alphabet,
    ) -> Result<Self> {
        Self::new(
            alphabet,
            x,
            Responses::Categorical {
                symbols: y,
                alphabet: response_alphabet,
            },
        )
    }

    pub fn functional(alphabet: Alphabet, x: Vec<Symbol>, y: FunctionalResponses) -> Result<Self> {
        Self::new(alphabet, x, Responses::Functional(y))
    }

    /// A plain chain viewed as its own response: `y_{t+1} = x_{t+1}`.
    pub fn chain(alphabet: Alphabet, x: Vec<Symbol>) -> Result<Self> {
        let y = x.clone();
        Self::categorical(alphabet, x, y, alphabet)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn x(&self) -> &[Symbol] {
        &self.x
    }

    pub fn y(&self) -> &Responses {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Categorical responses and their alphabet, or a kind error.
    pub fn categorical_y(&self, criterion: &'static str) -> Result<(&[Symbol], Alphabet)> {
        match &self.y {
            Responses::Categorical { symbols, alphabet } => Ok((symbols, *alphabet)),
            Responses::Functional(_) => Err(Error::ResponseKind {
                criterion,
                expected: "categorical",
            }),
        }
    }

    pub fn functional_y(&self, criterion: &'static str) -> Result<&FunctionalResponses> {
        match &self.y {
            Responses::Functional(f) => Ok(f),
            Responses::Categorical { .. } => Err(Error::ResponseKind {
                criterion,
                expected: "functional",
            }),
        }
    }
}
