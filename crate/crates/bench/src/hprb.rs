//! HPRB: a dense binary layout for least-squares problems over the simplex.
//!
//! All integers and floats are little-endian.
//!
//! | offset | size | content                                   |
//! |--------|------|-------------------------------------------|
//! | 0      | 4    | magic `HPRB`                              |
//! | 4      | 4    | `m` (u32), rows of `A`                    |
//! | 8      | 4    | `n` (u32), columns of `A`                 |
//! | 12     | 4    | flags (u32): bit 0 boundary truth, bit 1 `x_true` present |
//! | 16     | 8mn  | `A`, row-major f64                        |
//! |        | 8m   | `b`                                       |
//! |        | 8n   | `x_true`, when flag bit 1 is set          |

use std::io::{Read, Write};
use std::path::Path;

use hadopt::linalg::DenseMatrix;
use hadopt::objective::LeastSquares;
use hadopt::problems::{LeastSquaresProblem, TruthKind};

pub const MAGIC: &[u8; 4] = b"HPRB";
pub const HEADER_LEN: usize = 16;
pub const FLAG_BOUNDARY: u32 = 1;
pub const FLAG_HAS_TRUTH: u32 = 1 << 1;

#[derive(Debug, thiserror::Error)]
pub enum HprbError {
    #[error("not an HPRB file (bad magic)")]
    BadMagic,
    #[error("unknown flag bits {0:#x}")]
    UnknownFlags(u32),
    #[error("empty problem ({m} x {n})")]
    Empty { m: usize, n: usize },
    #[error("payload has {found} bytes, header implies {expected}")]
    Length { expected: usize, found: usize },
    #[error("dimension {0} does not fit in u32")]
    TooLarge(usize),
    #[error("inconsistent problem: {0}")]
    Inconsistent(&'static str),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// `min |A x - b|^2` over the simplex with an optional planted solution.
#[derive(Debug, Clone, PartialEq)]
pub struct HprbProblem {
    pub a: DenseMatrix,
    pub b: Vec<f64>,
    pub x_true: Option<Vec<f64>>,
    pub boundary: bool,
}

impl HprbProblem {
    pub fn objective(&self) -> LeastSquares {
        LeastSquares::new(self.a.clone(), self.b.clone()).with_grad_inf_bound()
    }

    pub fn truth_kind(&self) -> TruthKind {
        if self.boundary {
            TruthKind::Boundary
        } else {
            TruthKind::Interior
        }
    }

    fn check(&self) -> Result<(), HprbError> {
        let (m, n) = (self.a.rows(), self.a.cols());
        if m == 0 || n == 0 {
            return Err(HprbError::Empty { m, n });
        }
        if self.b.len() != m {
            return Err(HprbError::Inconsistent("b length differs from the row count"));
        }
        if self.x_true.as_ref().is_some_and(|x| x.len() != n) {
            return Err(HprbError::Inconsistent("x_true length differs from the column count"));
        }
        Ok(())
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> Result<(), HprbError> {
        self.check()?;
        let dim = |v: usize| u32::try_from(v).map_err(|_| HprbError::TooLarge(v));
        let mut flags = 0;
        if self.boundary {
            flags |= FLAG_BOUNDARY;
        }
        if self.x_true.is_some() {
            flags |= FLAG_HAS_TRUTH;
        }
        w.write_all(MAGIC)?;
        w.write_all(&dim(self.a.rows())?.to_le_bytes())?;
        w.write_all(&dim(self.a.cols())?.to_le_bytes())?;
        w.write_all(&flags.to_le_bytes())?;
        let tail = self.x_true.as_deref().unwrap_or(&[]);
        for v in self.a.as_slice().iter().chain(&self.b).chain(tail) {
            w.write_all(&v.to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self, HprbError> {
        let mut header = [0u8; HEADER_LEN];
        r.read_exact(&mut header)?;
        if &header[..4] != MAGIC {
            return Err(HprbError::BadMagic);
        }
        let word = |i: usize| u32::from_le_bytes(header[i..i + 4].try_into().expect("4 bytes"));
        let (m, n, flags) = (word(4) as usize, word(8) as usize, word(12));
        if flags & !(FLAG_BOUNDARY | FLAG_HAS_TRUTH) != 0 {
            return Err(HprbError::UnknownFlags(flags));
        }
        if m == 0 || n == 0 {
            return Err(HprbError::Empty { m, n });
        }
        let has_truth = flags & FLAG_HAS_TRUTH != 0;
        let count = m
            .checked_mul(n)
            .and_then(|mn| mn.checked_add(m))
            .and_then(|c| c.checked_add(if has_truth { n } else { 0 }))
            .and_then(|c| c.checked_mul(8))
            .ok_or(HprbError::TooLarge(usize::MAX))?;
        let mut payload = Vec::new();
        r.read_to_end(&mut payload)?;
        if payload.len() != count {
            return Err(HprbError::Length { expected: count, found: payload.len() });
        }
        let mut values =
            payload.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect::<Vec<_>>();
        let x_true = has_truth.then(|| values.split_off(m * n + m));
        let b = values.split_off(m * n);
        let a = DenseMatrix::from_row_major(m, n, values).map_err(|_| HprbError::Inconsistent("matrix shape"))?;
        Ok(Self { a, b, x_true, boundary: flags & FLAG_BOUNDARY != 0 })
    }

    pub fn save(&self, path: &Path) -> Result<(), HprbError> {
        self.write_to(std::io::BufWriter::new(std::fs::File::create(path)?))
    }

    pub fn load(path: &Path) -> Result<Self, HprbError> {
        Self::read_from(std::io::BufReader::new(std::fs::File::open(path)?))
    }
}

impl From<&LeastSquaresProblem> for HprbProblem {
    fn from(p: &LeastSquaresProblem) -> Self {
        Self {
            a: p.a().clone(),
            b: p.b().to_vec(),
            x_true: Some(p.x_true.coords().to_vec()),
            boundary: p.truth_kind == TruthKind::Boundary,
        }
    }
}
