//! Plain CSV matrix files: one row per line, no header. A system file holds
//! the `A`, `B` and `C` blocks in that order, separated by blank lines.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::mor::LtiSystem;

struct Block {
    first_line: usize,
    rows: Vec<Vec<f64>>,
}

fn parse_blocks(text: &str) -> Result<Vec<Block>> {
    let mut blocks = Vec::new();
    let mut current: Option<Block> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            if let Some(b) = current.take() {
                blocks.push(b);
            }
            continue;
        }
        let row = line
            .split(',')
            .map(|field| {
                let field = field.trim();
                let v: f64 = field.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("not a number: {field:?}"),
                })?;
                if v.is_finite() {
                    Ok(v)
                } else {
                    Err(Error::Parse { line: line_no, message: format!("non-finite entry {field:?}") })
                }
            })
            .collect::<Result<Vec<f64>>>()?;
        current.get_or_insert(Block { first_line: line_no, rows: Vec::new() }).rows.push(row);
    }
    blocks.extend(current);
    Ok(blocks)
}

fn block_matrix(block: &Block) -> Result<DenseMatrix> {
    let cols = block.rows[0].len();
    for (i, row) in block.rows.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::Shape(format!(
                "line {}: {} entries, expected {cols}",
                block.first_line + i,
                row.len()
            )));
        }
    }
    let flat: Vec<f64> = block.rows.iter().flatten().copied().collect();
    DenseMatrix::new(block.rows.len(), cols, flat)
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix> {
    let blocks = parse_blocks(text)?;
    match blocks.as_slice() {
        [] => Err(Error::Parse { line: 1, message: "empty matrix file".into() }),
        [b] => block_matrix(b),
        [_, extra, ..] => Err(Error::Parse {
            line: extra.first_line,
            message: "unexpected second block in a matrix file".into(),
        }),
    }
}

pub fn parse_system(text: &str) -> Result<LtiSystem> {
    let blocks = parse_blocks(text)?;
    if blocks.len() != 3 {
        let line = blocks.get(3).map_or(text.lines().count().max(1), |b| b.first_line);
        return Err(Error::Parse {
            line,
            message: format!("expected 3 blocks (A, B, C), found {}", blocks.len()),
        });
    }
    let a = block_matrix(&blocks[0])?;
    let b = block_matrix(&blocks[1])?;
    let c = block_matrix(&blocks[2])?;
    LtiSystem::new(a, b, c)
}

pub fn load_matrix(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    parse_matrix(&read(path.as_ref())?)
}

pub fn load_system(path: impl AsRef<Path>) -> Result<LtiSystem> {
    parse_system(&read(path.as_ref())?)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Shortest round-tripping decimal, switching to exponent form for
/// magnitudes outside `[1e-4, 1e15)`.
pub fn format_real(v: f64) -> String {
    let mag = v.abs();
    if mag != 0.0 && mag.is_finite() && !(1e-4..1e15).contains(&mag) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn format_matrix(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&format_real(m.get(i, j)));
        }
        out.push('\n');
    }
    out
}

pub fn format_system(sys: &LtiSystem) -> String {
    [sys.a(), sys.b(), sys.c()].map(format_matrix).join("\n")
}
