//! JSON and CSV encodings.
//!
//! Matrices use `{"dim": d, "re": [[...]], "im": [[...]]}` with row-major nested arrays.
//! Every float is written with 17 significant digits so that files re-parse to the same
//! bits.

use std::io::{self, Write};
use std::path::Path;

use cohgen_core::{ComplexMatrix, DensityMatrix, HermitianMatrix};
use serde::ser::Serialize;
use serde::{Deserialize, Serialize as SerializeDerive};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::error::{CliError, Result};

/// On-disk form of a square complex matrix.
#[derive(Clone, Debug, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub dim: usize,
    pub re: Vec<Vec<f64>>,
    pub im: Vec<Vec<f64>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        MatrixJson {
            dim: m.dim(),
            re: m.real_parts(),
            im: m.imag_parts(),
        }
    }

    pub fn to_matrix(&self) -> std::result::Result<ComplexMatrix, String> {
        if self.re.len() != self.dim || self.im.len() != self.dim {
            return Err(format!(
                "\"dim\" is {} but \"re\" has {} rows and \"im\" has {}",
                self.dim,
                self.re.len(),
                self.im.len()
            ));
        }
        ComplexMatrix::from_re_im(&self.re, &self.im).map_err(|e| e.to_string())
    }
}

impl From<&HermitianMatrix> for MatrixJson {
    fn from(h: &HermitianMatrix) -> Self {
        MatrixJson::from_matrix(h.matrix())
    }
}

impl From<&DensityMatrix> for MatrixJson {
    fn from(rho: &DensityMatrix) -> Self {
        MatrixJson::from_matrix(rho.matrix())
    }
}

/// Formats a double with 17 significant digits.
pub fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty printer that writes every float with 17 significant digits.
struct Digits17<'a>(PrettyFormatter<'a>);

impl Formatter for Digits17<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_array(writer)
    }

    fn end_array<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array(writer)
    }

    fn begin_array_value<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_array_value(writer, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_array_value(writer)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object(writer)
    }

    fn end_object<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object(writer)
    }

    fn begin_object_key<W: ?Sized + Write>(
        &mut self,
        writer: &mut W,
        first: bool,
    ) -> io::Result<()> {
        self.0.begin_object_key(writer, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.begin_object_value(writer)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, writer: &mut W) -> io::Result<()> {
        self.0.end_object_value(writer)
    }
}

/// Serializes `value` as pretty JSON with 17-digit floats and a trailing newline.
pub fn to_string<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser =
        serde_json::Serializer::with_formatter(&mut buf, Digits17(PrettyFormatter::new()));
    value
        .serialize(&mut ser)
        .expect("report types serialize infallibly");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

pub fn write_file<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    write_text(path, &to_string(value))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn read_matrix(path: &Path) -> Result<ComplexMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let parsed: MatrixJson = serde_json::from_str(&text).map_err(|e| CliError::parse(path, e))?;
    parsed.to_matrix().map_err(|e| CliError::parse(path, e))
}

pub fn read_hamiltonian(path: &Path) -> Result<HermitianMatrix> {
    HermitianMatrix::new(read_matrix(path)?).map_err(|e| CliError::parse(path, e))
}

pub fn read_state(path: &Path) -> Result<DensityMatrix> {
    cohgen_core::validate_density(read_matrix(path)?).map_err(|e| CliError::parse(path, e))
}

/// Trajectory CSV with header `t,coherence_bits,entropy_bits`.
pub fn trajectory_csv(traj: &cohgen_core::Trajectory) -> String {
    let mut out = String::from("t,coherence_bits,entropy_bits\n");
    for k in 0..traj.len() {
        out.push_str(&format!(
            "{},{},{}\n",
            format_f64(traj.times[k]),
            format_f64(traj.coherence[k]),
            format_f64(traj.entropy[k])
        ));
    }
    out
}
