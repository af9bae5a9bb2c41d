//! File formats: group-algebra elements (JSON and CSV), operator matrix
//! dumps, coefficient matrices, and the deterministic JSON writer used for
//! every report.
//!
//! JSON output has sorted keys and writes every float in scientific
//! notation with 17 significant digits, so equal inputs give byte-identical
//! files. CSV output uses the shortest round-trip float representation.

use std::io::{Read, Write};
use std::sync::Arc;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::algebra::GroupAlgebraElement;
use crate::error::{LabError, Result};
use crate::group::{parse_group_spec, FiniteGroup};
use crate::operators::OperatorMatrix;
use crate::{CMatrix, C64};

pub fn serialize_complex_vec<S: Serializer>(v: &[C64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}

/// Row-major list of `[re, im]` pairs.
pub fn serialize_complex_matrix<S: Serializer>(m: &CMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(m.len()))?;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let z = m[(r, c)];
            seq.serialize_element(&[z.re, z.im])?;
        }
    }
    seq.end()
}

struct ScientificFormatter;

impl serde_json::ser::Formatter for ScientificFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> std::io::Result<()> {
        self.write_f64(writer, value as f64)
    }
}

/// Deterministic JSON: keys sorted, floats as `{:.16e}`, trailing newline.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    // going through Value sorts the object keys
    let value = serde_json::to_value(value).map_err(|e| LabError::Parse(e.to_string()))?;
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, ScientificFormatter);
    value.serialize(&mut ser).map_err(|e| LabError::Parse(e.to_string()))?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes utf-8"))
}

/// Shortest round-trip float text.
pub fn csv_float(x: f64) -> String {
    format!("{x}")
}

fn parse_complex(v: &Value) -> Result<C64> {
    match v {
        Value::Number(n) => Ok(C64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64();
            let im = pair[1].as_f64();
            match (re, im) {
                (Some(re), Some(im)) => Ok(C64::new(re, im)),
                _ => Err(LabError::Parse(format!("bad complex entry {v}"))),
            }
        }
        _ => Err(LabError::Parse(format!("bad complex entry {v}"))),
    }
}

#[derive(Serialize, Deserialize)]
struct ElementFile {
    group: String,
    coeffs: Vec<Value>,
}

/// `{"group": "<spec>", "coeffs": [[re, im], ...]}`; bare reals are
/// promoted to complex.
pub fn element_from_json(text: &str) -> Result<GroupAlgebraElement> {
    let file: ElementFile = serde_json::from_str(text).map_err(|e| LabError::Parse(e.to_string()))?;
    let group = Arc::new(parse_group_spec(&file.group)?);
    let coeffs = file.coeffs.iter().map(parse_complex).collect::<Result<Vec<_>>>()?;
    GroupAlgebraElement::new(group, coeffs)
}

pub fn element_to_json(f: &GroupAlgebraElement) -> Result<String> {
    #[derive(Serialize)]
    struct Out<'a> {
        group: &'a str,
        #[serde(serialize_with = "serialize_complex_vec")]
        coeffs: &'a [C64],
    }
    to_json_string(&Out {
        group: f.group().name(),
        coeffs: f.coeffs(),
    })
}

/// CSV with header `label,re,im`; rows are matched to elements by label,
/// missing labels are zero.
pub fn element_from_csv<R: Read>(group: Arc<FiniteGroup>, reader: R) -> Result<GroupAlgebraElement> {
    let mut coeffs = vec![C64::new(0.0, 0.0); group.order()];
    let mut rdr = csv::Reader::from_reader(reader);
    for record in rdr.records() {
        let record = record.map_err(|e| LabError::Parse(e.to_string()))?;
        if record.len() != 3 {
            return Err(LabError::Parse("expected columns label,re,im".into()));
        }
        let label = record[0].trim();
        let s = group
            .labels()
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| LabError::Parse(format!("unknown element label {label:?}")))?;
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| LabError::Parse(format!("{x:?}: {e}")))
        };
        coeffs[s] = C64::new(num(&record[1])?, num(&record[2])?);
    }
    GroupAlgebraElement::new(group, coeffs)
}

pub fn element_to_csv(f: &GroupAlgebraElement) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut row = |cells: [&str; 3]| w.write_record(cells).expect("writing to memory");
    row(["label", "re", "im"]);
    for s in f.group().elements() {
        let z = f.coeff(s);
        row([f.group().label(s), &csv_float(z.re), &csv_float(z.im)]);
    }
    let bytes = w.into_inner().expect("writing to memory");
    String::from_utf8(bytes).expect("labels are utf-8")
}

/// Reads an element file, choosing the format from the extension. CSV files
/// need the group spec from elsewhere.
pub fn read_element(path: &std::path::Path, group_spec: Option<&str>) -> Result<GroupAlgebraElement> {
    let text = std::fs::read_to_string(path)?;
    let is_csv = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    if is_csv {
        let spec = group_spec.ok_or_else(|| LabError::Parse("CSV element needs --group".into()))?;
        element_from_csv(Arc::new(parse_group_spec(spec)?), text.as_bytes())
    } else {
        let f = element_from_json(&text)?;
        if let Some(spec) = group_spec {
            let g = parse_group_spec(spec)?;
            if g != **f.group() {
                return Err(LabError::GroupMismatch(format!(
                    "file is over {}, expected {spec}",
                    f.group().name()
                )));
            }
        }
        Ok(f)
    }
}

#[derive(Serialize)]
struct MatrixDump<'a> {
    dim: usize,
    index_kind: crate::operators::IndexKind,
    #[serde(serialize_with = "serialize_complex_matrix")]
    entries: &'a CMatrix,
}

/// `{dim, index_kind, entries}` with row-major `[re, im]` entries.
pub fn matrix_to_json(m: &OperatorMatrix) -> Result<String> {
    to_json_string(&MatrixDump {
        dim: m.dim(),
        index_kind: m.index_kind,
        entries: &m.entries,
    })
}

/// Dense CSV, one matrix row per line, real and imaginary parts interleaved.
pub fn matrix_to_csv(m: &CMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.nrows() {
        let cells: Vec<String> = (0..m.ncols())
            .flat_map(|c| [csv_float(m[(r, c)].re), csv_float(m[(r, c)].im)])
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Square coefficient matrix as a JSON array of rows; entries are reals or
/// `[re, im]` pairs.
pub fn coefficient_matrix_from_json(text: &str) -> Result<CMatrix> {
    let rows: Vec<Vec<Value>> = serde_json::from_str(text).map_err(|e| LabError::Parse(e.to_string()))?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(LabError::Parse("coefficient matrix must be square and nonempty".into()));
    }
    let mut m = CMatrix::zeros(n, n);
    for (i, row) in rows.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            m[(i, j)] = parse_complex(v)?;
        }
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(LabError::NonFinite("coefficient".into()));
    }
    Ok(m)
}
