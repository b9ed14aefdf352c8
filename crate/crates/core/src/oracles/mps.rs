//! MPS export and import for [`MipInstance`].
//!
//! Fixed-format layout: field 1 at column 2, field 2 at column 5, field 3 at column 15,
//! field 4 at column 25, field 5 at column 40, field 6 at column 50. Numbers are written in
//! shortest round-trip form and may run past their nominal width, so the reader splits on
//! whitespace (free MPS) rather than on columns.
//!
//! Columns:
//!
//! | name     | kind       | meaning                          |
//! |----------|------------|----------------------------------|
//! | `E{i}`   | binary     | example `i` counted as a loss    |
//! | `Z{j}`   | integer    | `w_j = τ z_j`, bounds `±⌊B/τ⌋`    |
//! | `LAM`    | continuous | lift `λ ∈ [0, D]`, normalized only |
//!
//! Rows:
//!
//! | name             | type | meaning                                        |
//! |------------------|------|------------------------------------------------|
//! | `OBJ`            | N    | objective                                      |
//! | `MP{i}`, `MN{i}` | G    | `y<x,w> + c e ≥ κ` (positive), `≥ 0` (negative)  |
//! | `RP{i}`, `RN{i}` | L    | `y<x,w> + c e ≤ c` (positive), `≤ c − κ` (negative); negative weights |
//! | `BX{j}`          | L    | `−B ≤ w_j ≤ B` via RANGES, weighted mode only   |
//! | `QC`             | L    | `λ² + ‖w‖² ≤ D²` in QCMATRIX, normalized only    |
//!
//! In normalized mode the objective is multiplied by `D`. Header comments `* key value`
//! carry `mode`, `tau`, `coord_bound`, `radius`, `big_m` and `kappa`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::{BufRead, Write};
use std::path::Path;

use super::{MipInstance, MipMode};
use crate::domain::{DiscreteSpace, Label, LabeledExample};
use crate::error::{Error, Result};

const OBJ: &str = "OBJ";
const LAM: &str = "LAM";
const QC: &str = "QC";

fn num(v: f64) -> String {
    format!("{v:?}")
}

fn field_line(out: &mut String, f1: &str, f2: &str, f3: &str, f4: &str) {
    let mut line = format!(" {f1:<2} {f2:<8}  {f3:<8}  {f4}");
    let trimmed = line.trim_end().len();
    line.truncate(trimmed);
    out.push_str(&line);
    out.push('\n');
}

fn row_name(inst: &MipInstance, i: usize) -> String {
    let reverse = inst.weights[i] < 0.0;
    let kind = if reverse { 'R' } else { 'M' };
    let label = match inst.examples[i].y {
        Label::Positive => 'P',
        Label::Negative => 'N',
    };
    format!("{kind}{label}{i}")
}

/// Renders `inst` as MPS text.
pub fn to_mps_string(inst: &MipInstance) -> Result<String> {
    inst.validate()?;
    let d = inst.dim();
    let n = inst.len();
    let space = &inst.space;
    let tau = space.step();
    let k_max = space.extent();
    let normalized = inst.mode == MipMode::Normalized;

    let mut s = String::new();
    writeln!(s, "* mode {}", inst.mode.as_str()).unwrap();
    writeln!(s, "* tau {}", num(tau)).unwrap();
    writeln!(s, "* coord_bound {}", num(space.coord_bound())).unwrap();
    writeln!(s, "* radius {}", num(space.radius())).unwrap();
    writeln!(s, "* big_m {}", num(inst.big_m)).unwrap();
    writeln!(s, "* kappa {}", num(inst.kappa)).unwrap();
    s.push_str("NAME          OBJPERT\n");

    s.push_str("ROWS\n");
    field_line(&mut s, "N", OBJ, "", "");
    let rows: Vec<String> = (0..n).map(|i| row_name(inst, i)).collect();
    for (i, r) in rows.iter().enumerate() {
        field_line(&mut s, if inst.weights[i] < 0.0 { "L" } else { "G" }, r, "", "");
    }
    if inst.mode == MipMode::Weighted {
        for j in 0..d {
            field_line(&mut s, "L", &format!("BX{j}"), "", "");
        }
    }
    if normalized {
        field_line(&mut s, "L", QC, "", "");
    }

    s.push_str("COLUMNS\n");
    let obj_scale = if normalized { space.radius() } else { 1.0 };
    field_line(&mut s, "", "MARKER", "'MARKER'", "'INTORG'");
    for (i, r) in rows.iter().enumerate() {
        let col = format!("E{i}");
        field_line(&mut s, "", &col, OBJ, &num(obj_scale * inst.weights[i]));
        field_line(&mut s, "", &col, r, &num(inst.big_m));
    }
    for j in 0..d {
        let col = format!("Z{j}");
        field_line(&mut s, "", &col, OBJ, &num(-inst.eta[j] * tau));
        for (e, r) in inst.examples.iter().zip(&rows) {
            let coef = e.y.sign() * e.x[j] * tau;
            if coef != 0.0 {
                field_line(&mut s, "", &col, r, &num(coef));
            }
        }
        if inst.mode == MipMode::Weighted {
            field_line(&mut s, "", &col, &format!("BX{j}"), &num(tau));
        }
    }
    field_line(&mut s, "", "MARKER", "'MARKER'", "'INTEND'");
    if normalized {
        field_line(&mut s, "", LAM, OBJ, &num(-inst.eta[d]));
    }

    s.push_str("RHS\n");
    for (i, (e, r)) in inst.examples.iter().zip(&rows).enumerate() {
        let rhs = match (inst.weights[i] < 0.0, e.y) {
            (false, Label::Positive) => inst.kappa,
            (false, Label::Negative) => 0.0,
            (true, Label::Positive) => inst.big_m,
            (true, Label::Negative) => inst.big_m - inst.kappa,
        };
        if rhs != 0.0 {
            field_line(&mut s, "", "RHS", r, &num(rhs));
        }
    }
    let b = space.coord_bound();
    if inst.mode == MipMode::Weighted {
        for j in 0..d {
            field_line(&mut s, "", "RHS", &format!("BX{j}"), &num(b));
        }
    }
    if normalized {
        field_line(&mut s, "", "RHS", QC, &num(space.radius() * space.radius()));
    }

    if inst.mode == MipMode::Weighted {
        s.push_str("RANGES\n");
        for j in 0..d {
            field_line(&mut s, "", "RNG", &format!("BX{j}"), &num(2.0 * b));
        }
    }

    s.push_str("BOUNDS\n");
    for i in 0..n {
        field_line(&mut s, "BV", "BND", &format!("E{i}"), "");
    }
    for j in 0..d {
        field_line(&mut s, "LI", "BND", &format!("Z{j}"), &(-k_max).to_string());
        field_line(&mut s, "UI", "BND", &format!("Z{j}"), &k_max.to_string());
    }
    if normalized {
        field_line(&mut s, "UP", "BND", LAM, &num(space.radius()));
    }

    if normalized {
        writeln!(s, "QCMATRIX   {QC}").unwrap();
        field_line(&mut s, "", LAM, LAM, "1.0");
        for j in 0..d {
            let z = format!("Z{j}");
            field_line(&mut s, "", &z, &z, &num(tau * tau));
        }
    }
    s.push_str("ENDATA\n");
    Ok(s)
}

pub fn write_mps<W: Write>(inst: &MipInstance, mut out: W) -> Result<()> {
    out.write_all(to_mps_string(inst)?.as_bytes())?;
    Ok(())
}

/// Writes `inst` to `path`.
pub fn export_mps(inst: &MipInstance, path: impl AsRef<Path>) -> Result<()> {
    let text = to_mps_string(inst)?;
    std::fs::write(path, text)?;
    Ok(())
}

/// Reads an instance written by [`export_mps`].
pub fn import_mps(path: impl AsRef<Path>) -> Result<MipInstance> {
    let file = std::fs::File::open(path)?;
    MpsModel::parse(std::io::BufReader::new(file))?.to_instance()
}

/// A parsed MPS file, before interpretation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MpsModel {
    pub name: String,
    /// `* key value` comment lines.
    pub header: Vec<(String, String)>,
    /// `(type, name)` in file order.
    pub rows: Vec<(String, String)>,
    /// Column names in first-appearance order, with their integrality marker.
    pub columns: Vec<(String, bool)>,
    /// `(column, row, value)`.
    pub entries: Vec<(String, String, f64)>,
    pub rhs: HashMap<String, f64>,
    pub ranges: HashMap<String, f64>,
    /// `(type, column, value)`; `value` is `None` for `BV`, `FR` and similar.
    pub bounds: Vec<(String, String, Option<f64>)>,
    /// `(row, col1, col2, value)`.
    pub quadratic: Vec<(String, String, String, f64)>,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Rows,
    Columns,
    Rhs,
    Ranges,
    Bounds,
    Qc,
}

fn parse_num(s: &str, line: usize) -> Result<f64> {
    s.parse::<f64>()
        .map_err(|_| Error::Mps { line, message: format!("bad number `{s}`") })
}

impl MpsModel {
    pub fn parse<R: BufRead>(input: R) -> Result<Self> {
        let mut m = MpsModel::default();
        let mut section = Section::None;
        let mut qc_row = String::new();
        let mut integer = false;
        let mut ended = false;
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let bad = |message: String| Error::Mps { line: lineno, message };
            if let Some(rest) = line.strip_prefix('*') {
                let mut parts = rest.split_whitespace();
                if let (Some(k), Some(v)) = (parts.next(), parts.next()) {
                    m.header.push((k.to_string(), v.to_string()));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            let tok: Vec<&str> = line.split_whitespace().collect();
            if !line.starts_with(' ') {
                section = match tok[0] {
                    "NAME" => {
                        m.name = tok.get(1).unwrap_or(&"").to_string();
                        Section::None
                    }
                    "ROWS" => Section::Rows,
                    "COLUMNS" => Section::Columns,
                    "RHS" => Section::Rhs,
                    "RANGES" => Section::Ranges,
                    "BOUNDS" => Section::Bounds,
                    "QCMATRIX" => {
                        qc_row = tok.get(1).ok_or_else(|| bad("QCMATRIX without row".into()))?.to_string();
                        Section::Qc
                    }
                    "ENDATA" => {
                        ended = true;
                        break;
                    }
                    other => return Err(bad(format!("unknown section `{other}`"))),
                };
                continue;
            }
            match section {
                Section::Rows => {
                    if tok.len() != 2 {
                        return Err(bad("row line needs type and name".into()));
                    }
                    m.rows.push((tok[0].to_string(), tok[1].to_string()));
                }
                Section::Columns => {
                    if tok.len() >= 3 && tok[1] == "'MARKER'" {
                        integer = match tok[2] {
                            "'INTORG'" => true,
                            "'INTEND'" => false,
                            other => return Err(bad(format!("unknown marker {other}"))),
                        };
                        continue;
                    }
                    if tok.len() != 3 && tok.len() != 5 {
                        return Err(bad("column line needs 3 or 5 fields".into()));
                    }
                    let col = tok[0];
                    if m.columns.last().map(|c| c.0.as_str()) != Some(col) {
                        if m.columns.iter().any(|c| c.0 == col) {
                            return Err(bad(format!("column `{col}` is not contiguous")));
                        }
                        m.columns.push((col.to_string(), integer));
                    }
                    for pair in tok[1..].chunks(2) {
                        m.entries.push((col.to_string(), pair[0].to_string(), parse_num(pair[1], lineno)?));
                    }
                }
                Section::Rhs | Section::Ranges => {
                    if tok.len() != 3 && tok.len() != 5 {
                        return Err(bad("rhs/range line needs 3 or 5 fields".into()));
                    }
                    let target = if section == Section::Rhs { &mut m.rhs } else { &mut m.ranges };
                    for pair in tok[1..].chunks(2) {
                        target.insert(pair[0].to_string(), parse_num(pair[1], lineno)?);
                    }
                }
                Section::Bounds => {
                    let value = match tok.len() {
                        3 => None,
                        4 => Some(parse_num(tok[3], lineno)?),
                        _ => return Err(bad("bound line needs 3 or 4 fields".into())),
                    };
                    m.bounds.push((tok[0].to_string(), tok[2].to_string(), value));
                }
                Section::Qc => {
                    if tok.len() != 3 {
                        return Err(bad("QCMATRIX line needs 3 fields".into()));
                    }
                    m.quadratic.push((
                        qc_row.clone(),
                        tok[0].to_string(),
                        tok[1].to_string(),
                        parse_num(tok[2], lineno)?,
                    ));
                }
                Section::None => return Err(bad("data outside a section".into())),
            }
        }
        if !ended {
            return Err(Error::Mps { line: 0, message: "missing ENDATA".into() });
        }
        Ok(m)
    }

    fn header_value(&self, key: &str) -> Result<&str> {
        self.header
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or_else(|| Error::Mps { line: 0, message: format!("missing header `{key}`") })
    }

    fn header_num(&self, key: &str) -> Result<f64> {
        parse_num(self.header_value(key)?, 0)
    }

    fn entry(&self, col: &str, row: &str) -> f64 {
        self.entries
            .iter()
            .find(|(c, r, _)| c == col && r == row)
            .map_or(0.0, |e| e.2)
    }

    /// Reconstructs the instance this crate wrote.
    pub fn to_instance(&self) -> Result<MipInstance> {
        let mode = MipMode::parse(self.header_value("mode")?)?;
        let tau = self.header_num("tau")?;
        let d = self.columns.iter().filter(|(c, _)| c.starts_with('Z')).count();
        let space = DiscreteSpace::new(d, tau, self.header_num("coord_bound")?, self.header_num("radius")?)?;
        let big_m = self.header_num("big_m")?;
        let kappa = self.header_num("kappa")?;
        let obj_scale = if mode == MipMode::Normalized { space.radius() } else { 1.0 };
        let bad = |message: String| Error::Mps { line: 0, message };

        let mut examples = Vec::new();
        let mut weights = Vec::new();
        for (kind, name) in &self.rows {
            let mut chars = name.chars();
            let (Some(prefix), Some(label)) = (chars.next(), chars.next()) else { continue };
            if !(prefix == 'M' || prefix == 'R') || kind == "N" {
                continue;
            }
            let i: usize = chars.as_str().parse().map_err(|_| bad(format!("bad row name `{name}`")))?;
            if i != examples.len() {
                return Err(bad(format!("row `{name}` out of order")));
            }
            let y = match label {
                'P' => Label::Positive,
                'N' => Label::Negative,
                _ => return Err(bad(format!("bad label in row `{name}`"))),
            };
            let x = (0..d).map(|j| self.entry(&format!("Z{j}"), name) / (y.sign() * tau)).collect();
            examples.push(LabeledExample::new(x, y)?);
            weights.push(self.entry(&format!("E{i}"), OBJ) / obj_scale);
        }
        let mut eta: Vec<f64> = (0..d).map(|j| -self.entry(&format!("Z{j}"), OBJ) / tau).collect();
        if mode == MipMode::Normalized {
            eta.push(-self.entry(LAM, OBJ));
        }
        let inst = MipInstance { examples, eta, space, big_m, kappa, mode, weights };
        inst.validate()?;
        Ok(inst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{Dataset, WeightedDataset};
    use crate::noise::{gaussian_vector, RngStream};

    fn sample(d: usize, n: usize, seed: u64) -> Dataset<LabeledExample> {
        let mut rng = RngStream::new(seed, 0);
        let items = (0..n)
            .map(|i| {
                let x = gaussian_vector(d, 1.0, &mut rng).unwrap();
                LabeledExample::new(x, if i % 2 == 0 { Label::Positive } else { Label::Negative }).unwrap()
            })
            .collect();
        Dataset::with_dim(d, items).unwrap()
    }

    fn round_trip(inst: &MipInstance) -> MipInstance {
        let text = to_mps_string(inst).unwrap();
        MpsModel::parse(text.as_bytes()).unwrap().to_instance().unwrap()
    }

    #[test]
    fn round_trip_all_modes() {
        let data = sample(3, 7, 1);
        let space = DiscreteSpace::new(3, 0.5, 1.0, 1.5).unwrap();
        let eta = [0.3, -1.25, 2.0, 0.7];
        let inst = MipInstance::normalized(&data, &eta, &space).unwrap();
        assert!(round_trip(&inst).approx_eq(&inst, 1e-12));
        let inst = MipInstance::linear(&data, &eta[..3], &space).unwrap();
        assert!(round_trip(&inst).approx_eq(&inst, 1e-12));
        let weights = [1.0, -2.5, 0.0, 3.0, -0.1, 1.0, 7.0];
        let wd = WeightedDataset::new(3, data.items().iter().cloned().zip(weights).collect()).unwrap();
        let inst = MipInstance::weighted(&wd, &DiscreteSpace::ternary_cube(3).unwrap()).unwrap();
        assert!(round_trip(&inst).approx_eq(&inst, 1e-12));
    }

    #[test]
    fn one_example_one_coordinate() {
        let data = Dataset::new(vec![LabeledExample::positive(vec![1.0]).unwrap()]).unwrap();
        let space = DiscreteSpace::new(1, 1.0, 1.0, 1.0).unwrap();
        let inst = MipInstance::normalized(&data, &[0.5, 0.5], &space).unwrap();
        let m = MpsModel::parse(to_mps_string(&inst).unwrap().as_bytes()).unwrap();
        let binaries = m.bounds.iter().filter(|b| b.0 == "BV").count();
        let integers = m.columns.iter().filter(|c| c.1 && c.0.starts_with('Z')).count();
        let big_m_rows = m.rows.iter().filter(|r| r.1.starts_with('M') || r.1.starts_with('R')).count();
        assert_eq!((binaries, integers, big_m_rows), (1, 1, 1));
        assert_eq!(m.quadratic.len(), 2);
    }

    #[test]
    fn weighted_mode_has_box_rows_and_no_quadratic() {
        let data = sample(2, 3, 2);
        let wd = WeightedDataset::unit(&data);
        let inst = MipInstance::weighted(&wd, &DiscreteSpace::ternary_cube(2).unwrap()).unwrap();
        let m = MpsModel::parse(to_mps_string(&inst).unwrap().as_bytes()).unwrap();
        assert!(m.quadratic.is_empty());
        assert!(!m.rows.iter().any(|r| r.1 == QC));
        for j in 0..2 {
            let row = format!("BX{j}");
            assert_eq!(m.rhs[&row], 1.0);
            assert_eq!(m.ranges[&row], 2.0);
        }
    }

    #[test]
    fn missing_endata_is_an_error() {
        assert!(MpsModel::parse("ROWS\n N  OBJ\n".as_bytes()).is_err());
    }
}
