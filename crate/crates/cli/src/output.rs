//! CSV tables and atomic file output.

use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigUint;
use regnet_core::attractor::Orbit;
use regnet_core::partition::Generation;
use regnet_core::structure::{BoundCheck, BoundPolynomial};
use regnet_core::{ComplexityTrace, Scalar};

/// Writes `contents` to `dir/name` through a temporary file in `dir` and a
/// rename.
pub fn write_atomic(dir: &Path, name: &str, contents: &[u8]) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(&path).map_err(|e| e.error)?;
    Ok(path)
}

/// A CSV document built in memory.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    pub fn new<I, S>(header: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).expect("in-memory write");
        Table { writer }
    }

    pub fn row<I, S>(&mut self, fields: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).expect("in-memory write");
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.writer.into_inner().expect("in-memory flush")
    }

    pub fn into_string(self) -> String {
        String::from_utf8(self.into_bytes()).expect("CSV is UTF-8")
    }
}

/// `t,C,branching_atoms,max_branch`.
pub fn trace_csv<S: Scalar>(trace: &ComplexityTrace<S>) -> Table {
    let mut table = Table::new(["t", "C", "branching_atoms", "max_branch"]);
    for s in &trace.steps {
        table.row([s.t.to_string(), s.complexity.to_string(), s.branching_atoms.to_string(), s.max_branch.to_string()]);
    }
    table
}

/// `t,C,bound,ok`; the bound is blank where undefined.
pub fn bound_csv(check: &BoundCheck) -> Table {
    let mut table = Table::new(["t", "C", "bound", "ok"]);
    for r in &check.rows {
        let bound = r.bound.as_ref().map(ToString::to_string).unwrap_or_default();
        table.row([r.t.to_string(), r.complexity.to_string(), bound, r.ok.to_string()]);
    }
    table
}

/// `log10` of an arbitrarily large integer.
pub fn log10_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return num_traits::ToPrimitive::to_f64(n).map_or(f64::NAN, f64::log10);
    }
    let shift = bits - 64;
    let top = num_traits::ToPrimitive::to_f64(&(n >> shift)).unwrap_or(f64::NAN);
    top.log10() + shift as f64 * std::f64::consts::LOG10_2
}

fn fmt_log(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.6}")
    } else {
        String::new()
    }
}

/// `log10_t,log10_C,log10_bound` for every `t ≥ 1`. The bound is evaluated
/// in closed form even before its `valid_from`; it is blank where undefined.
pub fn loglog_csv(complexities: &[usize], bound: &BoundPolynomial) -> Table {
    let mut table = Table::new(["log10_t", "log10_C", "log10_bound"]);
    for (k, &c) in complexities.iter().enumerate() {
        let t = k + 1;
        let b = bound.eval(t).map(|b| fmt_log(log10_big(&b))).unwrap_or_default();
        table.row([fmt_log((t as f64).log10()), fmt_log((c as f64).log10()), b]);
    }
    table
}

/// `t,x_1,…,x_d,atom` with exact coordinates; `t` starts at 0.
pub fn orbit_csv(orbit: &Orbit) -> Table {
    let d = orbit.points.first().map_or(0, Vec::len);
    let mut header = vec!["t".to_string()];
    header.extend((1..=d).map(|i| format!("x_{i}")));
    header.push("atom".into());
    let mut table = Table::new(header);
    for (t, (p, w)) in orbit.points.iter().zip(&orbit.itinerary).enumerate() {
        let mut row = vec![t.to_string()];
        row.extend(p.iter().map(ToString::to_string));
        row.push(w.to_string());
        table.row(row);
    }
    table
}

/// One row per atom: `index,parent,atom,side_1,…,side_d`.
pub fn atoms_csv<S: Scalar>(generation: &Generation<S>) -> Table {
    let d = generation.nodes.first().map_or(0, |n| n.rect.dim());
    let mut header = vec!["index".to_string(), "parent".into(), "atom".into()];
    header.extend((1..=d).map(|i| format!("side_{i}")));
    let mut table = Table::new(header);
    for (k, n) in generation.nodes.iter().enumerate() {
        let parent = if n.parent == regnet_core::partition::ROOT { String::new() } else { n.parent.to_string() };
        let mut row = vec![k.to_string(), parent, n.atom.to_string()];
        row.extend(n.rect.sides().iter().map(ToString::to_string));
        table.row(row);
    }
    table
}
