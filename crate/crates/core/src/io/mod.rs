//! Run configs, structured-grid dumps, CSV exports and versioned JSON
//! records.
//!
//! A grid dump is a header line `GRID n h x0.. dims.. components` followed
//! by the values in row-major order (last axis fastest, components
//! innermost), one last-axis row per line.

use std::io::{BufRead, Write};
use std::path::PathBuf;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::funcspace::multiindex::up_to;
use crate::funcspace::{BesovJet, GridField, GridSpec};
use crate::geometry::{
    koch_prefractal, koch_root, AhlforsCloud, Cusp, DomainRef, Empty, Polygon, Rect, RootLattice, WhitneyCover,
};

/// Version stamped on every JSON record.
pub const SCHEMA_VERSION: u32 = 1;

fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Config(msg.into()))
}

/// Everything a command can be told. Unset fields fall back to
/// per-command defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<String>,
    /// Domain spec, `kind[:param]`; see [`parse_domain`].
    pub domain: Option<String>,
    /// Root cube `[x0, y0, side]` overriding the domain's default.
    pub root: Option<[f64; 3]>,
    /// Tensor spec, `identity`, `meyers:mu` or `degiorgi:gamma`.
    pub tensor: Option<String>,
    /// Test-field name.
    pub field: Option<String>,
    /// Cloud spec, `koch:level` or `segment:points`.
    pub cloud: Option<String>,
    pub k: Option<usize>,
    pub m: Option<usize>,
    pub p: Vec<f64>,
    /// Cells per unit length, strictly increasing.
    pub grids: Vec<usize>,
    pub jmax: Option<u32>,
    /// Smoothness index for Besov norms.
    pub s: Option<f64>,
    pub eps: Option<f64>,
    pub delta: Option<f64>,
    /// Command-specific mode (glue profile, solve problem).
    pub mode: Option<String>,
    /// Counterexample parameter (`mu`, `gamma` or `epsilon`).
    pub param: Option<f64>,
    pub out: Option<PathBuf>,
    pub deterministic: bool,
    pub seed: u64,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// `other`'s set fields win.
    pub fn overlay(self, other: RunConfig) -> Self {
        fn pick<T>(a: Option<T>, b: Option<T>) -> Option<T> {
            b.or(a)
        }
        fn pick_vec<T>(a: Vec<T>, b: Vec<T>) -> Vec<T> {
            if b.is_empty() {
                a
            } else {
                b
            }
        }
        Self {
            command: pick(self.command, other.command),
            domain: pick(self.domain, other.domain),
            root: pick(self.root, other.root),
            tensor: pick(self.tensor, other.tensor),
            field: pick(self.field, other.field),
            cloud: pick(self.cloud, other.cloud),
            k: pick(self.k, other.k),
            m: pick(self.m, other.m),
            p: pick_vec(self.p, other.p),
            grids: pick_vec(self.grids, other.grids),
            jmax: pick(self.jmax, other.jmax),
            s: pick(self.s, other.s),
            eps: pick(self.eps, other.eps),
            delta: pick(self.delta, other.delta),
            mode: pick(self.mode, other.mode),
            param: pick(self.param, other.param),
            out: pick(self.out, other.out),
            deterministic: self.deterministic || other.deterministic,
            seed: if other.seed != 0 { other.seed } else { self.seed },
        }
    }

    /// Grid ladder strictly refining, every exponent above 1.
    pub fn validate(&self) -> Result<()> {
        if self.grids.windows(2).any(|w| w[1] <= w[0]) {
            return config_err("grid ladder must be strictly refining");
        }
        if self.grids.contains(&0) {
            return config_err("grid sizes must be positive");
        }
        if let Some(p) = self.p.iter().find(|&&p| !(p > 1.0)) {
            return config_err(format!("exponent p = {p} must exceed 1"));
        }
        if self.k == Some(0) {
            return config_err("order k must be at least 1");
        }
        Ok(())
    }
}

fn split_spec(spec: &str) -> (&str, Option<&str>) {
    match spec.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (spec, None),
    }
}

fn num<T: std::str::FromStr>(what: &str, v: Option<&str>) -> Result<T> {
    match v.map(str::parse) {
        Some(Ok(x)) => Ok(x),
        _ => config_err(format!("{what} needs a numeric parameter")),
    }
}

/// A planar domain and its default root lattice. Kinds: `square`, `lshape`,
/// `koch:L`, `strip`, `cusp:a`, `empty`.
pub fn parse_domain(spec: &str) -> Result<(DomainRef<2>, RootLattice<2>)> {
    let (kind, arg) = split_spec(spec);
    Ok(match kind {
        "square" => (Arc::new(Rect::<2>::unit()), RootLattice::cube([0.0, 0.0], 1.0)),
        "lshape" | "L-shape" => (Arc::new(Polygon::l_shape()), RootLattice::cube([0.0, 0.0], 2.0)),
        "koch" => {
            let level: u32 = num("koch", arg)?;
            let (poly, _) = koch_prefractal(level)?;
            (Arc::new(poly), koch_root())
        }
        "strip" => (
            Arc::new(Rect::<2>::new([f64::NEG_INFINITY, 0.0], [f64::INFINITY, 1.0])),
            RootLattice::cube([0.0, 0.0], 1.0),
        ),
        "cusp" => {
            let a: f64 = num("cusp", arg)?;
            if !(a > 1.0) {
                return config_err("cusp exponent must exceed 1");
            }
            (Arc::new(Cusp::new(a)), RootLattice::cube([0.0, 0.0], 1.0))
        }
        "empty" => (Arc::new(Empty), RootLattice::cube([0.0, 0.0], 1.0)),
        _ => return config_err(format!("unknown domain kind '{kind}'")),
    })
}

/// A boundary cloud: `koch:L` (snowflake edge midpoints) or `segment:m`
/// (`m` points on `[0,1] x {0}`).
pub fn parse_cloud(spec: &str) -> Result<AhlforsCloud<2>> {
    let (kind, arg) = split_spec(spec);
    match kind {
        "koch" => Ok(koch_prefractal(num("koch", arg)?)?.1),
        "segment" => AhlforsCloud::segment([0.0, 0.0], [1.0, 0.0], num("segment", arg)?),
        _ => config_err(format!("unknown cloud kind '{kind}'")),
    }
}

/// Writes a grid dump.
pub fn write_grid<const N: usize>(w: &mut impl Write, g: &GridField<N>) -> Result<()> {
    let s = &g.spec;
    write!(w, "GRID {N} {}", s.h)?;
    for v in s.lo {
        write!(w, " {v}")?;
    }
    for d in s.dims {
        write!(w, " {d}")?;
    }
    writeln!(w, " {}", g.components)?;
    let row = s.dims[N - 1] * g.components;
    for chunk in g.values.chunks(row.max(1)) {
        let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Reads a grid dump written by [`write_grid`].
pub fn read_grid<const N: usize>(r: impl BufRead) -> Result<GridField<N>> {
    let mut words = Vec::new();
    for line in r.lines() {
        let line = line?;
        words.extend(line.split_whitespace().map(str::to_owned));
    }
    let bad = |m: &str| Error::InvalidInput(format!("grid dump: {m}"));
    let mut it = words.into_iter();
    if it.next().as_deref() != Some("GRID") {
        return Err(bad("missing GRID header"));
    }
    let mut next_num = |what: &str| -> Result<f64> {
        it.next()
            .and_then(|w| w.parse::<f64>().ok())
            .ok_or_else(|| bad(&format!("bad {what}")))
    };
    if next_num("dimension")? as usize != N {
        return Err(bad("dimension mismatch"));
    }
    let h = next_num("spacing")?;
    let mut lo = [0.0; N];
    for v in lo.iter_mut() {
        *v = next_num("origin")?;
    }
    let mut dims = [0usize; N];
    for d in dims.iter_mut() {
        *d = next_num("dims")? as usize;
    }
    let components = next_num("components")? as usize;
    let count = dims.iter().product::<usize>() * components;
    let mut values = Vec::with_capacity(count);
    for _ in 0..count {
        values.push(next_num("value")?);
    }
    if it.next().is_some() {
        return Err(bad("trailing values"));
    }
    GridField::from_values(GridSpec { lo, h, dims }, components, values)
}

/// Cover rows `level, i0.., truncated`.
pub fn write_cover_csv<const N: usize>(w: impl Write, cover: &WhitneyCover<N>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut head = vec!["level".to_string()];
    head.extend((0..N).map(|i| format!("i{i}")));
    head.push("truncated".into());
    out.write_record(&head).map_err(csv_err)?;
    for (q, t) in cover.cubes.iter().zip(&cover.truncated) {
        let mut rec = vec![q.level.to_string()];
        rec.extend(q.index.iter().map(|v| v.to_string()));
        rec.push((*t as u8).to_string());
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Rectangles `x0, y0, x1, y1, level` for plotting.
pub fn write_cover_rects(w: impl Write, cover: &WhitneyCover<2>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x0", "y0", "x1", "y1", "level"]).map_err(csv_err)?;
    for q in &cover.cubes {
        let b = q.bounds(&cover.lattice);
        out.serialize((b.lo[0], b.lo[1], b.hi[0], b.hi[1], q.level))
            .map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Jet rows: point coordinates, weight, then `f_α` in graded order with
/// headers like `f_10`.
pub fn write_jet_csv<const N: usize>(w: impl Write, jet: &BesovJet<N>) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let mut head: Vec<String> = (0..N).map(|i| format!("x{i}")).collect();
    head.push("weight".into());
    for a in up_to::<N>(jet.k - 1) {
        let tag: String = a.iter().map(|v| v.to_string()).collect();
        head.push(format!("f_{tag}"));
    }
    out.write_record(&head).map_err(csv_err)?;
    for (i, x) in jet.cloud.points.iter().enumerate() {
        let mut rec: Vec<String> = x.iter().map(|v| v.to_string()).collect();
        rec.push(jet.cloud.weights[i].to_string());
        rec.extend(jet.at(i).iter().map(|v| v.to_string()));
        out.write_record(&rec).map_err(csv_err)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads a scalar lattice `x0.., value` of cell centers with spacing `h`
/// into a grid field; cells missing from the file are an error.
pub fn read_lattice_csv<const N: usize>(r: impl std::io::Read, h: f64) -> Result<GridField<N>> {
    let mut rd = csv::Reader::from_reader(r);
    let mut rows: Vec<([f64; N], f64)> = Vec::new();
    for rec in rd.records() {
        let rec = rec.map_err(csv_err)?;
        if rec.len() != N + 1 {
            return Err(Error::InvalidInput(format!(
                "lattice row has {} columns, want {}",
                rec.len(),
                N + 1
            )));
        }
        let mut x = [0.0; N];
        for (i, v) in x.iter_mut().enumerate() {
            *v = parse_f64(&rec[i])?;
        }
        rows.push((x, parse_f64(&rec[N])?));
    }
    if rows.is_empty() {
        return Err(Error::InvalidInput("empty lattice".into()));
    }
    let mut lo = [f64::INFINITY; N];
    let mut hi = [f64::NEG_INFINITY; N];
    for (x, _) in &rows {
        for i in 0..N {
            lo[i] = lo[i].min(x[i]);
            hi[i] = hi[i].max(x[i]);
        }
    }
    let mut dims = [0usize; N];
    for i in 0..N {
        dims[i] = ((hi[i] - lo[i]) / h).round() as usize + 1;
        lo[i] -= 0.5 * h;
    }
    let spec = GridSpec { lo, h, dims };
    let mut values = vec![f64::NAN; spec.len()];
    for (x, v) in rows {
        let mut idx = [0usize; N];
        for i in 0..N {
            let t = (x[i] - lo[i]) / h - 0.5;
            if (t - t.round()).abs() > 1e-6 {
                return Err(Error::InvalidInput(format!("point {x:?} is off the lattice")));
            }
            idx[i] = t.round() as usize;
        }
        values[spec.flat(&idx)] = v;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::InvalidInput("lattice has holes".into()));
    }
    GridField::from_values(spec, 1, values)
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("not a number: '{s}'")))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(e.to_string())
}

/// A norm value as emitted by the norm evaluators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormRecord {
    pub name: String,
    pub k: usize,
    pub p: f64,
    pub h: f64,
    pub value: f64,
}

/// One checked claim.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub claim: String,
    pub measured: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Verdict {
    /// Passes when `measured <= tolerance`.
    pub fn at_most(claim: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            claim: claim.into(),
            measured,
            tolerance,
            pass: measured <= tolerance,
        }
    }

    /// Passes when `measured >= tolerance`.
    pub fn at_least(claim: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Self {
            claim: claim.into(),
            measured,
            tolerance,
            pass: measured >= tolerance,
        }
    }

    /// A yes/no claim; `measured` is 1 or 0.
    pub fn holds(claim: impl Into<String>, ok: bool) -> Self {
        Self {
            claim: claim.into(),
            measured: if ok { 1.0 } else { 0.0 },
            tolerance: 1.0,
            pass: ok,
        }
    }
}

/// The JSON report of one command run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub verdicts: Vec<Verdict>,
    /// Command-specific payload.
    pub data: serde_json::Value,
    /// Wall time; left out in deterministic mode.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub elapsed_seconds: Option<f64>,
}

impl Report {
    pub fn new(command: impl Into<String>, verdicts: Vec<Verdict>, data: impl Serialize) -> Result<Self> {
        Ok(Self {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            verdicts,
            data: serde_json::to_value(data).map_err(|e| Error::InvalidInput(e.to_string()))?,
            elapsed_seconds: None,
        })
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Machine-readable failure record.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub schema_version: u32,
    pub command: String,
    pub error: String,
    pub message: String,
    pub invariant_violation: bool,
}

impl ErrorRecord {
    pub fn new(command: impl Into<String>, e: &Error) -> Self {
        let dbg = format!("{e:?}");
        let kind = dbg
            .split(|c: char| !c.is_alphanumeric())
            .next()
            .unwrap_or("Error")
            .to_string();
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            error: kind,
            message: e.to_string(),
            invariant_violation: e.is_invariant_violation(),
        }
    }
}

/// Checks a parsed JSON report against the current schema: version,
/// required keys and verdict shape.
pub fn check_report_schema(v: &serde_json::Value) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidInput(format!("schema: {m}")));
    if v.get("schema_version").and_then(|x| x.as_u64()) != Some(SCHEMA_VERSION as u64) {
        return bad("schema_version");
    }
    if !v.get("command").is_some_and(|c| c.is_string()) || v.get("data").is_none() {
        return bad("command/data");
    }
    let Some(verdicts) = v.get("verdicts").and_then(|x| x.as_array()) else {
        return bad("verdicts");
    };
    for d in verdicts {
        let ok = d.get("claim").is_some_and(|c| c.is_string())
            && d.get("measured").is_some_and(|c| c.is_number() || c.is_null())
            && d.get("tolerance").is_some_and(|c| c.is_number() || c.is_null())
            && d.get("pass").is_some_and(|c| c.is_boolean());
        if !ok {
            return bad("verdict fields");
        }
    }
    Ok(())
}
