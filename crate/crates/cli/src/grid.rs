//! Parameter sweeps: one or two axes over the real couplings, a scalar
//! quantity per cell, and a CSV form that parses back to the same grid.

use std::fmt;
use std::str::FromStr;

use hyperdelta::model::{self, PotentialParams};
use hyperdelta::{bound, observables, scatter, zeromode, Error};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::range::Range;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Quantity {
    /// lambda of channel l
    Energy,
    /// total number of bound states with degeneracy
    Count,
    /// <x>/x0 of the channel-l state
    MeanRadiusRatio,
    /// delta of channel l at momentum k
    PhaseShift,
    /// the threshold L_max
    Lmax,
    /// w0 on the channel-l zero-mode surface
    ZeroModeBoundary,
}

impl Quantity {
    pub const ALL: [Quantity; 6] = [
        Quantity::Energy,
        Quantity::Count,
        Quantity::MeanRadiusRatio,
        Quantity::PhaseShift,
        Quantity::Lmax,
        Quantity::ZeroModeBoundary,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::Energy => "energy",
            Quantity::Count => "count",
            Quantity::MeanRadiusRatio => "mean_radius_ratio",
            Quantity::PhaseShift => "phase_shift",
            Quantity::Lmax => "lmax",
            Quantity::ZeroModeBoundary => "zero_mode_boundary",
        }
    }
}

impl FromStr for Quantity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Quantity::ALL.into_iter().find(|q| q.name() == s).ok_or_else(|| format!("unknown quantity `{s}`"))
    }
}

/// The real parameters a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Param {
    W0,
    W1,
    X0,
    K,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::W0 => "w0",
            Param::W1 => "w1",
            Param::X0 => "x0",
            Param::K => "k",
        }
    }
}

impl FromStr for Param {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [Param::W0, Param::W1, Param::X0, Param::K]
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("cannot sweep `{s}` (choose w0, w1, x0 or k)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub param: Param,
    pub range: Range,
}

impl FromStr for Axis {
    type Err = String;

    /// `NAME=START:STOP:STEP`
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, range) = s.split_once('=').ok_or_else(|| format!("expected NAME=START:STOP:STEP, got `{s}`"))?;
        Ok(Axis {
            param: name.trim().parse()?,
            range: range.parse().map_err(|e: crate::range::RangeError| e.to_string())?,
        })
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.param.name(), self.range)
    }
}

/// Values held fixed across the sweep; swept ones are ignored.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fixed {
    pub d: u32,
    pub ell: u32,
    pub w0: Option<f64>,
    pub w1: Option<f64>,
    pub x0: Option<f64>,
    pub k: Option<f64>,
}

impl Fixed {
    fn get(&self, p: Param) -> Option<f64> {
        match p {
            Param::W0 => self.w0,
            Param::W1 => self.w1,
            Param::X0 => self.x0,
            Param::K => self.k,
        }
    }

    fn set(&mut self, p: Param, v: f64) {
        let slot = match p {
            Param::W0 => &mut self.w0,
            Param::W1 => &mut self.w1,
            Param::X0 => &mut self.x0,
            Param::K => &mut self.k,
        };
        *slot = Some(v);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Cell {
    Value(f64),
    NoState,
    Infinite,
}

impl Cell {
    pub fn value(self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(v),
            _ => None,
        }
    }
}

/// 17 significant digits: enough to round-trip every f64.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Value(v) => f.write_str(&fmt_float(*v)),
            Cell::NoState => f.write_str("NOSTATE"),
            Cell::Infinite => f.write_str("INF"),
        }
    }
}

impl FromStr for Cell {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "NOSTATE" => Ok(Cell::NoState),
            "INF" => Ok(Cell::Infinite),
            _ => s.parse().map(Cell::Value).map_err(|_| format!("bad cell `{s}`")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ScanError {
    #[error("{0}")]
    Usage(String),
    #[error("cell {index} ({at}): {source}")]
    Numerical {
        index: usize,
        at: String,
        #[source]
        source: Error,
    },
}

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub quantity: Quantity,
    pub fixed: Fixed,
    /// First axis is the slow (row) index.
    pub axes: Vec<Axis>,
    /// Row-major over `axes`.
    pub cells: Vec<Cell>,
}

/// (kappa, <x>/x0) of the channel-l state, or None without a state.
///
/// At threshold, and for states whose kappa underflows, the kappa -> 0 limit is used.
pub fn mean_radius_ratio(p: &PotentialParams, ell: u32) -> hyperdelta::Result<Option<(f64, observables::Extended)>> {
    let limit = || observables::mean_radius_zero_limit(model::couplings(p).alpha, model::eta(p.d, ell));
    Ok(match bound::find_bound_state(p, ell)? {
        Some(s) if s.kappa > 0.0 => Some((s.kappa, observables::mean_radius(p, ell, s.kappa)?.ratio)),
        Some(_) => Some((0.0, limit())),
        None if model::l_max(p).value == ell as f64 => Some((0.0, limit())),
        None => None,
    })
}

/// One cell of the quantity at fully specified parameters.
pub fn evaluate_cell(q: Quantity, d: u32, ell: u32, w0: f64, w1: f64, x0: f64, k: Option<f64>) -> hyperdelta::Result<Cell> {
    let p = PotentialParams::new(d, w0, w1, x0)?;
    Ok(match q {
        Quantity::Energy => match bound::find_bound_state(&p, ell)? {
            Some(s) => Cell::Value(s.lambda),
            None if zeromode::zero_mode_exists(&p, ell) => Cell::Value(0.0),
            None => Cell::NoState,
        },
        Quantity::Count => Cell::Value(bound::spectrum(&p)?.total_count as f64),
        Quantity::MeanRadiusRatio => match mean_radius_ratio(&p, ell)? {
            Some((_, observables::Extended::Finite(v))) => Cell::Value(v),
            Some((_, observables::Extended::Infinite)) => Cell::Infinite,
            None => Cell::NoState,
        },
        Quantity::PhaseShift => {
            let k = k.ok_or_else(|| Error::Domain("phase_shift needs --k or a k sweep".into()))?;
            Cell::Value(scatter::phase_shift(&p, ell, k)?.delta)
        }
        Quantity::Lmax => Cell::Value(model::l_max(&p).value),
        Quantity::ZeroModeBoundary => match zeromode::surface_w0(d, ell, w1, x0) {
            Ok(w) => Cell::Value(w),
            Err(Error::NoZeroMode { .. } | Error::Branch { .. }) => Cell::NoState,
            Err(e) => return Err(e),
        },
    })
}

impl ScanGrid {
    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.range.len()).collect()
    }

    /// Axis values of cell `index`.
    pub fn coordinates(&self, index: usize) -> Vec<f64> {
        let shape = self.shape();
        let mut rest = index;
        let mut out = vec![0.0; shape.len()];
        for (i, n) in shape.iter().enumerate().rev() {
            out[i] = self.axes[i].range.value(rest % n);
            rest /= n;
        }
        out
    }

    /// Evaluates every cell on `jobs` worker threads (None: one per core).
    pub fn compute(quantity: Quantity, fixed: Fixed, axes: Vec<Axis>, jobs: Option<usize>) -> Result<Self, ScanError> {
        if axes.is_empty() || axes.len() > 2 {
            return Err(ScanError::Usage("give one or two --sweep axes".into()));
        }
        if axes.len() == 2 && axes[0].param == axes[1].param {
            return Err(ScanError::Usage(format!("`{}` is swept twice", axes[0].param.name())));
        }
        for p in [Param::W0, Param::W1, Param::X0] {
            if fixed.get(p).is_none() && !axes.iter().any(|a| a.param == p) {
                return Err(ScanError::Usage(format!("--{} is required unless it is swept", p.name())));
            }
        }
        let mut grid = ScanGrid {
            quantity,
            fixed,
            axes,
            cells: Vec::new(),
        };
        let total: usize = grid.shape().iter().product();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.unwrap_or(0))
            .build()
            .map_err(|e| ScanError::Usage(format!("cannot start workers: {e}")))?;
        let g = &grid;
        let cells: Result<Vec<Cell>, ScanError> = pool.install(|| {
            (0..total)
                .into_par_iter()
                .map(|i| {
                    let mut f = g.fixed;
                    for (a, v) in g.axes.iter().zip(g.coordinates(i)) {
                        f.set(a.param, v);
                    }
                    let (w0, w1, x0) = (f.w0.unwrap_or_default(), f.w1.unwrap_or_default(), f.x0.unwrap_or_default());
                    evaluate_cell(quantity, f.d, f.ell, w0, w1, x0, f.k).map_err(|source| {
                        let at = g.axes.iter().zip(g.coordinates(i)).map(|(a, v)| format!("{}={v}", a.param.name())).collect::<Vec<_>>();
                        if source.is_numerical() {
                            ScanError::Numerical { index: i, at: at.join(", "), source }
                        } else {
                            ScanError::Usage(format!("{}: {source}", at.join(", ")))
                        }
                    })
                })
                .collect()
        });
        grid.cells = cells?;
        Ok(grid)
    }

    fn params_line(&self) -> String {
        let f = &self.fixed;
        let mut s = format!("# params: quantity={} d={} l={}", self.quantity.name(), f.d, f.ell);
        for p in [Param::W0, Param::W1, Param::X0, Param::K] {
            if let Some(v) = f.get(p) {
                s += &format!(" {}={v:?}", p.name());
            }
        }
        for a in &self.axes {
            s += &format!(" sweep={a}");
        }
        s
    }

    fn header(&self) -> Vec<&'static str> {
        self.axes.iter().map(|a| a.param.name()).chain([self.quantity.name()]).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let mut write = || -> csv::Result<()> {
            w.write_record(self.header())?;
            for (i, c) in self.cells.iter().enumerate() {
                let mut rec: Vec<String> = self.coordinates(i).into_iter().map(fmt_float).collect();
                rec.push(c.to_string());
                w.write_record(&rec)?;
            }
            w.flush()?;
            Ok(())
        };
        write().expect("writing to memory cannot fail");
        let body = String::from_utf8(w.into_inner().expect("in-memory writer")).expect("ascii output");
        format!("{}\n{body}", self.params_line())
    }

    pub fn from_csv(text: &str) -> Result<Self, ParseError> {
        let err = |line: usize, reason: String| ParseError { line, reason };
        let (first, rest) = text.split_once('\n').ok_or_else(|| err(1, "missing `# params:` line".into()))?;
        let body = first.strip_prefix("# params:").ok_or_else(|| err(1, "missing `# params:` line".into()))?;
        let mut quantity = None;
        let mut fixed = Fixed {
            d: 0,
            ell: 0,
            w0: None,
            w1: None,
            x0: None,
            k: None,
        };
        let mut axes = Vec::new();
        for tok in body.split_whitespace() {
            let (key, val) = tok.split_once('=').ok_or_else(|| err(1, format!("bad token `{tok}`")))?;
            let num = || val.parse::<f64>().map_err(|_| err(1, format!("bad number in `{tok}`")));
            match key {
                "quantity" => quantity = Some(val.parse().map_err(|e| err(1, e))?),
                "d" => fixed.d = val.parse().map_err(|_| err(1, format!("bad d `{val}`")))?,
                "l" => fixed.ell = val.parse().map_err(|_| err(1, format!("bad l `{val}`")))?,
                "sweep" => axes.push(val.parse::<Axis>().map_err(|e| err(1, e))?),
                _ => fixed.set(key.parse().map_err(|e| err(1, e))?, num()?),
            }
        }
        let quantity = quantity.ok_or_else(|| err(1, "no quantity".into()))?;
        let mut grid = ScanGrid {
            quantity,
            fixed,
            axes,
            cells: Vec::new(),
        };
        let want = grid.header();
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(rest.as_bytes());
        let header = r.headers().map_err(|e| err(2, e.to_string()))?;
        if header.iter().collect::<Vec<_>>() != want {
            return Err(err(2, format!("header `{}` does not match the params line", header.iter().collect::<Vec<_>>().join(","))));
        }
        for rec in r.records() {
            let rec = rec.map_err(|e| err(e.position().map_or(0, |p| p.line() as usize + 1), e.to_string()))?;
            let line = rec.position().map_or(0, |p| p.line() as usize + 1);
            let idx = grid.cells.len();
            for (j, (f, v)) in rec.iter().zip(grid.coordinates(idx)).enumerate() {
                let got: f64 = f.parse().map_err(|_| err(line, format!("bad coordinate `{f}`")))?;
                if got != v {
                    return Err(err(line, format!("{} = {got} is off the grid (expected {v})", want[j])));
                }
            }
            grid.cells.push(rec[rec.len() - 1].parse().map_err(|e| err(line, e))?);
        }
        let total: usize = grid.shape().iter().product();
        if grid.cells.len() != total {
            return Err(err(text.lines().count(), format!("{} cells for a grid of {total}", grid.cells.len())));
        }
        Ok(grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixed() -> Fixed {
        Fixed {
            d: 2,
            ell: 2,
            w0: None,
            w1: None,
            x0: Some(1.0),
            k: None,
        }
    }

    #[test]
    fn csv_round_trip_with_markers() {
        let axes = vec!["w0=-12:0:0.5".parse().unwrap(), "w1=-1:3:0.25".parse().unwrap()];
        let g = ScanGrid::compute(Quantity::MeanRadiusRatio, fixed(), axes, Some(2)).unwrap();
        assert_eq!(g.cells.len(), 25 * 17);
        assert!(g.cells.contains(&Cell::NoState));
        assert!(g.cells.iter().any(|c| c.value().is_some()));
        let back = ScanGrid::from_csv(&g.to_csv()).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.to_csv(), g.to_csv());
    }

    #[test]
    fn row_major_coordinates() {
        let axes = vec!["w0=0:2:1".parse().unwrap(), "w1=0:1:0.5".parse().unwrap()];
        let g = ScanGrid::compute(Quantity::Lmax, fixed(), axes, Some(3)).unwrap();
        assert_eq!(g.coordinates(0), vec![0.0, 0.0]);
        assert_eq!(g.coordinates(1), vec![0.0, 0.5]);
        assert_eq!(g.coordinates(3), vec![1.0, 0.0]);
        for (i, c) in g.cells.iter().enumerate() {
            let v = g.coordinates(i);
            let p = PotentialParams::new(2, v[0], v[1], 1.0).unwrap();
            assert_eq!(c.value(), Some(model::l_max(&p).value));
        }
    }

    #[test]
    fn missing_fixed_value_is_a_usage_error() {
        let mut f = fixed();
        f.x0 = None;
        let r = ScanGrid::compute(Quantity::Lmax, f, vec!["w0=0:1:1".parse().unwrap(), "w1=0:1:1".parse().unwrap()], None);
        assert!(matches!(r, Err(ScanError::Usage(_))));
    }

    #[test]
    fn parse_rejects_tampering() {
        let axes = vec!["w0=0:1:0.5".parse().unwrap()];
        let mut f = fixed();
        f.w1 = Some(0.3);
        let csv = ScanGrid::compute(Quantity::Lmax, f, axes, Some(1)).unwrap().to_csv();
        assert!(ScanGrid::from_csv(&csv.replace("5.0000000000000000e-1,", "5.5000000000000000e-1,")).is_err());
        let short: String = csv.lines().take(3).map(|l| format!("{l}\n")).collect();
        assert!(ScanGrid::from_csv(&short).is_err());
        assert!(ScanGrid::from_csv(&csv[1..]).is_err());
    }
}
