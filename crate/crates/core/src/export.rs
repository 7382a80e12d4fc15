//! File formats: trajectory CSV, coefficient dumps, probe CSV, gnuplot
//! `.dat` series and JSON with fixed 17-significant-digit numbers.
//!
//! Every float written by this crate goes through [`fmt17`], so reruns of the
//! same configuration produce byte-identical files.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::solver::Trajectory;

pub const TRAJECTORY_CSV_HEADER: &str = "t,norm_L2,norm_Hms,norm_Su0,norm_u1,norm_y,ratio_y_u1";

/// Scientific notation with 17 significant digits and a signed exponent,
/// the same spelling serde_json uses for these numbers.
pub fn fmt17(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.16e}");
    match s.split_once('e') {
        Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
        _ => s,
    }
}

pub fn sig17<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        let n = serde_json::Number::from_str(&fmt17(*x)).map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    } else {
        s.serialize_none()
    }
}

pub fn sig17_opt<S: Serializer>(x: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        Some(v) => sig17(v, s),
        None => s.serialize_none(),
    }
}

pub fn sig17_vec<S: Serializer>(xs: &[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    sig17_slice(&xs, s)
}

/// One row of the trajectory table. Norms of `S(t)u₀`, `u₁` and `y` are in
/// `Ḣ^{-s}`; `ratio_y_u1` is `‖y‖₀/‖u₁‖₀` (zero while `u₁` vanishes).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableRow {
    #[serde(serialize_with = "sig17")]
    pub t: f64,
    #[serde(rename = "norm_L2", serialize_with = "sig17")]
    pub norm_l2: f64,
    #[serde(rename = "norm_Hms", serialize_with = "sig17")]
    pub norm_hms: f64,
    #[serde(rename = "norm_Su0", serialize_with = "sig17")]
    pub norm_su0: f64,
    #[serde(serialize_with = "sig17")]
    pub norm_u1: f64,
    #[serde(serialize_with = "sig17")]
    pub norm_y: f64,
    #[serde(serialize_with = "sig17")]
    pub ratio_y_u1: f64,
}

impl TableRow {
    fn csv_line(&self) -> String {
        [
            self.t,
            self.norm_l2,
            self.norm_hms,
            self.norm_su0,
            self.norm_u1,
            self.norm_y,
            self.ratio_y_u1,
        ]
        .iter()
        .map(|&v| fmt17(v))
        .collect::<Vec<_>>()
        .join(",")
    }
}

pub fn write_table_csv<W: Write>(mut w: W, rows: &[TableRow]) -> Result<()> {
    writeln!(w, "{TRAJECTORY_CSV_HEADER}")?;
    for row in rows {
        writeln!(w, "{}", row.csv_line())?;
    }
    Ok(())
}

pub fn save_table_csv(path: &Path, rows: &[TableRow]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_table_csv(&mut w, rows)?;
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct CoefficientRecord<'a> {
    #[serde(serialize_with = "sig17")]
    t: f64,
    #[serde(serialize_with = "sig17")]
    mean: f64,
    #[serde(serialize_with = "sig17_slice")]
    sines: &'a [f64],
    #[serde(serialize_with = "sig17_slice")]
    cosines: &'a [f64],
}

fn sig17_slice<S: Serializer>(xs: &&[f64], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs.iter() {
        let n = serde_json::Number::from_str(&fmt17(*x)).map_err(serde::ser::Error::custom)?;
        seq.serialize_element(&n)?;
    }
    seq.end()
}

/// Full coefficient dump: one JSON object per line and output time,
/// `{"t", "mean", "sines": [f_1..f_N], "cosines": [g_1..g_N]}`.
pub fn write_coefficients<W: Write>(mut w: W, traj: &Trajectory) -> Result<()> {
    for (t, u) in traj.times.iter().zip(&traj.states) {
        let rec = CoefficientRecord {
            t: *t,
            mean: u.mean(),
            sines: u.sines(),
            cosines: u.cosines(),
        };
        serde_json::to_writer(&mut w, &rec)?;
        writeln!(w)?;
    }
    Ok(())
}

/// `trial,ratio` rows of a bilinear probe.
pub fn write_probe_csv<W: Write>(mut w: W, samples: &[f64]) -> Result<()> {
    writeln!(w, "trial,ratio")?;
    for (i, r) in samples.iter().enumerate() {
        writeln!(w, "{i},{}", fmt17(*r))?;
    }
    Ok(())
}

/// Two-column whitespace-separated series readable by gnuplot.
pub fn write_dat<W: Write>(mut w: W, header: &str, xs: &[f64], ys: &[f64]) -> Result<()> {
    writeln!(w, "# {header}")?;
    for (x, y) in xs.iter().zip(ys) {
        writeln!(w, "{} {}", fmt17(*x), fmt17(*y))?;
    }
    Ok(())
}

pub fn save_dat(path: &Path, header: &str, xs: &[f64], ys: &[f64]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_dat(&mut w, header, xs, ys)?;
    w.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn save_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}
