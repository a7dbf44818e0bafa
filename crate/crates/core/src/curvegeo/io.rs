//! `theta,x,y` CSV serialization of curves.

use std::f64::consts::TAU;
use std::io::{Read, Write};
use std::path::Path;

use super::{DiscreteCurve, Vec2};
use crate::error::{Error, Result};

/// Relative tolerance on the θ column against the uniform grid.
const GRID_TOL: f64 = 1e-9;

pub fn write_curve_csv<W: Write>(curve: &DiscreteCurve, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let csv_err = |e: csv::Error| Error::Csv(e.to_string());
    w.write_record(["theta", "x", "y"]).map_err(csv_err)?;
    for (t, p) in curve.thetas().iter().zip(curve.points()) {
        w.write_record([t.to_string(), p.x.to_string(), p.y.to_string()])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_curve_csv_file(curve: &DiscreteCurve, path: impl AsRef<Path>) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_curve_csv(curve, std::io::BufWriter::new(f))
}

/// Reads a curve, rejecting any θ column that is not the uniform grid
/// `2πj/N` ascending from 0.
pub fn read_curve_csv<R: Read>(input: R) -> Result<DiscreteCurve> {
    let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let csv_err = |e: csv::Error| Error::Csv(e.to_string());
    let headers = r.headers().map_err(csv_err)?.clone();
    if headers.iter().collect::<Vec<_>>() != ["theta", "x", "y"] {
        return Err(Error::Csv(format!("expected header theta,x,y, got {:?}", headers)));
    }
    let mut thetas = Vec::new();
    let mut points = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let field = |i: usize| -> Result<f64> {
            rec.get(i)
                .ok_or_else(|| Error::Csv(format!("row {}: missing column {i}", line + 1)))?
                .parse::<f64>()
                .map_err(|e| Error::Csv(format!("row {}: {e}", line + 1)))
        };
        thetas.push(field(0)?);
        points.push(Vec2::new(field(1)?, field(2)?));
    }
    let n = thetas.len();
    for (j, t) in thetas.iter().enumerate() {
        let expected = TAU * j as f64 / n as f64;
        if (t - expected).abs() > GRID_TOL * TAU {
            return Err(Error::Csv(format!(
                "theta grid is not uniform: row {} has {t}, expected {expected}",
                j + 1
            )));
        }
    }
    DiscreteCurve::new(points)
}

pub fn read_curve_csv_file(path: impl AsRef<Path>) -> Result<DiscreteCurve> {
    read_curve_csv(std::fs::File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvegeo::{Reparam, Shape};

    #[test]
    fn round_trip_is_exact() {
        let c = Shape::Ellipse { a: 2.0, b: 1.0 }.sample(16, &Reparam::Identity).unwrap();
        let mut buf = Vec::new();
        write_curve_csv(&c, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("theta,x,y\n"));
        assert!(text.ends_with('\n'));
        assert_eq!(read_curve_csv(&buf[..]).unwrap(), c);
    }

    #[test]
    fn rejects_nonuniform_grid() {
        let mut text = String::from("theta,x,y\n");
        for j in 0..8 {
            let t = TAU * j as f64 / 8.0 + if j == 3 { 1e-6 } else { 0.0 };
            text.push_str(&format!("{t},{},{}\n", t.cos(), t.sin()));
        }
        assert!(matches!(read_curve_csv(text.as_bytes()), Err(Error::Csv(_))));
    }

    #[test]
    fn rejects_wrong_header() {
        assert!(read_curve_csv("t,x,y\n0,1,0\n".as_bytes()).is_err());
    }
}
