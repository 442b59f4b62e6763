//! Plain-text exchange of sampled data.
//!
//! `GridFn`: header `x,value` or `x,value,derivative`.
//! `GridField`: header `x,t,value`, rows ordered by time level then by `x`.
//! Numbers are written with 17 significant digits.

use std::fmt::Write as _;

use super::{Grid, GridField, GridFn};
use crate::error::{Error, Result};

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_grid_fn(f: &GridFn) -> String {
    let mut out = String::new();
    match &f.deriv {
        Some(d) => {
            out.push_str("x,value,derivative\n");
            for (i, (v, dv)) in f.values.iter().zip(d).enumerate() {
                let _ = writeln!(out, "{},{},{}", num(f.grid.x(i)), num(*v), num(*dv));
            }
        }
        None => {
            out.push_str("x,value\n");
            for i in 0..f.len() {
                let _ = writeln!(out, "{},{}", num(f.grid.x(i)), num(f.values[i]));
            }
        }
    }
    out
}

pub fn write_grid_field(f: &GridField) -> String {
    let mut out = String::from("x,t,value\n");
    for k in 0..f.nt() {
        for i in 0..f.nx() {
            let _ = writeln!(out, "{},{},{}", num(f.xgrid.x(i)), num(f.tgrid.x(k)), num(f.at(i, k)));
        }
    }
    out
}

fn parse_rows(text: &str, expect: &[&[&str]]) -> Result<(usize, Vec<Vec<f64>>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header: Vec<String> = lines
        .next()
        .ok_or_else(|| Error::Io("empty CSV".into()))?
        .split(',')
        .map(|s| s.trim().to_ascii_lowercase())
        .collect();
    let width = expect
        .iter()
        .find(|h| h.len() == header.len() && h.iter().zip(&header).all(|(a, b)| a == b))
        .map(|h| h.len())
        .ok_or_else(|| Error::Io(format!("unexpected CSV header {:?}", header.join(","))))?;
    let mut rows = Vec::new();
    for (ln, line) in lines.enumerate() {
        let vals: std::result::Result<Vec<f64>, _> = line.split(',').map(|s| s.trim().parse::<f64>()).collect();
        let vals = vals.map_err(|e| Error::Io(format!("CSV line {}: {e}", ln + 2)))?;
        if vals.len() != width {
            return Err(Error::Io(format!("CSV line {}: expected {width} columns", ln + 2)));
        }
        rows.push(vals);
    }
    Ok((width, rows))
}

fn uniform_grid(xs: &[f64]) -> Result<Grid> {
    let n = xs.len();
    let g = Grid::new(xs[0], xs[n - 1], n)?;
    let tol = 1e-9 * (g.b() - g.a()).max(1.0);
    for (i, &x) in xs.iter().enumerate() {
        if (x - g.x(i)).abs() > tol {
            return Err(Error::Grid(format!("non-uniform abscissa at row {i}")));
        }
    }
    Ok(g)
}

pub fn read_grid_fn(text: &str) -> Result<GridFn> {
    let (width, rows) = parse_rows(text, &[&["x", "value"], &["x", "value", "derivative"]])?;
    if rows.len() < 5 {
        return Err(Error::Grid(format!("need at least 5 rows, got {}", rows.len())));
    }
    let xs: Vec<f64> = rows.iter().map(|r| r[0]).collect();
    let grid = uniform_grid(&xs)?;
    let f = GridFn::new(grid, rows.iter().map(|r| r[1]).collect())?;
    if width == 3 {
        f.with_deriv(rows.iter().map(|r| r[2]).collect())
    } else {
        Ok(f)
    }
}

pub fn read_grid_field(text: &str) -> Result<GridField> {
    let (_, rows) = parse_rows(text, &[&["x", "t", "value"]])?;
    let Some(t0) = rows.first().map(|r| r[1]) else {
        return Err(Error::Io("empty field".into()));
    };
    let nx = rows.iter().take_while(|r| r[1] == t0).count();
    if nx == 0 || rows.len() % nx != 0 {
        return Err(Error::Dimension("rows do not form a rectangular field".into()));
    }
    let nt = rows.len() / nx;
    let xs: Vec<f64> = rows[..nx].iter().map(|r| r[0]).collect();
    let ts: Vec<f64> = (0..nt).map(|k| rows[k * nx][1]).collect();
    let xgrid = uniform_grid(&xs)?;
    let tgrid = uniform_grid(&ts)?;
    for (j, r) in rows.iter().enumerate() {
        if r[0] != xs[j % nx] || r[1] != ts[j / nx] {
            return Err(Error::Dimension(format!("row {} out of order", j + 2)));
        }
    }
    GridField::new(xgrid, tgrid, rows.iter().map(|r| r[2]).collect())
}
