//! File writers: atomic writes, PGM images, and CSV rasters.
//!
//! All float text goes through [`wavepacket_core::fmt_g17`] (17 significant
//! digits), so identical configs produce byte-identical files.

use std::io::Write;
use std::path::Path;

use wavepacket_core::{fmt_g17, RealGridFunction};

use crate::CliError;

/// Write via a temporary file and rename, so partial runs never leave a
/// corrupt file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("part")
    ));
    let io_err = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
    {
        let mut f = std::fs::File::create(&tmp).map_err(io_err)?;
        f.write_all(bytes).map_err(io_err)?;
        f.sync_all().map_err(io_err)?;
    }
    std::fs::rename(&tmp, path).map_err(io_err)
}

/// Binary PGM (P5, maxval 255) of a non-negative field, max-normalized per
/// frame. Columns run left to right with x, rows top to bottom with
/// *decreasing* y, so the image is in the usual plot orientation.
pub fn pgm_bytes(field: &RealGridFunction) -> Vec<u8> {
    let g = &field.grid;
    let peak = field.values.iter().cloned().fold(0.0f64, f64::max);
    let mut out = format!("P5\n{} {}\n255\n", g.nx(), g.ny()).into_bytes();
    out.reserve(g.nx() * g.ny());
    for row in 0..g.ny() {
        let j = g.ny() - 1 - row;
        for i in 0..g.nx() {
            let v = if peak > 0.0 {
                (255.0 * field.values[[i, j]] / peak).round() as u8
            } else {
                0
            };
            out.push(v);
        }
    }
    out
}

/// Wide CSV raster of a grid function: leading comment lines, then a header
/// row of x coordinates and one row per y (ascending).
pub fn grid_csv(field: &RealGridFunction, comments: &[String]) -> String {
    let g = &field.grid;
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str("y\\x");
    for i in 0..g.nx() {
        out.push(',');
        out.push_str(&fmt_g17(g.x(i)));
    }
    out.push('\n');
    for j in 0..g.ny() {
        out.push_str(&fmt_g17(g.y(j)));
        for i in 0..g.nx() {
            out.push(',');
            out.push_str(&fmt_g17(field.values[[i, j]]));
        }
        out.push('\n');
    }
    out
}

/// Wide CSV raster over (t, x): header row of x coordinates, one row per time.
pub fn section_csv(xs: &[f64], rows: &[(f64, Vec<f64>)], comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        out.push_str("# ");
        out.push_str(c);
        out.push('\n');
    }
    out.push_str("t\\x");
    for x in xs {
        out.push(',');
        out.push_str(&fmt_g17(*x));
    }
    out.push('\n');
    for (t, values) in rows {
        out.push_str(&fmt_g17(*t));
        for v in values {
            out.push(',');
            out.push_str(&fmt_g17(*v));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use wavepacket_core::Grid2D;

    #[test]
    fn pgm_header_and_size() {
        let grid = Grid2D::new(1.0, 32, 16).unwrap();
        let f = RealGridFunction::from_fn(grid, |_, _| 1.0);
        let bytes = pgm_bytes(&f);
        assert!(bytes.starts_with(b"P5\n32 16\n255\n"));
        assert_eq!(bytes.len(), b"P5\n32 16\n255\n".len() + 32 * 16);
        assert!(bytes[13..].iter().all(|&b| b == 255));
    }

    #[test]
    fn pgm_orientation_top_row_is_max_y() {
        let grid = Grid2D::new(1.0, 16, 16).unwrap();
        // Top grid row is y = 1 - dy = 0.875 (the right/top edge is excluded).
        let f = RealGridFunction::from_fn(grid, |_, y| if y > 0.8 { 1.0 } else { 0.0 });
        let bytes = pgm_bytes(&f);
        let header = b"P5\n16 16\n255\n".len();
        assert_eq!(bytes[header], 255, "top-left pixel should be the y=max row");
        assert_eq!(*bytes.last().unwrap(), 0);
    }

    #[test]
    fn grid_csv_shape() {
        let grid = Grid2D::new(1.0, 16, 16).unwrap();
        let f = RealGridFunction::from_fn(grid, |x, y| x + y);
        let csv = grid_csv(&f, &["meta".to_string()]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 1 + 16);
        assert!(lines[0].starts_with("# meta"));
        assert_eq!(lines[1].split(',').count(), 17);
    }
}
