//! Polygon text files.
//!
//! ```text
//! # params {"fugacities":[0.2],...}
//! # knot=3_1 length=24
//! 0 0 0
//! 1 0 0
//! ...
//!
//! # knot=3_1 length=26
//! ...
//! ```

use std::io::{self, Write};

use super::{validate_polygon, ChainParams, LatticePolygon, Point3};
use crate::error::ParseError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonRecord {
    pub knot: String,
    pub polygon: LatticePolygon,
}

impl PolygonRecord {
    pub fn new(knot: impl Into<String>, polygon: LatticePolygon) -> Self {
        Self { knot: knot.into(), polygon }
    }
}

pub fn write_polygons<W: Write>(
    mut w: W,
    records: &[PolygonRecord],
    params: Option<&ChainParams>,
) -> io::Result<()> {
    if let Some(p) = params {
        writeln!(w, "# params {}", serde_json::to_string(p).map_err(io::Error::other)?)?;
    }
    for (k, r) in records.iter().enumerate() {
        if k > 0 {
            writeln!(w)?;
        }
        writeln!(w, "# knot={} length={}", r.knot, r.polygon.length())?;
        for v in r.polygon.vertices() {
            writeln!(w, "{} {} {}", v.x, v.y, v.z)?;
        }
    }
    Ok(())
}

/// Parses every conformation in a polygon file. Conformations without a
/// header get the knot name `?`.
pub fn read_polygons(text: &str) -> Result<Vec<PolygonRecord>, ParseError> {
    let mut out = Vec::new();
    let mut knot: Option<String> = None;
    let mut declared: Option<usize> = None;
    let mut verts: Vec<Point3> = Vec::new();

    let mut flush = |knot: &mut Option<String>,
                     declared: &mut Option<usize>,
                     verts: &mut Vec<Point3>,
                     line: usize|
     -> Result<(), ParseError> {
        if verts.is_empty() {
            return Ok(());
        }
        let polygon = validate_polygon(verts)
            .map_err(|e| ParseError::new(format!("conformation ending at line {line}: {e}")))?;
        if let Some(n) = *declared {
            if n != polygon.length() {
                return Err(ParseError::new(format!(
                    "conformation ending at line {line}: header says length {n}, found {}",
                    polygon.length()
                )));
            }
        }
        out.push(PolygonRecord { knot: knot.take().unwrap_or_else(|| "?".into()), polygon });
        *declared = None;
        verts.clear();
        Ok(())
    };

    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            flush(&mut knot, &mut declared, &mut verts, ln)?;
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if rest.starts_with("knot=") {
                flush(&mut knot, &mut declared, &mut verts, ln)?;
                for field in rest.split_whitespace() {
                    if let Some(v) = field.strip_prefix("knot=") {
                        knot = Some(v.to_string());
                    } else if let Some(v) = field.strip_prefix("length=") {
                        declared = Some(
                            v.parse().map_err(|_| ParseError::new(format!("line {}: bad length", ln + 1)))?,
                        );
                    }
                }
            }
            continue;
        }
        let nums: Result<Vec<i32>, _> = line.split_whitespace().map(str::parse).collect();
        match nums.as_deref() {
            Ok([x, y, z]) => verts.push(Point3::new(*x, *y, *z)),
            _ => return Err(ParseError::new(format!("line {}: expected three integers", ln + 1))),
        }
    }
    flush(&mut knot, &mut declared, &mut verts, text.lines().count())?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let recs = vec![
            PolygonRecord::new("0_1", LatticePolygon::unit_square()),
            PolygonRecord::new("0_1", LatticePolygon::rectangle(2, 3)),
        ];
        let mut buf = Vec::new();
        write_polygons(&mut buf, &recs, Some(&ChainParams::default())).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# params {"));
        assert_eq!(read_polygons(&text).unwrap(), recs);
    }

    #[test]
    fn bad_input() {
        assert!(read_polygons("0 0 0\n2 0 0\n").is_err());
        assert!(read_polygons("# knot=x length=6\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n").is_err());
        assert!(read_polygons("0 0\n").is_err());
    }
}
