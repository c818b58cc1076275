use std::fmt::Write as _;

use crate::complex::WeightedComplex;
use crate::error::{Error, Result};

/// Vertex coordinates and faces read from an OFF or nOFF file.
#[derive(Debug, Clone, PartialEq)]
pub struct OffMesh {
    pub coords: Vec<Vec<f64>>,
    pub faces: Vec<Vec<usize>>,
}

impl OffMesh {
    /// Complex generated by the faces, weighted by the vertex coordinates.
    pub fn complex(&self) -> Result<WeightedComplex> {
        WeightedComplex::builder(self.coords.len()).simplices(self.faces.iter()).coords(self.coords.clone()).build()
    }

    pub fn dimension(&self) -> usize {
        self.coords.first().map_or(3, Vec::len)
    }
}

fn at(line: usize, message: impl Into<String>) -> Error {
    Error::ParseAt { line, message: message.into() }
}

/// Parses OFF (3D) and nOFF (dimension on the line after the header).
///
/// `#` starts a comment; blank lines are skipped. The edge count is ignored.
pub fn parse_off(text: &str) -> Result<OffMesh> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line, header) = lines.next().ok_or_else(|| at(1, "empty file"))?;
    let mut tokens: Vec<&str> = header.split_whitespace().collect();
    let dim = match tokens[0] {
        "OFF" => 3,
        "nOFF" => {
            let (line, rest) = if tokens.len() > 1 {
                (line, tokens[1].to_string())
            } else {
                let (l, t) = lines.next().ok_or_else(|| at(line, "missing dimension after nOFF"))?;
                (l, t.to_string())
            };
            rest.parse::<usize>().map_err(|_| at(line, format!("bad dimension {rest:?}")))?
        }
        other => return Err(at(line, format!("expected OFF or nOFF header, found {other:?}"))),
    };
    let counts: Vec<usize> = if tokens[0] == "OFF" && tokens.len() > 1 {
        tokens.drain(1..).map(|t| t.parse().map_err(|_| at(line, format!("bad count {t:?}")))).collect::<Result<_>>()?
    } else {
        let (l, t) = lines.next().ok_or_else(|| at(line, "missing vertex and face counts"))?;
        t.split_whitespace().map(|x| x.parse().map_err(|_| at(l, format!("bad count {x:?}")))).collect::<Result<_>>()?
    };
    if counts.len() < 2 {
        return Err(at(line, "expected vertex and face counts"));
    }
    let (nv, nf) = (counts[0], counts[1]);
    let mut coords = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (l, t) = lines.next().ok_or_else(|| at(line, format!("expected {nv} vertices, found {}", coords.len())))?;
        let xs: Vec<f64> =
            t.split_whitespace().map(|x| x.parse().map_err(|_| at(l, format!("bad coordinate {x:?}")))).collect::<Result<_>>()?;
        if xs.len() < dim {
            return Err(at(l, format!("expected {dim} coordinates, found {}", xs.len())));
        }
        coords.push(xs[..dim].to_vec());
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (l, t) = lines.next().ok_or_else(|| at(line, format!("expected {nf} faces, found {}", faces.len())))?;
        let xs: Vec<usize> =
            t.split_whitespace().map(|x| x.parse().map_err(|_| at(l, format!("bad index {x:?}")))).collect::<Result<_>>()?;
        let k = *xs.first().ok_or_else(|| at(l, "empty face"))?;
        if xs.len() < k + 1 || k == 0 {
            return Err(at(l, format!("face lists {} of {k} vertices", xs.len().saturating_sub(1))));
        }
        if let Some(&v) = xs[1..=k].iter().find(|&&v| v >= nv) {
            return Err(at(l, format!("vertex {v} out of range")));
        }
        faces.push(xs[1..=k].to_vec());
    }
    if let Some((l, _)) = lines.next() {
        return Err(at(l, "unexpected trailing data"));
    }
    Ok(OffMesh { coords, faces })
}

/// Writes OFF when the coordinates are 3D and nOFF otherwise.
pub fn write_off(mesh: &OffMesh) -> String {
    let mut s = String::new();
    let dim = mesh.dimension();
    if dim == 3 {
        s.push_str("OFF\n");
    } else {
        let _ = writeln!(s, "nOFF\n{dim}");
    }
    let _ = writeln!(s, "{} {} 0", mesh.coords.len(), mesh.faces.len());
    for c in &mesh.coords {
        let row: Vec<String> = c.iter().map(|x| format!("{x:?}")).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    for f in &mesh.faces {
        let row: Vec<String> = f.iter().map(usize::to_string).collect();
        let _ = writeln!(s, "{} {}", f.len(), row.join(" "));
    }
    s
}
