//! Minimal ASCII tetrahedral mesh format.
//!
//! ```text
//! tetmesh 1
//! <nv> <nt> <nmarks>
//! x y z                      (nv lines)
//! v1 v2 v3 v4                (nt lines, 1-based)
//! mark <name> <count>        (nmarks blocks)
//! v                          (vertex marker: one id per line)
//! a b c                      (face marker: three ids per line)
//! ```
//!
//! Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nalgebra::Vector3;

use super::{Marker, SimplicialMesh};
use crate::{Error, Result};

struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    path: PathBuf,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next_line(&mut self, what: &str) -> Result<(usize, &'a str)> {
        for (i, line) in self.inner.by_ref() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            self.last = i + 1;
            return Ok((i + 1, line));
        }
        Err(self.error(self.last + 1, format!("unexpected end of file, expected {what}")))
    }

    fn error(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.clone(),
            line,
            message: message.into(),
        }
    }

    fn numbers<T: std::str::FromStr>(&self, line_no: usize, line: &str, n: usize) -> Result<Vec<T>> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != n {
            return Err(self.error(line_no, format!("expected {n} fields, found {}", fields.len())));
        }
        fields
            .iter()
            .map(|f| {
                f.parse::<T>()
                    .map_err(|_| self.error(line_no, format!("cannot parse `{f}`")))
            })
            .collect()
    }
}

pub fn parse_mesh(text: &str, path: impl Into<PathBuf>) -> Result<SimplicialMesh> {
    let mut lines = Lines {
        inner: text.lines().enumerate().peekable(),
        path: path.into(),
        last: 0,
    };
    let (no, header) = lines.next_line("header")?;
    if header.split_whitespace().collect::<Vec<_>>() != ["tetmesh", "1"] {
        return Err(lines.error(no, "expected header `tetmesh 1`"));
    }
    let (no, counts) = lines.next_line("counts")?;
    let counts: Vec<usize> = lines.numbers(no, counts, 3)?;
    let (nv, nt, nmarks) = (counts[0], counts[1], counts[2]);

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (no, line) = lines.next_line("vertex coordinates")?;
        let c: Vec<f64> = lines.numbers(no, line, 3)?;
        vertices.push(Vector3::new(c[0], c[1], c[2]));
    }

    let mut tets = Vec::with_capacity(nt);
    let mut tet_lines = Vec::with_capacity(nt);
    for _ in 0..nt {
        let (no, line) = lines.next_line("element connectivity")?;
        let ids: Vec<usize> = lines.numbers(no, line, 4)?;
        let mut tet = [0usize; 4];
        for (k, &id) in ids.iter().enumerate() {
            if id == 0 || id > nv {
                return Err(lines.error(no, format!("vertex index {id} out of range 1..={nv}")));
            }
            tet[k] = id - 1;
        }
        tets.push(tet);
        tet_lines.push(no);
    }

    let mut markers = Vec::with_capacity(nmarks);
    for _ in 0..nmarks {
        let (no, line) = lines.next_line("marker block")?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "mark" {
            return Err(lines.error(no, "expected `mark <name> <count>`"));
        }
        let name = fields[1].to_string();
        let count: usize = fields[2]
            .parse()
            .map_err(|_| lines.error(no, format!("cannot parse count `{}`", fields[2])))?;
        let mut verts = Vec::new();
        let mut faces = Vec::new();
        for _ in 0..count {
            let (no, line) = lines.next_line("marker entry")?;
            let n = line.split_whitespace().count();
            let ids: Vec<usize> = match n {
                1 | 3 => lines.numbers(no, line, n)?,
                _ => return Err(lines.error(no, "marker entries hold 1 vertex id or 3 face ids")),
            };
            if let Some(bad) = ids.iter().find(|&&id| id == 0 || id > nv) {
                return Err(lines.error(no, format!("vertex index {bad} out of range 1..={nv}")));
            }
            if n == 1 {
                verts.push(ids[0] - 1);
            } else {
                faces.push([ids[0] - 1, ids[1] - 1, ids[2] - 1]);
            }
            if !verts.is_empty() && !faces.is_empty() {
                return Err(lines.error(no, format!("marker `{name}` mixes vertex and face entries")));
            }
        }
        let marker = if faces.is_empty() {
            Marker::Vertices(verts)
        } else {
            Marker::Faces(faces)
        };
        markers.push((name, marker));
    }

    let mut mesh = SimplicialMesh::new(vertices, tets).map_err(|e| match e {
        Error::DegenerateElement { element, volume } => lines.error(
            tet_lines[element],
            format!("element {} has non-positive volume {volume:e}", element + 1),
        ),
        other => other,
    })?;
    for (name, marker) in markers {
        if let Marker::Faces(faces) = &marker {
            if let Some(f) = faces.iter().find(|f| !mesh.is_boundary_face(f)) {
                return Err(Error::Mesh(format!(
                    "marker `{name}`: face {:?} is not a boundary face",
                    f.map(|v| v + 1)
                )));
            }
        }
        mesh.set_marker(name, marker);
    }
    Ok(mesh)
}

pub fn load_mesh(path: impl AsRef<Path>) -> Result<SimplicialMesh> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_mesh(&text, path)
}

pub fn write_mesh(mesh: &SimplicialMesh) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "tetmesh 1");
    let _ = writeln!(
        out,
        "{} {} {}",
        mesh.num_vertices(),
        mesh.num_tets(),
        mesh.markers().len()
    );
    for v in mesh.vertices() {
        let _ = writeln!(out, "{:.17e} {:.17e} {:.17e}", v.x, v.y, v.z);
    }
    for t in mesh.tets() {
        let _ = writeln!(out, "{} {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1, t[3] + 1);
    }
    for (name, marker) in mesh.markers() {
        match marker {
            Marker::Vertices(v) => {
                let _ = writeln!(out, "mark {name} {}", v.len());
                for id in v {
                    let _ = writeln!(out, "{}", id + 1);
                }
            }
            Marker::Faces(f) => {
                let _ = writeln!(out, "mark {name} {}", f.len());
                for [a, b, c] in f {
                    let _ = writeln!(out, "{} {} {}", a + 1, b + 1, c + 1);
                }
            }
        }
    }
    out
}

pub fn save_mesh(mesh: &SimplicialMesh, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, write_mesh(mesh))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_TETS: &str = "tetmesh 1
5 2 1
0 0 0
1 0 0
0 1 0
0 0 1
1 1 1
1 2 3 4
2 3 4 5
mark top 1
5
";

    #[test]
    fn parses_two_tets() {
        let mesh = parse_mesh(TWO_TETS, "two.mesh").unwrap();
        assert_eq!(mesh.num_vertices(), 5);
        assert_eq!(mesh.num_tets(), 2);
        assert_eq!(mesh.marker("top"), Some(&Marker::Vertices(vec![4])));
    }

    #[test]
    fn bad_header_names_line() {
        let err = parse_mesh("tetmesh 2\n", "x.mesh").unwrap_err();
        assert!(err.to_string().contains("x.mesh:1"), "{err}");
    }

    #[test]
    fn bad_coordinate_names_line() {
        let text = TWO_TETS.replace("0 1 0", "0 one 0");
        let err = parse_mesh(&text, "x.mesh").unwrap_err();
        assert!(err.to_string().contains("x.mesh:5"), "{err}");
    }

    #[test]
    fn dangling_index_names_line() {
        let text = TWO_TETS.replace("2 3 4 5", "2 3 4 6");
        let err = parse_mesh(&text, "x.mesh").unwrap_err();
        assert!(err.to_string().contains("x.mesh:9"), "{err}");
    }

    #[test]
    fn inverted_element_names_line() {
        let text = TWO_TETS.replace("2 3 4 5", "3 2 4 5");
        let err = parse_mesh(&text, "x.mesh").unwrap_err();
        assert!(err.to_string().contains("x.mesh:9"), "{err}");
        assert!(err.to_string().contains("element 2"), "{err}");
    }

    #[test]
    fn round_trips_through_text() {
        let mesh = parse_mesh(TWO_TETS, "two.mesh").unwrap();
        let again = parse_mesh(&write_mesh(&mesh), "again.mesh").unwrap();
        assert_eq!(again.tets(), mesh.tets());
        assert_eq!(again.vertices(), mesh.vertices());
        assert_eq!(again.markers(), mesh.markers());
    }
}
