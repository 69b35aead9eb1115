//! ASCII OFF reading and writing. Three-dimensional meshes use the plain
//! `OFF` header; other dimensions use `nOFF` followed by the dimension.
//! Vertex marks live in a sidecar JSON object `{vertex_index: tag}` stored
//! next to the mesh as `<file>.marks.json`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{Mesh, MeshError};
use crate::scalar::Real;

fn off_err(line: usize, message: impl Into<String>) -> MeshError {
    MeshError::Off { line, message: message.into() }
}

/// Path of the marks sidecar for a mesh file.
pub fn marks_path(mesh_path: &Path) -> PathBuf {
    let mut name = mesh_path.as_os_str().to_owned();
    name.push(".marks.json");
    PathBuf::from(name)
}

impl<T: Real> Mesh<T> {
    pub fn to_off(&self) -> String {
        let mut out = String::new();
        if self.dim == 3 {
            out.push_str("OFF\n");
        } else {
            let _ = writeln!(out, "nOFF\n{}", self.dim);
        }
        let _ = writeln!(out, "{} {} 0", self.vertex_count(), self.triangles.len());
        for v in self.vertices() {
            let line: Vec<String> = v.iter().map(|x| format!("{:e}", x.to_f64_lossy())).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        for [a, b, c] in &self.triangles {
            let _ = writeln!(out, "3 {a} {b} {c}");
        }
        out
    }

    pub fn from_off(text: &str) -> Result<Self, MeshError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (n, header) = lines.next().ok_or_else(|| off_err(1, "empty file"))?;
        let dim = match header {
            "OFF" => 3,
            "nOFF" => {
                let (n, l) = lines.next().ok_or_else(|| off_err(n, "missing dimension"))?;
                l.parse::<usize>().map_err(|_| off_err(n, "bad dimension"))?
            }
            _ => return Err(off_err(n, "expected OFF or nOFF header")),
        };
        let (n, counts) = lines.next().ok_or_else(|| off_err(n, "missing counts"))?;
        let counts: Vec<usize> = counts
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| off_err(n, "bad count")))
            .collect::<Result<_, _>>()?;
        if counts.len() < 2 {
            return Err(off_err(n, "expected vertex and face counts"));
        }
        let mut coords = Vec::with_capacity(counts[0] * dim);
        for _ in 0..counts[0] {
            let (n, l) = lines.next().ok_or_else(|| off_err(n, "unexpected end of vertices"))?;
            let vals: Vec<f64> = l
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| off_err(n, format!("bad coordinate '{s}'"))))
                .collect::<Result<_, _>>()?;
            if vals.len() != dim {
                return Err(off_err(n, format!("expected {dim} coordinates")));
            }
            coords.extend(vals.into_iter().map(T::lit));
        }
        let mut triangles = Vec::with_capacity(counts[1]);
        for _ in 0..counts[1] {
            let (n, l) = lines.next().ok_or_else(|| off_err(n, "unexpected end of faces"))?;
            let vals: Vec<u32> = l
                .split_whitespace()
                .map(|s| s.parse().map_err(|_| off_err(n, format!("bad index '{s}'"))))
                .collect::<Result<_, _>>()?;
            if vals.len() < 4 || vals[0] != 3 {
                return Err(off_err(n, "only triangular faces are supported"));
            }
            triangles.push([vals[1], vals[2], vals[3]]);
        }
        Mesh::new(dim, coords, triangles)
    }

    pub fn marks_to_json(&self) -> String {
        let map: BTreeMap<String, &String> = self.marks.iter().map(|(k, v)| (k.to_string(), v)).collect();
        serde_json::to_string_pretty(&map).expect("string map serializes")
    }

    pub fn marks_from_json(&self, text: &str) -> Result<BTreeMap<usize, String>, MeshError> {
        let raw: BTreeMap<String, String> =
            serde_json::from_str(text).map_err(|e| MeshError::Marks(e.to_string()))?;
        raw.into_iter()
            .map(|(k, v)| {
                k.parse::<usize>()
                    .map(|k| (k, v))
                    .map_err(|_| MeshError::Marks(format!("bad vertex index '{k}'")))
            })
            .collect()
    }

    /// Write the mesh, and the marks sidecar when there are marks.
    pub fn write_off(&self, path: &Path) -> Result<(), MeshError> {
        std::fs::write(path, self.to_off()).map_err(|e| MeshError::Io(format!("{}: {e}", path.display())))?;
        if !self.marks.is_empty() {
            let side = marks_path(path);
            std::fs::write(&side, self.marks_to_json())
                .map_err(|e| MeshError::Io(format!("{}: {e}", side.display())))?;
        }
        Ok(())
    }

    /// Read a mesh and, if present, its marks sidecar.
    pub fn read_off(path: &Path) -> Result<Self, MeshError> {
        let text = std::fs::read_to_string(path).map_err(|e| MeshError::Io(format!("{}: {e}", path.display())))?;
        let mesh = Self::from_off(&text)?;
        let side = marks_path(path);
        match std::fs::read_to_string(&side) {
            Ok(t) => {
                let marks = mesh.marks_from_json(&t)?;
                mesh.with_marks(marks)
            }
            Err(_) => Ok(mesh),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_3d_and_nd() {
        let mut m = Mesh::<f64>::from_points(
            &[vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.5], vec![0.0, 1.0, 1e-7]],
            vec![[0, 1, 2]],
        )
        .unwrap();
        m.set_mark(1, "end:0");
        let back = Mesh::<f64>::from_off(&m.to_off()).unwrap();
        assert_eq!(back.triangles(), m.triangles());
        assert_eq!(back.vertex(2), m.vertex(2));
        let marks = back.marks_from_json(&m.marks_to_json()).unwrap();
        assert_eq!(marks.get(&1).map(String::as_str), Some("end:0"));

        let flat = Mesh::<f64>::from_points(&[vec![0.0; 5], vec![1.0; 5], vec![2.0; 5]], vec![[0, 2, 1]]).unwrap();
        let text = flat.to_off();
        assert!(text.starts_with("nOFF\n5\n"));
        assert_eq!(Mesh::<f64>::from_off(&text).unwrap(), flat);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = Mesh::<f64>::from_off("OFF\n3 1 0\n0 0 0\n1 0\n0 1 0\n3 0 1 2\n").unwrap_err();
        assert_eq!(e, MeshError::Off { line: 4, message: "expected 3 coordinates".into() });
        let e = Mesh::<f64>::from_off("PLY\n").unwrap_err();
        assert!(matches!(e, MeshError::Off { line: 1, .. }));
        let e = Mesh::<f64>::from_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2 0\n").unwrap_err();
        assert!(matches!(e, MeshError::Off { line: 6, .. }));
    }
}
