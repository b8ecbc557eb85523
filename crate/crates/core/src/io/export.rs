use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::mesh::{Mesh, MeshMetadata};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeshFormat {
    Obj,
    Ply,
}

impl MeshFormat {
    /// Format from the file extension, defaulting to OBJ.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("ply") => MeshFormat::Ply,
            _ => MeshFormat::Obj,
        }
    }
}

/// Wavefront OBJ with `v`, `vn` and `f v//vn` records; 17 significant digits.
pub fn write_obj<W: Write>(mesh: &Mesh, mut w: W) -> Result<()> {
    writeln!(w, "# {}", mesh.metadata.source.replace('\n', " "))?;
    writeln!(w, "# vertices {} faces {}", mesh.vertices.len(), mesh.faces.len())?;
    for v in &mesh.vertices {
        writeln!(w, "v {:.16e} {:.16e} {:.16e}", v[0], v[1], v[2])?;
    }
    for n in &mesh.normals {
        writeln!(w, "vn {:.16e} {:.16e} {:.16e}", n[0], n[1], n[2])?;
    }
    for f in &mesh.faces {
        let (a, b, c) = (f[0] + 1, f[1] + 1, f[2] + 1);
        writeln!(w, "f {a}//{a} {b}//{b} {c}//{c}")?;
    }
    w.flush()?;
    Ok(())
}

fn parse_f64(tok: Option<&str>, line: usize) -> Result<f64> {
    tok.ok_or_else(|| Error::Parse(format!("line {line}: missing coordinate")))?
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("line {line}: {e}")))
}

fn parse_index(tok: &str, count: usize, line: usize) -> Result<u32> {
    let first = tok.split('/').next().unwrap_or("");
    let i: i64 = first
        .parse()
        .map_err(|e| Error::Parse(format!("line {line}: bad face index {tok:?}: {e}")))?;
    let resolved = if i < 0 { count as i64 + i } else { i - 1 };
    if resolved < 0 || resolved >= count as i64 {
        return Err(Error::Parse(format!("line {line}: face index {i} out of range")));
    }
    Ok(resolved as u32)
}

/// Reads the subset of OBJ written by [`write_obj`] (triangles, `v`, `vn`).
pub fn read_obj<R: Read>(r: R) -> Result<Mesh> {
    let mut vertices = Vec::new();
    let mut normals = Vec::new();
    let mut faces = Vec::new();
    let mut source = String::new();
    for (k, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let n = k + 1;
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("v") => vertices.push([
                parse_f64(toks.next(), n)?,
                parse_f64(toks.next(), n)?,
                parse_f64(toks.next(), n)?,
            ]),
            Some("vn") => normals.push([
                parse_f64(toks.next(), n)?,
                parse_f64(toks.next(), n)?,
                parse_f64(toks.next(), n)?,
            ]),
            Some("f") => {
                let idx: Vec<&str> = toks.collect();
                if idx.len() != 3 {
                    return Err(Error::Parse(format!("line {n}: only triangles are supported")));
                }
                faces.push([
                    parse_index(idx[0], vertices.len(), n)?,
                    parse_index(idx[1], vertices.len(), n)?,
                    parse_index(idx[2], vertices.len(), n)?,
                ]);
            }
            Some("#") if source.is_empty() => source = toks.collect::<Vec<_>>().join(" "),
            _ => {}
        }
    }
    Ok(Mesh {
        vertices,
        normals,
        faces,
        metadata: MeshMetadata {
            source,
            data: None,
            sampling: None,
        },
    })
}

/// Binary little-endian PLY with double-precision positions and normals.
pub fn write_ply<W: Write>(mesh: &Mesh, mut w: W) -> Result<()> {
    write!(
        w,
        "ply\nformat binary_little_endian 1.0\ncomment {}\nelement vertex {}\n\
         property double x\nproperty double y\nproperty double z\n\
         property double nx\nproperty double ny\nproperty double nz\n\
         element face {}\nproperty list uchar uint vertex_indices\nend_header\n",
        mesh.metadata.source.replace('\n', " "),
        mesh.vertices.len(),
        mesh.faces.len()
    )?;
    for (v, n) in mesh.vertices.iter().zip(&mesh.normals) {
        for x in v.iter().chain(n) {
            w.write_all(&x.to_le_bytes())?;
        }
    }
    for f in &mesh.faces {
        w.write_all(&[3u8])?;
        for i in f {
            w.write_all(&i.to_le_bytes())?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads the PLY layout written by [`write_ply`].
pub fn read_ply<R: Read>(r: R) -> Result<Mesh> {
    let mut reader = BufReader::new(r);
    let mut n_vertices = None;
    let mut n_faces = None;
    let mut source = String::new();
    loop {
        let mut line = String::new();
        if reader.read_line(&mut line)? == 0 {
            return Err(Error::Parse("PLY header is not terminated".into()));
        }
        let line = line.trim_end();
        if line == "end_header" {
            break;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["format", fmt, ..] if *fmt != "binary_little_endian" => {
                return Err(Error::Parse(format!("unsupported PLY format {fmt}")))
            }
            ["element", "vertex", n] => n_vertices = n.parse::<usize>().ok(),
            ["element", "face", n] => n_faces = n.parse::<usize>().ok(),
            ["comment", rest @ ..] => source = rest.join(" "),
            _ => {}
        }
    }
    let (nv, nf) = n_vertices
        .zip(n_faces)
        .ok_or_else(|| Error::Parse("PLY header lacks element counts".into()))?;
    let mut buf8 = [0u8; 8];
    let mut buf4 = [0u8; 4];
    let mut vertices = Vec::with_capacity(nv);
    let mut normals = Vec::with_capacity(nv);
    for _ in 0..nv {
        let mut vals = [0.0; 6];
        for v in &mut vals {
            reader.read_exact(&mut buf8)?;
            *v = f64::from_le_bytes(buf8);
        }
        vertices.push([vals[0], vals[1], vals[2]]);
        normals.push([vals[3], vals[4], vals[5]]);
    }
    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let mut count = [0u8; 1];
        reader.read_exact(&mut count)?;
        if count[0] != 3 {
            return Err(Error::Parse("only triangular PLY faces are supported".into()));
        }
        let mut f = [0u32; 3];
        for i in &mut f {
            reader.read_exact(&mut buf4)?;
            *i = u32::from_le_bytes(buf4);
        }
        faces.push(f);
    }
    Ok(Mesh {
        vertices,
        normals,
        faces,
        metadata: MeshMetadata {
            source,
            data: None,
            sampling: None,
        },
    })
}

pub fn save_mesh(mesh: &Mesh, path: &Path, format: MeshFormat) -> Result<()> {
    let w = BufWriter::new(File::create(path)?);
    match format {
        MeshFormat::Obj => write_obj(mesh, w),
        MeshFormat::Ply => write_ply(mesh, w),
    }
}

pub fn load_mesh(path: &Path) -> Result<Mesh> {
    let f = File::open(path)?;
    match MeshFormat::from_path(path) {
        MeshFormat::Obj => read_obj(f),
        MeshFormat::Ply => read_ply(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Mesh {
        Mesh {
            vertices: vec![[0.1, -2.0 / 3.0, 1e-300], [1.0, 2.0, 3.0], [f64::MIN_POSITIVE, 0.0, -0.0]],
            normals: vec![[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            faces: vec![[0, 1, 2]],
            metadata: MeshMetadata {
                source: "sample".into(),
                data: None,
                sampling: None,
            },
        }
    }

    #[test]
    fn obj_round_trip_is_exact() {
        let mesh = sample();
        let mut buf = Vec::new();
        write_obj(&mesh, &mut buf).unwrap();
        let back = read_obj(buf.as_slice()).unwrap();
        assert_eq!(back.vertices.len(), 3);
        for (a, b) in mesh.vertices.iter().zip(&back.vertices) {
            for k in 0..3 {
                assert_eq!(a[k].to_bits(), b[k].to_bits());
            }
        }
        assert_eq!(back.faces, mesh.faces);
        assert_eq!(back.metadata.source, "sample");
    }

    #[test]
    fn ply_round_trip_is_exact() {
        let mesh = sample();
        let mut buf = Vec::new();
        write_ply(&mesh, &mut buf).unwrap();
        let back = read_ply(buf.as_slice()).unwrap();
        assert_eq!(back.vertices, mesh.vertices);
        assert_eq!(back.normals, mesh.normals);
        assert_eq!(back.faces, mesh.faces);
    }

    #[test]
    fn obj_errors_have_line_numbers() {
        let err = read_obj("v 1 2 3\nv 1 x 3\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
        let err = read_obj("v 1 2 3\nf 1 2 3\n".as_bytes()).unwrap_err();
        assert!(err.to_string().contains("out of range"));
    }
}
