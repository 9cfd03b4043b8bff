//! Wavefront OBJ subset: `v x y z` and triangular `f` records. Comments and
//! blank lines are skipped; `f` indices may carry `/vt/vn` suffixes, which
//! are ignored.

use thiserror::Error;

use crate::geometry::{Triangle, Vec3};

#[derive(Debug, Error, PartialEq)]
#[error("line {line}: {message}")]
pub struct ObjError {
    pub line: usize,
    pub message: String,
}

pub fn parse_obj(text: &str) -> Result<Vec<Triangle>, ObjError> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let err = |message: String| ObjError { line: line_no, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("v") => {
                let coords: Vec<f64> = fields
                    .map(|f| f.parse::<f64>().map_err(|e| err(format!("bad coordinate `{f}`: {e}"))))
                    .collect::<Result<_, _>>()?;
                // an optional fourth `w` component is allowed and ignored
                if !(3..=4).contains(&coords.len()) {
                    return Err(err(format!("vertex needs 3 coordinates, found {}", coords.len())));
                }
                vertices.push(Vec3::new(coords[0], coords[1], coords[2]));
            }
            Some("f") => {
                let idx: Vec<usize> = fields
                    .map(|f| {
                        let first = f.split('/').next().unwrap_or("");
                        first
                            .parse::<usize>()
                            .ok()
                            .filter(|&n| n >= 1)
                            .ok_or_else(|| err(format!("bad face index `{f}`")))
                    })
                    .collect::<Result<_, _>>()?;
                if idx.len() != 3 {
                    return Err(err(format!(
                        "only triangular faces are supported, found {} vertices",
                        idx.len()
                    )));
                }
                faces.push((line_no, [idx[0], idx[1], idx[2]]));
            }
            Some(other) => return Err(err(format!("unsupported record `{other}`"))),
            None => unreachable!(),
        }
    }

    faces
        .into_iter()
        .map(|(line, [a, b, c])| {
            let get = |n: usize| {
                vertices.get(n - 1).copied().ok_or_else(|| ObjError {
                    line,
                    message: format!("vertex index {n} out of range ({} vertices)", vertices.len()),
                })
            };
            Ok(Triangle::new(get(a)?, get(b)?, get(c)?))
        })
        .collect()
}
