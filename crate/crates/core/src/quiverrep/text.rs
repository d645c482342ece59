//! Representation files.
//!
//! ```text
//! quiver a2.quiver
//! dims 1=2 2=3
//! map a 1 0; 0 1; 0 0
//! ```
//!
//! The quiver path is resolved relative to the representation file. Arrows
//! whose matrix has a zero dimension may be omitted or written as `[]`.

use std::fs;
use std::path::{Path, PathBuf};

use super::{RepError, Representation};
use crate::exactlin::{ExactMatrix, Field};
use crate::quiver::{DimVector, Quiver};

/// A parsed representation together with the quiver reference it named.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepFile<K: Field> {
    pub quiver_path: String,
    pub rep: Representation<K>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> RepError {
    RepError::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Parses a representation; `resolve` turns the `quiver` header into a quiver.
pub fn parse_representation<K: Field>(
    field: K,
    text: &str,
    resolve: impl FnOnce(&str) -> Result<Quiver, RepError>,
) -> Result<RepFile<K>, RepError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "empty representation file"))?;
    let quiver_path = header
        .strip_prefix("quiver")
        .filter(|rest| rest.starts_with(char::is_whitespace))
        .map(str::trim)
        .ok_or_else(|| parse_err(hline, 1, "expected `quiver <path>`"))?
        .to_string();
    let quiver = resolve(&quiver_path)?;

    let mut dims: Option<Vec<usize>> = None;
    let mut maps: Vec<Option<ExactMatrix<K>>> = vec![None; quiver.arrows().len()];
    for (lineno, line) in lines {
        let (keyword, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest_col = line.len() - rest.len() + 1;
        match keyword {
            "dims" => {
                if dims.is_some() {
                    return Err(parse_err(lineno, 1, "`dims` given twice"));
                }
                let dv = DimVector::parse(rest)
                    .map_err(|e| parse_err(lineno, rest_col, e.to_string()))?;
                dims = Some(dv.in_order(&quiver)?);
            }
            "map" => {
                let d = dims
                    .as_ref()
                    .ok_or_else(|| parse_err(lineno, 1, "`map` before `dims`"))?;
                let rest = rest.trim_start();
                let (name, body) = rest.split_once(char::is_whitespace).unwrap_or((rest, ""));
                let e = quiver
                    .arrow_index(name)
                    .ok_or_else(|| RepError::UnknownArrow(name.to_string()))?;
                if maps[e].is_some() {
                    return Err(parse_err(
                        lineno,
                        rest_col,
                        format!("map `{name}` given twice"),
                    ));
                }
                let a = &quiver.arrows()[e];
                let (r, c) = (d[a.target], d[a.source]);
                let m = ExactMatrix::parse(field, r, c, body).map_err(|err| {
                    parse_err(
                        lineno,
                        line.len() - body.len() + 1,
                        format!("map `{name}`: {err}"),
                    )
                })?;
                maps[e] = Some(m);
            }
            other => return Err(parse_err(lineno, 1, format!("unknown keyword `{other}`"))),
        }
    }
    let dims = dims.ok_or_else(|| parse_err(hline, 1, "missing `dims` line"))?;
    let maps = quiver
        .arrows()
        .iter()
        .zip(maps)
        .map(|(a, m)| match m {
            Some(m) => Ok(m),
            None if dims[a.target] == 0 || dims[a.source] == 0 => {
                Ok(ExactMatrix::zeros(field, dims[a.target], dims[a.source]))
            }
            None => Err(parse_err(
                hline,
                1,
                format!("missing map for arrow `{}`", a.name),
            )),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let rep = Representation::new(field, quiver, dims, maps)?;
    Ok(RepFile { quiver_path, rep })
}

fn read(path: &Path) -> Result<String, RepError> {
    fs::read_to_string(path).map_err(|e| RepError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Reads a representation file and the quiver file it references.
pub fn load_representation<K: Field>(field: K, path: &Path) -> Result<RepFile<K>, RepError> {
    let text = read(path)?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_representation(field, &text, |qpath| {
        let full: PathBuf = base.join(qpath);
        Ok(Quiver::parse(&read(&full)?)?)
    })
}

impl<K: Field> Representation<K> {
    /// File text referencing the quiver at `quiver_path`.
    pub fn to_text(&self, quiver_path: &str) -> String {
        let mut s = format!(
            "quiver {quiver_path}\ndims {}\n",
            self.dim_vector().to_text(self.quiver())
        );
        for (a, m) in self.quiver().arrows().iter().zip(self.maps()) {
            s.push_str(&format!("map {} {}\n", a.name, m.to_text()));
        }
        s
    }
}
