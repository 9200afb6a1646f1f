//! Text formats: the line-oriented input describing a graded simplicial
//! complex, and the cell-complex format used to write Morse complexes.

use crate::complex::{ComplexError, LefschetzComplex, Simplex, SimplicialComplex, VertexId};
use crate::filtration::{Filtration, FiltrationError, MultiGrade, Perturbation, VertexFunction};
use crate::gradient::DiscreteGradient;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: FiltrationError,
    },
    #[error("missing `params` line")]
    MissingParams,
    #[error("input has no simplices")]
    Empty,
    #[error(transparent)]
    Filtration(#[from] FiltrationError),
}

fn syntax(line: usize, message: impl Into<String>) -> InputError {
    InputError::Syntax {
        line,
        message: message.into(),
    }
}

/// How the grades were given.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grading {
    Vertex(VertexFunction),
    Explicit(HashMap<Simplex, MultiGrade>),
}

/// A parsed input file.
#[derive(Clone, Debug)]
pub struct Input {
    pub params: usize,
    pub complex: SimplicialComplex,
    pub grading: Grading,
    /// Line on which each vertex value or simplex was given.
    vertex_lines: HashMap<VertexId, usize>,
    simplex_lines: HashMap<Simplex, usize>,
}

pub fn parse_input(text: &str) -> Result<Input, InputError> {
    let mut params: Option<usize> = None;
    let mut closure = false;
    let mut vertices: BTreeMap<VertexId, MultiGrade> = BTreeMap::new();
    let mut vertex_lines = HashMap::new();
    let mut simplices: Vec<Simplex> = Vec::new();
    let mut simplex_lines: HashMap<Simplex, usize> = HashMap::new();
    let mut explicit: HashMap<Simplex, MultiGrade> = HashMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let keyword = words.next().expect("non-empty line");
        let args: Vec<&str> = words.collect();
        let numbers = |args: &[&str]| -> Result<Vec<u64>, InputError> {
            args.iter()
                .map(|a| {
                    a.parse::<u64>()
                        .map_err(|_| syntax(line, format!("`{a}` is not a non-negative integer")))
                })
                .collect()
        };
        let need_params = || params.ok_or_else(|| syntax(line, "`params` must come first"));
        match keyword {
            "params" => {
                if params.is_some() {
                    return Err(syntax(line, "`params` given twice"));
                }
                let [n] = numbers(&args)?[..] else {
                    return Err(syntax(line, "expected `params <n>`"));
                };
                if n == 0 {
                    return Err(syntax(line, "need at least one parameter"));
                }
                params = Some(n as usize);
            }
            "closure" => {
                if !args.is_empty() {
                    return Err(syntax(line, "`closure` takes no arguments"));
                }
                closure = true;
            }
            "vertex" => {
                let n = need_params()?;
                if !explicit.is_empty() {
                    return Err(syntax(line, "cannot mix `vertex` and `grade` lines"));
                }
                let values = numbers(&args)?;
                if values.len() != n + 1 {
                    return Err(syntax(
                        line,
                        format!("expected `vertex <id>` and {n} values"),
                    ));
                }
                let v = vertex_id(line, values[0])?;
                if vertices.insert(v, MultiGrade::new(&values[1..])).is_some() {
                    return Err(syntax(line, format!("duplicate vertex {v}")));
                }
                vertex_lines.insert(v, line);
            }
            "simplex" => {
                need_params()?;
                let s = simplex_of(line, &numbers(&args)?)?;
                add_simplex(line, s, &mut simplices, &mut simplex_lines)?;
            }
            "grade" => {
                let n = need_params()?;
                if !vertices.is_empty() {
                    return Err(syntax(line, "cannot mix `vertex` and `grade` lines"));
                }
                let values = numbers(&args)?;
                if values.len() <= n {
                    return Err(syntax(
                        line,
                        format!("expected vertices followed by {n} values"),
                    ));
                }
                let (vs, g) = values.split_at(values.len() - n);
                let s = simplex_of(line, vs)?;
                explicit.insert(s.clone(), MultiGrade::new(g));
                add_simplex(line, s, &mut simplices, &mut simplex_lines)?;
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }

    let params = params.ok_or(InputError::MissingParams)?;
    // declared vertices belong to the complex even if no simplex lists them
    for (&v, &line) in &vertex_lines {
        let s = Simplex::vertex(v);
        simplex_lines.entry(s.clone()).or_insert_with(|| {
            simplices.push(s);
            line
        });
    }
    if simplices.is_empty() {
        return Err(InputError::Empty);
    }
    let complex = if closure {
        SimplicialComplex::closure(simplices)
    } else {
        SimplicialComplex::from_simplices(simplices).map_err(|e| match &e {
            ComplexError::NotFaceClosed { simplex, .. } => InputError::AtLine {
                line: simplex_lines[simplex],
                source: e.into(),
            },
            _ => InputError::Filtration(e.into()),
        })?
    };
    let grading = if explicit.is_empty() {
        Grading::Vertex(VertexFunction::new(params, vertices)?)
    } else {
        Grading::Explicit(explicit)
    };
    Ok(Input {
        params,
        complex,
        grading,
        vertex_lines,
        simplex_lines,
    })
}

fn vertex_id(line: usize, v: u64) -> Result<VertexId, InputError> {
    VertexId::try_from(v).map_err(|_| syntax(line, format!("vertex id {v} is too large")))
}

fn simplex_of(line: usize, values: &[u64]) -> Result<Simplex, InputError> {
    let vs = values
        .iter()
        .map(|&v| vertex_id(line, v))
        .collect::<Result<Vec<_>, _>>()?;
    Simplex::new(vs).map_err(|e| syntax(line, e.to_string()))
}

fn add_simplex(
    line: usize,
    s: Simplex,
    simplices: &mut Vec<Simplex>,
    lines: &mut HashMap<Simplex, usize>,
) -> Result<(), InputError> {
    if let Some(first) = lines.insert(s.clone(), line) {
        return Err(syntax(
            line,
            format!("duplicate simplex {s} (first on line {first})"),
        ));
    }
    simplices.push(s);
    Ok(())
}

impl Input {
    /// Builds the filtration. With `tiebreak`, colliding vertex values are
    /// replaced by ranks and the changes are returned.
    pub fn filtration(
        &self,
        tiebreak: bool,
    ) -> Result<(Filtration, Vec<Perturbation>), InputError> {
        match &self.grading {
            Grading::Vertex(f0) => {
                let (f0, log) = if tiebreak {
                    f0.tiebreak()
                } else {
                    (f0.clone(), Vec::new())
                };
                let f = Filtration::extend_max(self.complex.clone(), f0).map_err(|e| {
                    let line = match &e {
                        FiltrationError::NonInjective { second, .. } => {
                            self.vertex_lines.get(second)
                        }
                        FiltrationError::MissingVertexValue(v) => self
                            .simplex_lines
                            .iter()
                            .filter(|(s, _)| s.vertices().contains(v))
                            .map(|(_, l)| l)
                            .min(),
                        _ => None,
                    };
                    match line {
                        Some(&line) => InputError::AtLine { line, source: e },
                        None => InputError::Filtration(e),
                    }
                })?;
                Ok((f, log))
            }
            Grading::Explicit(grades) => {
                let f = Filtration::from_explicit(self.complex.clone(), self.params, grades)
                    .map_err(|e| {
                        let line = match &e {
                            FiltrationError::NotMonotone { coface, .. } => {
                                self.simplex_lines.get(coface)
                            }
                            _ => None,
                        };
                        match line {
                            Some(&line) => InputError::AtLine { line, source: e },
                            None => InputError::Filtration(e),
                        }
                    })?;
                Ok((f, Vec::new()))
            }
        }
    }
}

/// Reads a discrete vector field on `complex`: lines `pair <facet> : <cofacet>`
/// and `critical <simplex>`, simplices given by their vertices. Whether the
/// result is a gradient is left to the caller to check.
pub fn parse_gradient(
    text: &str,
    complex: &SimplicialComplex,
) -> Result<DiscreteGradient, InputError> {
    let mut pairs = Vec::new();
    let mut critical = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .unwrap_or((content, ""));
        let cell = |words: &str| -> Result<usize, InputError> {
            let values = words
                .split_whitespace()
                .map(|w| {
                    w.parse::<u64>()
                        .map_err(|_| syntax(line, format!("`{w}` is not a vertex id")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            let s = simplex_of(line, &values)?;
            complex
                .index_of(&s)
                .ok_or_else(|| syntax(line, format!("{s} is not in the complex")))
        };
        match keyword {
            "pair" => {
                let (a, b) = rest
                    .split_once(':')
                    .ok_or_else(|| syntax(line, "expected `pair <facet> : <cofacet>`"))?;
                pairs.push((cell(a)?, cell(b)?));
            }
            "critical" => critical.push(cell(rest)?),
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }
    Ok(DiscreteGradient::new(pairs, critical))
}

/// Writes cells with their grades and non-zero incidences.
pub fn write_cell_complex(
    cells: &LefschetzComplex,
    grades: &[MultiGrade],
    params: usize,
) -> String {
    let mut out = String::new();
    writeln!(out, "params {params}").unwrap();
    for (c, g) in grades.iter().enumerate() {
        write!(out, "cell {c} {}", cells.dim_of(c)).unwrap();
        for x in g.coords() {
            write!(out, " {x}").unwrap();
        }
        out.push('\n');
    }
    for c in 0..cells.len() {
        for f in cells.boundary_of(c) {
            writeln!(out, "face {c} {f} 1").unwrap();
        }
    }
    out
}

/// Reads the output of [`write_cell_complex`]; cell ids must be `0..n` in order.
pub fn read_cell_complex(
    text: &str,
) -> Result<(LefschetzComplex, Vec<MultiGrade>, usize), InputError> {
    let mut params = None;
    let mut dims = Vec::new();
    let mut grades = Vec::new();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        let keyword = words.next().expect("non-empty line");
        let values = words
            .map(|w| {
                w.parse::<u64>()
                    .map_err(|_| syntax(line, format!("`{w}` is not a number")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        match keyword {
            "params" => match values[..] {
                [n] => params = Some(n as usize),
                _ => return Err(syntax(line, "expected `params <n>`")),
            },
            "cell" => {
                let n = params.ok_or_else(|| syntax(line, "`params` must come first"))?;
                if values.len() != n + 2 || values[0] as usize != dims.len() {
                    return Err(syntax(
                        line,
                        "expected `cell <next id> <dim>` and grade values",
                    ));
                }
                dims.push(values[1] as usize);
                grades.push(MultiGrade::new(&values[2..]));
                faces.push(Vec::new());
            }
            "face" => {
                let [c, f, 1] = values[..] else {
                    return Err(syntax(line, "expected `face <cell> <facet> 1`"));
                };
                let (c, f) = (c as usize, f as usize);
                if c >= dims.len() || f >= dims.len() {
                    return Err(syntax(line, "face refers to an undeclared cell"));
                }
                faces[c].push(f);
            }
            other => return Err(syntax(line, format!("unknown keyword `{other}`"))),
        }
    }
    let params = params.ok_or(InputError::MissingParams)?;
    let cells = LefschetzComplex::new(dims, faces).map_err(|e| InputError::Filtration(e.into()))?;
    Ok((cells, grades, params))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{grade, simplex};

    const FOUR_CYCLE: &str = "\
# a=0 b=1 c=2 d=3
params 2
vertex 0 0 0
vertex 1 3 2
vertex 2 1 1
vertex 3 2 3
simplex 0 1
simplex 1 2
simplex 2 3
simplex 0 3
closure
";

    #[test]
    fn parses_the_four_cycle() {
        let input = parse_input(FOUR_CYCLE).unwrap();
        assert_eq!(input.params, 2);
        assert_eq!(input.complex.f_vector(), vec![4, 4]);
        let (f, log) = input.filtration(false).unwrap();
        assert!(log.is_empty());
        assert_eq!(f.grade_of(&simplex![1, 2]), Some(&grade![3, 2]));
    }

    #[test]
    fn missing_faces_need_closure() {
        let text = FOUR_CYCLE.replace("closure\n", "");
        // vertex lines add the vertices themselves
        assert!(parse_input(&text).is_ok());
        let text = "params 1\nvertex 0 0\nvertex 1 1\nvertex 2 2\nsimplex 0 1 2\n";
        let err = parse_input(text).unwrap_err();
        assert!(matches!(err, InputError::AtLine { line: 5, .. }), "{err}");
    }

    #[test]
    fn duplicate_vertex_is_reported_with_its_line() {
        let err = parse_input("params 1\nvertex 0 1\nvertex 0 2\n").unwrap_err();
        assert_eq!(err.to_string(), "line 3: duplicate vertex 0");
    }

    #[test]
    fn collisions_need_tiebreak() {
        let text = "params 2\nvertex 0 0 0\nvertex 1 0 1\nsimplex 0 1\n";
        let input = parse_input(text).unwrap();
        let err = input.filtration(false).unwrap_err();
        assert!(matches!(err, InputError::AtLine { line: 3, .. }), "{err}");
        let (f, log) = input.filtration(true).unwrap();
        assert_eq!(
            log,
            vec![Perturbation {
                vertex: 1,
                axis: 0,
                original: 0,
                perturbed: 1
            }]
        );
        assert_eq!(f.grade_of(&simplex![0, 1]), Some(&grade![1, 1]));
    }

    #[test]
    fn explicit_grades_are_checked() {
        let ok = "params 1\ngrade 0 0\ngrade 1 1\ngrade 0 1 1\n";
        let f = parse_input(ok).unwrap().filtration(false).unwrap().0;
        assert!(!f.is_max_extension());
        let bad = "params 1\ngrade 0 0\ngrade 1 2\ngrade 0 1 1\n";
        let err = parse_input(bad).unwrap().filtration(false).unwrap_err();
        assert!(matches!(err, InputError::AtLine { line: 4, .. }), "{err}");
        let mixed = "params 1\nvertex 0 0\ngrade 1 1\n";
        assert!(parse_input(mixed).is_err());
    }

    #[test]
    fn malformed_lines() {
        for (text, line) in [
            ("vertex 0 0\n", 1),
            ("params 1\nvertex 0\n", 2),
            ("params 1\nvertex 0 -1\n", 2),
            ("params 1\nsimplex 0 0\n", 2),
            ("params 1\nfoo\n", 2),
            ("params 1\nparams 1\n", 2),
        ] {
            match parse_input(text) {
                Err(InputError::Syntax { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert_eq!(parse_input("params 1\n").unwrap_err(), InputError::Empty);
        assert_eq!(parse_input("").unwrap_err(), InputError::MissingParams);
    }

    #[test]
    fn gradient_files() {
        let k = SimplicialComplex::closure([simplex![0, 1], simplex![0, 2]]);
        let v = parse_gradient("pair 1 : 0 1\ncritical 0\ncritical 2\ncritical 0 2\n", &k).unwrap();
        assert_eq!(v.pairs(), &[(1, 3)]);
        assert_eq!(v.critical(), &[0, 2, 4]);
        let err = parse_gradient("critical 0\ncritical 1 2\n", &k).unwrap_err();
        assert_eq!(err.to_string(), "line 2: [1,2] is not in the complex");
        assert!(parse_gradient("pair 0 0 1\n", &k).is_err());
    }

    #[test]
    fn cell_complex_round_trip() {
        let input = parse_input(FOUR_CYCLE).unwrap();
        let (f, _) = input.filtration(false).unwrap();
        let text = write_cell_complex(f.cells(), f.grades(), 2);
        assert!(text.starts_with("params 2\ncell 0 0 0 0\n"));
        let (cells, grades, params) = read_cell_complex(&text).unwrap();
        assert_eq!(&cells, f.cells());
        assert_eq!(grades, f.grades());
        assert_eq!(params, 2);
    }
}
