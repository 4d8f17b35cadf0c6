//! Line-based text formats.
//!
//! ```text
//! f2 R C          int R C          complex2 k | complexz k
//! r c             r c v            [dims d0 .. dk]   (only needed when k = 0)
//! ...             ...              k matrix blocks, innermost degree first
//!
//! css q           graph V E
//! X i1 i2 ...     u v [w]
//! Z k1 k2 ...     ...
//! ```
//!
//! Indices are 0-based, `#` starts a comment, blank lines are ignored. Twist
//! files for fiber bundles hold lines `edge vertex shift`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::codes::CssCode;
use crate::complex::{ChainComplex2, ChainComplexZ};
use crate::decongestion::Multigraph;
use crate::error::{Error, Result};
use crate::matrix::{BinMatrix, IntMatrix};

/// Any document the parser recognises, keyed by its header word.
#[derive(Clone, Debug)]
pub enum Document {
    Bin(BinMatrix),
    Int(IntMatrix),
    Complex2(ChainComplex2),
    ComplexZ(ChainComplexZ),
    Css(CssCode),
    Graph(Multigraph),
}

struct Line<'a> {
    no: usize,
    tokens: Vec<&'a str>,
}

impl Line<'_> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.no,
            msg: msg.into(),
        }
    }

    fn num<T: FromStr>(&self, i: usize, what: &str) -> Result<T> {
        let tok = self
            .tokens
            .get(i)
            .ok_or_else(|| self.err(format!("missing {what}")))?;
        tok.parse()
            .map_err(|_| self.err(format!("invalid {what} {tok:?}")))
    }

    fn arity(&self, n: usize) -> Result<()> {
        if self.tokens.len() != n {
            return Err(self.err(format!(
                "expected {n} fields, found {}",
                self.tokens.len()
            )));
        }
        Ok(())
    }

    fn starts_numeric(&self) -> bool {
        self.tokens[0]
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_digit() || c == '-' || c == '+')
    }
}

fn lines(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let tokens: Vec<&str> = body.split_whitespace().collect();
            (!tokens.is_empty()).then_some(Line { no: i + 1, tokens })
        })
        .collect()
}

fn eof(text: &str, msg: &str) -> Error {
    Error::Parse {
        line: text.lines().count().max(1),
        msg: msg.into(),
    }
}

fn with_line(line: &Line<'_>, e: Error) -> Error {
    match e {
        Error::Parse { .. } => e,
        other => line.err(other.to_string()),
    }
}

/// Consumes a matrix block starting at `ls[*pos]`.
fn take_bin(ls: &[Line<'_>], pos: &mut usize) -> Result<BinMatrix> {
    let head = &ls[*pos];
    if head.tokens[0] != "f2" {
        return Err(head.err(format!("expected `f2` header, found {:?}", head.tokens[0])));
    }
    head.arity(3)?;
    let rows: usize = head.num(1, "row count")?;
    let cols: usize = head.num(2, "column count")?;
    *pos += 1;
    let mut entries = Vec::new();
    let mut seen = std::collections::HashSet::new();
    while *pos < ls.len() && ls[*pos].starts_numeric() {
        let l = &ls[*pos];
        l.arity(2)?;
        let (r, c): (usize, usize) = (l.num(0, "row")?, l.num(1, "column")?);
        if r >= rows || c >= cols {
            return Err(l.err(format!("entry ({r}, {c}) outside {rows}x{cols}")));
        }
        if !seen.insert((r, c)) {
            return Err(l.err(format!("duplicate entry ({r}, {c})")));
        }
        entries.push((r, c));
        *pos += 1;
    }
    BinMatrix::new(rows, cols, entries).map_err(|e| with_line(head, e))
}

fn take_int(ls: &[Line<'_>], pos: &mut usize) -> Result<IntMatrix> {
    let head = &ls[*pos];
    if head.tokens[0] != "int" {
        return Err(head.err(format!("expected `int` header, found {:?}", head.tokens[0])));
    }
    head.arity(3)?;
    let rows: usize = head.num(1, "row count")?;
    let cols: usize = head.num(2, "column count")?;
    *pos += 1;
    let mut entries = Vec::new();
    let mut seen = std::collections::HashSet::new();
    while *pos < ls.len() && ls[*pos].starts_numeric() {
        let l = &ls[*pos];
        l.arity(3)?;
        let (r, c): (usize, usize) = (l.num(0, "row")?, l.num(1, "column")?);
        let v: BigInt = l.num(2, "value")?;
        if r >= rows || c >= cols {
            return Err(l.err(format!("entry ({r}, {c}) outside {rows}x{cols}")));
        }
        if !seen.insert((r, c)) {
            return Err(l.err(format!("duplicate entry ({r}, {c})")));
        }
        entries.push((r, c, v));
        *pos += 1;
    }
    IntMatrix::new(rows, cols, entries).map_err(|e| with_line(head, e))
}

fn take_complex_header(ls: &[Line<'_>], pos: &mut usize, word: &str) -> Result<(usize, Option<Vec<usize>>)> {
    let head = &ls[*pos];
    head.arity(2)?;
    if head.tokens[0] != word {
        return Err(head.err(format!("expected `{word}` header")));
    }
    let k: usize = head.num(1, "boundary count")?;
    *pos += 1;
    let mut dims = None;
    if *pos < ls.len() && ls[*pos].tokens[0] == "dims" {
        let l = &ls[*pos];
        let d = (1..l.tokens.len())
            .map(|i| l.num::<usize>(i, "dimension"))
            .collect::<Result<Vec<_>>>()?;
        if d.len() != k + 1 {
            return Err(l.err(format!("{k} boundaries need {} dimensions", k + 1)));
        }
        dims = Some(d);
        *pos += 1;
    }
    if k == 0 && dims.is_none() {
        return Err(head.err("a complex without boundaries needs a `dims` line"));
    }
    Ok((k, dims))
}

fn finish(ls: &[Line<'_>], pos: usize) -> Result<()> {
    match ls.get(pos) {
        None => Ok(()),
        Some(l) => Err(l.err(format!("unexpected trailing content {:?}", l.tokens[0]))),
    }
}

pub fn parse_bin_matrix(text: &str) -> Result<BinMatrix> {
    let ls = lines(text);
    if ls.is_empty() {
        return Err(eof(text, "empty input"));
    }
    let mut pos = 0;
    let m = take_bin(&ls, &mut pos)?;
    finish(&ls, pos)?;
    Ok(m)
}

pub fn parse_int_matrix(text: &str) -> Result<IntMatrix> {
    let ls = lines(text);
    if ls.is_empty() {
        return Err(eof(text, "empty input"));
    }
    let mut pos = 0;
    let m = take_int(&ls, &mut pos)?;
    finish(&ls, pos)?;
    Ok(m)
}

fn complex2_at(text: &str, ls: &[Line<'_>], pos: &mut usize) -> Result<ChainComplex2> {
    let head_no = *pos;
    let (k, dims) = take_complex_header(ls, pos, "complex2")?;
    let mut bs = Vec::with_capacity(k);
    for _ in 0..k {
        if *pos >= ls.len() {
            return Err(eof(text, "missing matrix block"));
        }
        bs.push(take_bin(ls, pos)?);
    }
    let head = &ls[head_no];
    match dims {
        Some(d) => ChainComplex2::new(d, bs),
        None => ChainComplex2::from_boundaries(bs),
    }
    .map_err(|e| with_line(head, e))
}

fn complexz_at(text: &str, ls: &[Line<'_>], pos: &mut usize) -> Result<ChainComplexZ> {
    let head_no = *pos;
    let (k, dims) = take_complex_header(ls, pos, "complexz")?;
    let mut bs = Vec::with_capacity(k);
    for _ in 0..k {
        if *pos >= ls.len() {
            return Err(eof(text, "missing matrix block"));
        }
        bs.push(take_int(ls, pos)?);
    }
    let head = &ls[head_no];
    match dims {
        Some(d) => ChainComplexZ::new(d, bs),
        None => ChainComplexZ::from_boundaries(bs),
    }
    .map_err(|e| with_line(head, e))
}

pub fn parse_complex2(text: &str) -> Result<ChainComplex2> {
    let ls = lines(text);
    if ls.is_empty() {
        return Err(eof(text, "empty input"));
    }
    let mut pos = 0;
    let c = complex2_at(text, &ls, &mut pos)?;
    finish(&ls, pos)?;
    Ok(c)
}

pub fn parse_complexz(text: &str) -> Result<ChainComplexZ> {
    let ls = lines(text);
    if ls.is_empty() {
        return Err(eof(text, "empty input"));
    }
    let mut pos = 0;
    let c = complexz_at(text, &ls, &mut pos)?;
    finish(&ls, pos)?;
    Ok(c)
}

pub fn parse_css(text: &str) -> Result<CssCode> {
    let ls = lines(text);
    let Some(head) = ls.first() else {
        return Err(eof(text, "empty input"));
    };
    if head.tokens[0] != "css" {
        return Err(head.err("expected `css` header"));
    }
    head.arity(2)?;
    let q: usize = head.num(1, "qubit count")?;
    let mut xs = Vec::new();
    let mut zs = Vec::new();
    for l in &ls[1..] {
        let support = (1..l.tokens.len())
            .map(|i| l.num::<usize>(i, "qubit index"))
            .collect::<Result<Vec<_>>>()?;
        if let Some(&bad) = support.iter().find(|&&i| i >= q) {
            return Err(l.err(format!("qubit {bad} out of range for {q} qubits")));
        }
        match l.tokens[0] {
            "X" => xs.push((l.no, support)),
            "Z" => zs.push((l.no, support)),
            other => return Err(l.err(format!("expected `X` or `Z`, found {other:?}"))),
        }
    }
    let strip = |v: Vec<(usize, Vec<usize>)>| v.into_iter().map(|(_, s)| s).collect();
    let line_of_x: Vec<usize> = xs.iter().map(|p| p.0).collect();
    let line_of_z: Vec<usize> = zs.iter().map(|p| p.0).collect();
    CssCode::new(q, strip(xs), strip(zs)).map_err(|e| match e {
        Error::CommutationViolation { x, z } => Error::Parse {
            line: line_of_z[z],
            msg: format!(
                "Z-stabilizer overlaps X-stabilizer on line {} an odd number of times",
                line_of_x[x]
            ),
        },
        other => with_line(head, other),
    })
}

pub fn parse_graph(text: &str) -> Result<Multigraph> {
    let ls = lines(text);
    let Some(head) = ls.first() else {
        return Err(eof(text, "empty input"));
    };
    if head.tokens[0] != "graph" {
        return Err(head.err("expected `graph` header"));
    }
    head.arity(3)?;
    let v: usize = head.num(1, "vertex count")?;
    let e: usize = head.num(2, "edge count")?;
    let mut g = Multigraph::new(v);
    for l in &ls[1..] {
        if l.tokens.len() != 2 && l.tokens.len() != 3 {
            return Err(l.err("expected `u v [w]`"));
        }
        let a: usize = l.num(0, "endpoint")?;
        let b: usize = l.num(1, "endpoint")?;
        let w: u64 = if l.tokens.len() == 3 {
            l.num(2, "weight")?
        } else {
            1
        };
        g.add_weighted_edge(a, b, w).map_err(|err| with_line(l, err))?;
    }
    if g.num_edges() != e {
        return Err(head.err(format!(
            "header declares {e} edges, found {}",
            g.num_edges()
        )));
    }
    Ok(g)
}

/// Twist lines `edge vertex shift`.
pub fn parse_twists(text: &str) -> Result<Vec<(usize, usize, usize)>> {
    lines(text)
        .iter()
        .map(|l| {
            l.arity(3)?;
            Ok((
                l.num(0, "base edge")?,
                l.num(1, "base vertex")?,
                l.num(2, "shift")?,
            ))
        })
        .collect()
}

/// Dispatch on the header word.
pub fn parse_document(text: &str) -> Result<Document> {
    let ls = lines(text);
    let Some(head) = ls.first() else {
        return Err(eof(text, "empty input"));
    };
    match head.tokens[0] {
        "f2" => parse_bin_matrix(text).map(Document::Bin),
        "int" => parse_int_matrix(text).map(Document::Int),
        "complex2" => parse_complex2(text).map(Document::Complex2),
        "complexz" => parse_complexz(text).map(Document::ComplexZ),
        "css" => parse_css(text).map(Document::Css),
        "graph" => parse_graph(text).map(Document::Graph),
        other => Err(head.err(format!("unknown header {other:?}"))),
    }
}

pub fn write_bin_matrix(m: &BinMatrix) -> String {
    let mut s = format!("f2 {} {}\n", m.nrows(), m.ncols());
    for (r, c) in m.entries() {
        let _ = writeln!(s, "{r} {c}");
    }
    s
}

pub fn write_int_matrix(m: &IntMatrix) -> String {
    let mut s = format!("int {} {}\n", m.nrows(), m.ncols());
    for (r, c, v) in m.entries() {
        let _ = writeln!(s, "{r} {c} {v}");
    }
    s
}

fn dims_line(dims: &[usize]) -> String {
    let ds: Vec<String> = dims.iter().map(usize::to_string).collect();
    format!("dims {}\n", ds.join(" "))
}

pub fn write_complex2(c: &ChainComplex2) -> String {
    let mut s = format!("complex2 {}\n", c.boundaries().len());
    if c.boundaries().is_empty() {
        s.push_str(&dims_line(c.dims()));
    }
    for b in c.boundaries() {
        s.push_str(&write_bin_matrix(b));
    }
    s
}

pub fn write_complexz(c: &ChainComplexZ) -> String {
    let mut s = format!("complexz {}\n", c.boundaries().len());
    if c.boundaries().is_empty() {
        s.push_str(&dims_line(c.dims()));
    }
    for b in c.boundaries() {
        s.push_str(&write_int_matrix(b));
    }
    s
}

pub fn write_css(code: &CssCode) -> String {
    let mut s = format!("css {}\n", code.num_qubits());
    for (tag, stabs) in [("X", code.x_stabs()), ("Z", code.z_stabs())] {
        for st in stabs {
            let idx: Vec<String> = st.iter().map(usize::to_string).collect();
            if idx.is_empty() {
                let _ = writeln!(s, "{tag}");
            } else {
                let _ = writeln!(s, "{tag} {}", idx.join(" "));
            }
        }
    }
    s
}

pub fn write_graph(g: &Multigraph) -> String {
    let mut s = format!("graph {} {}\n", g.num_vertices(), g.num_edges());
    for e in g.edges() {
        if e.weight == 1 {
            let _ = writeln!(s, "{} {}", e.u, e.v);
        } else {
            let _ = writeln!(s, "{} {} {}", e.u, e.v, e.weight);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_roundtrip_with_comments() {
        let text = "# two-term complex\ncomplex2 1\nf2 2 3 # header\n0 0\n1 2\n";
        let c = parse_complex2(text).unwrap();
        assert_eq!(c.dims(), &[2, 3]);
        assert_eq!(parse_complex2(&write_complex2(&c)).unwrap(), c);
    }

    #[test]
    fn empty_complex_needs_dims() {
        assert!(parse_complex2("complex2 0\n").is_err());
        let c = parse_complex2("complex2 0\ndims 4\n").unwrap();
        assert_eq!(c.dims(), &[4]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_bin_matrix("f2 2 2\n0 0\n\n5 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }), "{e:?}");
        let e = parse_int_matrix("int 1 1\n0 0 x\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_complexz("complexz 2\nint 1 1\n0 0 1\n").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
    }

    #[test]
    fn int_values_may_be_negative() {
        let m = parse_int_matrix("int 1 2\n0 0 -3\n0 1 7\n").unwrap();
        assert_eq!(m.get(0, 0), BigInt::from(-3));
        assert_eq!(parse_int_matrix(&write_int_matrix(&m)).unwrap(), m);
    }

    #[test]
    fn css_commutation_error_points_at_line() {
        let e = parse_css("css 2\nX 0 1\nZ 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e:?}");
    }

    #[test]
    fn graph_edge_count_checked() {
        assert!(parse_graph("graph 2 2\n0 1\n").is_err());
        let g = parse_graph("graph 2 2\n0 1\n1 1 5\n").unwrap();
        assert_eq!(parse_graph(&write_graph(&g)).unwrap().num_edges(), 2);
    }
}
