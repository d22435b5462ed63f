//! Text formats: `.tri` gluing tables, `.nsc` normal coordinates and move
//! sequences.

use std::fmt::Write as _;

use pachner_core::{Gluing, MoveSite, Perm4, Triangulation, TriangulationError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error(transparent)]
    Structure(#[from] TriangulationError),
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

/// Non-comment lines with their 1-based line numbers; `#` starts a comment.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("");
        (!line.trim().is_empty()).then_some((i + 1, line))
    })
}

/// Whitespace-separated words with their 1-based columns.
fn words(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

fn parse_header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    keyword: &str,
) -> Result<(usize, usize), FormatError> {
    let (ln, line) = lines.next().ok_or_else(|| syntax(1, 1, format!("expected `{keyword} <t>`")))?;
    let w = words(line);
    match w.as_slice() {
        [(_, k), (c, n)] if *k == keyword => {
            let t = n
                .parse::<usize>()
                .map_err(|_| syntax(ln, *c, format!("bad tetrahedron count `{n}`")))?;
            Ok((ln, t))
        }
        _ => Err(syntax(ln, 1, format!("expected `{keyword} <t>`"))),
    }
}

fn parse_perm(s: &str, ln: usize, col: usize) -> Result<Perm4, FormatError> {
    let bytes = s.as_bytes();
    if bytes.len() != 4 || !bytes.iter().all(|b| (b'0'..=b'3').contains(b)) {
        return Err(syntax(ln, col, format!("bad permutation `{s}`")));
    }
    let img = [bytes[0] - b'0', bytes[1] - b'0', bytes[2] - b'0', bytes[3] - b'0'];
    Perm4::from_images(img).ok_or_else(|| syntax(ln, col, format!("`{s}` is not a permutation")))
}

pub fn parse_tri(text: &str) -> Result<Triangulation, FormatError> {
    let mut lines = content_lines(text);
    let (hl, t) = parse_header(&mut lines, "tri")?;
    if t == 0 {
        return Err(TriangulationError::Empty.into());
    }
    let mut table: Vec<[Option<Gluing>; 4]> = vec![[None; 4]; t];
    let mut seen = vec![false; t];
    let mut last = hl;
    for (ln, line) in lines {
        last = ln;
        let w = words(line);
        let Some(&(c0, head)) = w.first() else { continue };
        let idx = head
            .strip_suffix(':')
            .and_then(|s| s.parse::<usize>().ok())
            .ok_or_else(|| syntax(ln, c0, format!("expected `<index>:`, found `{head}`")))?;
        if idx >= t {
            return Err(syntax(ln, c0, format!("tetrahedron index {idx} out of range")));
        }
        if seen[idx] {
            return Err(syntax(ln, c0, format!("tetrahedron {idx} listed twice")));
        }
        seen[idx] = true;
        if w.len() != 5 {
            return Err(syntax(ln, c0, format!("expected 4 gluings, found {}", w.len() - 1)));
        }
        for (f, &(col, g)) in w[1..].iter().enumerate() {
            if g == "bdry" {
                continue;
            }
            let (j, p) = g
                .split_once(':')
                .ok_or_else(|| syntax(ln, col, format!("expected `bdry` or `<j>:<perm>`, found `{g}`")))?;
            let j: usize = j.parse().map_err(|_| syntax(ln, col, format!("bad tetrahedron index `{j}`")))?;
            if j >= t {
                return Err(syntax(ln, col, format!("tetrahedron index {j} out of range")));
            }
            let perm = parse_perm(p, ln, col + g.find(':').unwrap() + 1)?;
            table[idx][f] = Some(Gluing {
                tet: j,
                face: perm.apply(f as u8),
                perm,
            });
        }
    }
    if let Some(missing) = seen.iter().position(|&s| !s) {
        return Err(syntax(last + 1, 1, format!("missing line for tetrahedron {missing}")));
    }
    Ok(Triangulation::from_table(table)?)
}

pub fn write_tri(tri: &Triangulation) -> String {
    let mut s = format!("tri {}\n", tri.size());
    for i in 0..tri.size() {
        write!(s, "{i}:").unwrap();
        for f in 0..4u8 {
            match tri.gluing(i, f) {
                None => s.push_str(" bdry"),
                Some(g) => {
                    let [a, b, c, d] = g.perm.images();
                    write!(s, " {}:{a}{b}{c}{d}", g.tet).unwrap();
                }
            }
        }
        s.push('\n');
    }
    s
}

pub fn parse_nsc(text: &str) -> Result<Vec<u64>, FormatError> {
    let mut lines = content_lines(text);
    let (hl, t) = parse_header(&mut lines, "nsc")?;
    let mut out = Vec::with_capacity(7 * t);
    let mut last = hl;
    for (ln, line) in lines {
        last = ln;
        for (col, w) in words(line) {
            let x = w.parse::<u64>().map_err(|_| syntax(ln, col, format!("bad coordinate `{w}`")))?;
            out.push(x);
        }
    }
    if out.len() != 7 * t {
        return Err(syntax(last, 1, format!("expected {} coordinates, found {}", 7 * t, out.len())));
    }
    Ok(out)
}

pub fn write_nsc(coords: &[u64]) -> String {
    let body: Vec<String> = coords.iter().map(u64::to_string).collect();
    format!("nsc {}\n{}\n", coords.len() / 7, body.join(" "))
}

pub fn parse_moves(text: &str) -> Result<Vec<MoveSite>, FormatError> {
    content_lines(text)
        .map(|(ln, line)| {
            line.trim()
                .parse::<MoveSite>()
                .map_err(|e| syntax(ln, 1, e.to_string()))
        })
        .collect()
}

pub fn write_moves(moves: &[MoveSite]) -> String {
    moves.iter().map(|m| format!("{m}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_line_file() {
        let tri = parse_tri("tri 2\n0: 1:0123 bdry bdry bdry\n1: 0:0123 bdry bdry bdry\n").unwrap();
        assert_eq!(tri.size(), 2);
        assert_eq!(tri.boundary_face_count(), 6);
    }

    #[test]
    fn round_trip_with_comments() {
        let text = "# comment\ntri 1  # trailing\n0: 0:1023 0:1023 0:1230 0:3012\n";
        let tri = parse_tri(text).unwrap();
        let out = write_tri(&tri);
        assert_eq!(out, "tri 1\n0: 0:1023 0:1023 0:1230 0:3012\n");
        assert_eq!(parse_tri(&out).unwrap(), tri);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_tri("tri 1\n0: bdry bdry 0:01x3 bdry\n").unwrap_err();
        assert!(matches!(e, FormatError::Syntax { line: 2, col: 16, .. }), "{e}");
        let e = parse_tri("tri 1\n0: 0:0123 bdry bdry bdry\n").unwrap_err();
        assert!(matches!(e, FormatError::Structure(TriangulationError::SelfGluing { .. })), "{e}");
        let e = parse_tri("tri 2\n0: 1:0123 bdry bdry bdry\n1: bdry bdry bdry bdry\n").unwrap_err();
        assert!(matches!(e, FormatError::Structure(TriangulationError::Involution { .. })), "{e}");
        let e = parse_tri("tri 1\n0: 3:0123 bdry bdry bdry\n").unwrap_err();
        assert!(matches!(e, FormatError::Syntax { line: 2, col: 4, .. }), "{e}");
        assert!(parse_tri("tri 2\n0: bdry bdry bdry bdry\n").is_err());
    }

    #[test]
    fn nsc_and_moves() {
        let x = vec![1, 0, 0, 0, 0, 0, 2];
        assert_eq!(parse_nsc(&write_nsc(&x)).unwrap(), x);
        assert!(parse_nsc("nsc 1\n1 2 3\n").is_err());
        let m = parse_moves("M23 0 1\n# c\nM14 2\n").unwrap();
        assert_eq!(write_moves(&m), "M23 0 1\nM14 2\n");
    }
}
