#![allow(dead_code)]

use std::collections::HashSet;
use std::path::PathBuf;

use pachner::format::parse_tri;
use pachner_core::{matching_system, Manifold, Triangulation};
use serde::Deserialize;

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn fixture_path(name: &str) -> PathBuf {
    fixtures_dir().join(format!("{name}.tri"))
}

pub fn load(name: &str) -> Triangulation {
    parse_tri(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

pub fn manifold(name: &str) -> Manifold {
    Manifold::new(load(name)).unwrap()
}

#[derive(Debug, Deserialize)]
pub struct Manifest {
    pub fixture: Vec<Entry>,
}

#[derive(Debug, Deserialize)]
pub struct Entry {
    pub name: String,
    pub tetrahedra: usize,
    pub verdict: String,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub orientable: Option<bool>,
    pub homology: Option<Vec<String>>,
    pub relative: Option<Vec<String>>,
    pub boundary: Option<Vec<String>>,
    pub vertex_surfaces: Option<usize>,
    pub fundamental_surfaces: Option<usize>,
}

pub fn manifest() -> Manifest {
    toml::from_str(&std::fs::read_to_string(fixtures_dir().join("manifest.toml")).unwrap()).unwrap()
}

/// Names of the fixtures that are manifolds.
pub fn manifold_names() -> Vec<String> {
    manifest()
        .fixture
        .into_iter()
        .filter(|e| e.verdict != "not a manifold")
        .map(|e| e.name)
        .collect()
}

/// A frozen surface list: `(chi, connected, orientable, two_sided)` and
/// coordinates per line.
pub fn frozen(name: &str, kind: &str) -> Vec<([i64; 4], Vec<u64>)> {
    let text = std::fs::read_to_string(fixtures_dir().join(format!("normal/{name}.{kind}"))).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let (a, b) = l.split_once('|').unwrap();
            let inv: Vec<i64> = a.split_whitespace().map(|x| x.parse().unwrap()).collect();
            (
                [inv[0], inv[1], inv[2], inv[3]],
                b.split_whitespace().map(|x| x.parse().unwrap()).collect(),
            )
        })
        .collect()
}

/// Every vector `x ≤ upper` satisfying the matching equations and the
/// quadrilateral condition, by direct enumeration tetrahedron by
/// tetrahedron.
pub fn admissible_below(m: &Manifold, upper: &[u64]) -> Vec<Vec<u64>> {
    let sys = matching_system(m);
    let t = m.size();
    // Rows checked once their last tetrahedron is assigned.
    let mut rows_at: Vec<Vec<Vec<(usize, i64)>>> = vec![Vec::new(); t];
    for r in &sys.rows {
        let last = r.coeffs.iter().map(|&(c, _)| c / 7).max().unwrap();
        rows_at[last].push(r.coeffs.clone());
    }
    let mut out = Vec::new();
    let mut x = vec![0u64; 7 * t];
    fill(0, &mut x, upper, &rows_at, &mut out);
    out
}

fn fill(tet: usize, x: &mut Vec<u64>, upper: &[u64], rows_at: &[Vec<Vec<(usize, i64)>>], out: &mut Vec<Vec<u64>>) {
    if tet == rows_at.len() {
        out.push(x.clone());
        return;
    }
    let b = 7 * tet;
    let tri_options: Vec<[u64; 4]> = (0..=upper[b])
        .flat_map(|a| (0..=upper[b + 1]).map(move |c| (a, c)))
        .flat_map(|(a, c)| (0..=upper[b + 2]).map(move |d| (a, c, d)))
        .flat_map(|(a, c, d)| (0..=upper[b + 3]).map(move |e| [a, c, d, e]))
        .collect();
    let mut quad_options = vec![[0u64; 3]];
    for q in 0..3 {
        for v in 1..=upper[b + 4 + q] {
            let mut o = [0; 3];
            o[q] = v;
            quad_options.push(o);
        }
    }
    for tr in &tri_options {
        x[b..b + 4].copy_from_slice(tr);
        for qu in &quad_options {
            x[b + 4..b + 7].copy_from_slice(qu);
            let ok = rows_at[tet]
                .iter()
                .all(|r| r.iter().map(|&(c, v)| v * x[c] as i64).sum::<i64>() == 0);
            if ok {
                fill(tet + 1, x, upper, rows_at, out);
            }
        }
    }
    x[b..b + 7].iter_mut().for_each(|v| *v = 0);
}

pub fn below(f: &[u64], x: &[u64]) -> bool {
    f.iter().zip(x).all(|(a, b)| a <= b)
}

/// Vectors of `all` (closed under admissible differences) that are not
/// nonnegative integer combinations of `basis`, by dynamic programming in
/// order of coordinate sum.
pub fn undecomposable(all: &[Vec<u64>], basis: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let mut sorted: Vec<&Vec<u64>> = all.iter().collect();
    sorted.sort_by_key(|x| x.iter().sum::<u64>());
    let mut good: HashSet<Vec<u64>> = HashSet::new();
    let mut bad = Vec::new();
    for x in sorted {
        let zero = x.iter().all(|&v| v == 0);
        let ok = zero
            || basis.iter().any(|f| {
                below(f, x) && {
                    let rest: Vec<u64> = x.iter().zip(f).map(|(a, b)| a - b).collect();
                    good.contains(&rest)
                }
            });
        if ok {
            good.insert(x.clone());
        } else {
            bad.push(x.clone());
        }
    }
    bad
}

/// Whether `f` is the sum of two nonzero admissible vectors.
pub fn splits(m: &Manifold, f: &[u64]) -> bool {
    let parts: HashSet<Vec<u64>> = admissible_below(m, f).into_iter().collect();
    parts.iter().any(|y| {
        y.iter().any(|&v| v != 0) && y.as_slice() != f && {
            let rest: Vec<u64> = f.iter().zip(y).map(|(a, b)| a - b).collect();
            parts.contains(&rest)
        }
    })
}
