//! Integral homology of the cell structure of a triangulation, relative
//! homology of `(M, ∂M)`, and the map `H₁(∂M; Q) → H₁(M; Q)`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::skeleton::{boundary_components, Manifold, Skeleton};
use crate::triangulation::{edge_index, face_vertices, Triangulation, EDGE_VERTICES};

/// Dense matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntegerMatrix {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: &[Vec<i64>]) -> IntegerMatrix {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = IntegerMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = BigInt::from(x);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    fn add_to(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] += x;
    }

    pub fn mul(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntegerMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hcat(&self, other: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.rows, other.rows, "dimension mismatch");
        let cols = self.cols + other.cols;
        let mut out = IntegerMatrix::zeros(self.rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * cols + j] = self.get(i, j).clone();
            }
            for j in 0..other.cols {
                out.data[i * cols + self.cols + j] = other.get(i, j).clone();
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        smith_normal_form(self).rank()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] -= q * row[src]
    fn row_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j].clone();
            if !s.is_zero() {
                self.data[dst * self.cols + j] -= q * s;
            }
        }
    }

    /// col[dst] -= q * col[src]
    fn col_sub(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src].clone();
            if !s.is_zero() {
                self.data[i * self.cols + dst] -= q * s;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let x = &mut self.data[r * self.cols + j];
            *x = -core::mem::take(x);
        }
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// `u · m · v = d` with `u`, `v` unimodular and `d` diagonal.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Diagonal of `d`, of length `min(rows, cols)`; nonzero entries first,
    /// each dividing the next.
    pub diagonal: Vec<BigInt>,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

/// Smith normal form by elimination, always pivoting on an entry of least
/// absolute value.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntegerMatrix::identity(r);
    let mut v = IntegerMatrix::identity(c);
    let n = r.min(c);
    let mut t = 0;
    while t < n {
        // Least nonzero entry of the remaining block.
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                let x = a.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        let mut clean = true;
        for i in t + 1..r {
            if a.get(i, t).is_zero() {
                continue;
            }
            let q = a.get(i, t).div_floor(a.get(t, t));
            a.row_sub(i, t, &q);
            u.row_sub(i, t, &q);
            if !a.get(i, t).is_zero() {
                clean = false;
            }
        }
        for j in t + 1..c {
            if a.get(t, j).is_zero() {
                continue;
            }
            let q = a.get(t, j).div_floor(a.get(t, t));
            a.col_sub(j, t, &q);
            v.col_sub(j, t, &q);
            if !a.get(t, j).is_zero() {
                clean = false;
            }
        }
        if !clean {
            // A smaller remainder appeared; pivot again.
            continue;
        }
        // Divisibility: fold an offending row into the pivot row.
        let p = a.get(t, t).clone();
        let mut offending = None;
        'scan: for i in t + 1..r {
            for j in t + 1..c {
                if !a.get(i, j).is_multiple_of(&p) {
                    offending = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = offending {
            let minus_one = -BigInt::one();
            a.row_sub(t, i, &minus_one);
            u.row_sub(t, i, &minus_one);
            continue;
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let diagonal = (0..n).map(|i| a.get(i, i).clone()).collect();
    let out = SmithForm { diagonal, u, v };
    debug_assert!(verify_smith(m, &out));
    out
}

/// Checks `u · m · v = d`, the shape of `d`, and divisibility.
pub fn verify_smith(m: &IntegerMatrix, s: &SmithForm) -> bool {
    let d = s.u.mul(m).mul(&s.v);
    for i in 0..d.rows {
        for j in 0..d.cols {
            let expected = if i == j { s.diagonal[i].clone() } else { BigInt::zero() };
            if *d.get(i, j) != expected {
                return false;
            }
        }
    }
    let k = s.rank();
    if s.diagonal[..k].iter().any(|x| !x.is_positive()) || s.diagonal[k..].iter().any(|x| !x.is_zero()) {
        return false;
    }
    s.diagonal[..k].windows(2).all(|w| w[1].is_multiple_of(&w[0]))
}

/// A finitely generated abelian group `Z^betti ⊕ Z/d₁ ⊕ ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct HomologyGroup {
    pub betti: usize,
    /// Invariant factors, each ≥ 2 and dividing the next.
    pub torsion: Vec<BigUint>,
}

impl HomologyGroup {
    pub fn is_trivial(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }

    pub fn free(betti: usize) -> HomologyGroup {
        HomologyGroup {
            betti,
            torsion: Vec::new(),
        }
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut first = true;
        match self.betti {
            0 => {}
            1 => {
                write!(f, "Z")?;
                first = false;
            }
            b => {
                write!(f, "Z^{b}")?;
                first = false;
            }
        }
        for d in &self.torsion {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "Z/{d}")?;
            first = false;
        }
        Ok(())
    }
}

/// The cellular chain complex `C₃ → C₂ → C₁ → C₀`, restricted to a subset
/// of cells.
struct ChainComplex {
    dims: [usize; 4],
    /// `d[k]` is the boundary map `C_{k+1} → C_k`.
    d: [IntegerMatrix; 3],
    /// Positions of the kept cells in each dimension.
    kept: [Vec<usize>; 4],
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Cells {
    All,
    Interior,
    Boundary,
}

fn boundary_cells(tri: &Triangulation, skel: &Skeleton) -> [Vec<bool>; 4] {
    let mut v = vec![false; skel.vertices.len()];
    let mut e = vec![false; skel.edges.len()];
    let mut f = vec![false; skel.faces.len()];
    for (i, face) in tri.boundary_faces() {
        f[skel.face_of(i, face)] = true;
        for &(a, b) in &EDGE_VERTICES {
            if a != face && b != face {
                e[skel.edge_of(i, edge_index(a, b))] = true;
            }
        }
        for x in 0..4u8 {
            if x != face {
                v[skel.vertex_of(i, x)] = true;
            }
        }
    }
    [v, e, f, vec![false; tri.size()]]
}

impl ChainComplex {
    fn new(tri: &Triangulation, skel: &Skeleton, which: Cells) -> ChainComplex {
        let bdry = boundary_cells(tri, skel);
        let totals = [skel.vertices.len(), skel.edges.len(), skel.faces.len(), tri.size()];
        let mut kept: [Vec<usize>; 4] = Default::default();
        let mut pos: [Vec<usize>; 4] = Default::default();
        for k in 0..4 {
            pos[k] = vec![usize::MAX; totals[k]];
            for x in 0..totals[k] {
                let keep = match which {
                    Cells::All => true,
                    Cells::Interior => !bdry[k][x],
                    Cells::Boundary => bdry[k][x],
                };
                if keep {
                    pos[k][x] = kept[k].len();
                    kept[k].push(x);
                }
            }
        }
        let dims = [kept[0].len(), kept[1].len(), kept[2].len(), kept[3].len()];
        let mut d1 = IntegerMatrix::zeros(dims[0], dims[1]);
        let mut d2 = IntegerMatrix::zeros(dims[1], dims[2]);
        let mut d3 = IntegerMatrix::zeros(dims[2], dims[3]);

        for (col, &e) in kept[1].iter().enumerate() {
            let (i, le) = skel.edges[e].corners[0];
            let (mut a, mut b) = EDGE_VERTICES[le as usize];
            if skel.edge_reversed(i, le as usize) {
                core::mem::swap(&mut a, &mut b);
            }
            let (head, tail) = (skel.vertex_of(i, b), skel.vertex_of(i, a));
            if pos[0][head] != usize::MAX {
                d1.add_to(pos[0][head], col, 1);
            }
            if pos[0][tail] != usize::MAX {
                d1.add_to(pos[0][tail], col, -1);
            }
        }
        for (col, &fc) in kept[2].iter().enumerate() {
            let (i, f) = skel.faces[fc].sides[0];
            let [a, b, c] = face_vertices(f);
            for (x, y, s) in [(b, c, 1i64), (a, c, -1), (a, b, 1)] {
                let le = edge_index(x, y);
                let e = skel.edge_of(i, le);
                let sign = if skel.edge_reversed(i, le) { -s } else { s };
                if pos[1][e] != usize::MAX {
                    d2.add_to(pos[1][e], col, sign);
                }
            }
        }
        for (col, &i) in kept[3].iter().enumerate() {
            for k in 0..4u8 {
                let fc = skel.face_of(i, k);
                let s = if k % 2 == 0 { 1 } else { -1 } * skel.face_sign(i, k) as i64;
                if pos[2][fc] != usize::MAX {
                    d3.add_to(pos[2][fc], col, s);
                }
            }
        }
        ChainComplex {
            dims,
            d: [d1, d2, d3],
            kept,
        }
    }

    fn groups(&self) -> [HomologyGroup; 4] {
        let snf: Vec<SmithForm> = self.d.iter().map(smith_normal_form).collect();
        let rank = |k: usize| -> usize {
            // rank of the map out of C_k
            if k == 0 {
                0
            } else {
                snf[k - 1].rank()
            }
        };
        let mut out: [HomologyGroup; 4] = Default::default();
        for k in 0..4 {
            let into = if k < 3 { snf[k].rank() } else { 0 };
            let betti = self.dims[k] - rank(k) - into;
            let torsion = if k < 3 {
                snf[k]
                    .diagonal
                    .iter()
                    .filter(|d| !d.is_zero() && !d.is_one())
                    .map(|d| d.magnitude().clone())
                    .collect()
            } else {
                Vec::new()
            };
            out[k] = HomologyGroup { betti, torsion };
        }
        out
    }
}

/// `H₀, …, H₃` with integer coefficients.
pub fn homology_groups(m: &Manifold) -> [HomologyGroup; 4] {
    ChainComplex::new(m.triangulation(), m.skeleton(), Cells::All).groups()
}

/// `H_k(M, ∂M)` for `k = 0..3`; equal to absolute homology when closed.
pub fn relative_homology(m: &Manifold) -> [HomologyGroup; 4] {
    ChainComplex::new(m.triangulation(), m.skeleton(), Cells::Interior).groups()
}

/// Homology of the boundary surface.
pub fn boundary_homology(m: &Manifold) -> [HomologyGroup; 4] {
    ChainComplex::new(m.triangulation(), m.skeleton(), Cells::Boundary).groups()
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("the triangulation has no boundary")]
    EmptyBoundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PeripheralMap {
    /// Rank of the image of `H₁(∂M; Q) → H₁(M; Q)`.
    pub image_rank: usize,
    /// `β₁(M)`.
    pub target_rank: usize,
    /// `dim H₁(∂M; Q)`.
    pub source_rank: usize,
    pub surjective: bool,
}

/// The map on rational first homology induced by `∂M ⊂ M`.
pub fn peripheral_map(m: &Manifold) -> Result<PeripheralMap, HomologyError> {
    let tri = m.triangulation();
    if !tri.has_boundary() {
        return Err(HomologyError::EmptyBoundary);
    }
    let skel = m.skeleton();
    let full = ChainComplex::new(tri, skel, Cells::All);
    let bd = ChainComplex::new(tri, skel, Cells::Boundary);

    // Integral basis of the boundary 1-cycles: columns of V past the rank.
    let s = smith_normal_form(&bd.d[0]);
    let r = s.rank();
    let nz = bd.dims[1] - r;
    let mut cycles = IntegerMatrix::zeros(full.dims[1], nz);
    for (k, col) in (r..bd.dims[1]).enumerate() {
        for (row, &e) in bd.kept[1].iter().enumerate() {
            cycles.set(e, k, s.v.get(row, col).clone());
        }
    }
    let d2 = &full.d[1];
    let image_rank = d2.hcat(&cycles).rank() - d2.rank();
    let groups = full.groups();
    let source_rank = bd.groups()[1].betti;
    Ok(PeripheralMap {
        image_rank,
        target_rank: groups[1].betti,
        source_rank,
        surjective: image_rank == groups[1].betti,
    })
}

/// Rank bookkeeping for `0 → H₂(M,∂M; Q) → H₁(∂M; Q) → H₁(M; Q) → 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessReport {
    /// False when `H₁(∂M; Q) = 0` and the sequence says nothing.
    pub applicable: bool,
    pub rel_h2_rank: usize,
    pub boundary_h1_rank: usize,
    pub h1_rank: usize,
    pub image_rank: usize,
    /// Whether the sequence is exact: the inclusion map is onto and its
    /// kernel has the rank of `H₂(M,∂M; Q)`.
    pub exact: bool,
    pub torus_components: usize,
    /// `dim H₁(∂M; Q) = 2` per torus, when every component is a torus.
    pub torus_rank_ok: bool,
    pub note: String,
}

pub fn exactness_check(m: &Manifold) -> Result<ExactnessReport, HomologyError> {
    let p = peripheral_map(m)?;
    let rel = relative_homology(m);
    let comps = boundary_components(m.triangulation());
    let tori = comps.iter().filter(|c| c.is_torus()).count();
    let applicable = p.source_rank > 0;
    let exact = p.image_rank == p.target_rank && p.source_rank - p.image_rank == rel[2].betti;
    let torus_rank_ok = tori != comps.len() || p.source_rank == 2 * tori;
    let note = if !applicable {
        String::from("not applicable")
    } else if exact {
        alloc::format!(
            "exact: {} + {} = {}",
            rel[2].betti,
            p.image_rank,
            p.source_rank
        )
    } else {
        alloc::format!(
            "not exact: deficit {} at H1(M), {} at H2(M,dM)",
            p.target_rank - p.image_rank,
            (p.source_rank - p.image_rank).abs_diff(rel[2].betti)
        )
    };
    Ok(ExactnessReport {
        applicable,
        rel_h2_rank: rel[2].betti,
        boundary_h1_rank: p.source_rank,
        h1_rank: p.target_rank,
        image_rank: p.image_rank,
        exact: applicable && exact,
        torus_components: tori,
        torus_rank_ok,
        note,
    })
}
