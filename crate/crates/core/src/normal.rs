//! Normal surfaces in standard coordinates.
//!
//! Tetrahedron `i` owns coordinates `7i..7i+7`: the triangles cutting off
//! vertices 0 to 3, then the quadrilaterals separating `{0,1}|{2,3}`,
//! `{0,2}|{1,3}` and `{0,3}|{1,2}`. Quadrilateral type `q` pairs vertex 0
//! with vertex `q + 1`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use crate::homology::IntegerMatrix;
use crate::linalg;
use crate::skeleton::{Manifold, Skeleton};
use crate::triangulation::{edge_index, face_vertices, Triangulation, EDGE_VERTICES};
use crate::util::{Bits, ParityUnionFind, UnionFind};

pub type NormalCoordinates = Vec<u64>;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NormalError {
    #[error("expected {expected} coordinates, found {found}")]
    Length { expected: usize, found: usize },
    #[error("the coordinates are not an admissible normal surface")]
    Inadmissible,
}

/// Quadrilateral type separating `v` from `w`'s partner, i.e. pairing `v`
/// with `w`.
#[inline]
pub fn quad_pairing(v: u8, w: u8) -> usize {
    debug_assert_ne!(v, w);
    let partner_of_zero = if v == 0 {
        w
    } else if w == 0 {
        v
    } else {
        6 - v - w
    };
    partner_of_zero as usize - 1
}

/// Whether `v` lies with vertex 0 under quadrilateral type `q`.
#[inline]
fn on_zero_side(q: usize, v: u8) -> bool {
    v == 0 || v as usize == q + 1
}

#[inline]
fn tri_col(tet: usize, v: u8) -> usize {
    7 * tet + v as usize
}

#[inline]
fn quad_col(tet: usize, q: usize) -> usize {
    7 * tet + 4 + q
}

/// One matching equation: the arcs cutting off `vertex` (a vertex of the
/// face in its lower side's labels) agree on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingRow {
    pub face_class: usize,
    pub vertex: u8,
    /// Sparse coefficients `(column, value)`, sorted by column.
    pub coeffs: Vec<(usize, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchingSystem {
    pub tetrahedra: usize,
    pub rows: Vec<MatchingRow>,
}

impl MatchingSystem {
    pub fn columns(&self) -> usize {
        7 * self.tetrahedra
    }

    pub fn matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.rows.len(), self.columns());
        for (i, r) in self.rows.iter().enumerate() {
            for &(c, v) in &r.coeffs {
                m.set(i, c, v.into());
            }
        }
        m
    }

    fn dense(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![0; self.columns()];
                for &(c, v) in &r.coeffs {
                    d[c] = v;
                }
                d
            })
            .collect()
    }

    pub fn satisfied_by(&self, x: &[u64]) -> bool {
        self.rows
            .iter()
            .all(|r| r.coeffs.iter().map(|&(c, v)| v as i128 * x[c] as i128).sum::<i128>() == 0)
    }
}

pub fn matching_system(m: &Manifold) -> MatchingSystem {
    let tri = m.triangulation();
    let skel = m.skeleton();
    let mut rows = Vec::new();
    for (fc, face) in skel.faces.iter().enumerate() {
        if face.is_boundary() {
            continue;
        }
        let (i, f) = face.sides[0];
        let g = tri.gluing(i, f).expect("internal face");
        for v in face_vertices(f) {
            let w = g.perm.apply(v);
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            *acc.entry(tri_col(i, v)).or_default() += 1;
            *acc.entry(quad_col(i, quad_pairing(v, f))).or_default() += 1;
            *acc.entry(tri_col(g.tet, w)).or_default() -= 1;
            *acc.entry(quad_col(g.tet, quad_pairing(w, g.face))).or_default() -= 1;
            rows.push(MatchingRow {
                face_class: fc,
                vertex: v,
                coeffs: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
            });
        }
    }
    MatchingSystem {
        tetrahedra: tri.size(),
        rows,
    }
}

fn check_len(tri: &Triangulation, x: &[u64]) -> Result<(), NormalError> {
    if x.len() != 7 * tri.size() {
        return Err(NormalError::Length {
            expected: 7 * tri.size(),
            found: x.len(),
        });
    }
    Ok(())
}

/// At most one nonzero quadrilateral type per tetrahedron.
pub fn quad_condition(x: &[u64]) -> bool {
    x.chunks(7).all(|c| c[4..].iter().filter(|&&q| q != 0).count() <= 1)
}

pub fn is_admissible(m: &Manifold, x: &[u64]) -> Result<bool, NormalError> {
    check_len(m.triangulation(), x)?;
    Ok(quad_condition(x) && matching_system(m).satisfied_by(x))
}

/// Triangle-only vector of the link of each vertex class.
pub fn vertex_links(m: &Manifold) -> Vec<NormalCoordinates> {
    let t = m.triangulation().size();
    m.skeleton()
        .vertices
        .iter()
        .map(|v| {
            let mut x = vec![0; 7 * t];
            for &(tet, w) in &v.corners {
                x[tri_col(tet, w)] += 1;
            }
            x
        })
        .collect()
}

fn support_bits(x: &[i64]) -> Bits {
    let mut b = Bits::new(x.len());
    for (i, &v) in x.iter().enumerate() {
        if v != 0 {
            b.set(i);
        }
    }
    b
}

fn quad_valid_bits(b: &Bits, t: usize) -> bool {
    (0..t).all(|i| (0..3).filter(|&q| b.get(quad_col(i, q))).count() <= 1)
}

fn to_coords(x: &[i64]) -> NormalCoordinates {
    x.iter().map(|&v| v as u64).collect()
}

struct Ray {
    x: Vec<i64>,
    support: Bits,
}

/// Minimal integer points on the extreme rays of the admissible cone, in
/// lexicographic order.
///
/// Double description over the matching equations, starting from the unit
/// vectors of the orthant. Supports are unions of the supports of their
/// parents, so rays breaking the quadrilateral condition can be dropped as
/// soon as they appear. Adjacency is decided combinatorially.
pub fn enumerate_vertex_solutions(m: &Manifold) -> Vec<NormalCoordinates> {
    let sys = matching_system(m);
    let n = sys.columns();
    let t = sys.tetrahedra;
    let mut rays: Vec<Ray> = (0..n)
        .map(|i| {
            let mut x = vec![0; n];
            x[i] = 1;
            Ray {
                support: support_bits(&x),
                x,
            }
        })
        .collect();
    for (k, row) in sys.rows.iter().enumerate() {
        let eval = |x: &[i64]| row.coeffs.iter().map(|&(c, v)| v * x[c]).sum::<i64>();
        let vals: Vec<i64> = rays.iter().map(|r| eval(&r.x)).collect();
        if vals.iter().all(|&v| v == 0) {
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i] < 0).collect();
        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let union = rays[p].support.or(&rays[q].support);
                if !quad_valid_bits(&union, t) || union.count() > k + 2 {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(r, ray)| r == p || r == q || !ray.support.is_subset_of(&union));
                if !adjacent {
                    continue;
                }
                let (a, b) = (vals[p], -vals[q]);
                let mut x: Vec<i64> = rays[p]
                    .x
                    .iter()
                    .zip(&rays[q].x)
                    .map(|(&u, &w)| b.checked_mul(u).and_then(|s| a.checked_mul(w).and_then(|z| s.checked_add(z))))
                    .map(|v| v.expect("coordinate overflow"))
                    .collect();
                linalg::gcd_normalize(&mut x);
                next.push(Ray { x, support: union });
            }
        }
        rays = rays
            .into_iter()
            .zip(&vals)
            .filter(|(_, &v)| v == 0)
            .map(|(r, _)| r)
            .chain(next)
            .collect();
    }
    let mut out: Vec<NormalCoordinates> = rays.iter().map(|r| to_coords(&r.x)).collect();
    out.sort();
    out.dedup();
    out
}

/// Extreme rays by exhaustive search over quadrilateral-valid supports: a
/// support carries an extreme ray exactly when the matching matrix
/// restricted to it has a one-dimensional kernel spanned by a strictly
/// positive vector. Columns only ever raise the kernel dimension, which
/// prunes the search.
pub fn vertex_solutions_brute_force(m: &Manifold) -> Vec<NormalCoordinates> {
    let sys = matching_system(m);
    let rows = sys.dense();
    let t = sys.tetrahedra;
    let mut out = Vec::new();
    let mut cols = Vec::new();
    brute_force_rec(&rows, t, 0, &mut cols, &mut out);
    out.sort();
    out
}

fn brute_force_rec(rows: &[Vec<i64>], t: usize, tet: usize, cols: &mut Vec<usize>, out: &mut Vec<NormalCoordinates>) {
    let nullity = cols.len() - linalg::rank(rows, cols);
    if nullity >= 2 {
        return;
    }
    if tet == t {
        if nullity == 1 {
            let k = linalg::kernel(rows, cols).pop().unwrap();
            let sign = k[0].signum();
            if k.iter().all(|&v| v * sign > 0) {
                let mut x = vec![0u64; 7 * t];
                for (&c, &v) in cols.iter().zip(&k) {
                    x[c] = (v * sign) as u64;
                }
                out.push(x);
            }
        }
        return;
    }
    let base = cols.len();
    for quad in 0..4usize {
        for tris in 0..16u32 {
            cols.truncate(base);
            for v in 0..4u8 {
                if tris >> v & 1 == 1 {
                    cols.push(tri_col(tet, v));
                }
            }
            if quad > 0 {
                cols.push(quad_col(tet, quad - 1));
            }
            brute_force_rec(rows, t, tet + 1, cols, out);
        }
    }
    cols.truncate(base);
}

/// Which candidate vectors the completion keeps; any such filter must be
/// closed under taking smaller vectors.
#[derive(Clone, Copy)]
struct Filter {
    tetrahedra: usize,
    quads: bool,
    box_bound: Option<u64>,
}

struct Elem {
    x: Vec<i64>,
    nz: Vec<(usize, i64)>,
    norm: i64,
}

impl Elem {
    fn new(x: Vec<i64>) -> Elem {
        Elem {
            nz: x.iter().enumerate().filter(|(_, &v)| v != 0).map(|(i, &v)| (i, v)).collect(),
            norm: x.iter().sum(),
            x,
        }
    }

    /// `self ≤ u + v` on the support of `self`.
    fn below_sum(&self, u: &[i64], v: &[i64]) -> bool {
        self.nz.iter().all(|&(i, a)| a <= u[i] + v[i])
    }
}

/// The growing generating set, with supports and residues stored flat so
/// that scanning for a reducer walks contiguous memory.
struct Pool {
    elems: Vec<Elem>,
    words: usize,
    support: Vec<u64>,
    residue: Vec<i64>,
}

impl Pool {
    fn push(&mut self, x: Vec<i64>, r: i64) {
        let start = self.support.len();
        self.support.resize(start + self.words, 0);
        for (i, &v) in x.iter().enumerate() {
            if v != 0 {
                self.support[start + i / 64] |= 1 << (i % 64);
            }
        }
        self.residue.push(r);
        self.elems.push(Elem::new(x));
    }

    fn support(&self, k: usize) -> &[u64] {
        &self.support[k * self.words..(k + 1) * self.words]
    }

    /// Some element below `u + v` whose residue has the sign of `r` (or is
    /// zero) and no larger size.
    fn reducer(&self, union: &[u64], r: i64, u: usize, v: usize) -> Option<usize> {
        let (xu, xv) = (&self.elems[u].x, &self.elems[v].x);
        (0..self.elems.len()).find(|&k| {
            self.support(k).iter().zip(union).all(|(s, w)| s & !w == 0) && {
                let e = self.residue[k];
                (e == 0 || (e.signum() == r.signum() && e.abs() <= r.abs())) && self.elems[k].below_sum(xu, xv)
            }
        })
    }
}

/// Hilbert basis of `{x ≥ 0 : earlier rows = 0, row·x = 0}` from the basis
/// `h` of the cone without `row`, by completion. Sums of two elements whose
/// residues have opposite signs are visited by increasing coordinate sum and
/// kept unless some element lies below them with a residue of the same
/// sign and no larger size.
fn complete_one(mut h: Vec<Vec<i64>>, row: &[(usize, i64)], filter: Filter) -> Vec<Vec<i64>> {
    let eval = |x: &[i64]| row.iter().map(|&(c, v)| v * x[c]).sum::<i64>();
    if h.iter().all(|x| eval(x) == 0) {
        return h;
    }
    h.sort_by_key(|x| (x.iter().sum::<i64>(), x.clone()));
    let n = h[0].len();
    let mut pool = Pool {
        elems: Vec::with_capacity(h.len()),
        words: n.div_ceil(64),
        support: Vec::new(),
        residue: Vec::new(),
    };
    let mut pos: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let mut neg: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    let index = |pool: &Pool, k: usize, pos: &mut BTreeMap<i64, Vec<usize>>, neg: &mut BTreeMap<i64, Vec<usize>>| {
        let norm = pool.elems[k].norm;
        match pool.residue[k].signum() {
            1 => pos.entry(norm).or_default().push(k),
            -1 => neg.entry(norm).or_default().push(k),
            _ => {}
        }
    };
    for x in h {
        let r = eval(&x);
        pool.push(x, r);
        index(&pool, pool.elems.len() - 1, &mut pos, &mut neg);
    }
    let mut union = vec![0u64; pool.words];
    let mut union_bits = Bits::new(n);
    let mut last: Option<usize> = None;
    let mut level = pos.keys().next().unwrap_or(&0) + neg.keys().next().unwrap_or(&0);
    loop {
        let (Some(&pmax), Some(&nmax)) = (pos.keys().next_back(), neg.keys().next_back()) else { break };
        if level > pmax + nmax {
            break;
        }
        let first_new = pool.elems.len();
        let pairs: Vec<(usize, usize)> = pos
            .range(..level)
            .filter_map(|(&np, ps)| neg.get(&(level - np)).map(|ns| (ps, ns)))
            .flat_map(|(ps, ns)| ps.iter().flat_map(move |&p| ns.iter().map(move |&q| (p, q))))
            .collect();
        for (p, q) in pairs {
            for ((w, a), b) in union.iter_mut().zip(pool.support(p)).zip(pool.support(q)) {
                *w = a | b;
            }
            union_bits.copy_from_words(&union);
            if filter.quads && !quad_valid_bits(&union_bits, filter.tetrahedra) {
                continue;
            }
            let (u, v) = (&pool.elems[p], &pool.elems[q]);
            if let Some(b) = filter.box_bound {
                if u.nz.iter().chain(&v.nz).any(|&(i, _)| (u.x[i] + v.x[i]) as u64 > b) {
                    continue;
                }
            }
            let r = pool.residue[p] + pool.residue[q];
            // The last reducer found is often the next one too.
            if let Some(k) = last {
                let e = pool.residue[k];
                if pool.support(k).iter().zip(&union).all(|(s, w)| s & !w == 0)
                    && (e == 0 || (e.signum() == r.signum() && e.abs() <= r.abs()))
                    && pool.elems[k].below_sum(&u.x, &v.x)
                {
                    continue;
                }
            }
            if let Some(k) = pool.reducer(&union, r, p, q) {
                last = Some(k);
                continue;
            }
            let x: Vec<i64> = u.x.iter().zip(&v.x).map(|(a, b)| a + b).collect();
            pool.push(x, r);
        }
        for k in first_new..pool.elems.len() {
            index(&pool, k, &mut pos, &mut neg);
        }
        level += 1;
    }
    // Elements arrive by increasing size and are kept only when nothing
    // earlier lies below them, so the zero-residue ones are already minimal.
    let mut out: Vec<Vec<i64>> = pool
        .elems
        .into_iter()
        .zip(&pool.residue)
        .filter(|(_, &r)| r == 0)
        .map(|(e, _)| e.x)
        .collect();
    out.sort();
    out
}

fn hilbert_basis(sys: &MatchingSystem, columns: &[usize], filter: Filter) -> Vec<Vec<i64>> {
    let n = sys.columns();
    let mut basis: Vec<Vec<i64>> = columns
        .iter()
        .map(|&i| {
            let mut x = vec![0; n];
            x[i] = 1;
            x
        })
        .collect();
    for idx in equation_order(sys) {
        basis = complete_one(basis, &sys.rows[idx].coeffs, filter);
    }
    basis
}

/// Rows ordered so that each touches as few new tetrahedra as possible.
fn equation_order(sys: &MatchingSystem) -> Vec<usize> {
    let mut seen = vec![false; sys.tetrahedra];
    let mut left: BTreeSet<usize> = (0..sys.rows.len()).collect();
    let mut order = Vec::with_capacity(sys.rows.len());
    while !left.is_empty() {
        let cost = |r: usize| {
            let mut tets: Vec<usize> = sys.rows[r].coeffs.iter().map(|&(c, _)| c / 7).filter(|&i| !seen[i]).collect();
            tets.dedup();
            tets.len()
        };
        let best = *left.iter().min_by_key(|&&r| (cost(r), r)).unwrap();
        left.remove(&best);
        for &(c, _) in &sys.rows[best].coeffs {
            seen[c / 7] = true;
        }
        order.push(best);
    }
    order
}

/// Fundamental solutions: the admissible integer vectors that are not a sum
/// of two nonzero admissible vectors, in lexicographic order. With
/// `box_bound`, only those with every entry at most the bound.
///
/// Every conformal partial sum of an admissible vector lies below it, so the
/// completion can discard vectors breaking the quadrilateral condition (or
/// leaving the box) throughout.
pub fn enumerate_fundamental_solutions(m: &Manifold, box_bound: Option<u64>) -> Vec<NormalCoordinates> {
    let sys = matching_system(m);
    let t = sys.tetrahedra;
    let filter = Filter {
        tetrahedra: t,
        quads: true,
        box_bound,
    };
    let cols: Vec<usize> = (0..sys.columns()).collect();
    let mut out: Vec<NormalCoordinates> = hilbert_basis(&sys, &cols, filter).iter().map(|x| to_coords(x)).collect();
    out.sort();
    out
}

/// The same set computed chamber by chamber: one Hilbert basis per choice of
/// a single permitted quadrilateral type in each tetrahedron, merged.
pub fn enumerate_fundamental_solutions_chambered(m: &Manifold, box_bound: Option<u64>) -> Vec<NormalCoordinates> {
    let sys = matching_system(m);
    let t = sys.tetrahedra;
    let filter = Filter {
        tetrahedra: t,
        quads: false,
        box_bound,
    };
    let mut all = BTreeSet::new();
    let chambers = 3usize.pow(t as u32);
    for c in 0..chambers {
        let mut cols = Vec::with_capacity(5 * t);
        let mut code = c;
        for i in 0..t {
            cols.extend((0..4).map(|v| tri_col(i, v)));
            cols.push(quad_col(i, code % 3));
            code /= 3;
        }
        for x in hilbert_basis(&sys, &cols, filter) {
            all.insert(to_coords(&x));
        }
    }
    // Summands of a vector lie below it and so in its chamber: the union is
    // exactly the fundamental set.
    all.into_iter().collect()
}

/// Crossings of each disc type with local edge `(a, b)`.
fn edge_crossing(x: &[u64], tet: usize, a: u8, b: u8) -> u64 {
    let q = quad_pairing(a, b);
    let mut w = x[tri_col(tet, a)] + x[tri_col(tet, b)];
    for k in 0..3 {
        if k != q {
            w += x[quad_col(tet, k)];
        }
    }
    w
}

/// Weight from one corner of each edge class.
pub fn weight_formula(m: &Manifold, x: &[u64]) -> u64 {
    m.skeleton()
        .edges
        .iter()
        .map(|e| {
            let (tet, le) = e.corners[0];
            let (a, b) = EDGE_VERTICES[le as usize];
            edge_crossing(x, tet, a, b)
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceComponent {
    pub discs: u64,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub two_sided: bool,
    pub boundary_curves: usize,
}

impl SurfaceComponent {
    /// Name of the surface, or a genus description.
    pub fn name(&self) -> alloc::string::String {
        let (chi, b) = (self.euler_characteristic, self.boundary_curves as i64);
        let named = match (chi, self.orientable, b) {
            (2, true, 0) => Some("sphere"),
            (1, true, 1) => Some("disc"),
            (1, false, 0) => Some("projective plane"),
            (0, true, 0) => Some("torus"),
            (0, true, 2) => Some("annulus"),
            (0, false, 0) => Some("klein bottle"),
            (0, false, 1) => Some("mobius band"),
            _ => None,
        };
        match named {
            Some(n) => n.into(),
            None if self.orientable => alloc::format!("orientable genus {} with {} boundary curves", (2 - chi - b) / 2, b),
            None => alloc::format!("non-orientable genus {} with {} boundary curves", 2 - chi - b, b),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalSurface {
    pub coords: NormalCoordinates,
    pub components: Vec<SurfaceComponent>,
    pub euler_characteristic: i64,
    pub weight: u64,
    pub orientable: bool,
    pub two_sided: bool,
    pub boundary_curves: usize,
    /// Equal to the link of some vertex.
    pub vertex_link: bool,
}

impl NormalSurface {
    pub fn disc_count(&self) -> u64 {
        self.coords.iter().sum()
    }

    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }
}

/// Position of copy `k` of quad type `q` counted from vertex `v`'s side.
fn quad_pos(q: usize, v: u8, k: u64, count: u64) -> u64 {
    if on_zero_side(q, v) {
        k
    } else {
        count - 1 - k
    }
}

struct Points<'a> {
    skel: &'a Skeleton,
    offset: Vec<u64>,
    weight: Vec<u64>,
}

impl Points<'_> {
    /// Global id of the point at distance `pos` from `a` on local edge
    /// `(a, b)` of `tet`.
    fn id(&self, tet: usize, a: u8, b: u8, pos: u64) -> usize {
        let le = edge_index(a.min(b), a.max(b));
        let e = self.skel.edge_of(tet, le);
        let w = self.weight[e];
        let from_low = if a < b { pos } else { w - 1 - pos };
        let along = if self.skel.edge_reversed(tet, le) { w - 1 - from_low } else { from_low };
        (self.offset[e] + along) as usize
    }
}

/// Instantiates the discs of `x` and glues them into a surface.
pub fn build_surface(m: &Manifold, x: &[u64]) -> Result<NormalSurface, NormalError> {
    let tri = m.triangulation();
    let skel = m.skeleton();
    if !is_admissible(m, x)? {
        return Err(NormalError::Inadmissible);
    }
    // Points on edges.
    let mut weight = vec![0u64; skel.edges.len()];
    for (e, class) in skel.edges.iter().enumerate() {
        let (tet, le) = class.corners[0];
        let (a, b) = EDGE_VERTICES[le as usize];
        weight[e] = edge_crossing(x, tet, a, b);
        debug_assert!(class.corners.iter().all(|&(t2, l2)| {
            let (a2, b2) = EDGE_VERTICES[l2 as usize];
            edge_crossing(x, t2, a2, b2) == weight[e]
        }));
    }
    let mut offset = vec![0u64; skel.edges.len()];
    let mut total_points = 0u64;
    for e in 0..weight.len() {
        offset[e] = total_points;
        total_points += weight[e];
    }
    let points = Points { skel, offset, weight };

    // Discs: per tetrahedron and type, `x` copies.
    let mut disc_base = vec![0u64; x.len() + 1];
    for c in 0..x.len() {
        disc_base[c + 1] = disc_base[c] + x[c];
    }
    let total_discs = disc_base[x.len()];

    // Arcs, keyed by face class, vertex of the lower side, and distance.
    let mut arc_ids: BTreeMap<(usize, u8, u64), usize> = BTreeMap::new();
    let mut arc_disc: Vec<(usize, bool)> = Vec::new();
    let mut arc_points: Vec<(usize, usize)> = Vec::new();
    let mut arc_boundary: Vec<bool> = Vec::new();
    let mut uf = UnionFind::new(total_discs as usize);
    let mut sides = ParityUnionFind::new(total_discs as usize);
    let mut orient = ParityUnionFind::new(total_discs as usize);
    let mut conflicts_side: Vec<usize> = Vec::new();
    let mut conflicts_orient: Vec<usize> = Vec::new();

    for tet in 0..tri.size() {
        for c in 0..7 {
            let col = 7 * tet + c;
            for k in 0..x[col] {
                let disc = (disc_base[col] + k) as usize;
                for f in 0..4u8 {
                    // The vertex of face f cut off by this disc, its
                    // distance from it, and whether it lies on the disc's
                    // reference side.
                    let (v, pos, v_positive) = if c < 4 {
                        let v = c as u8;
                        if v == f {
                            continue;
                        }
                        (v, k, true)
                    } else {
                        let q = c - 4;
                        let v = (0..4u8).find(|&u| u != f && quad_pairing(u, f) == q).unwrap();
                        (v, x[tri_col(tet, v)] + quad_pos(q, v, k, x[col]), on_zero_side(q, v))
                    };
                    // Key the arc by the lower side's labels.
                    let fc = skel.face_of(tet, f);
                    let gluing = tri.gluing(tet, f);
                    let key_v = match gluing {
                        Some(g) if skel.faces[fc].sides[0] != (tet, f) => g.perm.apply(v),
                        _ => v,
                    };
                    let key = (fc, key_v, pos);
                    match arc_ids.get(&key) {
                        None => {
                            arc_ids.insert(key, arc_disc.len());
                            arc_disc.push((disc, v_positive));
                            let ws: Vec<u8> = face_vertices(f).into_iter().filter(|&w| w != v).collect();
                            arc_points.push((points.id(tet, v, ws[0], pos), points.id(tet, v, ws[1], pos)));
                            arc_boundary.push(gluing.is_none());
                        }
                        Some(&id) => {
                            // The disc on the other side of the face.
                            let (d0, positive0) = arc_disc[id];
                            uf.union(d0, disc);
                            let side_rel = positive0 != v_positive;
                            if !sides.union(d0, disc, side_rel) {
                                conflicts_side.push(d0);
                            }
                            // Odd gluings preserve the ambient orientation.
                            let odd = gluing.expect("internal face").perm.is_odd();
                            if !orient.union(d0, disc, side_rel == odd) {
                                conflicts_orient.push(d0);
                            }
                        }
                    }
                }
            }
        }
    }
    let arcs = arc_disc.len();
    let euler = total_points as i64 - arcs as i64 + total_discs as i64;

    // Components and their invariants.
    let (labels, count) = uf.labels();
    let mut comps = vec![
        SurfaceComponent {
            discs: 0,
            euler_characteristic: 0,
            orientable: true,
            two_sided: true,
            boundary_curves: 0,
        };
        count
    ];
    for d in 0..total_discs as usize {
        comps[labels[d]].discs += 1;
        comps[labels[d]].euler_characteristic += 1;
    }
    let mut point_comp = vec![usize::MAX; total_points as usize];
    for (a, &(d, _)) in arc_disc.iter().enumerate() {
        let c = labels[d];
        comps[c].euler_characteristic -= 1;
        let (p, q) = arc_points[a];
        point_comp[p] = c;
        point_comp[q] = c;
    }
    for &c in &point_comp {
        comps[c].euler_characteristic += 1;
    }
    for d in conflicts_side {
        comps[labels[d]].two_sided = false;
    }
    for d in conflicts_orient {
        comps[labels[d]].orientable = false;
    }
    // Boundary curves: boundary arcs joined at their end points.
    let mut buf = UnionFind::new(arcs + total_points as usize);
    for a in 0..arcs {
        if arc_boundary[a] {
            let (p, q) = arc_points[a];
            buf.union(a, arcs + p);
            buf.union(a, arcs + q);
        }
    }
    let mut seen = BTreeSet::new();
    for a in 0..arcs {
        if arc_boundary[a] && seen.insert(buf.find(a)) {
            comps[labels[arc_disc[a].0]].boundary_curves += 1;
        }
    }
    let links = vertex_links(m);
    Ok(NormalSurface {
        coords: x.to_vec(),
        euler_characteristic: euler,
        weight: total_points,
        orientable: comps.iter().all(|c| c.orientable),
        two_sided: comps.iter().all(|c| c.two_sided),
        boundary_curves: comps.iter().map(|c| c.boundary_curves).sum(),
        vertex_link: links.iter().any(|l| l.as_slice() == x),
        components: comps,
    })
}

/// Whether `x` lies on an extreme ray of the admissible cone.
pub fn is_extreme(m: &Manifold, x: &[u64]) -> Result<bool, NormalError> {
    if !is_admissible(m, x)? {
        return Ok(false);
    }
    let cols: Vec<usize> = (0..x.len()).filter(|&i| x[i] != 0).collect();
    if cols.is_empty() {
        return Ok(false);
    }
    let rows = matching_system(m).dense();
    Ok(cols.len() - linalg::rank(&rows, &cols) == 1)
}

/// Connected, two-sided, extreme, and the least integer point on its ray.
pub fn is_vertex_surface(m: &Manifold, x: &[u64]) -> Result<bool, NormalError> {
    if !is_extreme(m, x)? {
        return Ok(false);
    }
    let g = x.iter().fold(0u64, |g, &v| num_integer::gcd(g, v));
    if g != 1 {
        return Ok(false);
    }
    let s = build_surface(m, x)?;
    Ok(s.is_connected() && s.two_sided)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm4;

    fn ball() -> Manifold {
        Manifold::new(Triangulation::new(1).unwrap()).unwrap()
    }

    fn ball2() -> Manifold {
        let mut t = Triangulation::new(2).unwrap();
        t.join(0, 0, 1, Perm4::IDENTITY).unwrap();
        Manifold::new(t).unwrap()
    }

    fn s3() -> Manifold {
        let mut t = Triangulation::new(1).unwrap();
        t.join(0, 0, 0, Perm4::from_images([1, 0, 2, 3]).unwrap()).unwrap();
        t.join(0, 2, 0, Perm4::from_images([1, 2, 3, 0]).unwrap()).unwrap();
        Manifold::new(t).unwrap()
    }

    fn unit(n: usize, i: usize) -> Vec<u64> {
        let mut x = vec![0; n];
        x[i] = 1;
        x
    }

    #[test]
    fn quad_pairings() {
        assert_eq!(quad_pairing(0, 1), 0);
        assert_eq!(quad_pairing(2, 3), 0);
        assert_eq!(quad_pairing(1, 3), 1);
        assert_eq!(quad_pairing(2, 1), 2);
    }

    #[test]
    fn equation_counts() {
        assert_eq!(matching_system(&ball()).rows.len(), 0);
        let s = matching_system(&ball2());
        assert_eq!((s.rows.len(), s.columns()), (3, 14));
        let s = matching_system(&s3());
        assert_eq!((s.rows.len(), s.columns()), (6, 7));
        for x in vertex_links(&s3()) {
            assert!(s.satisfied_by(&x));
        }
    }

    #[test]
    fn admissibility() {
        assert!(is_admissible(&ball(), &[0; 7]).unwrap());
        assert!(is_admissible(&ball(), &unit(7, 2)).unwrap());
        assert!(!is_admissible(&ball(), &[0, 0, 0, 0, 1, 1, 0]).unwrap());
        assert_eq!(
            is_admissible(&ball(), &[0; 6]),
            Err(NormalError::Length { expected: 7, found: 6 })
        );
    }

    #[test]
    fn single_tetrahedron_solutions() {
        let units: Vec<Vec<u64>> = (0..7).rev().map(|i| unit(7, i)).collect();
        assert_eq!(enumerate_vertex_solutions(&ball()), units);
        assert_eq!(enumerate_fundamental_solutions(&ball(), None), units);
        assert_eq!(vertex_solutions_brute_force(&ball()), units);
    }

    #[test]
    fn surfaces_in_small_cases() {
        let empty = build_surface(&ball(), &[0; 7]).unwrap();
        assert_eq!((empty.components.len(), empty.euler_characteristic, empty.weight), (0, 0, 0));
        let tri = build_surface(&ball(), &unit(7, 0)).unwrap();
        assert_eq!(tri.components.len(), 1);
        assert_eq!((tri.euler_characteristic, tri.weight, tri.boundary_curves), (1, 3, 1));
        assert!(tri.two_sided && tri.orientable);
        assert_eq!(tri.components[0].name(), "disc");
        let quad = build_surface(&ball(), &unit(7, 5)).unwrap();
        assert_eq!((quad.euler_characteristic, quad.weight), (1, 4));
        let link = &vertex_links(&s3())[0];
        let s = build_surface(&s3(), link).unwrap();
        assert!(s.vertex_link && s.two_sided && s.is_connected());
        assert_eq!(s.euler_characteristic, 2);
        assert_eq!(s.weight, weight_formula(&s3(), link));
    }

    #[test]
    fn vertex_surface_flags() {
        let x = unit(7, 1);
        assert!(is_vertex_surface(&ball(), &x).unwrap());
        assert!(!is_vertex_surface(&ball(), &[0, 2, 0, 0, 0, 0, 0]).unwrap());
        assert!(!is_vertex_surface(&ball(), &[1, 1, 0, 0, 0, 0, 0]).unwrap());
    }
}
