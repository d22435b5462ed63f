//! Triangulated surfaces, used for the induced triangulation of `∂M`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::perm::sign3;
use crate::stellar::{self, Slot};
use crate::triangulation::{face_vertices, Triangulation};
use crate::util::UnionFind;

/// Edge `k` of a triangle is opposite vertex `k`. A gluing maps the vertex
/// labels of one triangle onto the other and carries edge `k` to edge `perm[k]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeGluing {
    pub tri: usize,
    pub edge: u8,
    pub perm: [u8; 3],
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Surface2 {
    tris: Vec<[Option<EdgeGluing>; 3]>,
}

/// Summary of one connected component of a surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceComponent {
    pub triangles: Vec<usize>,
    pub euler_characteristic: i64,
    pub orientable: bool,
    pub boundary_edges: usize,
}

impl SurfaceComponent {
    pub fn is_torus(&self) -> bool {
        self.orientable && self.euler_characteristic == 0 && self.boundary_edges == 0
    }

    pub fn is_sphere(&self) -> bool {
        self.euler_characteristic == 2 && self.boundary_edges == 0
    }
}

fn inverse3(p: [u8; 3]) -> [u8; 3] {
    let mut inv = [0u8; 3];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

impl Surface2 {
    pub fn with_triangles(n: usize) -> Surface2 {
        Surface2 {
            tris: vec![[None; 3]; n],
        }
    }

    pub fn size(&self) -> usize {
        self.tris.len()
    }

    pub fn gluing(&self, tri: usize, edge: u8) -> Option<EdgeGluing> {
        self.tris[tri][edge as usize]
    }

    /// Glues edge `edge` of `tri` to edge `perm[edge]` of `other`.
    ///
    /// Panics if either edge is already glued; surfaces are only assembled by
    /// trusted code in this crate and in tests.
    pub fn join(&mut self, tri: usize, edge: u8, other: usize, perm: [u8; 3]) {
        let target = perm[edge as usize];
        assert!(self.tris[tri][edge as usize].is_none(), "edge already glued");
        assert!(self.tris[other][target as usize].is_none(), "edge already glued");
        assert!(!(tri == other && edge == target), "edge glued to itself");
        self.tris[tri][edge as usize] = Some(EdgeGluing { tri: other, edge: target, perm });
        self.tris[other][target as usize] = Some(EdgeGluing {
            tri,
            edge,
            perm: inverse3(perm),
        });
    }

    fn vertex_classes(&self) -> (Vec<usize>, usize) {
        let n = self.size();
        let mut uf = UnionFind::new(3 * n);
        for (t, row) in self.tris.iter().enumerate() {
            for k in 0..3u8 {
                if let Some(g) = row[k as usize] {
                    for v in 0..3u8 {
                        if v != k {
                            uf.union(3 * t + v as usize, 3 * g.tri + g.perm[v as usize] as usize);
                        }
                    }
                }
            }
        }
        uf.labels()
    }

    pub fn components(&self) -> Vec<SurfaceComponent> {
        let n = self.size();
        let mut uf = UnionFind::new(n);
        for (t, row) in self.tris.iter().enumerate() {
            for g in row.iter().flatten() {
                uf.union(t, g.tri);
            }
        }
        let (comp, ncomp) = uf.labels();
        let (vclass, _) = self.vertex_classes();
        let orient = self.orientation_signs();

        let mut out = Vec::with_capacity(ncomp);
        for c in 0..ncomp {
            let triangles: Vec<usize> = (0..n).filter(|&t| comp[t] == c).collect();
            let mut verts: Vec<usize> = triangles
                .iter()
                .flat_map(|&t| (0..3).map(move |v| 3 * t + v))
                .map(|x| vclass[x])
                .collect();
            verts.sort_unstable();
            verts.dedup();
            let mut boundary_edges = 0usize;
            let mut glued_sides = 0usize;
            for &t in &triangles {
                for k in 0..3 {
                    if self.tris[t][k].is_some() {
                        glued_sides += 1;
                    } else {
                        boundary_edges += 1;
                    }
                }
            }
            let edges = glued_sides / 2 + boundary_edges;
            let euler = verts.len() as i64 - edges as i64 + triangles.len() as i64;
            let orientable = orient.as_ref().map_or_else(|| self.component_orientable(&triangles), |_| true);
            out.push(SurfaceComponent {
                triangles,
                euler_characteristic: euler,
                orientable,
                boundary_edges,
            });
        }
        out
    }

    fn orientation_signs(&self) -> Option<Vec<i8>> {
        let n = self.size();
        let mut sign = vec![0i8; n];
        for start in 0..n {
            if sign[start] != 0 {
                continue;
            }
            if !self.propagate(start, &mut sign) {
                return None;
            }
        }
        Some(sign)
    }

    fn propagate(&self, start: usize, sign: &mut [i8]) -> bool {
        sign[start] = 1;
        let mut stack = vec![start];
        let mut ok = true;
        while let Some(t) = stack.pop() {
            for g in self.tris[t].iter().flatten() {
                let want = if sign3(g.perm) < 0 { sign[t] } else { -sign[t] };
                if sign[g.tri] == 0 {
                    sign[g.tri] = want;
                    stack.push(g.tri);
                } else if sign[g.tri] != want {
                    ok = false;
                }
            }
        }
        ok
    }

    fn component_orientable(&self, triangles: &[usize]) -> bool {
        let mut sign = vec![0i8; self.size()];
        self.propagate(triangles[0], &mut sign)
    }

    fn slots(&self) -> Vec<[Slot<3>; 3]> {
        self.tris
            .iter()
            .map(|row| row.map(|g| g.map(|g| (g.tri, g.edge, g.perm))))
            .collect()
    }

    fn from_slots(table: Vec<[Slot<3>; 3]>) -> Surface2 {
        Surface2 {
            tris: table
                .into_iter()
                .map(|row| row.map(|s| s.map(|(tri, edge, perm)| EdgeGluing { tri, edge, perm })))
                .collect(),
        }
    }

    /// The 1-3 move: a new vertex inside triangle `tri`.
    pub fn flip_13(&self, tri: usize) -> Surface2 {
        let (table, _) = stellar::replace(&self.slots(), &[(tri, [0, 1, 2])], 1 << 3);
        Surface2::from_slots(table)
    }

    /// The 2-2 move across edge `edge` of `tri`, if the two sides are
    /// distinct triangles.
    pub fn flip_22(&self, tri: usize, edge: u8) -> Option<Surface2> {
        let mut lam = [0u8; 3];
        let mut next = 0;
        for v in 0..3u8 {
            lam[v as usize] = if v == edge {
                2
            } else {
                next += 1;
                next - 1
            };
        }
        let slots = self.slots();
        let mask = (1 << 2) | (1 << 3);
        let locus = stellar::propagate(&slots, tri, lam, mask)?;
        let (table, _) = stellar::replace(&slots, &locus, mask);
        Some(Surface2::from_slots(table))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.components().iter().map(|c| c.euler_characteristic).sum()
    }

    /// Canonical text encoding: equal for two surfaces iff they are
    /// combinatorially isomorphic. Components are encoded separately and
    /// sorted.
    pub fn canonical_signature(&self) -> String {
        let mut parts: Vec<Vec<u32>> = Vec::new();
        let n = self.size();
        let mut seen = vec![false; n];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let comp: Vec<usize> = self.component_of(start);
            let mut best: Option<Vec<u32>> = None;
            for &root in &comp {
                for perm in PERM3 {
                    if let Some(code) = self.encode_from(root, perm, best.as_deref()) {
                        best = Some(code);
                    }
                }
            }
            for &t in &comp {
                seen[t] = true;
            }
            parts.push(best.expect("component has a root"));
        }
        parts.sort();
        let mut s = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i > 0 {
                s.push('_');
            }
            let _ = write!(s, "{}", p.len() / 3);
            s.push(':');
            for (k, x) in p.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{x}");
            }
        }
        s
    }

    fn component_of(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.size()];
        let mut out = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < out.len() {
            let t = out[k];
            k += 1;
            for g in self.tris[t].iter().flatten() {
                if !seen[g.tri] {
                    seen[g.tri] = true;
                    out.push(g.tri);
                }
            }
        }
        out
    }

    /// Breadth-first relabelling from `root` with its vertices relabelled by
    /// `perm`; returns `None` as soon as the code exceeds `bound`.
    fn encode_from(&self, root: usize, perm: [u8; 3], bound: Option<&[u32]>) -> Option<Vec<u32>> {
        let n = self.size();
        let mut index = vec![usize::MAX; n];
        let mut label: Vec<[u8; 3]> = vec![[0; 3]; n];
        let mut order = vec![root];
        index[root] = 0;
        label[root] = perm;
        let mut code: Vec<u32> = Vec::new();
        let mut less = false;
        let mut k = 0;
        while k < order.len() {
            let t = order[k];
            k += 1;
            let lab = label[t];
            let inv = inverse3(lab);
            for new_edge in 0..3u8 {
                let old_edge = inv[new_edge as usize];
                let token = match self.tris[t][old_edge as usize] {
                    None => 0,
                    Some(g) => {
                        if index[g.tri] == usize::MAX {
                            index[g.tri] = order.len();
                            order.push(g.tri);
                            // New triangle inherits labels so the gluing reads as identity.
                            let ginv = inverse3(g.perm);
                            label[g.tri] = [
                                lab[ginv[0] as usize],
                                lab[ginv[1] as usize],
                                lab[ginv[2] as usize],
                            ];
                        }
                        let tl = label[g.tri];
                        // new perm: new labels of t -> new labels of g.tri
                        let mut np = [0u8; 3];
                        for v in 0..3u8 {
                            let old_v = inv[v as usize];
                            np[v as usize] = tl[g.perm[old_v as usize] as usize];
                        }
                        1 + 6 * index[g.tri] as u32 + perm3_index(np)
                    }
                };
                code.push(token);
                if !less {
                    if let Some(b) = bound {
                        let pos = code.len() - 1;
                        match token.cmp(&b[pos]) {
                            core::cmp::Ordering::Greater => return None,
                            core::cmp::Ordering::Less => less = true,
                            core::cmp::Ordering::Equal => {}
                        }
                    }
                }
            }
        }
        if !less && bound.is_some() {
            return None;
        }
        Some(code)
    }
}

const PERM3: [[u8; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

fn perm3_index(p: [u8; 3]) -> u32 {
    PERM3.iter().position(|q| *q == p).unwrap() as u32
}

/// The induced triangulation of the boundary, with the `(tet, face)` slot of
/// each boundary triangle. Triangle vertex `k` is the `k`-th smallest vertex
/// of the tetrahedron face.
pub fn boundary_surface(tri: &Triangulation) -> (Surface2, Vec<(usize, u8)>) {
    let slots = tri.boundary_faces();
    let mut index = vec![[usize::MAX; 4]; tri.size()];
    for (k, &(i, f)) in slots.iter().enumerate() {
        index[i][f as usize] = k;
    }
    let mut surf = Surface2::with_triangles(slots.len());
    for (k, &(i, f)) in slots.iter().enumerate() {
        let fv = face_vertices(f);
        for e in 0..3u8 {
            if surf.tris[k][e as usize].is_some() {
                continue;
            }
            let c = fv[e as usize];
            let (a, b) = match e {
                0 => (fv[1], fv[2]),
                1 => (fv[0], fv[2]),
                _ => (fv[0], fv[1]),
            };
            let (j, g, a2, b2) = walk_to_boundary(tri, i, f, a, b, c);
            let other = index[j][g as usize];
            let gv = face_vertices(g);
            let pos = |x: u8| gv.iter().position(|&y| y == x).unwrap() as u8;
            let c2 = 6 - a2 - b2 - g;
            let mut perm = [0u8; 3];
            perm[e as usize] = pos(c2);
            perm[fv.iter().position(|&y| y == a).unwrap()] = pos(a2);
            perm[fv.iter().position(|&y| y == b).unwrap()] = pos(b2);
            if other == k && perm[e as usize] == e {
                // An edge folded onto itself cannot occur in a valid manifold;
                // leave it unglued.
                continue;
            }
            if surf.tris[other][perm[e as usize] as usize].is_some() {
                continue;
            }
            surf.join(k, e, other, perm);
        }
    }
    (surf, slots)
}

/// Walks around the edge `{a, b}` starting from boundary face `f` of `i`,
/// whose third vertex is `c`, until the next boundary face. Returns that
/// face and the images of `a` and `b` in its tetrahedron.
pub(crate) fn walk_to_boundary(tri: &Triangulation, i: usize, f: u8, a: u8, b: u8, c: u8) -> (usize, u8, u8, u8) {
    let _ = f;
    let (mut cur, mut exit, mut a, mut b) = (i, c, a, b);
    loop {
        match tri.gluing(cur, exit) {
            None => return (cur, exit, a, b),
            Some(g) => {
                let (na, nb) = (g.perm.apply(a), g.perm.apply(b));
                exit = 6 - na - nb - g.face;
                cur = g.tet;
                a = na;
                b = nb;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm4;

    #[test]
    fn single_tetrahedron_boundary_is_a_sphere() {
        let tri = Triangulation::new(1).unwrap();
        let (surf, slots) = boundary_surface(&tri);
        assert_eq!(slots.len(), 4);
        let comps = surf.components();
        assert_eq!(comps.len(), 1);
        assert!(comps[0].is_sphere());
        assert!(comps[0].orientable);
    }

    #[test]
    fn signature_is_label_invariant() {
        let tri = Triangulation::new(1).unwrap();
        let (a, _) = boundary_surface(&tri);
        let mut two = Triangulation::new(2).unwrap();
        two.join(0, 2, 1, Perm4::from_images([1, 0, 3, 2]).unwrap()).unwrap();
        let (b, _) = boundary_surface(&two);
        assert_eq!(b.size(), 6);
        assert_ne!(a.canonical_signature(), b.canonical_signature());
        let mut two2 = Triangulation::new(2).unwrap();
        two2.join(1, 0, 0, Perm4::IDENTITY).unwrap();
        let (c, _) = boundary_surface(&two2);
        assert_eq!(b.canonical_signature(), c.canonical_signature());
    }

    #[test]
    fn flips_preserve_the_surface() {
        let tri = Triangulation::new(1).unwrap();
        let (sphere, _) = boundary_surface(&tri);
        let three = sphere.flip_13(0);
        assert_eq!(three.size(), 6);
        assert_eq!(three.euler_characteristic(), 2);
        let flipped = sphere.flip_22(0, 0).unwrap();
        assert_eq!(flipped.euler_characteristic(), 2);
        assert_ne!(flipped.canonical_signature(), sphere.canonical_signature());
        // The new diagonal is edge 0 of the first new triangle.
        let back = flipped.flip_22(2, 0).unwrap();
        assert_eq!(back.canonical_signature(), sphere.canonical_signature());
        let other = three.flip_22(4, 0).unwrap();
        assert_eq!(other.euler_characteristic(), 2);
        assert_eq!(other.size(), 6);
    }
}
