//! Vertex, edge and face classes, vertex links, and the manifold check.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Deref;

use crate::perm::sign3;
use crate::surface2::boundary_surface;
use crate::triangulation::{edge_index, face_vertices, Triangulation, EDGE_VERTICES};
use crate::util::{ParityUnionFind, UnionFind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LinkType {
    Sphere,
    Disc,
    Other,
}

impl LinkType {
    pub fn name(self) -> &'static str {
        match self {
            LinkType::Sphere => "sphere",
            LinkType::Disc => "disc",
            LinkType::Other => "other",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClass {
    /// `(tet, vertex)` pairs identified to this vertex.
    pub corners: Vec<(usize, u8)>,
    pub boundary: bool,
    pub link: LinkType,
    pub link_euler: i64,
    pub link_orientable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeClass {
    /// `(tet, local edge index)` pairs identified to this edge.
    pub corners: Vec<(usize, u8)>,
    pub boundary: bool,
    /// False if the edge is identified with itself in reverse.
    pub valid: bool,
}

impl EdgeClass {
    pub fn degree(&self) -> usize {
        self.corners.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceClass {
    /// One slot for a boundary face, two for an internal one (lower slot first).
    pub sides: Vec<(usize, u8)>,
}

impl FaceClass {
    pub fn is_boundary(&self) -> bool {
        self.sides.len() == 1
    }
}

/// The cell structure of a triangulation after identifications.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skeleton {
    pub vertices: Vec<VertexClass>,
    pub edges: Vec<EdgeClass>,
    pub faces: Vec<FaceClass>,
    vertex_of: Vec<[usize; 4]>,
    edge_of: Vec<[usize; 6]>,
    edge_rev: Vec<[bool; 6]>,
    face_of: Vec<[usize; 4]>,
    face_sign: Vec<[i8; 4]>,
}

impl Skeleton {
    pub fn new(tri: &Triangulation) -> Skeleton {
        let t = tri.size();

        let mut vuf = UnionFind::new(4 * t);
        let mut euf = ParityUnionFind::new(6 * t);
        let mut valid_conflict = Vec::new();
        for (i, f, g) in tri.internal_faces() {
            for v in 0..4u8 {
                if v != f {
                    vuf.union(4 * i + v as usize, 4 * g.tet + g.perm.apply(v) as usize);
                }
            }
            for &(a, b) in &EDGE_VERTICES {
                if a == f || b == f {
                    continue;
                }
                let (x, y) = (g.perm.apply(a), g.perm.apply(b));
                let flip = x > y;
                let here = 6 * i + edge_index(a, b);
                let there = 6 * g.tet + edge_index(x, y);
                if !euf.union(here, there, flip) {
                    valid_conflict.push(here);
                }
            }
        }

        let (vlabel, nv) = vuf.labels();
        let mut vertex_of = vec![[0usize; 4]; t];
        let mut vcorners = vec![Vec::new(); nv];
        for i in 0..t {
            for v in 0..4u8 {
                let c = vlabel[4 * i + v as usize];
                vertex_of[i][v as usize] = c;
                vcorners[c].push((i, v));
            }
        }

        // Dense edge labels by first occurrence of the root.
        let mut root_label = vec![usize::MAX; 6 * t];
        let mut edge_of = vec![[0usize; 6]; t];
        let mut edge_rev = vec![[false; 6]; t];
        let mut ecorners: Vec<Vec<(usize, u8)>> = Vec::new();
        for i in 0..t {
            for e in 0..6 {
                let (r, parity) = euf.find(6 * i + e);
                if root_label[r] == usize::MAX {
                    root_label[r] = ecorners.len();
                    ecorners.push(Vec::new());
                }
                let c = root_label[r];
                edge_of[i][e] = c;
                edge_rev[i][e] = parity;
                ecorners[c].push((i, e as u8));
            }
        }
        let mut evalid = vec![true; ecorners.len()];
        for x in valid_conflict {
            let (r, _) = euf.find(x);
            evalid[root_label[r]] = false;
        }

        let mut face_of = vec![[usize::MAX; 4]; t];
        let mut face_sign = vec![[1i8; 4]; t];
        let mut faces = Vec::new();
        for i in 0..t {
            for f in 0..4u8 {
                if face_of[i][f as usize] != usize::MAX {
                    continue;
                }
                let id = faces.len();
                face_of[i][f as usize] = id;
                match tri.gluing(i, f) {
                    None => faces.push(FaceClass { sides: vec![(i, f)] }),
                    Some(g) => {
                        face_of[g.tet][g.face as usize] = id;
                        let fv = face_vertices(f);
                        let gv = face_vertices(g.face);
                        let pos = |x: u8| gv.iter().position(|&y| y == x).unwrap() as u8;
                        let images = [pos(g.perm.apply(fv[0])), pos(g.perm.apply(fv[1])), pos(g.perm.apply(fv[2]))];
                        face_sign[g.tet][g.face as usize] = sign3(images) as i8;
                        faces.push(FaceClass {
                            sides: vec![(i, f), (g.tet, g.face)],
                        });
                    }
                }
            }
        }

        let mut ebound = vec![false; ecorners.len()];
        let mut vbound = vec![false; nv];
        for (i, f) in tri.boundary_faces() {
            for &(a, b) in &EDGE_VERTICES {
                if a != f && b != f {
                    ebound[edge_of[i][edge_index(a, b)]] = true;
                }
            }
            for v in 0..4u8 {
                if v != f {
                    vbound[vertex_of[i][v as usize]] = true;
                }
            }
        }

        let edges: Vec<EdgeClass> = ecorners
            .into_iter()
            .enumerate()
            .map(|(k, corners)| EdgeClass {
                corners,
                boundary: ebound[k],
                valid: evalid[k],
            })
            .collect();

        let mut skel = Skeleton {
            vertices: Vec::new(),
            edges,
            faces,
            vertex_of,
            edge_of,
            edge_rev,
            face_of,
            face_sign,
        };
        skel.vertices = vcorners
            .into_iter()
            .enumerate()
            .map(|(k, corners)| skel.link_of(tri, corners, vbound[k]))
            .collect();
        skel
    }

    /// Builds the vertex link from its corners: one link triangle per corner,
    /// whose vertices are the edge ends at that corner.
    fn link_of(&self, tri: &Triangulation, corners: Vec<(usize, u8)>, boundary: bool) -> VertexClass {
        let mut ends: Vec<usize> = Vec::new();
        let mut internal = 0usize;
        let mut bdry = 0usize;
        for &(i, v) in &corners {
            for w in 0..4u8 {
                if w == v {
                    continue;
                }
                let e = edge_index(v, w);
                let class = self.edge_of[i][e];
                let end = if !self.edges[class].valid {
                    0
                } else {
                    ((v > w) ^ self.edge_rev[i][e]) as usize
                };
                ends.push(2 * class + end);
                // The link edge opposite to `w` lies in face `w`.
                if tri.gluing(i, w).is_some() {
                    internal += 1;
                } else {
                    bdry += 1;
                }
            }
        }
        ends.sort_unstable();
        ends.dedup();
        let euler = ends.len() as i64 - (internal / 2 + bdry) as i64 + corners.len() as i64;
        let orientable = link_orientable(tri, &corners);
        let link = match (bdry == 0, euler) {
            (true, 2) => LinkType::Sphere,
            (false, 1) => LinkType::Disc,
            _ => LinkType::Other,
        };
        VertexClass {
            corners,
            boundary,
            link,
            link_euler: euler,
            link_orientable: orientable,
        }
    }

    pub fn vertex_of(&self, tet: usize, v: u8) -> usize {
        self.vertex_of[tet][v as usize]
    }

    pub fn edge_of(&self, tet: usize, e: usize) -> usize {
        self.edge_of[tet][e]
    }

    /// Whether the local edge `e` of `tet`, directed from its smaller to its
    /// larger vertex, runs against the orientation chosen for its class.
    pub fn edge_reversed(&self, tet: usize, e: usize) -> bool {
        self.edge_rev[tet][e]
    }

    pub fn face_of(&self, tet: usize, f: u8) -> usize {
        self.face_of[tet][f as usize]
    }

    /// `+1` if face `f` of `tet` with its sorted vertex order agrees with the
    /// orientation chosen for its class, `-1` otherwise.
    pub fn face_sign(&self, tet: usize, f: u8) -> i8 {
        self.face_sign[tet][f as usize]
    }

    pub fn euler_characteristic(&self, tet_count: usize) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64 - tet_count as i64
    }

    pub fn is_manifold(&self) -> bool {
        self.edges.iter().all(|e| e.valid) && self.vertices.iter().all(|v| v.link != LinkType::Other)
    }
}

fn link_orientable(tri: &Triangulation, corners: &[(usize, u8)]) -> bool {
    let t = tri.size();
    let mut sign = vec![[0i8; 4]; t];
    let (i0, v0) = corners[0];
    sign[i0][v0 as usize] = 1;
    let mut stack = vec![(i0, v0)];
    while let Some((i, v)) = stack.pop() {
        let s = sign[i][v as usize];
        for f in 0..4u8 {
            if f == v {
                continue;
            }
            if let Some(g) = tri.gluing(i, f) {
                let w = g.perm.apply(v);
                let want = if g.perm.is_odd() { s } else { -s };
                let cur = &mut sign[g.tet][w as usize];
                if *cur == 0 {
                    *cur = want;
                    stack.push((g.tet, w));
                } else if *cur != want {
                    return false;
                }
            }
        }
    }
    true
}

/// Counts and per-class data for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkeletonSummary {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub face_count: usize,
    pub tet_count: usize,
    pub boundary_face_count: usize,
    pub edge_degrees: Vec<usize>,
    pub vertex_link_types: Vec<LinkType>,
    pub euler_characteristic: i64,
}

pub fn skeleton(tri: &Triangulation) -> SkeletonSummary {
    let s = Skeleton::new(tri);
    SkeletonSummary {
        vertex_count: s.vertices.len(),
        edge_count: s.edges.len(),
        face_count: s.faces.len(),
        tet_count: tri.size(),
        boundary_face_count: tri.boundary_face_count(),
        edge_degrees: s.edges.iter().map(EdgeClass::degree).collect(),
        vertex_link_types: s.vertices.iter().map(|v| v.link).collect(),
        euler_characteristic: s.euler_characteristic(tri.size()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Closed,
    WithBoundary,
    NotManifold,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Closed => "closed 3-manifold",
            Verdict::WithBoundary => "3-manifold with boundary",
            Verdict::NotManifold => "not a manifold",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
    pub verdict: Verdict,
}

pub fn validate(tri: &Triangulation) -> ValidationReport {
    use core::fmt::Write;

    let s = Skeleton::new(tri);
    let mut checks = Vec::new();
    // A `Triangulation` value cannot violate these; they are reported so the
    // report has the same shape for every input.
    let involution = Triangulation::from_table(tri.table().to_vec()).is_ok();
    checks.push(Check {
        name: "involution",
        passed: involution,
        detail: String::new(),
    });
    let self_glued = tri
        .table()
        .iter()
        .enumerate()
        .flat_map(|(i, row)| row.iter().enumerate().map(move |(f, g)| (i, f, g)))
        .any(|(i, f, g)| g.is_some_and(|g| g.tet == i && g.face as usize == f));
    checks.push(Check {
        name: "self-gluing",
        passed: !self_glued,
        detail: String::new(),
    });

    let mut detail = String::new();
    let bad: Vec<usize> = (0..s.edges.len()).filter(|&e| !s.edges[e].valid).collect();
    for (k, e) in bad.iter().enumerate() {
        if k > 0 {
            detail.push(' ');
        }
        let _ = write!(detail, "{e}");
    }
    checks.push(Check {
        name: "edge-validity",
        passed: bad.is_empty(),
        detail,
    });

    let mut detail = String::new();
    for (k, v) in s.vertices.iter().enumerate() {
        if k > 0 {
            detail.push(' ');
        }
        let _ = write!(detail, "{}", v.link.name());
    }
    checks.push(Check {
        name: "vertex-links",
        passed: s.vertices.iter().all(|v| v.link != LinkType::Other),
        detail,
    });

    let verdict = if !checks.iter().all(|c| c.passed) {
        Verdict::NotManifold
    } else if tri.has_boundary() {
        Verdict::WithBoundary
    } else {
        Verdict::Closed
    };
    ValidationReport { checks, verdict }
}

/// A triangulation known to be a 3-manifold, together with its skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Manifold {
    tri: Triangulation,
    skeleton: Skeleton,
}

impl Manifold {
    pub fn new(tri: Triangulation) -> Result<Manifold, ValidationReport> {
        let skeleton = Skeleton::new(&tri);
        if skeleton.is_manifold() {
            Ok(Manifold { tri, skeleton })
        } else {
            Err(validate(&tri))
        }
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    pub fn skeleton(&self) -> &Skeleton {
        &self.skeleton
    }

    pub fn into_triangulation(self) -> Triangulation {
        self.tri
    }
}

impl Deref for Manifold {
    type Target = Triangulation;

    fn deref(&self) -> &Triangulation {
        &self.tri
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryComponent {
    pub faces: Vec<(usize, u8)>,
    pub euler_characteristic: i64,
    pub orientable: bool,
}

impl BoundaryComponent {
    pub fn is_torus(&self) -> bool {
        self.orientable && self.euler_characteristic == 0
    }
}

pub fn boundary_components(tri: &Triangulation) -> Vec<BoundaryComponent> {
    let (surf, slots) = boundary_surface(tri);
    surf.components()
        .into_iter()
        .map(|c| BoundaryComponent {
            faces: c.triangles.iter().map(|&k| slots[k]).collect(),
            euler_characteristic: c.euler_characteristic,
            orientable: c.orientable,
        })
        .collect()
}

/// True if the boundary is non-empty and every component is a torus.
pub fn boundary_all_tori(tri: &Triangulation) -> bool {
    let comps = boundary_components(tri);
    !comps.is_empty() && comps.iter().all(BoundaryComponent::is_torus)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::Perm4;

    fn p(img: [u8; 4]) -> Perm4 {
        Perm4::from_images(img).unwrap()
    }

    pub(crate) fn s3_one_tet() -> Triangulation {
        let mut t = Triangulation::new(1).unwrap();
        t.join(0, 0, 0, p([1, 0, 2, 3])).unwrap();
        t.join(0, 2, 0, p([1, 2, 3, 0])).unwrap();
        t
    }

    #[test]
    fn single_tetrahedron() {
        let tri = Triangulation::new(1).unwrap();
        let s = skeleton(&tri);
        assert_eq!((s.vertex_count, s.edge_count, s.face_count, s.tet_count), (4, 6, 4, 1));
        assert_eq!(s.euler_characteristic, 1);
        assert!(s.vertex_link_types.iter().all(|&l| l == LinkType::Disc));
        assert_eq!(validate(&tri).verdict, Verdict::WithBoundary);
        let comps = boundary_components(&tri);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].euler_characteristic, 2);
    }

    #[test]
    fn two_tetrahedra_on_one_face() {
        let mut tri = Triangulation::new(2).unwrap();
        tri.join(0, 0, 1, Perm4::IDENTITY).unwrap();
        let s = skeleton(&tri);
        assert_eq!((s.vertex_count, s.edge_count, s.face_count, s.tet_count), (5, 9, 7, 2));
        assert_eq!(s.euler_characteristic, 1);
    }

    #[test]
    fn one_tetrahedron_sphere() {
        let tri = s3_one_tet();
        let s = skeleton(&tri);
        assert_eq!((s.vertex_count, s.edge_count, s.face_count, s.tet_count), (1, 2, 2, 1));
        assert_eq!(s.euler_characteristic, 0);
        assert_eq!(s.vertex_link_types, vec![LinkType::Sphere]);
        assert_eq!(validate(&tri).verdict, Verdict::Closed);
        assert!(tri.is_orientable());
        assert!(boundary_components(&tri).is_empty());
    }

    #[test]
    fn reversed_edge_is_invalid() {
        let mut tri = Triangulation::new(1).unwrap();
        // σ = (0 1)(2 3): face 0 -> face 1, edge 23 -> edge 32.
        tri.join(0, 0, 0, p([1, 0, 3, 2])).unwrap();
        let s = Skeleton::new(&tri);
        assert!(s.edges.iter().any(|e| !e.valid));
        assert_eq!(validate(&tri).verdict, Verdict::NotManifold);
    }
}
