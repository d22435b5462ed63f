//! The four 3-dimensional Pachner moves and the boundary layering moves.
//!
//! Interior moves replace a union of facets of `∂Δ⁴` by the complementary
//! facets. The locus tetrahedra are removed (remaining indices keep their
//! order) and the new tetrahedra are appended in increasing order of the
//! label they omit. A boundary layer appends one tetrahedron; an unlayer
//! removes one.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::perm::Perm4;
use crate::skeleton::Manifold;
use crate::stellar::{self, Slot};
use crate::surface2::walk_to_boundary;
use crate::triangulation::{face_vertices, Gluing, Triangulation, EDGE_VERTICES};

/// A concrete move. Variant order is the enumeration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveSite {
    /// Subdivide a tetrahedron.
    M14 { tet: usize },
    /// Remove an internal vertex of degree 4, given by its lowest corner.
    M41 { tet: usize, vertex: u8 },
    /// Replace two tetrahedra sharing a face, given by its lower side.
    M23 { tet: usize, face: u8 },
    /// Remove an internal edge of degree 3, given by its lowest corner.
    M32 { tet: usize, edge: u8 },
    /// Glue a tetrahedron onto the boundary face `(tet, face)`, or onto the
    /// two boundary faces meeting along edge `{a, b}` of that face.
    BdryLayer { tet: usize, face: u8, edge: Option<(u8, u8)> },
    /// Remove a tetrahedron meeting the boundary in three faces, or in two
    /// faces whose opposite edge is internal.
    BdryUnlayer { tet: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MoveKind {
    M14,
    M41,
    M23,
    M32,
    BdryLayer,
    BdryUnlayer,
}

impl MoveKind {
    pub fn name(self) -> &'static str {
        match self {
            MoveKind::M14 => "M14",
            MoveKind::M41 => "M41",
            MoveKind::M23 => "M23",
            MoveKind::M32 => "M32",
            MoveKind::BdryLayer => "BDRY_LAYER",
            MoveKind::BdryUnlayer => "BDRY_UNLAYER",
        }
    }

    /// Change in the number of tetrahedra.
    pub fn delta(self) -> isize {
        match self {
            MoveKind::M14 => 3,
            MoveKind::M41 => -3,
            MoveKind::M23 => 1,
            MoveKind::M32 => -1,
            MoveKind::BdryLayer => 1,
            MoveKind::BdryUnlayer => -1,
        }
    }
}

impl MoveSite {
    pub fn kind(&self) -> MoveKind {
        match self {
            MoveSite::M14 { .. } => MoveKind::M14,
            MoveSite::M41 { .. } => MoveKind::M41,
            MoveSite::M23 { .. } => MoveKind::M23,
            MoveSite::M32 { .. } => MoveKind::M32,
            MoveSite::BdryLayer { .. } => MoveKind::BdryLayer,
            MoveSite::BdryUnlayer { .. } => MoveKind::BdryUnlayer,
        }
    }
}

impl fmt::Display for MoveSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind().name())?;
        match *self {
            MoveSite::M14 { tet } | MoveSite::BdryUnlayer { tet } => write!(f, " {tet}"),
            MoveSite::M41 { tet, vertex } => write!(f, " {tet} {vertex}"),
            MoveSite::M23 { tet, face } => write!(f, " {tet} {face}"),
            MoveSite::M32 { tet, edge } => write!(f, " {tet} {edge}"),
            MoveSite::BdryLayer { tet, face, edge: None } => write!(f, " {tet} {face}"),
            MoveSite::BdryLayer {
                tet,
                face,
                edge: Some((a, b)),
            } => write!(f, " {tet} {face} {a} {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseMoveError {
    #[error("empty move")]
    Empty,
    #[error("unknown move kind `{0}`")]
    UnknownKind(alloc::string::String),
    #[error("wrong number of locus indices for {0}")]
    Arity(&'static str),
    #[error("bad locus index `{0}`")]
    BadIndex(alloc::string::String),
}

impl FromStr for MoveSite {
    type Err = ParseMoveError;

    fn from_str(s: &str) -> Result<MoveSite, ParseMoveError> {
        let mut words = s.split_whitespace();
        let kind = words.next().ok_or(ParseMoveError::Empty)?;
        let mut nums = Vec::new();
        for w in words {
            nums.push(w.parse::<usize>().map_err(|_| ParseMoveError::BadIndex(w.into()))?);
        }
        let small = |x: usize, limit: usize| -> Result<u8, ParseMoveError> {
            if x < limit {
                Ok(x as u8)
            } else {
                Err(ParseMoveError::BadIndex(alloc::format!("{x}")))
            }
        };
        let site = match (kind, nums.as_slice()) {
            ("M14", [t]) => MoveSite::M14 { tet: *t },
            ("M41", [t, v]) => MoveSite::M41 {
                tet: *t,
                vertex: small(*v, 4)?,
            },
            ("M23", [t, f]) => MoveSite::M23 {
                tet: *t,
                face: small(*f, 4)?,
            },
            ("M32", [t, e]) => MoveSite::M32 {
                tet: *t,
                edge: small(*e, 6)?,
            },
            ("BDRY_LAYER", [t, f]) => MoveSite::BdryLayer {
                tet: *t,
                face: small(*f, 4)?,
                edge: None,
            },
            ("BDRY_LAYER", [t, f, a, b]) => MoveSite::BdryLayer {
                tet: *t,
                face: small(*f, 4)?,
                edge: Some((small(*a, 4)?, small(*b, 4)?)),
            },
            ("BDRY_UNLAYER", [t]) => MoveSite::BdryUnlayer { tet: *t },
            ("M14" | "BDRY_UNLAYER", _) => return Err(ParseMoveError::Arity("a tetrahedron")),
            ("M41" | "M23" | "M32", _) => return Err(ParseMoveError::Arity("a tetrahedron and one index")),
            ("BDRY_LAYER", _) => return Err(ParseMoveError::Arity("BDRY_LAYER")),
            (other, _) => return Err(ParseMoveError::UnknownKind(other.into())),
        };
        Ok(site)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("move {0} is not applicable to this triangulation")]
    NotApplicable(MoveSite),
}

fn to_slots(tri: &Triangulation) -> Vec<[Slot<4>; 4]> {
    tri.table()
        .iter()
        .map(|row| row.map(|g| g.map(|g| (g.tet, g.face, g.perm.images()))))
        .collect()
}

fn from_slots(table: Vec<[Slot<4>; 4]>) -> Triangulation {
    let rows = table
        .into_iter()
        .map(|row| {
            row.map(|s| {
                s.map(|(tet, face, p)| Gluing {
                    tet,
                    face,
                    perm: Perm4::from_images(p).expect("permutation"),
                })
            })
        })
        .collect();
    Triangulation::from_table_unchecked(rows)
}

const S14: u32 = 1 << 4;
const S23: u32 = (1 << 3) | (1 << 4);
const S32: u32 = (1 << 2) | (1 << 3) | (1 << 4);
const S41: u32 = (1 << 1) | (1 << 2) | (1 << 3) | (1 << 4);

/// Label map giving the vertices in `front` labels `0, 1, ...`, an optional
/// `(vertex, label)` override, and the remaining vertices the next labels in
/// increasing order.
fn lambda_for(front: &[u8], top: Option<(u8, u8)>) -> [u8; 4] {
    let mut lam = [u8::MAX; 4];
    let mut next = 0u8;
    for &v in front {
        lam[v as usize] = next;
        next += 1;
    }
    if let Some((v, l)) = top {
        lam[v as usize] = l;
    }
    for v in 0..4 {
        if lam[v] == u8::MAX {
            lam[v] = next;
            next += 1;
        }
    }
    lam
}

fn locus_of(slots: &[[Slot<4>; 4]], site: MoveSite) -> Option<(Vec<(usize, [u8; 4])>, u32)> {
    let t = slots.len();
    match site {
        MoveSite::M14 { tet } => (tet < t).then(|| (alloc::vec![(tet, [0, 1, 2, 3])], S14)),
        MoveSite::M23 { tet, face } => {
            if tet >= t || face > 3 {
                return None;
            }
            let lam = lambda_for(&[], Some((face, 3)));
            stellar::propagate(slots, tet, lam, S23).map(|l| (l, S23))
        }
        MoveSite::M32 { tet, edge } => {
            if tet >= t || edge > 5 {
                return None;
            }
            let (a, b) = EDGE_VERTICES[edge as usize];
            let lam = lambda_for(&[a, b], None);
            stellar::propagate(slots, tet, lam, S32).map(|l| (l, S32))
        }
        MoveSite::M41 { tet, vertex } => {
            if tet >= t || vertex > 3 {
                return None;
            }
            let lam = lambda_for(&[vertex], None);
            stellar::propagate(slots, tet, lam, S41).map(|l| (l, S41))
        }
        _ => None,
    }
}

/// The other boundary face across boundary edge `{a, b}` of boundary face
/// `(tet, face)`, with the images of `a` and `b` there.
fn across_boundary_edge(tri: &Triangulation, tet: usize, face: u8, a: u8, b: u8) -> (usize, u8, u8, u8) {
    let c = 6 - a - b - face;
    walk_to_boundary(tri, tet, face, a, b, c)
}

/// Whether edge `{a, b}` of `tet` is internal, by walking around it.
fn edge_is_internal(tri: &Triangulation, tet: usize, a: u8, b: u8) -> bool {
    let mut rest = (0..4u8).filter(|&v| v != a && v != b);
    let (c, d) = (rest.next().unwrap(), rest.next().unwrap());
    let start = (tet, a, b, c, d);
    let (mut cur, mut a, mut b, mut x, mut y) = start;
    // Bounded by the number of edge corners.
    for _ in 0..=6 * tri.size() {
        match tri.gluing(cur, y) {
            None => return false,
            Some(g) => {
                let (na, nb, nx, ny) = (g.perm.apply(a), g.perm.apply(b), g.perm.apply(y), g.perm.apply(x));
                cur = g.tet;
                a = na;
                b = nb;
                x = nx;
                y = ny;
                if (cur, a, b, x, y) == start {
                    return true;
                }
            }
        }
    }
    true
}

fn check_unlayer(tri: &Triangulation, tet: usize) -> Option<()> {
    if tet >= tri.size() || tri.size() < 2 {
        return None;
    }
    let bdry: Vec<u8> = (0..4u8).filter(|&f| tri.gluing(tet, f).is_none()).collect();
    match bdry.len() {
        3 => Some(()),
        2 => {
            let (a, b) = (bdry[0], bdry[1]);
            let mut internal = (0..4u8).filter(|&f| tri.gluing(tet, f).is_some());
            let (c, d) = (internal.next().unwrap(), internal.next().unwrap());
            let gc = tri.gluing(tet, c).unwrap();
            let gd = tri.gluing(tet, d).unwrap();
            if gc.tet == tet || gd.tet == tet || gc.tet == gd.tet {
                return None;
            }
            edge_is_internal(tri, tet, a, b).then_some(())
        }
        _ => None,
    }
}

fn check_layer(tri: &Triangulation, tet: usize, face: u8, edge: Option<(u8, u8)>) -> Option<Option<(usize, u8, u8, u8)>> {
    if tet >= tri.size() || face > 3 || tri.gluing(tet, face).is_some() {
        return None;
    }
    match edge {
        None => Some(None),
        Some((a, b)) => {
            if a >= b || b > 3 || a == face || b == face {
                return None;
            }
            let (j, g, a2, b2) = across_boundary_edge(tri, tet, face, a, b);
            if j == tet || (j, g) < (tet, face) {
                return None;
            }
            Some(Some((j, g, a2, b2)))
        }
    }
}

/// All applicable moves in increasing order.
pub fn enumerate_moves(m: &Manifold) -> Vec<MoveSite> {
    let tri = m.triangulation();
    let skel = m.skeleton();
    let slots = to_slots(tri);
    let mut out = Vec::new();
    for tet in 0..tri.size() {
        out.push(MoveSite::M14 { tet });
    }
    for v in &skel.vertices {
        if v.corners.len() == 4 && !v.boundary {
            let (tet, vertex) = v.corners[0];
            let site = MoveSite::M41 { tet, vertex };
            if locus_of(&slots, site).is_some() {
                out.push(site);
            }
        }
    }
    for (tet, face, g) in tri.internal_faces() {
        if g.tet != tet {
            out.push(MoveSite::M23 { tet, face });
        }
    }
    for e in &skel.edges {
        if e.corners.len() == 3 && !e.boundary {
            let (tet, edge) = e.corners[0];
            let site = MoveSite::M32 { tet, edge };
            if locus_of(&slots, site).is_some() {
                out.push(site);
            }
        }
    }
    for (tet, face) in tri.boundary_faces() {
        out.push(MoveSite::BdryLayer { tet, face, edge: None });
        let fv = face_vertices(face);
        for (a, b) in [(fv[0], fv[1]), (fv[0], fv[2]), (fv[1], fv[2])] {
            let edge = Some((a, b));
            if check_layer(tri, tet, face, edge).is_some() {
                out.push(MoveSite::BdryLayer { tet, face, edge });
            }
        }
    }
    for tet in 0..tri.size() {
        if check_unlayer(tri, tet).is_some() {
            out.push(MoveSite::BdryUnlayer { tet });
        }
    }
    out.sort();
    out
}

/// Applies a move, returning the new triangulation and the site of the
/// inverse move on it.
pub fn apply_move_with_inverse(m: &Manifold, site: MoveSite) -> Result<(Manifold, MoveSite), MoveError> {
    let tri = m.triangulation();
    let err = || MoveError::NotApplicable(site);
    let (out, inverse) = match site {
        MoveSite::M14 { .. } | MoveSite::M23 { .. } | MoveSite::M32 { .. } | MoveSite::M41 { .. } => {
            let slots = to_slots(tri);
            let (locus, mask) = locus_of(&slots, site).ok_or_else(err)?;
            if let MoveSite::M41 { .. } | MoveSite::M32 { .. } = site {
                // The locus must be exactly the star of the vertex or edge.
                let skel = m.skeleton();
                let deg = match site {
                    MoveSite::M41 { tet, vertex } => skel.vertices[skel.vertex_of(tet, vertex)].corners.len(),
                    MoveSite::M32 { tet, edge } => skel.edges[skel.edge_of(tet, edge as usize)].corners.len(),
                    _ => unreachable!(),
                };
                if deg != locus.len() {
                    return Err(err());
                }
            }
            let (table, base) = stellar::replace(&slots, &locus, mask);
            let inverse = match site {
                // New vertex is label 4, local vertex 3 of the first new tetrahedron.
                MoveSite::M14 { .. } => MoveSite::M41 { tet: base, vertex: 3 },
                MoveSite::M41 { .. } => MoveSite::M14 { tet: base },
                // New edge is labels {3, 4}, local edge 23 of the first new tetrahedron.
                MoveSite::M23 { .. } => MoveSite::M32 { tet: base, edge: 5 },
                // New face is labels {2, 3, 4}, face 0 of the first new tetrahedron.
                MoveSite::M32 { .. } => MoveSite::M23 { tet: base, face: 0 },
                _ => unreachable!(),
            };
            (from_slots(table), inverse)
        }
        MoveSite::BdryLayer { tet, face, edge } => {
            let other = check_layer(tri, tet, face, edge).ok_or_else(err)?;
            let mut table = tri.table().to_vec();
            let n = table.len();
            table.push([None; 4]);
            let fv = face_vertices(face);
            let (p1, face_new) = match edge {
                None => ([fv[0], fv[1], fv[2], face], 3u8),
                Some((a, b)) => ([a, b, 6 - a - b - face, face], 3u8),
            };
            let p1 = Perm4::from_images(p1).unwrap();
            table[n][face_new as usize] = Some(Gluing { tet, face, perm: p1 });
            table[tet][face as usize] = Some(Gluing {
                tet: n,
                face: face_new,
                perm: p1.inverse(),
            });
            if let Some((j, g, a2, b2)) = other {
                let p2 = Perm4::from_images([a2, b2, g, 6 - a2 - b2 - g]).unwrap();
                table[n][2] = Some(Gluing { tet: j, face: g, perm: p2 });
                table[j][g as usize] = Some(Gluing {
                    tet: n,
                    face: 2,
                    perm: p2.inverse(),
                });
            }
            (Triangulation::from_table_unchecked(table), MoveSite::BdryUnlayer { tet: n })
        }
        MoveSite::BdryUnlayer { tet } => {
            check_unlayer(tri, tet).ok_or_else(err)?;
            let shift = |k: usize| if k > tet { k - 1 } else { k };
            let internal: Vec<(u8, Gluing)> = (0..4u8).filter_map(|f| tri.gluing(tet, f).map(|g| (f, g))).collect();
            let inverse = if internal.len() == 1 {
                let g = internal[0].1;
                MoveSite::BdryLayer {
                    tet: shift(g.tet),
                    face: g.face,
                    edge: None,
                }
            } else {
                // The edge shared by the two internal faces.
                let (fc, gc) = internal[0];
                let (fd, gd) = internal[1];
                let mut ab = (0..4u8).filter(|&v| v != fc && v != fd);
                let (a, b) = (ab.next().unwrap(), ab.next().unwrap());
                let (g, x, y) = if (gc.tet, gc.face) < (gd.tet, gd.face) {
                    (gc, gc.perm.apply(a), gc.perm.apply(b))
                } else {
                    (gd, gd.perm.apply(a), gd.perm.apply(b))
                };
                let (x, y) = if x < y { (x, y) } else { (y, x) };
                MoveSite::BdryLayer {
                    tet: shift(g.tet),
                    face: g.face,
                    edge: Some((x, y)),
                }
            };
            let mut table = Vec::with_capacity(tri.size() - 1);
            for (k, row) in tri.table().iter().enumerate() {
                if k == tet {
                    continue;
                }
                let mut row = *row;
                for s in row.iter_mut() {
                    if let Some(g) = s {
                        if g.tet == tet {
                            *s = None;
                        } else {
                            g.tet = shift(g.tet);
                        }
                    }
                }
                table.push(row);
            }
            (Triangulation::from_table_unchecked(table), inverse)
        }
    };
    let out = Manifold::new(out).map_err(|_| err())?;
    Ok((out, inverse))
}

pub fn apply_move(m: &Manifold, site: MoveSite) -> Result<Manifold, MoveError> {
    apply_move_with_inverse(m, site).map(|(t, _)| t)
}

/// Applies a sequence of moves in order.
pub fn apply_moves(m: &Manifold, sites: &[MoveSite]) -> Result<Manifold, MoveError> {
    let mut cur = m.clone();
    for &s in sites {
        cur = apply_move(&cur, s)?;
    }
    Ok(cur)
}

/// `steps` uniformly chosen moves driven by `ChaCha8Rng` seeded with `seed`.
pub fn random_walk(m: &Manifold, steps: usize, seed: u64) -> (Manifold, Vec<MoveSite>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = m.clone();
    let mut path = Vec::with_capacity(steps);
    for _ in 0..steps {
        let sites = enumerate_moves(&cur);
        if sites.is_empty() {
            break;
        }
        let site = sites[rng.gen_range(0..sites.len())];
        cur = apply_move(&cur, site).expect("enumerated move applies");
        path.push(site);
    }
    (cur, path)
}

/// Local vertex pair of edge `e`.
pub fn edge_vertices(e: u8) -> (u8, u8) {
    EDGE_VERTICES[e as usize]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ball() -> Manifold {
        Manifold::new(Triangulation::new(1).unwrap()).unwrap()
    }

    #[test]
    fn single_tetrahedron_sites() {
        let sites = enumerate_moves(&ball());
        assert_eq!(sites.len(), 5);
        assert_eq!(sites[0], MoveSite::M14 { tet: 0 });
        assert!(sites[1..].iter().all(|s| matches!(s, MoveSite::BdryLayer { edge: None, .. })));
    }

    #[test]
    fn two_tetrahedra_sites() {
        let mut t = Triangulation::new(2).unwrap();
        t.join(0, 0, 1, Perm4::IDENTITY).unwrap();
        let m = Manifold::new(t).unwrap();
        let sites = enumerate_moves(&m);
        let count = |k: MoveKind| sites.iter().filter(|s| s.kind() == k).count();
        assert_eq!(count(MoveKind::M14), 2);
        assert_eq!(count(MoveKind::M23), 1);
        assert_eq!(count(MoveKind::M32), 0);
        let (after, inv) = apply_move_with_inverse(&m, MoveSite::M23 { tet: 0, face: 0 }).unwrap();
        assert_eq!(after.size(), 3);
        assert_eq!(inv, MoveSite::M32 { tet: 0, edge: 5 });
        assert!(enumerate_moves(&after).contains(&inv));
        let skel = after.skeleton();
        assert_eq!(skel.edges[skel.edge_of(0, 5)].degree(), 3);
    }

    #[test]
    fn one_four_then_back() {
        let (four, inv) = apply_move_with_inverse(&ball(), MoveSite::M14 { tet: 0 }).unwrap();
        assert_eq!(four.size(), 4);
        assert_eq!(four.boundary_face_count(), 4);
        assert!(enumerate_moves(&four).contains(&inv));
        let (back, inv2) = apply_move_with_inverse(&four, inv).unwrap();
        assert_eq!(back.size(), 1);
        assert_eq!(inv2, MoveSite::M14 { tet: 0 });
    }

    #[test]
    fn move_text_round_trips() {
        let sites = [
            MoveSite::M14 { tet: 3 },
            MoveSite::M41 { tet: 0, vertex: 2 },
            MoveSite::M23 { tet: 1, face: 3 },
            MoveSite::M32 { tet: 2, edge: 5 },
            MoveSite::BdryLayer {
                tet: 0,
                face: 1,
                edge: None,
            },
            MoveSite::BdryLayer {
                tet: 0,
                face: 1,
                edge: Some((0, 2)),
            },
            MoveSite::BdryUnlayer { tet: 4 },
        ];
        for s in sites {
            let text = alloc::format!("{s}");
            assert_eq!(text.parse::<MoveSite>().unwrap(), s);
        }
        assert!("M99 1".parse::<MoveSite>().is_err());
        assert!("M41 1".parse::<MoveSite>().is_err());
    }

    #[test]
    fn stale_site_is_rejected() {
        assert!(apply_move(&ball(), MoveSite::M23 { tet: 0, face: 0 }).is_err());
        assert!(apply_move(&ball(), MoveSite::M14 { tet: 1 }).is_err());
        assert!(apply_move(&ball(), MoveSite::BdryUnlayer { tet: 0 }).is_err());
    }

    #[test]
    fn zero_step_walk() {
        let (end, path) = random_walk(&ball(), 0, 1);
        assert_eq!(end, ball());
        assert!(path.is_empty());
    }
}
