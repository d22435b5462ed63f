//! Gluing-table representation of generalized 3-manifold triangulations.
//!
//! Face `k` of a tetrahedron is the face opposite vertex `k`. A gluing of
//! face `f` of tetrahedron `i` to face `g` of tetrahedron `j` carries a
//! permutation `σ` of vertex labels with `σ(f) = g`; the reverse gluing is
//! stored with `σ⁻¹`. Tetrahedra may share several faces and a tetrahedron
//! may be glued to itself along two different faces.

use alloc::vec;
use alloc::vec::Vec;

use crate::perm::Perm4;

/// Where a face is glued to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gluing {
    pub tet: usize,
    pub face: u8,
    pub perm: Perm4,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TriangulationError {
    #[error("a triangulation needs at least one tetrahedron")]
    Empty,
    #[error("tetrahedron index {0} out of range")]
    TetOutOfRange(usize),
    #[error("face index {0} out of range")]
    FaceOutOfRange(u8),
    #[error("face {face} of tetrahedron {tet} is glued to itself")]
    SelfGluing { tet: usize, face: u8 },
    #[error("gluing of face {face} of tetrahedron {tet} does not carry face {face} to face {target}")]
    FaceMismatch { tet: usize, face: u8, target: u8 },
    #[error("gluing of ({tet},{face}) is not matched by the reverse gluing")]
    Involution { tet: usize, face: u8 },
    #[error("face {face} of tetrahedron {tet} is already glued")]
    AlreadyGlued { tet: usize, face: u8 },
}

/// A generalized triangulation: `t ≥ 1` tetrahedra and a symmetric partial
/// face pairing.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Triangulation {
    table: Vec<[Option<Gluing>; 4]>,
}

impl Triangulation {
    /// `t` tetrahedra with no gluings.
    pub fn new(t: usize) -> Result<Triangulation, TriangulationError> {
        if t == 0 {
            return Err(TriangulationError::Empty);
        }
        Ok(Triangulation {
            table: vec![[None; 4]; t],
        })
    }

    /// Builds a triangulation from a complete gluing table, checking every
    /// structural invariant.
    pub fn from_table(table: Vec<[Option<Gluing>; 4]>) -> Result<Triangulation, TriangulationError> {
        if table.is_empty() {
            return Err(TriangulationError::Empty);
        }
        let t = table.len();
        for (i, row) in table.iter().enumerate() {
            for f in 0..4u8 {
                let Some(g) = row[f as usize] else { continue };
                if g.tet >= t {
                    return Err(TriangulationError::TetOutOfRange(g.tet));
                }
                if g.face > 3 {
                    return Err(TriangulationError::FaceOutOfRange(g.face));
                }
                if g.tet == i && g.face == f {
                    return Err(TriangulationError::SelfGluing { tet: i, face: f });
                }
                if g.perm.apply(f) != g.face {
                    return Err(TriangulationError::FaceMismatch {
                        tet: i,
                        face: f,
                        target: g.face,
                    });
                }
                let back = table[g.tet][g.face as usize];
                let expected = Gluing {
                    tet: i,
                    face: f,
                    perm: g.perm.inverse(),
                };
                if back != Some(expected) {
                    return Err(TriangulationError::Involution { tet: i, face: f });
                }
            }
        }
        Ok(Triangulation { table })
    }

    /// Glues face `face` of `tet` to face `perm(face)` of `other`.
    pub fn join(&mut self, tet: usize, face: u8, other: usize, perm: Perm4) -> Result<(), TriangulationError> {
        let t = self.table.len();
        for x in [tet, other] {
            if x >= t {
                return Err(TriangulationError::TetOutOfRange(x));
            }
        }
        if face > 3 {
            return Err(TriangulationError::FaceOutOfRange(face));
        }
        let target = perm.apply(face);
        if tet == other && target == face {
            return Err(TriangulationError::SelfGluing { tet, face });
        }
        if self.table[tet][face as usize].is_some() {
            return Err(TriangulationError::AlreadyGlued { tet, face });
        }
        if self.table[other][target as usize].is_some() {
            return Err(TriangulationError::AlreadyGlued { tet: other, face: target });
        }
        self.table[tet][face as usize] = Some(Gluing { tet: other, face: target, perm });
        self.table[other][target as usize] = Some(Gluing {
            tet,
            face,
            perm: perm.inverse(),
        });
        Ok(())
    }

    /// Number of tetrahedra.
    #[inline]
    pub fn size(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn gluing(&self, tet: usize, face: u8) -> Option<Gluing> {
        self.table[tet][face as usize]
    }

    pub fn table(&self) -> &[[Option<Gluing>; 4]] {
        &self.table
    }

    /// Unglued faces in `(tet, face)` order.
    pub fn boundary_faces(&self) -> Vec<(usize, u8)> {
        let mut out = Vec::new();
        for (i, row) in self.table.iter().enumerate() {
            for f in 0..4u8 {
                if row[f as usize].is_none() {
                    out.push((i, f));
                }
            }
        }
        out
    }

    pub fn boundary_face_count(&self) -> usize {
        self.table.iter().flatten().filter(|g| g.is_none()).count()
    }

    pub fn has_boundary(&self) -> bool {
        self.boundary_face_count() > 0
    }

    /// Internal faces, each listed once from its lexicographically smaller side.
    pub fn internal_faces(&self) -> Vec<(usize, u8, Gluing)> {
        let mut out = Vec::new();
        for (i, row) in self.table.iter().enumerate() {
            for f in 0..4u8 {
                if let Some(g) = row[f as usize] {
                    if (i, f) < (g.tet, g.face) {
                        out.push((i, f, g));
                    }
                }
            }
        }
        out
    }

    /// Connected components of the dual graph, as sorted tetrahedron lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let t = self.size();
        let mut comp = vec![usize::MAX; t];
        let mut out = Vec::new();
        for start in 0..t {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut k = 0;
            while k < members.len() {
                let i = members[k];
                k += 1;
                for g in self.table[i].iter().flatten() {
                    if comp[g.tet] == usize::MAX {
                        comp[g.tet] = id;
                        members.push(g.tet);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Consistent orientation signs for the tetrahedra, if one exists.
    ///
    /// Two tetrahedra with equal signs are compatibly oriented across a face
    /// exactly when the gluing permutation is odd.
    pub fn orientation(&self) -> Option<Vec<i8>> {
        let t = self.size();
        let mut sign = vec![0i8; t];
        for start in 0..t {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for g in self.table[i].iter().flatten() {
                    let want = if g.perm.is_odd() { sign[i] } else { -sign[i] };
                    if sign[g.tet] == 0 {
                        sign[g.tet] = want;
                        stack.push(g.tet);
                    } else if sign[g.tet] != want {
                        return None;
                    }
                }
            }
        }
        Some(sign)
    }

    pub fn is_orientable(&self) -> bool {
        self.orientation().is_some()
    }

    /// Disjoint union with another triangulation; `other`'s tetrahedra are
    /// appended after ours.
    pub fn disjoint_union(&self, other: &Triangulation) -> Triangulation {
        let shift = self.size();
        let mut table = self.table.clone();
        for row in &other.table {
            let mut r = *row;
            for g in r.iter_mut().flatten() {
                g.tet += shift;
            }
            table.push(r);
        }
        Triangulation { table }
    }

    /// Crate-internal constructor for tables built by trusted code paths.
    pub(crate) fn from_table_unchecked(table: Vec<[Option<Gluing>; 4]>) -> Triangulation {
        debug_assert!(Triangulation::from_table(table.clone()).is_ok());
        Triangulation { table }
    }
}

/// The vertices of face `f` in increasing order.
#[inline]
pub fn face_vertices(f: u8) -> [u8; 3] {
    match f {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        _ => [0, 1, 2],
    }
}

/// Vertex pairs of the six edges of a tetrahedron, indexed 0..6.
pub const EDGE_VERTICES: [(u8, u8); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index of the edge joining vertices `a` and `b` (in either order).
#[inline]
pub fn edge_index(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("not an edge: {a}{b}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(img: [u8; 4]) -> Perm4 {
        Perm4::from_images(img).unwrap()
    }

    #[test]
    fn join_maintains_involution() {
        let mut tri = Triangulation::new(2).unwrap();
        tri.join(0, 1, 1, p([0, 2, 1, 3])).unwrap();
        let g = tri.gluing(1, 2).unwrap();
        assert_eq!((g.tet, g.face), (0, 1));
        assert_eq!(g.perm, p([0, 2, 1, 3]).inverse());
        assert_eq!(tri.boundary_face_count(), 6);
        assert!(Triangulation::from_table(tri.table().to_vec()).is_ok());
    }

    #[test]
    fn rejects_structural_violations() {
        let mut tri = Triangulation::new(1).unwrap();
        assert_eq!(
            tri.join(0, 0, 0, Perm4::IDENTITY),
            Err(TriangulationError::SelfGluing { tet: 0, face: 0 })
        );
        assert!(matches!(tri.join(0, 0, 3, Perm4::IDENTITY), Err(TriangulationError::TetOutOfRange(3))));
        tri.join(0, 0, 0, p([1, 0, 2, 3])).unwrap();
        assert!(matches!(
            tri.join(0, 1, 0, p([2, 3, 1, 0])),
            Err(TriangulationError::AlreadyGlued { .. })
        ));

        // (0,1) -> (1,2,σ) but (1,2) -> (0,1,τ) with τ != σ⁻¹.
        let sigma = p([0, 2, 1, 3]);
        let tau = p([3, 2, 1, 0]);
        assert_eq!(tau.apply(2), 1);
        let mut table = vec![[None; 4]; 2];
        table[0][1] = Some(Gluing { tet: 1, face: 2, perm: sigma });
        table[1][2] = Some(Gluing { tet: 0, face: 1, perm: tau });
        assert_eq!(
            Triangulation::from_table(table),
            Err(TriangulationError::Involution { tet: 0, face: 1 })
        );
        assert_eq!(Triangulation::new(0), Err(TriangulationError::Empty));
    }

    #[test]
    fn orientation_parity() {
        let mut ball = Triangulation::new(2).unwrap();
        ball.join(0, 0, 1, Perm4::IDENTITY).unwrap();
        // An even gluing between two tetrahedra just flips one sign.
        assert_eq!(ball.orientation().unwrap(), vec![1, -1]);

        // A single tetrahedron glued to itself by an even permutation cannot
        // be oriented.
        let mut bad = Triangulation::new(1).unwrap();
        bad.join(0, 0, 0, p([1, 0, 3, 2])).unwrap();
        assert!(!bad.is_orientable());
    }

    #[test]
    fn edge_indices() {
        for (k, &(a, b)) in EDGE_VERTICES.iter().enumerate() {
            assert_eq!(edge_index(a, b), k);
            assert_eq!(edge_index(b, a), k);
        }
    }
}
