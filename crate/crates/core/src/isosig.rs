//! Canonical signatures and isomorphism witnesses.
//!
//! A component is encoded by a breadth-first relabelling from a root
//! tetrahedron and a vertex labelling of that root. Newly reached
//! tetrahedra are labelled so that the gluing that reaches them reads as the
//! identity. Each face contributes one token, `0` for a boundary face and
//! `1 + 24·target + perm` otherwise; the signature takes the least token
//! sequence over all roots.
//!
//! Text form per component: the tetrahedron count in decimal, `.`, then each
//! token as a fixed number of base-64 digits, the width being the least
//! that can hold `24·t`. Components are sorted and joined with `_`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::perm::{Perm4, ALL_PERM4};
use crate::triangulation::{Gluing, Triangulation};

const ALPHABET: &[u8; 64] = b"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+-";

/// A relabelling of tetrahedra and their vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Isomorphism {
    /// Image of each tetrahedron.
    pub tet_map: Vec<usize>,
    /// Vertex map of each tetrahedron into its image.
    pub perms: Vec<Perm4>,
}

impl Isomorphism {
    pub fn identity(t: usize) -> Isomorphism {
        Isomorphism {
            tet_map: (0..t).collect(),
            perms: vec![Perm4::IDENTITY; t],
        }
    }

    /// Transports a gluing table along the isomorphism.
    pub fn apply(&self, tri: &Triangulation) -> Triangulation {
        let t = tri.size();
        let mut table = vec![[None; 4]; t];
        for i in 0..t {
            let pi = self.perms[i];
            for f in 0..4u8 {
                if let Some(g) = tri.gluing(i, f) {
                    let pj = self.perms[g.tet];
                    table[self.tet_map[i]][pi.apply(f) as usize] = Some(Gluing {
                        tet: self.tet_map[g.tet],
                        face: pj.apply(g.face),
                        perm: pj.compose(g.perm).compose(pi.inverse()),
                    });
                }
            }
        }
        Triangulation::from_table_unchecked(table)
    }

    pub fn inverse(&self) -> Isomorphism {
        let t = self.tet_map.len();
        let mut tet_map = vec![0; t];
        let mut perms = vec![Perm4::IDENTITY; t];
        for i in 0..t {
            tet_map[self.tet_map[i]] = i;
            perms[self.tet_map[i]] = self.perms[i].inverse();
        }
        Isomorphism { tet_map, perms }
    }

    /// `self` after `first`.
    pub fn after(&self, first: &Isomorphism) -> Isomorphism {
        let t = first.tet_map.len();
        Isomorphism {
            tet_map: (0..t).map(|i| self.tet_map[first.tet_map[i]]).collect(),
            perms: (0..t).map(|i| self.perms[first.tet_map[i]].compose(first.perms[i])).collect(),
        }
    }
}

/// Best encoding of one component: tokens, tetrahedra in canonical order,
/// and the vertex labelling of each.
struct Canonical {
    tokens: Vec<u32>,
    order: Vec<usize>,
    labels: Vec<Perm4>,
}

/// Encodes from `root` with labelling `phi`, giving up as soon as the
/// sequence is known to exceed `bound`. Returns `None` if not strictly
/// smaller than `bound`.
fn encode(tri: &Triangulation, root: usize, phi: Perm4, bound: Option<&[u32]>, scratch: &mut [usize]) -> Option<Canonical> {
    let mut order = vec![root];
    let mut labels = vec![phi];
    scratch[root] = 0;
    let mut tokens = Vec::new();
    let mut decided = bound.is_none();
    let mut k = 0;
    let result = loop {
        if k == order.len() {
            break if decided { Some(()) } else { None };
        }
        let tet = order[k];
        let lab = labels[k];
        let inv = lab.inverse();
        k += 1;
        for nf in 0..4u8 {
            let f = inv.apply(nf);
            let token = match tri.gluing(tet, f) {
                None => 0,
                Some(g) => {
                    if scratch[g.tet] == usize::MAX {
                        scratch[g.tet] = order.len();
                        order.push(g.tet);
                        labels.push(lab.compose(g.perm.inverse()));
                    }
                    let idx = scratch[g.tet];
                    let p = labels[idx].compose(g.perm).compose(inv);
                    1 + 24 * idx as u32 + p.index() as u32
                }
            };
            if !decided {
                let b = bound.unwrap()[tokens.len()];
                match token.cmp(&b) {
                    Ordering::Less => decided = true,
                    Ordering::Greater => {
                        for &o in &order {
                            scratch[o] = usize::MAX;
                        }
                        return None;
                    }
                    Ordering::Equal => {}
                }
            }
            tokens.push(token);
        }
    };
    for &o in &order {
        scratch[o] = usize::MAX;
    }
    result.map(|_| Canonical { tokens, order, labels })
}

fn canonical_components(tri: &Triangulation) -> Vec<Canonical> {
    let mut scratch = vec![usize::MAX; tri.size()];
    let mut out: Vec<Canonical> = Vec::new();
    for comp in tri.components() {
        let mut best: Option<Canonical> = None;
        for &root in &comp {
            for phi in ALL_PERM4 {
                if let Some(c) = encode(tri, root, phi, best.as_ref().map(|b| b.tokens.as_slice()), &mut scratch) {
                    best = Some(c);
                }
            }
        }
        out.push(best.expect("non-empty component"));
    }
    out.sort_by(|a, b| (a.order.len(), &a.tokens).cmp(&(b.order.len(), &b.tokens)));
    out
}

fn width_for(t: usize) -> usize {
    let max = 24 * t as u64;
    let mut w = 1;
    while 64u64.pow(w as u32) <= max {
        w += 1;
    }
    w
}

fn component_text(c: &Canonical) -> String {
    let t = c.order.len();
    let w = width_for(t);
    let mut s = alloc::format!("{t}.");
    for &tok in &c.tokens {
        for d in (0..w).rev() {
            s.push(ALPHABET[((tok as u64 >> (6 * d)) & 63) as usize] as char);
        }
    }
    s
}

/// The canonical signature; equal for two triangulations exactly when they
/// are isomorphic.
pub fn canonical_signature(tri: &Triangulation) -> String {
    let mut parts: Vec<String> = canonical_components(tri).iter().map(component_text).collect();
    parts.sort();
    parts.join("_")
}

/// Relabelling of `tri` onto its canonical form.
fn canonical_map(tri: &Triangulation) -> (String, Isomorphism) {
    let comps = canonical_components(tri);
    let mut texts: Vec<(String, usize)> = comps.iter().enumerate().map(|(i, c)| (component_text(c), i)).collect();
    texts.sort();
    let mut iso = Isomorphism::identity(tri.size());
    let mut base = 0;
    for (_, ci) in &texts {
        let c = &comps[*ci];
        for (k, (&tet, &lab)) in c.order.iter().zip(&c.labels).enumerate() {
            iso.tet_map[tet] = base + k;
            iso.perms[tet] = lab;
        }
        base += c.order.len();
    }
    let sig: Vec<String> = texts.into_iter().map(|(s, _)| s).collect();
    (sig.join("_"), iso)
}

/// An isomorphism from `a` to `b`, if one exists. The witness is checked by
/// transporting `a`'s gluing table.
pub fn are_isomorphic(a: &Triangulation, b: &Triangulation) -> Option<Isomorphism> {
    if a.size() != b.size() {
        return None;
    }
    let (sa, ia) = canonical_map(a);
    let (sb, ib) = canonical_map(b);
    if sa != sb {
        return None;
    }
    let iso = ib.inverse().after(&ia);
    (iso.apply(a) == *b).then_some(iso)
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("malformed signature")]
    Malformed,
}

/// Rebuilds a triangulation from its signature.
pub fn from_signature(sig: &str) -> Result<Triangulation, SignatureError> {
    let mut table: Vec<[Option<Gluing>; 4]> = Vec::new();
    for part in sig.split('_') {
        let (count, body) = part.split_once('.').ok_or(SignatureError::Malformed)?;
        let t: usize = count.parse().map_err(|_| SignatureError::Malformed)?;
        let w = width_for(t);
        let bytes = body.as_bytes();
        if t == 0 || bytes.len() != 4 * t * w {
            return Err(SignatureError::Malformed);
        }
        let base = table.len();
        table.extend(core::iter::repeat_n([None; 4], t));
        for (k, chunk) in bytes.chunks(w).enumerate() {
            let mut tok = 0u64;
            for &c in chunk {
                let d = ALPHABET.iter().position(|&a| a == c).ok_or(SignatureError::Malformed)?;
                tok = tok * 64 + d as u64;
            }
            if tok == 0 {
                continue;
            }
            let v = tok - 1;
            let (target, p) = ((v / 24) as usize, (v % 24) as usize);
            if target >= t {
                return Err(SignatureError::Malformed);
            }
            let perm = ALL_PERM4[p];
            let f = (k % 4) as u8;
            table[base + k / 4][f as usize] = Some(Gluing {
                tet: base + target,
                face: perm.apply(f),
                perm,
            });
        }
    }
    Triangulation::from_table(table).map_err(|_| SignatureError::Malformed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(img: [u8; 4]) -> Perm4 {
        Perm4::from_images(img).unwrap()
    }

    fn sample() -> Triangulation {
        let mut t = Triangulation::new(3).unwrap();
        t.join(0, 0, 1, p([1, 0, 2, 3])).unwrap();
        t.join(1, 2, 2, p([0, 3, 1, 2])).unwrap();
        t.join(2, 0, 0, p([2, 1, 0, 3])).unwrap();
        t
    }

    #[test]
    fn relabelled_copies_agree() {
        let t = sample();
        let iso = Isomorphism {
            tet_map: vec![2, 0, 1],
            perms: vec![p([3, 1, 0, 2]), p([1, 2, 3, 0]), p([0, 1, 3, 2])],
        };
        let u = iso.apply(&t);
        assert_ne!(t, u);
        assert_eq!(canonical_signature(&t), canonical_signature(&u));
        let w = are_isomorphic(&t, &u).unwrap();
        assert_eq!(w.apply(&t), u);
    }

    #[test]
    fn identical_inputs_give_identity() {
        let t = Triangulation::new(1).unwrap();
        let mut two = Triangulation::new(2).unwrap();
        two.join(0, 0, 1, Perm4::IDENTITY).unwrap();
        assert_ne!(canonical_signature(&t), canonical_signature(&two));
        let s = sample();
        let w = are_isomorphic(&s, &s).unwrap();
        assert_eq!(w.apply(&s), s);
    }

    #[test]
    fn signature_round_trips() {
        let s = sample();
        let sig = canonical_signature(&s);
        let back = from_signature(&sig).unwrap();
        assert_eq!(canonical_signature(&back), sig);
        assert!(are_isomorphic(&s, &back).is_some());
        let two = s.disjoint_union(&Triangulation::new(1).unwrap());
        let sig2 = canonical_signature(&two);
        assert!(sig2.contains('_'));
        assert_eq!(canonical_signature(&from_signature(&sig2).unwrap()), sig2);
        assert!(are_isomorphic(&two, &Triangulation::new(1).unwrap().disjoint_union(&s)).is_some());
    }
}
