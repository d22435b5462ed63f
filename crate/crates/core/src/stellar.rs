//! Replacement of a sub-complex of the boundary of an `(N)`-simplex by its
//! complement, for simplices with `N` vertices (triangles or tetrahedra).
//!
//! Vertices of the big simplex carry labels `0..=N`; facet `F_i` omits label
//! `i`. A locus simplex is described by its label map `λ` (local vertex to
//! label); new facets use the increasing order of their labels.

use alloc::vec;
use alloc::vec::Vec;

pub(crate) type Slot<const N: usize> = Option<(usize, u8, [u8; N])>;

pub(crate) fn inverse<const N: usize>(p: [u8; N]) -> [u8; N] {
    let mut inv = [0u8; N];
    for (i, &x) in p.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

/// `a ∘ b`.
pub(crate) fn compose<const N: usize>(a: [u8; N], b: [u8; N]) -> [u8; N] {
    let mut out = [0u8; N];
    for i in 0..N {
        out[i] = a[b[i] as usize];
    }
    out
}

fn missing<const N: usize>(lambda: [u8; N]) -> u8 {
    let mut mask = 0u32;
    for &l in &lambda {
        mask |= 1 << l;
    }
    (0..=N as u8).find(|&l| mask & (1 << l) == 0).unwrap()
}

#[inline]
fn mu(i: u8, k: u8) -> u8 {
    if k < i {
        k
    } else {
        k + 1
    }
}

#[inline]
fn mu_inv(i: u8, l: u8) -> u8 {
    if l < i {
        l
    } else {
        l - 1
    }
}

/// Extends a label map on `start` across the faces interior to the locus
/// `S` (given as a bit mask) and checks that the locus really is the union of
/// the facets `F_i, i ∈ S`, on pairwise distinct simplices. Returns the locus
/// in increasing label order.
pub(crate) fn propagate<const N: usize>(
    table: &[[Slot<N>; N]],
    start: usize,
    lambda: [u8; N],
    s_mask: u32,
) -> Option<Vec<(usize, [u8; N])>> {
    let labels = N + 1;
    let mut by_label: Vec<Option<(usize, [u8; N])>> = vec![None; labels];
    let x0 = missing(lambda);
    if s_mask & (1 << x0) == 0 {
        return None;
    }
    by_label[x0 as usize] = Some((start, lambda));
    let mut queue = vec![x0];
    while let Some(x) = queue.pop() {
        let (tet, lam) = by_label[x as usize].unwrap();
        for u in 0..N {
            let y = lam[u];
            if s_mask & (1 << y) == 0 {
                continue;
            }
            let (k, h, rho) = table[tet][u]?;
            let mut lam2 = [0u8; N];
            for w in 0..N {
                lam2[rho[w] as usize] = if w == u { x } else { lam[w] };
            }
            debug_assert_eq!(lam2[h as usize], x);
            match by_label[y as usize] {
                Some(known) => {
                    if known != (k, lam2) {
                        return None;
                    }
                }
                None => {
                    if by_label.iter().flatten().any(|&(other, _)| other == k) {
                        return None;
                    }
                    by_label[y as usize] = Some((k, lam2));
                    queue.push(y);
                }
            }
        }
    }
    let mut out = Vec::new();
    for l in 0..labels {
        if s_mask & (1 << l) != 0 {
            out.push(by_label[l]?);
        }
    }
    Some(out)
}

/// Removes the locus simplices (compacting the remaining indices in order)
/// and appends the complementary facets in increasing label order. Returns
/// the new table and the index of the first appended simplex.
pub(crate) fn replace<const N: usize>(
    table: &[[Slot<N>; N]],
    locus: &[(usize, [u8; N])],
    s_mask: u32,
) -> (Vec<[Slot<N>; N]>, usize) {
    let t = table.len();
    let labels = (N + 1) as u8;
    let mut locus_pos = vec![usize::MAX; t];
    for (p, &(tet, _)) in locus.iter().enumerate() {
        locus_pos[tet] = p;
    }
    let mut remap = vec![usize::MAX; t];
    let mut next = 0;
    for k in 0..t {
        if locus_pos[k] == usize::MAX {
            remap[k] = next;
            next += 1;
        }
    }
    let base = next;

    let mut out: Vec<[Slot<N>; N]> = Vec::with_capacity(base + N + 1 - locus.len());
    for k in 0..t {
        if locus_pos[k] != usize::MAX {
            continue;
        }
        let mut row = table[k];
        for s in row.iter_mut() {
            if let Some((j, _, _)) = s {
                if locus_pos[*j] != usize::MAX {
                    *s = None;
                } else {
                    *j = remap[*j];
                }
            }
        }
        out.push(row);
    }

    let new_labels: Vec<u8> = (0..labels).filter(|&i| s_mask & (1 << i) == 0).collect();
    let mut facet_index = [usize::MAX; 8];
    for (p, &i) in new_labels.iter().enumerate() {
        facet_index[i as usize] = base + p;
        out.push([None; N]);
    }

    for &i in &new_labels {
        for &j in &new_labels {
            if i == j {
                continue;
            }
            let a = mu_inv(i, j);
            let mut p = [0u8; N];
            for v in 0..N as u8 {
                p[v as usize] = if v == a { mu_inv(j, i) } else { mu_inv(j, mu(i, v)) };
            }
            out[facet_index[i as usize]][a as usize] = Some((facet_index[j as usize], mu_inv(j, i), p));
        }
    }

    // For each face of a locus simplex on the boundary of the locus: the new
    // simplex and face it becomes, and the vertex map new -> old.
    let mut slot_map: Vec<Option<(usize, u8, [u8; N])>> = vec![None; locus.len() * N];
    for (p, &(_, lam)) in locus.iter().enumerate() {
        let x = missing(lam);
        let mut lam_inv = [u8::MAX; 8];
        for (v, &l) in lam.iter().enumerate() {
            lam_inv[l as usize] = v as u8;
        }
        for u in 0..N {
            let y = lam[u];
            if s_mask & (1 << y) != 0 {
                continue;
            }
            let a = mu_inv(y, x);
            let mut psi = [0u8; N];
            for w in 0..N as u8 {
                psi[w as usize] = if w == a { u as u8 } else { lam_inv[mu(y, w) as usize] };
            }
            slot_map[p * N + u] = Some((facet_index[y as usize], a, psi));
        }
    }

    for (p, &(tet, _)) in locus.iter().enumerate() {
        for u in 0..N {
            let Some((ny, a, psi)) = slot_map[p * N + u] else { continue };
            let Some((k, h, rho)) = table[tet][u] else { continue };
            if locus_pos[k] != usize::MAX {
                let (nk, b, psi_b) = slot_map[locus_pos[k] * N + h as usize].expect("locus boundary face");
                let perm = compose(inverse(psi_b), compose(rho, psi));
                out[ny][a as usize] = Some((nk, b, perm));
            } else {
                let perm = compose(rho, psi);
                out[ny][a as usize] = Some((remap[k], h, perm));
                out[remap[k]][h as usize] = Some((ny, a, inverse(perm)));
            }
        }
    }
    (out, base)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_to_four_on_a_lone_simplex() {
        let table: Vec<[Slot<4>; 4]> = vec![[None; 4]];
        let (out, base) = replace(&table, &[(0, [0, 1, 2, 3])], 1 << 4);
        assert_eq!(base, 0);
        assert_eq!(out.len(), 4);
        let internal = out.iter().flatten().filter(|s| s.is_some()).count();
        assert_eq!(internal, 12);
        // Involution.
        for (i, row) in out.iter().enumerate() {
            for (f, s) in row.iter().enumerate() {
                if let Some((j, g, p)) = *s {
                    assert_eq!(p[f] as usize, g as usize);
                    assert_eq!(out[j][g as usize], Some((i, f as u8, inverse(p))));
                }
            }
        }
    }
}
