//! Normal addition of compatible surfaces and decomposition into fundamental
//! surfaces.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::normal::{build_surface, enumerate_fundamental_solutions, is_admissible, NormalCoordinates, NormalError};
use crate::skeleton::Manifold;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum HakenError {
    #[error(transparent)]
    Normal(#[from] NormalError),
    #[error("the surfaces use different quadrilateral types in tetrahedron {tet}")]
    Incompatible { tet: usize },
    #[error("additivity fails: chi {chi:?}, weight {weight:?}")]
    NotAdditive { chi: [i64; 3], weight: [u64; 3] },
    #[error("no decomposition over the given surfaces; the list is incomplete")]
    NoDecomposition,
}

fn first_conflict(x: &[u64], y: &[u64]) -> Option<usize> {
    x.chunks(7)
        .zip(y.chunks(7))
        .position(|(a, b)| (4..7).filter(|&i| a[i] + b[i] != 0).count() > 1)
}

fn admissible(m: &Manifold, x: &[u64]) -> Result<(), HakenError> {
    if is_admissible(m, x)? {
        Ok(())
    } else {
        Err(NormalError::Inadmissible.into())
    }
}

/// Whether `x + y` still satisfies the quadrilateral condition.
pub fn compatible(m: &Manifold, x: &[u64], y: &[u64]) -> Result<bool, HakenError> {
    admissible(m, x)?;
    admissible(m, y)?;
    Ok(first_conflict(x, y).is_none())
}

pub fn haken_sum(m: &Manifold, x: &[u64], y: &[u64]) -> Result<NormalCoordinates, HakenError> {
    admissible(m, x)?;
    admissible(m, y)?;
    if let Some(tet) = first_conflict(x, y) {
        return Err(HakenError::Incompatible { tet });
    }
    Ok(x.iter().zip(y).map(|(a, b)| a + b).collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivityReport {
    pub sum: NormalCoordinates,
    /// Values for `x`, `y` and `x + y`.
    pub chi: [i64; 3],
    pub weight: [u64; 3],
}

/// Builds `x`, `y` and their sum separately and compares Euler
/// characteristic and weight. A mismatch is an error.
pub fn verify_additivity(m: &Manifold, x: &[u64], y: &[u64]) -> Result<AdditivityReport, HakenError> {
    let sum = haken_sum(m, x, y)?;
    let sx = build_surface(m, x)?;
    let sy = build_surface(m, y)?;
    let ss = build_surface(m, &sum)?;
    let chi = [sx.euler_characteristic, sy.euler_characteristic, ss.euler_characteristic];
    let weight = [sx.weight, sy.weight, ss.weight];
    if chi[0] + chi[1] != chi[2] || weight[0] + weight[1] != weight[2] {
        return Err(HakenError::NotAdditive { chi, weight });
    }
    Ok(AdditivityReport { sum, chi, weight })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// Distinct parts with multiplicities, in the order of the given list.
    pub parts: Vec<(NormalCoordinates, u64)>,
}

impl Decomposition {
    pub fn summands(&self) -> u64 {
        self.parts.iter().map(|p| p.1).sum()
    }

    pub fn total(&self, len: usize) -> NormalCoordinates {
        let mut out = alloc::vec![0; len];
        for (p, k) in &self.parts {
            for (o, v) in out.iter_mut().zip(p) {
                *o += k * v;
            }
        }
        out
    }
}

/// `n ≤ 2^e`.
pub fn at_most_power_of_two(n: u64, e: usize) -> bool {
    e >= 64 || n <= 1u64 << e
}

fn below(f: &[u64], x: &[u64]) -> bool {
    f.iter().zip(x).all(|(a, b)| a <= b)
}

fn minus(x: &[u64], f: &[u64]) -> Vec<u64> {
    x.iter().zip(f).map(|(a, b)| a - b).collect()
}

/// Writes `x` as a nonnegative combination of `fundamentals`: greedily
/// taking the earliest part that fits, then an exhaustive search with
/// memoised dead ends if the greedy remainder gets stuck.
pub fn decompose(m: &Manifold, x: &[u64], fundamentals: &[NormalCoordinates]) -> Result<Decomposition, HakenError> {
    admissible(m, x)?;
    let parts: Vec<&NormalCoordinates> = fundamentals.iter().filter(|f| f.iter().any(|&v| v != 0)).collect();
    let mut counts = alloc::vec![0u64; parts.len()];
    let mut rem = x.to_vec();
    for (i, f) in parts.iter().enumerate() {
        while below(f, &rem) {
            rem = minus(&rem, f);
            counts[i] += 1;
        }
    }
    let mut dead = BTreeSet::new();
    let mut picks = Vec::new();
    if !exact(&parts, &rem, &mut dead, &mut picks) {
        counts.iter_mut().for_each(|c| *c = 0);
        picks.clear();
        if !exact(&parts, x, &mut dead, &mut picks) {
            return Err(HakenError::NoDecomposition);
        }
    }
    for i in picks {
        counts[i] += 1;
    }
    let parts = parts
        .iter()
        .zip(counts)
        .filter(|(_, k)| *k > 0)
        .map(|(f, k)| ((*f).clone(), k))
        .collect();
    Ok(Decomposition { parts })
}

fn exact(parts: &[&NormalCoordinates], rem: &[u64], dead: &mut BTreeSet<Vec<u64>>, picks: &mut Vec<usize>) -> bool {
    if rem.iter().all(|&v| v == 0) {
        return true;
    }
    if dead.contains(rem) {
        return false;
    }
    for (i, f) in parts.iter().enumerate() {
        if below(f, rem) {
            picks.push(i);
            if exact(parts, &minus(rem, f), dead, picks) {
                return true;
            }
            picks.pop();
        }
    }
    dead.insert(rem.to_vec());
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    pub tetrahedra: usize,
    pub fundamentals: usize,
    /// Largest `-2χ` over the fundamentals.
    pub max_neg_twice_chi: i64,
    /// Largest disc count of a single fundamental.
    pub max_discs: u64,
    /// Every `-2χ < 2^{20t}`.
    pub chi_ok: bool,
    /// Every disc count at most `2^{40t}`.
    pub discs_ok: bool,
    /// A sum of at most `2^{20t}` fundamentals has at most `2^{40t}` discs.
    pub sum_discs_ok: bool,
}

impl BoundsReport {
    pub fn holds(&self) -> bool {
        self.chi_ok && self.discs_ok && self.sum_discs_ok
    }
}

pub fn check_fundamental_bounds(m: &Manifold) -> Result<BoundsReport, HakenError> {
    check_bounds_of(m, &enumerate_fundamental_solutions(m, None))
}

/// The bounds report for an already enumerated fundamental list.
pub fn check_bounds_of(m: &Manifold, fundamentals: &[NormalCoordinates]) -> Result<BoundsReport, HakenError> {
    let t = m.triangulation().size();
    let mut max_chi = i64::MIN;
    let mut max_discs = 0;
    for f in fundamentals {
        let s = build_surface(m, f)?;
        max_chi = max_chi.max(-2 * s.euler_characteristic);
        max_discs = max_discs.max(s.disc_count());
    }
    let chi_ok = max_chi < 0 || 20 * t >= 64 || (max_chi as u64) < 1u64 << (20 * t);
    Ok(BoundsReport {
        tetrahedra: t,
        fundamentals: fundamentals.len(),
        max_neg_twice_chi: max_chi,
        max_discs,
        chi_ok,
        discs_ok: at_most_power_of_two(max_discs, 40 * t),
        sum_discs_ok: at_most_power_of_two(max_discs, 20 * t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::vertex_links;
    use crate::triangulation::Triangulation;
    use alloc::vec;

    fn ball() -> Manifold {
        Manifold::new(Triangulation::new(1).unwrap()).unwrap()
    }

    fn unit(i: usize) -> Vec<u64> {
        let mut x = vec![0; 7];
        x[i] = 1;
        x
    }

    #[test]
    fn sums_in_a_tetrahedron() {
        let m = ball();
        let z = vec![0; 7];
        assert!(compatible(&m, &unit(4), &z).unwrap());
        assert!(!compatible(&m, &unit(4), &unit(5)).unwrap());
        assert!(compatible(&m, &unit(0), &unit(3)).unwrap());
        assert_eq!(haken_sum(&m, &unit(4), &z).unwrap(), unit(4));
        assert_eq!(haken_sum(&m, &unit(4), &unit(5)), Err(HakenError::Incompatible { tet: 0 }));
        assert_eq!(haken_sum(&m, &unit(1), &unit(2)).unwrap(), haken_sum(&m, &unit(2), &unit(1)).unwrap());
        let r = verify_additivity(&m, &unit(0), &unit(0)).unwrap();
        assert_eq!(r.chi, [1, 1, 2]);
        assert_eq!(r.weight, [3, 3, 6]);
        let s = build_surface(&m, &haken_sum(&m, &unit(0), &unit(2)).unwrap()).unwrap();
        assert_eq!(s.components.len(), 2);
        let links = vertex_links(&m);
        let r = verify_additivity(&m, &links[0], &z).unwrap();
        assert_eq!(r.chi[0], r.chi[2]);
    }

    #[test]
    fn decompositions() {
        let m = ball();
        let f = enumerate_fundamental_solutions(&m, None);
        let d = decompose(&m, &unit(6), &f).unwrap();
        assert_eq!(d.parts, vec![(unit(6), 1)]);
        let x = vec![3, 0, 0, 0, 0, 0, 0];
        let d = decompose(&m, &x, &f).unwrap();
        assert_eq!(d.parts, vec![(unit(0), 3)]);
        let x = vec![1, 2, 0, 4, 0, 5, 0];
        let d = decompose(&m, &x, &f).unwrap();
        assert_eq!(d.total(7), x);
        assert_eq!(d.summands(), 12);
        let without: Vec<_> = f.iter().filter(|g| **g != unit(5)).cloned().collect();
        assert_eq!(decompose(&m, &x, &without), Err(HakenError::NoDecomposition));
    }

    #[test]
    fn ball_bounds() {
        let r = check_fundamental_bounds(&ball()).unwrap();
        assert_eq!(r.fundamentals, 7);
        assert_eq!(r.max_neg_twice_chi, -2);
        assert_eq!(r.max_discs, 1);
        assert!(r.holds());
    }
}
