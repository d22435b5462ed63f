//! Permutations of the four vertex labels of a tetrahedron.

use core::fmt;

/// A bijection of `{0, 1, 2, 3}`, stored by its images.
///
/// Gluing permutations act on the vertex labels of a whole tetrahedron: the
/// image of `v` is the label of the vertex that `v` is identified with.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm4([u8; 4]);

/// All 24 permutations in lexicographic order of their image sequences.
pub const ALL_PERM4: [Perm4; 24] = {
    let mut out = [Perm4([0, 1, 2, 3]); 24];
    let mut n = 0;
    let mut a = 0;
    while a < 4 {
        let mut b = 0;
        while b < 4 {
            let mut c = 0;
            while c < 4 {
                if a != b && a != c && b != c {
                    let d = 6 - a - b - c;
                    out[n] = Perm4([a, b, c, d]);
                    n += 1;
                }
                c += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
};

impl Perm4 {
    pub const IDENTITY: Perm4 = Perm4([0, 1, 2, 3]);

    /// Builds a permutation from its images, or `None` if they are not a
    /// bijection of `{0,1,2,3}`.
    pub fn from_images(images: [u8; 4]) -> Option<Perm4> {
        let mut seen = 0u8;
        for &x in &images {
            if x > 3 || seen & (1 << x) != 0 {
                return None;
            }
            seen |= 1 << x;
        }
        Some(Perm4(images))
    }

    /// The transposition swapping `a` and `b`.
    pub fn transposition(a: u8, b: u8) -> Perm4 {
        let mut img = [0, 1, 2, 3];
        img.swap(a as usize, b as usize);
        Perm4(img)
    }

    #[inline]
    pub fn images(self) -> [u8; 4] {
        self.0
    }

    #[inline]
    pub fn apply(self, v: u8) -> u8 {
        self.0[v as usize]
    }

    /// `self ∘ other`, i.e. `x ↦ self(other(x))`.
    pub fn compose(self, other: Perm4) -> Perm4 {
        Perm4([
            self.0[other.0[0] as usize],
            self.0[other.0[1] as usize],
            self.0[other.0[2] as usize],
            self.0[other.0[3] as usize],
        ])
    }

    pub fn inverse(self) -> Perm4 {
        let mut inv = [0u8; 4];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm4(inv)
    }

    /// `+1` for even permutations, `-1` for odd ones.
    pub fn sign(self) -> i32 {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        if inversions % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_odd(self) -> bool {
        self.sign() < 0
    }

    /// Position of this permutation in [`ALL_PERM4`].
    pub fn index(self) -> usize {
        // Lehmer code.
        let mut idx = 0;
        let fact = [6, 2, 1, 1];
        for i in 0..4 {
            let smaller = (i + 1..4).filter(|&j| self.0[j] < self.0[i]).count();
            idx += smaller * fact[i];
        }
        idx
    }

    pub fn from_index(idx: usize) -> Perm4 {
        ALL_PERM4[idx]
    }
}

impl Default for Perm4 {
    fn default() -> Self {
        Perm4::IDENTITY
    }
}

impl fmt::Display for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}{}", self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl fmt::Debug for Perm4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm4({self})")
    }
}

/// Sign of the permutation of three items given by their images.
pub(crate) fn sign3(images: [u8; 3]) -> i32 {
    let mut inversions = 0;
    for i in 0..3 {
        for j in i + 1..3 {
            if images[i] > images[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trips_over_all_24() {
        for (i, p) in ALL_PERM4.iter().enumerate() {
            assert_eq!(p.index(), i);
            assert_eq!(Perm4::from_index(i), *p);
        }
    }

    #[test]
    fn group_laws() {
        for a in ALL_PERM4 {
            assert_eq!(a.compose(a.inverse()), Perm4::IDENTITY);
            assert_eq!(a.inverse().compose(a), Perm4::IDENTITY);
            assert_eq!(a.compose(Perm4::IDENTITY), a);
            for b in ALL_PERM4 {
                assert_eq!(a.compose(b).sign(), a.sign() * b.sign());
                assert_eq!(a.compose(b).inverse(), b.inverse().compose(a.inverse()));
                for c in ALL_PERM4 {
                    assert_eq!(a.compose(b).compose(c), a.compose(b.compose(c)));
                }
            }
        }
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Perm4::from_images([0, 1, 1, 3]).is_none());
        assert!(Perm4::from_images([0, 1, 2, 4]).is_none());
        assert_eq!(Perm4::from_images([1, 0, 3, 2]).unwrap().sign(), 1);
        assert_eq!(Perm4::transposition(0, 3).sign(), -1);
    }
}
