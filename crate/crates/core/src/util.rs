use alloc::vec::Vec;

/// Plain union-find with path halving.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // Smaller root wins so that class representatives are first occurrences.
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        true
    }

    /// Dense class labels numbered by first occurrence.
    pub fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut label = alloc::vec![usize::MAX; n];
        let mut out = alloc::vec![0; n];
        let mut next = 0;
        for x in 0..n {
            let r = self.find(x);
            if label[r] == usize::MAX {
                label[r] = next;
                next += 1;
            }
            out[x] = label[r];
        }
        (out, next)
    }
}

/// Union-find that also tracks a parity bit relative to the root; used for
/// orientation of identified edges.
#[derive(Clone, Debug)]
pub(crate) struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    pub fn new(n: usize) -> ParityUnionFind {
        ParityUnionFind {
            parent: (0..n).collect(),
            parity: alloc::vec![false; n],
        }
    }

    pub fn find(&mut self, x: usize) -> (usize, bool) {
        let mut path = Vec::new();
        let mut r = x;
        while self.parent[r] != r {
            path.push(r);
            r = self.parent[r];
        }
        // Compress, accumulating parity from the top down.
        let mut acc = false;
        for &node in path.iter().rev() {
            acc ^= self.parity[node];
            self.parity[node] = acc;
            self.parent[node] = r;
        }
        (r, if path.is_empty() { false } else { self.parity[x] })
    }

    /// Records `parity(a) XOR parity(b) == rel`. Returns `false` on conflict.
    pub fn union(&mut self, a: usize, b: usize, rel: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == rel;
        }
        let (keep, drop) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[drop] = keep;
        self.parity[drop] = pa ^ pb ^ rel;
        true
    }
}

/// Fixed-size bitset over `u64` words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Bits(Vec<u64>);

impl Bits {
    pub fn new(n: usize) -> Bits {
        Bits(alloc::vec![0; n.div_ceil(64)])
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn or(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a | b).collect())
    }

    pub fn copy_from_words(&mut self, words: &[u64]) {
        self.0.copy_from_slice(words);
    }

    pub fn is_subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parity_conflict_is_detected() {
        let mut uf = ParityUnionFind::new(4);
        assert!(uf.union(0, 1, true));
        assert!(uf.union(1, 2, true));
        assert!(!(uf.find(2).1 ^ uf.find(0).1));
        assert!(uf.union(0, 2, false));
        assert!(!uf.union(2, 0, true));
        assert!(uf.union(3, 3, false));
        assert!(!uf.union(3, 3, true));
    }

    #[test]
    fn labels_follow_first_occurrence() {
        let mut uf = UnionFind::new(5);
        uf.union(4, 1);
        uf.union(3, 2);
        let (l, n) = uf.labels();
        assert_eq!(n, 3);
        assert_eq!(l, alloc::vec![0, 1, 2, 2, 1]);
    }
}
