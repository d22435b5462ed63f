//! Sums of towers of exponentials `e^h(x)`, with `e(x) = 2^x` iterated `h`
//! times, compared exactly without materializing them.
//!
//! A term is first normalized by absorbing power-of-two arguments into the
//! height (`e^h(2^y) = e^{h+1}(y)`), which makes the representation of a
//! value unique. Terms whose exponent `e^{h-1}(x)` stays below a threshold
//! are handled as sparse binary numbers with exact exponents; the rest are
//! so large that each dominates every smaller term by a square, so sums of
//! them compare by their largest uncancelled term.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// `e^height(arg)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TowerTerm {
    pub height: BigUint,
    pub arg: BigUint,
}

impl TowerTerm {
    pub fn new(height: impl Into<BigUint>, arg: impl Into<BigUint>) -> TowerTerm {
        TowerTerm {
            height: height.into(),
            arg: arg.into(),
        }
    }

    fn normalized(&self) -> TowerTerm {
        let mut h = self.height.clone();
        let mut x = self.arg.clone();
        while let Some(y) = log2_exact(&x) {
            h += 1u32;
            x = BigUint::from(y);
        }
        TowerTerm { height: h, arg: x }
    }
}

fn log2_exact(x: &BigUint) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let tz = x.trailing_zeros()?;
    (x.bits() == tz + 1).then_some(tz)
}

/// A finite sum of tower terms; the empty sum is zero.
#[derive(Clone, Debug, Default)]
pub struct TowerExpression {
    pub terms: Vec<TowerTerm>,
}

impl TowerExpression {
    pub fn new(terms: Vec<TowerTerm>) -> TowerExpression {
        TowerExpression { terms }
    }

    pub fn natural(n: impl Into<BigUint>) -> TowerExpression {
        TowerExpression::new(alloc::vec![TowerTerm::new(0u32, n)])
    }

    /// The exact value, if it has at most `max_bits` bits.
    pub fn evaluate(&self, max_bits: u64) -> Option<BigUint> {
        let mut total = BigUint::zero();
        for t in &self.terms {
            let mut v = t.arg.clone();
            let mut k = BigUint::zero();
            while k < t.height {
                let e = v.to_u64().filter(|&e| e < max_bits)?;
                v = BigUint::one() << e;
                k += 1u32;
            }
            total += v;
            if total.bits() > max_bits {
                return None;
            }
        }
        Some(total)
    }
}

enum Class {
    /// Value `Σ 2^e` over the set.
    Small(BTreeSet<BigUint>),
    /// Normalized term whose exponent has at least `threshold` bits.
    Huge(TowerTerm),
}

fn add_power(set: &mut BTreeSet<BigUint>, mut e: BigUint) {
    while set.remove(&e) {
        e += 1u32;
    }
    set.insert(e);
}

fn classify(t: &TowerTerm, threshold: u64) -> Class {
    let mut set = BTreeSet::new();
    if t.height.is_zero() {
        let x = &t.arg;
        for i in 0..x.bits() {
            if x.bit(i) {
                set.insert(BigUint::from(i));
            }
        }
        return Class::Small(set);
    }
    let n = t.normalized();
    let mut e = n.arg.clone();
    let mut k = BigUint::one();
    while k < n.height {
        if e >= BigUint::from(threshold) {
            return Class::Huge(n);
        }
        e = BigUint::one() << e.to_u64().unwrap();
        k += 1u32;
    }
    set.insert(e);
    Class::Small(set)
}

/// Lazy comparison of a single tower with a natural number.
fn term_cmp_natural(t: &TowerTerm, n: &BigUint) -> Ordering {
    let mut v = t.arg.clone();
    let mut k = BigUint::zero();
    while k < t.height {
        if v >= BigUint::from(n.bits()) {
            // 2^v > n, and further unfolding only grows.
            return Ordering::Greater;
        }
        v = BigUint::one() << v.to_u64().unwrap();
        k += 1u32;
    }
    v.cmp(n)
}

fn term_cmp(a: &TowerTerm, b: &TowerTerm) -> Ordering {
    if a.height >= b.height {
        let reduced = TowerTerm {
            height: &a.height - &b.height,
            arg: a.arg.clone(),
        };
        term_cmp_natural(&reduced, &b.arg)
    } else {
        term_cmp(b, a).reverse()
    }
}

fn value_cmp(a: &TowerExpression, b: &TowerExpression) -> Ordering {
    let max_arg = a.terms.iter().chain(&b.terms).map(|t| t.arg.bits()).max().unwrap_or(0);
    let threshold = max_arg.max(64) + 2;
    let mut small = [BTreeSet::new(), BTreeSet::new()];
    let mut huge: [Vec<TowerTerm>; 2] = [Vec::new(), Vec::new()];
    for (side, expr) in [a, b].into_iter().enumerate() {
        for t in &expr.terms {
            match classify(t, threshold) {
                Class::Small(set) => {
                    for e in set {
                        add_power(&mut small[side], e);
                    }
                }
                Class::Huge(n) => huge[side].push(n),
            }
        }
    }
    // Cancel equal huge terms; normalized forms are equal iff values are.
    let mut rest_a = Vec::new();
    let mut rest_b = huge[1].clone();
    for t in core::mem::take(&mut huge[0]) {
        if let Some(p) = rest_b.iter().position(|u| *u == t) {
            rest_b.swap_remove(p);
        } else {
            rest_a.push(t);
        }
    }
    let top = |v: &[TowerTerm]| v.iter().max_by(|x, y| term_cmp(x, y)).cloned();
    match (top(&rest_a), top(&rest_b)) {
        (None, None) => {}
        (Some(_), None) => return Ordering::Greater,
        (None, Some(_)) => return Ordering::Less,
        (Some(x), Some(y)) => {
            let c = term_cmp(&x, &y);
            debug_assert_ne!(c, Ordering::Equal);
            return c;
        }
    }
    small[0].iter().rev().cmp(small[1].iter().rev())
}

/// Exact three-way comparison of a tower sum with a natural number.
pub fn tower_cmp(bound: &TowerExpression, n: &BigUint) -> Ordering {
    if bound.terms.len() == 1 {
        return term_cmp_natural(&bound.terms[0], n);
    }
    value_cmp(bound, &TowerExpression::natural(n.clone()))
}

impl PartialEq for TowerExpression {
    fn eq(&self, other: &TowerExpression) -> bool {
        value_cmp(self, other) == Ordering::Equal
    }
}

impl Eq for TowerExpression {}

impl PartialOrd for TowerExpression {
    fn partial_cmp(&self, other: &TowerExpression) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for TowerExpression {
    fn cmp(&self, other: &TowerExpression) -> Ordering {
        value_cmp(self, other)
    }
}

fn write_natural(f: &mut fmt::Formatter<'_>, x: &BigUint) -> fmt::Result {
    match log2_exact(x) {
        Some(k) if k >= 64 => write!(f, "2^{{{k}}}"),
        _ => write!(f, "{x}"),
    }
}

impl fmt::Display for TowerExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            write!(f, "e^{{")?;
            write_natural(f, &t.height)?;
            write!(f, "}}({})", t.arg)?;
        }
        Ok(())
    }
}

/// `e^{2^{ap}}(p) + e^{2^{aq}}(q)`.
pub fn theorem_bound(p: u64, q: u64, a: u64) -> TowerExpression {
    let term = |x: u64| TowerTerm {
        height: BigUint::one() << (a as u128 * x as u128) as usize,
        arg: BigUint::from(x),
    };
    TowerExpression::new(alloc::vec![term(p), term(q)])
}

/// The bound written symbolically, `e^{2^{a·p}}(p)+e^{2^{a·q}}(q)` with the
/// numbers substituted.
pub fn render_bound(p: u64, q: u64, a: u64) -> alloc::string::String {
    alloc::format!("e^{{2^{{{a}·{p}}}}}({p})+e^{{2^{{{a}·{q}}}}}({q})")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn n(x: u64) -> BigUint {
        BigUint::from(x)
    }

    fn single(h: u32, x: u32) -> TowerExpression {
        TowerExpression::new(alloc::vec![TowerTerm::new(h, x)])
    }

    #[test]
    fn unfolding_examples() {
        assert_eq!(tower_cmp(&single(1, 3), &n(8)), Ordering::Equal);
        assert_eq!(tower_cmp(&single(2, 2), &n(16)), Ordering::Equal);
        assert_eq!(tower_cmp(&single(3, 2), &n(65535)), Ordering::Greater);
        assert_eq!(tower_cmp(&single(0, 7), &n(7)), Ordering::Equal);
    }

    #[test]
    fn theorem_bounds() {
        assert_eq!(tower_cmp(&theorem_bound(1, 1, 1), &n(8)), Ordering::Equal);
        assert_eq!(tower_cmp(&theorem_bound(2, 1, 1), &n(1_000_000)), Ordering::Greater);
        let huge = theorem_bound(3, 3, 200);
        assert_eq!(tower_cmp(&huge, &n(u64::MAX)), Ordering::Greater);
        assert!(huge > theorem_bound(2, 3, 200));
        assert_eq!(render_bound(3, 2, 200), "e^{2^{200·3}}(3)+e^{2^{200·2}}(2)");
        assert_eq!(alloc::format!("{}", theorem_bound(1, 1, 1)), "e^{2}(1)+e^{2}(1)");
        assert!(alloc::format!("{huge}").starts_with("e^{2^{600}}(3)"));
    }

    #[test]
    fn normalized_forms_compare_equal() {
        assert_eq!(single(0, 16), single(2, 2));
        assert_eq!(single(1, 1), single(2, 0));
        let big = TowerExpression::new(alloc::vec![TowerTerm::new(40u32, 3u32), TowerTerm::new(40u32, 3u32)]);
        let other = TowerExpression::new(alloc::vec![TowerTerm::new(40u32, 3u32), TowerTerm::new(1u32, 7u32)]);
        assert!(big > other);
        let sum = TowerExpression::new(alloc::vec![TowerTerm::new(1u32, 5u32); 2]);
        assert_eq!(sum, single(1, 6));
    }

    fn arb_term() -> impl Strategy<Value = TowerTerm> {
        (0u32..5, 0u32..20).prop_map(|(h, x)| TowerTerm::new(h, x))
    }

    fn arb_expr() -> impl Strategy<Value = TowerExpression> {
        proptest::collection::vec(arb_term(), 1..4).prop_map(TowerExpression::new)
    }

    proptest! {
        #[test]
        fn agrees_with_exact_evaluation(e in arb_expr(), bits in 0u64..4096, delta in -3i64..=3) {
            let x = BigUint::one() << bits;
            let target = match e.evaluate(4096) {
                Some(v) if delta >= 0 => v + BigUint::from(delta as u64),
                Some(v) => if v >= BigUint::from((-delta) as u64) { v - BigUint::from((-delta) as u64) } else { v },
                None => x,
            };
            if let Some(v) = e.evaluate(4096) {
                prop_assert_eq!(tower_cmp(&e, &target), v.cmp(&target));
            } else {
                prop_assert_eq!(tower_cmp(&e, &target), Ordering::Greater);
            }
        }

        #[test]
        fn ordering_matches_values(a in arb_expr(), b in arb_expr()) {
            if let (Some(x), Some(y)) = (a.evaluate(1 << 17), b.evaluate(1 << 17)) {
                prop_assert_eq!(a.cmp(&b), x.cmp(&y));
            }
            prop_assert_eq!(a.cmp(&b), b.cmp(&a).reverse());
        }
    }
}
