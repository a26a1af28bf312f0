//! Truncated weight enumerators of polar cosets by message passing.
//!
//! A coset fixes the input bits `u_0..u_i` and leaves the tail free. Its
//! enumerator is computed by the even/odd factorization of the transform:
//! `x_even = (u_even ⊕ u_odd) G_{L/2}` and `x_odd = u_odd G_{L/2}`, so a
//! block's enumerator pair splits into an a-child over the even coordinates
//! (prefix = pairwise XORs) and a b-child over the odd coordinates (prefix =
//! odd entries). An even-length prefix leaves the current pair straddling a
//! free tail bit (check combine, summing over it); an odd-length prefix pins
//! it (variable combine, with a component swap when the pinned bit is 1).
//!
//! Removed coordinates enter only at the leaves: a punctured coordinate
//! weighs nothing either way, a shortened one admits only the zero value.
//! Punctured counts enumerate tail assignments; dividing by
//! `2^{(N-i-1) - rank}` (see [`RankProfile`]) converts them to distinct-word
//! counts, and that division is asserted exact.

use std::sync::Arc;

use num_bigint::BigUint;
use rustc_hash::FxHashMap;

use crate::code::{CodeSpec, Mode};
use crate::gf2::{BitVector, RankProfile};
use crate::poly::{wp_div_pow2, wp_lp, wp_mul_trunc, WeightPoly};
use crate::{Error, Result};

/// What a coordinate contributes at its leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoordStatus {
    Normal,
    Punctured,
    Shortened,
}

/// Enumerator pair conditioned on the next input bit being 0 / 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Message {
    pub theta0: WeightPoly,
    pub theta1: WeightPoly,
}

impl Message {
    pub fn new(theta0: WeightPoly, theta1: WeightPoly) -> Self {
        assert_eq!(theta0.w_cap(), theta1.w_cap(), "message components share a cap");
        Message { theta0, theta1 }
    }

    pub fn component(&self, bit: bool) -> &WeightPoly {
        if bit {
            &self.theta1
        } else {
            &self.theta0
        }
    }

    pub fn swapped(&self) -> Message {
        Message {
            theta0: self.theta1.clone(),
            theta1: self.theta0.clone(),
        }
    }

    fn swapped_if(&self, swap: bool) -> Message {
        if swap {
            self.swapped()
        } else {
            self.clone()
        }
    }

    /// Restrict both components to their lowest term.
    fn lp(&self) -> Message {
        Message {
            theta0: wp_lp(&self.theta0),
            theta1: wp_lp(&self.theta1),
        }
    }
}

/// Initial message of a leaf whose accumulated prefix image is `p`.
pub fn leaf_init(p: bool, status: CoordStatus, w_cap: u32) -> Message {
    let one = WeightPoly::one(w_cap);
    let x = WeightPoly::monomial(1, 1u32.into(), w_cap);
    let zero = WeightPoly::zero(w_cap);
    let base = match status {
        CoordStatus::Normal => Message::new(one, x),
        CoordStatus::Punctured => Message::new(one.clone(), one),
        CoordStatus::Shortened => Message::new(one, zero),
    };
    base.swapped_if(p)
}

/// Pair combine across a free tail bit: `θ0 = LT(a0·b0 + a1·b1)`,
/// `θ1 = LT(a0·b1 + a1·b0)`.
pub fn check_combine(a: &Message, b: &Message, w_end: u32) -> Message {
    let mut t0 = wp_mul_trunc(&a.theta0, &b.theta0, w_end);
    t0 = crate::poly::wp_add(&t0, &wp_mul_trunc(&a.theta1, &b.theta1, w_end))
        .expect("combine caps agree");
    let mut t1 = wp_mul_trunc(&a.theta0, &b.theta1, w_end);
    t1 = crate::poly::wp_add(&t1, &wp_mul_trunc(&a.theta1, &b.theta0, w_end))
        .expect("combine caps agree");
    Message { theta0: t0, theta1: t1 }
}

/// Pair combine across a pinned bit: `θ0 = LT(a0·b0)`, `θ1 = LT(a1·b1)`.
pub fn var_combine(a: &Message, b: &Message, w_end: u32) -> Message {
    Message {
        theta0: wp_mul_trunc(&a.theta0, &b.theta0, w_end),
        theta1: wp_mul_trunc(&a.theta1, &b.theta1, w_end),
    }
}

// Under min-weight semantics every component carries at most one term, so the
// combines reduce to arithmetic on (degree, count) pairs — no intermediate
// polynomials.
type Low = Option<(u32, BigUint)>;

fn low_of(p: &WeightPoly) -> Option<(u32, &BigUint)> {
    p.terms().first().map(|&(d, ref c)| (d, c))
}

fn low_mul(a: Option<(u32, &BigUint)>, b: Option<(u32, &BigUint)>, w_end: u32) -> Low {
    match (a, b) {
        (Some((da, ca)), Some((db, cb))) if da + db <= w_end => Some((da + db, ca * cb)),
        _ => None,
    }
}

fn low_add(x: Low, y: Low) -> Low {
    match (x, y) {
        (Some((dx, cx)), Some((dy, cy))) => Some(match dx.cmp(&dy) {
            std::cmp::Ordering::Less => (dx, cx),
            std::cmp::Ordering::Greater => (dy, cy),
            std::cmp::Ordering::Equal => (dx, cx + cy),
        }),
        (x, None) => x,
        (None, y) => y,
    }
}

fn low_poly(low: Low, w_end: u32) -> WeightPoly {
    match low {
        Some((d, c)) => WeightPoly::monomial(d, c, w_end),
        None => WeightPoly::zero(w_end),
    }
}

/// Which enumerator a query computes: the full truncated polynomial, or only
/// its minimum-weight term (cheaper; combine results collapse to one term).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semantics {
    Rwef,
    Mwef,
}

/// Minimum weight of a coset under a cap: `Above` means every member weighs
/// more than the cap — or the coset is empty, which only shortening causes.
/// With the cap at the full restricted length, `Above` means exactly "empty".
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MinWeight {
    Finite(u32),
    Above,
}

/// Reusable evaluator for one `(spec, w_end, semantics)` triple.
///
/// Prefix-independent messages for every block are computed once at
/// construction; prefixed sub-results are memoized so that sibling cosets —
/// which dominate the enumeration workload — share their deep subproblems.
/// One map per block (indexed `2^d - 1 + r`) keeps lookups allocation-free;
/// the memo is dropped wholesale when it reaches `memo_cap` entries.
pub struct CosetEvaluator {
    n: usize,
    w_end: u32,
    semantics: Semantics,
    ranks: Option<Arc<RankProfile>>,
    base: Vec<Vec<Arc<Message>>>,
    memo: Vec<FxHashMap<BitVector, Arc<Message>>>,
    memo_len: usize,
    memo_cap: usize,
}

const DEFAULT_MEMO_CAP: usize = 1 << 20;

/// Longest block-input prefix worth memoizing (one packed word).
const MEMO_KEY_MAX_BITS: usize = 64;

impl CosetEvaluator {
    /// `w_end = None` defaults to the restricted code length.
    pub fn new(spec: &CodeSpec, w_end: Option<u32>, semantics: Semantics) -> Self {
        let n = spec.n();
        let len = spec.parent_len();
        let w_end = w_end.unwrap_or(spec.code_len() as u32);
        let statuses: Vec<CoordStatus> = (0..len)
            .map(|c| {
                if !spec.is_removed_coord(c) {
                    CoordStatus::Normal
                } else if spec.mode() == Mode::Punctured {
                    CoordStatus::Punctured
                } else {
                    CoordStatus::Shortened
                }
            })
            .collect();
        let post = |m: Message| {
            if semantics == Semantics::Mwef {
                m.lp()
            } else {
                m
            }
        };
        let mut base: Vec<Vec<Arc<Message>>> = vec![Vec::new(); n + 1];
        base[n] = statuses
            .iter()
            .map(|&st| Arc::new(leaf_init(false, st, w_end)))
            .collect();
        for d in (0..n).rev() {
            base[d] = (0..1usize << d)
                .map(|r| {
                    let m = check_combine(&base[d + 1][r], &base[d + 1][r + (1 << d)], w_end);
                    Arc::new(post(m))
                })
                .collect();
        }
        CosetEvaluator {
            n,
            w_end,
            semantics,
            ranks: spec.rank_profile_arc(),
            base,
            memo: vec![FxHashMap::default(); (1usize << n) - 1],
            memo_len: 0,
            memo_cap: DEFAULT_MEMO_CAP,
        }
    }

    pub fn with_memo_cap(mut self, cap: usize) -> Self {
        self.memo_cap = cap.max(1);
        self
    }

    pub fn w_end(&self) -> u32 {
        self.w_end
    }

    pub fn semantics(&self) -> Semantics {
        self.semantics
    }

    fn combine_check(&self, a: &Message, b: &Message) -> Message {
        match self.semantics {
            Semantics::Rwef => check_combine(a, b, self.w_end),
            Semantics::Mwef => {
                let (a0, a1) = (low_of(&a.theta0), low_of(&a.theta1));
                let (b0, b1) = (low_of(&b.theta0), low_of(&b.theta1));
                Message {
                    theta0: low_poly(
                        low_add(low_mul(a0, b0, self.w_end), low_mul(a1, b1, self.w_end)),
                        self.w_end,
                    ),
                    theta1: low_poly(
                        low_add(low_mul(a0, b1, self.w_end), low_mul(a1, b0, self.w_end)),
                        self.w_end,
                    ),
                }
            }
        }
    }

    fn combine_var(&self, a: &Message, b: &Message, swap: bool) -> Message {
        let (a0, a1) = if swap {
            (&a.theta1, &a.theta0)
        } else {
            (&a.theta0, &a.theta1)
        };
        match self.semantics {
            Semantics::Rwef => Message {
                theta0: wp_mul_trunc(a0, &b.theta0, self.w_end),
                theta1: wp_mul_trunc(a1, &b.theta1, self.w_end),
            },
            Semantics::Mwef => Message {
                theta0: low_poly(low_mul(low_of(a0), low_of(&b.theta0), self.w_end), self.w_end),
                theta1: low_poly(low_mul(low_of(a1), low_of(&b.theta1), self.w_end), self.w_end),
            },
        }
    }

    /// Message pair at block `(depth d, residue r)` given that block's input
    /// prefix `w`: enumerators over the block's coordinates conditioned on
    /// input bit `|w|` being 0 / 1.
    fn eval(&mut self, d: usize, r: usize, w: &BitVector) -> Arc<Message> {
        if w.is_empty() {
            return self.base[d][r].clone();
        }
        // Deep, short subproblems recur across cosets; long prefixes are
        // essentially unique to one evaluation and would only flush the
        // shared entries, so they are recomputed instead of kept.
        let memoize = w.len() <= MEMO_KEY_MAX_BITS;
        let slot = (1usize << d) - 1 + r;
        if memoize {
            if let Some(m) = self.memo[slot].get(w) {
                return m.clone();
            }
        }
        let l = w.len();
        let half = l / 2;
        let mut wa = BitVector::zeros(half);
        let mut wb = BitVector::zeros(half);
        for j in 0..half {
            wa.set(j, w.get(2 * j) ^ w.get(2 * j + 1));
            wb.set(j, w.get(2 * j + 1));
        }
        let a = self.eval(d + 1, r, &wa);
        let b = self.eval(d + 1, r + (1 << d), &wb);
        let msg = if l.is_multiple_of(2) {
            self.combine_check(&a, &b)
        } else {
            // The bit pairing with the query bit is already pinned to w_{l-1}.
            self.combine_var(&a, &b, w.get(l - 1))
        };
        let msg = Arc::new(msg);
        if memoize {
            if self.memo_len >= self.memo_cap {
                for block in &mut self.memo {
                    block.clear();
                }
                self.memo_len = 0;
            }
            self.memo[slot].insert(w.clone(), msg.clone());
            self.memo_len += 1;
        }
        msg
    }

    fn raw_component(&mut self, u_prefix: &BitVector) -> Result<WeightPoly> {
        let len = 1usize << self.n;
        if u_prefix.is_empty() || u_prefix.len() > len {
            return Err(Error::PrefixTooLong {
                got: u_prefix.len(),
                max: len,
            });
        }
        let i = u_prefix.len() - 1;
        let head = u_prefix.prefix(i);
        let msg = self.eval(0, 0, &head);
        Ok(msg.component(u_prefix.get(i)).clone())
    }

    fn division_exponent(&self, i: usize) -> u32 {
        self.ranks.as_ref().map_or(0, |rp| rp.division_exponent(i))
    }

    /// Truncated weight enumerator of the coset fixing `u_prefix`, counting
    /// distinct restricted words.
    pub fn rwef(&mut self, u_prefix: &BitVector) -> Result<WeightPoly> {
        assert_eq!(
            self.semantics,
            Semantics::Rwef,
            "evaluator was built for min-weight queries"
        );
        let raw = self.raw_component(u_prefix)?;
        wp_div_pow2(&raw, self.division_exponent(u_prefix.len() - 1))
    }

    /// Enumerators of the two cosets extending `head` by one bit (fixing the
    /// next input to 0 / 1), from a single evaluation.
    pub fn rwef_pair(&mut self, head: &BitVector) -> Result<(WeightPoly, WeightPoly)> {
        assert_eq!(
            self.semantics,
            Semantics::Rwef,
            "evaluator was built for min-weight queries"
        );
        if head.len() >= 1usize << self.n {
            return Err(Error::PrefixTooLong {
                got: head.len() + 1,
                max: 1 << self.n,
            });
        }
        let msg = self.eval(0, 0, head);
        let k = self.division_exponent(head.len());
        Ok((wp_div_pow2(&msg.theta0, k)?, wp_div_pow2(&msg.theta1, k)?))
    }

    /// Minimum restricted weight of the coset, `Above` if it exceeds `w_end`
    /// or the coset is empty. Works under either semantics; the rank
    /// correction touches only the count, never the reported weight.
    pub fn min_weight(&mut self, u_prefix: &BitVector) -> Result<MinWeight> {
        if u_prefix.is_empty() {
            return Err(Error::PrefixTooLong { got: 0, max: 1 << self.n });
        }
        let last = u_prefix.len() - 1;
        let (w0, w1) = self.child_min_weights(&u_prefix.prefix(last))?;
        Ok(if u_prefix.get(last) { w1 } else { w0 })
    }

    /// Minimum restricted weights of the two cosets extending `head` by one
    /// bit (fixing the next input to 0 / 1), from a single evaluation.
    pub fn child_min_weights(&mut self, head: &BitVector) -> Result<(MinWeight, MinWeight)> {
        if head.len() >= 1usize << self.n {
            return Err(Error::PrefixTooLong {
                got: head.len() + 1,
                max: 1 << self.n,
            });
        }
        let msg = self.eval(0, 0, head);
        let k = self.division_exponent(head.len());
        Ok((min_of(&msg.theta0, k)?, min_of(&msg.theta1, k)?))
    }
}

/// Lowest degree of `poly`, asserting — without allocating — that the rank
/// correction `2^k` divides its count: the minimum-weight slice of a coset is
/// a union of whole tail fibers, so exactness must hold for it in isolation.
fn min_of(poly: &WeightPoly, k: u32) -> Result<MinWeight> {
    match poly.terms().first() {
        None => Ok(MinWeight::Above),
        Some(&(degree, ref count)) => {
            if count.trailing_zeros().unwrap_or(0) < u64::from(k) {
                return Err(Error::NonDivisibleCount { degree, k });
            }
            Ok(MinWeight::Finite(degree))
        }
    }
}

/// One-shot truncated enumerator of the coset fixing `u_prefix`.
pub fn coset_rwef(spec: &CodeSpec, u_prefix: &BitVector, w_end: u32) -> Result<WeightPoly> {
    CosetEvaluator::new(spec, Some(w_end), Semantics::Rwef).rwef(u_prefix)
}

/// One-shot minimum weight of the coset fixing `u_prefix`. With
/// `w_end = None` the cap is the restricted length, so `Above` means the
/// coset is empty (possible only when shortening).
pub fn coset_min_weight(
    spec: &CodeSpec,
    u_prefix: &BitVector,
    w_end: Option<u32>,
) -> Result<MinWeight> {
    CosetEvaluator::new(spec, w_end, Semantics::Mwef).min_weight(u_prefix)
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::code::PreTransform;
    use crate::poly::wp_lowest;
    use num_bigint::BigUint;

    fn poly(pairs: &[(u32, u64)], w_cap: u32) -> WeightPoly {
        WeightPoly::from_terms(pairs.iter().map(|&(d, c)| (d, BigUint::from(c))), w_cap)
    }

    fn msg(t0: &[(u32, u64)], t1: &[(u32, u64)], cap: u32) -> Message {
        Message::new(poly(t0, cap), poly(t1, cap))
    }

    fn bits(s: &str) -> BitVector {
        BitVector::from_bit_str(s).unwrap()
    }

    /// The worked punctured instance: N=8, pattern {0,2,4,6}.
    fn punctured_fixture() -> CodeSpec {
        CodeSpec::new(
            3,
            &[0, 1, 2, 3, 4, 6],
            Mode::Punctured,
            &[0, 2, 4, 6],
            PreTransform::Identity,
        )
        .unwrap()
    }

    #[test]
    fn leaf_init_examples() {
        assert_eq!(leaf_init(false, CoordStatus::Normal, 2), msg(&[(0, 1)], &[(1, 1)], 2));
        assert_eq!(leaf_init(true, CoordStatus::Normal, 2), msg(&[(1, 1)], &[(0, 1)], 2));
        assert_eq!(
            leaf_init(true, CoordStatus::Punctured, 2),
            msg(&[(0, 1)], &[(0, 1)], 2)
        );
        assert_eq!(leaf_init(false, CoordStatus::Shortened, 2), msg(&[(0, 1)], &[], 2));
        assert_eq!(leaf_init(true, CoordStatus::Shortened, 2), msg(&[], &[(0, 1)], 2));
    }

    #[test]
    fn check_combine_examples() {
        let normal = leaf_init(false, CoordStatus::Normal, 2);
        assert_eq!(
            check_combine(&normal, &normal, 2),
            msg(&[(0, 1), (2, 1)], &[(1, 2)], 2)
        );
        let shortened = leaf_init(false, CoordStatus::Shortened, 2);
        assert_eq!(check_combine(&shortened, &shortened, 2), msg(&[(0, 1)], &[], 2));
        let punctured = leaf_init(false, CoordStatus::Punctured, 2);
        assert_eq!(
            check_combine(&punctured, &punctured, 2),
            msg(&[(0, 2)], &[(0, 2)], 2)
        );
    }

    #[test]
    fn var_combine_examples() {
        let a = msg(&[(0, 1), (2, 2)], &[(2, 4)], 2);
        let b = msg(&[(0, 4)], &[(0, 4)], 2);
        assert_eq!(
            var_combine(&a, &b, 2),
            msg(&[(0, 4), (2, 8)], &[(2, 16)], 2)
        );
        let c = msg(&[(0, 1)], &[(1, 1)], 2);
        let ones = msg(&[(0, 1)], &[(0, 1)], 2);
        assert_eq!(var_combine(&c, &ones, 2), c);
        let d = msg(&[(0, 1)], &[], 2);
        let e = msg(&[], &[(0, 1)], 2);
        assert_eq!(var_combine(&d, &e, 2), msg(&[], &[], 2));
    }

    #[test]
    fn punctured_worked_example() {
        let spec = punctured_fixture();
        // Rank of the bottom four rows on the kept (odd) columns is 2, not 4.
        let rp = spec.rank_profile().unwrap();
        assert_eq!(rp.rank(3), 2);
        assert_eq!(rp.division_exponent(3), 2);

        assert_eq!(
            coset_rwef(&spec, &bits("0000"), 2).unwrap(),
            poly(&[(0, 1), (2, 2)], 2)
        );
        assert_eq!(coset_rwef(&spec, &bits("0001"), 2).unwrap(), poly(&[(2, 4)], 2));

        assert_eq!(
            coset_min_weight(&spec, &bits("0000"), Some(2)).unwrap(),
            MinWeight::Finite(0)
        );
        assert_eq!(
            coset_min_weight(&spec, &bits("0001"), Some(2)).unwrap(),
            MinWeight::Finite(2)
        );
    }

    #[test]
    fn plain_coset_example() {
        let spec = CodeSpec::new(2, &[0, 1], Mode::Plain, &[], PreTransform::Identity).unwrap();
        assert_eq!(
            coset_rwef(&spec, &bits("00"), 4).unwrap(),
            poly(&[(0, 1), (2, 2), (4, 1)], 4)
        );
    }

    #[test]
    fn empty_shortened_coset() {
        // Shortening coordinate 0 of the length-2 code: the coset fixing
        // u = (1, 0) holds only the word (1, 1), which breaks x_0 = 0.
        let spec = CodeSpec::new(1, &[], Mode::Shortened, &[0], PreTransform::Identity).unwrap();
        assert!(coset_rwef(&spec, &bits("10"), 2).unwrap().is_zero());
        assert_eq!(
            coset_min_weight(&spec, &bits("10"), None).unwrap(),
            MinWeight::Above
        );
        // The sibling coset holds exactly the word (0, 1).
        assert_eq!(coset_rwef(&spec, &bits("11"), 1).unwrap(), poly(&[(1, 1)], 1));
        assert_eq!(
            coset_min_weight(&spec, &bits("11"), None).unwrap(),
            MinWeight::Finite(1)
        );
    }

    #[test]
    fn min_weight_agrees_with_rwef_lowest() {
        let spec = punctured_fixture();
        let mut rw = CosetEvaluator::new(&spec, Some(4), Semantics::Rwef);
        let mut mw = CosetEvaluator::new(&spec, Some(4), Semantics::Mwef);
        for len in 1..=8usize {
            for val in 0..1u32 << len {
                let prefix = BitVector::from_bits((0..len).map(|b| val >> b & 1 == 1));
                let full = rw.rwef(&prefix).unwrap();
                let got = mw.min_weight(&prefix).unwrap();
                match wp_lowest(&full) {
                    Some(m) => assert_eq!(got, MinWeight::Finite(m.degree)),
                    None => assert_eq!(got, MinWeight::Above),
                }
            }
        }
    }

    #[test]
    fn min_weight_above_threshold_prunes() {
        // Plain code: the coset fixing u_0 = 1 has minimum weight 4 (row 0 of
        // G_16 can at best be thinned to weight ... well, its true minimum).
        let spec = CodeSpec::new(4, &[0], Mode::Plain, &[], PreTransform::Identity).unwrap();
        let full = coset_min_weight(&spec, &bits("1"), None).unwrap();
        let MinWeight::Finite(w) = full else {
            panic!("nonempty coset")
        };
        assert!(w > 0);
        let capped = coset_min_weight(&spec, &bits("1"), Some(w - 1)).unwrap();
        assert_eq!(capped, MinWeight::Above);
    }
}
