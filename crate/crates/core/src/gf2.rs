//! GF(2) linear algebra over the Kronecker-power generator `G = G2^{⊗n}`.
//!
//! Rows of `G` are never materialized as a matrix: entry `(r, c)` is 1 iff the
//! binary support of `c` is contained in the support of `r`, so any row can be
//! synthesized on demand.

use crate::{Error, Result};

const WORD_BITS: usize = 64;

/// Packed vector of bits addressed by index.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVector {
    len: usize,
    words: Vec<u64>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            words: vec![0; len.div_ceil(WORD_BITS)],
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut v = BitVector::zeros(0);
        for b in bits {
            v.push(b);
        }
        v
    }

    /// Parses a string of `0`/`1` characters, most significant position first.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let mut v = BitVector::zeros(0);
        for ch in s.chars() {
            match ch {
                '0' => v.push(false),
                '1' => v.push(true),
                _ => return Err(Error::Parse(format!("invalid bit character {ch:?}"))),
            }
        }
        Ok(v)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn push(&mut self, value: bool) {
        if self.len.is_multiple_of(WORD_BITS) {
            self.words.push(0);
        }
        self.len += 1;
        self.set(self.len - 1, value);
    }

    pub fn xor_assign(&mut self, other: &BitVector) {
        assert_eq!(self.len, other.len, "xor of mismatched lengths");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit, if any.
    pub fn first_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Whether the first `len` positions of both vectors agree.
    pub fn eq_below(&self, other: &BitVector, len: usize) -> bool {
        assert!(len <= self.len && len <= other.len);
        let whole = len / WORD_BITS;
        if self.words[..whole] != other.words[..whole] {
            return false;
        }
        let rem = len % WORD_BITS;
        rem == 0 || (self.words[whole] ^ other.words[whole]) & ((1u64 << rem) - 1) == 0
    }

    /// Copy of positions `[0, len)`.
    pub fn prefix(&self, len: usize) -> BitVector {
        assert!(len <= self.len);
        let mut out = BitVector::zeros(len);
        for i in 0..len {
            if self.get(i) {
                out.set(i, true);
            }
        }
        out
    }
}

impl std::fmt::Debug for BitVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in self.iter() {
            write!(f, "{}", u8::from(b))?;
        }
        Ok(())
    }
}

/// Row `r` of `G2^{⊗n}`: entry at column `c` is 1 iff `supp(c) ⊆ supp(r)`.
pub fn kron_row(n: usize, r: usize) -> Result<BitVector> {
    let len = 1usize << n;
    if r >= len {
        return Err(Error::IndexOutOfRange { index: r, len });
    }
    let mut row = BitVector::zeros(len);
    // Supports contained in supp(r) are exactly the submasks of r.
    let mut c = r;
    loop {
        row.set(c, true);
        if c == 0 {
            break;
        }
        c = (c - 1) & r;
    }
    Ok(row)
}

/// Image `p = u_prefix · G` of a prefix zero-extended to length `2^n`:
/// the XOR of `kron_row(n, j)` over all `j` with `u_j = 1`.
pub fn prefix_image(u_prefix: &BitVector, n: usize) -> Result<BitVector> {
    let len = 1usize << n;
    if u_prefix.len() > len {
        return Err(Error::PrefixTooLong {
            got: u_prefix.len(),
            max: len,
        });
    }
    let mut image = BitVector::zeros(len);
    for j in 0..u_prefix.len() {
        if u_prefix.get(j) {
            image.xor_assign(&kron_row(n, j)?);
        }
    }
    Ok(image)
}

/// Index whose `n`-bit binary representation is reversed.
pub fn bit_reversal(j: usize, n: usize) -> Result<usize> {
    let len = 1usize << n;
    if j >= len {
        return Err(Error::IndexOutOfRange { index: j, len });
    }
    let mut out = 0usize;
    for b in 0..n {
        if j >> b & 1 == 1 {
            out |= 1 << (n - 1 - b);
        }
    }
    Ok(out)
}

/// Ranks of the bottom row blocks of `G2^{⊗n}` restricted to the columns
/// outside `pattern`: `ranks[i]` is the GF(2) rank of rows `i+1..N-1`.
///
/// Punctured-coset counts over free tails overcount each distinct restricted
/// word by `2^{(N-i-1) - ranks[i]}`; `division_exponent` exposes that gap.
#[derive(Clone, Debug)]
pub struct RankProfile {
    n: usize,
    pattern: Vec<usize>,
    ranks: Vec<usize>,
}

impl RankProfile {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pattern(&self) -> &[usize] {
        &self.pattern
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    /// `(N - i - 1) - ranks[i]`: the exponent of the power of two dividing
    /// every tail-assignment count of a coset fixed through bit `i`.
    pub fn division_exponent(&self, i: usize) -> u32 {
        let n_codes = 1usize << self.n;
        (n_codes - i - 1 - self.ranks[i]) as u32
    }
}

/// Computes the whole profile in one incremental elimination pass, adding
/// rows from the bottom (`r = N-1` down to `1`).
pub fn rank_profile(n: usize, pattern: &[usize]) -> Result<RankProfile> {
    let len = 1usize << n;
    let mut sorted: Vec<usize> = pattern.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if let Some(&bad) = sorted.iter().find(|&&p| p >= len) {
        return Err(Error::IndexOutOfRange { index: bad, len });
    }
    let kept: Vec<usize> = (0..len).filter(|c| sorted.binary_search(c).is_err()).collect();

    let mut ranks = vec![0usize; len];
    // Echelon basis indexed by pivot (lowest set bit) position.
    let mut basis: Vec<Option<BitVector>> = vec![None; kept.len()];
    let mut rank = 0usize;
    for r in (1..len).rev() {
        let full = kron_row(n, r)?;
        let mut row = BitVector::from_bits(kept.iter().map(|&c| full.get(c)));
        while let Some(p) = row.first_one() {
            match &basis[p] {
                Some(b) => row.xor_assign(b),
                None => {
                    basis[p] = Some(row);
                    rank += 1;
                    break;
                }
            }
        }
        ranks[r - 1] = rank;
    }
    Ok(RankProfile {
        n,
        pattern: sorted,
        ranks,
    })
}
