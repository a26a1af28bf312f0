//! Code-instance description: frozen sets, pre-transformations, puncturing
//! and shortening patterns, derived incapable/overcapable sets, and the
//! reference encoder.

use std::path::Path;
use std::sync::{Arc, OnceLock};

use crate::gf2::{prefix_image, rank_profile, BitVector, RankProfile};
use crate::{Error, Result};

/// Rate-compatibility mode of a code instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Full-length code, no coordinates removed.
    Plain,
    /// Pattern coordinates are erased (not transmitted).
    Punctured,
    /// Pattern coordinates are fixed to 0 and not transmitted.
    Shortened,
}

/// Upper-triangular binary matrix with unit diagonal (always invertible).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperTriangular {
    size: usize,
    rows: Vec<BitVector>,
}

impl UpperTriangular {
    pub fn new(rows: Vec<BitVector>) -> Result<Self> {
        let size = rows.len();
        for (r, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::InvalidSpec(format!(
                    "transform row {r} has length {}, expected {size}",
                    row.len()
                )));
            }
            if !row.get(r) {
                return Err(Error::InvalidSpec(format!(
                    "transform diagonal entry at {r} must be 1"
                )));
            }
            if (0..r).any(|c| row.get(c)) {
                return Err(Error::InvalidSpec(format!(
                    "transform row {r} has entries below the diagonal"
                )));
            }
        }
        Ok(UpperTriangular { size, rows })
    }

    pub fn identity(size: usize) -> Self {
        let mut rows = Vec::with_capacity(size);
        for r in 0..size {
            let mut row = BitVector::zeros(size);
            row.set(r, true);
            rows.push(row);
        }
        UpperTriangular { size, rows }
    }

    /// Toeplitz band of convolution taps: `T[j][j+k] = g_k`.
    pub fn from_taps(g: &BitVector, size: usize) -> Result<Self> {
        if g.is_empty() || !g.get(0) {
            return Err(Error::InvalidSpec("convolution taps must start with 1".into()));
        }
        let mut rows = Vec::with_capacity(size);
        for j in 0..size {
            let mut row = BitVector::zeros(size);
            for k in 0..g.len().min(size - j) {
                if g.get(k) {
                    row.set(j + k, true);
                }
            }
            rows.push(row);
        }
        Ok(UpperTriangular { size, rows })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }
}

/// Invertible map `v ↦ u` applied ahead of the polar transform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PreTransform {
    Identity,
    /// Convolution `u_i = Σ_j g_j · v_{i-j}`; taps `[g_0, ..., g_{m-1}]`
    /// with `g_0 = 1` multiplying `v_i`.
    Pac(BitVector),
    /// General upper-triangular transform `u = vT`; a frozen `v_i` then makes
    /// `u_i` a linear function of earlier bits (dynamic frozen bits).
    Matrix(UpperTriangular),
}

/// Full description of one code instance. Immutable after construction; the
/// derived frozen set, the stage bound `s`, and (when punctured) the rank
/// profile are computed once here.
#[derive(Clone, Debug)]
pub struct CodeSpec {
    n: usize,
    mode: Mode,
    frozen: Vec<usize>,
    pattern: Vec<usize>,
    pattern_mask: Vec<bool>,
    derived_frozen: Vec<usize>,
    derived_mask: Vec<bool>,
    effective_frozen: Vec<usize>,
    effective_mask: Vec<bool>,
    s: usize,
    pre_transform: PreTransform,
    ranks: Option<Arc<RankProfile>>,
}

impl CodeSpec {
    pub fn new(
        n: usize,
        frozen: &[usize],
        mode: Mode,
        pattern: &[usize],
        pre_transform: PreTransform,
    ) -> Result<Self> {
        if n == 0 || n > 20 {
            return Err(Error::InvalidSpec(format!("log2 length {n} out of range 1..=20")));
        }
        let len = 1usize << n;
        let mut frozen: Vec<usize> = frozen.to_vec();
        frozen.sort_unstable();
        frozen.dedup();
        if let Some(&bad) = frozen.iter().find(|&&i| i >= len) {
            return Err(Error::IndexOutOfRange { index: bad, len });
        }
        let mut pattern: Vec<usize> = pattern.to_vec();
        pattern.sort_unstable();
        pattern.dedup();
        if let Some(&bad) = pattern.iter().find(|&&i| i >= len) {
            return Err(Error::IndexOutOfRange { index: bad, len });
        }
        match mode {
            Mode::Plain => {
                if !pattern.is_empty() {
                    return Err(Error::InvalidSpec("plain mode takes no pattern".into()));
                }
            }
            Mode::Punctured | Mode::Shortened => {
                if pattern.is_empty() || pattern.len() >= len {
                    return Err(Error::InvalidSpec(format!(
                        "pattern must remove between 1 and {} coordinates",
                        len - 1
                    )));
                }
            }
        }
        match &pre_transform {
            PreTransform::Identity => {}
            PreTransform::Pac(g) => {
                if g.is_empty() || !g.get(0) {
                    return Err(Error::InvalidSpec("convolution taps must start with 1".into()));
                }
            }
            PreTransform::Matrix(t) => {
                if t.size() != len {
                    return Err(Error::InvalidSpec(format!(
                        "transform is {}x{0}, code length is {len}",
                        t.size()
                    )));
                }
            }
        }

        let derived_frozen = capability_sets(n, &pattern, mode)?;
        let mut effective_frozen: Vec<usize> = frozen.clone();
        effective_frozen.extend(&derived_frozen);
        effective_frozen.sort_unstable();
        effective_frozen.dedup();
        // An all-information code has no frozen stage; the enumeration then
        // branches at stage 0 and sums both cosets.
        let s = effective_frozen.last().copied().unwrap_or(0);

        let mut pattern_mask = vec![false; len];
        for &p in &pattern {
            pattern_mask[p] = true;
        }
        let mut derived_mask = vec![false; len];
        for &i in &derived_frozen {
            derived_mask[i] = true;
        }
        let mut effective_mask = vec![false; len];
        for &i in &effective_frozen {
            effective_mask[i] = true;
        }
        let ranks = match mode {
            Mode::Punctured => Some(Arc::new(rank_profile(n, &pattern)?)),
            _ => None,
        };
        Ok(CodeSpec {
            n,
            mode,
            frozen,
            pattern,
            pattern_mask,
            derived_frozen,
            derived_mask,
            effective_frozen,
            effective_mask,
            s,
            pre_transform,
            ranks,
        })
    }

    /// Builds the frozen set from a reliability sequence (ascending order,
    /// most reliable last): the `k` information bits are the most reliable
    /// indices outside the derived frozen set, everything else is frozen.
    pub fn from_reliability(
        n: usize,
        k: usize,
        mode: Mode,
        pattern: &[usize],
        pre_transform: PreTransform,
        sequence: &[usize],
    ) -> Result<Self> {
        let len = 1usize << n;
        let sub = reliability_subsequence(sequence, n)?;
        let derived = capability_sets(n, pattern, mode)?;
        let mut info = vec![false; len];
        let mut picked = 0usize;
        for &i in sub.iter().rev() {
            if picked == k {
                break;
            }
            if !derived.contains(&i) {
                info[i] = true;
                picked += 1;
            }
        }
        if picked < k {
            return Err(Error::InvalidSpec(format!(
                "cannot place {k} information bits: only {picked} usable indices"
            )));
        }
        let frozen: Vec<usize> = (0..len).filter(|&i| !info[i]).collect();
        CodeSpec::new(n, &frozen, mode, pattern, pre_transform)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Parent (unrestricted) code length `N = 2^n`.
    pub fn parent_len(&self) -> usize {
        1 << self.n
    }

    /// Transmitted length: `N`, `N - |pattern|` for punctured/shortened.
    pub fn code_len(&self) -> usize {
        match self.mode {
            Mode::Plain => self.parent_len(),
            _ => self.parent_len() - self.pattern.len(),
        }
    }

    /// Number of information bits.
    pub fn dim(&self) -> usize {
        self.parent_len() - self.effective_frozen.len()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The frozen set as given (before adding derived indices).
    pub fn frozen(&self) -> &[usize] {
        &self.frozen
    }

    pub fn pattern(&self) -> &[usize] {
        &self.pattern
    }

    pub fn is_removed_coord(&self, c: usize) -> bool {
        self.pattern_mask[c]
    }

    /// Incapable (punctured) or overcapable (shortened) input indices.
    pub fn derived_frozen(&self) -> &[usize] {
        &self.derived_frozen
    }

    pub fn is_derived_frozen(&self, i: usize) -> bool {
        self.derived_mask[i]
    }

    /// Union of the given frozen set and the derived one.
    pub fn effective_frozen(&self) -> &[usize] {
        &self.effective_frozen
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.effective_mask[i]
    }

    pub fn info_positions(&self) -> Vec<usize> {
        (0..self.parent_len()).filter(|&i| !self.effective_mask[i]).collect()
    }

    /// Last frozen stage: enumeration branches over stages `0..=s` and sums
    /// coset enumerators there.
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn pre_transform(&self) -> &PreTransform {
        &self.pre_transform
    }

    /// Rank profile of the punctured submatrix; `None` unless punctured.
    pub fn rank_profile(&self) -> Option<&RankProfile> {
        self.ranks.as_deref()
    }

    pub(crate) fn rank_profile_arc(&self) -> Option<Arc<RankProfile>> {
        self.ranks.clone()
    }
}

/// `u_i` from the pre-transform, reading only `v_0..v_i` of `v`.
/// In shortened mode an overcapable index is forced to 0, overriding the
/// transform, so the removed coordinates stay zero.
pub(crate) fn u_bit_full(spec: &CodeSpec, v: &BitVector, i: usize) -> bool {
    u_bit_appended(spec, v, i, v.get(i))
}

/// `u_i` when `bit` is appended as `v_i`; `v` is read only below index `i`,
/// so a prefix of length `i` suffices.
pub(crate) fn u_bit_appended(spec: &CodeSpec, v: &BitVector, i: usize, bit: bool) -> bool {
    if spec.mode == Mode::Shortened && spec.derived_mask[i] {
        return false;
    }
    let v_at = |j: usize| if j == i { bit } else { v.get(j) };
    match &spec.pre_transform {
        PreTransform::Identity => bit,
        PreTransform::Pac(g) => {
            let mut acc = false;
            for j in 0..g.len().min(i + 1) {
                acc ^= g.get(j) && v_at(i - j);
            }
            acc
        }
        PreTransform::Matrix(t) => {
            let mut acc = false;
            for j in 0..=i {
                acc ^= v_at(j) && t.get(j, i);
            }
            acc
        }
    }
}

/// `u_i` derived from the prefix `v_0..v_i`.
pub fn u_bit(spec: &CodeSpec, v_prefix: &BitVector, i: usize) -> Result<bool> {
    if v_prefix.len() != i + 1 {
        return Err(Error::PrefixLenMismatch {
            got: v_prefix.len(),
            want: i + 1,
        });
    }
    Ok(u_bit_full(spec, v_prefix, i))
}

/// The whole `u = vT` chain (with shortened-mode overrides).
pub fn derive_u(spec: &CodeSpec, v: &BitVector) -> Result<BitVector> {
    let len = spec.parent_len();
    if v.len() != len {
        return Err(Error::PrefixLenMismatch { got: v.len(), want: len });
    }
    Ok(BitVector::from_bits((0..len).map(|i| u_bit_full(spec, v, i))))
}

/// Erasure propagation over the recursive code structure to find the input
/// indices made useless (punctured: incapable) or redundant (shortened:
/// overcapable) by removing the pattern coordinates.
///
/// Leaf state is 1 on pattern coordinates. Each kernel maps child states
/// `(a, b)` to `(a OR b, a AND b)` for puncturing — an erased pair output is
/// unrecoverable, the second survives one erasure — and to `(a AND b, a OR b)`
/// for shortening, where a known pair needs both halves known.
pub fn capability_sets(n: usize, pattern: &[usize], mode: Mode) -> Result<Vec<usize>> {
    let len = 1usize << n;
    if let Some(&bad) = pattern.iter().find(|&&p| p >= len) {
        return Err(Error::IndexOutOfRange { index: bad, len });
    }
    if mode == Mode::Plain || pattern.is_empty() {
        return Ok(Vec::new());
    }
    let mut states = vec![false; len];
    for &p in pattern {
        states[p] = true;
    }
    let out = propagate(&states, mode);
    Ok((0..len).filter(|&i| out[i]).collect())
}

fn propagate(states: &[bool], mode: Mode) -> Vec<bool> {
    let len = states.len();
    if len == 1 {
        return states.to_vec();
    }
    let even: Vec<bool> = states.iter().copied().step_by(2).collect();
    let odd: Vec<bool> = states.iter().copied().skip(1).step_by(2).collect();
    let ua = propagate(&even, mode);
    let ub = propagate(&odd, mode);
    let mut out = vec![false; len];
    for j in 0..len / 2 {
        let (first, second) = match mode {
            Mode::Punctured => (ua[j] || ub[j], ua[j] && ub[j]),
            Mode::Shortened => (ua[j] && ub[j], ua[j] || ub[j]),
            Mode::Plain => unreachable!(),
        };
        out[2 * j] = first;
        out[2 * j + 1] = second;
    }
    out
}

/// The standard rate-matching patterns: puncturing takes bit-reversed
/// low indices, shortening bit-reversed high indices. Returned sorted.
pub fn bit_reversal_pattern(n: usize, count: usize, mode: Mode) -> Result<Vec<usize>> {
    let len = 1usize << n;
    if count == 0 || count >= len {
        return Err(Error::InvalidSpec(format!(
            "pattern size {count} out of range 1..{len}"
        )));
    }
    let range = match mode {
        Mode::Punctured => 0..count,
        Mode::Shortened => len - count..len,
        Mode::Plain => return Err(Error::InvalidSpec("plain mode takes no pattern".into())),
    };
    let mut out: Vec<usize> = range
        .map(|j| crate::gf2::bit_reversal(j, n))
        .collect::<Result<_>>()?;
    out.sort_unstable();
    Ok(out)
}

/// Drops the pattern coordinates, keeping the rest in order.
pub fn restrict_word(x: &BitVector, spec: &CodeSpec) -> BitVector {
    if spec.mode == Mode::Plain {
        return x.clone();
    }
    BitVector::from_bits(
        (0..x.len()).filter(|&c| !spec.pattern_mask[c]).map(|c| x.get(c)),
    )
}

/// Reference encoder: `v ↦ u ↦ x = uG`, then the mode restriction.
/// Frozen positions of `v` must be 0. In shortened mode the removed
/// coordinates are checked to be 0 — a failure means the `CodeSpec` itself
/// is inconsistent (its pattern does not match its derived frozen set).
pub fn encode(spec: &CodeSpec, v: &BitVector) -> Result<BitVector> {
    let len = spec.parent_len();
    if v.len() != len {
        return Err(Error::PrefixLenMismatch { got: v.len(), want: len });
    }
    if let Some(&i) = spec.effective_frozen.iter().find(|&&i| v.get(i)) {
        return Err(Error::InvalidSpec(format!("frozen bit {i} set in message")));
    }
    let u = derive_u(spec, v)?;
    let x = prefix_image(&u, spec.n)?;
    if spec.mode == Mode::Shortened {
        if let Some(coord) = spec.pattern.iter().copied().find(|&c| x.get(c)) {
            return Err(Error::ShorteningViolated { coord });
        }
    }
    Ok(restrict_word(&x, spec))
}

/// Parses an index list: a JSON array of integers or whitespace/line
/// separated plain text.
pub fn parse_index_list(text: &str) -> Result<Vec<usize>> {
    let trimmed = text.trim();
    let body = if let Some(stripped) = trimmed.strip_prefix('[') {
        let inner = stripped
            .strip_suffix(']')
            .ok_or_else(|| Error::Parse("unterminated JSON array".into()))?;
        inner.replace(',', " ")
    } else {
        trimmed.to_string()
    };
    body.split_whitespace()
        .map(|tok| {
            tok.parse::<usize>()
                .map_err(|_| Error::Parse(format!("invalid index {tok:?}")))
        })
        .collect()
}

pub fn load_index_list(path: &Path) -> Result<Vec<usize>> {
    parse_index_list(&std::fs::read_to_string(path)?)
}

/// Validates a reliability sequence and restricts it to indices below `2^n`,
/// preserving order (ascending reliability, most reliable last).
pub fn reliability_subsequence(sequence: &[usize], n: usize) -> Result<Vec<usize>> {
    let len = 1usize << n;
    if sequence.len() < len {
        return Err(Error::InvalidSpec(format!(
            "reliability sequence has {} entries, need at least {len}",
            sequence.len()
        )));
    }
    let sub: Vec<usize> = sequence.iter().copied().filter(|&i| i < len).collect();
    let mut seen = vec![false; len];
    for &i in &sub {
        if seen[i] {
            return Err(Error::InvalidSpec(format!("reliability sequence repeats index {i}")));
        }
        seen[i] = true;
    }
    if sub.len() != len {
        return Err(Error::InvalidSpec(format!(
            "reliability sequence covers {} of {len} indices",
            sub.len()
        )));
    }
    Ok(sub)
}

/// The bundled 1024-entry reliability sequence (5G NR polar construction),
/// ascending reliability, most reliable last.
pub fn builtin_reliability_sequence() -> &'static [usize] {
    static SEQ: OnceLock<Vec<usize>> = OnceLock::new();
    SEQ.get_or_init(|| {
        parse_index_list(include_str!("../data/nr_reliability_1024.txt"))
            .expect("bundled reliability sequence is well-formed")
    })
}

pub fn load_reliability_sequence(path: &Path) -> Result<Vec<usize>> {
    load_index_list(path)
}
