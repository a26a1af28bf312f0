//! Independent brute-force references for the test suite.
//!
//! Nothing here touches the message-passing engine: cosets are enumerated
//! tail by tail through the generator rows, exactly as defined. Punctured
//! cosets histogram *distinct* restricted words (the restriction map loses
//! injectivity); plain and shortened cosets histogram tails, which stay
//! injective. Deliberately slow and boring — its value is independence.

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigUint;

use crate::code::{restrict_word, u_bit_full, CodeSpec, Mode};
use crate::gf2::{prefix_image, BitVector};
use crate::poly::WeightPoly;
use crate::spectrum::{RunStats, SpectrumResult};
use crate::{Error, Result};

/// Exhaustion guard for the brute-force paths.
#[derive(Clone, Copy, Debug)]
pub struct OracleLimits {
    pub max_free_bits: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_free_bits: 20 }
    }
}

impl OracleLimits {
    fn check(&self, needed: usize) -> Result<()> {
        let limit = self.max_free_bits.min(30);
        if needed > limit {
            return Err(Error::EnumerationLimit { needed, limit });
        }
        Ok(())
    }
}

fn histogram(weights: impl IntoIterator<Item = usize>, w_cap: u32) -> WeightPoly {
    let mut counts = vec![0u64; w_cap as usize + 1];
    for w in weights {
        counts[w] += 1;
    }
    WeightPoly::from_terms(
        counts
            .into_iter()
            .enumerate()
            .filter(|&(_, c)| c > 0)
            .map(|(w, c)| (w as u32, BigUint::from(c))),
        w_cap,
    )
}

/// Full (untruncated) weight enumerator of the coset fixing `u_prefix`,
/// by enumerating every free tail.
pub fn brute_coset(
    spec: &CodeSpec,
    u_prefix: &BitVector,
    limits: OracleLimits,
) -> Result<WeightPoly> {
    let len = spec.parent_len();
    if u_prefix.is_empty() || u_prefix.len() > len {
        return Err(Error::PrefixTooLong {
            got: u_prefix.len(),
            max: len,
        });
    }
    let free = len - u_prefix.len();
    limits.check(free)?;
    let w_cap = spec.code_len() as u32;

    let mut distinct: HashSet<BitVector> = HashSet::new();
    let mut weights: Vec<usize> = Vec::new();
    for tail in 0u64..1 << free {
        let mut u = u_prefix.clone();
        for j in 0..free {
            u.push(tail >> j & 1 == 1);
        }
        let x = prefix_image(&u, spec.n())?;
        match spec.mode() {
            Mode::Plain => weights.push(x.weight()),
            Mode::Shortened => {
                if spec.pattern().iter().any(|&c| x.get(c)) {
                    continue;
                }
                weights.push(restrict_word(&x, spec).weight());
            }
            Mode::Punctured => {
                distinct.insert(restrict_word(&x, spec));
            }
        }
    }
    if spec.mode() == Mode::Punctured {
        weights.extend(distinct.iter().map(|w| w.weight()));
    }
    Ok(histogram(weights, w_cap))
}

/// Partial spectrum by summing `brute_coset` over every final-stage prefix,
/// with no pruning anywhere.
pub fn brute_spectrum(
    spec: &CodeSpec,
    w_end: u32,
    limits: OracleLimits,
) -> Result<SpectrumResult> {
    limits.check(spec.dim())?;
    let start = Instant::now();
    let s = spec.s();
    let free_info: Vec<usize> = spec.info_positions().into_iter().filter(|&i| i <= s).collect();

    let mut sum = WeightPoly::zero(w_end);
    for assign in 0u64..1 << free_info.len() {
        let mut v = BitVector::zeros(s + 1);
        for (bit, &pos) in free_info.iter().enumerate() {
            if assign >> bit & 1 == 1 {
                v.set(pos, true);
            }
        }
        let u = BitVector::from_bits((0..=s).map(|i| u_bit_full(spec, &v, i)));
        let coset = brute_coset(spec, &u, limits)?;
        sum = crate::poly::wp_add(&sum, &coset.truncate(w_end))?;
    }

    let stage_sizes: Vec<u64> = {
        let mut sizes = Vec::with_capacity(s + 1);
        let mut info_so_far = 0u32;
        for i in 0..=s {
            if !spec.is_frozen(i) {
                info_so_far += 1;
            }
            sizes.push(1u64 << info_so_far);
        }
        sizes
    };
    Ok(SpectrumResult {
        spectrum: sum,
        stats: RunStats {
            n_c: stage_sizes.iter().sum(),
            stage_sizes,
            pruned: 0,
            wall: start.elapsed(),
        },
    })
}
