//! List enumeration of input prefixes with minimum-weight pruning.
//!
//! The code is the union of the cosets fixing `u_0..u_s`, where `s` is the
//! last frozen stage. The enumeration walks stages `0..=s`, branching on
//! information bits and deriving frozen ones, discards every prefix whose
//! coset minimum weight already exceeds `w_end` (such a coset cannot
//! contribute a term), and sums the truncated enumerators of the survivors.

use std::time::{Duration, Instant};

use num_bigint::BigUint;

use crate::code::{u_bit_appended, CodeSpec};
use crate::coset::{CosetEvaluator, MinWeight, Semantics};
use crate::gf2::BitVector;
use crate::poly::{wp_add, WeightPoly};
use crate::{Error, Result};

/// One candidate prefix: the raw information/frozen bits `v` and the
/// transformed bits `u` actually fixed in the coset.
#[derive(Clone, Debug)]
pub struct PrefixEntry {
    pub v_bits: BitVector,
    pub u_bits: BitVector,
}

/// Enumeration knobs. `prune` exists so that pruned and unpruned runs can be
/// compared; both produce identical spectra.
#[derive(Clone, Copy, Debug)]
pub struct EnumOptions {
    pub prune: bool,
    /// Hard cap on the prefix list; exceeding it is an error, never a silent
    /// truncation — the result is exact or absent.
    pub list_cap: usize,
    /// Entry cap of the coset evaluator's memo table.
    pub memo_cap: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            prune: true,
            list_cap: 1 << 22,
            memo_cap: 1 << 20,
        }
    }
}

/// Exploration statistics of one enumeration run.
#[derive(Clone, Debug)]
pub struct RunStats {
    /// Total cosets evaluated: the sum of all stage list sizes.
    pub n_c: u64,
    /// List size at each stage, after extension, before discarding.
    pub stage_sizes: Vec<u64>,
    /// Entries discarded by the minimum-weight rule.
    pub pruned: u64,
    pub wall: Duration,
}

/// The partial weight spectrum: every `(w, A_w)` with `w ≤ w_end`
/// (`w_end = spectrum.w_cap()`), plus run statistics.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub spectrum: WeightPoly,
    pub stats: RunStats,
}

impl SpectrumResult {
    pub fn w_end(&self) -> u32 {
        self.spectrum.w_cap()
    }

    pub fn terms(&self) -> &[(u32, BigUint)] {
        self.spectrum.terms()
    }
}

fn pushed(mut entry: PrefixEntry, bit: bool, u_i: bool) -> PrefixEntry {
    entry.v_bits.push(bit);
    entry.u_bits.push(u_i);
    entry
}

/// All `A_w` for `w ≤ w_end`, with pruning, default caps.
pub fn enumerate_spectrum(spec: &CodeSpec, w_end: u32) -> Result<SpectrumResult> {
    enumerate_spectrum_with(spec, w_end, EnumOptions::default())
}

pub fn enumerate_spectrum_with(
    spec: &CodeSpec,
    w_end: u32,
    opts: EnumOptions,
) -> Result<SpectrumResult> {
    if w_end == 0 {
        return Err(Error::InvalidSpec("weight threshold must be at least 1".into()));
    }
    let start = Instant::now();
    let s = spec.s();
    let threshold = MinWeight::Finite(w_end);
    let mut mwef = CosetEvaluator::new(spec, Some(w_end), Semantics::Mwef).with_memo_cap(opts.memo_cap);

    let mut list = vec![PrefixEntry {
        v_bits: BitVector::zeros(0),
        u_bits: BitVector::zeros(0),
    }];
    let mut stage_sizes = Vec::with_capacity(s + 1);
    let mut pruned = 0u64;
    for i in 0..=s {
        // Extend and discard in one pass so dead prefixes never accumulate;
        // the stage size still counts every extension before discarding.
        let info = !spec.is_frozen(i);
        let extended_count = list.len() * if info { 2 } else { 1 };
        stage_sizes.push(extended_count as u64);
        if extended_count > opts.list_cap {
            return Err(Error::ListCapExceeded {
                size: extended_count,
                cap: opts.list_cap,
                stage: i,
            });
        }
        let mut next = Vec::new();
        for entry in list {
            // One parent evaluation prices both extensions. Strictly above
            // the threshold: ties still contribute terms.
            let (w0, w1) = if opts.prune {
                mwef.child_min_weights(&entry.u_bits)?
            } else {
                (MinWeight::Finite(0), MinWeight::Finite(0))
            };
            let keep = |u_i: bool| (if u_i { w1 } else { w0 }) <= threshold;
            let u0 = u_bit_appended(spec, &entry.v_bits, i, false);
            if !info {
                if keep(u0) {
                    next.push(pushed(entry, false, u0));
                } else {
                    pruned += 1;
                }
                continue;
            }
            let u1 = u_bit_appended(spec, &entry.v_bits, i, true);
            if keep(u0) {
                next.push(pushed(entry.clone(), false, u0));
            } else {
                pruned += 1;
            }
            if keep(u1) {
                next.push(pushed(entry, true, u1));
            } else {
                pruned += 1;
            }
        }
        list = next;
    }
    drop(mwef);

    let mut rwef = CosetEvaluator::new(spec, Some(w_end), Semantics::Rwef).with_memo_cap(opts.memo_cap);
    let mut sum = WeightPoly::zero(w_end);
    // Surviving siblings sit adjacently (the 0-extension first); one
    // evaluation of their shared head serves both.
    let mut idx = 0;
    while idx < list.len() {
        let u = &list[idx].u_bits;
        let len = u.len();
        let paired = !u.get(len - 1)
            && list.get(idx + 1).is_some_and(|next| {
                next.u_bits.get(len - 1) && next.u_bits.eq_below(u, len - 1)
            });
        if paired {
            let (p0, p1) = rwef.rwef_pair(&u.prefix(len - 1))?;
            sum = wp_add(&wp_add(&sum, &p0)?, &p1)?;
            idx += 2;
        } else {
            sum = wp_add(&sum, &rwef.rwef(u)?)?;
            idx += 1;
        }
    }
    Ok(SpectrumResult {
        spectrum: sum,
        stats: RunStats {
            n_c: stage_sizes.iter().sum(),
            stage_sizes,
            pruned,
            wall: start.elapsed(),
        },
    })
}

/// Smallest positive codeword weight and its count, by doubling `w_end`
/// from 4 until a nonzero-weight term shows up.
pub fn find_min_distance(spec: &CodeSpec) -> Result<(u32, BigUint)> {
    if spec.dim() == 0 {
        return Err(Error::AllFrozen);
    }
    let full = spec.code_len() as u32;
    let mut w_end = 4.min(full);
    loop {
        let result = enumerate_spectrum(spec, w_end)?;
        if let Some((w, c)) = result.spectrum.terms().iter().find(|&&(w, _)| w > 0) {
            return Ok((*w, c.clone()));
        }
        if w_end >= full {
            // Unreachable for a valid spec: dim >= 1 guarantees a nonzero word.
            return Err(Error::InvalidSpec(
                "no nonzero codeword below the full code length".into(),
            ));
        }
        w_end = (w_end * 2).min(full);
    }
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::code::{Mode, PreTransform};

    fn poly(pairs: &[(u32, u64)], w_cap: u32) -> WeightPoly {
        WeightPoly::from_terms(pairs.iter().map(|&(d, c)| (d, BigUint::from(c))), w_cap)
    }

    #[test]
    fn punctured_fixture_spectrum() {
        let spec = CodeSpec::new(
            3,
            &[0, 1, 2, 3, 4, 6],
            Mode::Punctured,
            &[0, 2, 4, 6],
            PreTransform::Identity,
        )
        .unwrap();
        let res = enumerate_spectrum(&spec, 4).unwrap();
        assert_eq!(res.spectrum, poly(&[(0, 1), (2, 2), (4, 1)], 4));
        assert_eq!(res.stats.n_c, res.stats.stage_sizes.iter().sum::<u64>());
    }

    #[test]
    fn zero_code_spectrum() {
        let spec = CodeSpec::new(4, &(0..16).collect::<Vec<_>>(), Mode::Plain, &[], PreTransform::Identity)
            .unwrap();
        let res = enumerate_spectrum(&spec, 16).unwrap();
        assert_eq!(res.spectrum, poly(&[(0, 1)], 16));
        assert_eq!(res.stats.stage_sizes, vec![1; 16]);
    }

    #[test]
    fn first_order_reed_muller_like_spectrum() {
        let spec =
            CodeSpec::new(3, &[0, 1, 2, 4], Mode::Plain, &[], PreTransform::Identity).unwrap();
        let res = enumerate_spectrum(&spec, 8).unwrap();
        assert_eq!(res.spectrum, poly(&[(0, 1), (4, 14), (8, 1)], 8));
    }

    #[test]
    fn all_information_code_branches_at_stage_zero() {
        let spec = CodeSpec::new(1, &[], Mode::Plain, &[], PreTransform::Identity).unwrap();
        let res = enumerate_spectrum(&spec, 2).unwrap();
        assert_eq!(res.spectrum, poly(&[(0, 1), (1, 2), (2, 1)], 2));
        assert_eq!(res.stats.stage_sizes, vec![2]);
    }

    #[test]
    fn pruned_and_unpruned_agree() {
        let spec = CodeSpec::new(
            3,
            &[0, 1, 2, 3, 4, 6],
            Mode::Punctured,
            &[0, 2, 4, 6],
            PreTransform::Identity,
        )
        .unwrap();
        for w_end in 1..=4 {
            let pruned = enumerate_spectrum(&spec, w_end).unwrap();
            let unpruned = enumerate_spectrum_with(
                &spec,
                w_end,
                EnumOptions {
                    prune: false,
                    ..EnumOptions::default()
                },
            )
            .unwrap();
            assert_eq!(pruned.spectrum, unpruned.spectrum);
            assert_eq!(unpruned.stats.pruned, 0);
        }
    }

    #[test]
    fn list_cap_errors_loudly() {
        // Late frozen bit: the list doubles through the information stages
        // before it, so the cap of 3 trips at stage 1.
        let spec = CodeSpec::new(3, &[7], Mode::Plain, &[], PreTransform::Identity).unwrap();
        let err = enumerate_spectrum_with(
            &spec,
            8,
            EnumOptions {
                list_cap: 3,
                ..EnumOptions::default()
            },
        );
        assert!(matches!(err, Err(Error::ListCapExceeded { .. })));
    }

    #[test]
    fn min_distance_examples() {
        let spec =
            CodeSpec::new(3, &[0, 1, 2, 4], Mode::Plain, &[], PreTransform::Identity).unwrap();
        let (d, a) = find_min_distance(&spec).unwrap();
        assert_eq!((d, a), (4, BigUint::from(14u32)));

        let spec = CodeSpec::new(2, &[0, 1], Mode::Plain, &[], PreTransform::Identity).unwrap();
        let (d, a) = find_min_distance(&spec).unwrap();
        assert_eq!((d, a), (2, BigUint::from(2u32)));

        let spec = CodeSpec::new(2, &[0, 1, 2, 3], Mode::Plain, &[], PreTransform::Identity).unwrap();
        assert!(matches!(find_min_distance(&spec), Err(Error::AllFrozen)));
    }

    #[test]
    fn runs_are_deterministic() {
        let spec = CodeSpec::new(
            4,
            &[0, 1, 2, 3, 4, 5, 6, 8],
            Mode::Shortened,
            &[7, 15],
            PreTransform::Pac(BitVector::from_bit_str("1011011").unwrap()),
        )
        .unwrap();
        let a = enumerate_spectrum(&spec, 6).unwrap();
        let b = enumerate_spectrum(&spec, 6).unwrap();
        assert_eq!(a.spectrum, b.spectrum);
        assert_eq!(a.stats.n_c, b.stats.n_c);
        assert_eq!(a.stats.stage_sizes, b.stats.stage_sizes);
        assert_eq!(a.stats.pruned, b.stats.pruned);
    }
}
