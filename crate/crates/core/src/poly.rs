//! Truncated weight-enumerator polynomials with arbitrary-precision counts.
//!
//! A [`WeightPoly`] keeps only monomials of degree at most `w_cap` (the LT
//! operator); [`wp_lowest`] extracts the minimum-degree monomial (the LP
//! operator). Counts grow like `2^(free tail bits)` — up to `2^1023` for the
//! largest supported codes — so they are `BigUint`, never a native integer.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::{Error, Result};

/// Sparse truncated polynomial: sorted `(degree, count)` terms, all counts
/// positive, all degrees `≤ w_cap`. The zero polynomial has no terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightPoly {
    w_cap: u32,
    terms: Vec<(u32, BigUint)>,
}

/// A single `count · X^degree` term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub degree: u32,
    pub count: BigUint,
}

impl WeightPoly {
    pub fn zero(w_cap: u32) -> Self {
        WeightPoly { w_cap, terms: Vec::new() }
    }

    /// The constant polynomial 1.
    pub fn one(w_cap: u32) -> Self {
        WeightPoly::monomial(0, BigUint::from(1u32), w_cap)
    }

    /// `count · X^degree`, dropped entirely if it violates the cap or is zero.
    pub fn monomial(degree: u32, count: BigUint, w_cap: u32) -> Self {
        let mut p = WeightPoly::zero(w_cap);
        if degree <= w_cap && !count.is_zero() {
            p.terms.push((degree, count));
        }
        p
    }

    pub fn from_terms<I>(terms: I, w_cap: u32) -> Self
    where
        I: IntoIterator<Item = (u32, BigUint)>,
    {
        let mut acc = WeightPoly::zero(w_cap);
        for (d, c) in terms {
            acc.accumulate(d, c);
        }
        acc.terms.sort_by_key(|&(d, _)| d);
        acc
    }

    pub fn w_cap(&self) -> u32 {
        self.w_cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(u32, BigUint)] {
        &self.terms
    }

    pub fn coeff(&self, degree: u32) -> BigUint {
        match self.terms.binary_search_by_key(&degree, |&(d, _)| d) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigUint::zero(),
        }
    }

    /// Sum of all counts.
    pub fn total(&self) -> BigUint {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    /// Counts as decimal strings, for serialized reports.
    pub fn to_string_pairs(&self) -> Vec<(u32, String)> {
        self.terms.iter().map(|(d, c)| (*d, c.to_string())).collect()
    }

    /// Re-truncate to a (smaller) cap.
    pub fn truncate(&self, w_cap: u32) -> WeightPoly {
        WeightPoly {
            w_cap,
            terms: self.terms.iter().filter(|&&(d, _)| d <= w_cap).cloned().collect(),
        }
    }

    fn accumulate(&mut self, degree: u32, count: BigUint) {
        if degree > self.w_cap || count.is_zero() {
            return;
        }
        match self.terms.binary_search_by_key(&degree, |&(d, _)| d) {
            Ok(i) => self.terms[i].1 += count,
            Err(i) => self.terms.insert(i, (degree, count)),
        }
    }
}

/// Serializes as `[[degree, "count"], ...]` — counts exceed native widths.
impl Serialize for WeightPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (d, c) in &self.terms {
            seq.serialize_element(&(d, c.to_string()))?;
        }
        seq.end()
    }
}

/// Coefficient-wise sum. The caps must agree.
pub fn wp_add(a: &WeightPoly, b: &WeightPoly) -> Result<WeightPoly> {
    if a.w_cap != b.w_cap {
        return Err(Error::CapMismatch { a: a.w_cap, b: b.w_cap });
    }
    let mut out = WeightPoly::zero(a.w_cap);
    let (mut i, mut j) = (0, 0);
    while i < a.terms.len() || j < b.terms.len() {
        let pick_a = match (a.terms.get(i), b.terms.get(j)) {
            (Some(&(da, _)), Some(&(db, _))) if da == db => {
                out.terms.push((da, &a.terms[i].1 + &b.terms[j].1));
                i += 1;
                j += 1;
                continue;
            }
            (Some(&(da, _)), Some(&(db, _))) => da < db,
            (Some(_), None) => true,
            (None, _) => false,
        };
        if pick_a {
            out.terms.push(a.terms[i].clone());
            i += 1;
        } else {
            out.terms.push(b.terms[j].clone());
            j += 1;
        }
    }
    Ok(out)
}

/// Product with every term of degree `> w_end` discarded; the result cap is
/// `w_end` regardless of the input caps.
pub fn wp_mul_trunc(a: &WeightPoly, b: &WeightPoly, w_end: u32) -> WeightPoly {
    // Dense accumulator: spectra at practical caps have few distinct degrees.
    let mut acc: Vec<BigUint> = vec![BigUint::zero(); w_end as usize + 1];
    for (da, ca) in &a.terms {
        for (db, cb) in &b.terms {
            let d = da + db;
            if d <= w_end {
                acc[d as usize] += ca * cb;
            }
        }
    }
    WeightPoly {
        w_cap: w_end,
        terms: acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| (d as u32, c))
            .collect(),
    }
}

/// The minimum-degree term, or `None` for the zero polynomial.
pub fn wp_lowest(a: &WeightPoly) -> Option<Monomial> {
    a.terms.first().map(|(d, c)| Monomial {
        degree: *d,
        count: c.clone(),
    })
}

/// Restriction to the minimum-degree term (zero stays zero).
pub fn wp_lp(a: &WeightPoly) -> WeightPoly {
    match wp_lowest(a) {
        Some(m) => WeightPoly::monomial(m.degree, m.count, a.w_cap),
        None => WeightPoly::zero(a.w_cap),
    }
}

/// Divides every count by `2^k`, insisting on exactness: a remainder means the
/// caller's rank bookkeeping is wrong, and the count must not be rounded.
pub fn wp_div_pow2(a: &WeightPoly, k: u32) -> Result<WeightPoly> {
    if k == 0 {
        return Ok(a.clone());
    }
    let mut out = WeightPoly::zero(a.w_cap);
    for (d, c) in &a.terms {
        if c.trailing_zeros().unwrap_or(0) < u64::from(k) {
            return Err(Error::NonDivisibleCount { degree: *d, k });
        }
        out.terms.push((*d, c >> k));
    }
    Ok(out)
}
