//! Rate bounds for converting tensor products of Fock states under
//! post-selected Gaussian protocols.
//!
//! Two monotones have closed forms on Fock tensor products and pull in
//! opposite directions:
//!
//! * the symplectic rank `#{k_i > 0}` bounds the achievable conversion rate
//!   from above, and
//! * the stellar rank `sum k_i` bounds it from below whenever the conversion
//!   is to be undone (cost of re-preparing the input).
//!
//! When the first bound falls strictly below the second, no Gaussian
//! protocol can convert back and forth without losing resources: the
//! conversion is irreversible.

use std::fmt;

use crate::error::RankError;

/// Verdict of a conversion-bound comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConversionVerdict {
    /// The distillation bound falls strictly below the cost bound: a
    /// round-trip conversion necessarily loses resources.
    Irreversible,
    /// The bounds do not certify irreversibility.
    Inconclusive,
    /// The output is Gaussian (rank zero), so Gaussian protocols can prepare
    /// it outright and the bounds impose no constraint.
    Unconstrained,
}

impl fmt::Display for ConversionVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let label = match self {
            ConversionVerdict::Irreversible => "irreversible",
            ConversionVerdict::Inconclusive => "inconclusive",
            ConversionVerdict::Unconstrained => "unconstrained",
        };
        f.write_str(label)
    }
}

/// Rate bounds for converting one Fock tensor product into another.
#[derive(Clone, Debug)]
pub struct ConversionBounds {
    /// Upper bound on the conversion rate from the symplectic-rank ratio
    /// `rank(input) / rank(output)`; `None` when the output has rank zero.
    pub distill_upper: Option<f64>,
    /// Lower bound on the asymptotic cost from the stellar-rank ratio
    /// `stellar(input) / stellar(output)`; `None` when the output has rank
    /// zero.
    pub cost_lower: Option<f64>,
    /// Symplectic rank of the input, `#{k_i > 0}`.
    pub input_rank: usize,
    /// Symplectic rank of the output.
    pub output_rank: usize,
    /// Stellar rank of the input, `sum k_i`.
    pub input_stellar: u64,
    /// Stellar rank of the output.
    pub output_stellar: u64,
    pub verdict: ConversionVerdict,
}

fn ranks(tuple: &[u16], side: &'static str) -> Result<(usize, u64), RankError> {
    if tuple.is_empty() {
        return Err(RankError::InvalidConversionSpec {
            detail: format!("{side} occupation list is empty"),
        });
    }
    let symplectic = tuple.iter().filter(|&&k| k > 0).count();
    let stellar = tuple.iter().map(|&k| u64::from(k)).sum();
    Ok((symplectic, stellar))
}

/// Compares the two closed-form monotones for the conversion
/// `|input_1> (x) ... -> |output_1> (x) ...` under post-selected Gaussian
/// protocols.
///
/// `|2> -> |1> (x) |1>` gives `distill_upper = 1/2` against
/// `cost_lower = 1`: splitting one doubly-excited mode into two singly
/// excited ones cannot be undone at rate one, so the resource theory is
/// irreversible. More generally `|n> -> |1>^(x n)` is bounded by `1/n`.
pub fn conversion_bounds(input: &[u16], output: &[u16]) -> Result<ConversionBounds, RankError> {
    let (in_rank, in_stellar) = ranks(input, "input")?;
    let (out_rank, out_stellar) = ranks(output, "output")?;

    if out_rank == 0 {
        return Ok(ConversionBounds {
            distill_upper: None,
            cost_lower: None,
            input_rank: in_rank,
            output_rank: 0,
            input_stellar: in_stellar,
            output_stellar: 0,
            verdict: ConversionVerdict::Unconstrained,
        });
    }

    let distill = in_rank as f64 / out_rank as f64;
    let cost = in_stellar as f64 / out_stellar as f64;
    let verdict = if distill < cost {
        ConversionVerdict::Irreversible
    } else {
        ConversionVerdict::Inconclusive
    };
    Ok(ConversionBounds {
        distill_upper: Some(distill),
        cost_lower: Some(cost),
        input_rank: in_rank,
        output_rank: out_rank,
        input_stellar: in_stellar,
        output_stellar: out_stellar,
        verdict,
    })
}
