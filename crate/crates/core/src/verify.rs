//! Exhaustive fault-tolerance checks and the analytic failure bound.

use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::GadgetCircuit;
use crate::decoders::CatDecoder;
use crate::frame::{AdaptiveFaults, CatSyndrome, Effect, EffectTable, Pauli, Round2Source};
use crate::pauli::{residual_weight_mod_generator, BitVec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    /// X faults at these location ids.
    pub locations: Vec<usize>,
    pub syndrome: CatSyndrome,
    pub residual: BitVec,
    pub correction: BitVec,
    pub coset_weight: usize,
    /// Set when the decoder itself failed.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub pass: bool,
    pub faults_checked: u64,
    pub counterexample: Option<Counterexample>,
}

/// Visits every `w`-subset of `0..n` whose smallest element is `first`, in
/// lexicographic order, with the XOR of the members' X effects.
pub fn for_each_combination(
    table: &EffectTable,
    n: usize,
    w: usize,
    first: usize,
    mut f: impl FnMut(&[usize], &Effect, &AdaptiveFaults),
) {
    if w == 0 || first >= n || n - first < w {
        return;
    }
    let mut locs = Vec::with_capacity(w);
    let mut af = AdaptiveFaults::default();
    push(table, first, &mut af);
    locs.push(first);
    recurse(table, n, w, &mut locs, first + 1, table.x_effect(first), af, &mut f);
}

fn push(table: &EffectTable, loc: usize, af: &mut AdaptiveFaults) {
    if let Some((slot, site)) = table.adaptive_site(loc) {
        af.set(slot, site, Pauli::X);
    }
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    table: &EffectTable,
    n: usize,
    w: usize,
    locs: &mut Vec<usize>,
    start: usize,
    eff: Effect,
    af: AdaptiveFaults,
    f: &mut impl FnMut(&[usize], &Effect, &AdaptiveFaults),
) {
    if locs.len() == w {
        f(locs, &eff, &af);
        return;
    }
    let remaining = w - locs.len();
    for l in start..=n - remaining {
        let mut af2 = af;
        push(table, l, &mut af2);
        locs.push(l);
        recurse(table, n, w, locs, l + 1, eff.xor(table.x_effect(l)), af2, f);
        locs.pop();
    }
}

enum Outcome {
    Ok,
    /// Faults sit on adaptive slots that never ran; the set is not distinct.
    Skipped,
    Fail(Box<Counterexample>),
}

fn check(
    table: &EffectTable,
    decoder: &dyn CatDecoder,
    locs: &[usize],
    eff: &Effect,
    af: &AdaptiveFaults,
) -> Outcome {
    let syn = table.syndrome_of(eff);
    let mut src = table.round2(eff, *af);
    let decoded = decoder.decode(&syn, &mut src as &mut dyn Round2Source);
    if af.touches_beyond(src.executed().len()) {
        return Outcome::Skipped;
    }
    let mut syn = syn;
    syn.adaptive = src.executed().to_vec();
    let residual = BitVec::from_u64(table.gamma, eff.data_x);
    match decoded {
        Ok(c) => {
            let wt = residual_weight_mod_generator(eff.data_x ^ c.x_flips.to_u64(), table.gamma);
            if wt <= locs.len() {
                Outcome::Ok
            } else {
                Outcome::Fail(Box::new(Counterexample {
                    locations: locs.to_vec(),
                    syndrome: syn,
                    residual,
                    correction: c.x_flips,
                    coset_weight: wt,
                    error: None,
                }))
            }
        }
        Err(e) => Outcome::Fail(Box::new(Counterexample {
            locations: locs.to_vec(),
            syndrome: syn,
            residual,
            correction: BitVec::zeros(table.gamma),
            coset_weight: usize::MAX,
            error: Some(e.to_string()),
        })),
    }
}

/// Checks every combination of 1..=t X faults over the relevant locations.
///
/// Partitions run in parallel by first location; the reported counterexample
/// is the smallest by (weight, location tuple).
pub fn verify_gadget(g: &GadgetCircuit, decoder: &dyn CatDecoder, t: usize) -> VerificationReport {
    let table = EffectTable::new(g);
    verify_with_table(&table, g.relevant_count(), decoder, t)
}

pub fn verify_with_table(table: &EffectTable, n: usize, decoder: &dyn CatDecoder, t: usize) -> VerificationReport {
    let parts: Vec<(u64, Option<Box<Counterexample>>)> = (0..n)
        .into_par_iter()
        .map(|first| {
            let mut checked = 0u64;
            for w in 1..=t {
                let mut fail = None;
                for_each_combination(table, n, w, first, |locs, eff, af| {
                    if fail.is_some() {
                        return;
                    }
                    match check(table, decoder, locs, eff, af) {
                        Outcome::Ok => checked += 1,
                        Outcome::Skipped => {}
                        Outcome::Fail(c) => {
                            checked += 1;
                            fail = Some(c);
                        }
                    }
                });
                if fail.is_some() {
                    return (checked, fail);
                }
            }
            (checked, None)
        })
        .collect();
    let faults_checked = parts.iter().map(|p| p.0).sum();
    let counterexample = parts
        .into_iter()
        .filter_map(|p| p.1)
        .min_by(|a, b| (a.locations.len(), &a.locations).cmp(&(b.locations.len(), &b.locations)))
        .map(|b| *b);
    VerificationReport { pass: counterexample.is_none(), faults_checked, counterexample }
}

/// Every `(syndrome, residual, weight)` reached by up to `max_weight` X faults,
/// by ascending weight and then lexicographic location order. Adaptive
/// locations are left out since they need a round-2 planner.
pub fn oracle_residuals(g: &GadgetCircuit, max_weight: usize) -> Vec<(CatSyndrome, BitVec, usize)> {
    let table = EffectTable::new(g);
    let ids: Vec<usize> = (0..g.relevant_count()).filter(|&l| !table.is_adaptive_location(l)).collect();
    let mut out = vec![(table.syndrome_of(&Effect::default()), BitVec::zeros(g.gamma), 0)];
    for w in 1..=max_weight.min(ids.len()) {
        let mut idx: Vec<usize> = (0..w).collect();
        loop {
            let eff = idx.iter().fold(Effect::default(), |acc, &i| acc.xor(table.x_effect(ids[i])));
            out.push((table.syndrome_of(&eff), BitVec::from_u64(g.gamma, eff.data_x), w));
            let Some(p) = (0..w).rev().find(|&p| idx[p] < ids.len() - w + p) else { break };
            idx[p] += 1;
            for q in p + 1..w {
                idx[q] = idx[q - 1] + 1;
            }
        }
    }
    out
}

/// Relevant fault locations assumed by the bound for a weight-`gamma` generator.
pub fn bound_locations(gamma: usize) -> usize {
    4 * gamma
}

/// Probability that more than `t` of the `4 gamma` relevant locations carry
/// a harmful fault, each independently with probability `2 p_ft / 3`.
///
/// The tail is summed directly, so small values keep full relative precision.
pub fn eval_upper_bound(gamma: usize, t: usize, p_ft: f64) -> f64 {
    let n = bound_locations(gamma);
    let q = 2.0 * p_ft.clamp(0.0, 1.0) / 3.0;
    if q == 0.0 || t >= n {
        return 0.0;
    }
    let s0 = t + 1;
    let log_binom: f64 = (0..s0).map(|i| ((n - i) as f64 / (i + 1) as f64).ln()).sum();
    let mut term = (log_binom + s0 as f64 * q.ln() + (n - s0) as f64 * (-q).ln_1p()).exp();
    let ratio = q / (1.0 - q);
    let mut sum = 0.0;
    for s in s0..=n {
        sum += term;
        if term < sum * 1e-18 {
            break;
        }
        term *= (n - s) as f64 / (s + 1) as f64 * ratio;
    }
    sum.min(1.0)
}
