//! Adaptive distance-7 decoder.
//!
//! Round 1 is a full ring. Depending on the trigger set, a few stabilizers are
//! re-measured and compared with their round-1 values: a measurement error
//! reads clean the second time, a persistent cat flip does not.
//!
//! Patterns such as "a0 + 2 is also triggered" are anchored at every trigger in
//! turn, so a pattern that wraps past index `m - 1` is recognised like any
//! other rotation of it.

use super::arcs::arc_sets;
use super::{Correction, DecodeError};
use crate::frame::{CatSyndrome, FrameError, Round2Source};
use crate::pauli::BitVec;

/// Offsets of every comparison list, keyed by `(n_a, k)`.
const LISTS: [((usize, usize), &[isize]); 15] = [
    ((1, 0), &[1, 2]),
    ((1, 1), &[-3, -2]),
    ((2, 0), &[2, 3, 4]),
    ((2, 1), &[-1, 0, 1]),
    ((2, 2), &[2, 3]),
    ((2, 3), &[-2, -1]),
    ((2, 4), &[-1, 1]),
    ((3, 0), &[3, 4]),
    ((3, 1), &[2, 3]),
    ((3, 2), &[-1, 0]),
    ((4, 0), &[2, 3]),
    ((4, 1), &[-1, 0]),
    ((4, 2), &[-1, 0]),
    ((4, 3), &[3, 4]),
    ((5, 0), &[3, 4]),
];

fn md(x: isize, m: usize) -> usize {
    x.rem_euclid(m as isize) as usize
}

/// Comparison list `J(n_a, k)` anchored at `j`, reduced mod `m`.
pub fn j_list(n_a: usize, k: usize, j: usize, m: usize) -> Result<Vec<usize>, DecodeError> {
    let offsets = LISTS
        .iter()
        .find(|(key, _)| *key == (n_a, k))
        .map(|(_, o)| *o)
        .ok_or(DecodeError::UndefinedList { n_a, k })?;
    Ok(offsets.iter().map(|&o| md(j as isize + o, m)).collect())
}

fn jl(n_a: usize, k: usize, j: usize, m: usize) -> Vec<usize> {
    j_list(n_a, k, j, m).expect("list table covers every call site")
}

/// Round-2 outcomes fetched on demand and cached.
struct Probe<'a> {
    round1: &'a BitVec,
    src: &'a mut dyn Round2Source,
    cache: Vec<Option<bool>>,
}

impl<'a> Probe<'a> {
    fn new(round1: &'a BitVec, src: &'a mut dyn Round2Source) -> Self {
        Self { round1, src, cache: vec![None; round1.len()] }
    }

    fn fetch(&mut self, idx: &[usize]) -> Result<(), FrameError> {
        let mut need: Vec<usize> = Vec::with_capacity(idx.len());
        for &j in idx {
            if self.cache[j].is_none() && !need.contains(&j) {
                need.push(j);
            }
        }
        if need.is_empty() {
            return Ok(());
        }
        let out = self.src.measure(&need)?;
        for (j, b) in need.into_iter().zip(out) {
            self.cache[j] = Some(b);
        }
        Ok(())
    }

    fn flips(&mut self, idx: &[usize]) -> Result<Vec<bool>, FrameError> {
        self.fetch(idx)?;
        Ok(idx.iter().map(|&j| self.cache[j] != Some(self.round1.get(j))).collect())
    }

    /// Some listed stabilizer changed between the rounds.
    fn differs(&mut self, idx: &[usize]) -> Result<bool, FrameError> {
        Ok(self.flips(idx)?.into_iter().any(|f| f))
    }
}

struct Ctx<'a> {
    m: usize,
    round1: &'a BitVec,
    a: Vec<usize>,
}

impl Ctx<'_> {
    fn at(&self, j: usize, off: isize) -> usize {
        md(j as isize + off, self.m)
    }

    fn has(&self, j: usize, off: isize) -> bool {
        self.round1.get(self.at(j, off))
    }

    fn has_all(&self, j: usize, offs: &[isize]) -> bool {
        offs.iter().all(|&o| self.has(j, o))
    }

    /// First trigger at which every offset is also triggered.
    fn anchor(&self, offs: &[isize]) -> Option<usize> {
        self.a.iter().copied().find(|&j| self.has_all(j, offs))
    }

    /// Arc sets when one of them has at most three cats.
    fn small_arc(&self) -> Vec<usize> {
        let Ok(arcs) = arc_sets(&self.a, self.m) else { return Vec::new() };
        if arcs.i.len() <= 3 {
            arcs.i.into_iter().collect()
        } else if arcs.i_complement.len() <= 3 {
            arcs.i_complement.into_iter().collect()
        } else {
            Vec::new()
        }
    }
}

/// Cats to correct; `m` is the ring length of round 1.
pub fn decode_d7_cats(syn: &CatSyndrome, m: usize, src: &mut dyn Round2Source) -> Result<Vec<usize>, DecodeError> {
    if syn.cat_count() != m {
        return Err(DecodeError::SyndromeLength { expected: m, found: syn.cat_count() });
    }
    let round1 = syn.round(0);
    let ctx = Ctx { m, round1, a: syn.trigger_set() };
    let mut probe = Probe::new(round1, src);
    let p = &mut probe;
    let cats = match ctx.a.len() {
        0 => Vec::new(),
        1 => one(&ctx, p)?,
        2 => two(&ctx, p)?,
        3 => three(&ctx, p)?,
        4 => four(&ctx, p)?,
        5 => five(&ctx, p)?,
        n if n % 2 == 0 => {
            let arcs = arc_sets(&ctx.a, m)?;
            let chosen = if arcs.i.len() < arcs.i_complement.len() { arcs.i } else { arcs.i_complement };
            if (chosen.len() <= 3 && n == 6) || n > 6 {
                chosen.into_iter().collect()
            } else {
                Vec::new()
            }
        }
        _ => Vec::new(),
    };
    Ok(cats)
}

pub fn decode_d7(
    syn: &CatSyndrome,
    pair_map: &[Vec<usize>],
    gamma: usize,
    src: &mut dyn Round2Source,
) -> Result<Correction, DecodeError> {
    let cats = decode_d7_cats(syn, pair_map.len(), src)?;
    Ok(Correction::from_cats(&cats, pair_map, gamma))
}

fn one(c: &Ctx, p: &mut Probe) -> Result<Vec<usize>, DecodeError> {
    let a0 = c.a[0];
    Ok(if p.differs(&jl(1, 0, a0, c.m))? {
        vec![c.at(a0, 1)]
    } else if p.differs(&jl(1, 1, a0, c.m))? {
        vec![a0]
    } else {
        Vec::new()
    })
}

fn two(c: &Ctx, p: &mut Probe) -> Result<Vec<usize>, DecodeError> {
    let m = c.m;
    let (x, y) = (c.a[0], c.a[1]);
    let a0 = if y - x <= m - (y - x) { x } else { y };
    let mut flag = true;
    let mut out = Vec::new();
    if c.has(a0, 3) {
        if p.differs(&jl(2, 0, a0, m))? {
            flag = false;
        }
    } else if c.has(a0, -3) {
        if p.differs(&jl(2, 1, a0, m))? {
            flag = false;
        }
    } else if c.has(a0, 2) {
        if p.differs(&[a0])? {
            if p.differs(&jl(2, 2, a0, m))? {
                flag = false;
            }
        } else if p.differs(&[c.at(a0, 2)])? {
            if p.differs(&jl(2, 3, a0, m))? {
                flag = false;
            }
        } else if p.differs(&jl(2, 4, a0, m))? {
            out.push(c.at(a0, 1));
            flag = false;
        }
    }
    if flag {
        out = c.small_arc();
    }
    Ok(out)
}

fn three(c: &Ctx, p: &mut Probe) -> Result<Vec<usize>, DecodeError> {
    let m = c.m;
    if let Some(a0) = c.anchor(&[2, 4]) {
        let j = jl(3, 0, a0, m);
        return Ok(vec![if p.differs(&j)? { c.at(a0, 1) } else { c.at(a0, 4) }]);
    }
    if let Some(a0) = c.anchor(&[1, 2]) {
        let cat = if p.differs(&[c.at(a0, 1)])? {
            c.at(a0, 1)
        } else if p.differs(&[c.at(a0, -1)])? {
            c.at(a0, 2)
        } else if !p.differs(&[a0])? {
            if p.differs(&[c.at(a0, -2)])? {
                c.at(a0, 2)
            } else {
                c.at(a0, 1)
            }
        } else {
            c.at(a0, 2)
        };
        return Ok(vec![cat]);
    }
    if let Some(a0) = c.anchor(&[2, 3]) {
        if p.differs(&jl(3, 1, a0, m))? {
            return Ok(vec![c.at(a0, 1)]);
        }
    } else if let Some(a0) = c.anchor(&[1, 3]) {
        if p.differs(&jl(3, 2, a0, m))? {
            return Ok(vec![c.at(a0, 2)]);
        }
    }
    let adjacent: Vec<usize> = (0..m).filter(|&g| c.has_all(g, &[0, 1])).map(|g| c.at(g, 1)).collect();
    if !adjacent.is_empty() {
        return Ok(adjacent);
    }
    Ok((0..m).filter(|&g| c.has_all(g, &[0, 2])).map(|g| c.at(g, 1)).collect())
}

fn four(c: &Ctx, p: &mut Probe) -> Result<Vec<usize>, DecodeError> {
    let m = c.m;
    let mut flag = true;
    if let Some(a0) = c.anchor(&[1, 2, 3]) {
        if p.differs(&jl(4, 0, a0, m))? && p.differs(&jl(4, 1, a0, m))? {
            flag = false;
        }
    } else if let Some(a0) = c.anchor(&[1, 2, 4]) {
        if p.differs(&jl(4, 2, a0, m))? {
            flag = false;
        }
    } else if let Some(a0) = c.anchor(&[2, 3, 4]) {
        if p.differs(&jl(4, 3, a0, m))? {
            flag = false;
        }
    }
    Ok(if flag { c.small_arc() } else { Vec::new() })
}

fn five(c: &Ctx, p: &mut Probe) -> Result<Vec<usize>, DecodeError> {
    let m = c.m;
    if let Some(a0) = c.anchor(&[1, 2, 3, 4]) {
        let same = !p.differs(&jl(5, 0, a0, m))?;
        return Ok(vec![if same { c.at(a0, 4) } else { c.at(a0, 3) }]);
    }
    Ok((0..m)
        .filter(|&g| c.has_all(g, &[0, 1]))
        .filter(|&g| (!c.has(g, -1) && !c.has(g, 2)) || c.has_all(g, &[2, 3]))
        .map(|g| c.at(g, 1))
        .collect())
}

/// Answers every request with the round-1 value and records what was asked.
pub struct EchoRound2 {
    round1: BitVec,
    requested: Vec<usize>,
}

impl EchoRound2 {
    pub fn new(round1: BitVec) -> Self {
        Self { round1, requested: Vec::new() }
    }

    pub fn requested(&self) -> &[usize] {
        &self.requested
    }
}

impl Round2Source for EchoRound2 {
    fn measure(&mut self, indices: &[usize]) -> Result<Vec<bool>, FrameError> {
        indices
            .iter()
            .map(|&j| {
                if j >= self.round1.len() {
                    return Err(FrameError::Round2Index { index: j, m: self.round1.len() });
                }
                if !self.requested.contains(&j) {
                    self.requested.push(j);
                }
                Ok(self.round1.get(j))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadget::plan_round2_d7;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    /// Replays fixed flip answers: round 2 equals round 1 except where `flip` says.
    struct Scripted {
        round1: BitVec,
        flip: Vec<bool>,
        asked: Vec<usize>,
    }

    impl Round2Source for Scripted {
        fn measure(&mut self, indices: &[usize]) -> Result<Vec<bool>, FrameError> {
            Ok(indices
                .iter()
                .map(|&j| {
                    if !self.asked.contains(&j) {
                        self.asked.push(j);
                    }
                    self.round1.get(j) ^ self.flip[j]
                })
                .collect())
        }
    }

    fn run(m: usize, fired: &[usize], flipped: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let syn = CatSyndrome::from_triggers(m, fired);
        let mut flip = vec![false; m];
        for &f in flipped {
            flip[f] = true;
        }
        let mut src = Scripted { round1: syn.round(0).clone(), flip, asked: Vec::new() };
        let cats = decode_d7_cats(&syn, m, &mut src).unwrap();
        (cats, src.asked)
    }

    #[test]
    fn lists() {
        assert_eq!(j_list(1, 0, 4, 7).unwrap(), vec![5, 6]);
        assert_eq!(j_list(2, 4, 0, 7).unwrap(), vec![6, 1]);
        assert_eq!(j_list(5, 0, 5, 7).unwrap(), vec![1, 2]);
        assert_eq!(j_list(3, 3, 0, 7), Err(DecodeError::UndefinedList { n_a: 3, k: 3 }));
    }

    #[test]
    fn single_trigger() {
        // round 2 differs on J(1,0): correct cat a0 + 1, i.e. q_{2 a0 + 3}
        assert_eq!(run(7, &[2], &[3]).0, vec![3]);
        assert_eq!(run(7, &[2], &[6]).0, vec![2]);
        assert!(run(7, &[2], &[]).0.is_empty());
    }

    #[test]
    fn five_run() {
        // J(5,0) equal: cat a0 + 4
        assert_eq!(run(7, &[1, 2, 3, 4, 5], &[]).0, vec![5]);
        assert_eq!(run(7, &[1, 2, 3, 4, 5], &[4]).0, vec![4]);
        // wrapped run 5, 6, 0, 1, 2
        assert_eq!(run(7, &[0, 1, 2, 5, 6], &[]).0, vec![2]);
    }

    #[test]
    fn even_large() {
        // |A| = 8, round 1 only
        let (cats, asked) = run(10, &[0, 1, 2, 3, 4, 5, 6, 7], &[]);
        assert_eq!(cats, vec![1, 3, 5, 7]);
        assert!(asked.is_empty());
        // |A| = 6 with three arcs of one cat each
        assert_eq!(run(10, &[0, 1, 2, 3, 4, 5], &[]).0, vec![1, 3, 5]);
    }

    #[test]
    fn planner_examples() {
        assert!(plan_round2_d7(&CatSyndrome::from_triggers(7, &[])).is_empty());
        let plan = plan_round2_d7(&CatSyndrome::from_triggers(7, &[2]));
        assert_eq!(plan, BTreeSet::from([3, 4, 6, 0]));
        let plan = plan_round2_d7(&CatSyndrome::from_triggers(7, &[1, 2, 3, 4, 5]));
        assert!(plan.contains(&4) && plan.contains(&5));
    }

    proptest! {
        #[test]
        fn at_most_four_requests(m in 7usize..16, fired in any::<u16>(), flips in any::<u16>()) {
            let a: Vec<usize> = (0..m).filter(|r| fired >> r & 1 == 1).collect();
            let f: Vec<usize> = (0..m).filter(|r| flips >> r & 1 == 1).collect();
            let (_, asked) = run(m, &a, &f);
            prop_assert!(asked.len() <= 4, "{:?} asked {:?}", a, asked);
            let plan = plan_round2_d7(&CatSyndrome::from_triggers(m, &a));
            prop_assert!(plan.len() <= 4);
        }
    }
}
