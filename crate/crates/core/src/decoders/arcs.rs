use std::collections::BTreeSet;

use super::DecodeError;

/// Cat indices enclosed by consecutive trigger pairs, and the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcSets {
    pub i: BTreeSet<usize>,
    pub i_complement: BTreeSet<usize>,
}

/// Pairs the sorted trigger set as `(a_0, a_1), (a_2, a_3), ...`; arc `k`
/// covers the cat indices after `a_{2k}` up to and including `a_{2k+1}`.
///
/// A cat fault on `r` fires `M_{r-1}` and `M_r`, so this places the shared cat
/// of an adjacent pair inside the arc.
pub fn arc_sets(a: &[usize], m: usize) -> Result<ArcSets, DecodeError> {
    if a.len() % 2 == 1 {
        return Err(DecodeError::OddTriggerSet(a.len()));
    }
    let mut i = BTreeSet::new();
    for pair in a.chunks_exact(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let mut r = (lo + 1) % m;
        loop {
            i.insert(r);
            if r == hi {
                break;
            }
            r = (r + 1) % m;
        }
    }
    let i_complement = (0..m).filter(|r| !i.contains(r)).collect();
    Ok(ArcSets { i, i_complement })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn v(s: &BTreeSet<usize>) -> Vec<usize> {
        s.iter().copied().collect()
    }

    #[test]
    fn examples() {
        for r in 1..5 {
            let s = arc_sets(&[r - 1, r], 5).unwrap();
            assert_eq!(v(&s.i), vec![r]);
            assert_eq!(s.i_complement.len(), 4);
        }
        let s = arc_sets(&[], 5).unwrap();
        assert!(s.i.is_empty());
        assert_eq!(s.i_complement.len(), 5);
        let s = arc_sets(&[0, 1, 2, 3], 7).unwrap();
        assert_eq!(v(&s.i), vec![1, 3]);
        assert_eq!(s.i_complement.len(), 5);
        assert_eq!(arc_sets(&[1], 5), Err(DecodeError::OddTriggerSet(1)));
    }

    proptest! {
        #[test]
        fn partition(m in 3usize..20, bits in any::<u32>()) {
            let a: Vec<usize> = (0..m).filter(|r| bits >> r & 1 == 1).collect();
            if a.len().is_multiple_of(2) {
                let s = arc_sets(&a, m).unwrap();
                prop_assert!(s.i.is_disjoint(&s.i_complement));
                prop_assert_eq!(s.i.len() + s.i_complement.len(), m);
            }
        }
    }
}
