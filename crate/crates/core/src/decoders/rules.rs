use super::arcs::arc_sets;
use super::DecodeError;
use crate::frame::CatSyndrome;

/// Cats to correct for a single-round distance-3 or -5 gadget.
///
/// Odd trigger sets get no correction: a lone trigger is a measurement error
/// and three triggers cannot come from a hook that needs fixing within `t`.
pub fn decode_d3d5(syn: &CatSyndrome, t: usize, m: usize) -> Result<Vec<usize>, DecodeError> {
    if syn.cat_count() != m {
        return Err(DecodeError::SyndromeLength { expected: m, found: syn.cat_count() });
    }
    let a = syn.trigger_set();
    if a.len() % 2 == 1 {
        return Ok(Vec::new());
    }
    let arcs = arc_sets(&a, m)?;
    let chosen = if arcs.i.len() < arcs.i_complement.len() { arcs.i } else { arcs.i_complement };
    let apply = (chosen.len() <= t && a.len() <= 2 * t) || a.len() > 2 * t;
    Ok(if apply { chosen.into_iter().collect() } else { Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cats(m: usize, fired: &[usize], t: usize) -> Vec<usize> {
        decode_d3d5(&CatSyndrome::from_triggers(m, fired), t, m).unwrap()
    }

    #[test]
    fn examples() {
        assert!(cats(3, &[], 1).is_empty());
        assert!(cats(3, &[1], 1).is_empty());
        assert!(cats(5, &[2], 2).is_empty());
        for r in 1..3 {
            assert_eq!(cats(3, &[r - 1, r], 1), vec![r]);
        }
        for r in 1..5 {
            assert_eq!(cats(5, &[r - 1, r], 2), vec![r]);
        }
        assert_eq!(cats(5, &[0, 1, 2, 3], 2), vec![1, 3]);
        // wrap-around: cat 0 fires M_{m-1} and M_0
        assert_eq!(cats(5, &[0, 4], 2), vec![0]);
    }

    #[test]
    fn wrong_length() {
        let syn = CatSyndrome::from_triggers(4, &[0]);
        assert!(matches!(decode_d3d5(&syn, 1, 5), Err(DecodeError::SyndromeLength { .. })));
    }
}
