use crate::math;

/// Cosine similarity; 0 when either vector has zero norm.
pub fn cosine_similarity(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    (dot / (math::sqrt(na) * math::sqrt(nb))).clamp(-1.0, 1.0)
}

/// Highest cosine similarity between `query` and any previously checked
/// sentence; 0 when there are none.
pub fn sim_to_checked<'a, I>(query: &[f64], positives: I) -> f64
where
    I: IntoIterator<Item = &'a [f64]>,
{
    positives
        .into_iter()
        .map(|p| cosine_similarity(query, p))
        .fold(None, |best: Option<f64>, s| Some(best.map_or(s, |b| b.max(s))))
        .unwrap_or(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    #[test]
    fn identical_and_orthogonal() {
        assert!((sim_to_checked(&[0.3, -2.0], [&[0.3, -2.0][..]]) - 1.0).abs() < 1e-12);
        assert_eq!(sim_to_checked(&[1.0, 0.0], [&[0.0, 3.0][..]]), 0.0);
    }

    #[test]
    fn max_over_positives() {
        let ps: Vec<&[f64]> = vec![&[1.0, 0.0], &[0.6, 0.8]];
        assert!((sim_to_checked(&[1.0, 0.0], ps) - 1.0).abs() < 1e-12);
        let ps: Vec<&[f64]> = vec![&[0.6, 0.8], &[0.0, 1.0]];
        assert!((sim_to_checked(&[1.0, 0.0], ps) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn empty_positives_and_zero_norms() {
        assert_eq!(sim_to_checked(&[1.0, 2.0], core::iter::empty()), 0.0);
        assert_eq!(sim_to_checked(&[0.0, 0.0], [&[1.0, 2.0][..]]), 0.0);
    }

    proptest! {
        #[test]
        fn similarity_is_bounded_and_reflexive(
            q in prop::collection::vec(-5.0f64..5.0, 4),
            others in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 4), 0..5),
        ) {
            let mut set: Vec<&[f64]> = others.iter().map(|v| v.as_slice()).collect();
            let s = sim_to_checked(&q, set.iter().copied());
            prop_assert!((-1.0..=1.0).contains(&s));
            if q.iter().any(|x| *x != 0.0) {
                set.push(&q);
                prop_assert!((sim_to_checked(&q, set) - 1.0).abs() < 1e-9);
            }
        }
    }
}
