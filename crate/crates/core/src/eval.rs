//! Ranking metrics over one debate, and their aggregation over test debates
//! and reruns.
//!
//! Per-debate metrics are macro-averaged over the test debates of a run, then
//! over reruns. Debates without a single positive for a source have no
//! defined AP or R-Precision and are skipped in those averages.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::source::SourceId;

/// Cut-offs reported for precision at k.
pub const CUTOFFS: [usize; 4] = [5, 10, 20, 50];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RankedItem {
    pub index: usize,
    pub score: f64,
    pub relevant: bool,
}

/// Sentences of one test debate sorted by score (descending), ties broken
/// by ascending sentence index.
#[derive(Clone, Debug, PartialEq)]
pub struct RankedDebate {
    pub debate_id: String,
    items: Vec<RankedItem>,
}

impl RankedDebate {
    pub fn new<I>(debate_id: impl Into<String>, items: I) -> RankedDebate
    where
        I: IntoIterator<Item = (usize, f64, bool)>,
    {
        let mut items: Vec<RankedItem> = items
            .into_iter()
            .map(|(index, score, relevant)| RankedItem { index, score, relevant })
            .collect();
        items.sort_by(|a, b| match b.score.total_cmp(&a.score) {
            Ordering::Equal => a.index.cmp(&b.index),
            o => o,
        });
        RankedDebate { debate_id: debate_id.into(), items }
    }

    pub fn items(&self) -> &[RankedItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.items.iter().filter(|i| i.relevant).count()
    }
}

/// Mean of precision@i over the ranks i of the positives; `None` without positives.
pub fn average_precision(ranked: &RankedDebate) -> Option<f64> {
    let mut hits = 0usize;
    let mut sum = 0.0;
    for (rank, item) in ranked.items.iter().enumerate() {
        if item.relevant {
            hits += 1;
            sum += hits as f64 / (rank + 1) as f64;
        }
    }
    (hits > 0).then(|| sum / hits as f64)
}

/// Precision among the top R, R = number of positives; `None` without positives.
pub fn r_precision(ranked: &RankedDebate) -> Option<f64> {
    let r = ranked.positives();
    (r > 0).then(|| {
        ranked.items[..r].iter().filter(|i| i.relevant).count() as f64 / r as f64
    })
}

/// Positives in the top `k` over `k`; the denominator stays `k` for lists shorter than `k`.
pub fn precision_at_k(ranked: &RankedDebate, k: usize) -> f64 {
    if k == 0 {
        return 0.0;
    }
    ranked.items.iter().take(k).filter(|i| i.relevant).count() as f64 / k as f64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Metric {
    Map,
    RPrecision,
    PrecisionAt(usize),
}

impl Metric {
    pub const REPORTED: [Metric; 6] = [
        Metric::Map,
        Metric::RPrecision,
        Metric::PrecisionAt(CUTOFFS[0]),
        Metric::PrecisionAt(CUTOFFS[1]),
        Metric::PrecisionAt(CUTOFFS[2]),
        Metric::PrecisionAt(CUTOFFS[3]),
    ];

    /// Value on one ranked debate.
    pub fn on(self, ranked: &RankedDebate) -> Option<f64> {
        match self {
            Metric::Map => average_precision(ranked),
            Metric::RPrecision => r_precision(ranked),
            Metric::PrecisionAt(k) => Some(precision_at_k(ranked, k)),
        }
    }

    pub fn parse(name: &str) -> Option<Metric> {
        match name.trim() {
            "MAP" => Some(Metric::Map),
            "R-Pr" => Some(Metric::RPrecision),
            other => other.strip_prefix("P@")?.parse().ok().map(Metric::PrecisionAt),
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Map => f.write_str("MAP"),
            Metric::RPrecision => f.write_str("R-Pr"),
            Metric::PrecisionAt(k) => write!(f, "P@{k}"),
        }
    }
}

/// The six reported metrics; `None` where no debate had a defined value.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct MetricRow(pub [Option<f64>; 6]);

impl MetricRow {
    pub fn get(&self, metric: Metric) -> Option<f64> {
        Metric::REPORTED.iter().position(|m| *m == metric).and_then(|i| self.0[i])
    }

    pub fn map(&self) -> Option<f64> {
        self.0[0]
    }
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

/// Aggregates one source: `runs[r]` holds the ranked test debates of rerun `r`.
/// Each metric is averaged over debates where it is defined, then over reruns.
pub fn evaluate_source(runs: &[Vec<RankedDebate>]) -> MetricRow {
    let mut row = [None; 6];
    for (slot, metric) in row.iter_mut().zip(Metric::REPORTED) {
        *slot = mean(runs.iter().filter_map(|debates| mean(debates.iter().filter_map(|d| metric.on(d)))));
    }
    MetricRow(row)
}

/// Metrics for every evaluated source, plus provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricReport {
    pub variant: String,
    pub seeds: Vec<u64>,
    pub rows: Vec<(SourceId, MetricRow)>,
}

impl MetricReport {
    pub fn row(&self, source: SourceId) -> Option<&MetricRow> {
        self.rows.iter().find(|(s, _)| *s == source).map(|(_, r)| r)
    }

    /// Mean over sources of each metric (sources lacking a value are skipped).
    pub fn average(&self) -> MetricRow {
        let mut out = [None; 6];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = mean(self.rows.iter().filter_map(|(_, r)| r.0[i]));
        }
        MetricRow(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn ranked(labels: &[bool]) -> RankedDebate {
        let n = labels.len();
        RankedDebate::new("d", labels.iter().enumerate().map(|(i, l)| (i, (n - i) as f64, *l)))
    }

    #[test]
    fn perfect_ranking() {
        let r = ranked(&[true, true, false, false]);
        assert_eq!(average_precision(&r), Some(1.0));
        assert_eq!(r_precision(&r), Some(1.0));
    }

    #[test]
    fn ap_of_one_zero_one() {
        let ap = average_precision(&ranked(&[true, false, true])).unwrap();
        assert!((ap - (1.0 + 2.0 / 3.0) / 2.0).abs() < 1e-15);
        assert!((ap - 0.8333).abs() < 1e-4);
    }

    #[test]
    fn undefined_without_positives() {
        let r = ranked(&[false, false, false]);
        assert_eq!(average_precision(&r), None);
        assert_eq!(r_precision(&r), None);
        assert_eq!(precision_at_k(&r, 5), 0.0);
    }

    #[test]
    fn r_precision_half() {
        assert_eq!(r_precision(&ranked(&[true, false, true, false])), Some(0.5));
    }

    #[test]
    fn precision_at_k_counts() {
        let r = ranked(&[true, false, false, true, false, true, true]);
        assert_eq!(precision_at_k(&r, 5), 0.4);
        assert_eq!(precision_at_k(&ranked(&[true, true, true]), 5), 0.6);
    }

    #[test]
    fn ties_break_by_index() {
        let r = RankedDebate::new("d", vec![(2, 0.5, false), (0, 0.5, true), (1, 0.9, false)]);
        let order: Vec<usize> = r.items().iter().map(|i| i.index).collect();
        assert_eq!(order, vec![1, 0, 2]);
    }

    #[test]
    fn aggregation() {
        let single = vec![vec![ranked(&[true, false, true])]];
        assert_eq!(evaluate_source(&single).map(), average_precision(&single[0][0]));

        // APs 0.2... built directly from labels with known AP:
        // [f,f,f,f,t] -> 0.2, [f,t,f,f,f] -> 0.5, [t] -> 1, [f,t] -> 0.5
        let run = vec![
            ranked(&[false, false, false, false, true]),
            ranked(&[false, true, false, false, false]),
            ranked(&[true]),
            ranked(&[false, true]),
        ];
        let row = evaluate_source(&[run]);
        assert!((row.map().unwrap() - (0.2 + 0.5 + 1.0 + 0.5) / 4.0).abs() < 1e-15);
    }

    #[test]
    fn rerun_means() {
        // Reruns with MAP 0.10, 0.12, 0.14 (one debate each) average to 0.12.
        let mk = |ap_denominator: usize| {
            // a single positive at rank k gives AP 1/k; use explicit lists instead
            let mut labels = vec![false; ap_denominator];
            labels[ap_denominator - 1] = true;
            ranked(&labels)
        };
        let runs = vec![vec![mk(10)], vec![mk(8)], vec![mk(5)]];
        let expected = (0.1 + 0.125 + 0.2) / 3.0;
        assert!((evaluate_source(&runs).map().unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn undefined_debates_are_skipped() {
        let run = vec![ranked(&[false, false]), ranked(&[true, false])];
        let row = evaluate_source(&[run]);
        assert_eq!(row.map(), Some(1.0));
        assert_eq!(row.get(Metric::PrecisionAt(5)), Some(0.1));
        let none = evaluate_source(&[vec![ranked(&[false])]]);
        assert_eq!(none.map(), None);
    }

    #[test]
    fn metric_names() {
        for m in Metric::REPORTED {
            assert_eq!(Metric::parse(&alloc::format!("{m}")), Some(m));
        }
    }

    fn scored() -> impl Strategy<Value = Vec<(f64, bool)>> {
        prop::collection::vec(((0u8..6).prop_map(f64::from), any::<bool>()), 1..40)
    }

    proptest! {
        #[test]
        fn metrics_are_bounded_and_permutation_free(items in scored(), seed in any::<u64>()) {
            let base: Vec<(usize, f64, bool)> = items.iter().enumerate().map(|(i, (s, l))| (i, *s, *l)).collect();
            let a = RankedDebate::new("d", base.clone());
            let mut shuffled = base.clone();
            let mut x = seed | 1;
            for i in (1..shuffled.len()).rev() {
                x ^= x << 13; x ^= x >> 7; x ^= x << 17;
                shuffled.swap(i, (x % (i as u64 + 1)) as usize);
            }
            let b = RankedDebate::new("d", shuffled);
            for m in Metric::REPORTED {
                prop_assert_eq!(m.on(&a), m.on(&b));
                if let Some(v) = m.on(&a) {
                    prop_assert!((0.0..=1.0).contains(&v));
                }
            }
            // strictly monotone transform of the scores
            let c = RankedDebate::new("d", base.iter().map(|(i, s, l)| (*i, 3.0 * s * s * s - 1.0, *l)));
            for m in Metric::REPORTED {
                prop_assert_eq!(m.on(&a), m.on(&c));
            }
            let p = a.positives();
            if p > 0 {
                prop_assert_eq!(r_precision(&a), Some(precision_at_k(&a, p)));
                let perfect = a.items().iter().take(p).all(|i| i.relevant);
                prop_assert_eq!(average_precision(&a) == Some(1.0), perfect);
            }
        }
    }
}
