//! Transaction database ingestion, recoding, input splits and a seeded
//! synthetic generator.
//!
//! Input format is FIMI text: one transaction per line, items as ASCII
//! decimal integers separated by single spaces. Items are recoded to dense
//! ids `0..|I|` assigned by ascending external label, which keeps every
//! structure downstream comparable across runs.

use std::collections::{BTreeMap, BTreeSet};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Dense item code. The mapping to external labels is a bijection held by
/// the owning [`TransactionDb`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Item(pub u32);

impl Item {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl std::fmt::Display for Item {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// A sorted, duplicate-free sequence of items.
pub type Itemset = Vec<Item>;
/// A transaction is structurally an itemset: strictly ascending, non-empty.
pub type Transaction = Vec<Item>;

/// Recoded transactions plus the id <-> external-label dictionary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransactionDb {
    transactions: Vec<Transaction>,
    /// `labels[id]` is the external label of item `id`; ascending.
    labels: Vec<u32>,
}

/// Basic corpus attributes.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub n: usize,
    pub item_count: usize,
    pub avg_width: f64,
}

/// Half-open transaction-index ranges assigning blocks to map tasks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPlan {
    pub lines_per_split: usize,
    pub boundaries: Vec<(usize, usize)>,
}

impl SplitPlan {
    pub fn len(&self) -> usize {
        self.boundaries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundaries.is_empty()
    }
}

impl TransactionDb {
    /// Parses FIMI text. Empty (or whitespace-only) lines are skipped;
    /// duplicate items within a line are dropped; an empty input yields an
    /// empty database.
    pub fn parse_fimi(text: &str) -> Result<TransactionDb> {
        let mut raw: Vec<Vec<u32>> = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut items: Vec<u32> = Vec::new();
            for tok in line.split_whitespace() {
                let label: u32 = tok.parse().map_err(|_| Error::Parse {
                    line: idx + 1,
                    token: tok.to_string(),
                })?;
                items.push(label);
            }
            items.sort_unstable();
            items.dedup();
            raw.push(items);
        }
        Ok(Self::from_label_transactions(raw))
    }

    /// Recode raw label transactions into a database. Ids are assigned by
    /// ascending external label; per-transaction items must already be
    /// sorted and deduplicated in label space.
    fn from_label_transactions(raw: Vec<Vec<u32>>) -> TransactionDb {
        let labels: Vec<u32> = raw
            .iter()
            .flat_map(|t| t.iter().copied())
            .collect::<BTreeSet<u32>>()
            .into_iter()
            .collect();
        let id_of: BTreeMap<u32, u32> = labels
            .iter()
            .enumerate()
            .map(|(id, &label)| (label, id as u32))
            .collect();
        let transactions = raw
            .into_iter()
            .map(|t| t.into_iter().map(|l| Item(id_of[&l])).collect())
            .collect();
        TransactionDb { transactions, labels }
    }

    /// Serializes back to FIMI text; `parse_fimi(db.to_fimi()) == db`.
    pub fn to_fimi(&self) -> String {
        let mut out = String::new();
        for t in &self.transactions {
            let mut first = true;
            for &item in t {
                if !first {
                    out.push(' ');
                }
                out.push_str(&self.labels[item.index()].to_string());
                first = false;
            }
            out.push('\n');
        }
        out
    }

    pub fn n(&self) -> usize {
        self.transactions.len()
    }

    pub fn item_count(&self) -> usize {
        self.labels.len()
    }

    pub fn transactions(&self) -> &[Transaction] {
        &self.transactions
    }

    pub fn label_of(&self, item: Item) -> u32 {
        self.labels[item.index()]
    }

    pub fn id_of_label(&self, label: u32) -> Option<Item> {
        self.labels
            .binary_search(&label)
            .ok()
            .map(|id| Item(id as u32))
    }

    /// Maps an itemset of internal ids to external labels.
    pub fn labels_of(&self, itemset: &[Item]) -> Vec<u32> {
        itemset.iter().map(|&i| self.label_of(i)).collect()
    }

    pub fn stats(&self) -> DatasetStats {
        let n = self.n();
        let total: usize = self.transactions.iter().map(|t| t.len()).sum();
        DatasetStats {
            n,
            item_count: self.item_count(),
            avg_width: if n == 0 { 0.0 } else { total as f64 / n as f64 },
        }
    }

    /// Plans input splits of `lines_per_split` transactions each; the last
    /// split may be shorter.
    pub fn make_splits(&self, lines_per_split: usize) -> Result<SplitPlan> {
        if lines_per_split == 0 {
            return Err(Error::InvalidArgument(
                "lines_per_split must be at least 1".into(),
            ));
        }
        let n = self.n();
        let mut boundaries = Vec::with_capacity(n.div_ceil(lines_per_split));
        let mut start = 0;
        while start < n {
            let end = (start + lines_per_split).min(n);
            boundaries.push((start, end));
            start = end;
        }
        Ok(SplitPlan {
            lines_per_split,
            boundaries,
        })
    }

    pub fn split(&self, range: (usize, usize)) -> &[Transaction] {
        &self.transactions[range.0..range.1]
    }
}

/// Parameters for the seeded synthetic generator.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    pub item_count: usize,
    pub avg_width: f64,
    pub seed: u64,
}

impl GeneratorConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::InvalidArgument("generator: n must be >= 1".into()));
        }
        if self.item_count < 1 {
            return Err(Error::InvalidArgument(
                "generator: item_count must be >= 1".into(),
            ));
        }
        if !(self.avg_width >= 1.0 && self.avg_width <= self.item_count as f64) {
            return Err(Error::InvalidArgument(
                "generator: avg_width must satisfy 1 <= avg_width <= item_count".into(),
            ));
        }
        Ok(())
    }
}

/// Deterministic synthetic transactions: widths are Poisson-like around
/// `avg_width` (clamped to `[1, item_count]`) and items follow a Zipf-like
/// popularity with exponent 1.0 so frequent patterns exist. Pure function
/// of the config.
pub fn generate_synthetic(config: &GeneratorConfig) -> Result<TransactionDb> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let m = config.item_count;

    // Cumulative Zipf(1.0) weights over labels 0..m; label r has weight 1/(r+1).
    let mut cumulative = Vec::with_capacity(m);
    let mut total = 0.0f64;
    for rank in 0..m {
        total += 1.0 / (rank as f64 + 1.0);
        cumulative.push(total);
    }

    let mut raw = Vec::with_capacity(config.n);
    let mut chosen: BTreeSet<u32> = BTreeSet::new();
    for _ in 0..config.n {
        let width = poisson(&mut rng, config.avg_width).clamp(1, m);
        chosen.clear();
        let mut attempts = 0usize;
        let cap = width * 64 + 256;
        while chosen.len() < width && attempts < cap {
            let u = next_f64(&mut rng) * total;
            let rank = cumulative.partition_point(|&c| c <= u).min(m - 1);
            chosen.insert(rank as u32);
            attempts += 1;
        }
        // Rejection rarely stalls when width approaches item_count; top up
        // with the most popular unused labels to keep the draw total exact.
        if chosen.len() < width {
            for label in 0..m as u32 {
                if chosen.len() == width {
                    break;
                }
                chosen.insert(label);
            }
        }
        raw.push(chosen.iter().copied().collect());
    }
    Ok(TransactionDb::from_label_transactions(raw))
}

#[inline]
fn next_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn poisson(rng: &mut ChaCha8Rng, lambda: f64) -> usize {
    if lambda <= 30.0 {
        // Knuth's product method.
        let limit = (-lambda).exp();
        let mut k = 0usize;
        let mut p = 1.0;
        loop {
            p *= next_f64(rng);
            if p <= limit {
                return k;
            }
            k += 1;
        }
    } else {
        // Normal approximation for large rates (Box-Muller).
        let u1 = next_f64(rng).max(f64::MIN_POSITIVE);
        let u2 = next_f64(rng);
        let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
        (lambda + lambda.sqrt() * z).round().max(0.0) as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn items(ids: &[u32]) -> Vec<Item> {
        ids.iter().map(|&i| Item(i)).collect()
    }

    #[test]
    fn parse_recodes_by_ascending_label() {
        let db = TransactionDb::parse_fimi("1 2 3\n2 3\n").unwrap();
        assert_eq!(db.n(), 2);
        assert_eq!(db.item_count(), 3);
        assert_eq!(db.transactions()[0], items(&[0, 1, 2]));
        assert_eq!(db.transactions()[1], items(&[1, 2]));
    }

    #[test]
    fn parse_drops_duplicates_and_sorts() {
        let db = TransactionDb::parse_fimi("3 3 1\n").unwrap();
        assert_eq!(db.n(), 1);
        assert_eq!(db.item_count(), 2);
        assert_eq!(db.transactions()[0], items(&[0, 1]));
        assert_eq!(db.labels_of(&db.transactions()[0]), vec![1, 3]);
    }

    #[test]
    fn parse_reports_line_of_bad_token() {
        let err = TransactionDb::parse_fimi("1 2\n\n4 x 5\n").unwrap_err();
        match err {
            Error::Parse { line, token } => {
                assert_eq!(line, 3);
                assert_eq!(token, "x");
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn parse_empty_input_is_empty_db() {
        let db = TransactionDb::parse_fimi("").unwrap();
        assert_eq!(db.n(), 0);
        assert_eq!(db.item_count(), 0);
        let s = db.stats();
        assert_eq!(s, DatasetStats { n: 0, item_count: 0, avg_width: 0.0 });
    }

    #[test]
    fn stats_single_transaction() {
        let db = TransactionDb::parse_fimi("10 20 30 40 50\n").unwrap();
        let s = db.stats();
        assert_eq!(s.n, 1);
        assert_eq!(s.item_count, 5);
        assert_eq!(s.avg_width, 5.0);
    }

    #[test]
    fn splits_cover_exactly() {
        let db = TransactionDb::parse_fimi(&"1 2\n".repeat(8124)).unwrap();
        let plan = db.make_splits(1000).unwrap();
        assert_eq!(plan.len(), 9);
        assert_eq!(plan.boundaries[8], (8000, 8124));

        let db = TransactionDb::parse_fimi(&"1 2\n".repeat(3196)).unwrap();
        assert_eq!(db.make_splits(400).unwrap().len(), 8);

        let db = TransactionDb::parse_fimi(&"1 2\n".repeat(5)).unwrap();
        let plan = db.make_splits(10).unwrap();
        assert_eq!(plan.len(), 1);
        assert_eq!(plan.boundaries[0], (0, 5));
    }

    #[test]
    fn zero_lines_per_split_rejected() {
        let db = TransactionDb::parse_fimi("1\n").unwrap();
        assert!(matches!(db.make_splits(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn generator_is_deterministic() {
        let cfg = GeneratorConfig { n: 100, item_count: 20, avg_width: 5.0, seed: 42 };
        let a = generate_synthetic(&cfg).unwrap();
        let b = generate_synthetic(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_fimi(), b.to_fimi());
    }

    #[test]
    fn generator_hits_target_shape() {
        let cfg = GeneratorConfig { n: 10_000, item_count: 192, avg_width: 20.0, seed: 7 };
        let db = generate_synthetic(&cfg).unwrap();
        let s = db.stats();
        assert_eq!(s.n, 10_000);
        assert!(s.item_count <= 192);
        assert!(
            (s.avg_width - 20.0).abs() <= 1.0,
            "avg width {} out of 5% band",
            s.avg_width
        );
    }

    #[test]
    fn generator_minimal_config() {
        let cfg = GeneratorConfig { n: 1, item_count: 1, avg_width: 1.0, seed: 0 };
        let db = generate_synthetic(&cfg).unwrap();
        assert_eq!(db.n(), 1);
        assert_eq!(db.transactions()[0], vec![Item(0)]);
    }

    #[test]
    fn generator_rejects_bad_config() {
        let bad = GeneratorConfig { n: 0, item_count: 1, avg_width: 1.0, seed: 0 };
        assert!(generate_synthetic(&bad).is_err());
        let bad = GeneratorConfig { n: 1, item_count: 4, avg_width: 9.0, seed: 0 };
        assert!(generate_synthetic(&bad).is_err());
    }
}
