//! Jaccard-weighted k-nn recommendation and NDCG evaluation over repeated
//! train/test splits.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::dataset::{Dataset, ItemId, UserId};
use crate::error::{Error, Result};
use crate::seed;
use crate::similarity::{jaccard_from_counts, top_k_neighbors, NeighborPool, PoolKind};

pub const DEFAULT_LIST_LEN: usize = 10;
/// Rank cutoff of the NDCG sum: `N = min(NDCG_DEPTH, |test|)`.
pub const NDCG_DEPTH: usize = 10;
pub const DEFAULT_TRAIN_RATIO: f64 = 0.7;
pub const DEFAULT_SPLITS: usize = 10;
pub const DEFAULT_K_SWEEP: [usize; 5] = [10, 20, 30, 40, 50];

#[derive(Debug, Clone, PartialEq)]
pub struct TrainTestSplit {
    pub user: UserId,
    pub train: Vec<ItemId>,
    pub test: Vec<ItemId>,
    pub ratio: f64,
    pub seed: u64,
}

/// Partitions `u`'s likes uniformly at random into train and test.
///
/// `ratio` is the train share; the test side gets
/// `round((1 - ratio) * n)` items, clamped so both sides are non-empty.
/// The partition depends only on `(u, seed)`.
pub fn split_likes(d: &Dataset, u: UserId, ratio: f64, seed: u64) -> Result<TrainTestSplit> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "train ratio must lie in (0, 1), got {ratio}"
        )));
    }
    if u.index() >= d.n_users() {
        return Err(Error::UnknownUser(u));
    }
    let likes = d.likes(u);
    let n = likes.len();
    if n < 2 {
        return Err(Error::InsufficientLikes { user: u, likes: n });
    }
    let n_test = (((1.0 - ratio) * n as f64).round() as usize).clamp(1, n - 1);
    let mut shuffled = likes.to_vec();
    shuffled.shuffle(&mut seed::rng_for(seed, &[seed::TAG_SPLIT, u.0 as u64]));
    let mut test = shuffled[..n_test].to_vec();
    let mut train = shuffled[n_test..].to_vec();
    test.sort_unstable();
    train.sort_unstable();
    Ok(TrainTestSplit {
        user: u,
        train,
        test,
        ratio,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecommendationList {
    pub user: UserId,
    pub entries: Vec<(ItemId, f64)>,
}

impl RecommendationList {
    pub fn items(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.entries.iter().map(|&(i, _)| i)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Recommends up to `list_len` items for `u` from its `k` nearest pool
/// members, where neighbors are found using `train` as `u`'s itemset.
///
/// An item's score is the sum of the Jaccard similarities of the neighbors
/// that like it, accumulated in neighbor rank order. Train items are never
/// recommended. Ties are broken by global popularity, then item id. When no
/// candidate has a positive score (including an empty `train`), the list is
/// the pool's most popular items instead, scored 0.
pub fn recommend(
    d: &Dataset,
    u: UserId,
    train: &[ItemId],
    pool: NeighborPool,
    k: usize,
    list_len: usize,
) -> Result<RecommendationList> {
    let neighbors = top_k_neighbors(d, u, pool, k, train)?;
    let mut list = RecommendationList {
        user: u,
        entries: Vec::new(),
    };
    if neighbors.is_empty() || list_len == 0 {
        return Ok(list);
    }
    let prefs = d.prefs();
    let in_train = |i: &ItemId| train.binary_search(i).is_ok();

    let mut scores: FxHashMap<ItemId, f64> = FxHashMap::default();
    for n in &neighbors {
        for &i in prefs.likes(n.user) {
            if !in_train(&i) {
                *scores.entry(i).or_insert(0.0) += n.similarity;
            }
        }
    }

    if scores.values().any(|&s| s > 0.0) {
        let mut entries: Vec<(ItemId, f64)> = scores.into_iter().collect();
        entries.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| by_popularity(d, a.0, b.0)));
        entries.truncate(list_len);
        list.entries = entries;
        return Ok(list);
    }

    let counts = pool_item_counts(d, u, pool.base());
    let mut items: Vec<(ItemId, usize)> = counts
        .into_iter()
        .filter(|(i, c)| *c > 0 && !in_train(i))
        .collect();
    items.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| by_popularity(d, a.0, b.0)));
    list.entries = items
        .into_iter()
        .take(list_len)
        .map(|(i, _)| (i, 0.0))
        .collect();
    Ok(list)
}

fn by_popularity(d: &Dataset, a: ItemId, b: ItemId) -> Ordering {
    let prefs = d.prefs();
    prefs
        .item_degree(b)
        .cmp(&prefs.item_degree(a))
        .then(a.cmp(&b))
}

/// Number of pool members liking each item.
fn pool_item_counts(d: &Dataset, u: UserId, kind: PoolKind) -> Vec<(ItemId, usize)> {
    let prefs = d.prefs();
    let mut friend_counts: FxHashMap<ItemId, usize> = FxHashMap::default();
    for &f in d.friends(u) {
        for &i in prefs.likes(f) {
            *friend_counts.entry(i).or_insert(0) += 1;
        }
    }
    if kind == PoolKind::Friends {
        return friend_counts.into_iter().collect();
    }
    (0..d.n_items() as u32)
        .map(ItemId)
        .map(|i| {
            let own = usize::from(prefs.likes_item(u, i));
            let mut c = prefs.item_degree(i) - own;
            if kind == PoolKind::NonFriends {
                c -= friend_counts.get(&i).copied().unwrap_or(0);
            }
            (i, c)
        })
        .collect()
}

/// NDCG of `rec` against `test` with the default cutoff.
/// `None` when `test` is empty.
pub fn ndcg(rec: &RecommendationList, test: &[ItemId]) -> Option<f64> {
    ndcg_at(rec.items(), test, NDCG_DEPTH)
}

/// NDCG over the first `N = min(depth, |test|)` ranks, with gain 1 at rank 1
/// and `1 / log2(i)` at rank `i >= 2`. Ranks past the end of `ranked` count
/// as misses.
pub fn ndcg_at(
    ranked: impl IntoIterator<Item = ItemId>,
    test: &[ItemId],
    depth: usize,
) -> Option<f64> {
    if test.is_empty() {
        return None;
    }
    let n = depth.min(test.len());
    if n == 0 {
        return None;
    }
    let discount = |rank: usize| {
        if rank == 1 {
            1.0
        } else {
            1.0 / (rank as f64).log2()
        }
    };
    let gain: f64 = ranked
        .into_iter()
        .take(n)
        .enumerate()
        .filter(|(_, i)| test.contains(i))
        .fold(0.0, |acc, (pos, _)| acc + discount(pos + 1));
    let ideal: f64 = (1..=n).map(discount).sum();
    Some(gain / ideal)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    pub pool: NeighborPool,
    pub k: usize,
    pub list_len: usize,
    pub n_splits: usize,
    /// Train share of each user's likes.
    pub ratio: f64,
    pub seed: u64,
}

impl EvalConfig {
    pub fn new(pool: NeighborPool, k: usize, seed: u64) -> Self {
        EvalConfig {
            pool,
            k,
            list_len: DEFAULT_LIST_LEN,
            n_splits: DEFAULT_SPLITS,
            ratio: DEFAULT_TRAIN_RATIO,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitResult {
    pub split: usize,
    pub n_users: usize,
    pub n_skipped: usize,
    /// Mean NDCG over evaluated users.
    pub mean_ndcg: f64,
    /// Population standard deviation of per-user NDCG.
    pub std_ndcg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub condition: NeighborPool,
    pub k: usize,
    /// Mean of the per-split means.
    pub mean_ndcg: f64,
    /// Sample standard deviation of the per-split means.
    pub std_ndcg: f64,
    pub n_users: usize,
    pub n_skipped: usize,
    pub n_splits: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub result: EvalResult,
    pub splits: Vec<SplitResult>,
}

/// Seed for split `s` of an evaluation keyed by `master`.
pub fn split_seed(master: u64, split: usize) -> u64 {
    seed::derive(master, &[seed::TAG_SPLIT, split as u64])
}

/// Runs `n_splits` random train/test splits and averages NDCG per split
/// over evaluable core users.
///
/// Splits depend only on the master seed, so different pool conditions run
/// with the same seed see identical splits. Work is spread over the current
/// rayon pool; results do not depend on its size.
pub fn evaluate(d: &Dataset, config: &EvalConfig) -> Result<Evaluation> {
    if config.n_splits == 0 {
        return Err(Error::InvalidParameter(
            "n_splits must be at least 1".into(),
        ));
    }
    if !(config.ratio > 0.0 && config.ratio < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "train ratio must lie in (0, 1), got {}",
            config.ratio
        )));
    }
    let cores = d.core_users();
    let tasks: Vec<(usize, UserId)> = (0..config.n_splits)
        .flat_map(|s| cores.iter().map(move |&u| (s, u)))
        .collect();
    let outcomes: Vec<Option<f64>> = tasks
        .par_iter()
        .map(|&(s, u)| evaluate_user(d, config, s, u))
        .collect::<Result<_>>()?;

    let mut splits = Vec::with_capacity(config.n_splits);
    for (s, chunk) in outcomes.chunks(cores.len()).enumerate() {
        let values: Vec<f64> = chunk.iter().flatten().copied().collect();
        if values.is_empty() {
            return Err(Error::NoEvaluableUsers);
        }
        let (mean, var) = moments(&values, false);
        splits.push(SplitResult {
            split: s,
            n_users: values.len(),
            n_skipped: chunk.len() - values.len(),
            mean_ndcg: mean,
            std_ndcg: var.sqrt(),
        });
    }
    let means: Vec<f64> = splits.iter().map(|s| s.mean_ndcg).collect();
    let (mean, var) = moments(&means, true);
    let result = EvalResult {
        condition: config.pool,
        k: config.k,
        mean_ndcg: mean,
        std_ndcg: var.sqrt(),
        n_users: splits[0].n_users,
        n_skipped: splits[0].n_skipped,
        n_splits: config.n_splits,
    };
    Ok(Evaluation { result, splits })
}

fn evaluate_user(d: &Dataset, config: &EvalConfig, s: usize, u: UserId) -> Result<Option<f64>> {
    let split = match split_likes(d, u, config.ratio, split_seed(config.seed, s)) {
        Ok(split) => split,
        Err(Error::InsufficientLikes { .. }) => return Ok(None),
        Err(e) => return Err(e),
    };
    let pool = match config.pool {
        NeighborPool::Random {
            from,
            seed: pool_seed,
        } => NeighborPool::Random {
            from,
            seed: seed::derive(pool_seed, &[seed::TAG_RANDOM_POOL, s as u64, u.0 as u64]),
        },
        other => other,
    };
    let rec = recommend(d, u, &split.train, pool, config.k, config.list_len)?;
    Ok(ndcg(&rec, &split.test))
}

/// Mean and variance (sample variance when `sample` is set and n > 1).
fn moments(values: &[f64], sample: bool) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let ss = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>();
    let denom = if sample && values.len() > 1 {
        n - 1.0
    } else {
        n
    };
    (mean, ss / denom)
}

/// Similarity of `u`'s train set to `v`, as used when ranking neighbors.
pub fn train_similarity(d: &Dataset, train: &[ItemId], v: UserId) -> f64 {
    let theirs = d.likes(v);
    jaccard_from_counts(
        crate::similarity::intersection_size(train, theirs),
        train.len(),
        theirs.len(),
    )
}
