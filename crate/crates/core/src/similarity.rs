//! Jaccard similarity over unary itemsets and top-k neighbor selection.

use std::cmp::Ordering;
use std::fmt;

use rand::seq::index::sample;
use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::dataset::{Dataset, ItemId, UserId};
use crate::error::{Error, Result};
use crate::seed;

/// Deterministic candidate pools relative to one core user.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PoolKind {
    Friends,
    /// Every user with a like, minus the core user and its friends.
    NonFriends,
    /// Friends and non-friends together.
    FullNetwork,
}

/// Neighbor selection condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NeighborPool {
    Friends,
    NonFriends,
    FullNetwork,
    /// `k` members drawn uniformly from `from`, ignoring similarity.
    Random {
        from: PoolKind,
        seed: u64,
    },
}

impl NeighborPool {
    pub fn base(self) -> PoolKind {
        match self {
            NeighborPool::Friends => PoolKind::Friends,
            NeighborPool::NonFriends => PoolKind::NonFriends,
            NeighborPool::FullNetwork => PoolKind::FullNetwork,
            NeighborPool::Random { from, .. } => from,
        }
    }

    /// Stable label used in reports.
    pub fn label(self) -> &'static str {
        match self {
            NeighborPool::Friends => "friends",
            NeighborPool::NonFriends => "non-friends",
            NeighborPool::FullNetwork => "full",
            NeighborPool::Random { from, .. } => match from {
                PoolKind::Friends => "random-friends",
                PoolKind::NonFriends => "random-non-friends",
                PoolKind::FullNetwork => "random",
            },
        }
    }
}

impl From<PoolKind> for NeighborPool {
    fn from(kind: PoolKind) -> Self {
        match kind {
            PoolKind::Friends => NeighborPool::Friends,
            PoolKind::NonFriends => NeighborPool::NonFriends,
            PoolKind::FullNetwork => NeighborPool::FullNetwork,
        }
    }
}

impl fmt::Display for NeighborPool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredNeighbor {
    pub user: UserId,
    pub similarity: f64,
}

/// Ordering for neighbor lists: similarity descending, then user id.
pub fn neighbor_order(a: &ScoredNeighbor, b: &ScoredNeighbor) -> Ordering {
    b.similarity
        .total_cmp(&a.similarity)
        .then(a.user.cmp(&b.user))
}

/// `|a ∩ b| / |a ∪ b|` for sorted, deduplicated slices. Two empty sets have
/// similarity 0.
pub fn jaccard<T: Ord>(a: &[T], b: &[T]) -> f64 {
    let inter = intersection_size(a, b);
    jaccard_from_counts(inter, a.len(), b.len())
}

#[inline]
pub(crate) fn jaccard_from_counts(inter: usize, a: usize, b: usize) -> f64 {
    let union = a + b - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

pub(crate) fn intersection_size<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

pub(crate) fn in_pool(d: &Dataset, u: UserId, kind: PoolKind, v: UserId) -> bool {
    if v == u {
        return false;
    }
    let friend = d.is_friend(u, v);
    match kind {
        PoolKind::Friends => friend,
        PoolKind::NonFriends => !friend && d.prefs().has_likes(v),
        PoolKind::FullNetwork => friend || d.prefs().has_likes(v),
    }
}

/// Members of `u`'s pool in ascending id order.
pub fn pool_members(d: &Dataset, u: UserId, kind: PoolKind) -> Vec<UserId> {
    match kind {
        PoolKind::Friends => d.friends(u).to_vec(),
        _ => (0..d.n_users() as u32)
            .map(UserId)
            .filter(|&v| in_pool(d, u, kind, v))
            .collect(),
    }
}

fn require_core(d: &Dataset, u: UserId) -> Result<()> {
    if d.graph().is_core(u) {
        Ok(())
    } else {
        Err(Error::UnknownUser(u))
    }
}

/// The `k` most similar members of `u`'s pool, scored against `basis`.
///
/// Sorted by similarity descending with ties on ascending user id. For a
/// random pool, `k` members are sampled first and then scored and sorted.
pub fn top_k_neighbors(
    d: &Dataset,
    u: UserId,
    pool: NeighborPool,
    k: usize,
    basis: &[ItemId],
) -> Result<Vec<ScoredNeighbor>> {
    require_core(d, u)?;
    if k == 0 {
        return Ok(Vec::new());
    }
    let prefs = d.prefs();
    if let NeighborPool::Random { from, seed } = pool {
        let members = pool_members(d, u, from);
        let take = k.min(members.len());
        let mut rng = seed::rng(seed);
        let mut out: Vec<ScoredNeighbor> = sample(&mut rng, members.len(), take)
            .into_iter()
            .map(|idx| {
                let v = members[idx];
                ScoredNeighbor {
                    user: v,
                    similarity: jaccard(basis, prefs.likes(v)),
                }
            })
            .collect();
        out.sort_by(neighbor_order);
        return Ok(out);
    }

    let kind = pool.base();
    // Overlap counts through the item → users index; only users sharing an
    // item with the basis can have positive similarity.
    let mut overlap: FxHashMap<UserId, usize> = FxHashMap::default();
    for &i in basis {
        for &v in prefs.likers(i) {
            *overlap.entry(v).or_insert(0) += 1;
        }
    }
    let mut positive: Vec<ScoredNeighbor> = overlap
        .into_iter()
        .filter(|&(v, _)| in_pool(d, u, kind, v))
        .map(|(v, inter)| ScoredNeighbor {
            user: v,
            similarity: jaccard_from_counts(inter, basis.len(), prefs.user_degree(v)),
        })
        .collect();
    positive.sort_by(neighbor_order);
    positive.truncate(k);
    if positive.len() == k {
        return Ok(positive);
    }

    // Pad with zero-similarity members in ascending id order.
    let mut taken: Vec<UserId> = positive.iter().map(|n| n.user).collect();
    taken.sort_unstable();
    let missing = k - positive.len();
    let zero = |v: &UserId| taken.binary_search(v).is_err();
    let pad: Vec<UserId> = match kind {
        PoolKind::Friends => d
            .friends(u)
            .iter()
            .copied()
            .filter(zero)
            .take(missing)
            .collect(),
        _ => (0..d.n_users() as u32)
            .map(UserId)
            .filter(|&v| in_pool(d, u, kind, v))
            .filter(zero)
            .take(missing)
            .collect(),
    };
    positive.extend(pad.into_iter().map(|v| ScoredNeighbor {
        user: v,
        similarity: 0.0,
    }));
    Ok(positive)
}

/// Mean over core users of the mean similarity to their top-`k` pool
/// members, using full itemsets. Users whose pool is smaller than `k`
/// contribute the mean over what is available; users with an empty pool are
/// left out.
pub fn avg_topk_similarity(d: &Dataset, k: usize, pool: PoolKind) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if d.core_users().is_empty() {
        return Err(Error::NoCoreUsers);
    }
    let per_user: Vec<Option<f64>> = d
        .core_users()
        .par_iter()
        .map(|&u| {
            let top = top_k_neighbors(d, u, pool.into(), k, d.likes(u))?;
            Ok(mean(top.iter().map(|n| n.similarity)))
        })
        .collect::<Result<_>>()?;
    Ok(mean(per_user.into_iter().flatten()).unwrap_or(0.0))
}

/// Friend similarity against an equally sized random non-friend sample.
#[derive(Debug, Clone, PartialEq)]
pub struct FriendRandomSimilarity {
    /// Mean over core users of mean similarity to all of their friends.
    pub friends_avg: f64,
    /// Mean over repeats of the per-repeat value in `per_repeat`.
    pub random_avg: f64,
    /// Mean over core users of mean similarity to a random non-friend
    /// sample, one entry per repeat.
    pub per_repeat: Vec<f64>,
}

/// Compares each core user's similarity to all friends with its similarity
/// to `|friends|` uniformly sampled non-friends, resampled `repeats` times.
/// When there are fewer non-friends than friends, all non-friends are used.
pub fn friend_vs_random_similarity(
    d: &Dataset,
    repeats: usize,
    seed: u64,
) -> Result<FriendRandomSimilarity> {
    if repeats == 0 {
        return Err(Error::InvalidParameter("repeats must be at least 1".into()));
    }
    if d.core_users().is_empty() {
        return Err(Error::NoCoreUsers);
    }
    let prefs = d.prefs();
    let rows: Vec<(Option<f64>, Vec<Option<f64>>)> = d
        .core_users()
        .par_iter()
        .map(|&u| {
            let mine = prefs.likes(u);
            let friends = d.friends(u);
            let friends_mean = mean(friends.iter().map(|&v| jaccard(mine, prefs.likes(v))));
            let pool = d.non_friends(u);
            let take = friends.len().min(pool.len());
            let per_repeat = (0..repeats)
                .map(|r| {
                    let mut rng =
                        seed::rng_for(seed, &[seed::TAG_NON_FRIEND_SAMPLE, u.0 as u64, r as u64]);
                    mean(
                        sample(&mut rng, pool.len(), take)
                            .into_iter()
                            .map(|idx| jaccard(mine, prefs.likes(pool[idx]))),
                    )
                })
                .collect();
            (friends_mean, per_repeat)
        })
        .collect();

    let friends_avg = mean(rows.iter().filter_map(|r| r.0)).unwrap_or(0.0);
    let per_repeat: Vec<f64> = (0..repeats)
        .map(|r| mean(rows.iter().filter_map(|row| row.1[r])).unwrap_or(0.0))
        .collect();
    let random_avg = per_repeat.iter().sum::<f64>() / repeats as f64;
    Ok(FriendRandomSimilarity {
        friends_avg,
        random_avg,
        per_repeat,
    })
}

/// Arithmetic mean in iteration order, `None` when empty.
pub(crate) fn mean(values: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values
        .into_iter()
        .fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}
