//! Brute-force oracles and random instance builders shared by the
//! integration tests. Nothing here calls into the ranking or counting code
//! under test; only dataset accessors are used.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use egorec::dataset::{Dataset, DatasetBuilder};
use egorec::{ItemId, UserId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn ds(edges: &[(&str, &str)], likes: &[(&str, &str)]) -> Dataset {
    let mut b = DatasetBuilder::new();
    for (c, n) in edges {
        b.add_edge(c, n);
    }
    for (u, i) in likes {
        b.add_like(u, i);
    }
    b.finish().unwrap().0
}

/// Random ego-centric instance with skewed item popularity (so ties and
/// shared items are common) and some friends without likes.
pub fn random_instance(seed: u64, max_users: usize, max_items: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_users = rng.gen_range(20..=max_users);
    let n_items = rng.gen_range(10..=max_items);
    let n_core = rng.gen_range(1..=(n_users / 4).max(1));
    let mut users: Vec<usize> = (0..n_users).collect();
    users.shuffle(&mut rng);
    let mut b = DatasetBuilder::new();
    for &c in &users[..n_core] {
        let n_friends = rng.gen_range(1..=(n_users / 3).max(1));
        for _ in 0..n_friends {
            let f = rng.gen_range(0..n_users);
            if f != c {
                b.add_edge(&format!("u{c}"), &format!("u{f}"));
            }
        }
        b.add_edge(&format!("u{c}"), &format!("u{}", (c + 1) % n_users));
    }
    for u in 0..n_users {
        // About one user in ten has no likes, unless it is a core user.
        let is_core = users[..n_core].contains(&u);
        if !is_core && rng.gen_bool(0.1) {
            continue;
        }
        let n_likes = rng.gen_range(1..=12.min(n_items));
        for _ in 0..n_likes {
            // Square of a uniform skews toward low item ids.
            let x: f64 = rng.gen();
            let i = ((x * x) * n_items as f64) as usize;
            b.add_like(&format!("u{u}"), &format!("i{}", i.min(n_items - 1)));
        }
    }
    b.finish().unwrap().0
}

pub fn set_jaccard(a: &BTreeSet<ItemId>, b: &BTreeSet<ItemId>) -> f64 {
    let inter = a.intersection(b).count();
    let union = a.union(b).count();
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OraclePool {
    Friends,
    NonFriends,
    Full,
}

pub fn oracle_pool(d: &Dataset, u: UserId, pool: OraclePool) -> Vec<UserId> {
    let friends: BTreeSet<UserId> = d.graph().neighbors(u).unwrap().iter().copied().collect();
    let likers: BTreeSet<UserId> = (0..d.n_users() as u32)
        .map(UserId)
        .filter(|&v| !d.likes(v).is_empty())
        .collect();
    let non_friends: BTreeSet<UserId> = likers
        .difference(&friends)
        .copied()
        .filter(|&v| v != u)
        .collect();
    match pool {
        OraclePool::Friends => friends.into_iter().collect(),
        OraclePool::NonFriends => non_friends.into_iter().collect(),
        OraclePool::Full => friends.union(&non_friends).copied().collect(),
    }
}

/// Score every pool member, sort everything, truncate.
pub fn oracle_top_k(
    d: &Dataset,
    u: UserId,
    pool: OraclePool,
    k: usize,
    basis: &[ItemId],
) -> Vec<(UserId, f64)> {
    let basis: BTreeSet<ItemId> = basis.iter().copied().collect();
    let mut all: Vec<(UserId, f64)> = oracle_pool(d, u, pool)
        .into_iter()
        .map(|v| {
            let theirs: BTreeSet<ItemId> = d.likes(v).iter().copied().collect();
            (v, set_jaccard(&basis, &theirs))
        })
        .collect();
    all.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    all.truncate(k);
    all
}

/// Enumerate every (neighbor, item) pair, accumulating in neighbor rank
/// order; popularity fallback counts pool likers directly.
pub fn oracle_recommend(
    d: &Dataset,
    u: UserId,
    train: &[ItemId],
    pool: OraclePool,
    k: usize,
    list_len: usize,
) -> Vec<(ItemId, f64)> {
    let neighbors = oracle_top_k(d, u, pool, k, train);
    if neighbors.is_empty() {
        return Vec::new();
    }
    let train: BTreeSet<ItemId> = train.iter().copied().collect();
    let popularity = |i: ItemId| {
        (0..d.n_users() as u32)
            .filter(|&v| d.likes(UserId(v)).contains(&i))
            .count()
    };
    let mut scores: BTreeMap<ItemId, f64> = BTreeMap::new();
    for &(v, sim) in &neighbors {
        for &i in d.likes(v) {
            if !train.contains(&i) {
                *scores.entry(i).or_insert(0.0) += sim;
            }
        }
    }
    if scores.values().any(|&s| s > 0.0) {
        let mut entries: Vec<(ItemId, f64)> = scores.into_iter().collect();
        entries.sort_by(|a, b| {
            b.1.partial_cmp(&a.1)
                .unwrap()
                .then(popularity(b.0).cmp(&popularity(a.0)))
                .then(a.0.cmp(&b.0))
        });
        entries.truncate(list_len);
        return entries;
    }
    let members = oracle_pool(d, u, pool);
    let mut counts: BTreeMap<ItemId, usize> = BTreeMap::new();
    for v in members {
        for &i in d.likes(v) {
            if !train.contains(&i) {
                *counts.entry(i).or_insert(0) += 1;
            }
        }
    }
    let mut entries: Vec<(ItemId, usize)> = counts.into_iter().collect();
    entries.sort_by(|a, b| {
        b.1.cmp(&a.1)
            .then(popularity(b.0).cmp(&popularity(a.0)))
            .then(a.0.cmp(&b.0))
    });
    entries
        .into_iter()
        .take(list_len)
        .map(|(i, _)| (i, 0.0))
        .collect()
}

/// Double loop over (ego network, item).
pub fn oracle_item_ego_counts(d: &Dataset) -> Vec<u32> {
    (0..d.n_items() as u32)
        .map(|i| {
            d.core_users()
                .iter()
                .filter(|&&c| {
                    let mut members = vec![c];
                    members.extend(d.graph().neighbors(c).unwrap());
                    members.iter().any(|&m| d.likes(m).contains(&ItemId(i)))
                })
                .count() as u32
        })
        .collect()
}
