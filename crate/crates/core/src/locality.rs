//! Preference-locality metrics: ego vs network sparsity, ego coverage, and
//! coverage ratios against randomized null networks.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::index::sample;
use rand::Rng as _;
use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::dataset::{Dataset, ItemId, PreferenceStore, SocialGraph, UserId};
use crate::error::{Error, Result};
use crate::seed;
use crate::similarity::friend_vs_random_similarity;

/// Attempted double-edge swaps per like for the degree-preserving null.
pub const SWAPS_PER_LIKE: usize = 10;
pub const DEFAULT_REPLICATES: usize = 10;

/// A core user and its friends.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EgoNetwork {
    pub core: UserId,
    /// Sorted; always contains `core`.
    pub members: Vec<UserId>,
}

pub fn ego_networks(d: &Dataset) -> Vec<EgoNetwork> {
    d.graph()
        .iter()
        .map(|(core, nbrs)| {
            let mut members = nbrs.to_vec();
            members.push(core);
            members.sort_unstable();
            EgoNetwork { core, members }
        })
        .collect()
}

/// Distinct items liked by anyone in `members`, sorted.
fn ego_items(prefs: &PreferenceStore, members: &[UserId]) -> Vec<ItemId> {
    let mut items: Vec<ItemId> = members
        .iter()
        .flat_map(|&m| prefs.likes(m).iter().copied())
        .collect();
    items.sort_unstable();
    items.dedup();
    items
}

/// Mean over ego networks of the like density of the ego user-item matrix,
/// in percent. An ego matrix spans the ego members and the items liked by
/// at least one of them; an ego whose members have no likes has density 0.
pub fn ego_sparsity(d: &Dataset) -> Result<f64> {
    let egos = ego_networks(d);
    if egos.is_empty() {
        return Err(Error::NoCoreUsers);
    }
    let prefs = d.prefs();
    let densities: Vec<f64> = egos
        .par_iter()
        .map(|ego| {
            let n_items = ego_items(prefs, &ego.members).len();
            let likes: usize = ego.members.iter().map(|&m| prefs.user_degree(m)).sum();
            if n_items == 0 {
                0.0
            } else {
                100.0 * likes as f64 / (ego.members.len() * n_items) as f64
            }
        })
        .collect();
    Ok(densities.iter().sum::<f64>() / densities.len() as f64)
}

/// Likes over (users × items) for the whole dataset, in percent.
pub fn network_sparsity(d: &Dataset) -> Result<f64> {
    let prefs = d.prefs();
    if prefs.n_likes() == 0 {
        return Err(Error::InvalidParameter("dataset has no likes".into()));
    }
    let items = prefs.item_degrees().into_iter().filter(|&c| c > 0).count();
    Ok(100.0 * prefs.n_likes() as f64 / (d.n_users() * items) as f64)
}

/// For each item id, the number of ego networks with at least one member
/// who likes it.
pub fn item_ego_counts(d: &Dataset) -> Vec<u32> {
    let prefs = d.prefs();
    let per_ego: Vec<Vec<ItemId>> = ego_networks(d)
        .par_iter()
        .map(|ego| ego_items(prefs, &ego.members))
        .collect();
    let mut counts = vec![0u32; d.n_items()];
    for items in per_ego {
        for i in items {
            counts[i.index()] += 1;
        }
    }
    counts
}

/// 100 minus the mean, over items with at least one like, of the percentage
/// of ego networks containing the item.
pub fn uncovered_ego(d: &Dataset) -> Result<f64> {
    let n_egos = d.core_users().len();
    if n_egos == 0 {
        return Err(Error::NoCoreUsers);
    }
    let prefs = d.prefs();
    let counts = item_ego_counts(d);
    let covered: Vec<f64> = counts
        .iter()
        .enumerate()
        .filter(|&(i, _)| prefs.item_degree(ItemId(i as u32)) > 0)
        .map(|(_, &c)| 100.0 * c as f64 / n_egos as f64)
        .collect();
    if covered.is_empty() {
        return Err(Error::InvalidParameter("dataset has no liked items".into()));
    }
    Ok(100.0 - covered.iter().sum::<f64>() / covered.len() as f64)
}

/// How likes are redistributed by [`randomize_items`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ItemNull {
    /// Each user keeps its like count; items drawn uniformly.
    Uniform,
    /// Bipartite double-edge swaps; user and item degrees both kept.
    DegreePreserving,
}

/// Null model for [`coverage_ratio`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NullModel {
    ItemUniform,
    ItemDegreePreserving,
    FriendRewire,
}

impl NullModel {
    pub fn label(self) -> &'static str {
        match self {
            NullModel::ItemUniform => "uniform",
            NullModel::ItemDegreePreserving => "degree-preserving",
            NullModel::FriendRewire => "friend-rewire",
        }
    }
}

impl fmt::Display for NullModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl From<ItemNull> for NullModel {
    fn from(m: ItemNull) -> Self {
        match m {
            ItemNull::Uniform => NullModel::ItemUniform,
            ItemNull::DegreePreserving => NullModel::ItemDegreePreserving,
        }
    }
}

/// Same graph, likes randomly redistributed. Deterministic per seed.
pub fn randomize_items(d: &Dataset, model: ItemNull, seed: u64) -> Result<Dataset> {
    let mut rng = seed::rng(seed);
    let prefs = d.prefs();
    let store = match model {
        ItemNull::Uniform => {
            let n_items = d.n_items();
            let mut by_user = Vec::with_capacity(d.n_users());
            for u in 0..d.n_users() as u32 {
                let deg = prefs.user_degree(UserId(u));
                if deg > n_items {
                    return Err(Error::Infeasible(format!(
                        "user {} has {deg} likes but only {n_items} items exist",
                        d.user_name(UserId(u))
                    )));
                }
                by_user.push(
                    sample(&mut rng, n_items, deg)
                        .into_iter()
                        .map(|i| ItemId(i as u32))
                        .collect(),
                );
            }
            PreferenceStore::from_user_lists(n_items, by_user).0
        }
        ItemNull::DegreePreserving => {
            let mut edges: Vec<(UserId, ItemId)> = prefs.pairs().collect();
            let attempts = SWAPS_PER_LIKE * edges.len();
            double_edge_swaps(&mut edges, attempts, &mut rng);
            PreferenceStore::from_pairs(d.n_users(), d.n_items(), edges).0
        }
    };
    d.with_prefs(store)
}

/// Attempts `attempts` bipartite double-edge swaps in place and returns the
/// number accepted.
///
/// A swap picks two likes `(u1, i1)` and `(u2, i2)` uniformly and rewires
/// them to `(u1, i2)` and `(u2, i1)`. It is rejected if the users or items
/// coincide or if either new like already exists.
pub fn double_edge_swaps(
    edges: &mut [(UserId, ItemId)],
    attempts: usize,
    rng: &mut seed::Rng,
) -> usize {
    let key = |(u, i): (UserId, ItemId)| ((u.0 as u64) << 32) | i.0 as u64;
    let mut present: FxHashSet<u64> = edges.iter().map(|&e| key(e)).collect();
    let n = edges.len();
    if n < 2 {
        return 0;
    }
    let mut accepted = 0;
    for _ in 0..attempts {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        let (u1, i1) = edges[a];
        let (u2, i2) = edges[b];
        if u1 == u2 || i1 == i2 {
            continue;
        }
        let (new_a, new_b) = ((u1, i2), (u2, i1));
        if present.contains(&key(new_a)) || present.contains(&key(new_b)) {
            continue;
        }
        present.remove(&key(edges[a]));
        present.remove(&key(edges[b]));
        present.insert(key(new_a));
        present.insert(key(new_b));
        edges[a] = new_a;
        edges[b] = new_b;
        accepted += 1;
    }
    accepted
}

/// Core users whose replacement pool was smaller than their friend count.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RewireReport {
    pub short_pools: Vec<UserId>,
}

/// Same likes; each core user's friends replaced by an equally sized uniform
/// sample of all other users. Deterministic per seed.
pub fn randomize_friends(d: &Dataset, seed: u64) -> Result<(Dataset, RewireReport)> {
    let mut rng = seed::rng(seed);
    let n_users = d.n_users();
    let mut report = RewireReport::default();
    let mut adjacency = BTreeMap::new();
    for (core, nbrs) in d.graph().iter() {
        let available = n_users - 1;
        if nbrs.len() > available {
            report.short_pools.push(core);
        }
        let take = nbrs.len().min(available);
        // Sample from 0..n_users-1 and shift past the core's own id.
        let friends: Vec<UserId> = sample(&mut rng, available, take)
            .into_iter()
            .map(|v| {
                let v = v as u32;
                UserId(if v >= core.0 { v + 1 } else { v })
            })
            .collect();
        adjacency.insert(core, friends);
    }
    Ok((d.with_graph(SocialGraph::new(adjacency)?)?, report))
}

/// Result of [`coverage_ratio`].
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRatio {
    pub null_model: NullModel,
    /// Mean of `per_replicate`.
    pub value: f64,
    pub per_replicate: Vec<f64>,
    /// Liked items with no real ego coverage, left out of the average.
    pub excluded_items: usize,
}

/// Builds the null network for one replicate.
pub fn null_network(d: &Dataset, null: NullModel, seed: u64) -> Result<Dataset> {
    match null {
        NullModel::ItemUniform => randomize_items(d, ItemNull::Uniform, seed),
        NullModel::ItemDegreePreserving => randomize_items(d, ItemNull::DegreePreserving, seed),
        NullModel::FriendRewire => randomize_friends(d, seed).map(|(d, _)| d),
    }
}

/// Mean over items of (ego count in a null network) / (ego count in `d`),
/// averaged over `replicates` null networks. Items covered by no real ego
/// network are left out. Values above 1 mean likes are more concentrated
/// in ego networks than the null model predicts.
pub fn coverage_ratio(
    d: &Dataset,
    null: NullModel,
    replicates: usize,
    seed: u64,
) -> Result<CoverageRatio> {
    if replicates == 0 {
        return Err(Error::InvalidParameter(
            "replicates must be at least 1".into(),
        ));
    }
    if d.core_users().is_empty() {
        return Err(Error::NoCoreUsers);
    }
    let real = item_ego_counts(d);
    let prefs = d.prefs();
    let covered: Vec<usize> = (0..d.n_items()).filter(|&i| real[i] > 0).collect();
    if covered.is_empty() {
        return Err(Error::NoCoveredItems);
    }
    let excluded_items = (0..d.n_items())
        .filter(|&i| real[i] == 0 && prefs.item_degree(ItemId(i as u32)) > 0)
        .count();

    let per_replicate: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|r| {
            let null_seed = seed::derive(seed, &[seed::TAG_REPLICATE, r as u64]);
            let randomized = null_network(d, null, null_seed)?;
            let counts = item_ego_counts(&randomized);
            let sum: f64 = covered
                .iter()
                .map(|&i| counts[i] as f64 / real[i] as f64)
                .sum();
            Ok(sum / covered.len() as f64)
        })
        .collect::<Result<_>>()?;
    let value = per_replicate.iter().sum::<f64>() / replicates as f64;
    Ok(CoverageRatio {
        null_model: null,
        value,
        per_replicate,
        excluded_items,
    })
}

/// All locality metrics for one dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalityReport {
    pub friends_similarity: f64,
    pub random_similarity: f64,
    /// Percent.
    pub ego_sparsity: f64,
    /// Percent.
    pub network_sparsity: f64,
    /// Percent.
    pub uncovered_ego: f64,
    pub random_item_ego: CoverageRatio,
    pub random_friend_ego: CoverageRatio,
    pub replicates: usize,
}

pub fn locality_report(
    d: &Dataset,
    item_null: ItemNull,
    replicates: usize,
    seed: u64,
) -> Result<LocalityReport> {
    let similarity = friend_vs_random_similarity(d, replicates, seed)?;
    Ok(LocalityReport {
        friends_similarity: similarity.friends_avg,
        random_similarity: similarity.random_avg,
        ego_sparsity: ego_sparsity(d)?,
        network_sparsity: network_sparsity(d)?,
        uncovered_ego: uncovered_ego(d)?,
        random_item_ego: coverage_ratio(d, item_null.into(), replicates, seed)?,
        random_friend_ego: coverage_ratio(d, NullModel::FriendRewire, replicates, seed)?,
        replicates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::DatasetBuilder;

    fn dataset(edges: &[(&str, &str)], likes: &[(&str, &str)]) -> Dataset {
        let mut b = DatasetBuilder::new();
        for (c, n) in edges {
            b.add_edge(c, n);
        }
        for (u, i) in likes {
            b.add_like(u, i);
        }
        b.finish().unwrap().0
    }

    #[test]
    fn two_member_ego_sharing_one_item_is_dense() {
        let d = dataset(&[("u", "v")], &[("u", "A"), ("v", "A")]);
        assert_eq!(ego_sparsity(&d).unwrap(), 100.0);
    }

    #[test]
    fn network_density_three_by_three() {
        let d = dataset(
            &[("1", "2"), ("1", "3")],
            &[("1", "A"), ("2", "B"), ("3", "C")],
        );
        assert!((network_sparsity(&d).unwrap() - 100.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ego_counts_and_uncovered() {
        let d = dataset(
            &[("c1", "a"), ("c2", "b")],
            &[("c1", "X"), ("c2", "X"), ("a", "Y"), ("z", "Z")],
        );
        let counts = item_ego_counts(&d);
        let name = |n: &str| d.find_item(n).unwrap().index();
        assert_eq!(counts[name("X")], 2);
        assert_eq!(counts[name("Y")], 1);
        assert_eq!(counts[name("Z")], 0);
        // Coverage: X 100%, Y 50%, Z 0% → mean 50%.
        assert!((uncovered_ego(&d).unwrap() - 50.0).abs() < 1e-12);
    }

    #[test]
    fn full_coverage_is_zero_uncovered() {
        let d = dataset(
            &[("c1", "a"), ("c2", "b")],
            &[("c1", "X"), ("c2", "X"), ("c1", "Y"), ("b", "Y")],
        );
        assert_eq!(uncovered_ego(&d).unwrap(), 0.0);
    }

    #[test]
    fn rewire_with_exact_pool_is_identity() {
        // Two users: the only possible friend of c is v.
        let d = dataset(&[("c", "v")], &[("c", "A"), ("v", "B")]);
        let (r, report) = randomize_friends(&d, 11).unwrap();
        assert_eq!(r, d);
        assert!(report.short_pools.is_empty());
    }

    #[test]
    fn uniform_null_keeps_user_degrees() {
        let d = dataset(
            &[("c", "a"), ("c", "b")],
            &[
                ("c", "A"),
                ("c", "B"),
                ("a", "A"),
                ("b", "C"),
                ("b", "A"),
                ("x", "D"),
            ],
        );
        let r = randomize_items(&d, ItemNull::Uniform, 4).unwrap();
        assert_eq!(r.prefs().user_degrees(), d.prefs().user_degrees());
        assert_eq!(r.graph(), d.graph());
        assert_eq!(r, randomize_items(&d, ItemNull::Uniform, 4).unwrap());
    }

    #[test]
    fn fully_covered_item_ratio_at_most_one() {
        let d = dataset(
            &[("c1", "a"), ("c2", "b")],
            &[("c1", "X"), ("c2", "X"), ("a", "Y"), ("b", "Z"), ("z", "W")],
        );
        let real = item_ego_counts(&d);
        let x = d.find_item("X").unwrap().index();
        assert_eq!(real[x] as usize, d.core_users().len());
        for seed in 0..20 {
            for null in [
                NullModel::ItemUniform,
                NullModel::ItemDegreePreserving,
                NullModel::FriendRewire,
            ] {
                let r = null_network(&d, null, seed).unwrap();
                assert!(item_ego_counts(&r)[x] <= real[x]);
            }
        }
    }

    #[test]
    fn coverage_ratio_errors() {
        let d = dataset(&[("c", "v")], &[("c", "A")]);
        assert!(coverage_ratio(&d, NullModel::FriendRewire, 0, 1).is_err());
        let ok = coverage_ratio(&d, NullModel::ItemDegreePreserving, 3, 1).unwrap();
        assert_eq!(ok.per_replicate.len(), 3);
    }
}
