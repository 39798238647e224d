//! Ego-centric social graphs and unary preference data.
//!
//! Users and items carry dense integer ids assigned in first-appearance
//! order while loading; the original string ids are kept alongside so that
//! reports and written files can use them.

mod io;
mod stats;
mod synthetic;

use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

pub use io::{load_dataset, read_dataset, write_likes, write_social, LoadReport};
pub use stats::{dataset_stats, popularity_cdf, DatasetStats, MeanStd};
pub use synthetic::{generate_synthetic, SyntheticConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UserId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub u32);

impl UserId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl ItemId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Core users and their complete first-degree neighbor sets.
///
/// Edges are stored core → neighbor. Neighbor lists are sorted and never
/// contain the core user itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SocialGraph {
    cores: Vec<UserId>,
    neighbors: Vec<Vec<UserId>>,
    index: FxHashMap<UserId, usize>,
}

impl SocialGraph {
    /// Builds a graph from a core → neighbors map. Neighbor lists are
    /// sorted and deduplicated; self-edges and empty lists are rejected.
    pub fn new(adjacency: BTreeMap<UserId, Vec<UserId>>) -> Result<Self> {
        let mut cores = Vec::with_capacity(adjacency.len());
        let mut neighbors = Vec::with_capacity(adjacency.len());
        for (core, mut list) in adjacency {
            list.sort_unstable();
            list.dedup();
            if list.is_empty() {
                return Err(Error::NoNeighbors(core.to_string()));
            }
            if list.binary_search(&core).is_ok() {
                return Err(Error::InvalidParameter(format!(
                    "core user {core} listed as its own neighbor"
                )));
            }
            cores.push(core);
            neighbors.push(list);
        }
        let index = cores.iter().enumerate().map(|(i, &u)| (u, i)).collect();
        Ok(SocialGraph {
            cores,
            neighbors,
            index,
        })
    }

    /// Core users in ascending id order.
    pub fn core_users(&self) -> &[UserId] {
        &self.cores
    }

    pub fn len(&self) -> usize {
        self.cores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cores.is_empty()
    }

    pub fn is_core(&self, u: UserId) -> bool {
        self.index.contains_key(&u)
    }

    pub fn neighbors(&self, u: UserId) -> Option<&[UserId]> {
        self.index.get(&u).map(|&i| self.neighbors[i].as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (UserId, &[UserId])> + '_ {
        self.cores
            .iter()
            .copied()
            .zip(self.neighbors.iter().map(Vec::as_slice))
    }

    pub fn n_edges(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum()
    }
}

/// Bipartite unary likes with both user-major and item-major indexes.
///
/// Both index vectors are dense: `by_user` has one (possibly empty) entry per
/// user id and `by_item` one per item id. Every list is sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceStore {
    by_user: Vec<Vec<ItemId>>,
    by_item: Vec<Vec<UserId>>,
    n_likes: usize,
}

impl PreferenceStore {
    /// Builds the store from per-user item lists, deduplicating each list.
    /// Returns the store and the number of duplicate likes dropped.
    pub fn from_user_lists(n_items: usize, mut by_user: Vec<Vec<ItemId>>) -> (Self, usize) {
        let mut duplicates = 0;
        let mut by_item = vec![Vec::new(); n_items];
        let mut n_likes = 0;
        for (u, items) in by_user.iter_mut().enumerate() {
            let before = items.len();
            items.sort_unstable();
            items.dedup();
            duplicates += before - items.len();
            n_likes += items.len();
            for &i in items.iter() {
                by_item[i.index()].push(UserId(u as u32));
            }
        }
        // Users were visited in ascending order, so every by_item list is sorted.
        (
            PreferenceStore {
                by_user,
                by_item,
                n_likes,
            },
            duplicates,
        )
    }

    pub fn from_pairs(
        n_users: usize,
        n_items: usize,
        pairs: impl IntoIterator<Item = (UserId, ItemId)>,
    ) -> (Self, usize) {
        let mut by_user = vec![Vec::new(); n_users];
        for (u, i) in pairs {
            by_user[u.index()].push(i);
        }
        Self::from_user_lists(n_items, by_user)
    }

    pub fn likes(&self, u: UserId) -> &[ItemId] {
        self.by_user.get(u.index()).map_or(&[], Vec::as_slice)
    }

    pub fn likers(&self, i: ItemId) -> &[UserId] {
        self.by_item.get(i.index()).map_or(&[], Vec::as_slice)
    }

    pub fn has_likes(&self, u: UserId) -> bool {
        !self.likes(u).is_empty()
    }

    pub fn likes_item(&self, u: UserId, i: ItemId) -> bool {
        self.likes(u).binary_search(&i).is_ok()
    }

    pub fn user_degree(&self, u: UserId) -> usize {
        self.likes(u).len()
    }

    pub fn item_degree(&self, i: ItemId) -> usize {
        self.likers(i).len()
    }

    pub fn n_likes(&self) -> usize {
        self.n_likes
    }

    pub fn n_users(&self) -> usize {
        self.by_user.len()
    }

    pub fn n_items(&self) -> usize {
        self.by_item.len()
    }

    /// All (user, item) pairs in user-major order.
    pub fn pairs(&self) -> impl Iterator<Item = (UserId, ItemId)> + '_ {
        self.by_user
            .iter()
            .enumerate()
            .flat_map(|(u, items)| items.iter().map(move |&i| (UserId(u as u32), i)))
    }

    pub fn user_degrees(&self) -> Vec<usize> {
        self.by_user.iter().map(Vec::len).collect()
    }

    pub fn item_degrees(&self) -> Vec<usize> {
        self.by_item.iter().map(Vec::len).collect()
    }
}

/// A social graph together with the preference store over the same users.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    graph: SocialGraph,
    prefs: PreferenceStore,
    users: Vec<String>,
    items: Vec<String>,
}

impl Dataset {
    /// Assembles a dataset from parts. Every id in `graph` and `prefs` must be
    /// below the respective name table length, and every core user must have
    /// at least one like.
    pub fn new(
        graph: SocialGraph,
        prefs: PreferenceStore,
        users: Vec<String>,
        items: Vec<String>,
    ) -> Result<Self> {
        if prefs.n_users() != users.len() || prefs.n_items() != items.len() {
            return Err(Error::InvalidParameter(format!(
                "preference store is {}x{} but name tables are {}x{}",
                prefs.n_users(),
                prefs.n_items(),
                users.len(),
                items.len()
            )));
        }
        for (core, nbrs) in graph.iter() {
            if core.index() >= users.len() || nbrs.iter().any(|v| v.index() >= users.len()) {
                return Err(Error::InvalidParameter(format!(
                    "social graph references a user outside 0..{}",
                    users.len()
                )));
            }
            if !prefs.has_likes(core) {
                return Err(Error::InvalidParameter(format!(
                    "core user {} has zero likes",
                    users[core.index()]
                )));
            }
        }
        if graph.is_empty() {
            return Err(Error::NoCoreUsers);
        }
        Ok(Dataset {
            graph,
            prefs,
            users,
            items,
        })
    }

    pub fn graph(&self) -> &SocialGraph {
        &self.graph
    }

    pub fn prefs(&self) -> &PreferenceStore {
        &self.prefs
    }

    pub fn n_users(&self) -> usize {
        self.users.len()
    }

    pub fn n_items(&self) -> usize {
        self.items.len()
    }

    pub fn core_users(&self) -> &[UserId] {
        self.graph.core_users()
    }

    /// Neighbors of a core user; empty for anyone else.
    pub fn friends(&self, u: UserId) -> &[UserId] {
        self.graph.neighbors(u).unwrap_or(&[])
    }

    pub fn is_friend(&self, u: UserId, v: UserId) -> bool {
        self.friends(u).binary_search(&v).is_ok()
    }

    pub fn likes(&self, u: UserId) -> &[ItemId] {
        self.prefs.likes(u)
    }

    pub fn user_name(&self, u: UserId) -> &str {
        &self.users[u.index()]
    }

    pub fn item_name(&self, i: ItemId) -> &str {
        &self.items[i.index()]
    }

    pub fn user_names(&self) -> &[String] {
        &self.users
    }

    pub fn item_names(&self) -> &[String] {
        &self.items
    }

    pub fn find_user(&self, name: &str) -> Option<UserId> {
        self.users
            .iter()
            .position(|n| n == name)
            .map(|p| UserId(p as u32))
    }

    pub fn find_item(&self, name: &str) -> Option<ItemId> {
        self.items
            .iter()
            .position(|n| n == name)
            .map(|p| ItemId(p as u32))
    }

    /// Same graph and names, different likes.
    pub fn with_prefs(&self, prefs: PreferenceStore) -> Result<Self> {
        Dataset::new(
            self.graph.clone(),
            prefs,
            self.users.clone(),
            self.items.clone(),
        )
    }

    /// Same likes and names, different graph.
    pub fn with_graph(&self, graph: SocialGraph) -> Result<Self> {
        Dataset::new(
            graph,
            self.prefs.clone(),
            self.users.clone(),
            self.items.clone(),
        )
    }

    /// Non-friend pool of core user `u`: every user with at least one like,
    /// except `u` and its neighbors. Ascending id order.
    pub fn non_friends(&self, u: UserId) -> Vec<UserId> {
        (0..self.n_users() as u32)
            .map(UserId)
            .filter(|&v| v != u && self.prefs.has_likes(v) && !self.is_friend(u, v))
            .collect()
    }
}

/// Interns string ids into dense integers and collects raw edges and likes.
#[derive(Debug, Default)]
pub struct DatasetBuilder {
    user_ids: FxHashMap<String, u32>,
    users: Vec<String>,
    item_ids: FxHashMap<String, u32>,
    items: Vec<String>,
    edges: Vec<(UserId, UserId)>,
    likes: Vec<(UserId, ItemId)>,
}

impl DatasetBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern_user(&mut self, name: &str) -> UserId {
        if let Some(&id) = self.user_ids.get(name) {
            return UserId(id);
        }
        let id = self.users.len() as u32;
        self.users.push(name.to_owned());
        self.user_ids.insert(name.to_owned(), id);
        UserId(id)
    }

    pub fn intern_item(&mut self, name: &str) -> ItemId {
        if let Some(&id) = self.item_ids.get(name) {
            return ItemId(id);
        }
        let id = self.items.len() as u32;
        self.items.push(name.to_owned());
        self.item_ids.insert(name.to_owned(), id);
        ItemId(id)
    }

    pub fn add_edge(&mut self, core: &str, neighbor: &str) {
        let c = self.intern_user(core);
        let n = self.intern_user(neighbor);
        self.edges.push((c, n));
    }

    pub fn add_like(&mut self, user: &str, item: &str) {
        let u = self.intern_user(user);
        let i = self.intern_item(item);
        self.likes.push((u, i));
    }

    /// Validates and assembles the dataset.
    ///
    /// Duplicate edges and likes are dropped and counted. Self-edges are
    /// dropped; a core user left with no neighbors is an error. Core users
    /// with zero likes are removed from the core set but stay in the user
    /// universe.
    pub fn finish(self) -> Result<(Dataset, LoadReport)> {
        let mut report = LoadReport::default();
        let n_users = self.users.len();

        let mut adjacency: BTreeMap<UserId, Vec<UserId>> = BTreeMap::new();
        for (c, n) in self.edges {
            let list = adjacency.entry(c).or_default();
            if c == n {
                report.self_loops += 1;
            } else {
                list.push(n);
            }
        }
        for (core, list) in adjacency.iter_mut() {
            let before = list.len();
            list.sort_unstable();
            list.dedup();
            report.duplicate_edges += before - list.len();
            if list.is_empty() {
                return Err(Error::NoNeighbors(self.users[core.index()].clone()));
            }
        }

        let (prefs, duplicate_likes) =
            PreferenceStore::from_pairs(n_users, self.items.len(), self.likes);
        report.duplicate_likes = duplicate_likes;

        adjacency.retain(|&core, _| {
            let keep = prefs.has_likes(core);
            if !keep {
                report.dropped_core_users += 1;
            }
            keep
        });
        if adjacency.is_empty() {
            return Err(Error::NoCoreUsers);
        }

        let graph = SocialGraph::new(adjacency)?;
        let dataset = Dataset::new(graph, prefs, self.users, self.items)?;
        Ok((dataset, report))
    }
}
