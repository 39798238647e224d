//! Synthetic ego-centric datasets with a tunable amount of planted locality.

use std::path::Path;

use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng as _;

use super::{read_dataset, write_likes, write_social, Dataset, DatasetBuilder};
use crate::error::{Error, Result};
use crate::seed;

/// Parameters for [`generate_synthetic`].
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticConfig {
    pub n_core: usize,
    pub n_fringe: usize,
    pub n_items: usize,
    pub likes_per_user: usize,
    /// Friend set size per core user, capped at `n_fringe`.
    pub friends_per_core: usize,
    /// Probability that a like is copied from a friend.
    pub alpha: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            n_core: 200,
            n_fringe: 4800,
            n_items: 20_000,
            likes_per_user: 20,
            friends_per_core: 25,
            alpha: 0.8,
            seed: 1,
        }
    }
}

impl SyntheticConfig {
    fn validate(&self) -> Result<()> {
        if self.n_core == 0
            || self.n_fringe == 0
            || self.n_items == 0
            || self.likes_per_user == 0
            || self.friends_per_core == 0
        {
            return Err(Error::InvalidParameter(
                "synthetic counts must be positive".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha must lie in [0, 1], got {}",
                self.alpha
            )));
        }
        if self.likes_per_user > self.n_items {
            return Err(Error::Infeasible(format!(
                "likes_per_user ({}) exceeds n_items ({})",
                self.likes_per_user, self.n_items
            )));
        }
        Ok(())
    }
}

const COPY_ATTEMPTS: usize = 16;

/// Generates a dataset where each core user befriends a random subset of the
/// fringe and likes diffuse along friend links.
///
/// Likes are handed out in rounds; in each round every user, in a freshly
/// shuffled order, gains one like. With probability `alpha` the like copies a
/// random existing like of a random friend (friendship is taken in both
/// directions here, so fringe users also copy from the cores that list
/// them). Otherwise, or when no copy is possible, a uniformly random new
/// item is liked.
///
/// The result is canonical: writing it with [`write_social`] /
/// [`write_likes`] and loading the files back yields an equal dataset.
pub fn generate_synthetic(config: &SyntheticConfig) -> Result<Dataset> {
    config.validate()?;
    let mut rng = seed::rng(config.seed);
    let n_users = config.n_core + config.n_fringe;
    let n_friends = config.friends_per_core.min(config.n_fringe);

    let mut core_friends: Vec<Vec<usize>> = Vec::with_capacity(config.n_core);
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); n_users];
    for c in 0..config.n_core {
        let mut friends: Vec<usize> = sample(&mut rng, config.n_fringe, n_friends)
            .into_iter()
            .map(|f| config.n_core + f)
            .collect();
        friends.sort_unstable();
        for &f in &friends {
            adjacency[c].push(f);
            adjacency[f].push(c);
        }
        core_friends.push(friends);
    }

    let mut likes: Vec<Vec<usize>> = vec![Vec::with_capacity(config.likes_per_user); n_users];
    let mut order: Vec<usize> = (0..n_users).collect();
    for _ in 0..config.likes_per_user {
        order.shuffle(&mut rng);
        for &u in &order {
            let copied = if rng.gen_bool(config.alpha) {
                copy_from_friend(&mut rng, &adjacency[u], &likes, &likes[u])
            } else {
                None
            };
            let item = copied.unwrap_or_else(|| loop {
                let i = rng.gen_range(0..config.n_items);
                if !likes[u].contains(&i) {
                    break i;
                }
            });
            likes[u].push(item);
        }
    }

    let user_name = |u: usize| {
        if u < config.n_core {
            format!("c{u}")
        } else {
            format!("f{}", u - config.n_core)
        }
    };
    let mut builder = DatasetBuilder::new();
    for (c, friends) in core_friends.iter().enumerate() {
        for &f in friends {
            builder.add_edge(&user_name(c), &user_name(f));
        }
    }
    for (u, items) in likes.iter().enumerate() {
        for &i in items {
            builder.add_like(&user_name(u), &format!("i{i}"));
        }
    }
    let (raw, _) = builder.finish()?;
    canonicalize(&raw)
}

fn copy_from_friend(
    rng: &mut seed::Rng,
    friends: &[usize],
    likes: &[Vec<usize>],
    own: &[usize],
) -> Option<usize> {
    if friends.is_empty() {
        return None;
    }
    for _ in 0..COPY_ATTEMPTS {
        let f = friends[rng.gen_range(0..friends.len())];
        let theirs = &likes[f];
        if theirs.is_empty() {
            continue;
        }
        let item = theirs[rng.gen_range(0..theirs.len())];
        if !own.contains(&item) {
            return Some(item);
        }
    }
    None
}

/// Round-trips a dataset through its file representation so internal ids
/// match what a reload of the written files would assign.
fn canonicalize(d: &Dataset) -> Result<Dataset> {
    let mut social = Vec::new();
    let mut likes = Vec::new();
    write_social(d, &mut social).map_err(|e| Error::io("<memory>", e))?;
    write_likes(d, &mut likes).map_err(|e| Error::io("<memory>", e))?;
    read_dataset(
        social.as_slice(),
        Path::new("<social>"),
        likes.as_slice(),
        Path::new("<likes>"),
    )
    .map(|(d, _)| d)
}
