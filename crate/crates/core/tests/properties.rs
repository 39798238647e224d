mod common;

use common::random_instance;
use egorec::dataset::{dataset_stats, popularity_cdf};
use egorec::locality::{
    ego_networks, item_ego_counts, randomize_friends, randomize_items, uncovered_ego, ItemNull,
};
use egorec::recommender::{recommend, split_likes};
use egorec::similarity::{
    avg_topk_similarity, friend_vs_random_similarity, neighbor_order, top_k_neighbors,
    NeighborPool, PoolKind,
};
use egorec::{ItemId, UserId};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn store_indexes_are_transposes(seed in any::<u64>()) {
        let d = random_instance(seed, 60, 80);
        let p = d.prefs();
        for u in 0..d.n_users() as u32 {
            for &i in p.likes(UserId(u)) {
                prop_assert!(p.likers(i).contains(&UserId(u)));
            }
        }
        for i in 0..d.n_items() as u32 {
            for &u in p.likers(ItemId(i)) {
                prop_assert!(p.likes(u).contains(&ItemId(i)));
            }
        }
    }

    #[test]
    fn stats_agree_with_recount(seed in any::<u64>()) {
        let d = random_instance(seed, 60, 80);
        let s = dataset_stats(&d);
        let mut likes = 0usize;
        let mut items = std::collections::BTreeSet::new();
        for u in 0..d.n_users() as u32 {
            for &i in d.likes(UserId(u)) {
                likes += 1;
                items.insert(i);
            }
        }
        prop_assert_eq!(s.total_likes, likes);
        prop_assert_eq!(s.total_items, items.len());
        prop_assert_eq!(s.total_users, d.n_users());
        prop_assert!((s.likes_per_user.mean * s.total_users as f64 - likes as f64).abs() < 1e-6);
        prop_assert!((s.likes_per_item.mean * s.total_items as f64 - likes as f64).abs() < 1e-6);
    }

    #[test]
    fn popularity_cdf_monotone_ending_at_one(seed in any::<u64>()) {
        let d = random_instance(seed, 60, 80);
        let grid: Vec<f64> = (0..=20).map(|p| p as f64 * 5.0).collect();
        let cdf = popularity_cdf(&d, &grid);
        prop_assert!(cdf.windows(2).all(|w| w[0].1 <= w[1].1));
        prop_assert_eq!(cdf.last().unwrap().1, 1.0);
    }

    #[test]
    fn top_k_sorted_unique_and_sized(seed in any::<u64>(), k in 0usize..40) {
        let d = random_instance(seed, 80, 100);
        for &u in d.core_users() {
            for pool in [PoolKind::Friends, PoolKind::NonFriends, PoolKind::FullNetwork] {
                let top = top_k_neighbors(&d, u, pool.into(), k, d.likes(u)).unwrap();
                let size = egorec::similarity::pool_members(&d, u, pool).len();
                prop_assert_eq!(top.len(), k.min(size));
                prop_assert!(top.windows(2).all(|w| neighbor_order(&w[0], &w[1]).is_lt()));
                prop_assert!(top.iter().all(|n| (0.0..=1.0).contains(&n.similarity) && n.user != u));
            }
        }
    }

    #[test]
    fn avg_topk_similarity_non_increasing_in_k(seed in any::<u64>()) {
        let d = random_instance(seed, 60, 60);
        for pool in [PoolKind::Friends, PoolKind::NonFriends] {
            let values: Vec<f64> = (1..12)
                .map(|k| avg_topk_similarity(&d, k, pool).unwrap())
                .collect();
            prop_assert!(values.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{:?}", values);
        }
    }

    #[test]
    fn recommendations_skip_train_and_duplicates(seed in any::<u64>(), k in 1usize..30) {
        let d = random_instance(seed, 60, 80);
        for &u in d.core_users() {
            let Ok(split) = split_likes(&d, u, 0.7, seed) else { continue };
            prop_assert_eq!(split.train.len() + split.test.len(), d.likes(u).len());
            for pool in [NeighborPool::Friends, NeighborPool::NonFriends, NeighborPool::FullNetwork,
                         NeighborPool::Random { from: PoolKind::FullNetwork, seed }] {
                let rec = recommend(&d, u, &split.train, pool, k, 10).unwrap();
                prop_assert!(rec.len() <= 10);
                let mut items: Vec<ItemId> = rec.items().collect();
                prop_assert!(items.iter().all(|i| !split.train.contains(i)));
                items.sort();
                items.dedup();
                prop_assert_eq!(items.len(), rec.len());
                prop_assert!(rec.entries.iter().all(|&(_, s)| s >= 0.0));
            }
        }
    }

    #[test]
    fn null_models_preserve_their_contracts(seed in any::<u64>()) {
        let d = random_instance(seed, 60, 80);
        let dp = randomize_items(&d, ItemNull::DegreePreserving, seed).unwrap();
        prop_assert_eq!(dp.prefs().user_degrees(), d.prefs().user_degrees());
        prop_assert_eq!(dp.prefs().item_degrees(), d.prefs().item_degrees());
        prop_assert_eq!(dp.graph(), d.graph());
        let un = randomize_items(&d, ItemNull::Uniform, seed).unwrap();
        prop_assert_eq!(un.prefs().user_degrees(), d.prefs().user_degrees());
        let (fr, _) = randomize_friends(&d, seed).unwrap();
        prop_assert_eq!(fr.prefs(), d.prefs());
        for &c in d.core_users() {
            prop_assert_eq!(fr.friends(c).len(), d.friends(c).len());
            prop_assert!(!fr.friends(c).contains(&c));
        }
        prop_assert_eq!(randomize_friends(&d, seed).unwrap().0, fr);
        prop_assert_eq!(randomize_items(&d, ItemNull::DegreePreserving, seed).unwrap(), dp);
    }

    #[test]
    fn ego_counts_bounded_and_uncovered_in_range(seed in any::<u64>()) {
        let d = random_instance(seed, 60, 80);
        let n_egos = ego_networks(&d).len() as u32;
        prop_assert!(item_ego_counts(&d).iter().all(|&c| c <= n_egos));
        let u = uncovered_ego(&d).unwrap();
        prop_assert!((0.0..=100.0).contains(&u));
    }

    #[test]
    fn friend_vs_random_deterministic(seed in any::<u64>()) {
        let d = random_instance(seed, 40, 40);
        let a = friend_vs_random_similarity(&d, 3, seed).unwrap();
        let b = friend_vs_random_similarity(&d, 3, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}
