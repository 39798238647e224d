//! Python bindings for the `egorec` crate.
//!
//! Users and items cross the boundary by their original string ids.

use std::collections::BTreeMap;

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

use ::egorec::dataset::{self, SyntheticConfig};
use ::egorec::locality::{self, ItemNull, NullModel};
use ::egorec::recommender::{self, EvalConfig, RecommendationList};
use ::egorec::similarity::{self, NeighborPool, PoolKind};
use ::egorec::{ItemId, UserId};

fn to_py(e: ::egorec::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_pool(name: &str, seed: u64) -> PyResult<NeighborPool> {
    Ok(match name {
        "friends" => NeighborPool::Friends,
        "non-friends" | "non_friends" => NeighborPool::NonFriends,
        "full" | "full_network" => NeighborPool::FullNetwork,
        "random" => NeighborPool::Random {
            from: PoolKind::FullNetwork,
            seed,
        },
        "random-friends" => NeighborPool::Random {
            from: PoolKind::Friends,
            seed,
        },
        "random-non-friends" => NeighborPool::Random {
            from: PoolKind::NonFriends,
            seed,
        },
        other => return Err(PyValueError::new_err(format!("unknown pool {other:?}"))),
    })
}

fn parse_null(name: &str) -> PyResult<NullModel> {
    Ok(match name {
        "uniform" => NullModel::ItemUniform,
        "degree-preserving" | "degree_preserving" => NullModel::ItemDegreePreserving,
        "friend-rewire" | "friend_rewire" => NullModel::FriendRewire,
        other => {
            return Err(PyValueError::new_err(format!(
                "unknown null model {other:?}"
            )))
        }
    })
}

/// An ego-centric social graph with unary likes.
#[pyclass(name = "Dataset", frozen)]
struct PyDataset {
    inner: dataset::Dataset,
}

impl PyDataset {
    fn user(&self, name: &str) -> PyResult<UserId> {
        self.inner
            .find_user(name)
            .ok_or_else(|| PyKeyError::new_err(format!("unknown user {name:?}")))
    }

    fn items(&self, names: &[String]) -> PyResult<Vec<ItemId>> {
        let mut ids = names
            .iter()
            .map(|n| {
                self.inner
                    .find_item(n)
                    .ok_or_else(|| PyKeyError::new_err(format!("unknown item {n:?}")))
            })
            .collect::<PyResult<Vec<_>>>()?;
        ids.sort_unstable();
        ids.dedup();
        Ok(ids)
    }

    fn item_names(&self, ids: &[ItemId]) -> Vec<String> {
        ids.iter()
            .map(|&i| self.inner.item_name(i).to_owned())
            .collect()
    }

    fn rec_to_py(&self, rec: &RecommendationList) -> Vec<(String, f64)> {
        rec.entries
            .iter()
            .map(|&(i, s)| (self.inner.item_name(i).to_owned(), s))
            .collect()
    }
}

#[pymethods]
impl PyDataset {
    #[staticmethod]
    fn load(social: &str, likes: &str) -> PyResult<Self> {
        let (inner, _) = dataset::load_dataset(social, likes).map_err(to_py)?;
        Ok(PyDataset { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (n_core, n_fringe, n_items, likes_per_user, alpha, seed, friends_per_core=25))]
    fn synthetic(
        n_core: usize,
        n_fringe: usize,
        n_items: usize,
        likes_per_user: usize,
        alpha: f64,
        seed: u64,
        friends_per_core: usize,
    ) -> PyResult<Self> {
        let config = SyntheticConfig {
            n_core,
            n_fringe,
            n_items,
            likes_per_user,
            friends_per_core,
            alpha,
            seed,
        };
        let inner = dataset::generate_synthetic(&config).map_err(to_py)?;
        Ok(PyDataset { inner })
    }

    #[getter]
    fn n_users(&self) -> usize {
        self.inner.n_users()
    }

    #[getter]
    fn n_items(&self) -> usize {
        self.inner.n_items()
    }

    #[getter]
    fn n_likes(&self) -> usize {
        self.inner.prefs().n_likes()
    }

    fn core_users(&self) -> Vec<String> {
        self.inner
            .core_users()
            .iter()
            .map(|&u| self.inner.user_name(u).to_owned())
            .collect()
    }

    fn friends(&self, user: &str) -> PyResult<Vec<String>> {
        let u = self.user(user)?;
        Ok(self
            .inner
            .friends(u)
            .iter()
            .map(|&v| self.inner.user_name(v).to_owned())
            .collect())
    }

    fn likes(&self, user: &str) -> PyResult<Vec<String>> {
        let u = self.user(user)?;
        Ok(self.item_names(self.inner.likes(u)))
    }

    /// Overview statistics as a flat dict.
    fn stats(&self) -> BTreeMap<String, f64> {
        let s = dataset::dataset_stats(&self.inner);
        let mut m = BTreeMap::new();
        m.insert("total_users".into(), s.total_users as f64);
        m.insert("total_core_users".into(), s.total_core_users as f64);
        m.insert("total_items".into(), s.total_items as f64);
        m.insert("total_likes".into(), s.total_likes as f64);
        for (name, v) in [
            ("friends_per_user", s.friends_per_user),
            ("likes_per_user", s.likes_per_user),
            ("likes_per_item", s.likes_per_item),
        ] {
            m.insert(format!("{name}_mean"), v.mean);
            m.insert(format!("{name}_std"), v.std);
        }
        m
    }

    fn popularity_cdf(&self, grid: Vec<f64>) -> Vec<(f64, f64)> {
        dataset::popularity_cdf(&self.inner, &grid)
    }

    /// Top-k neighbors of a core user; `basis` defaults to the user's likes.
    #[pyo3(signature = (user, pool, k, basis=None, seed=0))]
    fn top_k_neighbors(
        &self,
        user: &str,
        pool: &str,
        k: usize,
        basis: Option<Vec<String>>,
        seed: u64,
    ) -> PyResult<Vec<(String, f64)>> {
        let u = self.user(user)?;
        let basis = match basis {
            Some(b) => self.items(&b)?,
            None => self.inner.likes(u).to_vec(),
        };
        let top = similarity::top_k_neighbors(&self.inner, u, parse_pool(pool, seed)?, k, &basis)
            .map_err(to_py)?;
        Ok(top
            .into_iter()
            .map(|n| (self.inner.user_name(n.user).to_owned(), n.similarity))
            .collect())
    }

    #[pyo3(signature = (user, train, pool, k, list_len=10, seed=0))]
    fn recommend(
        &self,
        user: &str,
        train: Vec<String>,
        pool: &str,
        k: usize,
        list_len: usize,
        seed: u64,
    ) -> PyResult<Vec<(String, f64)>> {
        let u = self.user(user)?;
        let train = self.items(&train)?;
        let rec =
            recommender::recommend(&self.inner, u, &train, parse_pool(pool, seed)?, k, list_len)
                .map_err(to_py)?;
        Ok(self.rec_to_py(&rec))
    }

    /// Returns `(train, test)` item name lists.
    #[pyo3(signature = (user, ratio=0.7, seed=0))]
    fn split_likes(
        &self,
        user: &str,
        ratio: f64,
        seed: u64,
    ) -> PyResult<(Vec<String>, Vec<String>)> {
        let u = self.user(user)?;
        let s = recommender::split_likes(&self.inner, u, ratio, seed).map_err(to_py)?;
        Ok((self.item_names(&s.train), self.item_names(&s.test)))
    }

    #[pyo3(signature = (pool, k, n_splits=10, ratio=0.7, list_len=10, seed=1))]
    fn evaluate(
        &self,
        pool: &str,
        k: usize,
        n_splits: usize,
        ratio: f64,
        list_len: usize,
        seed: u64,
    ) -> PyResult<BTreeMap<String, f64>> {
        let config = EvalConfig {
            pool: parse_pool(pool, seed)?,
            k,
            list_len,
            n_splits,
            ratio,
            seed,
        };
        let r = recommender::evaluate(&self.inner, &config)
            .map_err(to_py)?
            .result;
        let mut m = BTreeMap::new();
        m.insert("mean_ndcg".into(), r.mean_ndcg);
        m.insert("std_ndcg".into(), r.std_ndcg);
        m.insert("n_users".into(), r.n_users as f64);
        m.insert("n_skipped".into(), r.n_skipped as f64);
        m.insert("n_splits".into(), r.n_splits as f64);
        Ok(m)
    }

    fn avg_topk_similarity(&self, k: usize, pool: &str) -> PyResult<f64> {
        let kind = parse_pool(pool, 0)?.base();
        similarity::avg_topk_similarity(&self.inner, k, kind).map_err(to_py)
    }

    #[pyo3(signature = (repeats=10, seed=1))]
    fn friend_vs_random_similarity(&self, repeats: usize, seed: u64) -> PyResult<(f64, f64)> {
        let s =
            similarity::friend_vs_random_similarity(&self.inner, repeats, seed).map_err(to_py)?;
        Ok((s.friends_avg, s.random_avg))
    }

    fn ego_sparsity(&self) -> PyResult<f64> {
        locality::ego_sparsity(&self.inner).map_err(to_py)
    }

    fn network_sparsity(&self) -> PyResult<f64> {
        locality::network_sparsity(&self.inner).map_err(to_py)
    }

    fn uncovered_ego(&self) -> PyResult<f64> {
        locality::uncovered_ego(&self.inner).map_err(to_py)
    }

    fn item_ego_counts(&self) -> BTreeMap<String, u32> {
        locality::item_ego_counts(&self.inner)
            .into_iter()
            .enumerate()
            .map(|(i, c)| (self.inner.item_name(ItemId(i as u32)).to_owned(), c))
            .collect()
    }

    #[pyo3(signature = (null="degree-preserving", replicates=10, seed=1))]
    fn coverage_ratio(&self, null: &str, replicates: usize, seed: u64) -> PyResult<f64> {
        locality::coverage_ratio(&self.inner, parse_null(null)?, replicates, seed)
            .map(|c| c.value)
            .map_err(to_py)
    }

    /// A randomized copy under the given null model.
    fn randomized(&self, null: &str, seed: u64) -> PyResult<Self> {
        let inner = locality::null_network(&self.inner, parse_null(null)?, seed).map_err(to_py)?;
        Ok(PyDataset { inner })
    }

    #[pyo3(signature = (null="degree-preserving", replicates=10, seed=1))]
    fn locality_report(
        &self,
        null: &str,
        replicates: usize,
        seed: u64,
    ) -> PyResult<BTreeMap<String, f64>> {
        let item_null = match parse_null(null)? {
            NullModel::ItemUniform => ItemNull::Uniform,
            _ => ItemNull::DegreePreserving,
        };
        let l =
            locality::locality_report(&self.inner, item_null, replicates, seed).map_err(to_py)?;
        let mut m = BTreeMap::new();
        m.insert("friends_similarity".into(), l.friends_similarity);
        m.insert("random_similarity".into(), l.random_similarity);
        m.insert("ego_sparsity".into(), l.ego_sparsity);
        m.insert("network_sparsity".into(), l.network_sparsity);
        m.insert("uncovered_ego".into(), l.uncovered_ego);
        m.insert("random_item_ego".into(), l.random_item_ego.value);
        m.insert("random_friend_ego".into(), l.random_friend_ego.value);
        Ok(m)
    }

    fn write(&self, social: &str, likes: &str) -> PyResult<()> {
        let s = std::fs::File::create(social)?;
        dataset::write_social(&self.inner, std::io::BufWriter::new(s))?;
        let l = std::fs::File::create(likes)?;
        dataset::write_likes(&self.inner, std::io::BufWriter::new(l))?;
        Ok(())
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset(users={}, core_users={}, items={}, likes={})",
            self.inner.n_users(),
            self.inner.core_users().len(),
            self.inner.n_items(),
            self.inner.prefs().n_likes()
        )
    }
}

/// Jaccard similarity of two collections of hashable string ids.
#[pyfunction]
fn jaccard(a: Vec<String>, b: Vec<String>) -> f64 {
    let mut a = a;
    let mut b = b;
    a.sort_unstable();
    a.dedup();
    b.sort_unstable();
    b.dedup();
    similarity::jaccard(&a, &b)
}

/// NDCG of a ranked list of ids against a test set; `None` for an empty test set.
#[pyfunction]
#[pyo3(signature = (ranked, test, depth=10))]
fn ndcg(ranked: Vec<String>, test: Vec<String>, depth: usize) -> Option<f64> {
    let mut names: Vec<&String> = ranked.iter().chain(test.iter()).collect();
    names.sort_unstable();
    names.dedup();
    let id = |s: &String| ItemId(names.binary_search(&s).unwrap() as u32);
    let ranked: Vec<ItemId> = ranked.iter().map(id).collect();
    let test: Vec<ItemId> = test.iter().map(id).collect();
    recommender::ndcg_at(ranked, &test, depth)
}

#[pymodule]
fn egorec(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDataset>()?;
    m.add_function(wrap_pyfunction!(jaccard, m)?)?;
    m.add_function(wrap_pyfunction!(ndcg, m)?)?;
    Ok(())
}
