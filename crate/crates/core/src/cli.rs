//! The `egorec` command line: `stats`, `similarity`, `evaluate`, `locality`
//! and `synth`.
//!
//! Every command writes one report (to `--out` or stdout) and returns a
//! one-line summary. All randomness derives from `--seed`, and the report
//! bytes do not depend on `--workers`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dataset::{
    dataset_stats, generate_synthetic, load_dataset, popularity_cdf, write_likes, write_social,
    Dataset, MeanStd, SyntheticConfig,
};
use crate::error::{Error, Result};
use crate::locality::{locality_report, CoverageRatio, ItemNull, DEFAULT_REPLICATES};
use crate::recommender::{evaluate, EvalConfig, DEFAULT_LIST_LEN};
use crate::report::{real, Format, Report};
use crate::seed;
use crate::similarity::{avg_topk_similarity, friend_vs_random_similarity, NeighborPool, PoolKind};

#[derive(Debug, Clone, Parser)]
#[command(
    name = "egorec",
    version,
    about = "Ego-network recommendation and preference-locality toolkit"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Social file: `core<TAB>neighbor` per line.
    #[arg(long, global = true)]
    pub social: Option<PathBuf>,
    /// Likes file: `user<TAB>item` per line.
    #[arg(long, global = true)]
    pub likes: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Report destination; stdout when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Records)]
    pub format: Format,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Prefix the report with a generation-time comment line.
    #[arg(long, global = true)]
    pub timestamp: bool,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Dataset overview and item popularity distribution.
    Stats {
        /// Popularity percentiles for the cumulative like share series.
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "1,5,10,20,30,40,50,60,70,80,90,100"
        )]
        cdf_grid: Vec<f64>,
    },
    /// Top-k friend/non-friend similarity and friend vs random similarity.
    Similarity {
        #[arg(long, value_delimiter = ',', default_value = "10,20,30,40,50")]
        k: Vec<usize>,
        /// Random non-friend resamples.
        #[arg(long, default_value_t = 10)]
        repeats: usize,
    },
    /// k-nn recommendation quality (NDCG) per neighbor pool.
    Evaluate {
        #[arg(
            long,
            value_enum,
            value_delimiter = ',',
            default_value = "friends,non-friends,full"
        )]
        pool: Vec<PoolArg>,
        #[arg(long, value_delimiter = ',', default_value = "10,20,30,40,50")]
        k: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        splits: usize,
        /// Train share of each user's likes.
        #[arg(long, default_value_t = 0.7)]
        ratio: f64,
        #[arg(long, default_value_t = DEFAULT_LIST_LEN)]
        list_len: usize,
    },
    /// Similarity, sparsity and ego coverage metrics with null models.
    Locality {
        /// Null model for the item coverage ratio. `friend-rewire` keeps the
        /// default degree-preserving item null; the friend ratio always uses
        /// rewiring.
        #[arg(long = "null", value_enum, default_value_t = NullArg::DegreePreserving)]
        null_model: NullArg,
        #[arg(long, default_value_t = DEFAULT_REPLICATES)]
        replicates: usize,
    },
    /// Generate a synthetic dataset with planted locality into --social/--likes.
    Synth {
        #[arg(long, default_value_t = 200)]
        cores: usize,
        #[arg(long, default_value_t = 4800)]
        fringe: usize,
        #[arg(long, default_value_t = 20_000)]
        items: usize,
        #[arg(long, default_value_t = 20)]
        likes_per_user: usize,
        /// Friends per core user.
        #[arg(long, default_value_t = 25)]
        friends: usize,
        #[arg(long, default_value_t = 0.8)]
        alpha: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PoolArg {
    Friends,
    NonFriends,
    Full,
    /// k users sampled from the full network.
    Random,
    RandomFriends,
    RandomNonFriends,
}

impl PoolArg {
    fn to_pool(self, master_seed: u64) -> NeighborPool {
        let random = |from| NeighborPool::Random {
            from,
            seed: seed::derive(master_seed, &[seed::TAG_RANDOM_POOL]),
        };
        match self {
            PoolArg::Friends => NeighborPool::Friends,
            PoolArg::NonFriends => NeighborPool::NonFriends,
            PoolArg::Full => NeighborPool::FullNetwork,
            PoolArg::Random => random(PoolKind::FullNetwork),
            PoolArg::RandomFriends => random(PoolKind::Friends),
            PoolArg::RandomNonFriends => random(PoolKind::NonFriends),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NullArg {
    Uniform,
    DegreePreserving,
    FriendRewire,
}

impl RunConfig {
    /// Checks ranges and input paths before any work starts.
    pub fn validate(&self) -> Result<()> {
        let invalid = |m: &str| Err(Error::InvalidParameter(m.to_owned()));
        if self.common.workers == Some(0) {
            return invalid("--workers must be positive");
        }
        match &self.command {
            Command::Stats { .. } => {}
            Command::Similarity { k, repeats } => {
                if k.is_empty() || k.contains(&0) || *repeats == 0 {
                    return invalid("--k values and --repeats must be positive");
                }
            }
            Command::Evaluate {
                pool,
                k,
                splits,
                ratio,
                list_len,
            } => {
                if pool.is_empty() || k.is_empty() || k.contains(&0) {
                    return invalid("--pool and --k need at least one value; k must be positive");
                }
                if *splits == 0 || *list_len == 0 {
                    return invalid("--splits and --list-len must be positive");
                }
                if !(*ratio > 0.0 && *ratio < 1.0) {
                    return invalid("--ratio must lie in (0, 1)");
                }
            }
            Command::Locality { replicates, .. } => {
                if *replicates == 0 {
                    return invalid("--replicates must be positive");
                }
            }
            Command::Synth { .. } => {
                let (social, likes) = self.paths()?;
                for p in [social, likes] {
                    if let Some(parent) = p.parent().filter(|p| !p.as_os_str().is_empty()) {
                        if !parent.is_dir() {
                            return Err(Error::InvalidParameter(format!(
                                "output directory {} does not exist",
                                parent.display()
                            )));
                        }
                    }
                }
                return Ok(());
            }
        }
        let (social, likes) = self.paths()?;
        for p in [social, likes] {
            if !p.is_file() {
                return Err(Error::io(
                    p,
                    std::io::Error::new(std::io::ErrorKind::NotFound, "no such file"),
                ));
            }
        }
        Ok(())
    }

    fn paths(&self) -> Result<(&Path, &Path)> {
        match (&self.common.social, &self.common.likes) {
            (Some(s), Some(l)) => Ok((s, l)),
            _ => Err(Error::InvalidParameter(
                "--social and --likes are required".into(),
            )),
        }
    }
}

/// Executes the configured command and returns a one-line summary.
pub fn run(config: &RunConfig) -> Result<String> {
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.common.workers {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
    pool.install(|| run_inner(config))
}

fn run_inner(config: &RunConfig) -> Result<String> {
    let common = &config.common;
    if let Command::Synth {
        cores,
        fringe,
        items,
        likes_per_user,
        friends,
        alpha,
    } = config.command
    {
        let synth = SyntheticConfig {
            n_core: cores,
            n_fringe: fringe,
            n_items: items,
            likes_per_user,
            friends_per_core: friends,
            alpha,
            seed: common.seed,
        };
        let d = generate_synthetic(&synth)?;
        let (social, likes) = config.paths()?;
        write_file(social, |w| write_social(&d, w))?;
        write_file(likes, |w| write_likes(&d, w))?;
        return Ok(format!(
            "synth: {} users, {} core users, {} items, {} likes written to {} and {}",
            d.n_users(),
            d.core_users().len(),
            d.n_items(),
            d.prefs().n_likes(),
            social.display(),
            likes.display()
        ));
    }

    let (social, likes) = config.paths()?;
    let (d, load) = load_dataset(social, likes)?;
    let load_note = format!(
        "{} duplicate edges, {} duplicate likes, {} self-loops, {} zero-like core users dropped",
        load.duplicate_edges, load.duplicate_likes, load.self_loops, load.dropped_core_users
    );

    let (report, summary) = match &config.command {
        Command::Stats { cdf_grid } => stats_report(&d, cdf_grid),
        Command::Similarity { k, repeats } => similarity_report(&d, k, *repeats, common.seed)?,
        Command::Evaluate {
            pool,
            k,
            splits,
            ratio,
            list_len,
        } => {
            let pools: Vec<NeighborPool> = pool.iter().map(|p| p.to_pool(common.seed)).collect();
            evaluate_report(&d, &pools, k, *splits, *ratio, *list_len, common.seed)?
        }
        Command::Locality {
            null_model,
            replicates,
        } => {
            let item_null = match null_model {
                NullArg::Uniform => ItemNull::Uniform,
                NullArg::DegreePreserving | NullArg::FriendRewire => ItemNull::DegreePreserving,
            };
            locality_cli_report(&d, item_null, *replicates, common.seed)?
        }
        Command::Synth { .. } => unreachable!("handled above"),
    };

    let mut text = String::new();
    if common.timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        text.push_str(&format!("# generated-at {secs}\n"));
    }
    text.push_str(&report.render(common.format));
    match &common.out {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path, e))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Error::io("<stdout>", e))?;
        }
    }
    Ok(format!("{summary} ({load_note})"))
}

fn write_file(
    path: &Path,
    f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>,
) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

fn push_mean_std(r: &mut Report, name: &str, v: MeanStd) {
    r.push([format!("{name}_mean"), real(v.mean)]);
    r.push([format!("{name}_std"), real(v.std)]);
}

pub fn stats_report(d: &Dataset, cdf_grid: &[f64]) -> (Report, String) {
    let s = dataset_stats(d);
    let mut r = Report::new(["statistic", "value"]);
    r.push(["total_users".to_owned(), s.total_users.to_string()]);
    r.push([
        "total_core_users".to_owned(),
        s.total_core_users.to_string(),
    ]);
    push_mean_std(&mut r, "friends_per_user", s.friends_per_user);
    r.push(["total_items".to_owned(), s.total_items.to_string()]);
    r.push(["total_likes".to_owned(), s.total_likes.to_string()]);
    push_mean_std(&mut r, "likes_per_user", s.likes_per_user);
    push_mean_std(&mut r, "likes_per_item", s.likes_per_item);
    for (p, share) in popularity_cdf(d, cdf_grid) {
        r.push([format!("popularity_cdf_p{p}"), real(share)]);
    }
    let summary = format!(
        "stats: {} users, {} core users, {} items, {} likes",
        s.total_users, s.total_core_users, s.total_items, s.total_likes
    );
    (r, summary)
}

pub fn similarity_report(
    d: &Dataset,
    ks: &[usize],
    repeats: usize,
    seed: u64,
) -> Result<(Report, String)> {
    let mut r = Report::new(["measure", "pool", "k", "value"]);
    for &k in ks {
        for (kind, label) in [
            (PoolKind::Friends, "friends"),
            (PoolKind::NonFriends, "non-friends"),
        ] {
            let v = avg_topk_similarity(d, k, kind)?;
            r.push([
                "topk_similarity".to_owned(),
                label.to_owned(),
                k.to_string(),
                real(v),
            ]);
        }
    }
    let s = friend_vs_random_similarity(d, repeats, seed)?;
    r.push(
        ["set_similarity", "friends", "all"]
            .map(str::to_owned)
            .into_iter()
            .chain([real(s.friends_avg)]),
    );
    r.push(
        ["set_similarity", "random-non-friends", "all"]
            .map(str::to_owned)
            .into_iter()
            .chain([real(s.random_avg)]),
    );
    let summary = format!(
        "similarity: friends {:.4} vs random non-friends {:.4} over {} core users",
        s.friends_avg,
        s.random_avg,
        d.core_users().len()
    );
    Ok((r, summary))
}

pub fn evaluate_report(
    d: &Dataset,
    pools: &[NeighborPool],
    ks: &[usize],
    n_splits: usize,
    ratio: f64,
    list_len: usize,
    seed: u64,
) -> Result<(Report, String)> {
    let mut r = Report::new([
        "condition",
        "k",
        "split",
        "n_users",
        "n_skipped",
        "mean_ndcg",
        "std_ndcg",
    ]);
    let mut best: Option<(NeighborPool, usize, f64)> = None;
    for &pool in pools {
        for &k in ks {
            let config = EvalConfig {
                pool,
                k,
                list_len,
                n_splits,
                ratio,
                seed,
            };
            let eval = evaluate(d, &config)?;
            for s in &eval.splits {
                r.push([
                    pool.label().to_owned(),
                    k.to_string(),
                    s.split.to_string(),
                    s.n_users.to_string(),
                    s.n_skipped.to_string(),
                    real(s.mean_ndcg),
                    real(s.std_ndcg),
                ]);
            }
            let a = &eval.result;
            r.push([
                pool.label().to_owned(),
                k.to_string(),
                "aggregate".to_owned(),
                a.n_users.to_string(),
                a.n_skipped.to_string(),
                real(a.mean_ndcg),
                real(a.std_ndcg),
            ]);
            if best.is_none_or(|(_, _, m)| a.mean_ndcg > m) {
                best = Some((pool, k, a.mean_ndcg));
            }
        }
    }
    let summary = match best {
        Some((pool, k, m)) => {
            format!("evaluate: best mean NDCG {m:.4} ({pool}, k={k}) over {n_splits} splits")
        }
        None => "evaluate: nothing to do".to_owned(),
    };
    Ok((r, summary))
}

fn push_ratio(r: &mut Report, metric: &str, c: &CoverageRatio) {
    let label = c.null_model.label();
    for (i, v) in c.per_replicate.iter().enumerate() {
        r.push([metric.to_owned(), label.to_owned(), i.to_string(), real(*v)]);
    }
    r.push([
        metric.to_owned(),
        label.to_owned(),
        "aggregate".to_owned(),
        real(c.value),
    ]);
    r.push([
        format!("{metric}_excluded_items"),
        label.to_owned(),
        "aggregate".to_owned(),
        c.excluded_items.to_string(),
    ]);
}

pub fn locality_cli_report(
    d: &Dataset,
    item_null: ItemNull,
    replicates: usize,
    seed: u64,
) -> Result<(Report, String)> {
    let l = locality_report(d, item_null, replicates, seed)?;
    let mut r = Report::new(["metric", "null_model", "replicate", "value"]);
    let plain = |r: &mut Report, metric: &str, v: f64| {
        r.push([
            metric.to_owned(),
            "none".to_owned(),
            "aggregate".to_owned(),
            real(v),
        ]);
    };
    plain(&mut r, "friends_similarity", l.friends_similarity);
    plain(&mut r, "random_similarity", l.random_similarity);
    plain(&mut r, "ego_sparsity_pct", l.ego_sparsity);
    plain(&mut r, "network_sparsity_pct", l.network_sparsity);
    plain(&mut r, "uncovered_ego_pct", l.uncovered_ego);
    push_ratio(&mut r, "random_item_ego", &l.random_item_ego);
    push_ratio(&mut r, "random_friend_ego", &l.random_friend_ego);
    let summary = format!(
        "locality: uncovered ego {:.2}%, item/ego {:.3}, friend/ego {:.3} ({} replicates)",
        l.uncovered_ego, l.random_item_ego.value, l.random_friend_ego.value, l.replicates
    );
    Ok((r, summary))
}
