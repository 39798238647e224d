use super::Dataset;

/// Mean and population standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanStd {
    pub mean: f64,
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let values: Vec<f64> = values.into_iter().collect();
        if values.is_empty() {
            return MeanStd {
                mean: 0.0,
                std: 0.0,
            };
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        MeanStd {
            mean,
            std: var.sqrt(),
        }
    }
}

/// Dataset overview counts.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetStats {
    pub total_users: usize,
    pub total_core_users: usize,
    pub total_items: usize,
    pub total_likes: usize,
    /// Over core users only.
    pub friends_per_user: MeanStd,
    /// Over every user, including users with no likes.
    pub likes_per_user: MeanStd,
    /// Over items with at least one like.
    pub likes_per_item: MeanStd,
}

pub fn dataset_stats(d: &Dataset) -> DatasetStats {
    let prefs = d.prefs();
    let liked_items: Vec<f64> = prefs
        .item_degrees()
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| c as f64)
        .collect();
    DatasetStats {
        total_users: d.n_users(),
        total_core_users: d.core_users().len(),
        total_items: liked_items.len(),
        total_likes: prefs.n_likes(),
        friends_per_user: MeanStd::of(d.graph().iter().map(|(_, n)| n.len() as f64)),
        likes_per_user: MeanStd::of(prefs.user_degrees().into_iter().map(|c| c as f64)),
        likes_per_item: MeanStd::of(liked_items),
    }
}

/// Share of all likes held by the most popular `p`% of items, for each `p`
/// in `grid` (percent, 0..=100).
///
/// Items are ranked by like count descending; the top `round(p/100 * n)`
/// items are counted. Returns an empty vector for an empty grid or a
/// dataset without likes.
pub fn popularity_cdf(d: &Dataset, grid: &[f64]) -> Vec<(f64, f64)> {
    let mut counts: Vec<usize> = d
        .prefs()
        .item_degrees()
        .into_iter()
        .filter(|&c| c > 0)
        .collect();
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Vec::new();
    }
    counts.sort_unstable_by(|a, b| b.cmp(a));
    let mut prefix = Vec::with_capacity(counts.len() + 1);
    prefix.push(0usize);
    for c in &counts {
        prefix.push(prefix.last().unwrap() + c);
    }
    let n = counts.len() as f64;
    grid.iter()
        .map(|&p| {
            let p_clamped = p.clamp(0.0, 100.0);
            let top = ((p_clamped / 100.0) * n).round() as usize;
            (p, prefix[top.min(counts.len())] as f64 / total as f64)
        })
        .collect()
}
