use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use super::{Dataset, DatasetBuilder};
use crate::error::{Error, Result};

/// Cleanup counts collected while loading.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub duplicate_edges: usize,
    pub duplicate_likes: usize,
    pub self_loops: usize,
    pub dropped_core_users: usize,
}

/// Loads a social file (`core<TAB>neighbor`) and a likes file
/// (`user<TAB>item`). Lines starting with `#` and blank lines are skipped.
pub fn load_dataset(
    social_path: impl AsRef<Path>,
    likes_path: impl AsRef<Path>,
) -> Result<(Dataset, LoadReport)> {
    let social_path = social_path.as_ref();
    let likes_path = likes_path.as_ref();
    let social = File::open(social_path).map_err(|e| Error::io(social_path, e))?;
    let likes = File::open(likes_path).map_err(|e| Error::io(likes_path, e))?;
    read_dataset(
        BufReader::new(social),
        social_path,
        BufReader::new(likes),
        likes_path,
    )
}

/// Reader-based form of [`load_dataset`]; the paths are only used in
/// diagnostics.
pub fn read_dataset(
    social: impl BufRead,
    social_name: &Path,
    likes: impl BufRead,
    likes_name: &Path,
) -> Result<(Dataset, LoadReport)> {
    let mut builder = DatasetBuilder::new();
    for_each_pair(social, social_name, |a, b| builder.add_edge(a, b))?;
    for_each_pair(likes, likes_name, |a, b| builder.add_like(a, b))?;
    builder.finish()
}

fn for_each_pair(reader: impl BufRead, name: &Path, mut f: impl FnMut(&str, &str)) -> Result<()> {
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse {
            path: name.to_path_buf(),
            line: line_no,
            message: e.to_string(),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split('\t').map(str::trim);
        match (fields.next(), fields.next(), fields.next()) {
            (Some(a), Some(b), None)
                if !a.is_empty()
                    && !b.is_empty()
                    && !a.contains(char::is_whitespace)
                    && !b.contains(char::is_whitespace) =>
            {
                f(a, b)
            }
            _ => {
                return Err(Error::Parse {
                    path: name.to_path_buf(),
                    line: line_no,
                    message: format!("expected two tab-separated ids, got {trimmed:?}"),
                })
            }
        }
    }
    Ok(())
}

/// Writes the social graph with original ids, cores and neighbors in
/// ascending internal id order. Reloading the output reproduces the same
/// internal ids.
pub fn write_social(d: &Dataset, mut out: impl Write) -> std::io::Result<()> {
    for (core, nbrs) in d.graph().iter() {
        for &n in nbrs {
            writeln!(out, "{}\t{}", d.user_name(core), d.user_name(n))?;
        }
    }
    Ok(())
}

/// Writes all likes with original ids in user-major order.
pub fn write_likes(d: &Dataset, mut out: impl Write) -> std::io::Result<()> {
    for (u, i) in d.prefs().pairs() {
        writeln!(out, "{}\t{}", d.user_name(u), d.item_name(i))?;
    }
    Ok(())
}
