"""Smoke test for the egorec Python extension.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`,
then run `python python/smoke_test.py`.
"""

import math
import os
import tempfile

import egorec


def main():
    assert egorec.jaccard(["A", "B"], ["B", "C"]) == 1 / 3
    assert egorec.ndcg(["x", "b", "c"], ["a", "b", "c"]) is not None
    l3 = math.log2(3)
    expected = (1 + 1 / l3) / (2 + 1 / l3)
    assert abs(egorec.ndcg(["x", "b", "c"], ["a", "b", "c"]) - expected) < 1e-12
    assert egorec.ndcg(["a"], []) is None

    ds = egorec.Dataset.synthetic(40, 460, 800, 15, 0.8, 3, friends_per_core=15)
    print(ds)
    stats = ds.stats()
    assert stats["total_users"] == 500
    assert stats["total_core_users"] == 40

    core = ds.core_users()[0]
    top = ds.top_k_neighbors(core, "friends", 5)
    assert len(top) == 5
    assert all(a[1] >= b[1] for a, b in zip(top, top[1:]))

    train, test = ds.split_likes(core, 0.7, 1)
    assert len(train) + len(test) == 15
    recs = ds.recommend(core, train, "friends", 10)
    assert len(recs) <= 10 and not set(name for name, _ in recs) & set(train)

    friends = ds.evaluate("friends", 20, n_splits=3)
    non_friends = ds.evaluate("non-friends", 20, n_splits=3)
    print("ndcg friends", friends["mean_ndcg"], "non-friends", non_friends["mean_ndcg"])
    assert friends["mean_ndcg"] > non_friends["mean_ndcg"]

    report = ds.locality_report("degree-preserving", 3, 1)
    print(report)
    assert 0 <= report["uncovered_ego"] <= 100
    assert report["random_item_ego"] > 0

    shuffled = ds.randomized("degree-preserving", 5)
    assert shuffled.n_likes == ds.n_likes

    with tempfile.TemporaryDirectory() as tmp:
        social = os.path.join(tmp, "social.tsv")
        likes = os.path.join(tmp, "likes.tsv")
        ds.write(social, likes)
        again = egorec.Dataset.load(social, likes)
        assert again.stats() == stats

    print("smoke test ok")


if __name__ == "__main__":
    main()
