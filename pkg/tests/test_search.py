import pytest

from mdlie.search import (
    SearchConfig,
    codim1_abelian_shape,
    lattice_search,
    nonabelian_2dim_derived_shape,
    theta_grid_shape,
)


def test_nonabelian_two_dim_derived_has_no_survivors():
    r = lattice_search(nonabelian_2dim_derived_shape(), SearchConfig(bound=1))
    assert r.survivors == 0 and not r.partial
    assert r.hits == []


def test_theta_grid_boundary():
    r = lattice_search(theta_grid_shape(), SearchConfig(md_bound=1, md_samples=0))
    assert not r.partial
    assert r.total == 125
    for hit in r.hits:
        for theta, mu, lam in hit.points:
            if hit.decomposable:
                continue
            assert (hit.kind == "proved") == (mu != 0 and theta < 0)


def test_codim1_abelian_all_proved():
    r = lattice_search(codim1_abelian_shape(4, "upper"), SearchConfig(bound=1))
    assert r.survivors > 0
    assert {h.kind for h in r.hits} == {"proved"}


def test_search_is_deterministic():
    cfg = SearchConfig(bound=1)
    a = lattice_search(codim1_abelian_shape(4, "upper"), cfg)
    b = lattice_search(codim1_abelian_shape(4, "upper"), cfg)
    assert a.summary() == b.summary()
    assert [(h.fingerprint, h.kind, h.points) for h in a.hits] == [(h.fingerprint, h.kind, h.points) for h in b.hits]


def test_search_workers_match_serial():
    shape = theta_grid_shape()
    a = lattice_search(shape, SearchConfig(workers=1))
    b = lattice_search(shape, SearchConfig(workers=2))
    assert a.summary() == b.summary()
    assert [(h.fingerprint, h.kind, h.points) for h in a.hits] == [(h.fingerprint, h.kind, h.points) for h in b.hits]


def test_dedup_never_merges_distinct_fingerprints():
    r = lattice_search(codim1_abelian_shape(4, "upper"), SearchConfig(bound=1))
    keys = [(h.fingerprint, h.kind, h.decomposable) for h in r.hits]
    assert len(keys) == len(set(keys))
    from mdlie.algebra import fingerprint

    for h in r.hits:
        assert fingerprint(h.table) == h.fingerprint
        assert sum(1 for _ in h.points) >= 1
    assert sum(len(h.points) for h in r.hits) == r.survivors


def test_budget_gives_partial_result():
    r = lattice_search(codim1_abelian_shape(4, "full"), SearchConfig(bound=1, budget=50))
    assert r.partial
    assert r.visited <= 50 + 1


@pytest.mark.parametrize("pattern", ["diagonal", "upper"])
def test_summary_counts_add_up(pattern):
    r = lattice_search(codim1_abelian_shape(4, pattern), SearchConfig(bound=1, run_md=False))
    leaves = r.survivors + r.wrong_shape
    assert leaves <= r.total
    assert all(h.kind is None for h in r.hits)
