import json

import pytest

import ybh.pipeline as pipeline
from ybh.cache import (
    Cache,
    CacheCorruption,
    decomposition_from_json,
    decomposition_to_json,
    domain_tag,
    matrix_from_json,
    matrix_to_json,
)
from ybh.complex import Final, SparseMatrix, TopCapped, boundary
from ybh.homology import homology_direct
from ybh.pipeline import JobConfig, artifact_key, cached_boundary, compute_homology, run_job
from ybh.ring import T, ZERO, IntPoly
from ybh.smith import snf_integer, snf_polyQ


def test_matrix_roundtrip():
    A = boundary(Final(3), 4)
    assert matrix_from_json(matrix_to_json(A)) == A
    B = A.evaluate(4)
    assert matrix_from_json(matrix_to_json(B), symbolic=False) == B


def test_decomposition_roundtrip():
    A = boundary(Final(3), 4)
    for dec in (snf_polyQ(A), snf_integer(A.evaluate(4), at=4),
                snf_polyQ(SparseMatrix.from_dense([[IntPoly([2]), T]], zero=ZERO))):
        back = decomposition_from_json(json.loads(json.dumps(decomposition_to_json(dec))))
        assert back.diagonal == dec.diagonal
        assert back.domain == dec.domain and back.rank == dec.rank
        assert back.certified_over_Zt == dec.certified_over_Zt


def test_layout(tmp_path):
    cache = Cache(tmp_path)
    compute_homology(Final(3), 3, None, cache)
    names = sorted(p.name for p in (tmp_path / "m3u2l1").iterdir())
    assert names == ["basis-n3.json", "basis-n4.json", "boundary-n3.json", "boundary-n4.json",
                     "homology-n3-Zt.json", "snf-n3-Zt.json", "snf-n4-Zt.json"]
    assert domain_tag(4) == "t4" and domain_tag(None) == "Zt"


def test_default_dir_from_env(cache_dir):
    assert Cache().root == cache_dir


def test_warm_cache_does_no_work(tmp_path, monkeypatch):
    cache = Cache(tmp_path)
    h1, keys = compute_homology(Final(3), 4, None, cache)
    assert "m3u2l1/homology-n4-Zt" in keys

    def boom(*a, **k):
        raise AssertionError("recomputed")

    monkeypatch.setattr(pipeline, "snf_polyQ", boom)
    monkeypatch.setattr(pipeline, "boundary", boom)
    h2, _ = compute_homology(Final(3), 4, None, cache)
    assert h1 == h2


def test_cached_specialization_matches_direct(tmp_path):
    cache = Cache(tmp_path)
    for spec, n in ((Final(3), 3), (Final(4), 4), (TopCapped(3, 1), 4)):
        got, _ = compute_homology(spec, n, 4, cache)
        assert got == homology_direct(spec, n, at=4)
        sym, _ = compute_homology(spec, n, None, cache)
        assert sym == homology_direct(spec, n)


def test_checksum_mismatch(tmp_path):
    cache = Cache(tmp_path)
    compute_homology(Final(3), 3, None, cache)
    path = cache.path(Final(3), "homology-n3-Zt")
    doc = json.loads(path.read_text())
    doc["payload"]["free_rank"] = 7
    path.write_text(json.dumps(doc))
    with pytest.raises(CacheCorruption, match="checksum"):
        compute_homology(Final(3), 3, None, cache)


def test_config_mismatch(tmp_path):
    cache = Cache(tmp_path)
    compute_homology(Final(3), 3, None, cache)
    src = cache.path(Final(3), "snf-n4-Zt")
    dst = cache.path(Final(3), "snf-n3-Zt")
    dst.write_text(src.read_text())
    cache.path(Final(3), "homology-n3-Zt").unlink()
    with pytest.raises(CacheCorruption, match="produced by"):
        compute_homology(Final(3), 3, None, cache)


def test_unreadable_json(tmp_path):
    cache = Cache(tmp_path)
    path = cache.path(Final(2), "boundary-n2")
    path.parent.mkdir(parents=True)
    path.write_text("{not json")
    with pytest.raises(CacheCorruption):
        cached_boundary(Final(2), 2, cache)


def test_gc(tmp_path):
    cache = Cache(tmp_path)
    compute_homology(Final(3), 3, None, cache)
    good = cache.path(Final(3), "snf-n3-Zt")
    bad = cache.path(Final(3), "snf-n4-Zt")
    bad.write_text(bad.read_text().replace('"rank": 10', '"rank": 11'))
    tmp = good.parent / ".tmp-abc.json"
    tmp.write_text("{}")
    removed = cache.gc()
    assert sorted(removed) == sorted([str(bad), str(tmp)])
    assert good.exists() and not bad.exists()
    assert Cache(tmp_path / "missing").gc() == []


def test_job_config():
    cfg = JobConfig("usetop:m=3,u=2,l=1", 3)
    assert cfg.spec == "final:m=3"
    assert cfg.complex == Final(3)
    assert cfg.domain == "symbolic"
    assert JobConfig("final:m=3", 3, at=4).domain == "t=4"
    with pytest.raises(ValueError):
        JobConfig("final:m=3", 0)
    with pytest.raises(ValueError):
        JobConfig("final:m=3", 3, fmt="xml")
    with pytest.raises(ValueError):
        JobConfig("final:m=3", 3, threads=0)
    with pytest.raises(ValueError):
        JobConfig("final:m=0", 3)


def test_run_job(tmp_path):
    h = run_job(JobConfig("final:m=3", 3, cache_dir=str(tmp_path)))
    assert h.triple() == (1, 8, 2)
    assert artifact_key(Final(3), "snf", 4, 4) == "m3u2l1/snf-n4-t4"
    assert artifact_key(Final(3), "basis", 4) == "m3u2l1/basis-n4"


def test_empty_degree(tmp_path):
    h, _ = compute_homology(Final(5), 2, None, Cache(tmp_path))
    assert h.is_zero()
