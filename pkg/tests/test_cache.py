"""Tests for the on-disk design space cache."""

from __future__ import annotations

from pathlib import Path
from unittest import mock

import pytest
import yaml

from mlpa_design import cache as cache_module
from mlpa_design.cache import ResultCache
from mlpa_design.errors import CacheError
from mlpa_design.search import score_design_space


class TestFetch:
    def test_miss_then_hit(self, tmp_path: Path) -> None:
        cache = ResultCache(tmp_path, version="1.0.0")
        first = cache.fetch(14, 4)
        second = cache.fetch(14, 4)
        assert first == second == score_design_space(14, 4)
        assert (cache.hits, cache.misses) == (1, 1)
        assert cache.path_for(14, 4) == tmp_path / "1.0.0" / "N14_L4.yaml"
        assert cache.path_for(14, 4).is_file()

    def test_hit_does_not_recompute(self, tmp_path: Path) -> None:
        ResultCache(tmp_path, version="1.0.0").fetch(8, 3)
        with mock.patch.object(cache_module, "score_design_space") as compute:
            space = ResultCache(tmp_path, version="1.0.0").fetch(8, 3)
        compute.assert_not_called()
        assert [c.spacing for c in space.candidates] == [(3, 5, 2), (5, 2, 3)]

    def test_version_bump_invalidates(self, tmp_path: Path) -> None:
        ResultCache(tmp_path, version="1.0.0").fetch(8, 3)
        newer = ResultCache(tmp_path, version="1.1.0")
        newer.fetch(8, 3)
        assert newer.misses == 1

    def test_stale_version_inside_entry_is_a_miss(self, tmp_path: Path) -> None:
        cache = ResultCache(tmp_path, version="1.0.0")
        path = cache.store(score_design_space(8, 3))
        data = yaml.safe_load(path.read_text(encoding="utf-8"))
        data["version"] = "0.9.0"
        path.write_text(yaml.safe_dump(data), encoding="utf-8")
        assert cache.load(8, 3) is None

    def test_infeasible_space_round_trips(self, tmp_path: Path) -> None:
        cache = ResultCache(tmp_path, version="1.0.0")
        cache.fetch(9, 3)
        space = cache.fetch(9, 3)
        assert not space.feasible
        assert cache.hits == 1


class TestCorruptEntries:
    def test_corrupt_entry_warns_and_recomputes(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        cache = ResultCache(tmp_path, version="1.0.0")
        path = cache.path_for(8, 3)
        path.parent.mkdir(parents=True)
        path.write_text("candidates: [unterminated\n", encoding="utf-8")

        space = cache.fetch(8, 3)

        assert space == score_design_space(8, 3)
        err = capsys.readouterr().err
        assert "WARNING: Corrupt cache entry for N=8, L=3" in err
        assert cache.load(8, 3) == space

    def test_load_raises_on_malformed_entry(self, tmp_path: Path) -> None:
        cache = ResultCache(tmp_path, version="1.0.0")
        path = cache.path_for(8, 3)
        path.parent.mkdir(parents=True)
        path.write_text("version: 1.0.0\nN: 8\nL: 3\ncandidates: 5\n", encoding="utf-8")
        with pytest.raises(CacheError):
            cache.load(8, 3)

    def test_entry_for_other_query_is_rejected(self, tmp_path: Path) -> None:
        cache = ResultCache(tmp_path, version="1.0.0")
        text = cache.store(score_design_space(8, 3)).read_text(encoding="utf-8")
        other = cache.path_for(10, 3)
        other.write_text(text, encoding="utf-8")
        with pytest.raises(CacheError, match="entry is for N=8"):
            cache.load(10, 3)
