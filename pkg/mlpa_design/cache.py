"""On-disk memoisation of scored design spaces.

Entries live at ``<cache_dir>/<version>/N<N>_L<L>.yaml``.  Each entry
records the package version that wrote it; a mismatch is a miss, so a
release invalidates every entry.  Unreadable or malformed entries are
reported on stderr and recomputed.
"""

from __future__ import annotations

import sys
from pathlib import Path

import yaml

from mlpa_design._version import __version__
from mlpa_design.errors import CacheError
from mlpa_design.search import CandidateScore, DesignSpace, score_design_space

_SCORE_FIELDS = ("unique", "consecutive", "unit_spacing", "aperture", "holes")


class ResultCache:
    """Version-keyed YAML cache of :class:`DesignSpace` objects."""

    def __init__(self, root: Path, *, version: str = __version__) -> None:
        self.root = Path(root)
        self.version = version
        self.hits = 0
        self.misses = 0

    def path_for(self, total: int, levels: int) -> Path:
        return self.root / self.version / f"N{total}_L{levels}.yaml"

    # ── Encoding ─────────────────────────────────────────────────────────

    def _encode(self, space: DesignSpace) -> dict:
        return {
            "version": self.version,
            "N": space.total_elements,
            "L": space.levels,
            "partitions": space.partitions,
            "examined": space.examined,
            "rejected": space.rejected,
            "candidates": [
                {
                    "counts": list(c.counts),
                    "spacing": list(c.spacing),
                    **{name: getattr(c, name) for name in _SCORE_FIELDS},
                }
                for c in space.candidates
            ],
        }

    def _decode(self, data: object, total: int, levels: int) -> DesignSpace | None:
        if not isinstance(data, dict):
            raise CacheError("entry is not a mapping")
        if data.get("version") != self.version:
            return None
        if (data.get("N"), data.get("L")) != (total, levels):
            raise CacheError(f"entry is for N={data.get('N')}, L={data.get('L')}")
        try:
            candidates = tuple(
                CandidateScore(
                    counts=tuple(int(v) for v in item["counts"]),
                    spacing=tuple(int(v) for v in item["spacing"]),
                    **{name: int(item[name]) for name in _SCORE_FIELDS},
                )
                for item in data["candidates"]
            )
            return DesignSpace(
                total_elements=total,
                levels=levels,
                partitions=int(data["partitions"]),
                examined=int(data["examined"]),
                rejected=int(data["rejected"]),
                candidates=candidates,
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise CacheError(f"malformed entry: {exc!r}") from exc

    # ── Public API ───────────────────────────────────────────────────────

    def load(self, total: int, levels: int) -> DesignSpace | None:
        """Return the cached space, or *None* on a miss.

        Raises
        ------
        CacheError
            The entry exists but cannot be read or decoded.
        """
        path = self.path_for(total, levels)
        if not path.is_file():
            return None
        try:
            data = yaml.safe_load(path.read_text(encoding="utf-8"))
        except (OSError, yaml.YAMLError) as exc:
            raise CacheError(f"cannot read {path}: {exc}") from exc
        return self._decode(data, total, levels)

    def store(self, space: DesignSpace) -> Path:
        path = self.path_for(space.total_elements, space.levels)
        path.parent.mkdir(parents=True, exist_ok=True)
        text = yaml.safe_dump(self._encode(space), sort_keys=True, default_flow_style=None)
        path.write_text(text, encoding="utf-8")
        return path

    def fetch(self, total: int, levels: int, *, workers: int = 1) -> DesignSpace:
        """Load (N, L) from the cache, computing and storing it on a miss.

        A corrupt entry prints a warning to stderr and is overwritten.
        """
        try:
            space = self.load(total, levels)
        except CacheError as exc:
            print(
                f"WARNING: Corrupt cache entry for N={total}, L={levels} ({exc}); recomputing.",
                file=sys.stderr,
            )
            space = None
        if space is not None:
            self.hits += 1
            return space
        self.misses += 1
        space = score_design_space(total, levels, workers=workers)
        try:
            self.store(space)
        except OSError as exc:
            print(f"WARNING: Could not write cache entry: {exc}", file=sys.stderr)
        return space
