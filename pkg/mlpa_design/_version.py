"""Version helper – single source of truth via ``importlib.metadata``.

The version string also keys the on-disk result cache, so a release
invalidates every cached search.

Usage::

    from mlpa_design._version import __version__
"""

from __future__ import annotations

from importlib.metadata import PackageNotFoundError, version

try:
    __version__: str = version("mlpa-design")
except PackageNotFoundError:  # pragma: no cover – editable / dev installs
    __version__ = "0.0.0-dev"
