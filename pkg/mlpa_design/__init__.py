"""MLPA design toolkit.

Provides the ``mlpa`` CLI plus a library to enumerate, score and rank
multi-level prime array (MLPA) configurations by the lag metrics of their
difference coarray.

The importable package is ``mlpa_design``; the distribution name is
``mlpa-design``.
"""
