"""End-to-end tests for the ``mlpa`` command line."""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import pytest

from mlpa_design.cli import (
    EXIT_INFEASIBLE,
    EXIT_INVALID,
    EXIT_IO,
    EXIT_OK,
    EXIT_USAGE,
    main,
    run,
)
from mlpa_design.config import ENV_CACHE_DIR, ENV_WORKERS
from mlpa_design.records import sweep_header

# ── Helpers ──────────────────────────────────────────────────────────────────


@pytest.fixture(autouse=True)
def _isolated(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> None:
    """Run every command from an empty directory with no MLPA_* environment."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv(ENV_CACHE_DIR, raising=False)
    monkeypatch.delenv(ENV_WORKERS, raising=False)


def _cache(tmp_path: Path) -> list[str]:
    return ["--cache-dir", str(tmp_path / "cache")]


def _csv_rows(path: Path) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(path.read_text(encoding="utf-8"))))


# ── design ───────────────────────────────────────────────────────────────────


class TestDesign:
    def test_unique_optimum_as_json(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        argv = ["design", "--elements", "23", "--levels", "3", "--format", "json"]
        code = run(argv + _cache(tmp_path))
        assert code == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert payload["query"]["objective"] == "unique"
        assert payload["results"][0]["spacing"] == [11, 5, 9]
        assert payload["results"][0]["l_ug"] == 155

    def test_joint_with_all_ties(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        code = run(
            ["design", "--elements", "14", "--levels", "4", "--objective", "joint",
             "--all-ties", "--format", "json", "--no-cache"]
        )
        assert code == EXIT_OK
        results = json.loads(capsys.readouterr().out)["results"]
        assert [r["spacing"] for r in results] == [[3, 2, 7, 5], [7, 2, 3, 5], [3, 7, 2, 5]]
        assert all(r["is_joint"] for r in results)

    def test_empty_joint_set_reports_fallbacks(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        argv = ["design", "--elements", "23", "--levels", "3", "--objective", "joint"]
        code = run(argv + ["--format", "csv"] + _cache(tmp_path))
        assert code == EXIT_OK
        captured = capsys.readouterr()
        assert "No configuration maximizes both lag counts" in captured.err
        rows = list(csv.DictReader(io.StringIO(captured.out)))
        assert [r["objective"] for r in rows] == ["unique", "consecutive"]

    def test_wavelength_adds_physical_positions(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        argv = ["design", "--elements", "8", "--levels", "3", "--format", "json"]
        code = run(argv + ["--wavelength", "2", "--no-cache"])
        assert code == EXIT_OK
        result = json.loads(capsys.readouterr().out)["results"][0]
        assert result["physical_positions"] == [float(p) for p in result["positions"]]

    def test_table_is_default(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        code = run(["design", "--elements", "8", "--levels", "3", "--no-cache"])
        assert code == EXIT_OK
        header = capsys.readouterr().out.splitlines()[0].split()
        assert header[:3] == ["N", "L", "objective"]

    def test_infeasible_exits_2(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        code = run(["design", "--elements", "9", "--levels", "3"] + _cache(tmp_path))
        assert code == EXIT_INFEASIBLE
        assert "no pairwise-coprime decomposition for N=9, L=3" in capsys.readouterr().err

    def test_out_of_domain_query(self, tmp_path: Path) -> None:
        assert run(["design", "--elements", "0", "--levels", "3", "--no-cache"]) == EXIT_USAGE

    def test_bad_workers(self, tmp_path: Path) -> None:
        argv = ["design", "--elements", "8", "--levels", "3", "--workers", "0"]
        assert run(argv + _cache(tmp_path)) == EXIT_USAGE

    def test_verbose_statistics_and_cache_hits(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        argv = ["design", "--elements", "14", "--levels", "4", "--verbose"] + _cache(tmp_path)
        run(argv)
        first = capsys.readouterr().err
        assert "N=14 L=4: 1 partition(s), 9 derangement(s) examined, 5 rejected" in first
        assert "0 hit(s), 1 miss(es)" in first
        run(argv)
        assert "1 hit(s), 0 miss(es)" in capsys.readouterr().err

    def test_output_is_identical_across_workers_and_cache(
        self, tmp_path: Path, capsys: pytest.CaptureFixture[str]
    ) -> None:
        query = ["design", "--elements", "18", "--levels", "4", "--objective", "joint",
                 "--all-ties", "--format", "csv"]
        cached = query + ["--verbose"] + _cache(tmp_path)
        outputs = {}
        for label, argv in [
            ("fresh", query + ["--no-cache"]),
            ("workers", query + ["--no-cache", "--workers", "3"]),
            ("miss", cached),
            ("hit", cached),
        ]:
            assert run(argv) == EXIT_OK
            captured = capsys.readouterr()
            outputs[label] = captured.out
            if label == "hit":
                assert "1 hit(s), 0 miss(es)" in captured.err
        assert len(set(outputs.values())) == 1
        rows = list(csv.DictReader(io.StringIO(outputs["fresh"])))
        assert [r["spacing"] for r in rows] == ["3;2;11;5", "3;11;2;5", "11;2;3;5"]


# ── Usage errors ─────────────────────────────────────────────────────────────


class TestUsage:
    def test_unknown_option_exits_64(self) -> None:
        with pytest.raises(SystemExit) as excinfo:
            run(["design", "--elements", "8", "--levels", "3", "--bogus"])
        assert excinfo.value.code == EXIT_USAGE

    def test_missing_command_exits_64(self) -> None:
        with pytest.raises(SystemExit) as excinfo:
            run([])
        assert excinfo.value.code == EXIT_USAGE

    def test_non_integer_positions_exit_64(self) -> None:
        with pytest.raises(SystemExit) as excinfo:
            run(["analyze", "--positions", "0,a,3"])
        assert excinfo.value.code == EXIT_USAGE

    def test_main_exits_with_handler_code(self) -> None:
        with pytest.raises(SystemExit) as excinfo:
            main(["validate", "--partition", "2,3,5"])
        assert excinfo.value.code == EXIT_OK


# ── analyze ──────────────────────────────────────────────────────────────────


class TestAnalyze:
    def test_json_report(self, capsys: pytest.CaptureFixture[str]) -> None:
        code = run(["analyze", "--positions", "0,2,3,4,5,6,9,12", "--format", "json"])
        assert code == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        assert (payload["l_ug"], payload["l_cg"], payload["v_delta"]) == (23, 21, 4)
        assert payload["hole_count"] == 1

    @pytest.mark.parametrize(
        ("positions", "expected"),
        [
            ("0,1,2,3", (7, 7, 3, 0)),
            ("0,2", (3, 1, 0, 1)),
            ("0,2,3,4,6,9", (17, 15, 2, 1)),
        ],
    )
    def test_metrics(
        self,
        capsys: pytest.CaptureFixture[str],
        positions: str,
        expected: tuple[int, int, int, int],
    ) -> None:
        assert run(["analyze", "--positions", positions, "--format", "json"]) == EXIT_OK
        payload = json.loads(capsys.readouterr().out)
        metrics = (payload["l_ug"], payload["l_cg"], payload["v_delta"], payload["hole_count"])
        assert metrics == expected

    def test_negative_position(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(["analyze", "--positions", "0,-1,3"]) == EXIT_USAGE
        assert "nonnegative" in capsys.readouterr().err


# ── sweep / compare / alternatives ───────────────────────────────────────────


class TestSweep:
    def test_writes_two_rows_per_n(self, tmp_path: Path) -> None:
        out = tmp_path / "sweep.csv"
        argv = ["sweep", "--levels", "3", "--min", "8", "--max", "12", "--out", str(out)]
        assert run(argv + _cache(tmp_path)) == EXIT_OK
        rows = _csv_rows(out)
        assert len(rows) == 10
        assert [r["status"] for r in rows if r["N"] in ("9", "11")] == ["infeasible"] * 4
        assert list((tmp_path / "cache").rglob("N12_L3.yaml"))

    def test_empty_range_writes_header(self, tmp_path: Path) -> None:
        out = tmp_path / "sweep.csv"
        argv = ["sweep", "--levels", "4", "--min", "20", "--max", "10", "--out", str(out)]
        assert run(argv + ["--no-cache"]) == EXIT_OK
        assert out.read_text(encoding="utf-8").splitlines() == [",".join(sweep_header(4))]

    def test_unwritable_output_exits_66(self, tmp_path: Path) -> None:
        out = tmp_path / "missing" / "sweep.csv"
        argv = ["sweep", "--levels", "3", "--min", "8", "--max", "8", "--out", str(out)]
        assert run(argv + ["--no-cache"]) == EXIT_IO

    def test_rejects_non_positive_min(self, tmp_path: Path) -> None:
        argv = ["sweep", "--levels", "3", "--min", "0", "--max", "8", "--no-cache"]
        assert run(argv + ["--out", str(tmp_path / "s.csv")]) == EXIT_USAGE


class TestCompare:
    def test_all_families(self, tmp_path: Path) -> None:
        out = tmp_path / "compare.csv"
        code = run(
            ["compare", "--levels-list", "3", "--min", "8", "--max", "12",
             "--out", str(out), "--no-cache"]
        )
        assert code == EXIT_OK
        rows = _csv_rows(out)
        families = ("mlpa", "nested", "coprime")
        by_family = {f: [r for r in rows if r["family"] == f] for f in families}
        assert len(by_family["mlpa"]) == 6
        assert len(by_family["nested"]) == 5
        assert [r["N"] for r in by_family["coprime"]] == ["8", "9", "10", "12"]
        assert {r["v_delta"] for r in by_family["coprime"]} == {"2"}
        nested_8 = next(r for r in by_family["nested"] if r["N"] == "8")
        assert (nested_8["params"], nested_8["v_delta"]) == ("4;4", "4")

    def test_unknown_family(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]) -> None:
        code = run(
            ["compare", "--min", "8", "--max", "9", "--families", "mlpa,ula",
             "--out", str(tmp_path / "c.csv"), "--no-cache"]
        )
        assert code == EXIT_USAGE
        assert "Unknown family: ula" in capsys.readouterr().err


class TestAlternatives:
    def test_lists_both_maximizers(self, capsys: pytest.CaptureFixture[str]) -> None:
        argv = ["alternatives", "--levels", "3", "--min", "23", "--max", "23", "--format", "csv"]
        assert run(argv + ["--no-cache"]) == EXIT_OK
        rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
        assert {(r["spacing"], r["lags"]) for r in rows} == {
            ("17;3;5", "l_cg"),
            ("11;5;9", "l_ug"),
        }


# ── validate ─────────────────────────────────────────────────────────────────


class TestValidate:
    def test_valid(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(["validate", "--partition", "2,3,5", "--spacing", "5,2,3"]) == EXIT_OK
        assert "✓ valid configuration" in capsys.readouterr().out

    def test_non_coprime(self, capsys: pytest.CaptureFixture[str]) -> None:
        assert run(["validate", "--partition", "2,4,5"]) == EXIT_INVALID
        err = capsys.readouterr().err
        assert "1 violation(s)" in err
        assert "[Coprime] gcd(2,4)=2" in err

    def test_coincident_spacing(self, capsys: pytest.CaptureFixture[str]) -> None:
        code = run(["validate", "--partition", "2,3,5,7", "--spacing", "5,7,2,3"])
        assert code == EXIT_INVALID
        assert "[Coincident]" in capsys.readouterr().err
