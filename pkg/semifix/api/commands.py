"""
Command handlers

Each handler returns a process exit code: 0 on success, 1 on a validation
or usage error, 2 when a verification finds a mismatch.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, TextIO, Tuple, Union

from semifix.adapter import (
    multiplicities_from_config,
    params_echo,
    params_from_config,
    report_to_file,
    table_row_to_dict,
)
from semifix.api.schemas import ConfigFile, ReportFile
from semifix.classifier import classify
from semifix.errors import SemifixError
from semifix.loop_table import DEFAULT_MNMAX, DEFAULT_NMAX, report_agrees, table_with_witnesses
from semifix.oracle.linsolve import SolverSettings
from semifix.oracle.realize import require_oracle_regime
from semifix.oracle.verify import FAIL, resolution_keys, verify
from semifix.storage.config import ConfigStorage, load_runtime_settings
from semifix.storage.reports import ReportStorage

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_MISMATCH = 2

JSON = "json"
TEXT = "text"

PathLike = Union[str, Path]


# --- Built-in self-test setups ---

def _selectors(*pairs: Tuple[str, int]) -> List[Dict[str, Any]]:
    return [{"vertex": vertex, "d": d} for vertex, d in pairs]


SELFTEST_CONFIGS: Dict[str, Dict[str, Any]] = {
    "cyclic-orthogonal-ve1": {
        "regime": "numberfield", "M": 3, "n": 1, "m": 3, "epsilon": 1, "sigma": "identity",
        "beta": {"zeta_exp": "0"}, "c": {"zeta_exp": "0"}, "xi": {"zeta_exp": "1/3"},
        "multiplicities": _selectors(("zeta(0)", 1), ("zeta(1/3)", 1), ("zeta(2/3)", 1)),
    },
    "swapped-pair-cc1": {
        "regime": "numberfield", "M": 2, "n": 1, "m": 2, "epsilon": 1, "sigma": "identity",
        "beta": {"zeta_exp": "0"}, "c": {"zeta_exp": "1/2"}, "xi": {"zeta_exp": "0"},
        "multiplicities": _selectors(("zeta(0)", 2), ("zeta(1/2)", 2)),
    },
    "symmetric-squares-ee1": {
        "regime": "numberfield", "M": 4, "n": 1, "m": 2, "epsilon": -1, "sigma": "identity",
        "beta": {"zeta_exp": "1/2"}, "c": {"zeta_exp": "0"}, "xi": {"zeta_exp": "1/2"},
        "multiplicities": _selectors(("zeta(1/4)", 1), ("zeta(3/4)", 1)),
    },
    "outer-gl-split": {
        "regime": "numberfield", "M": 1, "n": 2, "m": 2, "epsilon": 1, "sigma": "zeta_half",
        "presentation": "split",
        "beta": {"zeta_exp": "0"}, "c": {"zeta_exp": "0"}, "xi": {"zeta_exp": "0"},
        "multiplicities": _selectors(("zeta(0)", 2)),
    },
    "linear-diagonal": {
        "regime": "numberfield", "M": 3, "n": 1, "m": 3, "mode": "linear",
        "beta": {"zeta_exp": "0"}, "xi": {"zeta_exp": "1/3"},
        "multiplicities": _selectors(("zeta(0)", 1), ("zeta(1/3)", 1)),
    },
}

SELFTEST_BOUNDS = (2, 4)


# --- Helpers ---

def _emit(text: str, output: Optional[PathLike], out: Optional[TextIO]) -> None:
    if output is None:
        (out or sys.stdout).write(text)
        return
    path = Path(output)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {path}")


def _load_config(config_path: PathLike, storage: ConfigStorage) -> ConfigFile:
    return storage.parse_config(storage.load_config(config_path))


def _fail(command: str, e: Exception) -> int:
    if isinstance(e, (SemifixError, FileNotFoundError)):
        logger.error(f"{command} failed: {type(e).__name__}: {e}")
    else:
        logger.exception(f"{command} failed: {type(e).__name__}: {e}")
    return EXIT_ERROR


def _range_text(entry) -> str:
    return str(entry.low) if entry.low == entry.high else f"{entry.low}..{entry.high}"


def format_report_text(report: ReportFile) -> str:
    """Plain-text rendering of a report"""
    lines = ["Parameters: " + ", ".join(f"{k}={v}" for k, v in report.params.items() if v is not None)]
    lines.append("Vertices:")
    for v in report.vertices:
        extra = f" star={v.star}" if v.star is not None else ""
        if v.sigma_c_fixed:
            extra += " sigma_c-fixed"
        lines.append(f"  {v.id}: b={v.b_value} f={v.residue_degree} d={v.multiplicity}{extra}")
    lines.append("Quiver:")
    lines.extend(f"  {line}" for line in report.quiver_text.splitlines())
    lines.append("Components:")
    for c in report.components:
        factors = ", ".join(f"{f.kind}({'/'.join(f.vertices)})" for f in c.factors)
        edges = ", ".join(f"{e.kind}({e.source}->{e.target})" for e in c.edge_spaces)
        lines.append(f"  {c.shape}: H [{factors}]  g(xi) [{edges}]")
        for flag in c.flags:
            lines.append(f"    flag: {flag}")
    if report.predicted_dims is not None:
        dims = report.predicted_dims
        lines.append(f"dim H = {_range_text(dims.dims.H)}, dim g(xi) = {_range_text(dims.dims.g_xi)} "
                     f"over {dims.over}")
        if dims.prime_field is not None:
            lines.append(f"over Q: dim H = {_range_text(dims.prime_field.H)}, "
                         f"dim g(xi) = {_range_text(dims.prime_field.g_xi)}")
    if report.loop_case is not None:
        status = "agrees" if report.loop_case["agrees"] else "DISAGREES"
        lines.append(f"Loop case {report.loop_case['key']} ({report.loop_case['shape']}): {status}")
    for warning in report.warnings:
        lines.append(f"warning: {warning}")
    if report.verification is not None:
        summary = report.verification.get("summary", {})
        status = "passed" if report.verification.get("passed") else "FAILED"
        lines.append(f"Verification {status}: {summary.get('checks', 0)} checks over "
                     f"{summary.get('trials', 0)} trials, {summary.get('failed', 0)} failed")
        for label, kind in sorted(report.verification.get("resolution", {}).items()):
            lines.append(f"  resolved {label}: {kind}")
        for failure in report.verification.get("failures", []):
            lines.append(f"  FAIL {failure['name']} (seed {failure['seed']}): "
                         f"expected {failure['expected']}, got {failure['actual']}")
    return "\n".join(lines) + "\n"


def _render(report: ReportFile, fmt: str) -> str:
    return ReportStorage.render(report) if fmt == JSON else format_report_text(report)


def parse_bounds(bounds: Optional[str]) -> Optional[Tuple[int, int]]:
    """
    Parse "NMAX:MNMAX".

    Raises:
        ValueError: If the string is malformed or a bound is not positive
    """
    if bounds is None:
        return None
    parts = bounds.split(":")
    if len(parts) != 2:
        raise ValueError(f"bounds must look like NMAX:MNMAX, got '{bounds}'")
    try:
        nmax, mnmax = int(parts[0]), int(parts[1])
    except ValueError:
        raise ValueError(f"bounds must be integers, got '{bounds}'")
    if nmax < 1 or mnmax < 1:
        raise ValueError(f"bounds must be positive, got '{bounds}'")
    return nmax, mnmax


# --- Commands ---

def cmd_classify(config_path: PathLike, output: Optional[PathLike] = None, fmt: str = JSON,
                 save: Optional[str] = None, storage: Optional[ConfigStorage] = None,
                 out: Optional[TextIO] = None) -> int:
    """
    Classify a setup and write its report.

    With `save`, the validated setup is also stored under that name so that
    later runs can refer to it by name.
    """
    try:
        storage = storage or ConfigStorage()
        config = _load_config(config_path, storage)
        p = params_from_config(config)
        report = classify(p)
        mult = multiplicities_from_config(config, report.spectrum)
        if save is not None:
            storage.save_config(config, save)
        _emit(_render(report_to_file(report, mult), fmt), output, out)
        return EXIT_OK
    except Exception as e:
        return _fail("classify", e)


def cmd_verify(config_path: PathLike, trials: Optional[int] = None, seed: Optional[int] = None,
               exact: bool = False, output: Optional[PathLike] = None, fmt: str = JSON,
               save: Optional[str] = None, storage: Optional[ConfigStorage] = None,
               reports: Optional[ReportStorage] = None, out: Optional[TextIO] = None) -> int:
    """Check the classification of a setup against the matrix oracle"""
    try:
        storage = storage or ConfigStorage()
        config = _load_config(config_path, storage)
        p = require_oracle_regime(params_from_config(config))
        report = classify(p)
        mult = multiplicities_from_config(config, report.spectrum)
        if save is not None:
            storage.save_config(config, save)
        runtime = load_runtime_settings()
        seed = config.seed if seed is None else seed
        trials = config.trials if trials is None else trials
        settings = SolverSettings(exact=exact, exact_limit=runtime.exact_limit,
                                  prime_bits=runtime.prime_bits, seed=seed)
        result = verify(p, mult, trials=trials, seed=seed, settings=settings)
    except Exception as e:
        return _fail("verify", e)

    file = report_to_file(report, mult, resolution_keys(report, result["resolution"]), dict(result))
    _emit(_render(file, fmt), output, out)

    try:
        (reports or ReportStorage()).append_history({
            "config": str(config_path),
            "params": params_echo(p),
            "seed": seed,
            "trials": trials,
            "passed": result["passed"],
            "dims": result["trials"][0]["dims"] if result["trials"] else {},
            "resolution": result["resolution"],
        })
    except (OSError, ValueError) as e:
        logger.warning(f"Could not record verification history: {e}")

    if not result["passed"]:
        names = sorted({f["name"] for f in result["failures"]})
        logger.error(f"verify: {len(result['failures'])} checks failed ({', '.join(names)})")
        return EXIT_MISMATCH
    logger.info(f"verify: all {result['summary']['checks']} checks passed")
    return EXIT_OK


def table_entries(bounds: Optional[Tuple[int, int]] = None) -> List[Dict[str, Any]]:
    """
    Rows of the loop-case table with a witness and its classification.

    Without bounds every row is listed (witness None if the default search
    finds none); with bounds, rows without a witness are omitted.
    """
    nmax, mnmax = bounds or (DEFAULT_NMAX, DEFAULT_MNMAX)
    entries = []
    for row, witness, report in table_with_witnesses(nmax, mnmax, keep_missing=bounds is None):
        if witness is None:
            entries.append({"key": row.key, "pattern": row.pattern(), "shape": row.shape,
                            "source": row.source, "witness": None, "agrees": None})
            continue
        entries.append(table_row_to_dict(row, witness, report, report_agrees(row, report)))
    return entries


def _table_text(entries: List[Dict[str, Any]]) -> str:
    lines = []
    for entry in entries:
        kinds = ""
        if entry.get("witness") is not None:
            kinds = f"  H [{', '.join(entry['factor_kinds'])}]  g(xi) [{', '.join(entry['edge_kinds'])}]"
        status = {True: "ok", False: "MISMATCH", None: "no witness"}[entry["agrees"]]
        lines.append(f"{entry['key']}  {entry['shape']}{kinds}  [{status}]")
        lines.append(f"    {entry['pattern']}")
        lines.append(f"    {entry['source']}")
        if entry.get("witness") is not None:
            w = entry["witness"]
            lines.append(f"    witness: n={w['n']} m={w['m']} sigma={w['sigma']} epsilon={w['epsilon']:+d} "
                         f"beta={w['beta']} gamma={w.get('gamma')}")
    return "\n".join(lines) + "\n"


def cmd_table(bounds: Optional[str] = None, fmt: str = TEXT, output: Optional[PathLike] = None,
              out: Optional[TextIO] = None) -> int:
    """Print the loop-case table with witnesses"""
    try:
        entries = table_entries(parse_bounds(bounds))
    except Exception as e:
        return _fail("table", e)

    if fmt == JSON:
        text = json.dumps({"format": "1", "rows": entries}, indent=2) + "\n"
    else:
        text = _table_text(entries)
    _emit(text, output, out)

    mismatched = [e["key"] for e in entries if e["agrees"] is False]
    if mismatched:
        logger.error(f"table: witnesses of rows {mismatched} classify differently")
        return EXIT_MISMATCH
    return EXIT_OK


def _history_text(entries: List[Dict[str, Any]]) -> str:
    if not entries:
        return "No verification runs recorded\n"
    lines = []
    for entry in entries:
        status = "passed" if entry.get("passed") else "FAILED"
        dims = entry.get("dims") or {}
        lines.append(f"{entry.get('timestamp', '?')}  {entry.get('config', '?')}  seed={entry.get('seed')} "
                     f"trials={entry.get('trials')}  {status}  "
                     f"dim H = {dims.get('H', '?')}, dim g(xi) = {dims.get('g_xi', '?')}")
    return "\n".join(lines) + "\n"


def cmd_history(last: int = 10, failed: bool = False, clear: bool = False, fmt: str = TEXT,
                reports: Optional[ReportStorage] = None, out: Optional[TextIO] = None) -> int:
    """
    Show or clear the verification history.

    Args:
        last: Number of most recent runs to show
        failed: Only show runs with a failed check
        clear: Drop the recorded history instead of showing it
    """
    try:
        reports = reports or ReportStorage()
        if clear:
            reports.clear_history()
            logger.info(f"Cleared {reports.history_file}")
            return EXIT_OK
        if failed:
            entries = reports.filter_entries(lambda entry: not entry.get("passed", False))[-last:]
        else:
            entries = reports.get_recent_entries(last)
    except Exception as e:
        return _fail("history", e)

    if fmt == JSON:
        text = json.dumps({"format": "1", "runs": entries}, indent=2) + "\n"
    else:
        text = _history_text(entries)
    _emit(text, None, out)
    return EXIT_OK


def cmd_selftest(trials: int = 2, out: Optional[TextIO] = None) -> int:
    """Verify the built-in setups and the loop table witnesses"""
    out = out or sys.stdout
    storage = ConfigStorage()
    code = EXIT_OK
    for name, raw in SELFTEST_CONFIGS.items():
        try:
            config = storage.parse_config(raw)
            p = params_from_config(config)
            report = classify(p)
            mult = multiplicities_from_config(config, report.spectrum)
            result = verify(p, mult, trials=trials, seed=config.seed)
        except Exception as e:
            _fail(f"selftest {name}", e)
            out.write(f"{name}: ERROR {type(e).__name__}: {e}\n")
            code = max(code, EXIT_ERROR)
            continue
        failed = [c["name"] for c in result["failures"] if c["status"] == FAIL]
        if failed:
            out.write(f"{name}: FAILED {', '.join(sorted(set(failed)))}\n")
            code = EXIT_MISMATCH
        else:
            out.write(f"{name}: ok ({result['summary']['checks']} checks)\n")

    try:
        entries = table_entries(SELFTEST_BOUNDS)
    except Exception as e:
        return max(code, _fail("selftest table", e))
    bad = [e["key"] for e in entries if e["agrees"] is False]
    if bad:
        out.write(f"loop table: MISMATCH in rows {', '.join(bad)}\n")
        code = EXIT_MISMATCH
    else:
        out.write(f"loop table: ok ({len(entries)} rows with witnesses)\n")
    return code
