# modules/cli/commands.py
"""
One function per subcommand. Each takes a RunConfig and returns the output
document {"command", "config", "rows" | "result"}; writing it is main.py's job.
"""

from typing import Any, Dict, List

import numpy as np

import config
from core.errors import DomainError
from core.model import partition_function_bruteforce
from core.run_config import RunConfig
from core.utils import get_logger
from modules.kacgutz.basis import enumerate_basis
from modules.kacgutz.matrix import assemble_matrix, gtrace_closed
from modules.ruelle.transfer import ruelle_trace_closed, ruelle_trace_power
from modules.spectral.asymptotics import asymptotic_branches, relative_deviation
from modules.spectral.eigen import eigenvalues
from modules.spectral.roots import find_real_zeros_poles
from modules.spectral.zeta import zeta, zeta_series_partial

logger = get_logger("modules.cli.commands")

SPECTRUM_COLUMNS = ["index", "eigenvalue", "parity", "tail_gap"]
ZERO_COLUMNS = ["beta", "alpha", "kind", "factor_value_re", "factor_value_im", "multiplicity"]


def _document(command: str, cfg: RunConfig, **body) -> Dict[str, Any]:
    doc = {"command": command, "config": cfg.with_z(config.MODEL["z"]).to_dict()}
    doc.update(body)
    return doc


def _relative(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(a), abs(b), np.finfo(float).tiny)


# ----------------------
# partition / trace
# ----------------------
def cmd_partition(cfg: RunConfig) -> Dict[str, Any]:
    params = cfg.params()
    rows = []
    for beta in cfg.betas():
        for n in cfg.n:
            Z = partition_function_bruteforce(params, beta, n, cfg.workers, cfg.deterministic)
            trace = ruelle_trace_power(params, beta, n, cfg.workers, cfg.deterministic)
            from_trace = float(np.prod(1.0 - params.lam ** n)) * trace.real
            rows.append({"beta": beta, "n": n, "Z": Z, "Z_from_trace": from_trace,
                         "residual": _relative(Z, from_trace)})
    return _document("partition", cfg, rows=rows)


def cmd_trace(cfg: RunConfig) -> Dict[str, Any]:
    params = cfg.params()
    G = None
    rows = []
    for beta in cfg.betas():
        if cfg.degree is not None:
            G = assemble_matrix(params, beta, enumerate_basis(params.m, cfg.degree))
        closed = ruelle_trace_closed(params, beta).real
        for n in cfg.n:
            power = ruelle_trace_power(params, beta, n, cfg.workers, cfg.deterministic).real
            row = {"beta": beta, "n": n, "trace_power": power,
                   "trace_matrix": G.trace_power(n) if G is not None else None}
            if n == 1:
                gclosed = gtrace_closed(params, beta)
                row.update(closed=closed, gtrace_closed=gclosed,
                           agreement=max(_relative(closed, power), _relative(closed, gclosed)))
            rows.append(row)
    return _document("trace", cfg, rows=rows)


# ----------------------
# spectrum
# ----------------------
def cmd_spectrum(cfg: RunConfig) -> Dict[str, Any]:
    params = cfg.params()
    betas = cfg.betas()
    rows = []
    spectrum = None
    for beta in betas:
        spectrum = eigenvalues(params, beta, cfg.degree, with_tail=True, threads=cfg.workers)
        for row in spectrum.to_rows():
            if len(betas) > 1:
                row = {"beta": beta, **row}
            rows.append(row)
    if spectrum is None:
        logger.warning("empty beta range %s, no spectrum computed", cfg.beta_range)
        result = {"N": cfg.degree, "beta": None, "tail_gap": None, "size": 0}
    else:
        result = {"N": spectrum.N, "beta": spectrum.beta, "tail_gap": spectrum.tail_gap, "size": len(spectrum)}
    columns = ["beta"] + SPECTRUM_COLUMNS if cfg.beta_range is not None else SPECTRUM_COLUMNS
    return _document("spectrum", cfg, rows=rows, result=result, columns=columns)


def plotdata(document: Dict[str, Any]) -> List[Dict[str, Any]]:
    """(x, y, series) rows of a spectrum sweep: beta, eigenvalue, eigenvalue index."""
    if document["command"] != "spectrum":
        raise DomainError("--emit plotdata is available for the spectrum subcommand")
    beta = document["config"]["beta"]
    return [{"x": r.get("beta", beta), "y": r["eigenvalue"], "series": r["index"]} for r in document["rows"]]


# ----------------------
# zeta / zeros
# ----------------------
def cmd_zeta(cfg: RunConfig) -> Dict[str, Any]:
    params = cfg.params()
    z = cfg.z_value
    rows = []
    for beta in cfg.betas():
        value = zeta(params, beta, z, cfg.degree, cfg.workers)
        row = {"beta": beta, "value": value.value,
               "max_drift": max(value.drift().values(), default=None)}
        if cfg.cross_check == "series":
            series = zeta_series_partial(params, beta, z, cfg.series_terms, cfg.workers, cfg.deterministic)
            row.update(series=series, series_difference=_relative(value.value, series))
        elif cfg.cross_check is not None:
            raise DomainError(f"unknown cross-check {cfg.cross_check!r}; expected 'series'")
        rows.append(row)
    if len(rows) == 1:
        result = value.to_dict()
        result.update({k: v for k, v in rows[0].items() if k not in result})
        return _document("zeta", cfg, result=result)
    return _document("zeta", cfg, rows=rows)


def cmd_zeros(cfg: RunConfig) -> Dict[str, Any]:
    params = cfg.params()
    cfg = cfg.with_z(config.MODEL["zeros_z"])
    if cfg.z[1] != 0.0:
        raise DomainError("the real root scan needs a real z")
    lo, hi, step = cfg.beta_range or config.MODEL["zeros_range"]
    roots = find_real_zeros_poles(params, cfg.z[0], (lo, hi), cfg.degree, step, cfg.workers)
    return _document("zeros", cfg, rows=[r.to_dict() for r in roots], columns=ZERO_COLUMNS)


# ----------------------
# asymptotics
# ----------------------
def cmd_asymptotics(cfg: RunConfig) -> Dict[str, Any]:
    params = cfg.params()
    rows = []
    for beta in cfg.betas():
        for alpha, observed, predicted in asymptotic_branches(params, beta, cfg.direction, cfg.parity, cfg.degree,
                                                             cfg.count, cfg.statement_form):
            if cfg.alpha is not None and list(alpha) != list(cfg.alpha):
                continue
            rows.append({"beta": beta, "alpha": list(alpha), "eigenvalue": observed, "prediction": predicted,
                         "relative_deviation": relative_deviation(observed, predicted)})
    return _document("asymptotics", cfg, rows=rows)
