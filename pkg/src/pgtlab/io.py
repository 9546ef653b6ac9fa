"""File formats: JSON catalogs and configs, CSV spectra and tables, run manifests."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .core import (Channel, GeodesicRecord, LengthSpectrum, ManifoldParams,
                   SingularityCatalog, Theorem4Config, ValidationError, as_fraction)

SPECTRUM_HEADER = ["norm", "length", "weight", "primitive", "multiplicity"]


def format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


# -- catalogs ----------------------------------------------------------------

def catalog_to_dict(catalog: SingularityCatalog) -> dict:
    rho = float(catalog.params.rho)
    channels = []
    for ch in catalog.channels:
        if np.any(ch.critical_alpha.real != rho):
            raise ValidationError(f"channel p={ch.p}: critical points off Re = rho cannot be stored")
        entry = {
            "p": ch.p,
            "tau": ch.tau_id,
            "lambda": ch.lam,
            "real_singularities": [{"alpha": float(a), "order": int(o)}
                                   for a, o in zip(ch.real_alpha, ch.real_order)],
            "critical_singularities": [{"im": float(a.imag), "order": int(o)}
                                       for a, o in zip(ch.critical_alpha, ch.critical_order)],
        }
        if ch.sign != (-1) ** (ch.p + 1):
            entry["sign"] = ch.sign
        channels.append(entry)
    return {"n": catalog.params.n, "rho": format_fraction(catalog.params.rho),
            "weyl_constant": catalog.weyl_constant, "channels": channels}


def catalog_from_dict(data: Mapping) -> SingularityCatalog:
    try:
        params = ManifoldParams(int(data["n"]), as_fraction(data["rho"]))
        rho = float(params.rho)
        channels = []
        for c in data["channels"]:
            real = c.get("real_singularities", [])
            crit = c.get("critical_singularities", [])
            channels.append(Channel(
                int(c["p"]), str(c.get("tau", "trivial")), float(c["lambda"]),
                [float(s["alpha"]) for s in real],
                [int(s.get("order", 1)) for s in real],
                np.array([complex(rho, float(s["im"])) for s in crit], dtype=complex),
                [int(s.get("order", 1)) for s in crit],
                c.get("sign")))
        return SingularityCatalog(params, tuple(channels), float(data["weyl_constant"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"malformed catalog: {exc!r}") from exc


def write_catalog(catalog: SingularityCatalog, path) -> None:
    Path(path).write_text(json.dumps(catalog_to_dict(catalog)))


def read_catalog(path) -> SingularityCatalog:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: not valid JSON ({exc})") from exc
    return catalog_from_dict(data)


# -- spectra -----------------------------------------------------------------

def spectrum_to_csv(spectrum: LengthSpectrum) -> str:
    buf = io.StringIO()
    buf.write(f"# norm_bound={spectrum.norm_bound!r}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SPECTRUM_HEADER)
    for r in spectrum.records:
        w.writerow([repr(r.norm), repr(r.length), repr(r.weight), int(r.primitive), r.multiplicity])
    return buf.getvalue()


def spectrum_from_csv(text: str, norm_bound: float | None = None) -> LengthSpectrum:
    """Parse the CSV spectrum format.

    The completeness bound comes from a ``# norm_bound=`` comment line if
    present, else from ``norm_bound``, else the largest norm in the file.
    """
    lines = text.splitlines()
    bound = norm_bound
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, val = line[1:].strip().partition("=")
            if key.strip() == "norm_bound" and bound is None:
                bound = float(val)
        elif line.strip():
            body.append(line)
    rows = list(csv.DictReader(body))
    if body and [h.strip() for h in body[0].split(",")] != SPECTRUM_HEADER:
        raise ValidationError(f"spectrum header must be {','.join(SPECTRUM_HEADER)}")
    try:
        records = tuple(GeodesicRecord(float(r["norm"]), float(r["length"]), float(r["weight"]),
                                       r["primitive"].strip().lower() in ("1", "true"),
                                       int(r["multiplicity"]))
                        for r in rows)
    except (KeyError, ValueError) as exc:
        raise ValidationError(f"malformed spectrum row: {exc!r}") from exc
    if bound is None:
        bound = max((r.norm for r in records), default=1.0)
    return LengthSpectrum(records, bound)


def write_spectrum(spectrum: LengthSpectrum, path) -> None:
    Path(path).write_text(spectrum_to_csv(spectrum))


def read_spectrum(path) -> LengthSpectrum:
    return spectrum_from_csv(Path(path).read_text())


# -- conditional-formula configs ---------------------------------------------------------

def config_to_dict(config: Theorem4Config) -> dict:
    return {"poly_log_coeffs": list(config.poly_log_coeffs), "poly_coeffs": list(config.poly_coeffs),
            "truncation_height": config.truncation_height, "epsilon1": config.epsilon1,
            "delta": config.delta}


def config_from_dict(data: Mapping) -> Theorem4Config:
    try:
        return Theorem4Config(tuple(data["poly_log_coeffs"]), tuple(data["poly_coeffs"]),
                              float(data["truncation_height"]), float(data.get("epsilon1", 0.1)),
                              float(data.get("delta", 0.1)))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed conditional-formula config: {exc!r}") from exc


def read_config(path) -> Theorem4Config:
    return config_from_dict(json.loads(Path(path).read_text()))


# -- tables and manifests --------------------------------------------------------

def rows_to_csv(rows: Iterable[Mapping], columns: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def _fmt(v):
    if isinstance(v, float):
        return repr(v) if math.isfinite(v) else str(v)
    return v


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def manifest(inputs: Mapping[str, str | None], params: Mapping, grid=None, seed=None) -> dict:
    """Provenance block: sha256 of every input file, the parameter set and the grid."""
    from . import __version__
    return {
        "version": __version__,
        "inputs": {k: {"path": str(p), "sha256": file_sha256(p)} for k, p in inputs.items() if p},
        "params": dict(params),
        "grid": grid,
        "seed": seed,
    }
