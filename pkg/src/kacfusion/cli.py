"""Command-line front end.

Every command writes one deterministic JSON (or CSV) document: sorted keys,
fractions as strings, floats rounded to 12 significant digits, complex
matrices as {"shape": [rows, cols], "data": [[re, im], ...]} in row-major
order. Exit status is 0 on success, 1 when a ``check`` finds a violation and
2 on any error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from .cartan import FiniteWeight, affine_data
from .errors import KacFusionError
from .fusion import check_grading, default_jobs, verlinde_algebra
from .modular import (cor58_check, modular_action, projective_residual, theta_u21r,
                      pairing_formula_check, u21_action, unitarity_check)
from .quotient import quotient_verlinde_check, direct_constants, hong_quotient, two_thirds_check
from .twisted import a2_even_product, odd_level_s_match, sign_twist_check, twisted_verlinde
from .weights import lemma43_check

log = logging.getLogger("kacfusion")

COMMANDS = ("fusion", "twisted", "quotient", "modular", "sweep", "check")
DEFAULT_MAX_CELLS = 500


class UsageError(Exception):
    """Bad flag value; the message names the flag."""


@dataclass
class JobConfig:
    command: str
    type: list
    levels: list
    out: str | None = None
    format: str = "json"
    checks: list = field(default_factory=list)
    jobs: int = 1
    beta: tuple | None = None
    max_cells: int = DEFAULT_MAX_CELLS


# ---------------------------------------------------------------- emission

def _num(x: float) -> float:
    v = float(f"{float(x):.12g}")
    return 0.0 if v == 0 else v


def canonical(obj):
    """Recursively convert to JSON-safe values with fixed formatting."""
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj) or obj.dtype.kind == "f":
            return matrix_json(obj)
        return canonical(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [_num(obj.real), _num(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        if not np.isfinite(obj):
            return str(float(obj))
        return _num(obj)
    if isinstance(obj, FiniteWeight):
        return [str(x) for x in obj.labels]
    return obj


def matrix_json(m: np.ndarray) -> dict:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return {"shape": list(m.shape), "data": [[_num(z.real), _num(z.imag)] for z in m.ravel()]}


def dumps(doc: dict) -> str:
    return json.dumps(canonical(doc), sort_keys=True, separators=(",", ":")) + "\n"


def _entries_csv(doc: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    labels = [";".join(b["labels"]) for b in doc["basis"]]
    w.writerow(["lambda", "mu", "nu", "N"])
    for i, j, l, n in doc["N"]:
        w.writerow([labels[i], labels[j], labels[l], n])
    return buf.getvalue()


def _flat_csv(doc: dict) -> str:
    rows = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else str(k), v[k])
        else:
            rows.append((prefix, json.dumps(v, sort_keys=True)))

    walk("", canonical(doc))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])
    w.writerows(rows)
    return buf.getvalue()


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return dumps(doc)
    if "N" in doc and "basis" in doc:
        return _entries_csv(canonical(doc))
    return _flat_csv(doc)


# ---------------------------------------------------------------- algebra documents

def algebra_doc(alg) -> dict:
    return {
        "type": alg.info.get("type", str(alg.basis.data.atype)),
        "level": alg.basis.level,
        "basis": alg.basis.to_json(),
        "N": [list(e) for e in alg.entries()],
        "provenance": alg.provenance,
        "max_residue": alg.max_residue,
        "info": {k: v for k, v in alg.info.items() if k not in ("type", "level")},
    }


def quotient_doc(q) -> dict:
    return {
        "type": q.info["type"],
        "level": q.basis.level,
        "basis": q.basis.to_json(),
        "N": [list(e) for e in q.entries()],
        "L": [q.L(i).tolist() for i in range(len(q))],
        "projection": [None if p is None else list(p) for p in q.projection],
        "source": {
            "type": str(q.source.basis.data.atype),
            "level": q.source.basis.level,
            "basis": q.source.basis.to_json(),
        },
        "info": {k: v for k, v in q.info.items() if k not in ("type", "level")},
    }


def modular_doc(ma) -> dict:
    doc = {
        "type": str(ma.basis.data.atype),
        "level": ma.basis.level,
        "r": ma.r,
        "basis": ma.basis.to_json(),
        "T": ma.T,
        "U21r": ma.U21r,
        "residuals": ma.relations_residuals,
        "scalars": ma.scalars,
    }
    if ma.S is not None:
        doc["S"] = ma.S
    return doc


# ---------------------------------------------------------------- checks

def _need(cond, msg):
    if not cond:
        raise UsageError(msg)


def _chk_grading(data, k, cfg):
    _need(data.atype.r == 1, f"--checks grading needs an untwisted type, got {data.atype}")
    rep = check_grading(verlinde_algebra(data, k, jobs=cfg.jobs))
    return {"passed": rep.holds, **rep.as_dict()}


def _chk_verlinde(data, k, cfg):
    alg = twisted_verlinde(data, k, cfg.jobs) if data.atype.r > 1 else verlinde_algebra(data, k, cfg.jobs)
    return {"passed": alg.max_residue < 1e-6, "max_residue": alg.max_residue}


def _chk_associativity(data, k, cfg):
    alg = twisted_verlinde(data, k, cfg.jobs) if data.atype.r > 1 else verlinde_algebra(data, k, cfg.jobs)
    d = alg.associativity_defect()
    return {"passed": d == 0, "defect": d}


def _chk_sign_twist(data, k, cfg):
    _need(data.atype.is_a_even_twisted, f"--checks sign_twist needs an A_2l^(2) type, got {data.atype}")
    rep = sign_twist_check(twisted_verlinde(data, k, cfg.jobs)).as_dict()
    return {"passed": rep["conjecture_holds"] or not rep["applicable"], **rep}


def _chk_closed_form(data, k, cfg):
    _need(str(data.atype) == "A2~2" and k % 2 == 0, "--checks closed_form needs A2~2 at even level")
    alg = twisted_verlinde(data, k, cfg.jobs)
    n = k // 2
    bad = []
    for a in range(n + 1):
        for b in range(n + 1):
            got = {int(alg.basis[l].finite.labels[0]): v
                   for l, v in alg.product(alg.basis.index((a,)), alg.basis.index((b,))).items()}
            if got != a2_even_product(n, a, b):
                bad.append([a, b])
    return {"passed": not bad, "mismatches": bad}


def _chk_odd_level_match(data, k, cfg):
    _need(data.atype.is_a_even_twisted and k % 2 == 1, "--checks odd_level_match needs A_2l^(2) at odd level")
    dev, perm = odd_level_s_match(data.rank, (k - 1) // 2)
    return {"passed": dev < 1e-9, "max_deviation": dev, "permutation": perm}


def _chk_lemma43(data, k, cfg):
    _need(data.atype.is_a_even_twisted, "--checks lemma43 needs an A_2l^(2) type")
    ok = lemma43_check(data.rank, k)
    return {"passed": ok, "n": k}


def _quotient(data, k, cfg):
    return hong_quotient(data, k, cfg.jobs)


def _chk_homomorphism(data, k, cfg):
    q = _quotient(data, k, cfg)
    bad = q.homomorphism_defect()
    return {"passed": not bad, "defects": [list(p) for p in bad],
            "direct_constants_agree": direct_constants(q) == q.table}


def _chk_quotient_verlinde(data, k, cfg):
    res = quotient_verlinde_check(_quotient(data, k, cfg))
    return {"passed": res < 1e-8, "max_deviation": res}


def _chk_two_thirds(data, k, cfg):
    rep = two_thirds_check(_quotient(data, k, cfg)).as_dict()
    return {"passed": rep["conjecture_holds"], **rep}


def _chk_relations(data, k, cfg):
    ma = modular_action(data, k)
    primary = {key: v for key, v in ma.relations_residuals.items()
               if not key.endswith("vs identity") and not key.endswith("graded T")}
    worst = max(primary.values())
    return {"passed": worst < 1e-8, "residuals": ma.relations_residuals, "scalars": ma.scalars}


def _chk_cor58(data, k, cfg):
    _need(data.atype.r == 1, "--checks cor58 needs an untwisted type")
    res = cor58_check(data, k)
    uni = unitarity_check(data, k)
    return {"passed": res < 1e-8 and uni < 1e-9, "residual": res, "unitarity_residual": uni}


def _chk_theta(data, k, cfg):
    _need(data.atype.r > 1 and not data.atype.is_a_even_twisted,
          "--checks theta needs a twisted type other than A_2l^(2)")
    th = theta_u21r(data, k)
    u = u21_action(data, k)
    c, res = projective_residual(th.matrix, u.matrix)
    return {"passed": res < 1e-8 and th.leakage < 1e-8 and u.leakage < 1e-8,
            "residual": res, "scalar": c, "theta_leakage": th.leakage, "transpose_leakage": u.leakage}


def _chk_pairing_formula(data, k, cfg):
    rep = pairing_formula_check(data, k, cfg.beta)
    d = rep.as_dict()
    return {"passed": rep.beta_valid and rep.residual < 1e-8, **d}


CHECKS = {
    "grading": _chk_grading,
    "verlinde": _chk_verlinde,
    "associativity": _chk_associativity,
    "sign_twist": _chk_sign_twist,
    "closed_form": _chk_closed_form,
    "odd_level_match": _chk_odd_level_match,
    "lemma43": _chk_lemma43,
    "homomorphism": _chk_homomorphism,
    "quotient_verlinde": _chk_quotient_verlinde,
    "two_thirds": _chk_two_thirds,
    "relations": _chk_relations,
    "cor58": _chk_cor58,
    "theta": _chk_theta,
    "pairing_formula": _chk_pairing_formula,
}

def run_checks(data, k, names, cfg) -> dict:
    return {name: CHECKS[name](data, k, cfg) for name in names}


# ---------------------------------------------------------------- commands

def cmd_fusion(cfg):
    data = affine_data(cfg.type[0])
    k = cfg.levels[0]
    if data.atype.r != 1:
        raise UsageError(f"--type {data.atype} is twisted; use the twisted command")
    doc = algebra_doc(verlinde_algebra(data, k, jobs=cfg.jobs))
    if cfg.checks:
        doc["checks"] = run_checks(data, k, cfg.checks, cfg)
    return doc, 0


def cmd_twisted(cfg):
    data = affine_data(cfg.type[0])
    k = cfg.levels[0]
    if data.atype.r == 1:
        raise UsageError(f"--type {data.atype} is untwisted; use the fusion command")
    alg = twisted_verlinde(data, k, cfg.jobs)
    doc = algebra_doc(alg)
    doc["embedded_basis"] = list(alg.embedded) if alg.embedded is not None else list(range(len(alg)))
    if cfg.checks:
        doc["checks"] = run_checks(data, k, cfg.checks, cfg)
    return doc, 0


def cmd_quotient(cfg):
    data = affine_data(cfg.type[0])
    k = cfg.levels[0]
    doc = quotient_doc(hong_quotient(data, k, cfg.jobs))
    if cfg.checks:
        doc["checks"] = run_checks(data, k, cfg.checks, cfg)
    return doc, 0


def cmd_modular(cfg):
    data = affine_data(cfg.type[0])
    k = cfg.levels[0]
    doc = modular_doc(modular_action(data, k))
    if cfg.checks:
        doc["checks"] = run_checks(data, k, cfg.checks, cfg)
    return doc, 0


def cmd_check(cfg):
    _need(cfg.checks, "--checks is required for the check command")
    cells = []
    status = 0
    for t in cfg.type:
        data = affine_data(t)
        for k in cfg.levels:
            res = run_checks(data, k, cfg.checks, cfg)
            if not all(r["passed"] for r in res.values()):
                status = 1
            cells.append({"type": str(data.atype), "level": k, "checks": res})
    return {"cells": cells, "all_passed": status == 0}, status


def _manifest_path(cfg):
    if not cfg.out:
        return None
    return cfg.out + ".manifest.json"


def _load_manifest(path):
    if path and os.path.exists(path):
        with open(path) as fh:
            return json.load(fh)
    return {}


def _save_manifest(path, manifest):
    if not path:
        return
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(dumps(manifest))
    os.replace(tmp, path)


def cmd_sweep(cfg):
    """Run checks over every (type, level) cell, resuming from the manifest."""
    _need(cfg.checks, "--checks is required for the sweep command")
    cells = [(t, k, c) for t in cfg.type for k in cfg.levels for c in cfg.checks]
    _need(len(cells) <= cfg.max_cells,
          f"--level-range gives {len(cells)} cells, above --max-cells {cfg.max_cells}")
    path = _manifest_path(cfg)
    manifest = _load_manifest(path)
    for t, k, c in cells:
        key = f"{affine_data(t).atype}|{k}|{c}|{__version__}"
        if key in manifest:
            continue
        try:
            res = CHECKS[c](affine_data(t), k, cfg)
        except UsageError:
            raise
        except KacFusionError as exc:
            res = {"passed": False, "error": f"{type(exc).__name__}: {exc}"}
        manifest[key] = canonical(res)
        _save_manifest(path, manifest)
        log.info("%s %s", key, "pass" if res["passed"] else "FAIL")
    report = []
    for t, k, c in cells:
        key = f"{affine_data(t).atype}|{k}|{c}|{__version__}"
        res = manifest[key]
        report.append({"type": str(affine_data(t).atype), "level": k, "check": c,
                       "passed": res["passed"], "result": res})
    failed = [r for r in report if not r["passed"]]
    return {"cells": report, "passed": len(report) - len(failed), "failed": len(failed),
            "version": __version__}, 0


HANDLERS = {
    "fusion": cmd_fusion,
    "twisted": cmd_twisted,
    "quotient": cmd_quotient,
    "modular": cmd_modular,
    "check": cmd_check,
    "sweep": cmd_sweep,
}


# ---------------------------------------------------------------- parsing

def _level_range(text: str) -> list:
    try:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
    except ValueError:
        raise UsageError(f"--level-range expects A..B, got {text!r}") from None
    if lo < 1:
        raise UsageError(f"--level-range must start at 1 or above, got {lo}")
    return list(range(lo, hi + 1))


def _beta(text: str) -> tuple:
    try:
        return tuple(Fraction(x) for x in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--beta expects comma-separated rationals, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kacfusion", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"kacfusion {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--type", required=True,
                       help="affine type such as A2~1, A5~2, D4~3; sweep and check accept a comma list")
        lv = s.add_mutually_exclusive_group(required=name != "sweep")
        lv.add_argument("--level", type=int)
        lv.add_argument("--level-range", dest="level_range")
        s.add_argument("--out")
        s.add_argument("--format", choices=("json", "csv"), default="json")
        s.add_argument("--checks", "--check", dest="checks", default="",
                       help="comma list of: " + ", ".join(CHECKS))
        s.add_argument("--jobs", type=int, default=1, help="worker processes (0 = auto)")
        s.add_argument("--beta", help="rational vector for pairing_formula, e.g. 0,1/2")
        s.add_argument("--max-cells", type=int, default=DEFAULT_MAX_CELLS)
        s.add_argument("-v", "--verbose", action="store_true")
    return p


def config_from_args(ns) -> JobConfig:
    types = [t.strip() for t in ns.type.split(",") if t.strip()]
    if ns.command not in ("sweep", "check") and len(types) != 1:
        raise UsageError("--type takes a single type for this command")
    for t in types:
        affine_data(t)
    if ns.level_range:
        levels = _level_range(ns.level_range)
    elif ns.level is not None:
        if ns.level < 1:
            raise UsageError(f"--level must be a positive integer, got {ns.level}")
        levels = [ns.level]
    else:
        raise UsageError("--level or --level-range is required")
    if ns.command not in ("sweep", "check") and len(levels) != 1:
        raise UsageError("--level-range is only accepted by sweep and check")
    checks = [c.strip() for c in ns.checks.split(",") if c.strip()]
    for c in checks:
        if c not in CHECKS:
            raise UsageError(f"--checks: unknown check {c!r}")
    if ns.jobs < 0:
        raise UsageError("--jobs must be nonnegative")
    return JobConfig(ns.command, types, levels, ns.out, ns.format, checks,
                     ns.jobs or default_jobs(), _beta(ns.beta) if ns.beta else None, ns.max_cells)


def run(cfg: JobConfig) -> int:
    doc, status = HANDLERS[cfg.command](cfg)
    text = render(doc, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return run(config_from_args(ns))
    except UsageError as exc:
        print(f"kacfusion: error: {exc}", file=sys.stderr)
        return 2
    except KacFusionError as exc:
        print(f"kacfusion: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ZeroDivisionError) as exc:
        print(f"kacfusion: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
