"""Command-line driver.

Every command loads one algebra (``--catalog KEY [--param k=v ...]`` or
``--input FILE``), runs a pipeline and writes a deterministic report.  Exit
codes: 0 success, 1 a verdict failed, 2 usage or input error, 3 resource cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, field

from . import __version__
from .asdata import CATALOG, as_data, catalog, orbit_check, top_degree
from .errors import (DimensionMismatch, FormatError, InsufficientData, InvalidParam, NotOneDimensionalTop,
                     NotPrime, RegalError, ResourceLimit, UnknownKey, NoExactQ, SingularSliceSpace)
from .exactlin import format_rational, is_prime, random_prime
from .homog import (HomAlgebra, algebra_to_json, dual, e_bialgebra, end_semigroup, gk_fit,
                    hilbert_table, load_algebra)
from .hopf import hopf_report
from .koszul import Koszul, gorenstein_report, koszulity_report, nilpotency_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3

COMMANDS = ("dual", "e", "hilbert", "koszul", "asdata", "hopf", "gkdim")
MODULAR_COMMANDS = ("hilbert", "gkdim")  # everything else is always exact


class UsageError(RegalError):
    pass


@dataclass
class RunConfig:
    command: str
    catalog: str | None = None
    params: dict = field(default_factory=dict)
    input: str | None = None
    n_max: int | None = None
    mod: str = "auto"
    seed: int = 0
    out: str | None = None
    format: str = "json"
    of: str = "self"

    @property
    def exact(self) -> bool:
        return self.mod == "off"

    def prime(self) -> int | None:
        if self.mod in ("off", "auto"):
            return None
        return int(self.mod)


# ---------- loading ----------

def parse_params(items) -> dict:
    out = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        if not sep or not key:
            raise UsageError(f"--param expects k=v, got {item!r}")
        out[key.strip()] = val.strip()
    return out


def load(cfg: RunConfig) -> HomAlgebra:
    if (cfg.catalog is None) == (cfg.input is None):
        raise UsageError("give exactly one of --catalog or --input")
    if cfg.input is not None:
        if cfg.params:
            raise UsageError("--param applies to catalog entries only; files hold literal rationals")
        return load_algebra(cfg.input)
    return catalog(cfg.catalog, cfg.params)


def target(a: HomAlgebra, of: str) -> HomAlgebra:
    if of == "self":
        return a
    if of == "dual":
        return dual(a)
    if of == "e":
        return e_bialgebra(a)
    if of == "end":
        return end_semigroup(a)
    raise UsageError(f"unknown --of value {of!r}")


def _hilbert(cfg: RunConfig, a: HomAlgebra, n_max: int):
    if cfg.exact:
        return hilbert_table(a, n_max, "exact")
    p = cfg.prime()
    if p is not None:
        return hilbert_table(a, n_max, "modular", p=p)
    return hilbert_table(a, n_max, "auto", p=random_prime(cfg.seed))


# ---------- commands ----------

def cmd_dual(cfg, a):
    b = dual(a)
    return EXIT_OK, {"algebra": algebra_to_json(b, include_meta=False), "dim_relations": b.R.dim()}, {}


def cmd_e(cfg, a):
    e = e_bialgebra(a)
    res = {
        "dim_r": e.meta["dim_r"],
        "dim_r_check": e.meta["dim_r_check"],
        "dim_relations": e.meta["dim_relations"],
        "ambient": e.d ** e.N,
        "algebra": algebra_to_json(e, include_meta=False),
    }
    return EXIT_OK, res, {}


def cmd_hilbert(cfg, a):
    n_max = 6 if cfg.n_max is None else cfg.n_max
    b = target(a, cfg.of)
    t = _hilbert(cfg, b, n_max)
    return EXIT_OK, {"of": cfg.of, "table": t.to_json()}, {"degree_max": n_max, "prime": t.prime}


def cmd_gkdim(cfg, a):
    n_max = 6 if cfg.n_max is None else cfg.n_max
    b = target(a, cfg.of)
    t = _hilbert(cfg, b, n_max)
    g = gk_fit(t)
    return EXIT_OK, {"of": cfg.of, "table": t.to_json(), "growth": g.to_json()}, {"degree_max": n_max, "prime": t.prime}


def cmd_koszul(cfg, a):
    window = 6 if cfg.n_max is None else cfg.n_max
    ctx = Koszul(a)
    nil = nilpotency_check(a, window, ctx)
    kz = koszulity_report(a, window, ctx)
    gor = gorenstein_report(a, window, ctx)
    res = {
        "nilpotency": {"passed": nil["passed"], "checked": nil["checked"],
                       "failures": [list(x) for x in nil["failures"]]},
        "koszul": kz.to_json(),
        "gorenstein": gor.to_json(),
    }
    ok = nil["passed"] and kz.passed and gor.passed
    return (EXIT_OK if ok else EXIT_FAIL), res, {"degree_max": window}


def cmd_asdata(cfg, a):
    try:
        m = top_degree(a)
        data = as_data(a, m)
    except (NotOneDimensionalTop, NoExactQ, SingularSliceSpace) as exc:
        return EXIT_FAIL, {"error": type(exc).__name__, "message": str(exc)}, {}
    res = {"asdata": data.to_json()}
    ok = data.cyclicity_ok is not False
    if data.diagonal:
        orb = orbit_check(data.omega, data.Q, data.d, data.m)
        res["orbit_check"] = orb.to_json()
        ok = ok and orb.passed
    return (EXIT_OK if ok else EXIT_FAIL), res, {"top_degree": m}


def cmd_hopf(cfg, a):
    rep = hopf_report(a)
    degrees = sorted({v.degree for v in rep.verdicts if v.degree is not None})
    return (EXIT_OK if rep.all_passed else EXIT_FAIL), rep, {"degrees": degrees}


HANDLERS = {
    "dual": cmd_dual, "e": cmd_e, "hilbert": cmd_hilbert, "koszul": cmd_koszul,
    "asdata": cmd_asdata, "hopf": cmd_hopf, "gkdim": cmd_gkdim,
}


# ---------- output ----------

def envelope(cfg: RunConfig, a: HomAlgebra, result, window: dict) -> dict:
    prime = window.pop("prime", None)
    if cfg.exact or cfg.command not in MODULAR_COMMANDS:
        mode, prime = "exact", None
    elif cfg.prime() is not None:
        mode, prime = "modular", cfg.prime()
    else:
        mode = "auto"
    source = {"catalog": cfg.catalog, "params": dict(sorted(cfg.params.items()))} if cfg.catalog else {"input": os.path.basename(cfg.input)}
    return {
        "tool": "regal",
        "version": __version__,
        "command": cfg.command,
        "source": source,
        "algebra": a.name,
        "presentation_hash": a.presentation_hash(),
        "arithmetic": {"mode": mode, "prime": prime, "seed": cfg.seed if mode == "auto" else None},
        "window": window,
        "result": result.to_json() if hasattr(result, "to_json") else result,
    }


def _md_value(v) -> str:
    if isinstance(v, (dict, list)):
        return "`" + json.dumps(v, separators=(",", ":")) + "`"
    return str(v)


def to_markdown(env: dict, result) -> str:
    lines = [f"# regal {env['command']}: {env['algebra']}", ""]
    for key in ("version", "presentation_hash", "arithmetic", "window", "source"):
        lines.append(f"- {key}: {_md_value(env[key])}")
    lines.append("")
    if hasattr(result, "to_markdown"):
        lines.append(result.to_markdown())
        return "\n".join(lines)
    res = env["result"]
    table = res.get("table") if isinstance(res, dict) else None
    if table:
        lines += ["| n | dim | mode |", "|---|---|---|"]
        lines += [f"| {r['n']} | {r['dim']} | {r['mode']} |" for r in table["dims"]]
        lines.append("")
    if isinstance(res, dict) and "growth" in res:
        g = res["growth"]
        lines.append("finite differences (k: sequence):")
        lines.append("")
        lines += [f"- {k}: {' '.join(map(str, seq))}" for k, seq in enumerate(g["differences"])]
        lines += ["", f"polynomial degree {g['polynomial_degree']}, gk-dim estimate {g['gk_dim_estimate']} ({g['status']}, not a proof)"]
    else:
        for key, val in (res.items() if isinstance(res, dict) else ()):
            if key != "table":
                lines.append(f"- {key}: {_md_value(val)}")
    return "\n".join(lines) + "\n"


def write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".regal-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------- entry point ----------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="regal", description="Exact checks on N-homogeneous algebras and their quantum groups.")
    p.add_argument("--version", action="version", version=f"regal {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        src = s.add_argument_group("input")
        src.add_argument("--catalog", metavar="KEY", help=f"one of {', '.join(CATALOG)}")
        src.add_argument("--param", action="append", default=[], metavar="K=V")
        src.add_argument("--input", metavar="PATH", help="algebra JSON file")
        s.add_argument("--nmax", type=int, default=None, metavar="N")
        s.add_argument("--mod", default="auto", metavar="auto|PRIME|off")
        s.add_argument("--exact", action="store_true", help="same as --mod off")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--out", metavar="PATH")
        s.add_argument("--format", choices=("json", "md"), default="json")
        s.add_argument("--of", choices=("self", "dual", "e", "end"), default="self",
                       help="run hilbert/gkdim on a derived algebra")
    return p


def config_from_args(ns) -> RunConfig:
    mod = "off" if ns.exact else ns.mod
    if mod not in ("auto", "off"):
        try:
            p = int(mod)
        except ValueError:
            raise UsageError(f"--mod expects auto, off or a prime, got {mod!r}") from None
        if not is_prime(p):
            raise NotPrime(f"--mod {p} is not prime")
    if ns.nmax is not None and ns.nmax < 0:
        raise UsageError("--nmax must be >= 0")
    return RunConfig(ns.command, ns.catalog, parse_params(ns.param), ns.input, ns.nmax,
                     mod, ns.seed, ns.out, ns.format, ns.of)


def run(cfg: RunConfig) -> tuple[int, str]:
    a = load(cfg)
    code, result, window = HANDLERS[cfg.command](cfg, a)
    env = envelope(cfg, a, result, dict(window))
    if cfg.format == "md":
        text = to_markdown(env, result)
    else:
        text = json.dumps(env, indent=2) + "\n"
    return code, text


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        code, text = run(cfg)
        if cfg.out:
            write_atomic(cfg.out, text)
        else:
            sys.stdout.write(text)
    except ResourceLimit as exc:
        print(f"regal: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except FormatError as exc:
        print(f"regal: {ns.input or 'input'}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, UnknownKey, InvalidParam, NotPrime, DimensionMismatch, InsufficientData) as exc:
        print(f"regal: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"regal: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
