"""Command-line front end.

Subcommands: ``expand``, ``density``, ``enumerate``, ``variants``,
``identities`` and ``verify``. Every run is described by a RunConfig that
can be dumped to JSON and replayed with ``--config``.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import errors

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PRECISION = 3
EXIT_HORIZON = 4
EXIT_VERIFY = 5

_EXIT_FOR = [
    (errors.PrecisionExhausted, EXIT_PRECISION),
    (errors.HorizonExhausted, EXIT_HORIZON),
    (errors.BudgetExceeded, EXIT_HORIZON),
    (errors.InvalidSpec, EXIT_CONFIG),
    (errors.UnsupportedBase, EXIT_CONFIG),
    (errors.FrequencyOutOfRange, EXIT_CONFIG),
    (errors.OutOfDomain, EXIT_CONFIG),
    (errors.DigitOutOfAlphabet, EXIT_CONFIG),
    (errors.EmptySequence, EXIT_CONFIG),
    (errors.IdentityViolated, EXIT_VERIFY),
    (errors.InfeasibleOrbit, EXIT_VERIFY),
]

COMMANDS = ("expand", "density", "enumerate", "variants", "identities", "verify")


@dataclass
class RunConfig:
    command: str
    beta_spec: str = "pg:2"
    algo: str = "greedy"
    n: int = 100_000
    seed: int = 0
    x: str | None = None
    p: str | None = None
    m: int | None = None
    depth: int = 10
    bins: int = 256
    burn_in: int = 1000
    samples: int = 1
    count: int = 2
    horizon: int = 10_000
    tolerance: float = 0.02
    base_bits: int = 64
    max_restarts: int = 3
    digits_budget: int = 2048
    backend: str | None = None
    output: str | None = None
    summary: str | None = None
    fmt: str = "text"
    only: list[int] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise errors.InvalidSpec(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def policy(self):
        from .numerics import PrecisionPolicy
        try:
            return PrecisionPolicy(self.base_bits, self.max_restarts, self.digits_budget)
        except ValueError as exc:
            raise errors.InvalidSpec(str(exc)) from exc


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return repr(float(v))


def _start_point(cfg: RunConfig, beta):
    from .beta import sample_points
    if cfg.x is None or cfg.x == "random":
        return sample_points(beta, 1, cfg.seed)[0]
    try:
        return Fraction(cfg.x)
    except (ValueError, ZeroDivisionError) as exc:
        raise errors.InvalidSpec(f"bad start point {cfg.x!r}") from exc


def _write(path: str | None, text: str, out) -> None:
    if path is None or path == "-":
        out.write(text)
    else:
        Path(path).write_text(text)


def _emit(cfg: RunConfig, payload: dict, out) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n"
    _write(cfg.summary, text, out)


def _tuned_params(cfg: RunConfig, beta=None):
    from .tuned import pseudo_golden, target_to_cut
    if beta is None:
        m = cfg.m if cfg.m is not None else _pg_index(cfg.beta_spec)
        beta = pseudo_golden(m)
    if beta.pg_index is None:
        raise errors.UnsupportedBase("the tuned map needs a pseudo-golden base (pg:<m>)")
    return target_to_cut(beta, beta.pg_index, cfg.p if cfg.p is not None else "0.5")


def _pg_index(spec: str) -> int:
    from .beta import make_beta
    b = make_beta(spec)
    if b.pg_index is None:
        raise errors.UnsupportedBase(f"{spec} is not a pseudo-golden base")
    return b.pg_index


def _generator(cfg: RunConfig, beta):
    from .balanced import balanced_expand
    from .beta import greedy_expand
    from .tuned import tuned_expand
    kw = {"policy": cfg.policy(), "backend": cfg.backend}
    if cfg.algo == "greedy":
        return lambda b, x, n: greedy_expand(b, x, n, **kw)
    if cfg.algo == "balanced":
        return lambda b, x, n: balanced_expand(b, x, n, **kw)
    if cfg.algo == "tuned":
        params = _tuned_params(cfg, beta)
        return lambda b, x, n: tuned_expand(params, x, n, **kw)
    raise errors.InvalidSpec(f"unknown algorithm {cfg.algo!r}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_expand(cfg: RunConfig, out) -> int:
    from .beta import make_beta
    from .frequency import balance_gap, freq_profile

    beta = make_beta(cfg.beta_spec)
    if cfg.algo != "greedy":
        beta.require_non_integer(f"the {cfg.algo} generator")
    x = _start_point(cfg, beta)
    seq = _generator(cfg, beta)(beta, x, cfg.n)
    _write(cfg.output, seq.as_string() + "\n", out)
    prof = freq_profile(seq, 0)
    freq = [prof.counts[k] / prof.n for k in range(prof.size)]
    p_target = None
    abs_error = None
    if cfg.algo == "tuned":
        p_target = str(_tuned_params(cfg, beta).p)
        abs_error = abs(freq[0] - float(Fraction(p_target)))
    payload = {
        "beta": beta.spec, "algo": cfg.algo, "x": str(x), "seed": cfg.seed, "n": cfg.n,
        "counts": list(prof.counts), "freq": freq, "p_target": p_target, "abs_error": abs_error,
        "balance_gap": balance_gap(prof), "ties": list(seq.ties), "flags": sorted(seq.flags),
    }
    if cfg.output not in (None, "-") or cfg.summary is not None:
        _emit(cfg, payload, out)
    return EXIT_OK


def cmd_density(cfg: RunConfig, out) -> int:
    from .density import build_density, orbit_histogram_compare

    params = _tuned_params(cfg)
    x = _start_point(cfg, params.beta)
    model = build_density(params)
    cmp = orbit_histogram_compare(params, x, cfg.n, cfg.burn_in, cfg.bins, model=model,
                                  policy=cfg.policy(), backend=cfg.backend)
    _write(cfg.output, cmp.to_csv(), out)
    payload = {"m": params.m, "p": str(params.p), "x": str(x), "seed": cfg.seed,
               "steps": cfg.n, "burn_in": cfg.burn_in, "bins": cfg.bins, "l1": cmp.l1,
               "mu_total": float(model.mu_total), "b": float(params.b), "cut": float(params.cut)}
    if cfg.output not in (None, "-") or cfg.summary is not None:
        _emit(cfg, payload, out)
    return EXIT_OK


def cmd_enumerate(cfg: RunConfig, out) -> int:
    from .beta import make_beta
    from .multiplicity import enumerate_prefixes, export_prefixes

    beta = make_beta(cfg.beta_spec)
    x = _start_point(cfg, beta)
    count, words = enumerate_prefixes(beta, x, cfg.depth)
    _write(cfg.output, export_prefixes(words), out)
    if cfg.output not in (None, "-") or cfg.summary is not None:
        _emit(cfg, {"beta": beta.spec, "x": str(x), "depth": cfg.depth, "count": count}, out)
    return EXIT_OK


def cmd_variants(cfg: RunConfig, out) -> int:
    from .beta import make_beta
    from .multiplicity import variants

    beta = make_beta(cfg.beta_spec)
    x = _start_point(cfg, beta)
    gen = _generator(cfg, beta)
    streams = variants(beta, x, lambda b, y, n, **kw: gen(b, y, n), count=cfg.count,
                       horizon=cfg.horizon, n=cfg.n, policy=cfg.policy(), backend=cfg.backend)
    _write(cfg.output, "".join(s.as_string() + "\n" for s in streams), out)
    rows = [{"switch_index": s.meta.get("switch_index"), "alt_digit": s.meta.get("alt_digit"),
             "zero_freq": float((s.digits == 0).mean()) if len(s) else None} for s in streams]
    if cfg.output not in (None, "-") or cfg.summary is not None:
        _emit(cfg, {"beta": beta.spec, "x": str(x), "seed": cfg.seed, "n": cfg.n,
                    "algo": cfg.algo, "variants": rows}, out)
    return EXIT_OK


def cmd_identities(cfg: RunConfig, out) -> int:
    from .density import build_density, density_identities
    from .tuned import constant_checks, orbit_identities

    params = _tuned_params(cfg)
    report = orbit_identities(params)
    checks = {**constant_checks(params), **density_identities(build_density(params))}
    payload = {"m": params.m, "p": str(params.p), "c": _fmt(params.c), "b": _fmt(params.b),
               "cut": _fmt(params.cut), "orbit_rows": report["rows"], "checks": checks}
    _emit(cfg, payload, out)
    return EXIT_OK if all(checks.values()) else EXIT_VERIFY


def cmd_verify(cfg: RunConfig, out) -> int:
    from .acceptance import run_all

    def progress(r):
        print(r.line(), file=sys.stderr, flush=True)

    results = run_all(only=set(cfg.only) or None, progress=progress)
    payload = {"passed": all(r.passed for r in results), "results": [r.as_dict() for r in results]}
    _emit(cfg, payload, out)
    return EXIT_OK if payload["passed"] else EXIT_VERIFY


HANDLERS = {
    "expand": cmd_expand,
    "density": cmd_density,
    "enumerate": cmd_enumerate,
    "variants": cmd_variants,
    "identities": cmd_identities,
    "verify": cmd_verify,
}


def run(cfg: RunConfig, out=None) -> int:
    """Execute a config; returns the process exit status."""
    out = out or sys.stdout
    if cfg.command not in HANDLERS:
        print(f"error: unknown command {cfg.command!r}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", errors.DegenerateEndpoint)
            return HANDLERS[cfg.command](cfg, out)
    except errors.BetaFreqError as exc:
        for kind, code in _EXIT_FOR:
            if isinstance(exc, kind):
                break
        else:
            code = 1
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return code


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", dest="output", help="data output path (default stdout)")
    p.add_argument("--summary", help="JSON summary path (default stdout when --out is a file)")
    p.add_argument("--base-bits", type=int, default=64)
    p.add_argument("--max-restarts", type=int, default=3)
    p.add_argument("--digits-budget", type=int, default=2048)
    p.add_argument("--backend", choices=("cython", "python"))
    p.add_argument("--config", help="load a RunConfig JSON; other flags are ignored")
    p.add_argument("--dump-config", action="store_true", help="print the RunConfig and exit")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="betafreq", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="generate digits of one point")
    p.add_argument("--beta", dest="beta_spec", default="pg:2")
    p.add_argument("--algo", choices=("greedy", "balanced", "tuned"), default="greedy")
    p.add_argument("--p")
    p.add_argument("--x", help="start point (decimal or fraction); seeded random if omitted")
    p.add_argument("--n", type=int, default=100_000)
    _common(p)

    p = sub.add_parser("density", help="orbit histogram against the exact invariant density")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--p", default="0.5")
    p.add_argument("--x")
    p.add_argument("--steps", dest="n", type=int, default=1_000_000)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--bins", type=int, default=256)
    _common(p)

    p = sub.add_parser("enumerate", help="all feasible digit prefixes of a point")
    p.add_argument("--beta", dest="beta_spec", default="pg:2")
    p.add_argument("--x")
    p.add_argument("--depth", type=int, default=10)
    _common(p)

    p = sub.add_parser("variants", help="several distinct expansions of one point")
    p.add_argument("--beta", dest="beta_spec", default="pg:2")
    p.add_argument("--algo", choices=("greedy", "balanced", "tuned"), default="greedy")
    p.add_argument("--p")
    p.add_argument("--x")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--count", type=int, default=2)
    p.add_argument("--horizon", type=int, default=10_000)
    _common(p)

    p = sub.add_parser("identities", help="exact checks of the tuned-map constants")
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--p", default="0.5")
    _common(p)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--only", type=lambda s: [int(v) for v in s.split(",") if v], default=[])
    _common(p)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if getattr(ns, "config", None):
        return RunConfig.from_json(Path(ns.config).read_text())
    names = {f.name for f in dataclasses.fields(RunConfig)}
    data = {k: v for k, v in vars(ns).items() if k in names and v is not None}
    if ns.command in ("density", "identities"):
        data["beta_spec"] = f"pg:{ns.m}"
        data["algo"] = "tuned"
    return RunConfig(**data)


def main(argv=None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = config_from_args(ns)
    except (OSError, ValueError, TypeError) as exc:
        print(f"error: bad config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if ns.dump_config:
        print(cfg.to_json())
        return EXIT_OK
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
