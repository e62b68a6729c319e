"""
Command-line front end.

Every subcommand builds a JSON-ready payload (rationals as "p/q" strings)
and renders it either as JSON (--json) or as aligned text.  Expensive
payloads go through an on-disk cache keyed by a hash of the operation,
its exact parameters and the truncation.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import re
import sys
import tempfile
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, List, Optional, Sequence

from .exact import Q, SeriesError, fmt
from .levels import (AdmissibleLevel, DomainError, coset_triple, dual_levels, ribbon_known,
                     virasoro_c, virasoro_h)

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 2, 64

ENV_PREFIX = "ADMSL2_"
CACHE_VERSION = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # let "-1/2" through as a positional value
        self._negative_number_matcher = re.compile(r"^-\d+(/\d+)?$|^-\d*\.\d+$")
        self._has_negative_number_optionals = []

    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


@dataclass
class Config:
    q_order: Fraction = Fraction(8)
    z_window: int = 8
    cache_dir: Optional[Path] = None
    use_cache: bool = True
    seed: int = 0
    json: bool = False

    def __post_init__(self):
        if self.q_order <= 0:
            raise DomainError("--q-order must be positive")
        if self.z_window <= 0:
            raise DomainError("--z-window must be positive")


def default_cache_dir() -> Path:
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "admsl2"


# ---------------------------------------------------------------------------
# cache

def cache_key(op: str, params: dict, cfg: Config) -> str:
    blob = json.dumps({"v": CACHE_VERSION, "op": op, "params": params,
                       "q_order": fmt(cfg.q_order), "z_window": cfg.z_window},
                      sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def cached(cfg: Config, op: str, params: dict, producer: Callable[[], dict]) -> dict:
    """Read-through cache.  Corrupt entries are recomputed and overwritten."""
    if not cfg.use_cache or cfg.cache_dir is None:
        return producer()
    path = Path(cfg.cache_dir) / f"{cache_key(op, params, cfg)}.json"
    if path.exists():
        try:
            with open(path, encoding="utf-8") as fh:
                entry = json.load(fh)
            if entry.get("op") == op and "payload" in entry:
                return entry["payload"]
            raise ValueError("entry does not match its key")
        except (OSError, ValueError) as exc:
            warnings.warn(f"corrupt cache entry {path.name} ({exc}); recomputing")
    payload = producer()
    # round-trip so a fresh result and a cache hit are byte-identical
    payload = json.loads(json.dumps(payload))
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump({"op": op, "params": params, "payload": payload}, fh)
        os.replace(tmp, path)
    except OSError as exc:
        warnings.warn(f"cache write failed: {exc}")
    return payload


# ---------------------------------------------------------------------------
# rendering

def _cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return fmt(x)
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_cell(y) for y in x) + "]"
    if isinstance(x, dict):
        return "{" + ", ".join(f"{k}: {_cell(v)}" for k, v in x.items()) + "}"
    return str(x)


def _table(rows: List[dict]) -> List[str]:
    if not rows:
        return ["(none)"]
    cols = list(rows[0])
    cells = [[_cell(r.get(c, "")) for c in cols] for r in rows]
    width = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    out = ["  ".join(c.ljust(w) for c, w in zip(cols, width)).rstrip()]
    out += ["  ".join(x.ljust(w) for x, w in zip(row, width)).rstrip() for row in cells]
    return out


def render_text(payload) -> str:
    if isinstance(payload, list):
        return "\n".join(_table(payload))
    lines = []
    scalars = {k: v for k, v in payload.items()
               if not (isinstance(v, list) and v and isinstance(v[0], dict))}
    if scalars:
        w = max(len(k) for k in scalars)
        lines += [f"{k.ljust(w)}  {_cell(v)}" for k, v in scalars.items()]
    for k, v in payload.items():
        if k not in scalars:
            lines += ["", f"{k}:"] + ["  " + s for s in _table(v)]
    return "\n".join(lines)


def render(payload, cfg: Config) -> str:
    if cfg.json:
        return json.dumps(payload, sort_keys=True, indent=2)
    return render_text(payload)


# ---------------------------------------------------------------------------
# argument types

def rational(text: str) -> Fraction:
    try:
        return Q(text)
    except (ValueError, ZeroDivisionError, TypeError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def label(text: str):
    from .affine import parse_label
    try:
        return parse_label(text)
    except DomainError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None


_MIN_RE = re.compile(r"^\s*M\[(\d+),(\d+)\]@\((\d+),(\d+)\)\s*$")


def minimal_label(text: str):
    from .virasoro import MinimalLabel
    m = _MIN_RE.match(text)
    if not m:
        raise UsageError(f"cannot parse minimal-model label {text!r}")
    r, s, u, v = (int(g) for g in m.groups())
    return MinimalLabel(u, v, r, s)


def _series_json(f) -> dict:
    return {"terms": [[fmt(e), fmt(c)] for e, c in sorted(f.items())],
            "prec": None if f.prec is None else fmt(f.prec)}


def _series_str(f) -> str:
    return repr(f)


# ---------------------------------------------------------------------------
# subcommands

def cmd_levels(a, cfg: Config):
    lvl = AdmissibleLevel(a.u, a.v)
    dual = dual_levels(lvl)
    out = {"u": lvl.u, "v": lvl.v, "k": fmt(lvl.k), "t": fmt(lvl.t),
           "c_vir": fmt(lvl.c_vir), "c_sug": fmt(lvl.c_sug),
           "integral": lvl.integral, "dual k_w": fmt(dual.k_w),
           "ribbon": ribbon_known(lvl)}
    if not lvl.integral:
        tri = coset_triple(lvl)
        out["k+1"] = f"{fmt(tri.shifted.k)} {tri.shifted}"
        out["k'"] = fmt(tri.k_prime)
        out["minimal"] = str(tri.minimal)
    return out


def cmd_singular(a, cfg: Config):
    from .virasoro import find_singular_vectors, is_singular
    if a.t is not None:
        if a.r is None or a.s is None:
            raise DomainError("--t needs both --r and --s")
        c, h = virasoro_c(a.t), virasoro_h(a.r, a.s, a.t)
        grade = a.level if a.level is not None else a.r * a.s
    else:
        if a.c is None or a.h is None or a.level is None:
            raise DomainError("give either --t/--r/--s or all of --c, --h, --level")
        c, h, grade = a.c, a.h, a.level
    if grade < 1:
        raise DomainError("level must be at least 1")
    params = {"c": fmt(c), "h": fmt(h), "level": grade}

    def produce():
        vecs = find_singular_vectors(c, h, grade)
        return {"c": fmt(c), "h": fmt(h), "level": grade, "count": len(vecs),
                "vectors": [{"index": i, "annihilated": is_singular(v), "partition": t["partition"],
                             "coeff": t["coeff"]}
                            for i, v in enumerate(vecs) for t in v.to_json()]}
    out = cached(cfg, "singular", params, produce)
    if a.random_h:
        out = dict(out)
        rng = random.Random(cfg.seed)
        found = 0
        for _ in range(a.random_h):
            hh = Fraction(rng.randint(-400, 400), rng.randint(1, 97))
            found += len(find_singular_vectors(c, hh, grade))
        out["random_h_samples"] = a.random_h
        out["random_h_hits"] = found
    return out


def cmd_char(a, cfg: Config):
    from .affine import character
    from .virasoro import minimal_character
    text = a.label
    if _MIN_RE.match(text):
        lab = minimal_label(text)

        def produce():
            f = minimal_character(lab, cfg.q_order)
            return {"module": str(lab), "c": fmt(lab.c), "h": fmt(lab.h),
                    "series": _series_str(f), "terms": _series_json(f)["terms"]}
        return cached(cfg, "char-min", {"label": str(lab)}, produce)
    x = label(text)

    def produce():
        ch = character(x, cfg.q_order, (-cfg.z_window, cfg.z_window))
        return {"module": str(x), "z_class": fmt(ch.coset),
                "coefficients": [{"z": fmt(mu), "series": _series_str(ch[mu])}
                                 for mu in ch.exponents()]}
    return cached(cfg, "char", {"label": str(x)}, produce)


def cmd_fuse(a, cfg: Config):
    from .fusion import fuse
    from .virasoro import minimal_fusion
    if _MIN_RE.match(a.left) or _MIN_RE.match(a.right):
        m1, m2 = minimal_label(a.left), minimal_label(a.right)
        res = minimal_fusion(m1, m2)
        return [{"label": str(x), "multiplicity": n} for x, n in sorted(res.items(), key=lambda t: str(t[0]))]
    try:
        r = int(a.left)
    except ValueError:
        raise UsageError(f"first fusion factor must be an integer r or a minimal label, got {a.left!r}")
    return fuse(r, label(a.right)).to_json()


def cmd_branch(a, cfg: Config):
    from .fusion import branching_rule, induct_decompose
    x = label(a.label)
    if a.induct is not None:
        return induct_decompose(a.induct, x).to_json()
    if a.a is None:
        raise DomainError("branch needs --a (level-one index) or --induct r")
    return branching_rule(x, a.a).to_json()


def cmd_branch_verify(a, cfg: Config):
    from .fusion import branching_char_verify
    lvl = AdmissibleLevel(a.u, a.v)
    params = {"u": a.u, "v": a.v, "r": a.r, "s": a.s, "a": a.a, "flow": a.flow,
              "lam": fmt(a.lam), "rhs_lam": None if a.rhs_lam is None else fmt(a.rhs_lam)}

    def produce():
        res = branching_char_verify(lvl, a.r, a.s, a.a, a.flow, a.lam, cfg.q_order,
                                    (-cfg.z_window, cfg.z_window), a.rhs_lam)
        nonzero = [{"z": fmt(mu), "residual": _series_str(res.residual[mu])}
                   for mu in res.residual.exponents() if not res.residual[mu].is_zero()]
        return {"level": str(lvl), "r": a.r, "s": a.s, "a": a.a, "flow": a.flow,
                "lam": fmt(a.lam), "q_order": fmt(cfg.q_order),
                "z_points": len(res.lhs.exponents()), "residual_zero": res.is_zero,
                "nonzero": nonzero}
    return cached(cfg, "branch-verify", params, produce)


def cmd_blocks(a, cfg: Config):
    from .affine import block_member, block_of, normal_form, structure_of
    x = label(a.label)
    out = {"module": str(x)}
    head = x
    if x.kind in ("P", "E+", "E-"):
        sd = structure_of(x)
        head = normal_form(sd.top if x.kind == "P" else sd.quotient)
        out["head"] = str(head)
    else:
        out["normal_form"] = str(normal_form(x))
    bid, pos = block_of(head)
    out.update(block=str(bid), position=pos)
    if x.kind in ("P", "E+", "E-"):
        out.update(sd.to_json())
    if a.members and pos is not None:
        out["members"] = [{"position": M, "module": str(block_member(x.level, bid.r, bid.n, M))}
                          for M in range(pos - a.members, pos + a.members + 1)]
    return out


def _n2_params(a) -> dict:
    return {"ell": fmt(a.ell), "h": fmt(a.h), "lam": fmt(a.lam), "factor": a.factor}


def cmd_n2_verify(a, cfg: Config):
    from .n2 import verify_relations
    params = dict(_n2_params(a), level=fmt(a.level))

    def produce():
        rep = verify_relations(a.ell, a.h, a.lam, a.level, a.factor)
        return rep.to_json()
    return cached(cfg, "n2-verify", params, produce)


def cmd_n2_c1(a, cfg: Config):
    from .n2 import N2ModeOp, c1_membership, c1_quotient_table, ff_apply_word, top_vector
    params = dict(_n2_params(a), offset_max=fmt(a.offset_max))

    def produce():
        rows = c1_quotient_table(a.ell, a.h, a.lam, a.factor, a.offset_max)
        z = top_vector(a.ell, a.h, a.lam, a.factor)
        target = ff_apply_word([N2ModeOp("T", -1), N2ModeOp("Gplus", Fraction(-1, 2))], z)
        return {"ell": fmt(a.ell), "h": fmt(a.h), "lam": fmt(a.lam), "factor": a.factor,
                "T_{-1} G+_{-1/2} z in C1": c1_membership(a.ell, a.h, a.lam, a.factor, target),
                "quotient_total": sum(q - c for _, _, q, c in rows),
                "sectors": [{"offset": fmt(o), "charge": ch, "dim": q, "dim C1": c,
                             "dim quotient": q - c} for o, ch, q, c in rows]}
    return cached(cfg, "n2-c1", params, produce)


def cmd_c1_vir(a, cfg: Config):
    from .virasoro import HighestWeightModule, c1_quotient_dims
    if a.t is not None:
        if a.r is None or a.s is None:
            raise DomainError("--t needs both --r and --s")
        c, h = virasoro_c(a.t), virasoro_h(a.r, a.s, a.t)
    else:
        if a.c is None or a.h is None:
            raise DomainError("give either --t/--r/--s or both --c and --h")
        c, h = a.c, a.h
    params = {"c": fmt(c), "h": fmt(h), "kind": a.kind, "level_max": a.level_max}

    def produce():
        mod = HighestWeightModule(c, h, a.kind)
        dims = c1_quotient_dims(mod, a.level_max)
        return {"c": fmt(c), "h": fmt(h), "kind": a.kind, "module_dims": mod.dims(a.level_max),
                "quotient_dims": dims, "quotient_total": sum(dims)}
    return cached(cfg, "c1-vir", params, produce)


COMMANDS = {
    "levels": cmd_levels, "singular": cmd_singular, "char": cmd_char, "fuse": cmd_fuse,
    "branch": cmd_branch, "branch-verify": cmd_branch_verify, "blocks": cmd_blocks,
    "n2-verify": cmd_n2_verify, "n2-c1": cmd_n2_c1, "c1-vir": cmd_c1_vir,
}


# ---------------------------------------------------------------------------
# parser

def _global_options(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--json", action="store_true", default=d, help="machine-readable output")
    p.add_argument("--q-order", type=rational, default=d, help="q-truncation order (default 8)")
    p.add_argument("--z-window", type=int, default=d, help="z-exponent window half-width (default 8)")
    p.add_argument("--cache-dir", default=d, help="cache directory")
    p.add_argument("--no-cache", action="store_true", default=d, help="bypass the cache")
    p.add_argument("--seed", type=int, default=d, help="seed for sampled checks")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="admsl2", description=__doc__.strip().splitlines()[0])
    _global_options(p, suppress=False)
    sub = p.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    sub.required = True

    def add(name, help_):
        sp = sub.add_parser(name, help=help_)
        _global_options(sp, suppress=True)
        return sp

    sp = add("levels", "admissible level data for (u, v)")
    sp.add_argument("u", type=int)
    sp.add_argument("v", type=int)

    for name, help_ in (("singular", "Virasoro singular vectors"),
                        ("c1-vir", "dimensions of W/C1(W) for a Virasoro module")):
        sp = add(name, help_)
        sp.add_argument("--t", type=rational)
        sp.add_argument("--r", type=int)
        sp.add_argument("--s", type=int)
        sp.add_argument("--c", type=rational)
        sp.add_argument("--h", type=rational)
        if name == "singular":
            sp.add_argument("--level", type=int)
            sp.add_argument("--random-h", type=int, default=0,
                            help="also test this many random h at the same level")
        else:
            sp.add_argument("--kind", choices=("verma", "simple"), default="simple")
            sp.add_argument("--level-max", type=int, default=6)

    sp = add("char", "character of an E-kind module or a minimal model M[r,s]@(u,v)")
    sp.add_argument("label")

    sp = add("fuse", "fusion L[r] x M (affine) or M[..] x M[..] (minimal)")
    sp.add_argument("left")
    sp.add_argument("right")

    sp = add("branch", "coset branching rule or induction image")
    sp.add_argument("label")
    sp.add_argument("--a", type=int)
    sp.add_argument("--induct", type=int, metavar="R")

    sp = add("branch-verify", "exact check of the branching character identity")
    for n in ("u", "v", "r", "s", "a"):
        sp.add_argument(n, type=int)
    sp.add_argument("flow", type=int)
    sp.add_argument("lam", type=rational)
    sp.add_argument("--rhs-lam", type=rational)

    sp = add("blocks", "block membership and Loewy data")
    sp.add_argument("label")
    sp.add_argument("--members", type=int, default=0, help="list this many neighbours")

    for name, help_ in (("n2-verify", "check the N=2 relations on the free-field module"),
                        ("n2-c1", "C1 quotient table of the free-field module")):
        sp = add(name, help_)
        sp.add_argument("ell", type=rational)
        sp.add_argument("h", type=rational)
        sp.add_argument("lam", type=rational)
        sp.add_argument("--factor", choices=("verma", "simple"),
                        default="verma" if name == "n2-verify" else "simple")
        if name == "n2-verify":
            sp.add_argument("--level", type=rational, default=Fraction(2))
        else:
            sp.add_argument("--offset-max", type=rational, default=Fraction(3, 2))
    return p


def _env(name: str) -> Optional[str]:
    v = os.environ.get(ENV_PREFIX + name)
    return v if v not in (None, "") else None


def _truthy(s: str) -> bool:
    return s.strip().lower() in ("1", "true", "yes", "on")


def make_config(ns: argparse.Namespace) -> Config:
    """Command line beats environment beats defaults."""
    def pick(attr, env, conv, default):
        v = getattr(ns, attr, None)
        if v is not None:
            return v
        e = _env(env)
        if e is None:
            return default
        try:
            return conv(e)
        except (ValueError, ZeroDivisionError, argparse.ArgumentTypeError):
            raise UsageError(f"bad value {e!r} for {ENV_PREFIX}{env}") from None

    no_cache = pick("no_cache", "NO_CACHE", _truthy, False)
    cache_dir = pick("cache_dir", "CACHE_DIR", str, None)
    return Config(q_order=pick("q_order", "Q_ORDER", rational, Fraction(8)),
                  z_window=pick("z_window", "Z_WINDOW", int, 8),
                  cache_dir=Path(cache_dir) if cache_dir else default_cache_dir(),
                  use_cache=not no_cache,
                  seed=pick("seed", "SEED", int, 0),
                  json=pick("json", "JSON", _truthy, False))


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(list(sys.argv[1:] if argv is None else argv))
        cfg = make_config(ns)
        payload = COMMANDS[ns.command](ns, cfg)
    except UsageError as exc:
        print(str(exc), file=stderr)
        return EXIT_USAGE
    except (DomainError, SeriesError, ZeroDivisionError) as exc:
        print(f"admsl2: domain error: {exc}", file=stderr)
        return EXIT_DOMAIN
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    print(render(payload, cfg), file=stdout)
    return EXIT_OK


def main() -> None:
    sys.exit(run())
