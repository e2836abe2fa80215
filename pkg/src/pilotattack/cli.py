"""
Command-line front end.

    pilotattack design | region | sinr-curve | monte-carlo [options]

Exit codes: 0 success, 1 internal error, 2 invalid or infeasible scenario.
Options not given on the command line fall back to ``PILOTATTACK_<NAME>``
environment variables (SEED, FORMAT, WORKERS, REALIZATIONS, ATTACKER, NT)
and then to the scenario file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import yaml
from pydantic import ValidationError

from . import __version__
from .errors import DomainError, PilotAttackError
from .io import csv_text, json_text
from .link_sim import MIN_REALIZATIONS, monte_carlo_sinr, sinr_report
from .load_region import region_surface
from .scenario import build_attackers, design_network, load_scenario, scenario_hash

ENV_PREFIX = "PILOTATTACK_"

CURVE_COLUMNS = [
    "attacker", "cell", "user", "Nt", "gamma_target", "P", "delta", "alpha", "sinr_cf", "sinr_inf",
    "sinr_mc", "mc_halfwidth", "target_met_cf", "target_met_inf",
]
MC_COLUMNS = ["attacker", "cell", "user", "Nt", "sinr_cf", "sinr_mc", "mc_halfwidth", "agreement"]
REGION_COLUMNS = ["gamma1", "gamma2", "gamma3_boundary", "inside_flag"]


class UsageError(PilotAttackError):
    pass


def parse_nt(text: str) -> list[int]:
    """``"50,200,1000"`` or inclusive ``"start:stop:step"``."""
    text = text.strip()
    try:
        if ":" in text:
            parts = [int(p) for p in text.split(":")]
            if len(parts) not in (2, 3):
                raise ValueError
            start, stop = parts[0], parts[1]
            step = parts[2] if len(parts) == 3 else 1
            if step <= 0:
                raise ValueError
            values = list(range(start, stop + 1, step))
        else:
            values = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"cannot parse Nt list {text!r}") from None
    if not values or any(v < 1 for v in values):
        raise UsageError(f"Nt list {text!r} must contain positive integers")
    return values


def _option(args, name, cast=str):
    value = getattr(args, name)
    if value is not None:
        return value
    env = os.environ.get(ENV_PREFIX + name.upper())
    if env is None:
        return None
    try:
        return cast(env)
    except ValueError:
        raise UsageError(f"bad value for {ENV_PREFIX}{name.upper()}: {env!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pilotattack", description=__doc__.split("\n\n")[0].strip())
    p.add_argument("--version", action="version", version=f"pilotattack {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in [
        ("design", "design pilots and powers; dump sequences, correlations, delta, P"),
        ("region", "load-region boundary surfaces with/without the attacker"),
        ("sinr-curve", "per-user SINR versus antenna count"),
        ("monte-carlo", "Monte-Carlo check of the closed-form SINR"),
    ]:
        s = sub.add_parser(name, help=help_)
        s.add_argument("--config", help="scenario file (YAML or JSON)")
        s.add_argument("--out", help="output path (default: stdout)")
        s.add_argument("--seed", type=int)
        s.add_argument("--attacker", choices=["on", "off", "both"])
        s.add_argument("--nt", help="comma list or start:stop:step (inclusive)")
        s.add_argument("--realizations", type=int)
        s.add_argument("--format", choices=["csv", "json"])
        s.add_argument("--workers", type=int)
    return p


def _meta(scenario, command, **extra):
    meta = {"tool": "pilotattack", "version": __version__, "command": command,
            "scenario": scenario_hash(scenario), "seed": scenario.seed}
    meta.update(extra)
    return meta


def _attack_states(choice: str) -> list[bool]:
    return {"on": [True], "off": [False], "both": [False, True]}[choice]


def cmd_design(scenario, opts) -> list[tuple[str | None, str]]:
    res = design_network(scenario)
    L, K = res.config.L, res.config.K
    rho = res.book.correlations.reshape(L * K, L * K)
    labels = [f"{l + 1}_{k + 1}" for l in range(L) for k in range(K)]
    rows = []
    for l in range(L):
        for k in range(K):
            row = {
                "cell": l + 1, "user": k + 1,
                "gamma_target": res.gamma_target[l, k], "gamma_design": res.gamma_design[l, k],
                "delta": res.delta[l, k], "P": res.P[l, k],
            }
            row.update({f"q{t + 1}": res.book.sequences[l, k, t] for t in range(res.config.tau)})
            row.update({f"rho_{lab}": rho[l * K + k, n] for n, lab in enumerate(labels)})
            rows.append(row)
    meta = _meta(scenario, "design")
    if opts["format"] == "json":
        return [(opts["out"], json_text({"meta": meta, "tau": res.config.tau, "users": rows, "rho": rho}))]
    cols = ["cell", "user", "gamma_target", "gamma_design", "delta", "P"]
    cols += [f"q{t + 1}" for t in range(res.config.tau)] + [f"rho_{lab}" for lab in labels]
    return [(opts["out"], csv_text(rows, cols, meta))]


def _surface(scenario, attack: bool):
    r = scenario.region
    eb = scenario.attackers.effective_bandwidth if attack else 0.0
    axis = r.axis()
    return region_surface(r.fixed_gamma, eb, axis, axis, scenario.network.tau, scenario.network.L)


def cmd_region(scenario, opts):
    states = _attack_states(opts["attacker"] or "both")
    surfaces = {on: _surface(scenario, on) for on in states}
    tag = {False: "off", True: "on"}
    if opts["format"] == "json":
        doc = {"meta": _meta(scenario, "region"), "surfaces": {}}
        for on, s in surfaces.items():
            doc["surfaces"][tag[on]] = {
                "eb_boundary": s.eb_boundary,
                "points": [dict(zip(REGION_COLUMNS, r)) for r in s.rows()],
            }
        return [(opts["out"], json_text(doc))]
    outputs = []
    for on, s in surfaces.items():
        meta = _meta(scenario, "region", attacker=tag[on], eb_boundary=format(s.eb_boundary, ".9g"))
        text = csv_text((dict(zip(REGION_COLUMNS, r)) for r in s.rows()), REGION_COLUMNS, meta)
        path = opts["out"]
        if path is not None and len(surfaces) > 1:
            p = Path(path)
            path = str(p.with_name(f"{p.stem}_{tag[on]}{p.suffix}"))
        outputs.append((path, text))
    return outputs


def _realizations(opts, scenario):
    n = opts["realizations"]
    return scenario.monte_carlo.realizations if n is None else n


def cmd_sinr_curve(scenario, opts):
    res = design_network(scenario)
    nts = opts["nt"] or scenario.sweep.nt
    n_mc = opts["realizations"]
    if n_mc is not None and n_mc < MIN_REALIZATIONS:
        raise DomainError(f"need at least {MIN_REALIZATIONS} realizations, got {n_mc}")
    rows = []
    for on in _attack_states(opts["attacker"] or "both"):
        att = build_attackers(scenario, on)
        for Nt in nts:
            mc = None
            if n_mc is not None:
                mc = monte_carlo_sinr(res.book, res.config, att, res.P, Nt, n_mc, scenario.seed, opts["workers"])
            rep = sinr_report(res.book, res.config, att, res.gamma_target, res.P, Nt, mc)
            for row in rep.rows():
                rows.append({"attacker": "on" if on else "off", **row})
    meta = _meta(scenario, "sinr-curve")
    if opts["format"] == "json":
        return [(opts["out"], json_text({"meta": meta, "rows": rows}))]
    return [(opts["out"], csv_text(rows, CURVE_COLUMNS, meta))]


def cmd_monte_carlo(scenario, opts):
    n_mc = _realizations(opts, scenario)
    if n_mc < MIN_REALIZATIONS:
        raise DomainError(f"need at least {MIN_REALIZATIONS} realizations, got {n_mc}")
    res = design_network(scenario)
    nts = opts["nt"] or scenario.monte_carlo.nt
    rows = []
    for on in _attack_states(opts["attacker"] or "both"):
        att = build_attackers(scenario, on)
        for Nt in nts:
            mc = monte_carlo_sinr(res.book, res.config, att, res.P, Nt, n_mc, scenario.seed, opts["workers"])
            rep = sinr_report(res.book, res.config, att, res.gamma_target, res.P, Nt, mc)
            for row in rep.rows():
                cf, est, hw = row["sinr_cf"], row["sinr_mc"], row["mc_halfwidth"]
                rows.append({
                    "attacker": "on" if on else "off", "cell": row["cell"], "user": row["user"], "Nt": Nt,
                    "sinr_cf": cf, "sinr_mc": est, "mc_halfwidth": hw,
                    "agreement": bool(abs(cf - est) <= max(2 * hw, 0.05 * abs(cf))),
                })
    meta = _meta(scenario, "monte-carlo", realizations=n_mc)
    if opts["format"] == "json":
        return [(opts["out"], json_text({"meta": meta, "rows": rows}))]
    return [(opts["out"], csv_text(rows, MC_COLUMNS, meta))]


COMMANDS = {
    "design": cmd_design,
    "region": cmd_region,
    "sinr-curve": cmd_sinr_curve,
    "monte-carlo": cmd_monte_carlo,
}


def _fail(code: int, kind: str, message: str) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": code}) + "\n")
    return code


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        seed = _option(args, "seed", int)
        fmt = _option(args, "format")
        nt = _option(args, "nt")
        opts = {
            "out": args.out,
            "attacker": _option(args, "attacker"),
            "realizations": _option(args, "realizations", int),
            "workers": _option(args, "workers", int),
            "nt": parse_nt(nt) if nt is not None else None,
        }
        if opts["attacker"] not in (None, "on", "off", "both"):
            raise UsageError(f"--attacker must be on, off or both, not {opts['attacker']!r}")
        scenario = load_scenario(args.config, seed=seed)
        opts["format"] = fmt or scenario.output.format
        if opts["format"] not in ("csv", "json"):
            raise UsageError(f"unknown format {opts['format']!r}")
        if opts["out"] is None:
            opts["out"] = scenario.output.path
        if opts["workers"] is None:
            opts["workers"] = scenario.monte_carlo.workers
        outputs = COMMANDS[args.command](scenario, opts)
    except ValidationError as exc:
        return _fail(2, "invalid_scenario", str(exc))
    except (PilotAttackError, OSError, yaml.YAMLError) as exc:
        return _fail(2, type(exc).__name__, str(exc))
    except Exception as exc:  # noqa: BLE001
        return _fail(1, "internal_error", f"{type(exc).__name__}: {exc}")

    try:
        for path, text in outputs:
            if path is None:
                sys.stdout.write(text)
                sys.stdout.flush()
            else:
                Path(path).write_text(text)
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head)
        sys.stderr.close()
    except OSError as exc:
        return _fail(2, type(exc).__name__, str(exc))
    return 0


if __name__ == "__main__":
    sys.exit(main())
