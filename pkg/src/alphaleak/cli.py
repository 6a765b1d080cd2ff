"""Command-line front end: ``alphaleak <command> [options] FILE...``.

Every command prints a table (CSV with a header row, or JSON records).
Exit status: 0 success, 1 a ``verify`` check failed, 2 invalid input,
3 an optimizer or budget failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import List, Optional, Sequence

from . import io as aio
from .core import binomial, induce, tilt
from .exceptions import NumericalError
from .leakage import (
    alpha_leakage,
    alpha_lift,
    elementary_leakage,
    maximal_leakage,
    optimal_estimator,
    pml,
    renyi_capacity,
    sibson_mi,
)
from .measures import (
    alpha_loss,
    arimoto_conditional_entropy,
    cross_entropy,
    renyi_divergence,
    renyi_entropy,
)
from .orders import Order
from .tables import FIG1_ALPHAS, SWEEP_MEASURES, fig1_rows

LN2 = math.log(2.0)


class Table:
    """Rows plus the set of columns holding additive nats values."""

    def __init__(self, columns, rows=None, nats=()):
        self.columns = list(columns)
        self.rows = list(rows or [])
        self.nats = set(nats)

    def add(self, *row):
        self.rows.append(row)

    def converted(self, base):
        if base == "nats" or not self.nats:
            return self.rows
        idx = [i for i, c in enumerate(self.columns) if c in self.nats]
        out = []
        for row in self.rows:
            row = list(row)
            for i in idx:
                row[i] = row[i] / LN2
            out.append(tuple(row))
        return out

    def render(self, fmt="csv", base="nats"):
        rows = self.converted(base)
        if fmt == "json":
            recs = [
                {c: aio.json_value(v) for c, v in zip(self.columns, row)} for row in rows
            ]
            return json.dumps(recs, indent=1) + "\n"
        lines = [",".join(self.columns)]
        for row in rows:
            lines.append(",".join(_cell(v) for v in row))
        return "\n".join(lines) + "\n"


def _cell(v):
    if isinstance(v, str):
        return v
    if isinstance(v, bool):
        return "true" if v else "false"
    return aio.format_number(v)


def _orders(text) -> List[Order]:
    return [Order.parse(tok) for tok in text.split(",") if tok.strip()]


def _warn(msg):
    print(f"warning: {msg}", file=sys.stderr)


def _check_orders(orders):
    for a in orders:
        if a.is_finite and abs(a.value - 1.0) < 1e-6:
            _warn(f"order {a} is within 1e-6 of 1 and uses the finite-order formula")


def _need_orders(args):
    if args.alpha is None:
        _usage_error(args, "--alpha is required")
    orders = _orders(args.alpha)
    _check_orders(orders)
    return orders


def _usage_error(args, msg):
    args._parser.error(msg)  # exits with status 2


def _dist(args, which="input"):
    if getattr(args, "binomial", None):
        try:
            n, p = args.binomial.split(",")
            return binomial(int(n), float(p))
        except ValueError as exc:
            raise aio.InputFormatError(f"--binomial expects N,P: {exc}") from None
    path = getattr(args, which)
    if path is None:
        _usage_error(args, "a distribution file or --binomial is required")
    return aio.load_dist(path)


def _channel(args):
    data = aio.load_channel(args.input)
    if data.defaulted:
        print(f"notice: {args.input} has no input_pmf; using the uniform prior", file=sys.stderr)
    return data


def _outputs(args, jv):
    if getattr(args, "y", None) is not None:
        return [args.y]
    return jv.observed


def _label(p, x):
    return p.labels[x] if p.labels is not None else x


# ----------------------------------------------------------------- commands


def cmd_entropy(args):
    p = _dist(args)
    t = Table(["alpha", "value"], nats={"value"})
    for a in _need_orders(args):
        t.add(str(a), renyi_entropy(p, a))
    return t


def cmd_tilt(args):
    p = _dist(args)
    orders = _need_orders(args)
    single = len(orders) == 1
    t = Table(["x", "mass"] if single else ["alpha", "x", "mass"])
    for a in orders:
        q = tilt(p, a).masses
        for x in range(q.size):
            row = (_label(p, x), float(q[x]))
            t.add(*(row if single else (str(a),) + row))
    return t


def _pair_command(fn, multiplicative=False):
    def run(args):
        p = aio.load_dist(args.input)
        q = aio.load_dist(args.other)
        t = Table(["alpha", "value"], nats=() if multiplicative else {"value"})
        for a in _need_orders(args):
            t.add(str(a), fn(p, q, a))
        return t

    return run


def cmd_arimoto_cond(args):
    c = _channel(args)
    jv = induce(c.prior, c.channel)
    t = Table(["alpha", "value"], nats={"value"})
    for a in _need_orders(args):
        t.add(str(a), arimoto_conditional_entropy(jv, a))
    return t


def cmd_leakage(args):
    c = _channel(args)
    cols = ["alpha", "prior_uncertainty", "posterior_uncertainty", "leakage"]
    t = Table(cols, nats=set(cols[1:]))
    for a in _need_orders(args):
        r = alpha_leakage(c.prior, c.channel, a)
        t.add(str(a), r.prior_uncertainty, r.posterior_uncertainty, r.leakage)
    return t


def cmd_sibson(args):
    c = _channel(args)
    t = Table(["alpha", "value"], nats={"value"})
    for a in _need_orders(args):
        t.add(str(a), sibson_mi(c.prior, c.channel, a))
    return t


def cmd_elementary(args):
    c = _channel(args)
    jv = induce(c.prior, c.channel)
    t = Table(["alpha", "y", "value"], nats={"value"})
    for a in _need_orders(args):
        for y in _outputs(args, jv):
            t.add(str(a), y, elementary_leakage(c.prior, c.channel, y, a))
    return t


def cmd_pml(args):
    c = _channel(args)
    jv = induce(c.prior, c.channel)
    t = Table(["y", "value"], nats={"value"})
    for y in _outputs(args, jv):
        t.add(y, pml(c.prior, c.channel, y))
    return t


def cmd_lift(args):
    c = _channel(args)
    jv = induce(c.prior, c.channel)
    t = Table(["alpha", "y", "value"])
    for a in _need_orders(args):
        for y in _outputs(args, jv):
            t.add(str(a), y, alpha_lift(c.prior, c.channel, y, a))
    return t


def cmd_maxleak(args):
    c = _channel(args)
    return Table(["value"], [(maximal_leakage(c.prior, c.channel),)], nats={"value"})


def cmd_capacity(args):
    c = aio.load_channel(args.input)
    t = Table(["alpha", "value", "iterations", "best_prior"], nats={"value"})
    for a in _need_orders(args):
        r = renyi_capacity(c.channel, a, restarts=args.restarts, seed=args.seed)
        prior = ";".join(aio.format_number(m) for m in r.best_prior.masses)
        t.add(str(a), r.value, r.iterations, prior)
    return t


def cmd_estimator(args):
    c = _channel(args)
    jv = induce(c.prior, c.channel)
    t = Table(["alpha", "y", "xhat", "mass"])
    for a in _need_orders(args):
        rows = optimal_estimator(jv, a).rows
        for y in range(rows.shape[0]):
            for x in range(rows.shape[1]):
                t.add(str(a), y, x, float(rows[y, x]))
    return t


def cmd_sweep(args):
    orders = _need_orders(args)
    names = args.measure
    kinds = {SWEEP_MEASURES[m][0] for m in names}
    if len(kinds) > 1:
        _usage_error(args, "sweep measures must all take the same kind of input")
    kind = kinds.pop()
    data = _dist(args) if kind == "dist" else _channel(args)
    # conversion is per measure here, so the table itself stays unconverted
    t = Table(["alpha", "measure", "value"])
    for a in orders:
        for m in names:
            _, fn, additive = SWEEP_MEASURES[m]
            v = fn(data, a)
            t.add(str(a), m, v / LN2 if additive and args.base == "bits" else v)
    return t


def cmd_fig1(args):
    alphas = FIG1_ALPHAS if args.alpha is None else [float(a) for a in _orders(args.alpha)]
    t = Table(["alpha", "x", "mass"])
    for a, x, m in fig1_rows(args.n, args.p, alphas):
        t.add(aio.format_number(a), x, m)
    return t


def cmd_verify(args):
    from .verify import load_fig1_reference, run_suites

    ref = load_fig1_reference(args.fig1_reference) if args.fig1_reference else None
    suites = args.suite or None
    if suites and "fig1" in suites and ref is None:
        _usage_error(args, "--suite fig1 needs --fig1-reference")
    checks = run_suites(suites, fig1_reference=ref, scale=args.scale)
    t = Table(["check", "passed", "checked", "failures", "worst", "tol", "note"])
    for c in checks:
        t.add(c.name, c.passed, c.checked, c.failures, c.worst, c.tol, c.note)
    args._failed = any(not c.passed for c in checks)
    return t


# ------------------------------------------------------------------- parser


def build_parser():
    ap = argparse.ArgumentParser(
        prog="alphaleak",
        description="Rényi-order entropies, leakage measures and their numerical checks.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", help="order or comma-separated orders: 0, 1, inf or a positive decimal")
    common.add_argument("--base", choices=["nats", "bits"], default="nats")
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--output", "-o", help="write to this file instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, inputs="channel"):
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_)
        if inputs == "dist":
            sp.add_argument("input", nargs="?", help="distribution JSON file")
            sp.add_argument("--binomial", metavar="N,P", help="use the Binomial(N, P) pmf")
        elif inputs == "pair":
            sp.add_argument("input", help="distribution JSON file (averaging pmf)")
            sp.add_argument("other", help="distribution JSON file (decision / reference pmf)")
        elif inputs == "channel":
            sp.add_argument("input", help="channel or joint JSON file")
        sp.set_defaults(func=fn, _parser=sp)
        return sp

    add("entropy", cmd_entropy, "Rényi entropy", "dist")
    add("tilt", cmd_tilt, "tilted (escort) pmf", "dist")
    add("cross-entropy", _pair_command(cross_entropy), "order-alpha cross entropy", "pair")
    add("divergence", _pair_command(renyi_divergence), "Rényi divergence", "pair")
    add("loss", _pair_command(alpha_loss, multiplicative=True), "multiplicative alpha-loss", "pair")
    add("arimoto-cond", cmd_arimoto_cond, "Arimoto conditional entropy of X given Y")
    add("leakage", cmd_leakage, "alpha-leakage (Arimoto mutual information)")
    add("sibson", cmd_sibson, "Sibson mutual information")
    for name, fn, text in (
        ("elementary", cmd_elementary, "per-output leakage"),
        ("lift", cmd_lift, "multiplicative per-output alpha-lift"),
    ):
        add(name, fn, text).add_argument("--y", type=int, help="single output index")
    add("pml", cmd_pml, "pointwise maximal leakage").add_argument("--y", type=int)
    add("maxleak", cmd_maxleak, "maximal leakage")
    cap = add("capacity", cmd_capacity, "order-alpha capacity (maximized Sibson information)")
    cap.add_argument("--restarts", type=int, default=8)
    cap.add_argument("--seed", type=int, default=0)
    add("estimator", cmd_estimator, "optimal soft estimator of X from Y")
    sw = add("sweep", cmd_sweep, "several measures over a grid of orders", "dist")
    sw.add_argument("--measure", nargs="+", required=True, choices=sorted(SWEEP_MEASURES))
    f1 = add("fig1", cmd_fig1, "tilted Binomial pmf table", None)
    f1.add_argument("--n", type=int, default=20)
    f1.add_argument("--p", type=float, default=0.5)
    vf = add("verify", cmd_verify, "run the randomized verification suites", None)
    vf.add_argument("--suite", action="append",
                    choices=["fig1", "minimizer", "identities", "continuity", "sibson-bound", "partition", "worked"])
    vf.add_argument("--scale", type=float, default=1.0, help="fraction of the default instance counts")
    vf.add_argument("--fig1-reference", help="CSV of alpha,x,mass reference points")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    args._failed = False
    try:
        table = args.func(args)
    except ValueError as exc:  # includes every invalid-input error
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    text = table.render(args.format, args.base)
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if args._failed else 0


if __name__ == "__main__":
    sys.exit(main())
