"""Command-line front end: ``divring <subcommand> ...``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 for
configuration errors (bad arguments, unwritable output path).
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import __version__
from .verify import (CAMPAIGNS, Campaign, ConfigError, ex1_campaign, exit_code, gbar_campaign,
                     named_campaign, ore_campaign, render_json, render_markdown, run_campaign)


def _split_list(text: str) -> list[str]:
    """Split on commas outside brackets, so ``1,[0,1]`` gives two items."""
    items, depth, cur = [], 0, ""
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            items.append(cur.strip())
            cur = ""
        else:
            cur += ch
    items.append(cur.strip())
    if depth != 0 or any(not t for t in items):
        raise argparse.ArgumentTypeError(f"malformed list {text!r}")
    return items


def _field(text: str) -> tuple[int, int]:
    try:
        p, n = (int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected p,n but got {text!r}") from None
    return p, n


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _add_output(sp):
    sp.add_argument("--out", help="write the report here instead of stdout")
    sp.add_argument("--format", choices=("json", "md"), default="json")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="divring", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"divring {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    ex1 = sub.add_parser("ex1", help="check the cyclic division algebra for one characteristic")
    ex1.add_argument("--p", type=int, required=True, help="characteristic (2 selects s=3)")
    ex1.add_argument("--prec", type=_fraction, default=None, help="absolute precision exponent")
    ex1.add_argument("--samples", type=int, default=20)
    ex1.add_argument("--seed", type=int, default=0)
    _add_output(ex1)

    ore = sub.add_parser("ore-selftest", help="twisted-polynomial self test")
    ore.add_argument("--samples", type=int, default=20)
    ore.add_argument("--seed", type=int, default=0)
    _add_output(ore)

    gbar = sub.add_parser("gbar", help="radical test for the set G(b) over F_{p^n}")
    gbar.add_argument("--b", type=_split_list, required=True, help="comma list, e.g. 1,[0,1]")
    gbar.add_argument("--field", type=_field, default=(3, 2), help="p,n")
    gbar.add_argument("--seed", type=int, default=0)
    _add_output(gbar)

    rep = sub.add_parser("report", help="run a named campaign and write its report")
    rep.add_argument("--campaign", choices=CAMPAIGNS, default="standard")
    rep.add_argument("--samples", type=int, default=10)
    rep.add_argument("--seed", type=int, default=0)
    _add_output(rep)
    return ap


def parse_cli(argv=None) -> tuple[Campaign, str]:
    """Parse arguments into a campaign and an output format.

    Raises SystemExit(2) with usage text on malformed arguments and
    ConfigError for semantically invalid settings.
    """
    args = build_parser().parse_args(argv)
    if getattr(args, "samples", 1) < 0:
        raise ConfigError("--samples must be non-negative")
    if args.command == "ex1":
        c = ex1_campaign(args.p, args.prec, args.samples, args.seed)
    elif args.command == "ore-selftest":
        c = ore_campaign(args.samples, args.seed)
    elif args.command == "gbar":
        c = gbar_campaign(args.b, args.field, args.seed)
    else:
        c = named_campaign(args.campaign, args.samples, args.seed)
    c.out = args.out
    return c, args.format


def _check_writable(path: str):
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory) or not os.access(directory, os.W_OK):
        raise ConfigError(f"cannot write to {path}")
    if os.path.isdir(path):
        raise ConfigError(f"{path} is a directory")


def main(argv=None) -> int:
    try:
        campaign, fmt = parse_cli(argv)
        if campaign.out:
            _check_writable(campaign.out)
        report = run_campaign(campaign)
    except ConfigError as exc:
        print(f"divring: error: {exc}", file=sys.stderr)
        return 2
    text = render_json(report) if fmt == "json" else render_markdown(report)
    if campaign.out:
        try:
            with open(campaign.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"divring: error: {exc}", file=sys.stderr)
            return 2
        s = report["summary"]
        print(f"{campaign.name}: {s['pass']} passed, {s['fail']} failed -> {campaign.out}")
    else:
        sys.stdout.write(text)
    return exit_code(report)


if __name__ == "__main__":
    raise SystemExit(main())
