"""Command line interface: ``orthochar verify | irr-p | restrict | dump-group | ...``.

Exit status: 0 when every check matches, 1 on any mismatch, 2 on a usage
or configuration error.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .chartab import restrict as restrict_char
from .clifford import parabolic_characters, unipotent_characters, verify_prop51, verify_theorem42
from .matgrp import BoundExceeded, group_order_formula
from .ortho import ContextError, build_context, go_group, parabolic, parabolic_order, so_group
from .symbols import degree_table, parse_label, symbol_bipartition
from .verify import SUITES, dump_json, run_suite

__all__ = ["main", "cli"]

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


def _write(path: str | None, text: str) -> None:
    if path is None:
        return
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    Path(path).write_text(text)


def _check_nq(n: int, q: int) -> None:
    if n < 3 or n % 2 == 0:
        raise click.UsageError(f"n must be odd and at least 3, got {n}")
    try:
        build_context(n, q)
    except (ContextError, ValueError) as exc:
        raise click.UsageError(str(exc)) from None


def _guard_config(fn, *args, **kwargs):
    """Map configuration failures (unsupported q, oversize group) to usage errors."""
    try:
        return fn(*args, **kwargs)
    except (BoundExceeded, ContextError, KeyError, ValueError) as exc:
        raise click.UsageError(f"{type(exc).__name__}: {exc}") from None


@click.group()
@click.version_option(package_name="artifact")
def cli() -> None:
    """Characters of parabolic subgroups of odd-dimensional orthogonal groups."""


@cli.command()
@click.option("--suite", type=click.Choice(sorted(SUITES)), default="standard", show_default=True)
@click.option("--json", "json_path", type=click.Path(dir_okay=False), help="Write the full report as JSON.")
@click.option("--csv", "csv_path", type=click.Path(dir_okay=False), help="Write the decomposition tables as CSV.")
@click.option(
    "--new-json",
    "new_path",
    type=click.Path(dir_okay=False),
    help="Write the Type +/- components of SO_7(2) restrictions (no published values) to this file.",
)
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Parallel jobs (default: ORTHOCHAR_WORKERS or 1).")
@click.option("--quiet", is_flag=True, help="Print only the summary line.")
def verify(suite: str, json_path: str | None, csv_path: str | None, new_path: str | None, workers: int | None, quiet: bool) -> None:
    """Run a verification suite and report every check."""
    progress = None if quiet else (lambda r: click.echo(r.line()))
    res = _guard_config(run_suite, suite, progress=progress, workers=workers)
    click.echo(res.render().splitlines()[-1])
    for r in res.reports:
        if r.status == "mismatch":
            click.echo(f"  {r.claim} (n={r.n}, q={r.q}): expected {r.expected!r}, computed {r.computed!r} {r.reason}", err=True)
    _write(json_path, dump_json(res.to_json()) + "\n")
    _write(csv_path, res.to_csv())
    if new_path is not None:
        _write(new_path, dump_json(res.new_json()) + "\n")
    sys.exit(res.exit_code())


def _irr_rows(n: int, q: int) -> list[dict]:
    pc = parabolic_characters(n, q)
    return [
        {"label": str(lab), "type": lab.kind, "payload": lab.payload, "degree": chi.degree_int()}
        for lab, chi in pc.irr
    ]


def _irr_command(n: int, q: int, json_path: str | None) -> None:
    _check_nq(n, q)
    rows = _guard_config(_irr_rows, n, q)
    pd = parabolic(n, q)
    click.echo(f"Irr(P_{n}) at q={q}: {len(rows)} characters, |P| = {pd.P.order}")
    for r in rows:
        click.echo(f"  {r['type']:>2s}  {r['label']:32s} {r['degree']:>8d}")
    total = sum(r["degree"] ** 2 for r in rows)
    click.echo(f"sum of squared degrees = {total}")
    _write(json_path, dump_json({"n": n, "q": q, "order": pd.P.order, "characters": rows}) + "\n")
    sys.exit(EXIT_OK if total == pd.P.order and len(rows) == pd.P.num_classes else EXIT_MISMATCH)


_nq = [
    click.option("--n", "n", type=int, required=True, help="Odd dimension n = 2m + 1."),
    click.option("--q", "q", type=int, required=True, help="Prime power q."),
]


def _with_nq(f):
    for opt in reversed(_nq):
        f = opt(f)
    return f


@cli.command("irr-p")
@_with_nq
@click.option("--json", "json_path", type=click.Path(dir_okay=False))
def irr_p(n: int, q: int, json_path: str | None) -> None:
    """List Irr(P_n) by Clifford type with degrees."""
    _irr_command(n, q, json_path)


@cli.command("irr")
@_with_nq
@click.option("--json", "json_path", type=click.Path(dir_okay=False))
def irr(n: int, q: int, json_path: str | None) -> None:
    """Alias of irr-p."""
    _irr_command(n, q, json_path)


@cli.command()
@_with_nq
@click.option("--label", required=True, help="Unipotent label such as '[1,1,1]' or '[-,1^2,1]'.")
@click.option("--json", "json_path", type=click.Path(dir_okay=False))
def restrict(n: int, q: int, label: str, json_path: str | None) -> None:
    """Decompose a unipotent character of SO_n(q) restricted to P_n."""
    _check_nq(n, q)
    lab = _guard_config(parse_label, label)
    if lab.rank != (n - 1) // 2:
        raise click.UsageError(f"{lab} is not a unipotent label of SO_{n}")

    def run():
        ud = unipotent_characters(n, q)
        pc = parabolic_characters(n, q)
        return pc.split(restrict_char(ud.character(lab), pc.P))

    sp = _guard_config(run)
    click.echo(f"{lab} restricted to P_{n}, q={q}: degree {sp.chi.degree_int()}")
    for k in ("1", "0", "+", "-"):
        payload = " + ".join(f"{c}*{p}" if c != 1 else p for p, c in sorted(sp.payload(k).items())) or "0"
        click.echo(f"  Type {k:>2s}  theta(1) = {sp.theta_degrees[k]:<6d} {payload}")
    _write(json_path, dump_json({"label": str(lab), "n": n, "q": q, "components": sp.to_json()}) + "\n")


@cli.command("dump-group")
@click.option("--kind", type=click.Choice(["so", "go+", "go-", "p"]), required=True)
@_with_nq
@click.option("--json", "json_path", type=click.Path(dir_okay=False))
def dump_group(kind: str, n: int, q: int, json_path: str | None) -> None:
    """Enumerate a group and print its order, classes and generators."""
    if kind in ("so", "p"):
        _check_nq(n, q)
        m = (n - 1) // 2
        if kind == "so":
            G = _guard_config(so_group, build_context(n, q))
            expected = group_order_formula("SO", m, q)
        else:
            G = _guard_config(lambda: parabolic(n, q).P)
            expected = parabolic_order(m, q)
    else:
        if n < 2 or n % 2:
            raise click.UsageError(f"GO{kind[-1]} needs an even dimension, got {n}")
        G = _guard_config(go_group, q, {"+": "plus", "-": "minus"}[kind[-1]], n)
        expected = group_order_formula("GO" + kind[-1], n // 2, q)
    classes = G.classes
    click.echo(f"{G.name or kind}: order {G.order}" + (f" (formula {expected})" if expected is not None else ""))
    click.echo(f"{len(classes)} conjugacy classes")
    for c in classes:
        click.echo(f"  class {c.index:3d}  size {c.size:>8d}  |C| = {c.centralizer_order:>8d}  element order {c.order}")
    data = {
        "kind": kind,
        "n": n,
        "q": q,
        "order": G.order,
        "formula": expected,
        "classes": [{"size": c.size, "centralizer": c.centralizer_order, "order": c.order} for c in classes],
        "generators": [g.tolist() for g in G.generators],
    }
    if kind in ("so", "p"):
        data["context"] = build_context(n, q).describe()
    _write(json_path, dump_json(data) + "\n")
    sys.exit(EXIT_OK if expected is None or expected == G.order else EXIT_MISMATCH)


@cli.command("verify-thm42")
@_with_nq
@click.option("--part", type=click.Choice(["a", "b", "c", "d", "e", "all"]), default="all", show_default=True)
def verify_thm42(n: int, q: int, part: str) -> None:
    """Check the restriction identities for Ind from P_{n-2} and from the Levi."""
    _check_nq(n, q)
    if n < 5:
        raise click.UsageError("needs n >= 5")
    parts = ["a", "b", "d"] + (["c", "e"] if n >= 7 else []) if part == "all" else [part]
    ok = True
    for p in parts:
        for rep in _guard_config(verify_theorem42, n, q, p):
            ok &= rep.holds
            click.echo(f"{'MATCH' if rep.holds else 'MISMATCH':9s} {rep.claim:40s} n={n} q={q}")
    for rep in _guard_config(verify_prop51, n, q):
        ok &= rep.holds
        click.echo(f"{'MATCH' if rep.holds else 'MISMATCH':9s} {rep.claim:40s} n={n} q={q}")
    sys.exit(EXIT_OK if ok else EXIT_MISMATCH)


@cli.command("symbols-table")
@click.option("--n", "n", type=click.Choice(["3", "5", "7"]), required=True)
@click.option("--q", "q", type=int, default=None, help="Evaluate the degrees at q.")
def symbols_table(n: str, q: int | None) -> None:
    """Unipotent labels, symbols and degree polynomials of SO_n."""
    for dp in degree_table(int(n)):
        sym = symbol_bipartition(dp.label)
        val = f"  {dp(q)}" if q is not None else ""
        click.echo(f"{str(dp.label):14s} {str(sym):18s} {str(dp.poly)}{val}")


def main(argv: list[str] | None = None) -> None:
    cli.main(args=argv, prog_name="orthochar")


if __name__ == "__main__":  # pragma: no cover
    main()
