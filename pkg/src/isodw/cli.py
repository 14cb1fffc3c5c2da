"""Command-line front end: ``isodw <command> [flags]``.

Exit codes: 0 success, 2 bad flags, 3 singular gamma refused,
4 numerical failure.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import commands
from .commands import ConfigError, RunConfig
from .errors import NumericalError, SingularGamma

EXIT_SINGULAR = 3
EXIT_NUMERICAL = 4


def _floats(ctx, param, value):
    if value is None or value == ():
        return None
    out = []
    for chunk in value:
        for tok in str(chunk).split(","):
            tok = tok.strip()
            if not tok:
                continue
            try:
                out.append(float(tok))
            except ValueError:
                raise click.BadParameter(f"not a number: {tok!r}") from None
    return tuple(out)


def _pair(ctx, param, value):
    if value is None:
        return None
    vals = _floats(ctx, param, (value,))
    if vals is None or len(vals) != 2:
        raise click.BadParameter("expected two numbers 'a,b'")
    return vals


def common_options(f):
    opts = [
        click.option("--seed", type=click.Choice(["quartic", "razavy"]), default="quartic",
                     show_default=True),
        click.option("--shift", type=float, default=0.0, show_default=True,
                     help="Shift c of the seed."),
        click.option("--gamma", "gammas", multiple=True, callback=_floats,
                     help="Family parameter; repeat or comma-separate for several. "
                          "Defaults: -7 (quartic), -51 (razavy)."),
        click.option("--domain", callback=_pair, help="Working domain 'a,b' (must contain 0)."),
        click.option("--samples", type=int, default=2001, show_default=True),
        click.option("--abs-tol", type=float, default=1e-10, show_default=True),
        click.option("--rel-tol", type=float, default=1e-10, show_default=True),
        click.option("--max-depth", type=int, default=60, show_default=True),
        click.option("--norm", type=click.Choice(["l2", "paper"]), default="l2",
                     show_default=True),
        click.option("--lower-limit", type=float, default=None,
                     help="Lower limit l of |Gamma| for --norm paper (quartic)."),
        click.option("--allow-singular", is_flag=True, help="Emit singular members with poles as NaN."),
        click.option("--output", "-o", type=click.Path(), default=None),
        click.option("--format", "fmt", type=click.Choice(["csv", "json", "svg"]), default=None),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _config(**kw) -> RunConfig:
    kw["format"] = kw.pop("fmt", None)
    try:
        return RunConfig(**kw).validate()
    except ConfigError as exc:
        raise click.BadParameter(str(exc).split(": ", 1)[1], param_hint=exc.flag) from None


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.output:
        Path(cfg.output).write_text(text, encoding="utf-8")
        click.echo(cfg.output)
    else:
        click.echo(text, nl=False)


def _run(fn, cfg):
    try:
        return fn(cfg)
    except SingularGamma as exc:
        click.echo(f"error: {exc} (pass --allow-singular to emit it anyway)", err=True)
        sys.exit(EXIT_SINGULAR)
    except NumericalError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)
    except ConfigError as exc:
        raise click.BadParameter(str(exc).split(": ", 1)[1], param_hint=exc.flag) from None
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


@click.group()
@click.version_option(package_name="isodw")
def main():
    """Isospectral SUSY families of double-well potentials."""


@main.command()
@common_options
@click.option("--columns", default="psi2", show_default=True,
              help="Comma-separated columns drawn by --format svg.")
def family(columns, **kw):
    """Sample V1, V2, V1gamma, the deformation and the zero mode; one file per gamma."""
    cfg = _config(columns=tuple(c.strip() for c in columns.split(",") if c.strip()), **kw)
    for path, text in _run(commands.cmd_family, cfg):
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        click.echo(str(path))


@main.command()
@common_options
def thresholds(**kw):
    """Regularity threshold gamma_s and plateau diagnostics (JSON)."""
    cfg = _config(**kw)
    _emit(cfg, _run(commands.cmd_thresholds, cfg))


@main.command()
@common_options
def critical(**kw):
    """Critical gamma where the two zero-mode peaks are equal (JSON)."""
    cfg = _config(**kw)
    _emit(cfg, _run(commands.cmd_critical, cfg))


@main.command()
@common_options
def localize(**kw):
    """Left/right localization probabilities of the zero mode (JSON)."""
    cfg = _config(**kw)
    _emit(cfg, _run(commands.cmd_localize, cfg))


@main.command()
@common_options
@click.option("--shifts", callback=_floats, multiple=True,
              help="Shifts to tabulate (default -2,-1,0,1,2).")
def table1(shifts, **kw):
    """Recompute every cell of the quartic parameter table (CSV)."""
    extra = {"shifts": shifts} if shifts else {}
    cfg = _config(**extra, **kw)
    _emit(cfg, _run(commands.cmd_table1, cfg))


@main.command()
@common_options
@click.option("--points", type=int, default=4000, show_default=True,
              help="Interior grid points of the eigenvalue problem.")
@click.option("--levels", type=int, default=4, show_default=True)
def spectrum(points, levels, **kw):
    """Compare low levels of V1 with V1gamma and with V2 (JSON)."""
    cfg = _config(points=points, levels=levels, **kw)
    _emit(cfg, _run(commands.cmd_spectrum, cfg))


if __name__ == "__main__":
    main()
