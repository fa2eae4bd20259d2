"""Contains options and helpers shared by the `tesp` commands."""

from __future__ import annotations

import functools
import logging
from pathlib import Path
from typing import Any, Callable, TypeVar

import click

from tesp.errors import USER_ERRORS
from tesp.utils import logging as logging_utils

F = TypeVar("F", bound=Callable[..., Any])


def read_config_file(path: Path) -> dict[str, str]:
    """Parse flat `key = value` lines; `#` starts a comment, `-` and `_` are interchangeable."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise click.BadParameter(f"{path}:{lineno}: expected key = value, got {raw!r}.")
        values[key.strip().lstrip("-").replace("-", "_")] = value.strip()
    return values


def _load_config(ctx: click.Context, _param: click.Parameter, path: Path | None) -> None:
    if path is None:
        return
    # Keys are long flag names; the default map is keyed by parameter name.
    by_flag = {
        opt.lstrip("-").replace("-", "_"): param
        for param in ctx.command.params
        for opt in param.opts
        if opt.startswith("--")
    }
    values: dict[str, Any] = {}
    unknown = []
    for key, value in read_config_file(path).items():
        param = by_flag.get(key)
        if param is None or param.name is None:
            unknown.append(key)
            continue
        values[param.name] = [value] if getattr(param, "multiple", False) else value
    if unknown:
        raise click.BadParameter(f"Unknown keys in {path}: {', '.join(sorted(unknown))}.")
    # Explicit flags still win over the default map.
    ctx.default_map = {**(ctx.default_map or {}), **values}


def parse_dims(_ctx: click.Context, _param: click.Parameter, value: str | None) -> Any:
    if value is None:
        return None
    try:
        dims = tuple(int(part) for part in value.split(","))
    except ValueError:
        raise click.BadParameter(f"Expected m,r,s,n,l integers, got {value!r}.")
    if len(dims) != 5 or min(dims) < 1:
        raise click.BadParameter(f"Expected five positive integers m,r,s,n,l, got {value!r}.")
    return dims


def parse_size(_ctx: click.Context, _param: click.Parameter, value: str | None) -> Any:
    if value is None:
        return None
    try:
        height, width = (int(part) for part in value.lower().split("x"))
    except ValueError:
        raise click.BadParameter(f"Expected HxW, got {value!r}.")
    return height, width


def split_methods(values: tuple[str, ...]) -> tuple[str, ...]:
    """Flatten repeated and comma-separated --method values."""
    return tuple(part.strip() for value in values for part in value.split(",") if part.strip())


def common_options(command: F) -> F:
    """Attach --config, -v/--verbose and --log-path."""
    command = click.option(
        "--log-path",
        type=click.Path(path_type=Path, dir_okay=False),
        default=None,
        help="Also write logs to this file.",
    )(command)
    command = click.option("-v", "--verbose", is_flag=True, help="Activate debug logs.")(command)
    command = click.option(
        "--config",
        type=click.Path(path_type=Path, exists=True, dir_okay=False),
        callback=_load_config,
        is_eager=True,
        expose_value=False,
        help="File of `key = value` lines with defaults for the other flags.",
    )(command)
    return command


def stopping_options(command: F) -> F:
    """Attach --tol, --max-iters, --max-seconds, --theta and --seed."""
    for decorator in reversed(
        [
            click.option("--seed", type=int, default=0, show_default=True, help="Master seed."),
            click.option(
                "--tol", type=float, default=1e-4, show_default=True, help="RRN stopping tolerance."
            ),
            click.option(
                "--max-iters", type=int, default=1_000_000, show_default=True, help="Iteration cap."
            ),
            click.option(
                "--max-seconds",
                type=float,
                default=600.0,
                show_default=True,
                help="Wall-clock cap per run.",
            ),
            click.option(
                "--theta",
                type=float,
                default=0.5,
                show_default=True,
                help="Parameter of the capped sampling rule.",
            ),
            click.option(
                "--semidefinite",
                is_flag=True,
                help="Accept rank-deficient TERCD weights as seminorms.",
            ),
        ]
    ):
        command = decorator(command)
    return command


def setup_logging(verbose: bool, log_path: Path | None) -> None:
    logging_utils.configure(logging.DEBUG if verbose else logging.INFO, log_path)


def reports_errors(command: F) -> F:
    """Turn library errors into a one-line click error."""

    @functools.wraps(command)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return command(*args, **kwargs)
        except USER_ERRORS as exc:
            raise click.ClickException(str(exc)) from exc

    return wrapper  # type: ignore[return-value]
