"""Runtime settings, sourced from environment variables.

Every knob has a sensible default so the package works out of the box
on the bundled sample data; deployments override via METHODGRAPH_*.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Mapping

from .graphcore import BASE_WEIGHT_DEFAULT, USER_WEIGHT_DEFAULT
from .layout import LayoutParams

__all__ = ["Settings", "settings_from_env"]

_PREFIX = "METHODGRAPH_"


@dataclass(frozen=True)
class Settings:
    """Service configuration: where the data lives, where to listen,
    recommendation weights, and the default layout parameters."""

    data_path: str = "data/fixture.csv"
    log_path: str | None = None          # None: derived next to data_path
    collections_path: str | None = None  # None: derived next to data_path
    host: str = "127.0.0.1"
    port: int = 8008
    base_weight: float = BASE_WEIGHT_DEFAULT
    user_weight: float = USER_WEIGHT_DEFAULT
    layout: LayoutParams = field(default_factory=LayoutParams)


def _get(env: Mapping[str, str], name: str) -> str | None:
    value = env.get(_PREFIX + name)
    return value if value not in (None, "") else None


def settings_from_env(env: Mapping[str, str] | None = None) -> Settings:
    """Build Settings from the environment.

    Recognized variables: METHODGRAPH_DATA, METHODGRAPH_LOG,
    METHODGRAPH_COLLECTIONS, METHODGRAPH_HOST, METHODGRAPH_PORT,
    METHODGRAPH_BASE_WEIGHT, METHODGRAPH_USER_WEIGHT, and the layout
    defaults METHODGRAPH_LAYOUT_DIM / _SEED / _THETA / _ITERATIONS.
    Unset variables keep the built-in defaults; malformed numbers raise
    ValueError naming the variable.
    """
    env = os.environ if env is None else env
    settings = Settings()

    def number(name: str, cast, current):
        raw = _get(env, name)
        if raw is None:
            return current
        try:
            return cast(raw)
        except ValueError:
            raise ValueError(f"{_PREFIX}{name} is not a valid {cast.__name__}: {raw!r}")

    layout = settings.layout
    layout = replace(
        layout,
        dimensions=number("LAYOUT_DIM", int, layout.dimensions),
        seed=number("LAYOUT_SEED", int, layout.seed),
        theta=number("LAYOUT_THETA", float, layout.theta),
        max_iterations=number("LAYOUT_ITERATIONS", int, layout.max_iterations),
    )
    return replace(
        settings,
        data_path=_get(env, "DATA") or settings.data_path,
        log_path=_get(env, "LOG"),
        collections_path=_get(env, "COLLECTIONS"),
        host=_get(env, "HOST") or settings.host,
        port=number("PORT", int, settings.port),
        base_weight=number("BASE_WEIGHT", float, settings.base_weight),
        user_weight=number("USER_WEIGHT", float, settings.user_weight),
        layout=layout,
    )
