"""Bundled example models.

* fig1        -- the five-world capability/ability/attempt illustration
* gas0        -- the gas market supply chain under a monopolist
* gas0prime   -- the liberalized gas market peer network, unfolded so the
                 whole delegation derivation holds step by step
* interfere   -- two agents attempting a fact and its negation at once
* nesting     -- nested stit does not unnest (achievement takes time)
* supervision -- a project leader re-taking a failed delegated task
"""

import importlib.resources

from ..model import load_model

FIXTURES = ("fig1", "gas0", "gas0prime", "interfere", "nesting", "supervision")


def fixture_text(name):
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; bundled: {', '.join(FIXTURES)}")
    return (
        importlib.resources.files(__package__).joinpath(f"{name}.json").read_text()
    )


def load_fixture(name):
    return load_model(fixture_text(name))


def fixture_path(name):
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; bundled: {', '.join(FIXTURES)}")
    return str(importlib.resources.files(__package__).joinpath(f"{name}.json"))
