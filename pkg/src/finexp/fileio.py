"""JSON experiment files: named spaces, kernels, distributions and losses.

Matrices are stored row-major with rows indexed by outputs, matching the
column-stochastic convention in memory, so a kernel's JSON ``matrix[i][j]``
is the probability of output i given input j.  Loading validates every
stochasticity invariant and resolves every cross reference; failures raise
``SchemaError`` naming the offending entry.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .decisions import LossMatrix
from .kernels import Distribution, FiniteSpace, MarkovKernel

#: Per-space size cap for file inputs; keeps LP solves at desk scale.
DEFAULT_MAX_DIM = 32


class SchemaError(ValueError):
    """The experiment file is structurally or numerically malformed."""


@dataclass
class ExperimentFile:
    spaces: dict[str, FiniteSpace] = field(default_factory=dict)
    distributions: dict[str, Distribution] = field(default_factory=dict)
    kernels: dict[str, MarkovKernel] = field(default_factory=dict)
    losses: dict[str, LossMatrix] = field(default_factory=dict)

    def kernel(self, name: str) -> MarkovKernel:
        return _lookup(self.kernels, name, "kernel")

    def distribution(self, name: str) -> Distribution:
        return _lookup(self.distributions, name, "distribution")

    def loss(self, name: str) -> LossMatrix:
        return _lookup(self.losses, name, "loss")


def _lookup(table, name, what):
    try:
        return table[name]
    except KeyError:
        raise SchemaError(f"unknown {what} {name!r}; available: {sorted(table)}") from None


def _space_ref(spaces: dict[str, FiniteSpace], name, context: str) -> FiniteSpace:
    if not isinstance(name, str) or name not in spaces:
        raise SchemaError(f"{context}: unknown space {name!r}; available: {sorted(spaces)}")
    return spaces[name]


def experiment_from_dict(doc: dict, max_dim: int = DEFAULT_MAX_DIM) -> ExperimentFile:
    if not isinstance(doc, dict):
        raise SchemaError("top level must be a JSON object")
    out = ExperimentFile()
    for name, labels in dict(doc.get("spaces", {})).items():
        try:
            space = FiniteSpace(tuple(labels))
        except (TypeError, ValueError) as err:
            raise SchemaError(f"space {name!r}: {err}") from None
        if space.size > max_dim:
            raise SchemaError(
                f"space {name!r} has {space.size} labels, above the cap of {max_dim}"
            )
        out.spaces[name] = space
    for name, body in dict(doc.get("distributions", {})).items():
        try:
            space = _space_ref(out.spaces, body.get("space"), f"distribution {name!r}")
            out.distributions[name] = Distribution(space, np.asarray(body["mass"], dtype=float))
        except SchemaError:
            raise
        except (TypeError, ValueError, KeyError) as err:
            raise SchemaError(f"distribution {name!r}: {err}") from None
    for name, body in dict(doc.get("kernels", {})).items():
        try:
            source = _space_ref(out.spaces, body.get("from"), f"kernel {name!r}")
            target = _space_ref(out.spaces, body.get("to"), f"kernel {name!r}")
            out.kernels[name] = MarkovKernel(source, target, np.asarray(body["matrix"], dtype=float))
        except SchemaError:
            raise
        except (TypeError, ValueError, KeyError) as err:
            raise SchemaError(f"kernel {name!r}: {err}") from None
    for name, body in dict(doc.get("losses", {})).items():
        try:
            theta = _space_ref(out.spaces, body.get("theta"), f"loss {name!r}")
            actions = _space_ref(out.spaces, body.get("actions"), f"loss {name!r}")
            out.losses[name] = LossMatrix(theta, actions, np.asarray(body["values"], dtype=float))
        except SchemaError:
            raise
        except (TypeError, ValueError, KeyError) as err:
            raise SchemaError(f"loss {name!r}: {err}") from None
    return out


def experiment_to_dict(ef: ExperimentFile) -> dict:
    space_names = {space: name for name, space in ef.spaces.items()}

    def ref(space: FiniteSpace, context: str) -> str:
        if space not in space_names:
            raise SchemaError(f"{context} uses a space not present in the file")
        return space_names[space]

    doc: dict = {"spaces": {name: list(sp.labels) for name, sp in ef.spaces.items()}}
    doc["distributions"] = {
        name: {"space": ref(d.space, f"distribution {name!r}"), "mass": [float(v) for v in d.mass]}
        for name, d in ef.distributions.items()
    }
    doc["kernels"] = {
        name: {
            "from": ref(k.source, f"kernel {name!r}"),
            "to": ref(k.target, f"kernel {name!r}"),
            "matrix": [[float(v) for v in row] for row in k.matrix],
        }
        for name, k in ef.kernels.items()
    }
    doc["losses"] = {
        name: {
            "theta": ref(l.theta, f"loss {name!r}"),
            "actions": ref(l.actions, f"loss {name!r}"),
            "values": [[float(v) for v in row] for row in l.values],
        }
        for name, l in ef.losses.items()
    }
    return doc


def load_experiment(path: str | Path, max_dim: int = DEFAULT_MAX_DIM) -> ExperimentFile:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as err:
        raise SchemaError(f"cannot read experiment file {path}: {err}") from None
    return experiment_from_dict(doc, max_dim=max_dim)


def save_experiment(ef: ExperimentFile, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(experiment_to_dict(ef), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
