"""Reproducible static disorder on couplings and fields.

Every random number is a pure function of (master_seed, sample_index,
site_index, parameter_kind): a 64-bit mixing hash turns the tuple into a
uniform in (0, 1), and normal variates go through the inverse CDF.  There is
no sequential generator state, so samples can be drawn in any order, from any
number of threads, and always come out bit-identical.

Coupling errors can be additive (J -> J + d) or multiplicative
(J -> J(1 + d)); field errors are additive only, since scaling a zero field
does nothing.  Both modes consume the same underlying draw for a given
(seed, sample, site), so on a unit-coupling chain they produce identical
perturbed chains, not merely identical distributions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import ndtri

from .chain import Chain

FORMAT_VERSION = 1

_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)

_KIND_COUPLING = np.uint64(0)
_KIND_FIELD = np.uint64(1)

COUPLING_MODES = ("none", "additive", "multiplicative")
FIELD_MODES = ("none", "additive")
DIST_KINDS = ("uniform", "normal")


def _mix64(z: np.ndarray) -> np.ndarray:
    z = z + _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def counter_uniform(seed: int, sample_index: int, sites: np.ndarray, kind: int) -> np.ndarray:
    """Deterministic uniforms in (0, 1), one per site index."""
    with np.errstate(over="ignore"):
        h = _mix64(np.uint64(int(seed) % (1 << 64)))
        h = _mix64(h ^ np.uint64(int(sample_index) % (1 << 64)))
        h = _mix64(h ^ sites.astype(np.uint64))
        h = _mix64(h ^ np.uint64(kind))
    # top 53 bits, offset by half a step: never exactly 0 or 1
    return ((h >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0 ** -53


@dataclass
class Distribution:
    """uniform(half-width) or normal(standard deviation), both zero-mean."""

    kind: str
    param: float

    def __post_init__(self):
        if self.kind not in DIST_KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}")
        self.param = float(self.param)
        if self.param < 0:
            raise ValueError("distribution parameter must be >= 0")

    def draw(self, u: np.ndarray) -> np.ndarray:
        if self.param == 0.0:
            return np.zeros_like(u)
        if self.kind == "uniform":
            return self.param * (2.0 * u - 1.0)
        return self.param * ndtri(u)


@dataclass
class DisorderSpec:
    """Randomization contract: modes, distributions, and the master seed."""

    coupling_mode: str = "none"
    field_mode: str = "none"
    coupling_dist: Distribution | None = None
    field_dist: Distribution | None = None
    master_seed: int = 0

    def __post_init__(self):
        if self.coupling_mode not in COUPLING_MODES:
            raise ValueError(f"unknown coupling mode {self.coupling_mode!r}")
        if self.field_mode not in FIELD_MODES:
            raise ValueError("field disorder must be additive or none; "
                             "a multiplicative error on zero fields is meaningless")
        if self.coupling_dist is None:
            self.coupling_dist = Distribution("uniform", 0.0)
        if self.field_dist is None:
            self.field_dist = Distribution("uniform", 0.0)
        self.master_seed = int(self.master_seed)


def zero_disorder(seed: int = 0) -> DisorderSpec:
    return DisorderSpec(master_seed=seed)


def normal_disorder(sigma_j: float, sigma_b: float, seed: int,
                    coupling_mode: str = "additive") -> DisorderSpec:
    """Normal coupling/field errors as used for the sweep grids."""
    return DisorderSpec(
        coupling_mode=coupling_mode if sigma_j > 0 else "none",
        field_mode="additive" if sigma_b > 0 else "none",
        coupling_dist=Distribution("normal", sigma_j),
        field_dist=Distribution("normal", sigma_b),
        master_seed=seed,
    )


def uniform_disorder(delta_j: float, delta_b: float, seed: int,
                     coupling_mode: str = "additive") -> DisorderSpec:
    """Uniform +-delta coupling/field errors."""
    return DisorderSpec(
        coupling_mode=coupling_mode if delta_j > 0 else "none",
        field_mode="additive" if delta_b > 0 else "none",
        coupling_dist=Distribution("uniform", delta_j),
        field_dist=Distribution("uniform", delta_b),
        master_seed=seed,
    )


def sample_disordered_chain(base: Chain, spec: DisorderSpec, sample_index: int) -> Chain:
    """Draw one disordered realization of the chain.

    Perturbed couplings may cross zero or change sign; they are passed through
    unclamped, since large-disorder regimes need exactly that behaviour.
    """
    couplings = base.couplings
    fields = base.fields
    if spec.coupling_mode != "none" and spec.coupling_dist.param > 0:
        sites = np.arange(base.n - 1, dtype=np.uint64)
        d = spec.coupling_dist.draw(
            counter_uniform(spec.master_seed, sample_index, sites, _KIND_COUPLING))
        couplings = couplings + d if spec.coupling_mode == "additive" else couplings * (1.0 + d)
    if spec.field_mode != "none" and spec.field_dist.param > 0:
        sites = np.arange(base.n, dtype=np.uint64)
        d = spec.field_dist.draw(
            counter_uniform(spec.master_seed, sample_index, sites, _KIND_FIELD))
        fields = fields + d
    return replace(base, couplings=couplings, fields=fields,
                   label=f"{base.label}#r{sample_index}")


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def disorder_to_dict(spec: DisorderSpec) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "coupling_mode": spec.coupling_mode,
        "field_mode": spec.field_mode,
        "coupling_dist": {"kind": spec.coupling_dist.kind, "param": spec.coupling_dist.param},
        "field_dist": {"kind": spec.field_dist.kind, "param": spec.field_dist.param},
        "seed": spec.master_seed,
    }


def disorder_from_dict(data: dict) -> DisorderSpec:
    return DisorderSpec(
        coupling_mode=data["coupling_mode"],
        field_mode=data["field_mode"],
        coupling_dist=Distribution(**data["coupling_dist"]),
        field_dist=Distribution(**data["field_dist"]),
        master_seed=int(data["seed"]),
    )


def save_disorder(spec: DisorderSpec, path) -> None:
    with open(path, "w") as fh:
        json.dump(disorder_to_dict(spec), fh, indent=2)
        fh.write("\n")


def load_disorder(path) -> DisorderSpec:
    with open(path) as fh:
        return disorder_from_dict(json.load(fh))
