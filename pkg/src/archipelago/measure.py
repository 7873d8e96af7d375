"""Region predicates, probability estimation, and exact reference values.

The central objects are :class:`RegionPredicate` (a named, vectorized
subset of a model's parameter space) and :func:`region_suite`, which
builds the standard family of regions for a model: the physical set,
its PPT/NPT split, the additive and multiplicative entanglement
detections, and their Boolean combinations.

Probabilities are always reported conditional on the physical set,
under the uniform (Lebesgue) measure.  Three estimators are provided:

* :func:`mc_probability` / :func:`suite_probabilities` — counter-based
  Monte Carlo rejection sampling whose output is bitwise independent of
  the worker count,
* :func:`grid_probability` — deterministic cell-center grids,
* :func:`closed_form` — a catalog of exact values for regions whose
  probabilities have analytic expressions.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .separability import (
    additive_statistic,
    catalog_thresholds,
    multiplicative_statistic,
)
from .state_models import (
    MODELS,
    ModelSpec,
    ParameterArityError,
    model as _lookup_model,
    physical_mask,
    ppt_region_mask,
)

__all__ = [
    "RegionPredicate",
    "ProbabilityEstimate",
    "DegenerateRegionError",
    "EmptyRegionError",
    "REGION_NAMES",
    "region_suite",
    "mc_probability",
    "suite_probabilities",
    "grid_probability",
    "grid_suite_probabilities",
    "dilog",
    "closed_form",
    "CLOSED_FORMS",
]

#: Names produced by :func:`region_suite`, in canonical order.
REGION_NAMES = (
    "physical",
    "ppt",
    "npt",
    "free",
    "ent_add",
    "ent_mult",
    "ent_both",
    "ent_any",
    "add_only",
    "mult_only",
    "bound_any",
    "bound_add",
    "bound_mult",
)

#: Subset available when no separability thresholds exist for a model.
THRESHOLD_FREE_REGIONS = ("physical", "ppt", "npt", "free")

_CHUNK = 65536  # proposals per Monte Carlo chunk


class DegenerateRegionError(RuntimeError):
    """Raised when no physical point is found to condition on."""


class EmptyRegionError(RuntimeError):
    """Raised when a requested region yields no points."""


@dataclass(frozen=True)
class RegionPredicate:
    """A named measurable subset of a model's parameter space."""

    name: str
    parameter_count: int
    mask: callable

    def evaluate(self, T):
        """Boolean membership mask for an (n, parameter_count) batch."""
        T = np.asarray(T, dtype=float)
        if T.ndim == 1:
            T = T[None, :]
        if T.ndim != 2 or T.shape[1] != self.parameter_count:
            raise ParameterArityError(
                f"region {self.name!r} expects points of length "
                f"{self.parameter_count}, got shape {T.shape}"
            )
        return np.asarray(self.mask(T), dtype=bool)

    def contains(self, t):
        """Single-point membership."""
        return bool(self.evaluate(np.atleast_2d(np.asarray(t, dtype=float)))[0])

    def _combine(self, other, op, symbol):
        if self.parameter_count != other.parameter_count:
            raise ParameterArityError(
                "cannot combine regions of different parameter counts"
            )
        return RegionPredicate(
            f"({self.name} {symbol} {other.name})",
            self.parameter_count,
            lambda T: op(self.mask(T), other.mask(T)),
        )

    def intersect(self, other):
        return self._combine(other, np.logical_and, "and")

    def union(self, other):
        return self._combine(other, np.logical_or, "or")

    def minus(self, other):
        return self._combine(
            other, lambda a, b: np.logical_and(a, np.logical_not(b)), "minus"
        )

    def complement(self):
        return RegionPredicate(
            f"(not {self.name})",
            self.parameter_count,
            lambda T: np.logical_not(self.mask(T)),
        )

    __and__ = intersect
    __or__ = union
    __sub__ = minus
    __invert__ = complement


def _resolve_thresholds(name, thresholds):
    if thresholds is None:
        exact = catalog_thresholds(name)
        if exact is None:
            return None
        return exact.additive, exact.multiplicative
    if isinstance(thresholds, tuple):
        add, mul = thresholds
        return float(add), float(mul)
    return float(thresholds.additive), float(thresholds.multiplicative)


def region_suite(name, thresholds=None):
    """The standard named regions of a model, conditional on nothing.

    ``thresholds`` may be None (use the cataloged exact values), a
    ``(additive, multiplicative)`` tuple, or any object with
    ``additive``/``multiplicative`` attributes (e.g. a
    :class:`~archipelago.separability.ThresholdResult`).  For models
    without thresholds only the threshold-free regions are returned
    (physical / ppt / npt / free).

    All regions include membership in the physical set, so evaluating
    any region on physical points directly gives the conditional event.
    """
    spec = _lookup_model(name) if isinstance(name, str) else name
    n = spec.parameter_count

    physical = RegionPredicate("physical", n, lambda T: physical_mask(spec, T))
    ppt = RegionPredicate(
        "ppt", n, lambda T: physical_mask(spec, T) & ppt_region_mask(spec, T)
    )
    npt = RegionPredicate(
        "npt", n, lambda T: physical_mask(spec, T) & ~ppt_region_mask(spec, T)
    )
    # Free (distillable) entanglement is exactly the NPT part.
    free = RegionPredicate("free", n, npt.mask)

    suite = {"physical": physical, "ppt": ppt, "npt": npt, "free": free}

    pair = _resolve_thresholds(spec.name, thresholds)
    if pair is None:
        return suite
    add_thr, mul_thr = pair

    ent_add = RegionPredicate(
        "ent_add",
        n,
        lambda T: physical_mask(spec, T) & (additive_statistic(T) > add_thr),
    )
    ent_mult = RegionPredicate(
        "ent_mult",
        n,
        lambda T: physical_mask(spec, T) & (multiplicative_statistic(T) > mul_thr),
    )
    suite["ent_add"] = ent_add
    suite["ent_mult"] = ent_mult
    suite["ent_both"] = RegionPredicate(
        "ent_both", n, lambda T: ent_add.mask(T) & ent_mult.mask(T)
    )
    suite["ent_any"] = RegionPredicate(
        "ent_any", n, lambda T: ent_add.mask(T) | ent_mult.mask(T)
    )
    suite["add_only"] = RegionPredicate(
        "add_only", n, lambda T: ent_add.mask(T) & ~ent_mult.mask(T)
    )
    suite["mult_only"] = RegionPredicate(
        "mult_only", n, lambda T: ent_mult.mask(T) & ~ent_add.mask(T)
    )
    suite["bound_any"] = RegionPredicate(
        "bound_any", n, lambda T: ppt.mask(T) & suite["ent_any"].mask(T)
    )
    suite["bound_add"] = RegionPredicate(
        "bound_add", n, lambda T: ppt.mask(T) & ent_add.mask(T)
    )
    suite["bound_mult"] = RegionPredicate(
        "bound_mult", n, lambda T: ppt.mask(T) & ent_mult.mask(T)
    )
    return {k: suite[k] for k in REGION_NAMES}


@dataclass(frozen=True)
class ProbabilityEstimate:
    """A probability conditional on the physical set."""

    value: float
    std_error: float
    samples: int
    seed: object  # int for Monte Carlo, None for grid/exact
    method: str

    def to_dict(self):
        return {
            "value": self.value,
            "std_error": self.std_error,
            "samples": self.samples,
            "seed": self.seed,
            "method": self.method,
        }


def _chunk_points(spec, seed, chunk_index):
    """Deterministic proposal chunk: same bits for any worker layout.

    Chunk ``c`` consumes exactly ``_CHUNK * parameter_count`` uniform
    doubles from a counter-based stream, so its contents depend only on
    ``(seed, c)``.
    """
    n = spec.parameter_count
    bitgen = np.random.Philox(key=seed)
    bitgen.advance(chunk_index * (_CHUNK // 4) * n)
    u = np.random.Generator(bitgen).random((_CHUNK, n))
    return (2.0 * u - 1.0) * np.asarray(spec.box)


def _mc_scan(spec, mask_fns, samples, seed, workers):
    """Accumulate region counts over the first ``samples`` physical points.

    ``mask_fns`` receive the physical rows of each chunk in proposal
    order; chunks are reduced strictly in index order and the final
    chunk is truncated, so results are independent of ``workers``.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    counts = np.zeros(len(mask_fns), dtype=np.int64)
    got = 0
    proposals = 0
    next_chunk = 0
    max_workers = max(1, int(workers))
    wave = 4 * max_workers

    def compute(ci):
        T = _chunk_points(spec, seed, ci)
        P = T[physical_mask(spec, T)]
        if P.shape[0] == 0:
            return 0, None
        rows = np.stack([fn(P) for fn in mask_fns], axis=1)
        return P.shape[0], rows

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        while got < samples:
            for nphys, rows in pool.map(
                compute, range(next_chunk, next_chunk + wave)
            ):
                proposals += _CHUNK
                if got >= samples or nphys == 0:
                    continue
                take = min(nphys, samples - got)
                counts += rows[:take].sum(axis=0)
                got += take
            next_chunk += wave
            if got == 0 and proposals >= 100_000_000:
                raise DegenerateRegionError(
                    f"no physical point of {spec.name} found in "
                    f"{proposals} proposals"
                )
    return counts


def mc_probability(name, region, samples, seed=0, workers=1):
    """Monte Carlo estimate of P(region | physical) for one region.

    Draws box proposals from a counter-based stream, keeps the first
    ``samples`` physical points in proposal order, and reports the
    fraction lying in ``region`` with the binomial standard error
    sqrt(v*(1-v)/samples).  The result is bitwise identical for any
    ``workers`` value.
    """
    spec = _lookup_model(name) if isinstance(name, str) else name
    if region.parameter_count != spec.parameter_count:
        raise ParameterArityError(
            f"region {region.name!r} does not match model {spec.name!r}"
        )
    counts = _mc_scan(spec, [region.evaluate], samples, seed, workers)
    value = counts[0] / samples
    return ProbabilityEstimate(
        value=float(value),
        std_error=math.sqrt(value * (1.0 - value) / samples),
        samples=int(samples),
        seed=int(seed),
        method="mc",
    )


def suite_probabilities(name, samples, seed=0, workers=1, thresholds=None):
    """Estimates for every suite region from one shared physical sample.

    Because all regions are evaluated on the same points, exact Boolean
    identities (e.g. ent_any = ent_add + mult_only) hold between the
    returned estimates, not just in expectation.
    """
    spec = _lookup_model(name) if isinstance(name, str) else name
    suite = region_suite(spec, thresholds=thresholds)
    names = list(suite)
    counts = _mc_scan(
        spec, [suite[k].evaluate for k in names], samples, seed, workers
    )
    out = {}
    for k, hits in zip(names, counts):
        value = hits / samples
        out[k] = ProbabilityEstimate(
            value=float(value),
            std_error=math.sqrt(value * (1.0 - value) / samples),
            samples=int(samples),
            seed=int(seed),
            method="mc",
        )
    return out


def grid_suite_probabilities(name, resolution=4000, thresholds=None):
    """Grid analog of :func:`suite_probabilities`: one scan, all regions."""
    spec = _lookup_model(name) if isinstance(name, str) else name
    suite = region_suite(spec, thresholds=thresholds)
    names = list(suite)
    counts = dict.fromkeys(names, 0)
    phys_count = 0
    for points in _grid_blocks(spec, resolution):
        phys = physical_mask(spec, points)
        nphys = int(phys.sum())
        if nphys == 0:
            continue
        phys_count += nphys
        P = points[phys]
        for k in names:
            counts[k] += int(suite[k].evaluate(P).sum())
    if phys_count == 0:
        raise DegenerateRegionError(
            f"no physical cell of {spec.name} at resolution {resolution}"
        )
    return {
        k: ProbabilityEstimate(
            value=counts[k] / phys_count,
            std_error=0.0,
            samples=phys_count,
            seed=None,
            method="grid",
        )
        for k in names
    }


def _grid_blocks(spec, resolution):
    """Cell-center grid points over the sampling box, in row blocks."""
    if resolution < 100:
        raise ValueError("resolution must be at least 100")
    n = spec.parameter_count
    if n > 3:
        raise ValueError(
            f"grid evaluation supports at most 3 parameters; "
            f"{spec.name} has {n}"
        )
    axes = [
        (-b + (np.arange(resolution) + 0.5) * (2.0 * b / resolution))
        for b in spec.box
    ]
    block = max(1, int(10**7 // max(1, resolution ** (n - 1))))
    for start in range(0, resolution, block):
        first = axes[0][start : start + block]
        mesh = np.meshgrid(first, *axes[1:], indexing="ij")
        yield np.stack([g.ravel() for g in mesh], axis=1)


def grid_probability(name, region, resolution=4000):
    """Cell-center grid estimate of P(region | physical).

    Deterministic; intended for the two-parameter families, supported up
    to three parameters.  ``resolution`` is the number of cells per axis
    and must be at least 100.
    """
    spec = _lookup_model(name) if isinstance(name, str) else name
    if region.parameter_count != spec.parameter_count:
        raise ParameterArityError(
            f"region {region.name!r} does not match model {spec.name!r}"
        )
    phys_count = 0
    hits = 0
    for points in _grid_blocks(spec, resolution):
        phys = physical_mask(spec, points)
        nphys = int(phys.sum())
        if nphys:
            phys_count += nphys
            hits += int(region.evaluate(points[phys]).sum())
    if phys_count == 0:
        raise DegenerateRegionError(
            f"no physical cell of {spec.name} at resolution {resolution}"
        )
    value = hits / phys_count
    return ProbabilityEstimate(
        value=float(value),
        std_error=0.0,
        samples=phys_count,
        seed=None,
        method="grid",
    )


# ---------------------------------------------------------------------------
# Dilogarithm and the exact-value catalog.
# ---------------------------------------------------------------------------

_PI2_6 = math.pi * math.pi / 6.0


def dilog(x):
    """Real dilogarithm sum_{k>=1} x^k / k^2, extended to x <= 1.

    Uses the defining series on |x| <= 1/2 and standard reflection and
    inversion identities elsewhere.  Raises ValueError for x > 1, where
    the real dilogarithm is undefined.
    """
    x = float(x)
    if x > 1.0:
        raise ValueError("dilog is defined for x <= 1")
    if x == 1.0:
        return _PI2_6
    if x == 0.0:
        return 0.0
    if x < -1.0:
        return -dilog(1.0 / x) - _PI2_6 - 0.5 * math.log(-x) ** 2
    if x > 0.5:
        return _PI2_6 - math.log(x) * math.log1p(-x) - dilog(1.0 - x)
    if x < -0.5:
        return -dilog(x / (x - 1.0)) - 0.5 * math.log1p(-x) ** 2
    total = 0.0
    term = 1.0
    for k in range(1, 200):
        term *= x
        inc = term / (k * k)
        total += inc
        if abs(inc) < 1e-18 * max(abs(total), 1e-30):
            break
    return total


def _qq_mult_value():
    # Exact detection probability of the multiplicative test for the
    # qubit_ququart family (uniform measure on its physical set).
    p = math.sqrt(9.0 - 2.0 * math.sqrt(3.0))
    s3 = math.sqrt(3.0)
    return (
        p / 3.0
        + math.log(12.0) * math.log(419904.0) / (48.0 * s3)
        + math.log(3.0) / (6.0 * s3)
        + math.log(2.0) / (3.0 * s3)
        - math.log(18.0) * math.log(p + 3.0) / (6.0 * s3)
        - 2.0 * math.log(p + 3.0) / (3.0 * s3)
        - math.log(6.0) * math.log(12.0 * (s3 * p + 3.0 * s3 - 1.0)) / (12.0 * s3)
        + dilog((p + 3.0) / 6.0) / (3.0 * s3)
        - dilog((3.0 - p) / 6.0) / (3.0 * s3)
    )


def _two_ququart_mult_value():
    # P((t1*t2*t3)^2 > 1/65536) on the cube |t_i| <= 1/4 equals
    # P(X*Y*Z > 1/4) for independent uniforms on [0, 1].
    c = 0.25
    ln = math.log(1.0 / c)
    return 1.0 - c * (1.0 + ln + 0.5 * ln * ln)


_ACOSH2 = math.acosh(2.0)
_L43 = math.log(4.0 / 3.0)

# name -> (callable giving the exact value, description)
CLOSED_FORMS = {
    "qq_additive": (
        lambda: 2.0 * (math.sqrt(2.0) - 1.0) / 3.0,
        "qubit_ququart: P(additive detection | physical) = 2*(sqrt(2)-1)/3",
    ),
    "qq_mult": (
        _qq_mult_value,
        "qubit_ququart: P(multiplicative detection | physical), "
        "dilogarithm closed form",
    ),
    "two_ququart_add": (
        lambda: 1.0 / 6.0,
        "two_ququart: P(additive detection | physical) = 1/6",
    ),
    "two_ququart_mult": (
        _two_ququart_mult_value,
        "two_ququart: P(multiplicative detection | physical) "
        "= (3 - 2*log(2)^2 - log(4))/4",
    ),
    "addendum_ppt": (
        lambda: 0.5 + 2.0 / math.pi**2,
        "qutrit_addendum: P(PPT | physical) = 1/2 + 2/pi^2",
    ),
    "addendum_ent_add": (
        lambda: 1.0 - 8.0 / (3.0 * math.pi**2),
        "qutrit_addendum: P(additive detection | physical) = 1 - 8/(3*pi^2)",
    ),
    "addendum_bound_add": (
        lambda: 0.5 - 2.0 / (3.0 * math.pi**2),
        "qutrit_addendum: P(PPT and additive detection | physical) "
        "= 1/2 - 2/(3*pi^2)",
    ),
    "npt_ppt": (
        lambda: 8.0 / (3.0 * math.pi),
        "qutrit_ququart_npt: P(PPT | physical) = 8/(3*pi)",
    ),
    "npt_ent_any": (
        lambda: (3.0 * math.pi - 4.0) / (3.0 * math.pi),
        "qutrit_ququart_npt: P(any detection | physical) = (3*pi-4)/(3*pi)",
    ),
    "npt_bound_any": (
        lambda: 4.0 / (3.0 * math.pi),
        "qutrit_ququart_npt: P(PPT and any detection | physical) = 4/(3*pi)",
    ),
    "two_param_qutrit_disk_area": (
        lambda: 16.0 * math.pi / 81.0,
        "two_param_qutrit: area of the physical disk = 16*pi/81",
    ),
    "two_param_qutrit_bound_any": (
        lambda: (math.pi - 2.0) / math.pi,
        "two_param_qutrit: P(any detection | physical) = (pi-2)/pi "
        "(every state is PPT)",
    ),
    "two_param_qutrit_ent_mult": (
        lambda: 2.0 / 3.0 - _ACOSH2 / math.pi,
        "two_param_qutrit: P(multiplicative detection | physical) "
        "= 2/3 - acosh(2)/pi",
    ),
    "two_param_qutrit_add_only": (
        lambda: (-6.0 + math.pi + 3.0 * _ACOSH2) / (3.0 * math.pi),
        "two_param_qutrit: P(additive-only detection | physical) "
        "= (pi - 6 + 3*acosh(2))/(3*pi)",
    ),
    "two_param_ququart_bound_any": (
        lambda: (4.0 - 3.0 * _L43) / 9.0,
        "two_param_ququart: P(any detection | physical) = (4 - 3*log(4/3))/9 "
        "(every state is PPT)",
    ),
    "two_param_ququart_ent_add": (
        lambda: 25.0 / 72.0,
        "two_param_ququart: P(additive detection | physical) = 25/72",
    ),
    "two_param_ququart_ent_mult": (
        lambda: (2.0 - math.log(3.0)) / 3.0,
        "two_param_ququart: P(multiplicative detection | physical) "
        "= (2 - log(3))/3",
    ),
    "two_param_ququart_mult_only": (
        lambda: (7.0 - 24.0 * _L43) / 72.0,
        "two_param_ququart: P(multiplicative-only detection | physical) "
        "= (7 - 24*log(4/3))/72",
    ),
    "two_param_ququart_add_only": (
        lambda: 2.0 * (math.log(27.0 / 8.0) - 1.0) / 9.0,
        "two_param_ququart: P(additive-only detection | physical) "
        "= 2*(log(27/8) - 1)/9",
    ),
    "two_param_ququart_ratio": (
        lambda: (7.0 - 24.0 * _L43) / (8.0 * (4.0 - 3.0 * _L43)),
        "two_param_ququart: multiplicative-only share of detected "
        "entanglement",
    ),
}


def closed_form(name):
    """Exact catalog value by name; KeyError lists the available names."""
    try:
        fn, _ = CLOSED_FORMS[name]
    except KeyError:
        raise KeyError(
            f"unknown closed form {name!r}; available: "
            f"{', '.join(sorted(CLOSED_FORMS))}"
        ) from None
    return fn()
