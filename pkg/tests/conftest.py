import numpy as np
import pytest

from oddstop import _backend
from oddstop.core import Instance
from oddstop.rewards import VariantSpec, build_rewards


def random_variant(rng: np.random.Generator, n: int) -> VariantSpec:
    kinds = ["last-success", "mth-last", "any-of-last-m"] + (["k-of-last-l"] if n >= 2 else [])
    kind = kinds[int(rng.integers(len(kinds)))]
    if kind == "last-success":
        return VariantSpec(kind)
    if kind in ("mth-last", "any-of-last-m"):
        return VariantSpec(kind, m=int(rng.integers(1, min(n, 6) + 1)))
    l = int(rng.integers(1, min(n - 1, 6) + 1))
    k = int(rng.integers(1, l + 1))
    return VariantSpec(kind, k=k, l=l)


def random_instance(rng: np.random.Generator, n_max: int, n_min: int = 1) -> Instance:
    """p uniform on [0.05, 0.95]; rewards from a random variant or uniform on [0, 1]."""
    n = int(rng.integers(n_min, n_max + 1))
    p = rng.uniform(0.05, 0.95, n)
    if rng.random() < 0.5:
        spec = random_variant(rng, n)
        return Instance.from_arrays(p, build_rewards(p, spec), variant=spec)
    return Instance.from_arrays(p, rng.uniform(0.0, 1.0, n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


BACKENDS = ["python"] + (["cython"] if _backend.BACKEND == "cython" else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param
