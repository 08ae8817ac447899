import os
import subprocess
import sys

import numpy as np
import pytest

from layered_catalan import _pykernels, kernels
from layered_catalan.oracle import catalan_presentation, lc_presentation

try:
    from layered_catalan import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def _sides(p):
    return [l for l, _ in p.relations], [r for _, r in p.relations]


@needs_c
@pytest.mark.parametrize("pres,arena_len", [
    (lc_presentation(2), 8), (lc_presentation(3), 7), (lc_presentation(4), 6), (catalan_presentation(3), 7),
])
def test_arena_backends_agree(pres, arena_len):
    lhs, rhs = _sides(pres)
    a = _ckernels.arena_union_find(pres.rank, arena_len, lhs, rhs)
    b = _pykernels.arena_union_find(pres.rank, arena_len, lhs, rhs)
    assert np.array_equal(np.asarray(a), np.asarray(b))


def test_arena_labels_are_least_members():
    p = lc_presentation(3)
    labels = np.asarray(kernels.arena_union_find(3, 5, *_sides(p)))
    assert labels[0] == 0
    assert np.all(labels <= np.arange(labels.size))
    assert np.all(labels[labels] == labels)


def test_arena_without_relations():
    labels = np.asarray(_pykernels.arena_union_find(2, 3, [], []))
    assert np.array_equal(labels, np.arange(15))


@needs_c
@pytest.mark.parametrize("size", [1, 2, 5, 40])
def test_det_backends_agree(size):
    rng = np.random.default_rng(size)
    p = 2**31 - 1
    for _ in range(5):
        m = rng.integers(0, p, size=(size, size))
        assert _ckernels.det_mod_p(m, p) == _pykernels.det_mod_p(m, p)


def test_det_small_cases():
    for mod in (_pykernels, kernels):
        assert mod.det_mod_p([[2, 3], [4, 5]], 7) == (-2) % 7
        assert mod.det_mod_p([[1, 2], [2, 4]], 101) == 0
        assert mod.det_mod_p([[0, 1], [1, 0]], 13) == 12


def test_det_rejects_bad_input():
    with pytest.raises(ValueError):
        _pykernels.det_mod_p([[1, 2, 3]], 7)
    with pytest.raises(ValueError):
        _pykernels.det_mod_p([[1]], 2**31)


def _backend(env_value):
    env = dict(os.environ)
    if env_value is None:
        env.pop("LCN_KERNELS", None)
    else:
        env["LCN_KERNELS"] = env_value
    out = subprocess.run([sys.executable, "-c", "from layered_catalan import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_fallback_forced_by_env():
    assert _backend("python") == "python"


@needs_c
def test_compiled_by_default():
    assert _backend(None) == "cython"
