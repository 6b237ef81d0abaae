"""Compiled kernels against the pure-Python twin, and backend selection."""

import os
import subprocess
import sys

import numpy as np
import pytest

from persuade import _backend
from persuade import _kernels_py as kpy
from persuade.game import structure
from persuade.solver import solve


def _random_inputs(rng, n=3, m=3, batch=40):
    recv = rng.normal(size=(m, n))
    slin = rng.normal(size=(m, n))
    sconst = rng.normal(size=m)
    prior = rng.dirichlet(np.ones(n) * 2.0)
    supports = rng.dirichlet(np.ones(n), size=(batch, 2))
    return recv, slin, sconst, prior, supports


def test_backend_identifies_itself():
    assert _backend.BACKEND in ("cython", "python")


def test_eval_supports_agreement():
    kc = _backend.kernels
    if kc is kpy:
        pytest.skip("compiled backend unavailable")
    rng = np.random.default_rng(11)
    for _ in range(5):
        recv, slin, sconst, prior, supports = _random_inputs(rng)
        vc, fc, wc = kc.eval_supports(recv, slin, sconst, prior, supports)
        vp, fp, wp = kpy.eval_supports(recv, slin, sconst, prior, supports)
        assert np.array_equal(fc, fp)
        mask = fc.astype(bool)
        assert np.allclose(vc[mask], vp[mask], atol=1e-12)
        assert np.allclose(wc[mask], wp[mask], atol=1e-12)


def test_multistart_agreement():
    kc = _backend.kernels
    if kc is kpy:
        pytest.skip("compiled backend unavailable")
    rng = np.random.default_rng(3)
    recv, slin, sconst, prior, _ = _random_inputs(rng)
    verts = np.vstack([np.eye(3), [[1 / 3, 1 / 3, 1 / 3]]])
    offsets = np.array([0, 2, 4], dtype=np.int64)
    starts = rng.dirichlet(np.ones(4), size=8)
    fc, zc, _ = kc.multistart_nm(verts, offsets, recv, slin, sconst, prior,
                                 starts, 200)
    fp, zp, _ = kpy.multistart_nm(verts, offsets, recv, slin, sconst, prior,
                                  starts, 200)
    assert fc == pytest.approx(fp, abs=1e-10)
    assert np.allclose(zc, zp, atol=1e-8)


def test_forced_python_backend_subprocess():
    code = ("import persuade._backend as b; "
            "print(b.BACKEND); "
            "import persuade.solver as s, persuade.cli as c; "
            "print(f'{s.solve(c.financial_game(), 2).value:.6f}')")
    env = dict(os.environ, PERSUADE_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", code],
                         capture_output=True, text=True, env=env)
    assert out.returncode == 0, out.stderr
    lines = out.stdout.split()
    assert lines[0] == "python"
    assert float(lines[1]) == pytest.approx(0.30, abs=1e-6)


def test_solver_value_backend_independent(financial):
    # in-process run uses whichever backend was selected at import; the
    # subprocess above pins pure python; both must give the k=2 optimum
    assert solve(financial, 2).value == pytest.approx(0.30, abs=1e-6)
