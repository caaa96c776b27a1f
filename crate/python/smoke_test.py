"""Quick end-to-end check of the extension module: `python python/smoke_test.py`."""

import cmath
import json
import math
import tempfile
from pathlib import Path

import opuclab_py as op


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


names = [name for name, _ in op.builtin_families()]
assert names[:5] == ["lebesgue", "bernstein_szego", "geronimus", "ell2", "mixed"], names

leb = op.Measure.lebesgue(1024)
close(leb.poisson(0j), 1.0, 1e-14)
close(leb.moments(4)[1], 0, 1e-14)

# Poisson weight (1 - r^2)/|1 - r e^{it}|^2 has parameters (r, 0, 0, ...).
r, grid = 0.5, 4096
weight = [(1 - r * r) / abs(1 - r * cmath.exp(2j * math.pi * j / grid)) ** 2 for j in range(grid)]
bs = op.Measure(weight)
assert bs.is_szego()
levinson = bs.verblunsky(8).values
close(levinson[0], r, 1e-10)
assert max(abs(a) for a in levinson[1:]) < 1e-10
series = bs.schur_parameters(8).values
assert max(abs(a - b) for a, b in zip(levinson, series)) < 1e-8
close(bs.szego_residual(bs.verblunsky(8), 8), 0.0, 1e-10)

measure, params = op.build_family(json.dumps({"kind": "geronimus", "a": 0.3}), 4096, 64)
assert not measure.is_szego()
assert len(measure.atoms) == 1
assert all(abs(a - 0.3) < 1e-15 for a in params.values)
assert params.dual().dual().values == params.values

xi = cmath.exp(0.7j)
phi, phi_star = params.eval_pair(xi, 20)
close(abs(phi), abs(phi_star), 1e-12)
k_direct = sum(abs(params.eval_pair(xi, k)[0]) ** 2 for k in range(21))
close(params.cd_kernel(xi, xi, 20).real, k_direct, 1e-9 * k_direct)
close(params.cmv_kernel(xi, xi, 20).real, k_direct, 1e-9 * k_direct)

# For a Bernstein-Szego measure the entropy product over all nonzero
# parameters already equals the entropy.
z = 0.4 * cmath.exp(1.1j)
close(bs.verblunsky(4).entropy_product(z, 4), bs.entropy(z), 1e-9)

config = {"family": {"kind": "bernstein_szego", "r": 0.5}, "experiment": "all", "n_list": [8, 32, 128]}
with tempfile.TemporaryDirectory() as out:
    report = json.loads(op.run_experiment(json.dumps(config), out))
    assert (Path(out) / "report.json").exists()
assert report["schema"] == 1
failed = [v["invariant"] for v in report["verdicts"] if v["status"] == "fail"]
assert not failed, failed

try:
    op.build_family('{"kind": "bernstein_szego", "r": 1.5}')
except ValueError:
    pass
else:
    raise AssertionError("r >= 1 must be rejected")

print("smoke test passed")
