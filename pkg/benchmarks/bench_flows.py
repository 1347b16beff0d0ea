"""Time RK4 flows and the sampled composition check with and without numba.

Usage: python3 benchmarks/bench_flows.py [--repeat N]

Each backend runs in a fresh interpreter because the kernel choice is made
at import time from GRADRED_NO_NUMBA.
"""
import argparse
import json
import os
import subprocess
import sys

CHILD = r"""
import json, time
import numpy as np
from gradred import _kernels
from gradred.exactpoly import parse_polynomial
from gradred.gradedalg import PoissonBivector, hamiltonian_vector_field, parse_graded
from gradred.dgla import ActionData
from gradred.liegroupoid import NumericField, PairGroupoidAction, identity_crossed_module, vector_group, verify_kxky

V = ("q1", "p1", "q2", "p2")
pi = PoissonBivector(V, {("q1", "p1"): 1, ("q2", "p2"): 1})
# quartic coupled oscillator: a non-affine field that needs RK4
H = parse_polynomial("1/2*p1^2 + 1/2*p2^2 + 1/4*q1^4 + 1/4*q2^4 + 1/2*q1^2*q2^2", V)
F = NumericField(hamiltonian_vector_field(pi, H).as_vector())
rng = np.random.default_rng(0)
F.flow_rk4(rng.normal(size=4), 1.0)  # warm-up (compilation or cache load)
t = time.perf_counter()
for _ in range({repeat}):
    F.flow_rk4(rng.normal(size=4), 1.0)
flow = (time.perf_counter() - t) / {repeat}

W = ("y1", "y2", "y3", "y4")
data = ActionData([parse_polynomial("y4", W)], [parse_graded("-th3", W)],
                  PoissonBivector(W, {("y1", "y2"): 1, ("y3", "y4"): 1}))
act = PairGroupoidAction(data, identity_crossed_module(vector_group(1)))
t = time.perf_counter()
stats = verify_kxky(act, 100, 0)
kxky = time.perf_counter() - t
print(json.dumps({"numba": _kernels.using_numba(), "rk4_flow_s": flow, "verify_kxky_s": kxky,
                  "max_deviation": stats["max_deviation"]}))
"""


def run(no_numba: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env["GRADRED_NO_NUMBA"] = "1" if no_numba else "0"
    out = subprocess.run([sys.executable, "-c", CHILD.replace("{repeat}", str(repeat))],
                         env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    rows = [run(False, args.repeat), run(True, args.repeat)]
    print(f"{'backend':<8}{'RK4 flow (s)':>14}{'verify_kxky (s)':>18}{'max dev':>12}")
    for r in rows:
        name = "numba" if r["numba"] else "numpy"
        print(f"{name:<8}{r['rk4_flow_s']:>14.4f}{r['verify_kxky_s']:>18.4f}{r['max_deviation']:>12.2e}")
    a, b = rows
    if a["numba"] and a["rk4_flow_s"] > 0:
        print(f"RK4 speed-up: {b['rk4_flow_s'] / a['rk4_flow_s']:.1f}x")


if __name__ == "__main__":
    main()
