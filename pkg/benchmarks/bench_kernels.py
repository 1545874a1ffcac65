"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Also times one end-to-end certification per backend.  Each backend runs in
a fresh interpreter because the choice is made at import.
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, random, timeit
from tropell import kernels
from tropell.faithful import certify_family
from tropell.literals import parse_series

rng = random.Random(1)
n = 400
a_exp = sorted(rng.sample(range(4 * n), n)); a_num = [rng.randint(-99, 99) for _ in a_exp]
b_exp = sorted(rng.sample(range(4 * n), n)); b_num = [rng.randint(-99, 99) for _ in b_exp]
pts = [(x, y) for x in range(7) for y in range(7) if x + y <= 6]
xs = [p[0] for p in pts]; ys = [p[1] for p in pts]
hs = [rng.randint(0, 40) + (x - 3) ** 2 + (y - 2) ** 2 for x, y in pts]
ks = [1, 2, 5, 9]; nums = [3, -7, 2, 11]

cases = {
    "convolve 400x400": lambda: kernels.convolve(a_exp, a_num, b_exp, b_num, 3 * n),
    "lower_faces 28 points": lambda: kernels.lower_faces(xs, ys, hs),
    "inverse_series 300 terms": lambda: kernels.inverse_series(ks, nums, 5, 300),
    "certify family k=6": lambda: certify_family(parse_series("1"), parse_series("t^6")),
}
out = {"backend": kernels.BACKEND}
for name, fn in cases.items():
    out[name] = min(timeit.repeat(fn, number=1, repeat=REPEAT))
print(json.dumps(out))
"""


def run(pure, repeat):
    env = dict(os.environ)
    env.pop("TROPELL_PURE_PYTHON", None)
    if pure:
        env["TROPELL_PURE_PYTHON"] = "1"
    code = WORKER.replace("REPEAT", str(repeat))
    proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    fast = run(False, args.repeat)
    slow = run(True, args.repeat)
    if fast["backend"] != "cython":
        print("compiled extension not built; both columns use the Python fallback", file=sys.stderr)
    print(f"{'kernel':<28}{fast['backend'] + ' (ms)':>14}{'python (ms)':>14}{'speedup':>10}")
    for name in fast:
        if name == "backend":
            continue
        a, b = fast[name] * 1e3, slow[name] * 1e3
        print(f"{name:<28}{a:>14.3f}{b:>14.3f}{b / a:>9.1f}x")


if __name__ == "__main__":
    main()
