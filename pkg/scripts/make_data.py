"""Regenerate the bundled newform files in src/padic_kirillov/data.

cm_32a.json: the elliptic curve y^2 = x^3 - x (conductor 32, CM by Q(i)),
with a_p = p + 1 - #E(F_p) for odd p and a_2 = 0.
delta_1000.json: Ramanujan's Delta to q^1000.
"""

import json
from pathlib import Path

from sympy import factorint, primerange

from padic_kirillov.qexp import tau_list

OUT = Path(__file__).resolve().parents[1] / "src" / "padic_kirillov" / "data"


def ap_32a(p):
    if p == 2:
        return 0
    squares = [0] * p
    for y in range(p):
        squares[y * y % p] += 1
    return p - sum(squares[(x**3 - x) % p] for x in range(p))


def coeffs_32a(N):
    ap = {p: ap_32a(p) for p in primerange(2, N + 1)}
    out = [0] * (N + 1)
    out[1] = 1
    for n in range(2, N + 1):
        val = 1
        for p, e in factorint(n).items():
            if p == 2:
                val = 0
                break
            a0, a1 = 1, ap[p]
            for _ in range(e - 1):
                a0, a1 = a1, ap[p] * a1 - p * a0
            val *= a1
        out[n] = val
    return out[1:]


def write(name, doc):
    (OUT / name).write_text(json.dumps(doc, indent=1) + "\n")


if __name__ == "__main__":
    write("cm_32a.json", {
        "level": 32,
        "weight": 2,
        "nebentypus": {"modulus": 1, "values": []},
        "eigenform": True,
        "metadata": {"name": "32a (y^2 = x^3 - x)", "cm": True, "cm_disc": -4},
        "coeffs": [str(a) for a in coeffs_32a(1000)],
    })
    write("delta_1000.json", {
        "level": 1,
        "weight": 12,
        "nebentypus": {"modulus": 1, "values": []},
        "eigenform": True,
        "metadata": {"name": "Delta", "cm": False},
        "coeffs": [str(a) for a in tau_list(1000)],
    })
