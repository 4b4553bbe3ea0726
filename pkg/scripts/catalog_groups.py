"""Permutation generators for the catalog groups (used to rebuild catalog.json)."""
from __future__ import annotations


def _affine(p: int, linear: list[list[list[int]]], translations: bool = True) -> list[str]:
    """Generators of F_p^2 : <linear maps> acting on p^2 points (x, y) -> p*x + y."""
    pts = [(x, y) for x in range(p) for y in range(p)]

    def cyc(f) -> str:
        images = [f(x, y) for x, y in pts]
        images = [p * a + b for a, b in images]
        seen, out = set(), []
        for i in range(len(images)):
            if i in seen or images[i] == i:
                continue
            c, j = [i], images[i]
            seen.add(i)
            while j != i:
                c.append(j)
                seen.add(j)
                j = images[j]
            out.append("(" + " ".join(map(str, c)) + ")")
        return "".join(out) or "()"

    gens = []
    if translations:
        gens.append(cyc(lambda x, y: ((x + 1) % p, y)))
        gens.append(cyc(lambda x, y: (x, (y + 1) % p)))
    for m in linear:
        gens.append(cyc(lambda x, y, m=m: ((m[0][0] * x + m[0][1] * y) % p, (m[1][0] * x + m[1][1] * y) % p)))
    return gens


GROUPS = {
    "1": (1, ["()"]),
    "2^2": (4, ["(0 1)", "(2 3)"]),
    "S3": (3, ["(0 1)", "(0 1 2)"]),
    "2^3": (6, ["(0 1)", "(2 3)", "(4 5)"]),
    "D10": (5, ["(1 4)(2 3)", "(0 1 2 3 4)"]),
    "D12": (6, ["(1 5)(2 4)", "(0 1 2 3 4 5)"]),
    "3^2:2": (9, _affine(3, [[[2, 0], [0, 2]]])),
    "S4": (4, ["(0 1)", "(0 1 2 3)"]),
    "5^2:2": (25, _affine(5, [[[4, 0], [0, 4]]])),
    "3^2:S3": (9, _affine(3, [[[1, 1], [0, 1]], [[1, 0], [0, 2]]])),
    "A5": (5, ["(0 1 2 3 4)", "(0 1 2)"]),
    "5^2:S3": (25, _affine(5, [[[0, 4], [1, 4]], [[0, 1], [1, 0]]])),
}

ORDERS = {"1": 1, "2^2": 4, "S3": 6, "2^3": 8, "D10": 10, "D12": 12, "3^2:2": 18,
          "S4": 24, "5^2:2": 50, "3^2:S3": 54, "A5": 60, "5^2:S3": 150}
