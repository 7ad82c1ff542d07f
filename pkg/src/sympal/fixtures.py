"""Builders for the small representations used by tests, the CLI and the
acceptance suite. The JSON files under ``fixtures/`` are written from these
builders by ``python3 -m sympal.fixtures``.
"""

import json
from pathlib import Path

import numpy as np

from sympal import compat, grouptool
from sympal.ffield import cyclic_characters, ff_make
from sympal.symplectic import Mat
from sympal.twists import FiniteGroup, GroupRep

FIXTURE_DIR = Path(__file__).parent / "fixtures"

# Quaternion units of the binary tetrahedral group, realized mod 5:
# i^2 = j^2 = -1, and w = (1 + i + j + k)/2 with 1/2 = 3.
_BT_GENS_MOD5 = (
    [[2, 0], [0, 3]],
    [[0, 1], [4, 0]],
    [[4, 4], [3, 2]],
)


def binary_tetrahedral(L):
    """The 2-dim rep of SL_2(F_3) (as the binary tetrahedral group) over L, char 5."""
    if L.p != 5:
        raise ValueError("this model lives in characteristic 5")
    gens = [Mat.from_rows(L, g) for g in _BT_GENS_MOD5]
    return grouptool.closure(gens)


def sigma(L=None, d=1):
    """sigma: SL_2(F_3) -> GL_2(L) with traces in F_5."""
    L = ff_make(5, 2) if L is None else L
    G = binary_tetrahedral(L)
    group = FiniteGroup.from_matgroup(G, prefix="s")
    return GroupRep(group, G.arr, L, d, check=False)


def rho_star():
    """sigma (x) mu on SL_2(F_3) x C_3 over F_25, with mu of order 3; K = F_5."""
    L = ff_make(5, 2)
    s = sigma(L)
    C3 = FiniteGroup.cyclic(3)
    group = FiniteGroup.direct_product(s.group, C3)
    omega = cyclic_characters(3, L)[1].value
    mu = [L.pow(omega, j) for j in range(3)]
    T = L.tables()
    arr = np.array([T.mul[s.arr[a], mu[c]] for a in range(len(s.group)) for c in range(3)])
    return GroupRep(group, arr, L, 1)


def rho_star_with_kernel():
    """rho_star inflated along a C_2 factor that acts trivially."""
    r = rho_star()
    C2 = FiniteGroup.cyclic(2, name="z")
    group = FiniteGroup.direct_product(r.group, C2)
    arr = np.repeat(r.arr, 2, axis=0)
    return GroupRep(group, arr, r.L, 1)


def s3_standard(L=None):
    """Standard 2-dim rep of S_3 over L (char not 2 or 3)."""
    L = ff_make(5, 2) if L is None else L
    r = Mat.from_rows(L, [[0, -1], [1, -1]])
    s = Mat.from_rows(L, [[0, 1], [1, 0]])
    G = grouptool.closure([r, s])
    return GroupRep(FiniteGroup.from_matgroup(G, prefix="x"), G.arr, L, 1, check=False)


def sl2_natural(p, k, d=1):
    """SL_2(F_{p^k}) in its natural representation, K = F_{p^d}."""
    L = ff_make(p, k)
    G = grouptool.special_linear_2(L)
    return GroupRep(FiniteGroup.from_matgroup(G, prefix="m"), G.arr, L, d, check=False)


def _sym3(A, p):
    """Matrix of A on homogeneous cubics in x, y (basis x^3, x^2 y, x y^2, y^3)."""
    (a, b), (c, d) = A
    cols = []
    for j in range(4):
        poly = [1]  # coefficients of x^(deg - i) y^i
        for lin in [(a, c)] * (3 - j) + [(b, d)] * j:
            nxt = [0] * (len(poly) + 1)
            for i, coef in enumerate(poly):
                nxt[i] = (nxt[i] + coef * lin[0]) % p
                nxt[i + 1] = (nxt[i + 1] + coef * lin[1]) % p
            poly = nxt
        cols.append(poly)
    return [[cols[j][i] for j in range(4)] for i in range(4)]


def sym3_sl2(p=5, k=2):
    """Sym^3 of the natural rep of SL_2(F_p), in standard symplectic form over F_{p^k}.

    The invariant alternating form is found as an intertwiner between rho and
    its contragredient, then moved to J with symplectic_basis.
    """
    from sympal import matbatch as mb
    from sympal.symplectic import symplectic_basis
    from sympal.twists import find_intertwiner

    base = ff_make(p, 1)
    G = grouptool.special_linear_2(base)
    group = FiniteGroup.from_matgroup(G, prefix="m")
    L = ff_make(p, k)
    arr = np.array([_sym3(a.tolist(), p) for a in G.arr], dtype=np.int64)
    T = L.tables()
    contra = np.transpose(mb.inverse(T, arr), (0, 2, 1))
    I = find_intertwiner(L, contra, arr, group.generators)
    N = symplectic_basis(I)
    rep = GroupRep(group, arr, L, 1, check=False).conjugate(N)
    return GroupRep(group, rep.arr, L, 1, symplectic=True)


def sl23_generators_json():
    return {
        "field": "3:2",
        "n": 2,
        "generators": [[["1", "1"], ["0", "1"]], [["1", "0"], ["1", "1"]]],
    }


def write_all(directory=FIXTURE_DIR):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    files = {
        "sl23.json": sl23_generators_json(),
        "rho_star.json": rho_star().to_json(),
        "s3_std.json": s3_standard().to_json(),
        "rho_star_system.json": compat.rho_star_system().to_json(),
        "quartic_system.json": compat.quartic_twist_system().to_json(),
    }
    for name, obj in files.items():
        (directory / name).write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n")
    return sorted(files)


if __name__ == "__main__":
    for name in write_all():
        print(name)
