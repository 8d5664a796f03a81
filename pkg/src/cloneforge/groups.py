"""Finite groups as dense Cayley tables with 0-based element indices."""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FiniteGroup",
    "GroupValidation",
    "direct_product",
    "group_from_name",
    "make_named_group",
    "regular_representation",
    "validate",
]


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group on elements ``0..order-1``.

    ``cayley[f, g]`` is the index of the product ``f*g``.  By convention every
    constructor in this module places the identity at index 0; group-indexed
    weight vectors elsewhere in the package rely on this dense labeling.
    """

    order: int
    cayley: np.ndarray
    identity: int
    inverses: np.ndarray
    label: str

    def __post_init__(self):
        cayley = np.ascontiguousarray(np.asarray(self.cayley, dtype=np.int64))
        inverses = np.ascontiguousarray(np.asarray(self.inverses, dtype=np.int64))
        cayley.setflags(write=False)
        inverses.setflags(write=False)
        object.__setattr__(self, "cayley", cayley)
        object.__setattr__(self, "inverses", inverses)

    def mul(self, f: int, g: int) -> int:
        return int(self.cayley[f, g])

    def inv(self, f: int) -> int:
        return int(self.inverses[f])

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.cayley, self.cayley.T))

    def element_order(self, f: int) -> int:
        k, x = 1, f
        while x != self.identity:
            x = self.mul(x, f)
            k += 1
            if k > self.order:
                raise ValueError("not a group table: element has no finite order")
        return k

    def element_orders(self) -> list[int]:
        return [self.element_order(f) for f in range(self.order)]

    @classmethod
    def from_table(cls, cayley, label: str = "custom") -> "FiniteGroup":
        """Build from a raw Cayley table, deriving identity and inverses.

        Raises ValueError if the table is not a group table.
        """
        cayley = np.asarray(cayley, dtype=np.int64)
        if cayley.ndim != 2 or cayley.shape[0] != cayley.shape[1]:
            raise ValueError("cayley table must be square")
        n = cayley.shape[0]
        idx = np.arange(n)
        identity = None
        for e in range(n):
            if np.array_equal(cayley[e], idx) and np.array_equal(cayley[:, e], idx):
                identity = e
                break
        if identity is None:
            raise ValueError("table has no identity element")
        inverses = np.full(n, -1, dtype=np.int64)
        for f in range(n):
            hits = np.nonzero(cayley[f] == identity)[0]
            if len(hits) != 1 or cayley[hits[0], f] != identity:
                raise ValueError(f"element {f} has no two-sided inverse")
            inverses[f] = hits[0]
        group = cls(order=n, cayley=cayley, identity=identity, inverses=inverses, label=label)
        verdict = validate(group)
        if not verdict.ok:
            raise ValueError("not a group table: " + "; ".join(verdict.violations))
        return group


@dataclass(frozen=True)
class GroupValidation:
    ok: bool
    violations: list[str] = field(default_factory=list)


def validate(group: FiniteGroup) -> GroupValidation:
    """Check every group axiom on the stored tables, reporting all violations."""
    v: list[str] = []
    n = group.order
    cayley = np.asarray(group.cayley)
    inverses = np.asarray(group.inverses)
    if n < 1:
        return GroupValidation(False, ["order must be positive"])
    if cayley.shape != (n, n):
        v.append(f"cayley shape {cayley.shape} inconsistent with order {n}")
    if inverses.shape != (n,):
        v.append(f"inverses shape {inverses.shape} inconsistent with order {n}")
    if not (0 <= group.identity < n):
        v.append("identity index out of range")
    if v:
        return GroupValidation(False, v)

    if cayley.min() < 0 or cayley.max() >= n:
        v.append("cayley entries out of range")
        return GroupValidation(False, v)

    idx = np.arange(n)
    for f in range(n):
        if not np.array_equal(np.sort(cayley[f]), idx):
            v.append(f"latin square violated in row {f}")
        if not np.array_equal(np.sort(cayley[:, f]), idx):
            v.append(f"latin square violated in column {f}")
    # (f*g)*h == f*(g*h) for all triples, by table lookup
    left = cayley[cayley, :]
    right = cayley[:, cayley]
    if not np.array_equal(left, right):
        f, g, h = np.argwhere(left != right)[0]
        v.append(f"associativity violated at ({f},{g},{h})")
    e = group.identity
    if not (np.array_equal(cayley[e], idx) and np.array_equal(cayley[:, e], idx)):
        v.append("identity axiom violated")
    if inverses.min() < 0 or inverses.max() >= n:
        v.append("inverses entries out of range")
    else:
        if not (np.all(cayley[idx, inverses] == e) and np.all(cayley[inverses, idx] == e)):
            v.append("inverse axiom violated")
    return GroupValidation(len(v) == 0, v)


def _cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError(f"cyclic group order must be >= 1, got {n}")
    idx = np.arange(n)
    cayley = (idx[:, None] + idx[None, :]) % n
    return FiniteGroup(n, cayley, 0, (-idx) % n, f"Z{n}")


def _dihedral(order: int) -> FiniteGroup:
    # elements: rotations rho_a -> a, reflections sigma_a -> n + a, acting on Z_n
    if order < 2 or order % 2 != 0:
        raise ValueError(f"dihedral group order must be even and >= 2, got {order}")
    n = order // 2
    cayley = np.zeros((order, order), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            cayley[a, b] = (a + b) % n
            cayley[a, n + b] = n + (a + b) % n
            cayley[n + a, b] = n + (a - b) % n
            cayley[n + a, n + b] = (a - b) % n
    return FiniteGroup.from_table(cayley, f"D{n}")


def _symmetric(n: int) -> FiniteGroup:
    if n < 1 or n > 7:
        raise ValueError(f"symmetric group parameter must be in 1..7, got {n}")
    perms = sorted(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    order = len(perms)
    cayley = np.zeros((order, order), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            comp = tuple(p[q[x]] for x in range(n))
            cayley[i, j] = index[comp]
    return FiniteGroup.from_table(cayley, f"S{n}")


_QUATERNION_UNITS = {
    # (unit1, unit2) -> (sign, unit); units 0..3 stand for 1, i, j, k
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def _quaternion(order: int) -> FiniteGroup:
    if order != 8:
        raise ValueError(f"quaternion group is only defined for order 8, got {order}")
    # element index = 2*unit + (0 for +, 1 for -); identity (+1) at 0
    cayley = np.zeros((8, 8), dtype=np.int64)
    for u1 in range(4):
        for s1 in range(2):
            for u2 in range(4):
                for s2 in range(2):
                    sign, unit = _QUATERNION_UNITS[(u1, u2)]
                    s = (s1 + s2 + (0 if sign > 0 else 1)) % 2
                    cayley[2 * u1 + s1, 2 * u2 + s2] = 2 * unit + s
    return FiniteGroup.from_table(cayley, "Q8")


def direct_product(g1: FiniteGroup, g2: FiniteGroup) -> FiniteGroup:
    """Componentwise product; element (a, b) gets index ``a * |G2| + b``."""
    n1, n2 = g1.order, g2.order
    a = np.arange(n1)
    b = np.arange(n2)
    # cayley[(a1,b1),(a2,b2)] = (a1*a2, b1*b2)
    c1 = g1.cayley[a[:, None, None, None], a[None, None, :, None]]
    c2 = g2.cayley[b[None, :, None, None], b[None, None, None, :]]
    cayley = (c1 * n2 + c2).reshape(n1 * n2, n1 * n2)
    inverses = (g1.inverses[:, None] * n2 + g2.inverses[None, :]).reshape(-1)
    return FiniteGroup(n1 * n2, cayley, 0, inverses, f"{g1.label}x{g2.label}")


def make_named_group(name: str, *params: int) -> FiniteGroup:
    """Construct a validated group from a family name and integer parameters.

    Supported: ``cyclic(N)``, ``dihedral(2n)`` (parameter is the order),
    ``symmetric(n)``, ``quaternion(8)``, ``direct_product(n1, n2, ...)``
    (direct product of cyclic factors).
    """
    builders = {
        "cyclic": (1, lambda p: _cyclic(p[0])),
        "dihedral": (1, lambda p: _dihedral(p[0])),
        "symmetric": (1, lambda p: _symmetric(p[0])),
        "quaternion": (1, lambda p: _quaternion(p[0])),
    }
    if name in builders:
        arity, build = builders[name]
        if len(params) != arity:
            raise ValueError(f"{name} takes {arity} parameter(s), got {len(params)}")
        return build(params)
    if name == "direct_product":
        if len(params) < 2:
            raise ValueError("direct_product takes at least 2 cyclic orders")
        group = _cyclic(params[0])
        for n in params[1:]:
            group = direct_product(group, _cyclic(n))
        return group
    raise ValueError(f"unknown group name {name!r}")


def group_from_name(token: str) -> FiniteGroup:
    """Parse compact group names: ``Z6``, ``S3``, ``D4``, ``Q8``, ``Z2xZ2xZ2``."""
    parts = token.strip().split("x")
    groups = []
    for part in parts:
        m = re.fullmatch(r"([ZSDQ])(\d+)", part.strip(), flags=re.IGNORECASE)
        if not m:
            raise ValueError(f"cannot parse group name {part!r}")
        kind, n = m.group(1).upper(), int(m.group(2))
        if kind == "Z":
            groups.append(_cyclic(n))
        elif kind == "S":
            groups.append(_symmetric(n))
        elif kind == "D":
            groups.append(_dihedral(2 * n))
        else:
            groups.append(_quaternion(n))
    result = groups[0]
    for g in groups[1:]:
        result = direct_product(result, g)
    return result


def regular_representation(group: FiniteGroup) -> np.ndarray:
    """Left-multiplication permutation matrices, shape (N, N, N), integer 0/1.

    ``L[f]`` sends basis vector ``g`` to ``f*g``: exact integer arithmetic, so
    the homomorphism L(f) @ L(g) == L(f*g) holds with no rounding.
    """
    n = group.order
    rep = np.zeros((n, n, n), dtype=np.int64)
    f_idx = np.repeat(np.arange(n), n)
    g_idx = np.tile(np.arange(n), n)
    rep[f_idx, group.cayley[f_idx, g_idx], g_idx] = 1
    return rep
