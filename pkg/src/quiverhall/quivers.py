"""Quivers, presets, and the Euler form.

Only the linear type-A quivers 1 -> 2 -> ... -> n (n <= 4) are supported as
presets; they are representation-finite and everything downstream leans on
that.  Dimension vectors are plain tuples of ints indexed by vertex order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DimensionMismatch, UnsupportedQuiver


@dataclass(frozen=True)
class Quiver:
    """A finite acyclic quiver.

    Attributes:
        name: preset name ("a1".."a4").
        n: number of vertices; vertices are labelled 1..n.
        arrows: tuple of (source, target) pairs, 1-indexed.
    """

    name: str
    n: int
    arrows: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def check_dim(self, d: tuple[int, ...]) -> tuple[int, ...]:
        if len(d) != self.n:
            raise DimensionMismatch(f"dimension vector {d} has length {len(d)}, quiver {self.name} has {self.n} vertices")
        return tuple(int(x) for x in d)


_PRESETS = {f"a{n}": Quiver(f"a{n}", n, tuple((v, v + 1) for v in range(1, n))) for n in (1, 2, 3, 4)}


def quiver_preset(name: str) -> Quiver:
    """Look up a linear type-A preset by name ("a1".."a4")."""
    try:
        return _PRESETS[name.lower()]
    except KeyError:
        raise UnsupportedQuiver(f"unsupported quiver preset {name!r}; supported: {sorted(_PRESETS)}") from None


def euler_form(q: Quiver, a: tuple[int, ...], b: tuple[int, ...]) -> int:
    """Euler pairing <a,b> = sum_v a_v b_v − sum_{arrows s->t} a_s b_t.

    For modules M, N over the (hereditary) path algebra this equals
    dim Hom(M,N) − dim Ext¹(M,N).
    """
    a = q.check_dim(a)
    b = q.check_dim(b)
    val = sum(x * y for x, y in zip(a, b))
    for s, t in q.arrows:
        val -= a[s - 1] * b[t - 1]
    return val


def dim_add(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def dim_sub(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def dim_neg(a: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(-x for x in a)


def dim_total(a: tuple[int, ...]) -> int:
    return sum(a)


def dim_is_zero(a: tuple[int, ...]) -> bool:
    return all(x == 0 for x in a)


def dim_leq(a: tuple[int, ...], b: tuple[int, ...]) -> bool:
    return all(x <= y for x, y in zip(a, b))
