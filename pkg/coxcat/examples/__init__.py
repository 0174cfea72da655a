"""Built-in varieties and complexes, addressable by name from the CLI"""

from collections.abc import Callable

from coxcat.core.config import ComplexDocument, InputDocument, TermSpec
from coxcat.core.errors import SchemaError


def projective_space(n: int) -> InputDocument:
    """ℙⁿ with rays e_1, …, e_n, −Σ e_i"""
    rays = [[int(i == j) for j in range(n)] for i in range(n)] + [[-1] * n]
    cones = [[j for j in range(n + 1) if j != i] for i in range(n + 1)]
    return InputDocument(
        mode="fan", name=f"P{n}", rank=n, rays=rays, cones=cones, degrees=[[1]] * (n + 1)
    )


def hirzebruch(a: int) -> InputDocument:
    """ℋ_a with u₀ + u₂ = a·u₁"""
    return InputDocument(
        mode="fan",
        name=f"H{a}",
        rank=2,
        rays=[[1, 0], [0, 1], [-1, a], [0, -1]],
        cones=[[0, 1], [1, 2], [2, 3], [3, 0]],
        degrees=[[1, 0], [-a, 1], [1, 0], [0, 1]],
    )


def weighted_p113() -> InputDocument:
    return InputDocument(mode="cox", name="P113", degrees=[[1], [1], [3]])


def atiyah_flop() -> InputDocument:
    """Total space of O(−1)⊕O(−1) → ℙ¹ and its flop, as Cox data"""
    return InputDocument(mode="cox", name="flop", degrees=[[1], [1], [-1], [-1]])


def p1xp1() -> InputDocument:
    return InputDocument(
        mode="fan",
        name="P1xP1",
        rank=2,
        rays=[[1, 0], [-1, 0], [0, 1], [0, -1]],
        cones=[[0, 2], [0, 3], [1, 2], [1, 3]],
        degrees=[[1, 0], [1, 0], [0, 1], [0, 1]],
    )


def bl2p3() -> InputDocument:
    """ℙ³ blown up at the fixed points of the cones {0,1,2} and {1,2,3}"""
    return InputDocument(
        mode="fan",
        name="Bl2P3",
        rank=3,
        rays=[[-1, -1, -1], [1, 0, 0], [0, 1, 0], [0, 0, 1], [0, 0, -1], [1, 1, 1]],
        cones=[
            [0, 1, 3],
            [0, 2, 3],
            [0, 1, 4],
            [0, 2, 4],
            [1, 2, 4],
            [1, 2, 5],
            [1, 3, 5],
            [2, 3, 5],
        ],
        degrees=[[1, 0, 1], [1, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0], [0, 0, 1]],
    )


def _terms(*pairs: tuple[list[int], int]) -> list[TermSpec]:
    return [TermSpec(twist=twist, multiplicity=m) for twist, m in pairs]


def twisted_cubic() -> ComplexDocument:
    """Resolution of the twisted cubic through the two blown-up points, on Bl₂ℙ³"""
    return ComplexDocument(
        name="twisted-cubic",
        terms={
            0: _terms(([0, 0, 0], 1)),
            -1: _terms(([-2, -1, 0], 1), ([-2, 0, -1], 1), ([-2, -1, -1], 1)),
            -2: _terms(([-3, -1, -1], 2)),
        },
        differentials={
            -1: [["x1*x3 - x2**2*x4", "x0*x2 - x1**2*x5", "x0*x3 - x1*x2*x4*x5"]],
            -2: [["x0", "x1*x5"], ["x2*x4", "x3"], ["-x1", "-x2"]],
        },
    )


def five_points() -> ComplexDocument:
    """Monad of five torus-generic points on ℋ₃"""
    a = [f"x0 - {k}*x2" for k in range(1, 6)]
    b = [f"x3 - {k}*x1*x2**3" for k in range(1, 6)]

    def diagonal(entries: list[str]) -> list[list[str]]:
        return [[entries[i] if i == j else "0" for j in range(5)] for i in range(5)]

    first = [left + right for left, right in zip(diagonal(a), diagonal(b))]
    second = diagonal(b) + diagonal([f"-({x})" for x in a])
    return ComplexDocument(
        name="five-points",
        terms={
            0: _terms(([0, 0], 5)),
            -1: _terms(([-1, 0], 5), ([0, -1], 5)),
            -2: _terms(([-1, -1], 5)),
        },
        differentials={-1: first, -2: second},
    )


def p1_monad() -> ComplexDocument:
    """O(−3) on ℙ¹ as S(−1)³ → S²"""
    return ComplexDocument(
        name="p1-monad",
        terms={0: _terms(([-1], 3)), 1: _terms(([0], 2))},
        differentials={0: [["x0", "x1", "0"], ["0", "x0", "x1"]]},
    )


def koszul_kernel() -> ComplexDocument:
    """Multiplication by x₀y₁ − x₁y₀ on ℙ¹×ℙ¹"""
    return ComplexDocument(
        name="koszul-kernel",
        terms={0: _terms(([0, 0], 1)), -1: _terms(([-1, -1], 1))},
        differentials={-1: [["x0*x3 - x1*x2"]]},
    )


VARIETIES: dict[str, Callable[[], InputDocument]] = {
    **{f"P{n}": (lambda n=n: projective_space(n)) for n in range(1, 5)},
    "H1": lambda: hirzebruch(1),
    "H3": lambda: hirzebruch(3),
    "P113": weighted_p113,
    "flop": atiyah_flop,
    "P1xP1": p1xp1,
    "Bl2P3": bl2p3,
}

# complex name → (variety name, constructor)
COMPLEXES: dict[str, tuple[str, Callable[[], ComplexDocument]]] = {
    "twisted-cubic": ("Bl2P3", twisted_cubic),
    "five-points": ("H3", five_points),
    "p1-monad": ("P1", p1_monad),
    "koszul-kernel": ("P1xP1", koszul_kernel),
}


def variety(name: str) -> InputDocument:
    try:
        return VARIETIES[name]()
    except KeyError as e:
        raise SchemaError(f"unknown example '{name}'; available: {', '.join(sorted(VARIETIES))}") from e


def complex_example(name: str) -> tuple[InputDocument, ComplexDocument]:
    """The complex together with the variety it lives on"""
    try:
        variety_name, build = COMPLEXES[name]
    except KeyError as e:
        raise SchemaError(
            f"unknown complex '{name}'; available: {', '.join(sorted(COMPLEXES))}"
        ) from e
    return variety(variety_name), build()


__all__ = [
    "COMPLEXES",
    "VARIETIES",
    "atiyah_flop",
    "bl2p3",
    "complex_example",
    "five_points",
    "hirzebruch",
    "koszul_kernel",
    "p1_monad",
    "p1xp1",
    "projective_space",
    "twisted_cubic",
    "variety",
    "weighted_p113",
]
