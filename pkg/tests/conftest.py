import random

import pytest

from spircds.constructions import CANONICAL_NAMES, canonical_scheme
from spircds.scheme import (
    AffineAnswerSpec,
    MessageSpec,
    QueryStrategy,
    Scheme,
    parse_affine,
)


def drop_randomness(s: Scheme, index: int, name: str = "drop_S") -> Scheme:
    """Delete randomness symbol ``index`` (1-based) together with its coefficients."""

    def cut(specs):
        return tuple(
            AffineAnswerSpec(sp.w, sp.r[: index - 1] + sp.r[index:], sp.c) for sp in specs
        )

    return Scheme(
        s.msg,
        s.rho - 1,
        s.strategy,
        {l: cut(v) for l, v in s.answers_x.items()},
        {l: cut(v) for l, v in s.answers_y.items()},
        name,
    )


def replace_answer(s: Scheme, side: int, label: str, exprs, name: str = "replaced") -> Scheme:
    new = tuple(parse_affine(e, s.msg, s.rho) for e in exprs)
    ax, ay = dict(s.answers_x), dict(s.answers_y)
    (ax if side == 1 else ay)[label] = new
    return Scheme(s.msg, s.rho, s.strategy, ax, ay, name)


def restrict_pairs(s: Scheme, k: int, pairs, name: str = "restricted") -> Scheme:
    st = s.strategy
    new = list(st.pairs)
    new[k - 1] = tuple(pairs)
    return Scheme(
        s.msg, s.rho, QueryStrategy(st.space_x, st.space_y, tuple(new)), s.answers_x, s.answers_y, name
    )


def mutant_no_s2() -> Scheme:
    return drop_randomness(canonical_scheme("k3_u2log3"), 2, "k3_u2log3_no_S2")


def mutant_b1() -> Scheme:
    return replace_answer(canonical_scheme("k3_u2log3"), 2, "B1", ["W1+S2"], "k3_u2log3_B1")


def mutant_single_pair() -> Scheme:
    return restrict_pairs(canonical_scheme("k3_u2log3"), 1, [("A0", "B0")], "k3_u2log3_one_pair")


def random_affine_scheme(rng: random.Random, name: str) -> Scheme:
    """Uniformly random coefficients on a modular strategy; q=2, L=1."""
    K = rng.choice([2, 3])
    rho = rng.randint(0, 2)
    msg = MessageSpec(K, 1, 2)
    space_x = tuple(f"A{i}" for i in range(K))
    space_y = tuple(f"B{i}" for i in range(K))
    pairs = tuple(
        tuple((f"A{x}", f"B{(k - x) % K}") for x in range(K)) for k in range(K)
    )
    lx, ly = rng.randint(1, 2), rng.randint(1, 2)

    def spec():
        return AffineAnswerSpec(
            tuple(rng.randint(0, 1) for _ in range(K)),
            tuple(rng.randint(0, 1) for _ in range(rho)),
            rng.randint(0, 1),
        )

    return Scheme(
        msg,
        rho,
        QueryStrategy(space_x, space_y, pairs),
        {l: tuple(spec() for _ in range(lx)) for l in space_x},
        {l: tuple(spec() for _ in range(ly)) for l in space_y},
        name,
    )


def perturbed_canonical(rng: random.Random, name: str) -> Scheme:
    """A canonical scheme with K <= 3 and rho <= 2, with 0-2 coefficient bits flipped."""
    s = canonical_scheme(rng.choice(["k2_u2", "k3_u2log3", "k3_u4"]))
    ax = {l: list(v) for l, v in s.answers_x.items()}
    ay = {l: list(v) for l, v in s.answers_y.items()}
    for _ in range(rng.randint(0, 2)):
        side = rng.choice([ax, ay])
        label = rng.choice(sorted(side))
        i = rng.randrange(len(side[label]))
        sp = side[label][i]
        coeffs = list(sp.w + sp.r)
        j = rng.randrange(len(coeffs))
        coeffs[j] ^= 1
        side[label][i] = AffineAnswerSpec(
            tuple(coeffs[: s.K]), tuple(coeffs[s.K:]), sp.c
        )
    return Scheme(
        s.msg,
        s.rho,
        s.strategy,
        {l: tuple(v) for l, v in ax.items()},
        {l: tuple(v) for l, v in ay.items()},
        name,
    )


def random_schemes(n: int = 20, seed: int = 2022) -> list[Scheme]:
    rng = random.Random(seed)
    out = []
    for i in range(n):
        make = random_affine_scheme if i % 2 == 0 else perturbed_canonical
        out.append(make(rng, f"random{i}"))
    return out


@pytest.fixture(params=CANONICAL_NAMES)
def canonical(request) -> Scheme:
    return canonical_scheme(request.param)
