"""Small named instances used by the acceptance suite, the tests and the CLI demos."""

from __future__ import annotations

from .automorphism import compose, identity_rule, symbol_permutation, tau
from .conveyor import ToyBelt
from .egg import EggCollection, build_linear_eggs
from .groups import DirectProduct, Integers, ball, cyclic_group
from .pattern import Pattern
from .subshift import LanguageOracle, SubshiftSpec, full_shift, golden_mean, sft

Z = Integers()


def full_shift_eggs(n_symbols: int = 2) -> EggCollection:
    """Eggs on ``Y={0}``, ``W=B(2)`` in ``{0..n-1}^Z`` with the first lexicographic marker as white."""
    oracle = LanguageOracle(full_shift(Z, tuple(range(n_symbols))))
    return build_linear_eggs(oracle, [0], ball(Z, 2))


def golden_mean_eggs() -> tuple[LanguageOracle, EggCollection]:
    """Golden-mean eggs on ``Y={0}``, ``W=B(3)``: white ``1 0 0 · 0 1 0``, yolks 0 and 1.

    The white is 0 around the yolk, so both yolks are admissible and the
    ``{-1,0,1}`` splice collar lies inside ``W``.
    """
    oracle = LanguageOracle(golden_mean(K=ball(Z, 1), M=ball(Z, 1)))
    white = Pattern.from_values(Z, [-3, -2, -1, 1, 2, 3], [1, 0, 0, 0, 1, 0])
    return oracle, build_linear_eggs(oracle, [0], ball(Z, 3), white=white)


def row_constant() -> SubshiftSpec:
    """Configurations on ``Z × C2`` constant along each column; ``{0} × C2`` fixes all of them."""
    G = DirectProduct(Z, cyclic_group(2))
    forbidden = [Pattern(G, {(0, 0): a, (0, 1): 1 - a}) for a in (0, 1)]
    return sft(G, (0, 1), forbidden, fix=((0, 0), (0, 1)), name="row-constant")


def toy_belt() -> ToyBelt:
    """Pointers ``±1`` on the integers, binary tracks, one non-belt symbol (17 symbols)."""
    return ToyBelt(Z, (1, -1), (0, 1), extra=1)


def track_rules() -> dict:
    """``id``, ``flip``, ``σ`` (read the left neighbour) and ``flip∘σ`` on ``{0,1}^Z``."""
    A = (0, 1)
    flip = symbol_permutation(Z, A, [1, 0], name="flip")
    sigma = tau(Z, A, -1)
    sigma.name = "sigma"
    fs = compose(flip, sigma)
    fs.name = "flip.sigma"
    return {"id": identity_rule(Z, A), "flip": flip, "sigma": sigma, "flip.sigma": fs}
