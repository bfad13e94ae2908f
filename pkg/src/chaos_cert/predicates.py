"""Named boolean predicates of the family parameter, used by threshold solving."""

from __future__ import annotations

from typing import Callable

from .criterion import certify, compute_pi
from .errors import ChaosCertError
from .interval import CertifyConfig, Membership, build_interval, certify_g_class
from .maps import Family, UnimodalMapSpec
from .numeric import RootConfig

MapPredicate = Callable[[UnimodalMapSpec, CertifyConfig, RootConfig], bool]


def _peak_above_diagonal(g, ccfg, rcfg) -> bool:
    m = g.critical_point()
    return g(m) > m


def _interval_self_map(g, ccfg, rcfg) -> bool:
    a, b = build_interval(g)
    return g(a) >= a and g(b) >= a


def _g_class_member(g, ccfg, rcfg) -> bool:
    return certify_g_class(g, ccfg).verdict is Membership.MEMBER


def _pi_singleton(g, ccfg, rcfg) -> bool:
    cert = certify_g_class(g, ccfg)
    return compute_pi(cert, rcfg).is_singleton


def _g2m_below_m(g, ccfg, rcfg) -> bool:
    m = g.critical_point()
    return g.iterate(m, 2) < m


def _odd_cycle(g, ccfg, rcfg) -> bool:
    return certify(g, ccfg, rcfg).odd_cycle


def _turbulence(g, ccfg, rcfg) -> bool:
    return certify(g, ccfg, rcfg).turbulent


PREDICATES: dict[str, MapPredicate] = {
    "peak-above-diagonal": _peak_above_diagonal,
    "interval-self-map": _interval_self_map,
    "g-class-member": _g_class_member,
    "pi-singleton": _pi_singleton,
    "g2m-below-m": _g2m_below_m,
    "odd-cycle": _odd_cycle,
    "turbulence": _turbulence,
}
PREDICATE_IDS = tuple(PREDICATES)


def evaluate_predicate(
    predicate_id: str,
    g: UnimodalMapSpec,
    certify_cfg: CertifyConfig | None = None,
    root_cfg: RootConfig | None = None,
) -> bool:
    """Value of a named predicate; any domain failure counts as False."""
    try:
        fn = PREDICATES[predicate_id]
    except KeyError:
        raise ValueError(
            f"unknown predicate {predicate_id!r}; choose from {', '.join(PREDICATE_IDS)}"
        ) from None
    try:
        return bool(fn(g, certify_cfg or CertifyConfig(), root_cfg or RootConfig()))
    except ChaosCertError:
        return False


def parameter_predicate(
    family,
    predicate_id: str,
    *,
    beta: float | None = None,
    alpha: float = 1.0,
    certify_cfg: CertifyConfig | None = None,
    root_cfg: RootConfig | None = None,
) -> tuple[Callable[[float], bool], str, dict[str, float]]:
    """Curry a named predicate into a function of r (Ricker) or lambda (Hassell)."""
    family = Family(family)
    if predicate_id not in PREDICATES:
        raise ValueError(
            f"unknown predicate {predicate_id!r}; choose from {', '.join(PREDICATE_IDS)}"
        )
    if family is Family.RICKER:
        make = UnimodalMapSpec.ricker
        name, fixed = "r", {}
    else:
        if beta is None:
            raise ValueError("Hassell thresholds need beta")
        def make(lam: float) -> UnimodalMapSpec:
            return UnimodalMapSpec.hassell(lam, beta, alpha)
        name, fixed = "lambda", {"alpha": float(alpha), "beta": float(beta)}

    def pred(p: float) -> bool:
        return evaluate_predicate(predicate_id, make(p), certify_cfg, root_cfg)

    return pred, name, fixed
