"""The identity-verification catalog.

Each catalog entry computes both sides of one identity by independent routes
(never by rearranging one formula into the other) and renders the comparison
as a CheckReport.  Gap rule: relative gap when both sides exceed 0.1 in
magnitude, absolute gap otherwise; two infinite sides compare equal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import ct_models as ct
from .errors import IntegralDivergenceError
from .priors import DiscretePrior, JointPrior, entropy, kl_divergence, transform
from .quadrature import integrate, integrate_semi_infinite
from .scalar_channel import (
    DEFAULT_POLICY,
    mle,
    mmle,
    mutual_information,
    output_kl,
    output_pmf,
    pair_merge_kl,
    vec_mle,
    vec_output_kl,
)
from .pp_sim import PiecewiseSignalModel, mc_estimate

__all__ = [
    "CheckReport",
    "run_check",
    "full_suite",
    "check_ids",
    "check_description",
    "figure2_curves",
    "figure3_curves",
    "UNTESTABLE_NOTES",
]

_ZERO_ATOM_NOTE = "zero-location atoms: outside the strictly-positive-support assumption"

UNTESTABLE_NOTES = [
    "high-SNR regime with infinite input divergence and vanishing mismatched loss: "
    "no in-scope (finite-support) model satisfies the required regularity, so the "
    "sublinear-growth case is recorded as untestable rather than checked",
]


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one identity check."""

    check_id: str
    description: str
    inputs: dict
    sides: dict
    abs_gap: float
    rel_gap: float
    tolerance: float
    passed: bool
    hypothesis_note: Optional[str] = None


class _Worst:
    """Track the worst pointwise comparison for a report."""

    def __init__(self):
        self.abs_gap = 0.0
        self.rel_gap = 0.0
        self.gap = 0.0
        self.sides: dict = {}
        self.passed = True

    def compare(self, lhs: float, rhs: float, tol: float, label: str, extra: dict | None = None):
        abs_gap, rel_gap, gap = _gaps(lhs, rhs)
        ok = gap <= tol
        if not ok:
            self.passed = False
        if gap >= self.gap or not self.sides:
            self.gap = gap
            self.abs_gap = abs_gap
            self.rel_gap = rel_gap
            self.sides = {"point": label, "lhs": lhs, "rhs": rhs}
            if extra:
                self.sides.update(extra)

    def bound(self, violation: float, tol: float, label: str, extra: dict | None = None):
        """One-sided check: violation (already clipped at 0) must be <= tol."""
        self.compare(violation, 0.0, tol, label, extra)


def _gaps(lhs: float, rhs: float) -> tuple[float, float, float]:
    if math.isinf(lhs) and math.isinf(rhs):
        return 0.0, 0.0, 0.0
    if math.isinf(lhs) or math.isinf(rhs):
        return math.inf, math.inf, math.inf
    abs_gap = abs(lhs - rhs)
    scale = max(abs(lhs), abs(rhs))
    rel_gap = abs_gap / scale if scale > 0.0 else 0.0
    gap = rel_gap if min(abs(lhs), abs(rhs)) > 0.1 else abs_gap
    return abs_gap, rel_gap, gap


def _as_prior(value) -> DiscretePrior:
    if isinstance(value, DiscretePrior):
        return value
    if isinstance(value, dict) and "atoms" in value:
        return DiscretePrior((a["x"], a["w"]) for a in value["atoms"])
    raise ValueError(f"cannot interpret {value!r} as a scalar prior")


def _as_joint(value) -> JointPrior:
    if isinstance(value, JointPrior):
        return value
    if isinstance(value, dict) and "atoms" in value:
        return JointPrior((a["values"], a["w"]) for a in value["atoms"])
    raise ValueError(f"cannot interpret {value!r} as a joint prior")


def _as_model(value) -> PiecewiseSignalModel:
    if isinstance(value, PiecewiseSignalModel):
        return value
    if isinstance(value, dict) and "breakpoints" in value:
        return PiecewiseSignalModel(value["breakpoints"], _as_joint(value))
    raise ValueError(f"cannot interpret {value!r} as a piecewise signal model")


def _serialize(value):
    if isinstance(value, DiscretePrior):
        return {"atoms": [{"x": x, "w": w} for x, w in value.atoms]}
    if isinstance(value, JointPrior):
        return {"atoms": [{"values": v, "w": w} for v, w in value.atoms]}
    if isinstance(value, PiecewiseSignalModel):
        return {
            "breakpoints": value.breakpoints.tolist(),
            "atoms": [{"values": v, "w": w} for v, w in value.prior.atoms],
        }
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_serialize(v) for v in value]
    if isinstance(value, dict):
        return {k: _serialize(v) for k, v in value.items()}
    return value


def _scale_hint(*priors: DiscretePrior) -> float:
    """Doubling start heuristic: 4 over the smallest gap between support points."""
    pts = sorted({float(x) for p in priors for x in p.xs})
    if len(pts) < 2:
        return 8.0
    gap = min(b - a for a, b in zip(pts, pts[1:]))
    return 4.0 / gap


def _default_pairs() -> list[dict]:
    return [
        {
            "p": DiscretePrior.uniform([1.0, 2.0]),
            "q": DiscretePrior.from_weights([1.0, 2.0], [0.25, 0.75]),
            "note": None,
        },
        {
            "p": DiscretePrior.from_weights([0.0, 1.0], [0.5, 0.5]),
            "q": DiscretePrior.from_weights([0.0, 1.0], [0.8, 0.2]),
            "note": _ZERO_ATOM_NOTE,
        },
    ]


def _pair_note(pairs: list[dict]) -> Optional[str]:
    notes = [p["note"] for p in pairs if p.get("note")]
    return "; ".join(dict.fromkeys(notes)) if notes else None


def _swap_models() -> tuple[PiecewiseSignalModel, JointPrior]:
    """Two-interval swap model: truth swaps levels across the intervals, the
    belief keeps them constant."""
    truth = JointPrior([((1.0, 2.0), 0.5), ((2.0, 1.0), 0.5)])
    belief = JointPrior([((1.0, 1.0), 0.5), ((2.0, 2.0), 0.5)])
    return PiecewiseSignalModel([0.0, 1.0, 2.0], truth), belief


# -- individual checks --------------------------------------------------------


def _check_t42(params) -> CheckReport:
    """lhs: series output divergence.  rhs: quadrature of the excess mean loss."""
    pairs = params["pairs"]
    gammas = params["gammas"]
    tol = params["tol"]
    worst = _Worst()
    for i, pair in enumerate(pairs):
        p, q = _as_prior(pair["p"]), _as_prior(pair["q"])
        for g in gammas:
            lhs = output_kl(p, q, g)
            rhs = integrate(
                lambda a: mle(p, q, a) - mle(p, p, a), 0.0, g, tol=min(tol * 0.01, 1e-9)
            ).value
            worst.compare(lhs, rhs, tol, f"pair{i} gamma={g}")
    return _report("T42", params, worst, hypothesis_note=_pair_note(pairs))


def _check_t41(params) -> CheckReport:
    """lhs: atomwise input divergence.  rhs: semi-infinite integral of excess loss."""
    pairs = params["pairs"]
    tol = params["tol"]
    worst = _Worst()
    for i, pair in enumerate(pairs):
        p, q = _as_prior(pair["p"]), _as_prior(pair["q"])
        lhs = kl_divergence(p, q)
        try:
            rhs = integrate_semi_infinite(
                lambda g: mle(p, q, g) - mle(p, p, g),
                0.0,
                tol=params["integral_tol"],
                scale_hint=_scale_hint(p, q),
            ).value
        except IntegralDivergenceError:
            rhs = math.inf
        worst.compare(lhs, rhs, tol, f"pair{i}")
    return _report("T41", params, worst, hypothesis_note=_pair_note(pairs))


def _check_bound(params) -> CheckReport:
    """Output divergence stays below input divergence at every SNR."""
    pairs = params["pairs"]
    worst = _Worst()
    for i, pair in enumerate(pairs):
        p, q = _as_prior(pair["p"]), _as_prior(pair["q"])
        cap = kl_divergence(p, q)
        if math.isinf(cap):
            continue
        for g in params["gammas"]:
            d = output_kl(p, q, g)
            worst.bound(max(0.0, d - cap), params["tol"], f"pair{i} gamma={g}",
                        {"output_kl": d, "kl": cap})
    return _report("BOUND", params, worst, hypothesis_note=_pair_note(pairs))


def _check_immle(params) -> CheckReport:
    """Mutual information vs the minimum mean loss: integral and derivative forms."""
    worst = _Worst()
    note = []
    for prior_spec in params["priors"]:
        p = _as_prior(prior_spec["p"])
        if prior_spec.get("note"):
            note.append(prior_spec["note"])
        for g in params["integral_gammas"]:
            lhs = mutual_information(p, g)
            rhs = integrate(lambda a: mmle(p, a), 0.0, g, tol=1e-9).value
            worst.compare(lhs, rhs, params["integral_tol"], f"integral gamma={g}")
        for g in params["derivative_gammas"]:
            h = max(1e-4, 1e-3 * g)
            deriv = (mutual_information(p, g + h) - mutual_information(p, g - h)) / (2.0 * h)
            target = mmle(p, g)
            rel = abs(deriv - target) / max(abs(target), 1e-12)
            worst.bound(
                max(0.0, rel - params["derivative_rel_tol"]),
                0.0,
                f"derivative gamma={g}",
                {"finite_difference": deriv, "mmle": target},
            )
    hypothesis_note = "; ".join(dict.fromkeys(note)) if note else None
    return _report("IMMLE", params, worst, hypothesis_note=hypothesis_note)


def _check_conc(params) -> CheckReport:
    """Second divided differences of mutual information stay non-positive."""
    worst = _Worst()
    note = []
    for prior_spec in params["priors"]:
        p = _as_prior(prior_spec["p"])
        if prior_spec.get("note"):
            note.append(prior_spec["note"])
        gs = np.asarray(params["gammas"], dtype=float)
        h = gs[1] - gs[0]
        info = np.array([mutual_information(p, g) for g in gs])
        d2 = (info[2:] - 2.0 * info[1:-1] + info[:-2]) / (h * h)
        worst.bound(max(0.0, float(d2.max())), params["tol"], "grid",
                    {"max_second_divided_difference": float(d2.max())})
    hypothesis_note = "; ".join(dict.fromkeys(note)) if note else None
    return _report("CONC", params, worst, hypothesis_note=hypothesis_note)


def _check_hent(params) -> CheckReport:
    """Entropy as the integrated minimum mean loss, for two distinct relabelings,
    plus the pointwise form for a single atom."""
    p = _as_prior(params["p"])
    tol = params["tol"]
    target = entropy(p)
    worst = _Worst()
    maps: list[tuple[str, Callable[[float], float]]] = [
        ("identity", lambda x: x),
        ("square", lambda x: x * x),
    ]
    for name, g in maps:
        pg = transform(p, g)
        val = integrate_semi_infinite(
            lambda a: mmle(pg, a),
            0.0,
            tol=params["integral_tol"],
            scale_hint=_scale_hint(pg),
        ).value
        worst.compare(val, target, tol, f"map={name}", {"entropy": target})
    # pointwise: the integrated conditional loss at one atom recovers log(1/w)
    x0, w0 = p.atoms[0]
    pg = transform(p, lambda x: x)
    point = integrate_semi_infinite(
        lambda a: mle(DiscretePrior.delta(x0), pg, a),
        0.0,
        tol=params["integral_tol"],
        scale_hint=_scale_hint(pg),
    ).value
    worst.compare(point, math.log(1.0 / w0), tol, f"pointwise atom x={x0}")
    return _report("HENT", params, worst)


def _entropy_of_output(p: DiscretePrior, gamma: float) -> float:
    """-sum_y P(y) log P(y) via repeated single-point pmf evaluation."""
    gx = gamma * float(p.xs.max())
    stop = int(math.ceil(gx + 10.0 * math.sqrt(gx))) + 30
    total = 0.0
    mass = 0.0
    for y in range(stop + 1):
        prob = output_pmf(p, gamma, y)
        if prob > 0.0:
            total -= prob * math.log(prob)
            mass += prob
    if mass < 1.0 - 1e-9:
        raise RuntimeError(f"output entropy grid too short (mass {mass})")
    return total


def _check_condh(params) -> CheckReport:
    """Closed-form conditional output entropy against I = H(Y) - H(Y|X)."""
    from .scalar_channel import cond_output_entropy

    worst = _Worst()
    note = []
    for prior_spec in params["priors"]:
        p = _as_prior(prior_spec["p"])
        if prior_spec.get("note"):
            note.append(prior_spec["note"])
        for g in params["gammas"]:
            lhs = mutual_information(p, g)
            rhs = _entropy_of_output(p, g) - cond_output_entropy(p, g)
            worst.compare(lhs, rhs, params["tol"], f"gamma={g}")
    hypothesis_note = "; ".join(dict.fromkeys(note)) if note else None
    return _report("CONDH", params, worst, hypothesis_note=hypothesis_note)


def _check_t55(params) -> CheckReport:
    """Three-way DC identity: SNR-scaled causal loss, averaged non-causal loss,
    and information plus output divergence, all by separate routes."""
    p = _as_prior(params["p"])
    q = _as_prior(params["q"])
    mp = ct.DcModel(p)
    mq = ct.DcModel(q)
    worst = _Worst()
    for g in params["gammas"]:
        s_causal = g * ct.ct_cmle(mp, mq, g)
        s_avg = integrate(lambda a: ct.ct_mle(mp, mq, a), 0.0, g, tol=1e-9).value
        s_info = mutual_information(p, g) + output_kl(p, q, g)
        worst.compare(s_causal, s_avg, params["tol"], f"causal-vs-average gamma={g}")
        worst.compare(s_causal, s_info, params["tol"], f"causal-vs-info gamma={g}")
        worst.compare(s_avg, s_info, params["tol"], f"average-vs-info gamma={g}")
        matched = g * ct.ct_cmle(mp, mp, g)
        info = mutual_information(p, g)
        worst.compare(matched, info, params["matched_tol"], f"matched gamma={g}")
    note = _ZERO_ATOM_NOTE if not p.strictly_positive or not q.strictly_positive else None
    return _report("T55", params, worst, hypothesis_note=note)


def _check_f2(params) -> CheckReport:
    """Low-SNR ratio of non-causal to causal loss drops, approaching 2."""
    p, q = params["p"], params["q"]
    base = ct.binary_dc_g(p, q, 0.0)
    ratios = {}
    for g in sorted(params["gammas"], reverse=True):
        num = base - ct.binary_dc_g(p, q, g)
        den = base - ct.binary_dc_cmle_closed(p, q, g)
        ratios[g] = num / den
    g_min = min(params["gammas"])
    worst = _Worst()
    worst.compare(ratios[g_min], 2.0, params["tol"], f"gamma={g_min}",
                  {"ratios": {str(g): r for g, r in ratios.items()}})
    return _report("F2", params, worst, hypothesis_note=_ZERO_ATOM_NOTE)


def _check_sign(params) -> CheckReport:
    """Sign of (non-causal minus causal) loss against the causal loss's slope."""
    worst = _Worst()
    mismatches = 0
    checked = 0
    for g in params["gammas"]:
        diff = ct.halfdc_f(g) - ct.halfdc_cmle_closed(g)
        h = max(1e-4, 1e-3 * g)
        up = integrate(ct.halfdc_f, 0.0, g + h, tol=1e-12).value / (g + h)
        dn = integrate(ct.halfdc_f, 0.0, g - h, tol=1e-12).value / (g - h)
        slope = (up - dn) / (2.0 * h)
        checked += 1
        if _sign(diff) != _sign(slope):
            mismatches += 1
    worst.bound(float(mismatches), 0.0, f"{checked} grid points",
                {"mismatches": mismatches})
    return _report("SIGN", params, worst, hypothesis_note=_ZERO_ATOM_NOTE)


def _sign(x: float, dead_band: float = 1e-12) -> int:
    if x > dead_band:
        return 1
    if x < -dead_band:
        return -1
    return 0


def _check_rev(params) -> CheckReport:
    """Anti-causal vs causal mismatched loss by two independent Monte Carlo runs."""
    model = _as_model(params["model"])
    belief = _as_joint(params["belief"])
    g = params["gamma"]
    reps = params["replicates"]
    causal = mc_estimate(model, belief, g, "cmle", reps, params["seed_causal"])
    anti = mc_estimate(model, belief, g, "acmle", reps, params["seed_anticausal"])
    joint_se = math.hypot(causal.std_error, anti.std_error)
    tol = 3.0 * joint_se
    worst = _Worst()
    worst.bound(abs(anti.value - causal.value), tol, f"gamma={g}", {
        "anticausal": anti.value,
        "causal": causal.value,
        "anticausal_std_error": anti.std_error,
        "causal_std_error": causal.std_error,
    })
    return _report("REV", params, worst, tolerance=tol)


def _check_merge(params) -> CheckReport:
    """Pairwise enumeration vs the merged-count channel."""
    worst = _Worst()
    for i, pair in enumerate(params["pairs"]):
        p, q = _as_prior(pair["p"]), _as_prior(pair["q"])
        pair_kl, sum_kl = pair_merge_kl(p, q, params["gamma"])
        worst.compare(pair_kl, sum_kl, params["tol"], f"pair{i}")
        expected = pair.get("expected")
        if expected is not None:
            worst.compare(pair_kl, expected, params["tol"], f"pair{i} expected")
    return _report("MERGE", params, worst)


def _check_vec(params) -> CheckReport:
    """Vector-channel divergence vs integrated excess vector loss at n = 2."""
    p = _as_joint(params["p"])
    q = _as_joint(params["q"])
    g = params["gamma"]
    lhs = vec_output_kl(p, q, g)
    rhs = integrate(lambda a: vec_mle(p, q, a) - vec_mle(p, p, a), 0.0, g, tol=1e-8).value
    worst = _Worst()
    worst.compare(lhs, rhs, params["tol"], f"gamma={g}")
    return _report("VEC", params, worst)


def _check_semi(params) -> CheckReport:
    """Deterministic signal: information term vanishes and the divergence equals
    SNR times the causal loss."""
    g = params["gamma"]
    truth = DiscretePrior.delta(0.5)
    belief = DiscretePrior.uniform([0.0, 1.0])
    worst = _Worst()
    info = mutual_information(truth, g)
    worst.compare(info, 0.0, 1e-12, "information term")
    lhs = output_kl(truth, belief, g)
    rhs = g * ct.halfdc_cmle_closed(g)
    worst.compare(lhs, rhs, params["tol"], f"divergence gamma={g}")
    note = (
        f"{_ZERO_ATOM_NOTE}; the smoothing loss saturates at a finite limit while "
        "the output divergence grows linearly, so only the divergence is unbounded"
    )
    return _report("SEMI", params, worst, hypothesis_note=note)


def _check_mono(params) -> CheckReport:
    """Minimum mean loss non-increasing, output divergence non-decreasing."""
    worst = _Worst()
    gs = params["gammas"]
    for i, pair in enumerate(params["pairs"]):
        p, q = _as_prior(pair["p"]), _as_prior(pair["q"])
        m = [mmle(p, g) for g in gs]
        rises = max(m[j + 1] - m[j] for j in range(len(m) - 1))
        worst.bound(max(0.0, rises), params["tol"], f"pair{i} mmle",
                    {"max_rise": rises})
        d = [output_kl(p, q, g) for g in gs]
        drops = max(d[j] - d[j + 1] for j in range(len(d) - 1))
        worst.bound(max(0.0, drops), params["tol"], f"pair{i} output_kl",
                    {"max_drop": drops})
    return _report("MONO", params, worst, hypothesis_note=_pair_note(params["pairs"]))


def figure2_curves(p: float, q: float, gmax: float, points: int) -> dict[str, list[float]]:
    """Binary DC curve family: matched/mismatched, causal/non-causal."""
    gs = np.linspace(0.0, gmax, points)
    return {
        "gamma": gs.tolist(),
        "mle_PP": [ct.binary_dc_g(p, p, g) for g in gs],
        "cmle_PP": [ct.binary_dc_cmle_closed(p, p, g) for g in gs],
        "mle_PQ": [ct.binary_dc_g(p, q, g) for g in gs],
        "cmle_PQ": [ct.binary_dc_cmle_closed(p, q, g) for g in gs],
    }


def figure3_curves(gmax: float, points: int) -> dict[str, list[float]]:
    """Deterministic-amplitude example: mismatched non-causal and causal curves."""
    gs = np.linspace(0.0, gmax, points)
    return {
        "gamma": gs.tolist(),
        "mle_PQ": [ct.halfdc_f(g) for g in gs],
        "cmle_PQ": [ct.halfdc_cmle_closed(g) for g in gs],
    }


def _check_fig2(params) -> CheckReport:
    """Curve-family ordering: mismatched above matched, matched causal above
    matched non-causal (the minimum mean loss decreases in SNR)."""
    curves = figure2_curves(params["p"], params["q"], params["gmax"], params["points"])
    a = np.array(curves["mle_PP"])
    b = np.array(curves["cmle_PP"])
    c = np.array(curves["mle_PQ"])
    d = np.array(curves["cmle_PQ"])
    worst = _Worst()
    worst.bound(max(0.0, float((a - c).max())), params["tol"], "mismatched non-causal above matched")
    worst.bound(max(0.0, float((b - d).max())), params["tol"], "mismatched causal above matched")
    worst.bound(max(0.0, float((a - b).max())), params["tol"], "matched causal above matched non-causal")
    return _report("FIG2", params, worst, hypothesis_note=_ZERO_ATOM_NOTE)


def _check_fig3(params) -> CheckReport:
    """Non-causal curve sits above the causal one wherever the causal curve
    rises (they must cross at the causal peak: a falling causal loss forces
    the reverse ordering), and the output divergence grows throughout."""
    curves = figure3_curves(params["gmax"], params["points"])
    a = np.array(curves["mle_PQ"])
    b = np.array(curves["cmle_PQ"])
    gs = np.array(curves["gamma"])
    peak = int(np.argmax(b))
    worst = _Worst()
    worst.bound(max(0.0, float((b - a)[:peak].max()) if peak else 0.0), params["tol"],
                "non-causal above causal up to the causal peak",
                {"causal_peak_gamma": float(gs[peak])})
    worst.bound(max(0.0, float((a - b)[peak + 1 :].max()) if peak + 1 < gs.size else 0.0),
                params["tol"], "causal above non-causal past the causal peak")
    divergence = gs * b
    worst.bound(max(0.0, -float(np.diff(divergence).min())), params["tol"],
                "output divergence non-decreasing")
    return _report("FIG3", params, worst, hypothesis_note=_ZERO_ATOM_NOTE)


def _report(check_id, params, worst: _Worst, hypothesis_note=None, tolerance=None) -> CheckReport:
    tol = tolerance if tolerance is not None else params.get("tol", 0.0)
    return CheckReport(
        check_id=check_id,
        description=check_description(check_id),
        inputs=_serialize(params),
        sides=_serialize(worst.sides),
        abs_gap=worst.abs_gap,
        rel_gap=worst.rel_gap,
        tolerance=tol,
        passed=worst.passed,
        hypothesis_note=hypothesis_note,
    )


# -- catalog ------------------------------------------------------------------


def _defaults() -> dict[str, tuple[Callable[[dict], CheckReport], dict, str]]:
    pairs = _default_pairs()
    priors = [
        {"p": pairs[0]["p"], "note": None},
        {"p": pairs[1]["p"], "note": _ZERO_ATOM_NOTE},
    ]
    swap_model, swap_belief = _swap_models()
    merge_pairs = [
        {"p": DiscretePrior.delta(1.0), "q": DiscretePrior.delta(2.0), "expected": 2.0 - 2.0 * math.log(2.0)},
        {"p": pairs[0]["p"], "q": pairs[0]["p"]},
        {"p": pairs[0]["p"], "q": pairs[0]["q"]},
    ]
    return {
        "T42": (
            _check_t42,
            {"pairs": pairs, "gammas": [0.5, 1.0, 2.0, 4.0, 8.0], "tol": 1e-6},
            "output divergence equals the integrated excess estimation loss (scalar)",
        ),
        "T41": (
            _check_t41,
            {
                "pairs": pairs
                + [
                    {
                        "p": DiscretePrior.delta(0.5),
                        "q": DiscretePrior.uniform([0.0, 1.0]),
                        "note": "disjoint supports: both sides must be infinite",
                    }
                ],
                "tol": 0.01,
                "integral_tol": 5e-4,
            },
            "total excess estimation loss integrates to the input divergence",
        ),
        "BOUND": (
            _check_bound,
            {"pairs": pairs, "gammas": [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0], "tol": 1e-9},
            "output divergence never exceeds the input divergence",
        ),
        "IMMLE": (
            _check_immle,
            {
                "priors": priors,
                "integral_gammas": [1.0, 4.0],
                "derivative_gammas": [0.5, 2.0],
                "integral_tol": 1e-6,
                "derivative_rel_tol": 1e-3,
                "tol": 1e-6,
            },
            "SNR derivative of mutual information equals the minimum mean loss",
        ),
        "CONC": (
            _check_conc,
            {"priors": priors, "gammas": np.linspace(0.0, 6.0, 25).tolist(), "tol": 1e-8},
            "mutual information is concave in the SNR",
        ),
        "HENT": (
            _check_hent,
            {
                "p": pairs[0]["p"],
                "tol": 0.01,
                "integral_tol": 5e-4,
            },
            "entropy equals the integrated minimum mean loss, for any one-to-one relabeling",
        ),
        "CONDH": (
            _check_condh,
            {"priors": priors, "gammas": [0.5, 2.0], "tol": 1e-6},
            "conditional output entropy is consistent with I = H(Y) - H(Y|X)",
        ),
        "T55": (
            _check_t55,
            {
                "p": pairs[1]["p"],
                "q": pairs[1]["q"],
                "gammas": [1.0, 2.0, 5.0],
                "tol": 1e-5,
                "matched_tol": 1e-6,
            },
            "causal loss equals the SNR-averaged non-causal loss, bridged by information plus divergence",
        ),
        "F2": (
            _check_f2,
            {"p": 0.5, "q": 0.2, "gammas": [0.2, 0.1, 0.05, 0.025], "tol": 0.05},
            "non-causal loss leaves its zero-SNR limit twice as fast as the causal loss",
        ),
        "SIGN": (
            _check_sign,
            {"gammas": np.linspace(0.25, 8.0, 16).tolist(), "tol": 0.0},
            "non-causal loss exceeds causal loss exactly where the causal loss increases",
        ),
        "REV": (
            _check_rev,
            {
                "model": swap_model,
                "belief": swap_belief,
                "gamma": 2.0,
                "replicates": 100_000,
                "seed_causal": 20240501,
                "seed_anticausal": 20240502,
            },
            "anti-causal and causal mismatched losses agree (time reversal)",
        ),
        "MERGE": (
            _check_merge,
            {"pairs": merge_pairs, "gamma": 1.0, "tol": 1e-9},
            "two independent looks carry exactly the divergence of their summed count",
        ),
        "VEC": (
            _check_vec,
            {
                "p": JointPrior([((1.0, 2.0), 0.5), ((2.0, 1.0), 0.5)]),
                "q": JointPrior([((1.0, 1.0), 0.5), ((2.0, 2.0), 0.5)]),
                "gamma": 2.0,
                "tol": 1e-5,
            },
            "vector-channel divergence equals the integrated excess loss (dimension 2)",
        ),
        "SEMI": (
            _check_semi,
            {"gamma": 2.0, "tol": 1e-6},
            "deterministic signal: zero information; divergence equals SNR times causal loss",
        ),
        "MONO": (
            _check_mono,
            {"pairs": pairs, "gammas": np.linspace(0.0, 8.0, 17).tolist(), "tol": 1e-10},
            "minimum mean loss is non-increasing and output divergence non-decreasing in SNR",
        ),
        "FIG2": (
            _check_fig2,
            {"p": 0.5, "q": 0.2, "gmax": 12.0, "points": 61, "tol": 1e-9},
            "binary DC curve family: mismatched above matched, causal above non-causal when matched",
        ),
        "FIG3": (
            _check_fig3,
            {"gmax": 20.0, "points": 61, "tol": 1e-9},
            "deterministic-amplitude example: non-causal curve above the causal curve",
        ),
    }


_CATALOG = None


def _catalog():
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _defaults()
    return _CATALOG


def check_ids() -> list[str]:
    return list(_catalog().keys())


def check_description(check_id: str) -> str:
    entry = _catalog().get(check_id)
    if entry is None:
        raise ValueError(f"unknown check id {check_id!r}")
    return entry[2]


def run_check(check_id: str, params: Optional[dict] = None) -> CheckReport:
    """Run one catalog check, overriding its default parameters with `params`."""
    entry = _catalog().get(check_id)
    if entry is None:
        raise ValueError(f"unknown check id {check_id!r} (known: {', '.join(check_ids())})")
    fn, defaults, _ = entry
    merged = dict(defaults)
    if params:
        merged.update(params)
    return fn(merged)


def full_suite(config: Optional[dict] = None) -> tuple[list[CheckReport], dict]:
    """Run the configured checks (default: the whole catalog, in order).

    Returns (reports, summary); summary carries pass counts and standing notes
    about identities that have no testable in-scope instance.
    """
    if config is None:
        entries = [{"id": cid} for cid in check_ids()]
    else:
        entries = config.get("checks", [])
        for e in entries:
            if "id" not in e:
                raise ValueError("each check entry needs an 'id'")
    reports = [run_check(e["id"], e.get("params")) for e in entries]
    passed = sum(r.passed for r in reports)
    summary = {
        "passed": passed,
        "total": len(reports),
        "all_passed": passed == len(reports),
        "notes": list(UNTESTABLE_NOTES),
    }
    return reports, summary
