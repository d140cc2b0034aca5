"""Named randomized verification suites.

A suite is a function ``trial(rng, cfg) -> list[InequalityReport]``; the
runner derives one generator per trial from ``seed ^ trial_index`` so the
outcome never depends on scheduling.
"""

import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .calculus import apply_to_triangular, von_neumann_check
from .completion import criterion_from_matrix, parrott_complete, parrott_extract, split_blocks
from .errors import OplabError, UnknownSuiteError
from .inequalities import (
    beardon_minda,
    bm_proof_identity_check,
    coefficient_inequalities,
    peschl,
    peschl_multi,
    peschl_multi_inequality,
    peschl_multi_oracle,
    peschl_oracle,
    polydisk_derivative,
    polydisk_proof_matrices,
    polydisk_schwarz_pick,
    ruscheweyh,
    schwarz_pick_derivative,
    schwarz_pick_two_point,
    yamashita,
)
from .linalg import operator_norm
from .model import gram_matrix, model_matrix, t3_confluent
from .multi import random_multi_polynomial, sample_random_multi
from .report import InequalityReport, to_plain
from .schur import FiniteBlaschke, random_blaschke, random_disk_points
from .sylvester import (
    SylvesterProblem,
    operator_beardon_minda,
    operator_schwarz_pick,
    solve_sylvester,
    solve_sylvester_contour,
    spectral_gap,
)

SEED_MASK = (1 << 64) - 1
NORM_BAND = 1e-8
MIN_POINT_GAP = 1e-3


@dataclass
class SuiteConfig:
    suite: str
    trials: int = 1000
    seed: int = 0
    tolerance: float = 1e-10
    output_path: object = None
    degree_cap: int = 6
    keep_reports: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.degree_cap < 1:
            raise ValueError("degree cap must be >= 1")


@dataclass
class SuiteSummary:
    suite: str
    trials_run: int
    failures: int
    worst_slack: float
    equality_hits: int
    wall_time_ms: float
    config: dict = field(default_factory=dict)
    reports: list = None

    def deterministic(self):
        out = {
            "suite": self.suite,
            "trials_run": self.trials_run,
            "failures": self.failures,
            "worst_slack": self.worst_slack,
            "equality_hits": self.equality_hits,
            "config": self.config,
        }
        if self.reports is not None:
            out["reports"] = self.reports
        return out

    def to_json(self):
        return json.dumps(to_plain({"deterministic": self.deterministic(), "wall_time_ms": self.wall_time_ms}),
                          sort_keys=True, indent=2)


# -- samplers -----------------------------------------------------------------


def random_matrix(rng, rows, cols=None):
    cols = rows if cols is None else cols
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def random_contraction(rng, rows, cols=None, norm=None):
    m = random_matrix(rng, rows, cols)
    target = rng.uniform(0.05, 1.0) if norm is None else norm
    return m * (target / operator_norm(m))


def separated_points(rng, count, radius=0.95):
    while True:
        pts = random_disk_points(rng, count, radius)
        if all(abs(pts[i] - pts[j]) >= MIN_POINT_GAP for i in range(count) for j in range(i + 1, count)):
            return pts


def schur_sample(rng, cfg, low=1):
    return random_blaschke(rng, int(rng.integers(low, cfg.degree_cap + 1)))


def commuting_tuple(rng, n_vars, size):
    """Commuting contractions of the given size from one of three families."""
    kind = int(rng.integers(0, 3))
    if kind == 0:
        # unitarily diagonalizable with eigenvalues in the disk
        q, _ = np.linalg.qr(random_matrix(rng, size))
        return [q @ np.diag(random_disk_points(rng, size, 1.0)) @ q.conj().T for _ in range(n_vars)]
    if kind == 1:
        if size == 2:
            # the two-point matrices [[a, d(a - b)], [0, b]]
            a = random_disk_points(rng, n_vars, 0.95)
            b = random_disk_points(rng, n_vars, 0.95)
            return polydisk_proof_matrices(a, b)[0]
        # confluent matrices, all polynomials in the nilpotent shift
        return [t3_confluent(w) for w in random_disk_points(rng, n_vars, 0.95)]
    # polynomials of a single contraction, contractive by von Neumann
    s = random_contraction(rng, size)
    out = []
    for _ in range(n_vars):
        c = random_matrix(rng, 1, 3)[0]
        p = c / np.sum(np.abs(c))
        out.append(p[0] * np.eye(size) + p[1] * s + p[2] * s @ s)
    return out


# -- trials --------------------------------------------------------------------


def _agree(name, ok, context):
    return InequalityReport(name, 0.0 if ok else 1.0, 0.0, tolerance=0.0, equality_tolerance=-1.0,
                            context=context)


def _bound(name, value, limit, context=None):
    return InequalityReport(name, value, limit, tolerance=0.0, equality_tolerance=-1.0,
                            context=context or {})


def trial_schwarz_pick(rng, cfg):
    f = schur_sample(rng, cfg)
    w = separated_points(rng, 2)
    return [schwarz_pick_two_point(f, *w, tol=cfg.tolerance)]


def trial_schwarz_pick_derivative(rng, cfg):
    f = schur_sample(rng, cfg)
    return [schwarz_pick_derivative(f, random_disk_points(rng, 1)[0], tol=cfg.tolerance)]


def trial_beardon_minda(rng, cfg):
    f = schur_sample(rng, cfg)
    return [beardon_minda(f, *separated_points(rng, 3), tol=max(cfg.tolerance, 1e-9))]


def trial_bm_identity(rng, cfg):
    f = schur_sample(rng, cfg)
    dev = bm_proof_identity_check(f, *separated_points(rng, 3))
    return [_bound("bm-identity", dev, 1e-10)]


def trial_yamashita(rng, cfg):
    f = schur_sample(rng, cfg)
    r = yamashita(f, random_disk_points(rng, 1)[0], tol=max(cfg.tolerance, 1e-9))
    out = [r]
    if "wirtinger_gap" in r.context:
        out.append(_bound("yamashita-wirtinger", r.context["wirtinger_gap"], 1e-3))
    return out


def trial_peschl(rng, cfg):
    f = schur_sample(rng, cfg)
    w = random_disk_points(rng, 1)[0]
    p, q = peschl(f, w), peschl_oracle(f, w)
    err = max(abs(p.d1 - q.d1), abs(p.d2 - q.d2))
    return [
        _bound("peschl-oracle", err, 1e-7),
        InequalityReport("peschl-d1", abs(p.d1), 1.0, tolerance=cfg.tolerance),
    ]


def trial_criterion_3x3(rng, cfg):
    while True:
        t = np.triu(random_matrix(rng, 3))
        u = rng.uniform(0.5, 1.5)
        if abs(u - 1.0) >= NORM_BAND:
            break
    t = t * (u / operator_norm(t))
    norm = operator_norm(t)
    verdict = criterion_from_matrix(t, tol=0.0)
    return [_agree("criterion-3x3", verdict.is_contraction == (norm <= 1.0),
                   {"norm": norm, "branch": verdict.branch})]


def trial_parrott(rng, cfg):
    p, q, n, m = (int(rng.integers(1, 4)) for _ in range(4))
    t = random_contraction(rng, p + q, n + m)
    a, _, c, d = split_blocks(t, p, n)
    w = random_contraction(rng, p, m)
    b = parrott_complete(a, c, d, w)
    full = np.block([[a, b], [c, d]])
    norm = operator_norm(full)
    wit = parrott_extract(full, p, n, tol=1e-9)
    rec = float(np.max(np.abs(wit.reconstructed_B - b)))
    return [
        InequalityReport("parrott-norm", norm, 1.0, tolerance=1e-9),
        _bound("parrott-reconstruction", rec, 1e-9),
        InequalityReport("parrott-minimality", operator_norm(wit.W0), operator_norm(w), tolerance=1e-9),
    ]


def trial_von_neumann(rng, cfg):
    size = int(rng.integers(1, 7))
    t = random_contraction(rng, size)
    f = schur_sample(rng, cfg)
    return [von_neumann_check(f, t, tol=1e-9)]


def tuple_degree(n_vars, cap):
    return min(cap, 2 if n_vars >= 3 else 4)


def trial_von_neumann_tuple(rng, cfg):
    n_vars = int(rng.integers(1, 4))
    size = int(rng.integers(2, 4))
    mats = commuting_tuple(rng, n_vars, size)
    p = random_multi_polynomial(rng, n_vars, int(rng.integers(1, tuple_degree(n_vars, cfg.degree_cap) + 1)))
    r = von_neumann_check(p, mats, tol=1e-9)
    return [r, _bound("torus-inflation", p.inflation - 1.0, 1e-2)]


def trial_sylvester(rng, cfg):
    n, m = int(rng.integers(1, 6)), int(rng.integers(1, 6))
    a = random_contraction(rng, n)
    b = random_contraction(rng, m)
    shift = rng.uniform(2.3, 3.0) * np.exp(2j * np.pi * rng.random())
    if rng.random() < 0.5:
        b = b + shift * np.eye(m)
    else:
        a = a + shift * np.eye(n)
    prob = SylvesterProblem(a, b, random_matrix(rng, n, m))
    x = solve_sylvester(prob)
    xc = solve_sylvester_contour(prob, quad_points=256)
    return [
        _bound("sylvester-residual", prob.residual(x), 1e-10 * max(1.0, float(np.max(np.abs(prob.Y))))),
        _bound("sylvester-contour", float(np.max(np.abs(xc - x))), 1e-6, {"gap": prob.spectral_gap}),
    ]


def _gapped_blocks(rng, sizes, norms):
    while True:
        ws = [random_contraction(rng, s, norm=rng.uniform(0.1, cap)) for s, cap in zip(sizes, norms)]
        if all(spectral_gap(ws[i], ws[j]) >= 1e-3 for i in range(len(ws)) for j in range(i + 1, len(ws))):
            return ws


def trial_operator_schwarz_pick(rng, cfg):
    n1, n2 = int(rng.integers(1, 4)), int(rng.integers(1, 4))
    w1, w2 = _gapped_blocks(rng, (n1, n2), (0.95, 0.95))
    v = random_contraction(rng, n1, n2)
    f = schur_sample(rng, cfg)
    res = operator_schwarz_pick(w1, w2, v, f)
    return [res.report, _bound("operator-schwarz-pick-reconstruction", res.residuals["witness"], 1e-8)]


def trial_operator_beardon_minda(rng, cfg):
    sizes = [int(rng.integers(1, 3)) for _ in range(3)]
    ws = _gapped_blocks(rng, sizes, (0.95, 0.9, 0.95))
    vs = [random_contraction(rng, sizes[0], sizes[1]), random_contraction(rng, sizes[1], sizes[2]),
          random_contraction(rng, sizes[0], sizes[2])]
    f = schur_sample(rng, cfg)
    res = operator_beardon_minda(*ws, *vs, f)
    worst = max(v for k, v in res.residuals.items() if k.startswith("witness")) if res.report.holds else math.inf
    return [res.report, _bound("operator-beardon-minda-reconstruction", worst, 1e-8)]


def _multi_sample(rng, cfg, n_vars):
    return sample_random_multi(rng, n_vars, tuple_degree(n_vars, cfg.degree_cap))


def trial_polydisk(rng, cfg):
    n = int(rng.integers(1, 4))
    f = _multi_sample(rng, cfg, n)
    a, b = random_disk_points(rng, n), random_disk_points(rng, n)
    r = polydisk_schwarz_pick(f, a, b, tol=cfg.tolerance)
    out = [r]
    if "tuple_deviation" in r.context:
        out.append(_bound("polydisk-tuple", r.context["tuple_deviation"], 1e-10))
    return out


def trial_polydisk_derivative(rng, cfg):
    n = int(rng.integers(1, 4))
    f = _multi_sample(rng, cfg, n)
    return [polydisk_derivative(f, random_disk_points(rng, n), tol=cfg.tolerance)]


def trial_peschl_multi(rng, cfg):
    n = int(rng.integers(1, 4))
    f = _multi_sample(rng, cfg, n)
    w = random_disk_points(rng, n, 0.9)
    p, q = peschl_multi(f, w), peschl_multi_oracle(f, w)
    err = max(abs(p.d1 - q.d1), abs(p.d2 - q.d2))
    return [_bound("peschl-multi-oracle", err, 1e-6), peschl_multi_inequality(f, w, tol=1e-8)]


def trial_coefficients(rng, cfg):
    f = schur_sample(rng, cfg)
    a = f.taylor_coefficients(21)
    out = []
    for n in range(1, 10):
        for k in range(1, 11 - n):
            out.extend(coefficient_inequalities(f, n, k, tol=cfg.tolerance, coeffs=a))
    return out


def trial_ruscheweyh(rng, cfg):
    f = schur_sample(rng, cfg)
    z = random_disk_points(rng, 1)[0]
    return [ruscheweyh(f, z, k, tol=cfg.tolerance) for k in (1, 2, 3)]


def trial_model_operator(rng, cfg):
    n = int(rng.integers(1, 9))
    zeros = separated_points(rng, n)
    m = model_matrix(zeros).matrix
    theta = FiniteBlaschke(zeros)
    gram = gram_matrix(zeros)
    return [
        InequalityReport("model-norm", operator_norm(m), 1.0, tolerance=1e-10),
        _bound("model-gram", float(np.max(np.abs(gram - np.eye(n)))), 1e-6),
        _bound("model-annihilation", float(np.max(np.abs(apply_to_triangular(theta, m)))), 1e-8),
    ]


SUITES = {
    "schwarz-pick": trial_schwarz_pick,
    "schwarz-pick-derivative": trial_schwarz_pick_derivative,
    "beardon-minda": trial_beardon_minda,
    "bm-identity": trial_bm_identity,
    "yamashita": trial_yamashita,
    "peschl": trial_peschl,
    "criterion-3x3": trial_criterion_3x3,
    "parrott": trial_parrott,
    "von-neumann": trial_von_neumann,
    "von-neumann-tuple": trial_von_neumann_tuple,
    "sylvester": trial_sylvester,
    "operator-schwarz-pick": trial_operator_schwarz_pick,
    "operator-beardon-minda": trial_operator_beardon_minda,
    "polydisk": trial_polydisk,
    "polydisk-derivative": trial_polydisk_derivative,
    "peschl-multi": trial_peschl_multi,
    "coefficients": trial_coefficients,
    "ruscheweyh": trial_ruscheweyh,
    "model-operator": trial_model_operator,
}


def trial_seed(seed, index):
    return (int(seed) & SEED_MASK) ^ int(index)


def _run_trial(fn, cfg, index):
    rng = np.random.default_rng(trial_seed(cfg.seed, index))
    try:
        reports = fn(rng, cfg)
    except OplabError as exc:
        reports = [InequalityReport("error", 1.0, 0.0, tolerance=0.0, equality_tolerance=-1.0,
                                    context={"error": type(exc).__name__, "message": str(exc)})]
    for r in reports:
        r.context["trial"] = index
    return reports


def thread_count():
    raw = os.environ.get("OPLAB_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, n)


def run_suite(cfg):
    fn = SUITES.get(cfg.suite)
    if fn is None:
        raise UnknownSuiteError(cfg.suite)
    start = time.perf_counter()
    threads = thread_count()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            batches = list(pool.map(lambda i: _run_trial(fn, cfg, i), range(cfg.trials)))
    else:
        batches = [_run_trial(fn, cfg, i) for i in range(cfg.trials)]
    reports = [r for batch in batches for r in batch]
    summary = SuiteSummary(
        suite=cfg.suite,
        trials_run=cfg.trials,
        failures=sum(1 for r in reports if not r.holds),
        worst_slack=min(r.slack for r in reports),
        equality_hits=sum(1 for r in reports if r.equality),
        wall_time_ms=(time.perf_counter() - start) * 1e3,
        config={"trials": cfg.trials, "seed": cfg.seed, "tolerance": cfg.tolerance,
                "degree_cap": cfg.degree_cap},
        reports=[r.to_dict() for r in reports] if cfg.keep_reports else None,
    )
    if cfg.output_path:
        Path(cfg.output_path).write_text(summary.to_json() + "\n")
    return summary


__all__ = ["SUITES", "SuiteConfig", "SuiteSummary", "run_suite", "trial_seed"]
