"""Experiment driver: grid sweeps, zero crossings, sampling, path traces.

Everything here works on batches of three-qubit pure states with nodal
observer A.  The per-state quantities reuse the vectorized measured
conditional-entropy kernel from :mod:`qmono.measures`, so a sweep over 10^5
states stays in large numpy operations.  All randomness is seed-in,
state-out; grid orderings are row-major over the axes as given, and outputs
are bit-identical across runs with the same inputs.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bell import MKSettings, mk_optimize, mk_symmetric_closed_form
from .measures import SIGMA_Y, conditional_entropy_qubit_batch, eof_two_qubit
from .monogamy import ZERO_BAND_DEFAULT, delta_d
from .multient import ggm
from .qcore import PureState, binary_entropy, partial_trace
from .states import haar_random_amplitudes

FAMILY_PARAMS = {
    "ghz-sym": ("theta", "kappa", "alpha"),
    "ghz": ("theta", "kappa", "alpha1", "alpha2", "alpha3"),
    "w": ("theta1", "theta2", "theta3", "phi1", "phi2", "phi3"),
    "path-ghz": ("mu",),
    "path-w-ghz": ("tau",),
}

_PATH_GHZ_END = (0.7, 3.06, 0.55, 0.56, 0.63)
_PATH_W_END = (3.25, 4.38, 11.02, 4.16, 3.98, 2.45)


# --- record types -------------------------------------------------------------


@dataclass(frozen=True)
class ScanRecord:
    family: str
    params: tuple[float, ...]
    delta_d: float
    delta_c: float | None
    ggm: float
    mk: float | None
    sym_residual: float | None
    zero_band: bool


@dataclass(frozen=True)
class ZeroCrossing:
    family: str
    fixed: tuple[tuple[str, float], ...]
    axis: str
    location: float
    bracket: tuple[float, float]
    delta_lo: float
    delta_hi: float

    @property
    def width(self) -> float:
        return self.bracket[1] - self.bracket[0]


@dataclass(frozen=True)
class SurfacePoint:
    theta: float
    kappa: float
    alpha_star: float
    delta_d: float
    ggm: float
    closed_form_residual: float | None
    in_closed_form_domain: bool


@dataclass(frozen=True)
class SampleSummary:
    n: int
    seed: int
    epsilon: float
    band_count: int
    max_ggm_in_band: float | None
    max_ggm_overall: float
    delta_hist: tuple[tuple[float, ...], tuple[int, ...]]
    band_ggm_hist: tuple[tuple[float, ...], tuple[int, ...]]


@dataclass(frozen=True)
class Prop4Result:
    lhs: float
    rhs: float
    satisfied: bool
    equality_residual: float
    delta_d: float
    precondition_met: bool


# --- vectorized per-state scores ----------------------------------------------


def _xlog2x(x):
    out = np.zeros_like(x)
    m = x > 1e-15
    out[m] = x[m] * np.log2(x[m])
    return out


def _eig2_entropy(r00, r01, r11):
    t = (r00 + r11).real
    disc = np.sqrt(np.maximum(((r00 - r11).real / 2) ** 2 + np.abs(r01) ** 2, 0.0))
    e1 = np.clip(t / 2 + disc, 0.0, None)
    e2 = np.clip(t / 2 - disc, 0.0, None)
    return -_xlog2x(e1) - _xlog2x(e2)


def _marginals(amps: np.ndarray):
    p = amps.reshape(-1, 2, 2, 2)
    rho_ab = np.einsum("kabc,kdec->kabde", p, p.conj()).reshape(-1, 4, 4)
    rho_ac = np.einsum("kabc,kdbe->kacde", p, p.conj()).reshape(-1, 4, 4)
    return rho_ab, rho_ac


def _single_site(amps: np.ndarray, site: int) -> np.ndarray:
    p = amps.reshape(-1, 2, 2, 2)
    subs = ("kabc,kdbc->kad", "kabc,kadc->kbd", "kabc,kabd->kcd")
    return np.einsum(subs[site], p, p.conj())


def pure_scores_batch(amps: np.ndarray, **kernel_kw):
    """(delta_D, S_A, S(A|B), S(A|C)) for a (K, 8) batch, nodal A.

    ``kernel_kw`` tunes the conditional-entropy kernel (grid size, zoom
    stages) when a cheaper or finer evaluation is wanted.
    """
    amps = np.asarray(amps, dtype=complex).reshape(-1, 8)
    rho_ab, rho_ac = _marginals(amps)
    ra = _single_site(amps, 0)
    s_a = _eig2_entropy(ra[:, 0, 0], ra[:, 0, 1], ra[:, 1, 1])
    cond_ab = conditional_entropy_qubit_batch(rho_ab, **kernel_kw)
    cond_ac = conditional_entropy_qubit_batch(rho_ac, **kernel_kw)
    return s_a - cond_ab - cond_ac, s_a, cond_ab, cond_ac


def delta_d_batch(amps: np.ndarray, **kernel_kw) -> np.ndarray:
    """Pure-state discord monogamy score, nodal A, vectorized."""
    return pure_scores_batch(amps, **kernel_kw)[0]


def ggm_batch(amps: np.ndarray) -> np.ndarray:
    amps = np.asarray(amps, dtype=complex).reshape(-1, 8)
    lam = None
    for site in range(3):
        r = _single_site(amps, site)
        t = (r[:, 0, 0] + r[:, 1, 1]).real
        disc = np.sqrt(
            np.maximum(((r[:, 0, 0] - r[:, 1, 1]).real / 2) ** 2 + np.abs(r[:, 0, 1]) ** 2, 0.0)
        )
        top = t / 2 + disc
        lam = top if lam is None else np.maximum(lam, top)
    return 1.0 - lam


def concurrence_batch(rhos: np.ndarray) -> np.ndarray:
    """Two-qubit concurrence over a (K, 4, 4) stack (Hermitian sandwich)."""
    rhos = np.asarray(rhos, dtype=complex).reshape(-1, 4, 4)
    w, v = np.linalg.eigh(rhos)
    sq = (v * np.sqrt(np.clip(w, 0.0, None))[:, None, :]) @ np.conj(np.swapaxes(v, 1, 2))
    yy = np.kron(SIGMA_Y, SIGMA_Y)
    m = sq @ (yy @ np.conj(rhos) @ yy) @ sq
    lam = np.sqrt(np.clip(np.linalg.eigvalsh(m), 0.0, None))
    return np.maximum(0.0, lam[:, 3] - lam[:, 2] - lam[:, 1] - lam[:, 0])


def delta_c_batch(amps: np.ndarray) -> np.ndarray:
    """Entanglement monogamy score 4 det(rho_A) - C_AB^2 - C_AC^2, vectorized."""
    amps = np.asarray(amps, dtype=complex).reshape(-1, 8)
    ra = _single_site(amps, 0)
    tangle = 4.0 * np.clip(
        (ra[:, 0, 0] * ra[:, 1, 1]).real - np.abs(ra[:, 0, 1]) ** 2, 0.0, None
    )
    rho_ab, rho_ac = _marginals(amps)
    return tangle - concurrence_batch(rho_ab) ** 2 - concurrence_batch(rho_ac) ** 2


# --- state-family evaluation ----------------------------------------------------


def family_states(family: str, rows: np.ndarray) -> np.ndarray:
    """(K, 8) normalized amplitudes for parameter rows of a named family."""
    if family not in FAMILY_PARAMS:
        raise ValueError(f"unknown family {family!r}")
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    want = len(FAMILY_PARAMS[family])
    if rows.shape[1] != want:
        raise ValueError(f"family {family!r} takes {want} parameters per row")
    k = rows.shape[0]
    if family in ("ghz", "ghz-sym"):
        if family == "ghz-sym":
            theta, kappa = rows[:, 0], rows[:, 1]
            al = rows[:, 2][:, None].repeat(3, axis=1)
        else:
            theta, kappa = rows[:, 0], rows[:, 1]
            al = rows[:, 2:5]
        cos_a, sin_a = np.cos(al), np.sin(al)
        amps = np.empty((k, 8), dtype=complex)
        branch = np.empty((k, 8))
        for idx in range(8):
            bits = ((idx >> 2) & 1, (idx >> 1) & 1, idx & 1)
            cols = [sin_a[:, j] if b else cos_a[:, j] for j, b in enumerate(bits)]
            branch[:, idx] = cols[0] * cols[1] * cols[2]
        amps[:] = (np.exp(1j * kappa) * np.sin(theta))[:, None] * branch
        amps[:, 0] += np.cos(theta)
    elif family == "w":
        t1, t2, t3, p1, p2, p3 = rows.T
        amps = np.zeros((k, 8), dtype=complex)
        amps[:, 0b000] = np.cos(t1 / 2)
        amps[:, 0b001] = np.sin(t1 / 2) * np.sin(t2 / 2) * np.cos(t3 / 2) * np.exp(1j * p1)
        amps[:, 0b010] = np.sin(t1 / 2) * np.sin(t2 / 2) * np.sin(t3 / 2) * np.exp(1j * p2)
        amps[:, 0b100] = np.sin(t1 / 2) * np.cos(t2 / 2) * np.exp(1j * p3)
    elif family in ("path-ghz", "path-w-ghz"):
        if family == "path-ghz":
            end = family_states("ghz", np.array([_PATH_GHZ_END]))[0]
        else:
            end = family_states("w", np.array([_PATH_W_END]))[0]
        ghz = np.zeros(8, dtype=complex)
        ghz[0] = ghz[7] = 1 / np.sqrt(2)
        mu = rows[:, 0]
        amps = np.cos(mu)[:, None] * end[None, :] + np.sin(mu)[:, None] * ghz[None, :]
    else:
        raise ValueError(f"unknown family {family!r}")
    norms = np.linalg.norm(amps, axis=1)
    if np.any(norms < 1e-12):
        bad = rows[norms < 1e-12][0]
        raise ValueError(f"family {family!r} parameters {tuple(bad)} give the zero vector")
    return amps / norms[:, None]


def _family_delta_d(family: str, rows: np.ndarray, chunk: int = 4096) -> np.ndarray:
    rows = np.atleast_2d(rows)
    out = np.empty(rows.shape[0])
    for i in range(0, rows.shape[0], chunk):
        out[i : i + chunk] = delta_d_batch(family_states(family, rows[i : i + chunk]))
    return out


# --- operations -----------------------------------------------------------------


def grid_scan(
    family: str,
    axes,
    epsilon: float = ZERO_BAND_DEFAULT,
    mk_mode: str | None = None,
    mk_restarts: int = 24,
    seed: int = 0,
    chunk: int = 4096,
) -> list[ScanRecord]:
    """One record per grid point, row-major over the axes as listed.

    ``axes`` is a sequence of (name, values) pairs covering the family's
    parameters.  ``mk_mode`` is "closed" (symmetric closed form, nu = 0),
    "optimize", or "skip" (default: "closed" for ghz-sym, else "skip").
    """
    names = [n for n, _ in axes]
    if tuple(names) != FAMILY_PARAMS[family]:
        raise ValueError(
            f"axes {names} must match {FAMILY_PARAMS[family]} for family {family!r}"
        )
    values = [np.asarray(v, dtype=float).ravel() for _, v in axes]
    if any(v.size == 0 for v in values):
        raise ValueError("empty axis range")
    mesh = np.meshgrid(*values, indexing="ij")
    rows = np.stack([m.ravel() for m in mesh], axis=1)
    if mk_mode is None:
        mk_mode = "closed" if family == "ghz-sym" else "skip"
    if mk_mode == "closed" and family != "ghz-sym":
        raise ValueError("closed-form MK is defined for the ghz-sym family only")

    records: list[ScanRecord] = []
    warm: MKSettings | None = None
    for i in range(0, rows.shape[0], chunk):
        part = rows[i : i + chunk]
        amps = family_states(family, part)
        dd, s_a, cond_ab, _ = pure_scores_batch(amps)
        gg = ggm_batch(amps)
        dc = delta_c_batch(amps)
        sym = 0.5 * s_a - cond_ab if family == "ghz-sym" else None
        if mk_mode == "closed":
            mk = mk_symmetric_closed_form_vec(part[:, 0], part[:, 2], part[:, 1])
        for j in range(part.shape[0]):
            if mk_mode == "closed":
                mk_j = float(mk[j])
            elif mk_mode == "optimize":
                mk_j, warm = mk_optimize(amps[j], restarts=mk_restarts, seed=seed, initial=warm)
            else:
                mk_j = None
            records.append(
                ScanRecord(
                    family=family,
                    params=tuple(float(x) for x in part[j]),
                    delta_d=float(dd[j]),
                    delta_c=float(dc[j]),
                    ggm=float(gg[j]),
                    mk=mk_j,
                    sym_residual=None if sym is None else float(sym[j]),
                    zero_band=bool(abs(dd[j]) < epsilon),
                )
            )
    return records


def mk_symmetric_closed_form_vec(theta, alpha, kappa, nu: float = 0.0) -> np.ndarray:
    theta, alpha, kappa = (np.asarray(x, dtype=float) for x in (theta, alpha, kappa))
    return (
        4.0
        * np.sin(alpha) ** 3
        * np.sin(theta)
        * (
            np.cos(nu) * (np.cos(theta) * np.cos(kappa) + np.cos(alpha) ** 3 * np.sin(theta))
            + np.cos(theta) * np.sin(nu) * np.sin(kappa)
        )
    )


def _lockstep_bisect(eval_rows, lo, hi, f_lo, f_hi, xtol: float, max_rounds: int = 64):
    """Vectorized bisection on per-item brackets; f must change sign inside."""
    lo, hi = lo.copy(), hi.copy()
    f_lo, f_hi = f_lo.copy(), f_hi.copy()
    rounds = 0
    while np.max(hi - lo) > xtol and rounds < max_rounds:
        mid = (lo + hi) / 2
        f_mid = eval_rows(mid)
        left = f_lo * f_mid <= 0
        hi = np.where(left, mid, hi)
        f_hi = np.where(left, f_mid, f_hi)
        lo = np.where(left, lo, mid)
        f_lo = np.where(left, f_lo, f_mid)
        rounds += 1
    return lo, hi, f_lo, f_hi


NOISE_FLOOR_DEFAULT = 1e-7  # batch evaluator noise sits near 1e-8


def find_zero_crossings(
    family: str,
    fixed: dict[str, float],
    axis: str,
    lo: float,
    hi: float,
    presample: int = 400,
    xtol: float = 1e-6,
    noise_floor: float = NOISE_FLOOR_DEFAULT,
) -> list[ZeroCrossing]:
    """Sign changes of delta_D along one axis, refined by bisection.

    The presample brackets every strict sign change whose endpoints both
    clear ``noise_floor``; this keeps evaluator noise around the degenerate
    faces (where delta_D is genuinely zero) from minting crossings, and it
    excludes face contacts from the interior count.  An empty list means no
    crossing was found, which is not an error.
    """
    names = FAMILY_PARAMS[family]
    if axis not in names:
        raise ValueError(f"axis {axis!r} not a parameter of {family!r}")
    missing = set(names) - {axis} - set(fixed)
    if missing:
        raise ValueError(f"missing fixed parameters {sorted(missing)}")
    axis_idx = names.index(axis)

    def rows_for(xs):
        rows = np.empty((xs.size, len(names)))
        for j, n in enumerate(names):
            rows[:, j] = xs if n == axis else fixed[n]
        return rows

    def eval_axis(xs):
        return _family_delta_d(family, rows_for(np.asarray(xs)))

    xs = np.linspace(lo, hi, presample)
    vals = eval_axis(xs)
    sign_change = (
        (vals[:-1] * vals[1:] < 0)
        & (np.abs(vals[:-1]) > noise_floor)
        & (np.abs(vals[1:]) > noise_floor)
    )
    idx = np.nonzero(sign_change)[0]
    if idx.size == 0:
        return []
    b_lo, b_hi, f_lo, f_hi = _lockstep_bisect(
        eval_axis, xs[idx], xs[idx + 1], vals[idx], vals[idx + 1], xtol
    )
    fixed_t = tuple((n, float(fixed[n])) for n in names if n != axis)
    return [
        ZeroCrossing(
            family=family,
            fixed=fixed_t,
            axis=axis,
            location=float((b_lo[i] + b_hi[i]) / 2),
            bracket=(float(b_lo[i]), float(b_hi[i])),
            delta_lo=float(f_lo[i]),
            delta_hi=float(f_hi[i]),
        )
        for i in range(idx.size)
    ]


def surface_zero(
    thetas,
    kappas,
    alpha_lo: float = 1e-3,
    alpha_hi: float = np.pi / 2,
    presample: int = 64,
    xtol: float = 1e-6,
    noise_floor: float = NOISE_FLOOR_DEFAULT,
) -> list[SurfacePoint]:
    """Interior delta_D = 0 point along alpha for each (theta, kappa).

    Also evaluates the closed-form surface condition 2 H(h) = H(e1) at each
    found point, where h comes from the closed-form marginal concurrence and
    e1 from the single-site spectrum; the residual is recorded per point.
    """
    thetas = np.asarray(thetas, dtype=float).ravel()
    kappas = np.asarray(kappas, dtype=float).ravel()
    tt, kk = np.meshgrid(thetas, kappas, indexing="ij")
    tt, kk = tt.ravel(), kk.ravel()

    def eval_alpha(alphas):
        rows = np.stack([tt, kk, alphas], axis=1)
        return _family_delta_d("ghz-sym", rows)

    grid = np.linspace(alpha_lo, alpha_hi, presample)
    vals = np.stack([eval_alpha(np.full(tt.shape, a)) for a in grid], axis=1)
    sign_change = (
        (vals[:, :-1] * vals[:, 1:] < 0)
        & (np.abs(vals[:, :-1]) > noise_floor)
        & (np.abs(vals[:, 1:]) > noise_floor)
    )
    has = sign_change.any(axis=1)
    first = np.argmax(sign_change, axis=1)

    out: list[SurfacePoint] = []
    if not has.any():
        return out
    sel = np.nonzero(has)[0]
    lo = grid[first[sel]]
    hi = grid[first[sel] + 1]
    f_lo = vals[sel, first[sel]]
    f_hi = vals[sel, first[sel] + 1]
    tt_s, kk_s = tt[sel], kk[sel]

    def eval_sel(alphas):
        rows = np.stack([tt_s, kk_s, alphas], axis=1)
        return _family_delta_d("ghz-sym", rows)

    b_lo, b_hi, _, _ = _lockstep_bisect(eval_sel, lo, hi, f_lo, f_hi, xtol)
    astar = (b_lo + b_hi) / 2
    dd = eval_sel(astar)
    amps = family_states("ghz-sym", np.stack([tt_s, kk_s, astar], axis=1))
    gg = ggm_batch(amps)
    ra = _single_site(amps, 0)
    e1 = _eig2_entropy(ra[:, 0, 0], ra[:, 0, 1], ra[:, 1, 1])  # = H(e_1)

    for i in range(sel.size):
        a = 3.0 + np.cos(2.0 * astar[i])
        b = 4.0 * np.cos(astar[i])
        den = 1.0 + np.cos(astar[i]) ** 3 * np.cos(kk_s[i]) * np.sin(2.0 * tt_s[i])
        cc = np.sin(astar[i]) ** 4 * np.sin(2.0 * tt_s[i]) ** 2 / (8.0 * den * den)
        l2 = (a - b) * cc
        in_domain = l2 >= -1e-15
        residual = None
        if in_domain:
            conc = np.sqrt((a + b) * cc) - np.sqrt(max(l2, 0.0))
            h = (1.0 + np.sqrt(max(0.0, 1.0 - conc * conc))) / 2.0
            residual = float(abs(2.0 * binary_entropy(h) - e1[i]))
        out.append(
            SurfacePoint(
                theta=float(tt_s[i]),
                kappa=float(kk_s[i]),
                alpha_star=float(astar[i]),
                delta_d=float(dd[i]),
                ggm=float(gg[i]),
                closed_form_residual=residual,
                in_closed_form_domain=bool(in_domain),
            )
        )
    return out


def sample_experiment(
    n: int,
    seed: int,
    epsilon: float = 1e-3,
    chunk: int = 4096,
    jobs: int = 1,
    per_sample_path=None,
) -> SampleSummary:
    """Haar-sample delta_D and GGM; band statistics with |delta_D| < epsilon."""
    if n < 1:
        raise ValueError("need n >= 1")
    amps = haar_random_amplitudes(n, seed)
    dd = np.empty(n)
    gg = np.empty(n)

    def work(i):
        sl = slice(i, min(i + chunk, n))
        dd[sl] = delta_d_batch(amps[sl])
        gg[sl] = ggm_batch(amps[sl])

    starts = range(0, n, chunk)
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            list(pool.map(work, starts))
    else:
        for i in starts:
            work(i)

    band = np.abs(dd) < epsilon
    d_counts, d_edges = np.histogram(dd, bins=60)
    if band.any():
        g_counts, g_edges = np.histogram(gg[band], bins=25, range=(0.0, 0.5))
        max_in_band = float(gg[band].max())
    else:
        g_counts, g_edges = np.histogram([], bins=25, range=(0.0, 0.5))
        max_in_band = None

    if per_sample_path is not None:
        with open(per_sample_path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["family", "p1", "delta_D", "delta_C", "ggm", "mk", "zero_band"])
            dc = np.empty(n)
            for i in starts:
                sl = slice(i, min(i + chunk, n))
                dc[sl] = delta_c_batch(amps[sl])
            for i in range(n):
                w.writerow(
                    [
                        "haar",
                        i,
                        f"{dd[i]:.9g}",
                        f"{dc[i]:.9g}",
                        f"{gg[i]:.9g}",
                        "",
                        "true" if band[i] else "false",
                    ]
                )

    return SampleSummary(
        n=n,
        seed=seed,
        epsilon=epsilon,
        band_count=int(band.sum()),
        max_ggm_in_band=max_in_band,
        max_ggm_overall=float(gg.max()),
        delta_hist=(tuple(map(float, d_edges)), tuple(map(int, d_counts))),
        band_ggm_hist=(tuple(map(float, g_edges)), tuple(map(int, g_counts))),
    )


def path_trace(
    path_id: str,
    resolution: int,
    epsilon: float = ZERO_BAND_DEFAULT,
    mk_mode: str = "optimize",
    mk_restarts: int = 24,
    seed: int = 0,
) -> list[ScanRecord]:
    """Evenly spaced trace of one interpolation path, with optional MK search.

    MK values come from the settings optimizer (warm-started point to point),
    so any fixed-settings curve lies at or below the one traced here.
    """
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    family = {"ghz": "path-ghz", "w-ghz": "path-w-ghz"}.get(path_id, path_id)
    if family not in ("path-ghz", "path-w-ghz"):
        raise ValueError(f"unknown path {path_id!r}")
    xs = np.linspace(0.0, np.pi / 2, resolution)
    rows = xs[:, None]
    amps = family_states(family, rows)
    dd = delta_d_batch(amps)
    gg = ggm_batch(amps)
    dc = delta_c_batch(amps)
    records = []
    warm: MKSettings | None = None
    for i in range(resolution):
        if mk_mode == "optimize":
            mk_val, warm = mk_optimize(amps[i], restarts=mk_restarts, seed=seed, initial=warm)
        elif mk_mode == "skip":
            mk_val = None
        else:
            raise ValueError("mk_mode must be 'optimize' or 'skip' for paths")
        records.append(
            ScanRecord(
                family=family,
                params=(float(xs[i]),),
                delta_d=float(dd[i]),
                delta_c=float(dc[i]),
                ggm=float(gg[i]),
                mk=mk_val,
                sym_residual=None,
                zero_band=bool(abs(dd[i]) < epsilon),
            )
        )
    return records


def prop4_check(psi: PureState, nodal: str = "A", band: float = ZERO_BAND_DEFAULT, **opt) -> Prop4Result:
    """E^f(AB) + E^f(AC) >= H(GGM) with equality for symmetric states.

    Scoped to vanishing-score states: ``precondition_met`` records whether
    |delta_D| < band; outside the band the inequality is reported but carries
    no claim.
    """
    others = tuple(l for l in psi.labels if l != nodal)
    rho = psi.density()
    lhs = eof_two_qubit(partial_trace(rho, (nodal, others[0]))) + eof_two_qubit(
        partial_trace(rho, (nodal, others[1]))
    )
    rhs = binary_entropy(ggm(psi))
    dd = delta_d(psi, nodal, **opt).delta_D
    return Prop4Result(
        lhs=float(lhs),
        rhs=float(rhs),
        satisfied=bool(lhs >= rhs - 1e-6),
        equality_residual=float(abs(lhs - rhs)),
        delta_d=float(dd),
        precondition_met=bool(abs(dd) < band),
    )


# --- CSV ------------------------------------------------------------------------


def write_csv(records, path) -> None:
    """Rows ``family,p1..pk,delta_D,delta_C,ggm,mk,zero_band`` with 9-digit floats."""
    records = list(records)
    if not records:
        raise ValueError("no records to write")
    k = len(records[0].params)

    def fmt(v):
        return "" if v is None else f"{v:.9g}"

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(
            ["family"] + [f"p{i + 1}" for i in range(k)] + ["delta_D", "delta_C", "ggm", "mk", "zero_band"]
        )
        for r in records:
            w.writerow(
                [r.family]
                + [fmt(p) for p in r.params]
                + [fmt(r.delta_d), fmt(r.delta_c), fmt(r.ggm), fmt(r.mk),
                   "true" if r.zero_band else "false"]
            )
