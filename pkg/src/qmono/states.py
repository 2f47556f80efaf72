"""Three-qubit state families, interpolation paths and Haar sampling."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .qcore import PureState

_LABELS = ("A", "B", "C")


@dataclass(frozen=True)
class GHZClassParams:
    """Parameters of the two-branch family cos(theta)|000> + e^{ik} sin(theta)|f1 f2 f3>.

    Ranges are theta in (0, pi/4], kappa in [0, 2pi], alpha_j in (0, pi/2];
    the theta = 0 / alpha_j = 0 faces are degenerate (product states) and are
    admitted only with the ``degenerate`` flag, for face scans.
    """

    theta: float
    kappa: float
    alpha1: float
    alpha2: float
    alpha3: float
    degenerate: bool = False

    def __post_init__(self):
        eps = 1e-12
        if not (-eps <= self.theta <= np.pi / 4 + eps):
            raise ValueError(f"theta={self.theta} outside [0, pi/4]")
        if not (-eps <= self.kappa <= 2 * np.pi + eps):
            raise ValueError(f"kappa={self.kappa} outside [0, 2pi]")
        for a in self.alphas:
            if not (-eps <= a <= np.pi / 2 + eps):
                raise ValueError(f"alpha={a} outside [0, pi/2]")
        on_face = self.theta <= eps or any(a <= eps for a in self.alphas)
        if on_face and not self.degenerate:
            raise ValueError(
                "theta = 0 or alpha_j = 0 is a degenerate face; pass degenerate=True"
            )

    @property
    def alphas(self) -> tuple[float, float, float]:
        return (self.alpha1, self.alpha2, self.alpha3)


@dataclass(frozen=True)
class WClassParams:
    """Half-angle parameters of the four-term superposition on {000,001,010,100}."""

    theta1: float
    theta2: float
    theta3: float
    phi1: float
    phi2: float
    phi3: float


def ghz_class(p: GHZClassParams) -> PureState:
    """Two-branch state, normalized (norm^2 = 1 + sin(2 theta) cos(kappa) prod cos(alpha_j))."""
    kets = [np.array([np.cos(a), np.sin(a)]) for a in p.alphas]
    branch = np.kron(np.kron(kets[0], kets[1]), kets[2])
    amps = np.zeros(8, dtype=complex)
    amps[0] = np.cos(p.theta)
    amps = amps + np.exp(1j * p.kappa) * np.sin(p.theta) * branch
    return PureState(amps, (2, 2, 2), _LABELS)


def symmetric_ghz(theta: float, kappa: float, alpha: float, degenerate: bool = True) -> PureState:
    """ghz_class with equal alphas; permutation symmetric by construction."""
    return ghz_class(GHZClassParams(theta, kappa, alpha, alpha, alpha, degenerate=degenerate))


def symmetric_concurrence_closed_form(theta: float, kappa: float, alpha: float) -> float:
    """Concurrence of a two-party marginal of the symmetric two-branch state.

    C = sqrt(l1) - sqrt(l2) with l1 = (a + b) c, l2 = (a - b) c,
    a = 3 + cos(2 alpha), b = 4 cos(alpha) and
    c = sin^4(alpha) sin^2(2 theta) / (8 (1 + cos^3(alpha) cos(kappa) sin(2 theta))^2).

    With this b the two lambdas are 2 (1 +- cos alpha)^2 c, so l2 >= 0 on the
    whole parameter range; the guard below still reports should roundoff ever
    push it negative rather than clamping silently.
    """
    a = 3.0 + np.cos(2.0 * alpha)
    b = 4.0 * np.cos(alpha)
    den = 1.0 + np.cos(alpha) ** 3 * np.cos(kappa) * np.sin(2.0 * theta)
    c = np.sin(alpha) ** 4 * np.sin(2.0 * theta) ** 2 / (8.0 * den * den)
    l1 = (a + b) * c
    l2 = (a - b) * c
    if l2 < -1e-15:
        raise ValueError(f"closed form out of domain: lambda_2 = {l2} < 0")
    return float(np.sqrt(l1) - np.sqrt(max(l2, 0.0)))


def w_class(p: WClassParams) -> PureState:
    """Four-term W-class superposition with the half-angle amplitudes."""
    amps = np.zeros(8, dtype=complex)
    s1, c1 = np.sin(p.theta1 / 2), np.cos(p.theta1 / 2)
    s2, c2 = np.sin(p.theta2 / 2), np.cos(p.theta2 / 2)
    s3, c3 = np.sin(p.theta3 / 2), np.cos(p.theta3 / 2)
    amps[0b000] = c1
    amps[0b001] = s1 * s2 * c3 * np.exp(1j * p.phi1)
    amps[0b010] = s1 * s2 * s3 * np.exp(1j * p.phi2)
    amps[0b100] = s1 * c2 * np.exp(1j * p.phi3)
    return PureState(amps, (2, 2, 2), _LABELS)


def ghz_state() -> PureState:
    amps = np.zeros(8, dtype=complex)
    amps[0b000] = amps[0b111] = 1.0
    return PureState(amps, (2, 2, 2), _LABELS)


def w_state() -> PureState:
    amps = np.zeros(8, dtype=complex)
    amps[0b001] = amps[0b010] = amps[0b100] = 1.0
    return PureState(amps, (2, 2, 2), _LABELS)


# endpoints of the two interpolation paths
PATH_GHZ_ENDPOINT = GHZClassParams(0.7, 3.06, 0.55, 0.56, 0.63)
PATH_W_ENDPOINT = WClassParams(3.25, 4.38, 11.02, 4.16, 3.98, 2.45)


def _superpose(a: PureState, b: PureState, ca: float, cb: float) -> PureState:
    # endpoints are normalized first, then the combination is renormalized
    return PureState(ca * a.amplitudes + cb * b.amplitudes, a.dims, a.labels)


def path_ghz(mu: float) -> PureState:
    """cos(mu) |endpoint> + sin(mu) |GHZ| for mu in [0, pi/2]."""
    if not (0.0 <= mu <= np.pi / 2 + 1e-12):
        raise ValueError(f"mu={mu} outside [0, pi/2]")
    return _superpose(ghz_class(PATH_GHZ_ENDPOINT), ghz_state(), np.cos(mu), np.sin(mu))


def path_w_ghz(tau: float) -> PureState:
    """cos(tau) |W-class endpoint> + sin(tau) |GHZ| for tau in [0, pi/2]."""
    if not (0.0 <= tau <= np.pi / 2 + 1e-12):
        raise ValueError(f"tau={tau} outside [0, pi/2]")
    return _superpose(w_class(PATH_W_ENDPOINT), ghz_state(), np.cos(tau), np.sin(tau))


def haar_random_amplitudes(n: int, seed, dim: int = 8) -> np.ndarray:
    """(n, dim) array of Haar-uniform unit vectors, deterministic per seed."""
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_random(seed, dims=(2, 2, 2)) -> PureState:
    """One Haar-random pure state (independent complex Gaussians, normalized)."""
    dims = tuple(dims)
    amps = haar_random_amplitudes(1, seed, dim=int(np.prod(dims)))[0]
    return PureState(amps, dims)
