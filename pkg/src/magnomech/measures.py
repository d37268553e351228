"""Gaussian correlation measures evaluated on steady-state covariances.

All operations take covariance matrices in the (X, Y)-per-mode ordering
with vacuum variance 1/2.  Bipartite entanglement is the logarithmic
negativity from the partially transposed two-mode covariance, steering
is the Renyi-2 measure, and tripartite entanglement the minimum residual
contangle built from squared one-versus-rest logarithmic negativities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PhysicalityError
from .model import MODE_INDEX, MODE_ORDER
from .params import SystemParams

#: Rounding noise below this magnitude is reported as an exact zero.
ZERO_CLIP = 1e-10

#: The six mode pairs with no direct coupling in the model, in canonical
#: mode order; these are the pairs whose correlations the device is
#: designed to create.
INDIRECT_PAIRS = (
    ("b1", "c"),
    ("b1", "a"),
    ("b2", "m"),
    ("b2", "a"),
    ("m", "c"),
    ("c", "a"),
)

ALL_PAIRS = tuple(
    (MODE_ORDER[i], MODE_ORDER[j])
    for i in range(len(MODE_ORDER))
    for j in range(i + 1, len(MODE_ORDER))
)

#: Mode triples reported by default: the optical mode with the microwave
#: or magnon mode plus one mechanical mode.
DEFAULT_TRIPLES = (
    ("b1", "m", "c"),
    ("b2", "c", "a"),
    ("b2", "m", "c"),
    ("b1", "c", "a"),
)


def _mode_indices(modes) -> list[int]:
    out = []
    for mode in modes:
        idx = MODE_INDEX[mode] if isinstance(mode, str) else int(mode)
        if not 0 <= idx < len(MODE_ORDER):
            raise DomainError(f"mode index {mode!r} out of range")
        if idx in out:
            raise DomainError(f"duplicate mode {mode!r} in reduction")
        out.append(idx)
    return out


def reduce_modes(cov: np.ndarray, modes) -> np.ndarray:
    """Covariance of a subset of modes, in the requested order.

    ``modes`` is a sequence of mode names or indices; the result is the
    2k x 2k submatrix of their (X, Y) rows and columns.
    """
    indices = _mode_indices(modes)
    rows = [q for i in indices for q in (2 * i, 2 * i + 1)]
    return cov[np.ix_(rows, rows)]


def _snap_zero(value: float) -> float:
    # magnitudes at the solver noise floor are indistinguishable from an
    # exact zero; snapping them keeps "> 0" meaningful downstream (a
    # marginal product state must not read as steerable or entangled)
    if -ZERO_CLIP < value < ZERO_CLIP:
        return 0.0
    return value


def log_negativity(cov4: np.ndarray) -> float:
    """Logarithmic negativity of a two-mode covariance matrix.

    Computes the smaller symplectic eigenvalue of the partially
    transposed state from the block determinants,
    ``eta = sqrt((sigma - sqrt(sigma^2 - 4 det V))/2)`` with
    ``sigma = det V_1 + det V_2 - 2 det V_12``, and returns
    ``max(0, -ln(2 eta))``.
    """
    cov4 = np.asarray(cov4, dtype=float)
    if cov4.shape != (4, 4):
        raise DomainError("log_negativity needs a 4x4 covariance matrix")
    det_1 = float(np.linalg.det(cov4[:2, :2]))
    det_2 = float(np.linalg.det(cov4[2:, 2:]))
    det_12 = float(np.linalg.det(cov4[:2, 2:]))
    det_all = float(np.linalg.det(cov4))
    sigma = det_1 + det_2 - 2.0 * det_12
    disc = sigma * sigma - 4.0 * det_all
    if disc < 0.0:
        # the discriminant vanishes identically for balanced states;
        # only violations beyond rounding scale are physicality errors
        scale = sigma * sigma + 4.0 * abs(det_all)
        if disc < -ZERO_CLIP * scale:
            raise PhysicalityError(
                "partially transposed symplectic spectrum is complex "
                f"(sigma^2 - 4 det V = {disc:.3e} < 0)"
            )
        disc = 0.0
    inner = (sigma - math.sqrt(disc)) / 2.0
    if inner <= 0.0:
        raise PhysicalityError(
            f"squared symplectic eigenvalue is nonpositive ({inner:.3e})"
        )
    return _snap_zero(max(0.0, -math.log(2.0 * math.sqrt(inner))))


def gaussian_steering(cov4: np.ndarray, steering_mode: int = 0) -> float:
    """Renyi-2 Gaussian steering of a two-mode state, in one direction.

    ``steering_mode`` selects which of the two modes (0 = first block,
    1 = second) acts as the steering party; the measure is
    ``max(0, ln det(2 V_s)/2 - ln det(2 V)/2)`` and is directional by
    construction.
    """
    cov4 = np.asarray(cov4, dtype=float)
    if cov4.shape != (4, 4):
        raise DomainError("gaussian_steering needs a 4x4 covariance matrix")
    if steering_mode not in (0, 1):
        raise DomainError("steering_mode must be 0 or 1")
    block = cov4[:2, :2] if steering_mode == 0 else cov4[2:, 2:]
    det_s = float(np.linalg.det(block))
    det_all = float(np.linalg.det(cov4))
    if det_s <= 0.0 or det_all <= 0.0:
        raise PhysicalityError("covariance determinant is nonpositive")
    return _snap_zero(max(0.0, 0.5 * math.log(det_s / (4.0 * det_all))))


def _min_symplectic(cov: np.ndarray) -> float:
    n = cov.shape[0] // 2
    omega = np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))
    return float(np.abs(np.linalg.eigvals(omega @ cov)).min())


def _partial_transpose(cov: np.ndarray, mode: int) -> np.ndarray:
    flip = np.ones(cov.shape[0])
    flip[2 * mode + 1] = -1.0
    return cov * np.outer(flip, flip)


def _one_vs_rest_contangle(cov: np.ndarray, mode: int) -> float:
    """Squared logarithmic negativity of one mode against the rest.

    Applies the momentum sign flip of the singled-out mode (the phase
    space partial transpose), takes the minimum-modulus eigenvalue of
    Omega times the reflected covariance as the symplectic eigenvalue,
    and squares ``max(0, -ln(2 nu))``.
    """
    nu = _min_symplectic(_partial_transpose(cov, mode))
    if nu <= 0.0:
        raise PhysicalityError("partially transposed covariance is singular")
    e = max(0.0, -math.log(2.0 * nu))
    return e * e


def residual_contangle(cov6: np.ndarray) -> float:
    """Minimum residual contangle of a three-mode covariance matrix.

    For each of the three one-versus-two bipartitions, the residual is
    the one-versus-rest contangle minus the two one-versus-one contangles
    of the singled-out mode (computed from the reduced 4x4 states by the
    same partial-transpose recipe); the minimum over bipartitions is
    returned.  Positive values witness genuine tripartite entanglement.
    """
    cov6 = np.asarray(cov6, dtype=float)
    if cov6.shape != (6, 6):
        raise DomainError("residual_contangle needs a 6x6 covariance matrix")
    residuals = []
    for i in range(3):
        others = [j for j in range(3) if j != i]
        c_one_rest = _one_vs_rest_contangle(cov6, i)
        c_pairs = 0.0
        for j in others:
            pair = cov6[np.ix_([2 * i, 2 * i + 1, 2 * j, 2 * j + 1],
                               [2 * i, 2 * i + 1, 2 * j, 2 * j + 1])]
            c_pairs += _one_vs_rest_contangle(pair, 0)
        residuals.append(c_one_rest - c_pairs)
    return min(residuals)


def contrast_ratio(value_plus: float, value_minus: float) -> float:
    """Bidirectional contrast |v+ - v-| / (v+ + v-), with 0/0 -> 0.

    Quantifies how nonreciprocal a nonnegative measure is between the
    two rotation directions; 1 means the measure survives in only one
    of them.
    """
    if value_plus < 0.0 or value_minus < 0.0:
        raise DomainError("contrast_ratio requires nonnegative inputs")
    total = value_plus + value_minus
    if total == 0.0:
        return 0.0
    return abs(value_plus - value_minus) / total


def effective_phonon_number(cov: np.ndarray, mode) -> float:
    """Effective occupation (V_xx + V_yy - 1)/2 of one mode.

    Small negative rounding noise is clipped to zero; a genuinely
    negative value means the reduced state is below vacuum, which the
    thermal reading of this number cannot represent.
    """
    (idx,) = _mode_indices([mode])
    value = (cov[2 * idx, 2 * idx] + cov[2 * idx + 1, 2 * idx + 1] - 1.0) / 2.0
    if value < -1e-8:
        raise PhysicalityError(
            f"effective occupation of mode {MODE_ORDER[idx]} is {value:.3e} < 0"
        )
    return max(0.0, value)


def tmsv_covariance(r: float) -> np.ndarray:
    """Covariance of a two-mode squeezed vacuum with squeezing ``r``.

    The canonical analytic family used as a measure oracle: its
    logarithmic negativity is ``2 r`` and its steering is
    ``ln cosh(2 r)`` in both directions.
    """
    ch, sh = math.cosh(2.0 * r), math.sinh(2.0 * r)
    z = np.diag([1.0, -1.0])
    eye = np.eye(2)
    return 0.5 * np.block([[ch * eye, sh * z], [sh * z, ch * eye]])


def _pair_key(a: str, b: str) -> tuple[str, str]:
    return tuple(sorted((a, b), key=MODE_INDEX.__getitem__))


def _triple_key(modes) -> tuple[str, str, str]:
    return tuple(sorted(modes, key=MODE_INDEX.__getitem__))


@dataclass
class MeasureReport:
    """All correlation measures evaluated at one parameter point.

    ``pairwise_E`` maps unordered mode pairs (canonical order) to the
    logarithmic negativity; ``steering`` maps ordered pairs (steering
    party first); ``tripartite_R`` maps canonical mode triples to the
    minimum residual contangle; ``phonon_occ`` maps mode names to the
    effective occupation (None where the reduced state is below vacuum
    and the occupation is undefined).  ``stable`` is False when the
    point failed the stability gate, in which case every map is empty
    and ``reason`` carries a machine-readable code.
    """

    stable: bool
    margin: float
    params: SystemParams
    pairwise_E: dict = field(default_factory=dict)
    steering: dict = field(default_factory=dict)
    tripartite_R: dict = field(default_factory=dict)
    phonon_occ: dict = field(default_factory=dict)
    reason: str | None = None
    physical: bool | None = None
    min_symplectic: float | None = None

    def entanglement(self, mode_a: str, mode_b: str) -> float:
        return self.pairwise_E[_pair_key(mode_a, mode_b)]

    def steering_value(self, steering_party: str, steered: str) -> float:
        return self.steering[(steering_party, steered)]

    def contangle(self, modes) -> float:
        return self.tripartite_R[_triple_key(modes)]

    def to_record(self) -> dict:
        """Flatten to one record with stable, order-independent field names."""
        record: dict = {"stable": self.stable, "reason": self.reason or ""}
        record["stability_margin"] = self.margin
        record["physical"] = self.physical
        record["min_symplectic"] = self.min_symplectic
        for pair in ALL_PAIRS:
            record[f"E_{pair[0]}{pair[1]}"] = self.pairwise_E.get(pair)
        for a, b in INDIRECT_PAIRS:
            record[f"S_{a}_to_{b}"] = self.steering.get((a, b))
            record[f"S_{b}_to_{a}"] = self.steering.get((b, a))
        for triple in DEFAULT_TRIPLES:
            key = _triple_key(triple)
            record[f"R_{key[0]}{key[1]}{key[2]}"] = self.tripartite_R.get(key)
        for mode in ("b1", "b2"):
            record[f"n_eff_{mode}"] = self.phonon_occ.get(mode)
        return record


def evaluate_measures(
    cov: np.ndarray,
    params: SystemParams,
    margin: float,
    measures: tuple[str, ...] = ("entanglement", "steering", "contangle", "occupation"),
) -> MeasureReport:
    """Build a full :class:`MeasureReport` from a steady-state covariance.

    ``measures`` selects which families to evaluate.  Entanglement covers
    every mode pair; steering covers the six indirectly coupled pairs in
    both directions; the contangle covers :data:`DEFAULT_TRIPLES`; the
    occupations cover the two mechanical modes, with a below-vacuum
    reduced state recorded as None rather than aborting the report.

    The report carries a ``physical`` flag (smallest symplectic
    eigenvalue >= 1/2 within rounding).  The feedback-modified input
    noise is an approximation that drops below the vacuum floor for
    nonzero loop phase at finite reflectivity, so stable points in that
    regime can produce covariances that are not quantum states; their
    measures are still reported, flagged, and quantum-state theorems
    (such as steering implying entanglement) are only guaranteed where
    the flag is set.
    """
    nu_min = _min_symplectic(cov)
    report = MeasureReport(
        stable=True,
        margin=margin,
        params=params,
        physical=bool(nu_min >= 0.5 - 1e-8),
        min_symplectic=nu_min,
    )
    if "entanglement" in measures:
        for pair in ALL_PAIRS:
            report.pairwise_E[pair] = log_negativity(reduce_modes(cov, pair))
    if "steering" in measures:
        for a, b in INDIRECT_PAIRS:
            cov4 = reduce_modes(cov, (a, b))
            report.steering[(a, b)] = gaussian_steering(cov4, 0)
            report.steering[(b, a)] = gaussian_steering(cov4, 1)
    if "contangle" in measures:
        for triple in DEFAULT_TRIPLES:
            key = _triple_key(triple)
            report.tripartite_R[key] = residual_contangle(reduce_modes(cov, key))
    if "occupation" in measures:
        for mode in ("b1", "b2"):
            try:
                report.phonon_occ[mode] = effective_phonon_number(cov, mode)
            except PhysicalityError:
                report.phonon_occ[mode] = None
    return report
