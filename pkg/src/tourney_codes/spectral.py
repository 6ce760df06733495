"""Hermitian eigenanalysis, main angles, and rank-one shift identities.

The Seidel matrix of a tournament is S = sqrt(-1) (A - A^T).  Everything
here works on Hermitian matrices in general, with one tournament-specific
extra: for Seidel matrices the square S^2 is an integer matrix, which
supports an exact-arithmetic cross-check of borderline main-angle zeros.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InputError, InternalConsistencyError
from .tournament import Tournament, adjacency, seidel_squared

log = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
EIG_RESIDUAL_FACTOR = 1e-9
CLUSTER_GAP_FACTOR = 1e-7
BETA_ZERO_TOL = 1e-6
BETA_EXACT_BAND = (1e-9, 1e-3)
SUM_BETA_SQ_TOL = 1e-8
INTERLACING_SLACK = 1e-7


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by the spectral pipeline.

    cluster_gap_factor scales with the spectral radius to decide when two
    floating eigenvalues belong to one true eigenvalue; beta_zero is the
    main-angle zero threshold; the beta_exact band marks the floating
    values that must be settled by exact integer arithmetic.
    """

    cluster_gap_factor: float = CLUSTER_GAP_FACTOR
    beta_zero: float = BETA_ZERO_TOL
    beta_exact_lo: float = BETA_EXACT_BAND[0]
    beta_exact_hi: float = BETA_EXACT_BAND[1]


DEFAULT_TOLERANCES = Tolerances()


@dataclass(frozen=True)
class SpectralLine:
    """One distinct eigenvalue: value, multiplicity, main angle."""

    tau: float
    mult: int
    beta: float
    main: bool


@dataclass(frozen=True)
class MainSpectrum:
    """The main eigenvalues (beta > 0) in ascending order."""

    taus: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.taus:
            raise InternalConsistencyError("a main spectrum cannot be empty")


@dataclass(frozen=True)
class Spectrum:
    n: int
    lines: tuple[SpectralLine, ...]
    cluster_tol: float
    warnings: tuple[str, ...] = ()

    def taus(self) -> tuple[float, ...]:
        return tuple(line.tau for line in self.lines)

    def multiplicities(self) -> tuple[int, ...]:
        return tuple(line.mult for line in self.lines)

    def main_lines(self) -> tuple[SpectralLine, ...]:
        return tuple(line for line in self.lines if line.main)

    def main_spectrum(self) -> MainSpectrum:
        main = self.main_lines()
        return MainSpectrum(tuple(l.tau for l in main), tuple(l.beta for l in main))

    def to_json_dict(self) -> dict:
        return {
            "eigenvalues": [
                {"tau": float(l.tau), "mult": int(l.mult), "beta": float(l.beta)}
                for l in self.lines
            ]
        }


def seidel_matrix(T: Tournament) -> np.ndarray:
    """Hermitian matrix sqrt(-1) (A - A^T); entry (u, v) is +i iff u -> v."""
    A = adjacency(T)
    return 1j * (A - A.T).astype(np.complex128)


def eigensystem(H, hermitian_tol: float = HERMITIAN_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and an orthonormal eigenbasis of a Hermitian matrix.

    Returns (w, V) with H V = V diag(w).  The decomposition is validated:
    residual within 1e-9 * n * max|H| and orthonormality within 1e-9.
    """
    H = np.asarray(H, dtype=np.complex128)
    if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] == 0:
        raise InputError("eigensystem needs a nonempty square matrix")
    n = H.shape[0]
    scale = max(1.0, float(np.abs(H).max()))
    if float(np.abs(H - H.conj().T).max()) > hermitian_tol * scale:
        raise InputError("matrix is not Hermitian within tolerance")
    w, V = np.linalg.eigh(H)
    residual = float(np.abs(H @ V - V * w).max())
    if residual > EIG_RESIDUAL_FACTOR * n * scale:
        raise InternalConsistencyError(
            f"eigendecomposition residual {residual:g} exceeds contract")
    ortho = float(np.abs(V.conj().T @ V - np.eye(n)).max())
    if ortho > 1e-9:
        raise InternalConsistencyError("eigenbasis is not orthonormal within contract")
    return w, V


def _cluster(w: np.ndarray, gap_tol: float) -> list[list[int]]:
    clusters = [[0]]
    for k in range(1, len(w)):
        if w[k] - w[k - 1] < gap_tol:
            clusters[-1].append(k)
        else:
            clusters.append([k])
    return clusters


def _krylov_minimal_polynomial(rows: list[list[int]]) -> list[Fraction]:
    """Monic minimal polynomial of an integer matrix on the cyclic space of
    the all-ones vector, computed exactly over the rationals.

    Returns the coefficient list c with c[k] the coefficient of x^k and
    the leading coefficient equal to 1.
    """
    n = len(rows)
    v = [1] * n
    echelon: list[tuple[int, list[Fraction], list[Fraction]]] = []
    k = 0
    while True:
        vec = [Fraction(x) for x in v]
        expr = [Fraction(0)] * (k + 1)
        expr[k] = Fraction(1)
        for pivot, rvec, rexpr in echelon:
            c = vec[pivot]
            if c:
                vec = [a - c * b for a, b in zip(vec, rvec)]
                expr = [a - c * (rexpr[i] if i < len(rexpr) else Fraction(0))
                        for i, a in enumerate(expr)]
        pivot = next((i for i, x in enumerate(vec) if x), None)
        if pivot is None:
            return expr
        inv = Fraction(1) / vec[pivot]
        echelon.append((pivot, [x * inv for x in vec], [x * inv for x in expr]))
        v = [sum(rows[i][t] * v[t] for t in range(n)) for i in range(n)]
        k += 1


def _exact_main_square_roots(s2) -> np.ndarray:
    """Distinct eigenvalues of S^2 seen by the all-ones vector.

    These are the roots of the exact Krylov minimal polynomial; tau is a
    main eigenvalue of S exactly when tau^2 appears here.
    """
    rows = [[int(x) for x in row] for row in np.asarray(s2)]
    coeffs = _krylov_minimal_polynomial(rows)
    poly = [float(c) for c in reversed(coeffs)]
    roots = np.roots(poly)
    return np.sort(roots.real)


def _horner(coeffs: list[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def exact_integer_eigenvalue(matrix, value: int) -> bool:
    """Whether an integer is exactly an eigenvalue of an integer matrix."""
    rows = [[Fraction(int(x)) for x in row] for row in np.asarray(matrix)]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise InputError("eigenvalue test needs a square matrix")
    for i in range(n):
        rows[i][i] -= value
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col]), None)
        if pivot is None:
            return True
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = Fraction(1) / rows[col][col]
        for r in range(col + 1, n):
            c = rows[r][col] * inv
            if c:
                rows[r] = [a - c * b for a, b in zip(rows[r], rows[col])]
    return False


def exact_ones_resolvent(matrix, shift: int) -> Fraction | None:
    """j^T (M - shift I)^(-1) j on the cyclic subspace of the all-ones
    vector j, exactly over the rationals, for an integer matrix M.

    Well defined whenever the shift is not an eigenvalue seen by j, even
    if it is an eigenvalue of M on the orthogonal complement; returns
    None at a pole (shift seen by j).
    """
    rows = [[int(x) for x in row] for row in np.asarray(matrix)]
    p = _krylov_minimal_polynomial(rows)
    k = Fraction(shift)
    pk = _horner(p, k)
    if pk == 0:
        return None
    # Synthetic division q(t) = (p(t) - p(k)) / (t - k); then
    # r(t) = -q(t)/p(k) satisfies (t - k) r(t) = 1 modulo p(t), so the
    # wanted value is sum_m q_m (j^T M^m j) scaled by -1/p(k).
    q = [Fraction(0)] * (len(p) - 1)
    acc = Fraction(0)
    for idx in range(len(p) - 1, 0, -1):
        acc = acc * k + p[idx]
        q[idx - 1] = acc
    n = len(rows)
    v = [1] * n
    total = Fraction(0)
    for coeff in q:
        total += coeff * sum(v)
        v = [sum(rows[i][t] * v[t] for t in range(n)) for i in range(n)]
    return -total / pk


def _resolve_mainness(taus, betas, s2, tol: Tolerances) -> list[bool]:
    # Floating main angles decide directly outside the ambiguous band;
    # inside it the exact Krylov spectrum of the integer matrix S^2 decides.
    ambiguous = [tol.beta_exact_lo <= b <= tol.beta_exact_hi for b in betas]
    if s2 is None or not any(ambiguous):
        return [b > tol.beta_zero for b in betas]
    seen = _exact_main_square_roots(s2)
    sq_scale = max(1.0, max(t * t for t in taus))
    flags = []
    for t, b, amb in zip(taus, betas, ambiguous):
        hit = bool(np.any(np.abs(seen - t * t) <= 1e-4 * sq_scale))
        if amb:
            flags.append(hit)
        else:
            clear = b > tol.beta_exact_hi
            if clear != hit:
                raise InternalConsistencyError(
                    f"floating main angle {b:g} at tau={t:g} contradicts the "
                    f"exact integer spectrum")
            flags.append(clear)
    return flags


def group_spectrum(eigenvalues, eigenvectors, j_vector=None, *,
                   exact_s2=None, tol: Tolerances = DEFAULT_TOLERANCES) -> Spectrum:
    """Cluster floating eigenvalues and attach main angles.

    Consecutive eigenvalues closer than cluster_gap_factor * max(1, radius)
    share a cluster.  For cluster i with projector E_i, the main angle is
    beta_i = |E_i j| / sqrt(n).  Gaps inside [tol, 10 tol) are flagged as
    ambiguous-clustering warnings.  exact_s2, when given, must be the
    integer square of the analyzed Seidel matrix and is used to settle
    main angles in the ambiguous floating band.
    """
    w = np.asarray(eigenvalues, dtype=np.float64)
    V = np.asarray(eigenvectors, dtype=np.complex128)
    n = len(w)
    if n == 0 or V.shape != (n, n):
        raise InputError("eigenvalues and eigenvectors have mismatched shapes")
    if j_vector is None:
        j = np.ones(n)
    else:
        j = np.asarray(j_vector, dtype=np.complex128)
        if j.shape != (n,):
            raise InputError("j vector has the wrong length")
    order = np.argsort(w, kind="stable")
    w = w[order]
    V = V[:, order]

    radius = max(1.0, float(np.abs(w).max()))
    gap_tol = tol.cluster_gap_factor * radius
    clusters = _cluster(w, gap_tol)

    warnings = []
    for a, b in zip(clusters, clusters[1:]):
        gap = w[b[0]] - w[a[-1]]
        if gap < 10 * gap_tol:
            warnings.append(
                f"ambiguous clustering: gap {gap:.3e} near tau={w[a[-1]]:.6f} "
                f"is within a factor 10 of the tolerance {gap_tol:.3e}")

    proj = V.conj().T @ j
    taus, mults, betas = [], [], []
    for idx in clusters:
        taus.append(float(np.mean(w[idx])))
        mults.append(len(idx))
        betas.append(float(np.sqrt(sum(abs(proj[k]) ** 2 for k in idx) / n)))

    expected = float(np.vdot(j, j).real) / n
    if abs(sum(b * b for b in betas) - expected) > SUM_BETA_SQ_TOL:
        raise InternalConsistencyError("main angle squares do not sum to |j|^2 / n")

    use_exact = exact_s2 if (j_vector is None or bool(np.all(j == 1))) else None
    flags = _resolve_mainness(taus, betas, use_exact, tol)
    lines = tuple(SpectralLine(t, m, b, f)
                  for t, m, b, f in zip(taus, mults, betas, flags))
    return Spectrum(n, lines, gap_tol, tuple(warnings))


def spectrum_of(T: Tournament, tol: Tolerances = DEFAULT_TOLERANCES) -> Spectrum:
    """Grouped Seidel spectrum of a tournament, with the exact cross-check wired in."""
    w, V = eigensystem(seidel_matrix(T))
    return group_spectrum(w, V, exact_s2=seidel_squared(T), tol=tol)


@dataclass(frozen=True)
class CharIdentityResult:
    """Worst relative defect of the rank-one-shift characteristic identity."""

    max_residual: float
    evaluated: int
    skipped: tuple[float, ...]


def char_identity_residual(H, a: float, x_samples,
                           tol: Tolerances = DEFAULT_TOLERANCES) -> CharIdentityResult:
    """Check det(M - xI) = det(H - xI) (1 + a sum_i n beta_i^2 / (tau_i - x))
    for M = H + aJ at the given sample points.

    Both characteristic polynomials are evaluated as products over
    independently computed eigenvalues.  Samples closer to an eigenvalue
    of H than the skip tolerance are skipped and reported.
    """
    w_h, V = eigensystem(H)
    n = len(w_h)
    spec = group_spectrum(w_h, V, tol=tol)
    M = np.asarray(H, dtype=np.complex128) + a * np.ones((n, n))
    w_m, _ = eigensystem(M)

    radius = max(1.0, float(np.abs(w_h).max()))
    skip_tol = 1e-6 * radius
    max_residual = 0.0
    evaluated = 0
    skipped = []
    for x in x_samples:
        x = float(x)
        if float(np.abs(w_h - x).min()) <= skip_tol:
            skipped.append(x)
            continue
        p_h = float(np.prod(w_h - x))
        p_m = float(np.prod(w_m - x))
        correction = 1.0 + a * sum(
            n * line.beta ** 2 / (line.tau - x) for line in spec.lines)
        residual = abs(p_m - p_h * correction) / (1.0 + abs(p_h))
        max_residual = max(max_residual, residual)
        evaluated += 1
    if evaluated:
        log.debug("characteristic identity residual %.3e over %d samples",
                  max_residual, evaluated)
    for x in skipped:
        log.debug("sample %g skipped: too close to an eigenvalue", x)
    return CharIdentityResult(max_residual, evaluated, tuple(skipped))


@dataclass(frozen=True)
class InterlacingVerdict:
    """Main-eigenvalue count comparison and strict interlacing check."""

    main_count_h: int
    main_count_m: int
    ok: bool
    violations: tuple[str, ...]


def shifted_main_spectrum(H, a: float, tol: Tolerances = DEFAULT_TOLERANCES
                          ) -> tuple[MainSpectrum, InterlacingVerdict]:
    """Main spectrum of M = H + aJ and its interlacing verdict against H.

    For a > 0 the main eigenvalues must satisfy tau_1 < mu_1 < tau_2 < ...
    < tau_r < mu_r; for a < 0 the mu come first.  Violations beyond the
    strictness slack of 1e-7 are recorded.
    """
    if a == 0:
        raise InputError("the shift a must be nonzero")
    w_h, V_h = eigensystem(H)
    n = len(w_h)
    main_h = group_spectrum(w_h, V_h, tol=tol).main_spectrum()
    M = np.asarray(H, dtype=np.complex128) + a * np.ones((n, n))
    w_m, V_m = eigensystem(M)
    main_m = group_spectrum(w_m, V_m, tol=tol).main_spectrum()

    violations = []
    if len(main_h.taus) != len(main_m.taus):
        violations.append(
            f"main eigenvalue counts differ: {len(main_h.taus)} for H, "
            f"{len(main_m.taus)} for the shift")
    else:
        if a > 0:
            pairs = list(zip(main_h.taus, main_m.taus))       # tau_k < mu_k
            shifted = list(zip(main_m.taus, main_h.taus[1:]))  # mu_k < tau_(k+1)
        else:
            pairs = list(zip(main_m.taus, main_h.taus))       # mu_k < tau_k
            shifted = list(zip(main_h.taus, main_m.taus[1:]))  # tau_k < mu_(k+1)
        for lo, hi in pairs + shifted:
            if lo - hi > INTERLACING_SLACK:
                violations.append(f"interlacing violated: expected {lo:.9f} < {hi:.9f}")
    verdict = InterlacingVerdict(len(main_h.taus), len(main_m.taus),
                                 not violations, tuple(violations))
    return main_m, verdict
