"""Tightness certificates for tournament angle sets.

A tournament embedded in dimension d gives n unit vectors with one mutual
angle; n is bounded by 2d + 1 for odd d and by 2d for even d.  Equality
in the odd case happens exactly for doubly regular tournaments, in the
even case exactly when I + A - A^T is a skew Hadamard matrix.  One short
of the odd bound (n = 2d, d odd) splits into two mutually exclusive
shapes: a doubly regular tournament with one vertex deleted, or a
tournament whose squared Seidel matrix is diag(kI + lJ, kI + lJ).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InputError, InternalConsistencyError
from .representation import RepReport, TypeVariant, analyze
from .spectral import DEFAULT_TOLERANCES, Tolerances, spectrum_of
from .tournament import (Tournament, adjacency, canonical_form, dominated_extension,
                         enumerate_tournaments, parse_catalog, paley_tournament,
                         seidel_squared, switching_class)

log = logging.getLogger(__name__)

BUILTIN_CATALOG_ORDERS = (3, 7, 11)


@dataclass(frozen=True)
class DrtParams:
    """Order, common out-degree, and common out-neighbor count."""

    n: int
    out_degree: int
    common_out_neighbors: int


@dataclass(frozen=True)
class BlockFormCert:
    """Witness that S^2 = diag(kI + lJ, kI + lJ) for positive k, l."""

    k: int
    l: int
    partition: tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class TightnessReport:
    n: int
    rep_dim: int
    bound: int
    is_tight: bool
    certificate_kind: str     # DRT | SkewHadamard | DrtMinusVertex | BlockForm | None
    drt_params: DrtParams | None = None
    block_form: BlockFormCert | None = None

    def to_json_dict(self) -> dict:
        cert: dict = {"kind": self.certificate_kind}
        if self.drt_params is not None:
            cert["params"] = [self.drt_params.n, self.drt_params.out_degree,
                              self.drt_params.common_out_neighbors]
        if self.block_form is not None:
            cert["k"] = self.block_form.k
            cert["l"] = self.block_form.l
            cert["partition"] = [list(part) for part in self.block_form.partition]
        return {
            "n": self.n,
            "rep_dim": self.rep_dim,
            "bound": self.bound,
            "is_tight": self.is_tight,
            "certificate": cert,
        }


def is_doubly_regular(T: Tournament) -> DrtParams | None:
    """Parameters of a doubly regular tournament, or None.

    Doubly regular means every vertex has the same out-degree and every
    ordered vertex pair has the same number of common out-neighbors.
    """
    if T.n < 3:
        return None
    A = adjacency(T)
    degrees = A.sum(axis=1)
    if not np.all(degrees == degrees[0]):
        return None
    common = A @ A.T
    off = common[~np.eye(T.n, dtype=bool)]
    if not np.all(off == off[0]):
        return None
    k = int(degrees[0])
    lam = int(off[0])
    # The counting identities force these relations; failing them here
    # would mean the two checks above are broken.
    if T.n % 4 != 3 or k != (T.n - 1) // 2 or lam != (T.n - 3) // 4:
        raise InternalConsistencyError(
            f"degenerate double regularity parameters (n={T.n}, k={k}, lambda={lam})")
    return DrtParams(T.n, k, lam)


def skew_hadamard_check(T: Tournament) -> bool:
    """True iff H = I + A - A^T satisfies H H^T = nI (and H + H^T = 2I)."""
    A = adjacency(T)
    H = np.eye(T.n, dtype=np.int64) + A - A.T
    return bool(np.array_equal(H @ H.T, T.n * np.eye(T.n, dtype=np.int64)))


def _components(mask: np.ndarray) -> list[list[int]]:
    n = mask.shape[0]
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        queue = [start]
        seen[start] = True
        comp = []
        while queue:
            u = queue.pop()
            comp.append(u)
            for v in range(n):
                if not seen[v] and mask[u, v]:
                    seen[v] = True
                    queue.append(v)
        comps.append(sorted(comp))
    return comps


def block_form_check(T: Tournament) -> BlockFormCert | None:
    """Certificate that S^2 = diag(kI + lJ, kI + lJ) with k, l > 0, or None.

    The two diagonal blocks must cover n/2 vertices each and share the
    same off-diagonal value l; k = n - 1 - l follows from the diagonal.
    """
    if T.n % 2:
        raise InputError(f"block form check needs an even vertex count, got n={T.n}")
    n = T.n
    S2 = seidel_squared(T)
    offdiag = ~np.eye(n, dtype=bool)
    support = (S2 != 0) & offdiag
    if not support.any():
        # l = 0 would collapse the two blocks into a scalar matrix; that is
        # the skew Hadamard regime, not a block form.
        log.debug("block form rejected: S^2 is a scalar matrix (l = 0)")
        return None
    comps = _components(support)
    if len(comps) != 2:
        return None
    first, second = (comps[0], comps[1]) if 0 in comps[0] else (comps[1], comps[0])
    if len(first) != n // 2 or len(second) != n // 2:
        return None
    values = set()
    for comp in (first, second):
        for i, u in enumerate(comp):
            for v in comp[i + 1:]:
                values.add(int(S2[u, v]))
    if len(values) != 1:
        return None
    l = values.pop()
    if l <= 0:
        return None
    k = n - 1 - l
    if k <= 0:
        return None
    # A block form forces each half to induce a regular subtournament of
    # odd order; a violation here is a bug, not a property of the input.
    d = n // 2
    if d % 2 == 0:
        raise InternalConsistencyError(
            f"block form found with even half size {d}")
    for comp in (first, second):
        degrees = {sum(1 for v in comp if v != u and T.arc(u, v)) for u in comp}
        if degrees != {(d - 1) // 2}:
            raise InternalConsistencyError(
                f"block {comp} does not induce a regular subtournament")
    return BlockFormCert(k, l, (tuple(first), tuple(second)))


def _forced_extension(T: Tournament) -> Tournament | None:
    # In a doubly regular tournament of order n + 1 every out-degree is
    # n/2, so the orientation of each arc at the new vertex is forced.
    from .tournament import _extend

    target = T.n // 2
    pattern = 0
    for v in range(T.n):
        deg = T.out_degree(v)
        if deg == target - 1:
            pattern |= 1 << v
        elif deg != target:
            return None
    return _extend(T, pattern)


def _deleted_drt_spectrum(T: Tournament, tol: Tolerances) -> bool:
    d = T.n // 2
    spectrum = spectrum_of(T, tol)
    lines = spectrum.lines
    if len(lines) != 4:
        return False
    if [l.mult for l in lines] != [d - 1, 1, 1, d - 1]:
        return False
    theta_sq = lines[3].tau ** 2
    phi_sq = lines[2].tau ** 2
    if abs(theta_sq - (T.n + 1)) > 1e-6 * (T.n + 1) or abs(phi_sq - 1.0) > 1e-6:
        return False
    from .representation import classify_type

    return classify_type(spectrum, exact_s2=seidel_squared(T)).variant is TypeVariant.TYPE1


def drt_minus_vertex_check(T: Tournament, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """True iff some one-vertex extension of T is doubly regular.

    The extension is degree-forced, so the search is exact and cheap.  For
    n >= 6 the equivalent spectral signature (eigenvalues -theta, -1, 1,
    theta with theta^2 = n + 1, multiplicities d-1, 1, 1, d-1, and a zero
    bottom main angle) is evaluated as well; the two routes must agree.
    """
    if T.n % 2:
        raise InputError(f"deleted-vertex check needs an even vertex count, got n={T.n}")
    if (T.n + 1) % 4 != 3:
        return False
    ext = _forced_extension(T)
    ext_ok = ext is not None and is_doubly_regular(ext) is not None
    if T.n >= 6:
        spectral_ok = _deleted_drt_spectrum(T, tol)
        if spectral_ok != ext_ok:
            raise InternalConsistencyError(
                "spectral signature and forced-extension search disagree on "
                f"the deleted-vertex check for n={T.n}")
    return ext_ok


def _expect_shape(report: RepReport, mults: list[int], variant: TypeVariant,
                  context: str) -> None:
    spectrum_mults = list(report.spectrum.multiplicities())
    if spectrum_mults != mults or report.type_class.variant is not variant:
        raise InternalConsistencyError(
            f"{context}: spectrum multiplicities {spectrum_mults} with type "
            f"{int(report.type_class.variant)} do not match the required shape "
            f"{mults} with type {int(variant)}")


def classify_code(T: Tournament, tol: Tolerances = DEFAULT_TOLERANCES) -> TightnessReport:
    """Tightness report with a structural certificate.

    Tight odd-dimension codes must be doubly regular; tight even-dimension
    codes must pass the skew Hadamard check; one short of the odd bound
    exactly one of the deleted-vertex and block-form certificates applies.
    Each certificate is cross-validated against the spectrum shape, and
    any disagreement raises InternalConsistencyError.
    """
    if T.n < 3:
        raise InputError(f"tightness classification needs n >= 3, got n={T.n}")
    report = analyze(T, tol)
    d = report.rep_dim
    n = T.n
    bound = 2 * d + 1 if d % 2 else 2 * d
    is_tight = n == bound
    kind = "None"
    drt = None
    block = None
    if is_tight and d % 2:
        drt = is_doubly_regular(T)
        if drt is None:
            raise InternalConsistencyError(
                f"tight code in odd dimension {d} without double regularity")
        kind = "DRT"
    elif is_tight:
        if not skew_hadamard_check(T):
            raise InternalConsistencyError(
                f"tight code in even dimension {d} without a skew Hadamard matrix")
        kind = "SkewHadamard"
        _expect_shape(report, [d, d], TypeVariant.TYPE2, "tight even dimension")
    elif n == 2 * d and d % 2:
        deleted = drt_minus_vertex_check(T, tol)
        block = block_form_check(T)
        if deleted == (block is not None):
            raise InternalConsistencyError(
                f"n = 2d with odd d = {d}: exactly one of the deleted-vertex and "
                "block-form certificates must apply")
        if deleted:
            kind = "DrtMinusVertex"
            block = None
            _expect_shape(report, [d - 1, 1, 1, d - 1], TypeVariant.TYPE1,
                          "deleted-vertex certificate")
        else:
            kind = "BlockForm"
            _expect_shape(report, [1, d - 1, d - 1, 1], TypeVariant.TYPE3,
                          "block-form certificate")
    return TightnessReport(n, d, bound, is_tight, kind, drt, block)


def verify_no_double_zero_spectrum(n: int, tol: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """Exhaustively confirm that no tournament on n vertices has spectrum
    (-theta)^(d-1), 0, 0, theta^(d-1) with d = n/2.

    Supported for n in {2, 4, 6}; n = 2 passes vacuously.
    """
    if n not in (2, 4, 6):
        raise InputError(f"the exhaustive sweep supports n in 2, 4, 6, got {n}")
    d = n // 2
    if d == 1:
        shape = [2]
    else:
        shape = [d - 1, 2, d - 1]
    for T in enumerate_tournaments(n):
        spectrum = spectrum_of(T, tol)
        if list(spectrum.multiplicities()) != shape:
            continue
        middle = spectrum.lines[len(shape) // 2]
        if abs(middle.tau) <= 1e-7 * max(1.0, abs(spectrum.lines[-1].tau)):
            return False
    return True


@dataclass(frozen=True)
class DrtCatalog:
    """Known doubly regular tournaments of one order.

    trusted is True when completeness of the list is taken on faith (the
    built-in order 11 and every external catalog file) instead of being
    re-derived by exhaustive search.
    """

    order: int
    tournaments: tuple[Tournament, ...]
    trusted: bool


@lru_cache(maxsize=None)
def _builtin_catalog(order: int) -> DrtCatalog:
    if order < 3 or order % 4 != 3:
        # No doubly regular tournament exists at these orders.
        return DrtCatalog(order, (), False)
    if order in (3, 7):
        found = tuple(T for T in enumerate_tournaments(order)
                      if is_doubly_regular(T) is not None)
        return DrtCatalog(order, found, False)
    if order == 11:
        return DrtCatalog(order, (paley_tournament(11),), True)
    raise InputError(
        f"no built-in catalog of doubly regular tournaments for order {order}; "
        "supply a catalog file")


def drt_catalog(order: int, catalog_path: str | None = None) -> DrtCatalog:
    """Doubly regular tournaments of the given order.

    Orders 3 and 7 are verified by exhaustive enumeration, order 11 ships
    as a trusted single entry, and other orders of the form 4k + 3 need an
    external catalog file in the usual line format.
    """
    if order < 1:
        raise InputError(f"catalog order must be positive, got {order}")
    if catalog_path is None:
        return _builtin_catalog(order)
    with open(catalog_path, "r", encoding="ascii") as handle:
        entries = parse_catalog(handle)
    seen: dict = {}
    for T in entries:
        if T.n != order:
            raise InputError(f"catalog entry has order {T.n}, expected {order}")
        if is_doubly_regular(T) is None:
            raise InputError(f"catalog entry {T.line()} is not doubly regular")
        seen.setdefault(canonical_form(T), T)
    return DrtCatalog(order, tuple(seen[k] for k in sorted(seen)), True)


@dataclass(frozen=True)
class TightCodeCount:
    d: int
    count: int
    catalog_trusted: bool

    def to_json_dict(self) -> dict:
        return {"d": self.d, "count": self.count, "catalog_trusted": self.catalog_trusted}


def count_tight_codes(d: int, catalog_path: str | None = None) -> TightCodeCount:
    """Number of tight angle-set configurations in dimension d, up to
    tournament isomorphism.

    Odd d counts doubly regular tournaments of order 2d + 1.  Even d
    counts isomorphism classes in the union of the switching classes of
    the dominated extensions of the doubly regular tournaments of order
    2d - 1.
    """
    if d < 1:
        raise InputError(f"dimension must be positive, got {d}")
    if d % 2:
        catalog = drt_catalog(2 * d + 1, catalog_path)
        return TightCodeCount(d, len(catalog.tournaments), catalog.trusted)
    catalog = drt_catalog(2 * d - 1, catalog_path)
    classes: set = set()
    for T in catalog.tournaments:
        classes |= switching_class(dominated_extension(T))
    return TightCodeCount(d, len(classes), catalog.trusted)
