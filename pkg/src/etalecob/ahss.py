"""Atiyah-Hirzebruch spectral sequence from a cohomology table.

``E_2^{p,q} = H^p(X; Z/ell^nu (x) E^q)``, which for free coefficient groups
is ``H^p(X; Z/ell^nu)^{rank E^q}``.  Differentials ``d_r`` have bidegree
``(r, 1 - r)``.  Only collapse at ``E_2`` is supported, and it has to be
proven from the zero pattern of the page: every differential touching a
requested cell must have a zero source or a zero target.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .cochains import CohomologyTable
from .coefficients import GradedCoefficients
from .errors import CertificateError, ParameterError
from .finab import FinAb

UNKNOWN = None


@dataclass
class SSPage:
    """Page ``r`` tabulated on ``0 <= p <= pmax``, ``qmin <= q <= qmax``.

    ``entries`` maps ``(p, q)`` to a group, or to ``None`` when the base
    table does not determine ``H^p`` (a column beyond a truncation).  Cells
    outside the window are computed on demand from ``base`` and
    ``coefficients``; ``bounded`` says whether every column beyond ``pmax``
    is known to vanish.
    """

    r: int
    pmax: int
    qmin: int
    qmax: int
    entries: dict
    bounded: bool
    base: CohomologyTable
    coefficients: GradedCoefficients

    @property
    def modulus(self) -> int:
        return self.coefficients.modulus

    @property
    def reduced(self) -> bool:
        return self.base.reduced

    @property
    def theory(self) -> str:
        return self.coefficients.label

    def entry(self, p: int, q: int) -> FinAb | None:
        if (p, q) in self.entries:
            return self.entries[(p, q)]
        return _e2_entry(self.base, self.coefficients, p, q)

    def is_zero(self, p: int, q: int) -> bool:
        g = self.entry(p, q)
        return g is not None and g.is_trivial()

    def tail_unknown(self, n: int) -> bool:
        """Whether columns beyond ``pmax`` may contribute to total degree ``n``."""
        return not self.bounded and self.coefficients.has_support_at_or_below(n - self.pmax - 1)

    def nonzero_cells(self):
        return sorted(k for k, g in self.entries.items() if g is None or not g.is_trivial())


def _e2_entry(base: CohomologyTable, C: GradedCoefficients, p: int, q: int) -> FinAb | None:
    k = C.rank(q)
    if p < 0 or k == 0:
        return FinAb.trivial()
    if not base.supported(p):
        return UNKNOWN
    return base.group(p).power(k)


def window_for(degrees: tuple[int, int], pmax: int) -> tuple[int, int]:
    """``q``-range for total degrees ``n0..n1``: ``[n0 - pmax, n1]``."""
    n0, n1 = degrees
    return n0 - pmax, n1


def base_support(base: CohomologyTable) -> tuple[int, bool]:
    """Largest column to tabulate and whether columns above it vanish."""
    if base.vanishes_above is not None:
        return base.vanishes_above, True
    return max(base.groups), False


def build_e2(base: CohomologyTable, C: GradedCoefficients, degrees: tuple[int, int],
             window: tuple[int, int, int] | None = None) -> SSPage:
    """``E_2`` page covering total degrees ``degrees[0]..degrees[1]``.

    ``window`` overrides ``(pmax, qmin, qmax)``; it must contain the default one.
    """
    if base.coefficient != FinAb.cyclic(C.modulus):
        raise ParameterError(f"base coefficients {base.coefficient} do not match Z/{C.modulus}")
    pmax, bounded = base_support(base)
    qmin, qmax = window_for(degrees, pmax)
    if window is not None:
        wp, wq0, wq1 = window
        if wp < pmax or wq0 > qmin or wq1 < qmax:
            raise ParameterError("window too small for the requested degrees")
        pmax, qmin, qmax = wp, wq0, wq1
    entries = {(p, q): _e2_entry(base, C, p, q) for p in range(pmax + 1) for q in range(qmin, qmax + 1)}
    return SSPage(2, pmax, qmin, qmax, entries, bounded, base, C)


@dataclass
class CollapseCertificate:
    """Outcome of the zero-pattern analysis for a set of total degrees."""

    collapses: bool
    reasons: dict = field(default_factory=dict)
    undetermined: dict = field(default_factory=dict)

    def first_undetermined(self):
        if not self.undetermined:
            return None
        cell = min(self.undetermined)
        return cell, self.undetermined[cell]

    def to_json(self) -> dict:
        out = {"kind": "collapse-at-E2" if self.collapses else "unknown"}
        if self.undetermined:
            (p, q), why = self.first_undetermined()
            out["first_undetermined"] = {"p": p, "q": q, "differential": why}
        return out


def _cell_reason(page: SSPage, p: int, q: int):
    """Why every ``d_r`` into and out of ``(p, q)`` vanishes, or the first that may not."""
    if page.is_zero(p, q):
        return "zero entry", None
    # outgoing d_r: (p, q) -> (p + r, q - r + 1)
    last = page.pmax - p
    for r in range(2, last + 1):
        tp, tq = p + r, q - r + 1
        if not page.is_zero(tp, tq):
            return None, f"d_{r}: ({p},{q}) -> ({tp},{tq}) has nonzero source and target"
    if not page.bounded:
        # targets beyond the table sit in degrees q - r + 1 <= q - last
        r = max(last + 1, 2)
        if page.coefficients.has_support_at_or_below(q - r + 1):
            return None, f"d_r for r >= {r} from ({p},{q}) land in undetermined columns"
    out = f"d_2..d_{last} out of it hit zero entries" if last >= 2 else "no targets inside the support"
    # incoming d_r: (p - r, q + r - 1) -> (p, q), only for r <= p
    for r in range(2, p + 1):
        sp, sq = p - r, q + r - 1
        if not page.is_zero(sp, sq):
            return None, f"d_{r}: ({sp},{sq}) -> ({p},{q}) has nonzero source and target"
    inc = f"d_2..d_{p} into it start at zero entries" if p >= 2 else "no sources"
    return f"{out}; {inc}", None


def analyze_differentials(page: SSPage, degrees: tuple[int, int] | None = None) -> CollapseCertificate:
    """Zero-pattern check of all ``d_r`` touching cells of the requested total degrees."""
    if degrees is None:
        degrees = (page.qmin + page.pmax, page.qmax)
    cert = CollapseCertificate(True)
    for n in range(degrees[0], degrees[1] + 1):
        for p in range(page.pmax + 1):
            q = n - p
            g = page.entry(p, q)
            if g is UNKNOWN:
                cert.undetermined[(p, q)] = "entry not determined by the base table"
                continue
            reason, problem = _cell_reason(page, p, q)
            if problem is not None:
                cert.undetermined[(p, q)] = problem
            elif not g.is_trivial():
                cert.reasons[(p, q)] = reason
        if page.tail_unknown(n):
            cert.undetermined[(page.pmax + 1, n - page.pmax - 1)] = "columns beyond the table may contribute"
    cert.collapses = not cert.undetermined
    return cert


@dataclass
class DegreeResult:
    degree: int
    pieces: list
    resolved: bool
    group: FinAb | None
    status: str

    def to_json(self, certificates) -> dict:
        return {
            "degree": self.degree,
            "pieces": [{"p": p, "q": q, "group": list(g.invariant_factors)} for p, q, g in self.pieces],
            "resolved": self.resolved,
            "group": None if self.group is None else list(self.group.invariant_factors),
            "status": self.status,
            "certificates": list(certificates),
        }


@dataclass
class AbutmentReport:
    theory: str
    modulus: int
    reduced: bool
    degrees: dict
    certificates: list
    notes: list = field(default_factory=list)
    splitting: str | None = None

    def __getitem__(self, n: int) -> DegreeResult:
        return self.degrees[n]

    @property
    def status(self) -> str:
        states = {d.status for d in self.degrees.values()}
        if "UNDETERMINED" in states:
            return "UNDETERMINED"
        return "RESOLVED" if states <= {"RESOLVED"} else "GRADED"

    def group(self, n: int) -> FinAb | None:
        return self.degrees[n].group

    def order(self, n: int) -> int | None:
        d = self.degrees[n]
        if d.status == "UNDETERMINED":
            return None
        out = 1
        for _, _, g in d.pieces:
            out *= g.order
        return out

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "theory": self.theory,
            "modulus": self.modulus,
            "reduced": self.reduced,
            "status": self.status,
            "splitting": self.splitting,
            "certificates": list(self.certificates),
            "degrees": [self.degrees[n].to_json(self.certificates) for n in sorted(self.degrees)],
            "notes": list(self.notes),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> "AbutmentReport":
        if isinstance(data, str):
            data = json.loads(data)
        degrees = {}
        for d in data["degrees"]:
            pieces = [(x["p"], x["q"], FinAb(tuple(x["group"]))) for x in d["pieces"]]
            g = None if d["group"] is None else FinAb(tuple(d["group"]))
            degrees[d["degree"]] = DegreeResult(d["degree"], pieces, d["resolved"], g, d["status"])
        return cls(data["theory"], data["modulus"], data["reduced"], degrees,
                   list(data["certificates"]), list(data.get("notes", [])), data.get("splitting"))


def assemble_abutment(page: SSPage, certificate: CollapseCertificate | None, degrees,
                      splitting: str | None = None, convergence=()) -> AbutmentReport:
    """Associated graded of ``E^n`` from ``E_2 = E_infinity``.

    A degree is resolved when it has at most one nonzero piece, or when all
    pieces are elementary abelian and a splitting justification is given.
    Degrees whose cells the certificate could not clear are UNDETERMINED.
    """
    if certificate is None:
        raise CertificateError("assembling the abutment needs a collapse certificate")
    n0, n1 = degrees
    ell = _prime_of(page.modulus)
    out = {}
    for n in range(n0, n1 + 1):
        cells = [(p, n - p) for p in range(page.pmax + 1)]
        if any(c in certificate.undetermined for c in cells) or page.tail_unknown(n):
            out[n] = DegreeResult(n, [], False, None, "UNDETERMINED")
            continue
        pieces = [(p, q, page.entry(p, q)) for p, q in cells if not page.is_zero(p, q)]
        if len(pieces) <= 1:
            g = pieces[0][2] if pieces else FinAb.trivial()
            out[n] = DegreeResult(n, pieces, True, g, "RESOLVED")
        elif splitting and all(g.is_elementary(ell) for _, _, g in pieces):
            g = FinAb.trivial().direct_sum(*[g for _, _, g in pieces])
            out[n] = DegreeResult(n, pieces, True, g, "RESOLVED")
        else:
            out[n] = DegreeResult(n, pieces, False, None, "GRADED")
    certs = list(convergence)
    certs.append("collapse-at-E2" if certificate.collapses else "collapse-partial")
    report = AbutmentReport(page.theory, page.modulus, page.reduced, out, certs, [], splitting)
    if certificate.undetermined:
        (p, q), why = certificate.first_undetermined()
        report.notes.append(f"undetermined: cell ({p},{q}): {why}")
    return report


def _prime_of(modulus: int) -> int:
    p = 2
    while modulus % p:
        p += 1
    return p


def convergence_check(base: CohomologyTable, C: GradedCoefficients | None = None) -> list[str]:
    """Convergence certificates available for ``base``.

    All tabulated groups are finite, and a known vanishing bound gives
    bounded support.
    """
    certs = []
    if all(g.order < float("inf") for g in base.groups.values()):
        certs.append("finite-groups")
    if base.vanishes_above is not None:
        certs.append("bounded-support")
    return certs


def run_ahss(base: CohomologyTable, C: GradedCoefficients, degrees: tuple[int, int],
             splitting: str | None = None) -> AbutmentReport:
    """``build_e2 -> analyze_differentials -> assemble_abutment``."""
    page = build_e2(base, C, degrees)
    cert = analyze_differentials(page, degrees)
    return assemble_abutment(page, cert, degrees, splitting, convergence_check(base, C))
