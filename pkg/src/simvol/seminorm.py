"""Exact l1-seminorm of (relative) homology classes of cellular cycles.

For a cellular ``k``-cycle ``z0`` the complex-level seminorm is::

    min |z0 + ∂y - q|_1   over (k+1)-chains y and chains q supported in Y

solved as a linear program with the absolute-value split ``z0 + ∂y = u - w``.
Rows of cells in ``Y`` are dropped, which is the same as letting ``q`` absorb
them freely.  The certificate carries the optimizer, the witness ``y``, the
absorbed part ``q`` and a dual cocycle ``phi`` with ``|phi| <= 1`` and
``phi(z0) = value`` proving optimality.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from .chains import AffineSimplex, Chain, DegreeUnderflow, ZERO, boundary, cellular
from .complex import ComplexError, DeltaComplex, rational_json
from .lp import LPError, Tableau


class NotACycle(ValueError):
    pass


class NonOrientable(ValueError):
    def __init__(self, message: str, cycle: list):
        self.cycle = cycle
        super().__init__(f"{message}; obstructing cells: {' -> '.join(cycle)}")


@dataclass
class ClassSpec:
    complex: DeltaComplex
    degree: int
    representative: Chain
    relative: str | None = None

    def cell_coefficients(self) -> dict:
        """The representative as ``{cell id: coeff}``; it must be cellular."""
        out: dict = {}
        for s, a in self.representative.items():
            if s.complex is not self.complex:
                raise ComplexError("representative lives on another complex")
            if s != AffineSimplex.cell(self.complex, s.carrier):
                raise ComplexError(f"{s!r} is not a cell of the complex; subdivide the complex first")
            out[s.carrier] = out.get(s.carrier, ZERO) + a
        return out


@dataclass
class SeminormCertificate:
    value: Fraction
    optimizer: Chain
    witness: Chain
    y_part: Chain
    dual: dict = field(default_factory=dict)
    status: str = "optimal"
    pivots: int = 0

    def to_json(self) -> dict:
        from .chains import chain_to_json
        return {
            "status": self.status,
            "value": rational_json(self.value),
            "value_decimal": float(self.value),
            "optimizer": chain_to_json(self.optimizer),
            "witness": chain_to_json(self.witness),
            "y_part": chain_to_json(self.y_part),
            "dual": {c: rational_json(v) for c, v in sorted(self.dual.items())},
            "pivots": self.pivots,
        }


def cell_boundary(K: DeltaComplex, coeffs: Mapping[str, Fraction]) -> dict:
    """Cellular boundary straight from the face maps."""
    out: dict = {}
    for cid, a in coeffs.items():
        if K.cell_dim(cid) == 0:
            raise DegreeUnderflow("boundary of a 0-cell")
        for i, f in enumerate(K.cells[cid].faces):
            out[f] = out.get(f, ZERO) + (a if i % 2 == 0 else -a)
    return {c: v for c, v in out.items() if v}


def _check_cycle(query: ClassSpec, z: dict) -> None:
    if query.degree == 0:
        return
    Y = query.complex.mark(query.relative) if query.relative else frozenset()
    bad = {c: v for c, v in cell_boundary(query.complex, z).items() if c not in Y}
    if bad:
        kind = f"relative to {query.relative}" if query.relative else "absolute"
        raise NotACycle(f"representative is not an {kind} cycle; boundary terms on {sorted(bad)[:5]}")


def l1_seminorm(query: ClassSpec, max_pivots: int | None = None) -> SeminormCertificate:
    K = query.complex
    k = query.degree
    if query.representative.degree != k:
        raise ValueError("representative degree does not match the class degree")
    z = query.cell_coefficients()
    _check_cycle(query, z)
    Y = K.mark(query.relative) if query.relative else frozenset()
    rows_cells = sorted(c for c in K.cells_of_dim(k) if c not in Y)
    index = {c: r for r, c in enumerate(rows_cells)}
    uppers = sorted(K.cells_of_dim(k + 1))
    m = len(rows_cells)
    # columns: u_r = r, w_r = m + r, y+_t = 2m + 2t, y-_t = 2m + 2t + 1
    rows = [dict() for _ in range(m)]
    rhs = [Fraction(z.get(c, 0)) for c in rows_cells]
    sign = [1 if b >= 0 else -1 for b in rhs]
    for r in range(m):
        rows[r][r] = Fraction(sign[r])
        rows[r][m + r] = Fraction(-sign[r])
    for t, tau in enumerate(uppers):
        for i, f in enumerate(K.cells[tau].faces):
            r = index.get(f)
            if r is None:
                continue
            a = Fraction(1 if i % 2 == 0 else -1) * sign[r]
            for col, coef in ((2 * m + 2 * t, -a), (2 * m + 2 * t + 1, a)):
                v = rows[r].get(col, ZERO) + coef
                if v:
                    rows[r][col] = v
                else:
                    rows[r].pop(col, None)
    rhs = [b * s for b, s in zip(rhs, sign)]
    basis = [r if sign[r] > 0 else m + r for r in range(m)]
    cost = {j: Fraction(1) for j in range(2 * m)}
    T = Tableau(rows, rhs, basis, cost)
    status = T.run(max_pivots=max_pivots)
    if status != "optimal":
        raise LPError("seminorm LP reported unbounded, which cannot happen for a norm")
    x = T.solution()
    y = {}
    for t, tau in enumerate(uppers):
        v = x.get(2 * m + 2 * t, ZERO) - x.get(2 * m + 2 * t + 1, ZERO)
        if v:
            y[tau] = v
    dual = {}
    for r, c in enumerate(rows_cells):
        col = r if sign[r] > 0 else m + r
        pi = 1 - T.reduced.get(col, ZERO)
        if pi * sign[r]:
            dual[c] = pi * sign[r]
    full = dict(z)
    if y:
        for c, v in cell_boundary(K, y).items():
            full[c] = full.get(c, ZERO) + v
    opt = {c: v for c, v in full.items() if v and c not in Y}
    qy = {c: v for c, v in full.items() if v and c in Y}
    witness = cellular(K, y) if y else Chain(k + 1)
    optimizer = cellular(K, opt) if opt else Chain(k)
    y_part = cellular(K, qy) if qy else Chain(k)
    return SeminormCertificate(T.value, optimizer, witness, y_part, dual, "optimal", T.pivots)


def _coeffs(c: Chain, K: DeltaComplex) -> dict:
    out: dict = {}
    for s, a in c.items():
        if s != AffineSimplex.cell(K, s.carrier):
            raise ComplexError(f"{s!r} is not a cell")
        out[s.carrier] = out.get(s.carrier, ZERO) + a
    return out


def certificate_problems(cert: SeminormCertificate, query: ClassSpec) -> list:
    """Violated certificate identities, recomputed from the face maps."""
    K = query.complex
    probs = []
    try:
        z = query.cell_coefficients()
        opt = _coeffs(cert.optimizer, K)
        y = _coeffs(cert.witness, K)
        q = _coeffs(cert.y_part, K)
    except ComplexError as exc:
        return [str(exc)]
    Y = K.mark(query.relative) if query.relative else frozenset()
    lhs = dict(z)
    for c, v in (cell_boundary(K, y).items() if y else []):
        lhs[c] = lhs.get(c, ZERO) + v
    for c, v in q.items():
        lhs[c] = lhs.get(c, ZERO) - v
    for c, v in opt.items():
        lhs[c] = lhs.get(c, ZERO) - v
    if any(v for v in lhs.values()):
        probs.append("optimizer != representative + ∂(witness) - y_part")
    if any(c not in Y for c in q):
        probs.append("y_part is not supported in the relative mark")
    norm = sum((abs(v) for v in opt.values()), ZERO)
    if norm != cert.value:
        probs.append(f"|optimizer|_1 = {norm} differs from value {cert.value}")
    base = sum((abs(v) for c, v in z.items() if c not in Y), ZERO)
    if cert.value > base:
        probs.append("value exceeds the norm of the representative")
    if cert.value < 0:
        probs.append("negative value")
    if cert.dual is not None:
        phi = cert.dual
        if any(abs(v) > 1 for v in phi.values()) or any(c in Y for c in phi):
            probs.append("dual cochain is not bounded by 1 off the relative mark")
        for tau in K.cells_of_dim(query.degree + 1):
            s = sum((phi.get(f, ZERO) * (1 if i % 2 == 0 else -1) for i, f in enumerate(K.cells[tau].faces)), ZERO)
            if s:
                probs.append(f"dual cochain is not a cocycle on {tau}")
                break
        if sum((phi.get(c, ZERO) * v for c, v in z.items()), ZERO) != cert.value:
            probs.append("dual value differs from primal value")
    return probs


def verify_certificate(cert: SeminormCertificate, query: ClassSpec) -> bool:
    return not certificate_problems(cert, query)


def fundamental_cycle(K: DeltaComplex, k: int | None = None, relative: str | None = None) -> Chain:
    """``±1``-weighted sum of top cells with boundary zero (or in ``relative``)."""
    k = K.dim if k is None else k
    if k < 1:
        raise ValueError("fundamental cycles need top dimension >= 1")
    tops = sorted(K.cells_of_dim(k))
    if not tops:
        raise ComplexError(f"no {k}-cells")
    Y = K.mark(relative) if relative else frozenset()
    inc: dict = {}
    for t in tops:
        for i, f in enumerate(K.cells[t].faces):
            inc.setdefault(f, []).append((t, i))
    for f in K.cells_of_dim(k - 1):
        n = len(inc.get(f, []))
        if f in Y:
            if n > 2:
                raise ComplexError(f"({k-1})-cell {f} in {relative} is a face of {n} top cells")
            continue
        if n != 2:
            raise ComplexError(f"({k-1})-cell {f} is a face of {n} top cells, expected 2")
    adj: dict = {t: [] for t in tops}
    for f, lst in inc.items():
        if f in Y or len(lst) != 2:
            continue
        (t1, i1), (t2, i2) = lst
        rel = -((-1) ** (i1 + i2))  # eps(t2) = rel * eps(t1)
        adj[t1].append((t2, rel, f))
        if t1 != t2:
            adj[t2].append((t1, rel, f))
    eps: dict = {}
    parent: dict = {}
    for root in tops:
        if root in eps:
            continue
        eps[root] = 1
        parent[root] = None
        queue = deque([root])
        while queue:
            t = queue.popleft()
            for u, rel, f in adj[t]:
                want = rel * eps[t]
                if u not in eps:
                    eps[u] = want
                    parent[u] = (t, f)
                    queue.append(u)
                elif eps[u] != want:
                    raise NonOrientable("no consistent orientation", _obstruction(parent, t, u, f))
    z = cellular(K, eps)
    bad = [s.carrier for s in boundary(z) if s.carrier not in Y]
    if bad:
        raise ComplexError(f"oriented sum has boundary off {relative or 'the empty mark'}: {bad[:5]}")
    return z


def _obstruction(parent: dict, a: str, b: str, f: str) -> list:
    def path(x):
        out = [x]
        while parent[x] is not None:
            x = parent[x][0]
            out.append(x)
        return out

    pa, pb = path(a), path(b)
    common = next(x for x in pa if x in set(pb))
    left = pa[: pa.index(common) + 1]
    right = pb[: pb.index(common)]
    return list(reversed(left)) + [f"({f})"] + right + [common]


__all__ = [
    "ClassSpec", "NonOrientable", "NotACycle", "SeminormCertificate", "cell_boundary", "certificate_problems",
    "fundamental_cycle", "l1_seminorm", "verify_certificate",
]
