"""Higgs-de Rham flow for logarithmic Higgs bundles on the projective line.

One step sends a nilpotent Higgs bundle to the graded object of a Simpson
filtration on its Frobenius-divided flat bundle.  Degrees multiply by p at
every step and the rank never moves, so periodic orbits can only live in
degree zero; there periodicity is decided by an exact isomorphism search in
Birkhoff frames.

The Simpson filtration is computed by refining the plain Harder-Narasimhan
filtration until it satisfies Griffiths transversality: whenever the
connection pushes a step outside the next one, the next step is enlarged by
the connection image and re-saturated.  Each enlargement strictly increases
a step's rank, so the loop terminates well inside its guard; the output is
certified against the contract (transversality, saturated steps, graded
semistability for rank <= 2) rather than trusted from the construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .cartier import canonical_lift, inverse_cartier
from .exact import polymat
from .exact.laurent import Laurent
from .exact.linalg import det as fp_det
from .exact.linalg import kernel_basis
from .exact.linalg import rank as fp_rank
from .exact.lmat import lmat_from_xpoly, lmat_from_ypoly, lmat_mul
from .exact.poly import Poly, RatFun
from .exact.rings import Fp
from .exact.rmat import (rmat_add, rmat_deriv, rmat_from_lmat,
                         rmat_from_pmat, rmat_inverse, rmat_mul, rmat_vec)
from .loghiggs import (HodgeSystem, LogConnectionP1, LogHiggsBundleP1,
                       _block_of, _flag_frames, _graded_semistability,
                       _projective_reps, check_hodge_system, higgs_bundle,
                       nilpotency_level, residue)
from .p1 import (P1Bundle, birkhoff_split, degree_and_slope, global_sections,
                 hn_filtration_plain, line_subbundle_degree, sub_adapted)


# -- Simpson filtration ---------------------------------------------------------

@dataclass(frozen=True)
class SimpsonStep:
    rank: int
    degree: int
    basis: tuple  # saturated chart-0 basis columns


@dataclass(frozen=True)
class SimpsonReport:
    """Decreasing filtration S^1 > S^2 > ... (proper steps only; S^0 is the
    whole bundle) together with its graded Higgs object."""

    status: str              # "ok" | "unresolved"
    steps: tuple
    graded: HodgeSystem | None
    iterations: int
    certified: bool          # exact semistability decision available
    alternatives: tuple = ()


def _cols_mat(cols, r):
    return [[cols[c][i] for c in range(len(cols))] for i in range(r)]


def _nabla_image(con: LogConnectionP1, cols):
    """b*(s' + A0 s) for chart-0 polynomial columns s, b the boundary
    polynomial; the log condition makes every entry polynomial again."""
    bnd = RatFun(con.divisor.boundary_poly())
    a0 = [list(row) for row in con.a0]
    out = []
    for s in cols:
        w = rmat_vec(a0, [RatFun(e) for e in s])
        img = []
        for e, we in zip(s, w):
            f = bnd * (RatFun(e.deriv()) + we)
            if not f.den.is_one():
                raise AssertionError("cleared connection image is not "
                                     "polynomial")
            img.append(f.num)
        out.append(img)
    return out


def _contains_all(step, vectors):
    return all(polymat.submodule_contains(step, list(v)) for v in vectors)


def _step_degree(b: P1Bundle, cols) -> int:
    fr = sub_adapted(b, [tuple(c) for c in cols])
    sub = P1Bundle.from_rows(b.p, fr.t_sub)
    return degree_and_slope(sub)[0]


def _graded_of_flag(con: LogConnectionP1, flag, guard: int = 10 ** 6):
    """Graded Higgs bundle of a transversal filtration, presented as the
    increasing flag of proper saturated chart-0 steps.

    Block order is reversed at the end so the graded field lowers the piece
    index by one, matching the Hodge-system convention.
    """
    b = con.bundle
    p, r = b.p, b.rank
    cuts = [0] + [len(F) for F in flag] + [r]
    B0, B1y = _flag_frames(b, [[tuple(c) for c in F] for F in flag])
    B1inv = lmat_from_ypoly(polymat.pmat_inverse([list(rw) for rw in B1y]))
    Tt = lmat_mul(B1inv, lmat_mul(b.matrix(), lmat_from_xpoly(B0)))
    B0r = rmat_from_pmat(B0)
    a_ad = rmat_mul(rmat_inverse(B0r),
                    rmat_add(rmat_mul([list(rw) for rw in con.a0], B0r),
                             rmat_deriv(B0r)))
    for i in range(r):
        for j in range(r):
            bi, bj = _block_of(cuts, i), _block_of(cuts, j)
            if bi > bj and not Tt[i][j].is_zero():
                raise AssertionError("flag frames are not adapted")
            if bi > bj + 1 and not a_ad[i][j].is_zero():
                raise AssertionError("adapted connection violates "
                                     "transversality")
    perm = [i for k in range(len(cuts) - 1, 0, -1)
            for i in range(cuts[k - 1], cuts[k])]
    Tgr = [[Tt[pi][pj] if _block_of(cuts, pi) == _block_of(cuts, pj)
            else Laurent.zero(p) for pj in perm] for pi in perm]
    th = [[a_ad[pi][pj]
           if _block_of(cuts, pi) == _block_of(cuts, pj) + 1
           else RatFun.zero(p) for pj in perm] for pi in perm]
    ranks = tuple(cuts[k + 1] - cuts[k]
                  for k in range(len(cuts) - 2, -1, -1))
    # renormalize every block to its diagonal presentation: a block-diagonal
    # frame change keeps the piece structure, and without it the matrix
    # degrees carried along a flow would be multiplied by p at each step
    rcuts = [0]
    for rk in ranks:
        rcuts.append(rcuts[-1] + rk)
    entries = []
    wrows = [[Poly.zero(p)] * r for _ in range(r)]
    for k in range(len(rcuts) - 1):
        rng = range(rcuts[k], rcuts[k + 1])
        blk = [[Tgr[i][j] for j in rng] for i in rng]
        tk, _, Vk = birkhoff_split(P1Bundle.from_rows(p, blk))
        entries.extend(tk.entries)
        for bi, i in enumerate(rng):
            for bj, j in enumerate(rng):
                wrows[i][j] = Vk[bi][bj].to_poly_x()
    w0 = rmat_from_pmat(wrows)
    th = rmat_mul(rmat_inverse(w0), rmat_mul(th, w0))
    graded = higgs_bundle(P1Bundle.of_type(p, tuple(entries)),
                          con.divisor, th)
    hs = HodgeSystem(graded, ranks, _graded_semistability(graded, guard))
    check_hodge_system(hs)
    return hs


def _alternative_filtrations(con: LogConnectionP1, flag, limit: int = 6):
    """Probe for contract-compliant filtrations other than the one chosen.

    Rank 2 only: every line sub-bundle of degree between the slope and the
    maximal one gives a transversal two-step filtration, compliant whenever
    its graded object is semistable.  The first find per degree is reported;
    the search is a disclosure, not an enumeration of all of them.
    """
    b = con.bundle
    p, r = b.p, b.rank
    if r != 2:
        return ()
    deg, mu = degree_and_slope(b)
    chosen = flag[0] if flag else None
    types, _, _ = birkhoff_split(b)
    found = []
    for d in range(types.entries[0], -(-deg // 2) - 1, -1):
        secs = global_sections(b, -d)
        if not secs:
            continue
        tried = 0
        for coeffs in _projective_reps(p, len(secs)):
            if tried >= limit:
                break
            tried += 1
            s = tuple(sum((c * sec[i] for c, sec in zip(coeffs, secs)),
                          Poly.zero(p)) for i in range(2))
            g = s[0].gcd(s[1])
            prim = tuple(e // g for e in s)
            if line_subbundle_degree(b, prim) != d:
                continue
            cand = polymat.saturate(_cols_mat([list(prim)], 2))
            if chosen is not None and cand == chosen:
                continue
            hs = _graded_of_flag(con, [cand])
            if getattr(hs.semistability, "status", "") == "semistable":
                found.append(f"two-step filtration through a degree-{d} "
                             f"line sub-bundle")
                break
    return tuple(found)


def simpson_filtration(con: LogConnectionP1, guard: int = 50,
                       probe_alternatives: bool = True) -> SimpsonReport:
    b = con.bundle
    p, r = b.p, b.rank
    if r > p:
        raise ValueError(f"rank {r} exceeds the prime {p}")
    hn = hn_filtration_plain(b)
    flag = [polymat.saturate(_cols_mat([list(c) for c in step.basis], r))
            for step in hn.steps[:-1]]
    stable = False
    its = 0
    while its < guard:
        its += 1
        viol = None
        for j in range(len(flag) - 1):
            img = _nabla_image(con, flag[j])
            if not _contains_all(flag[j + 1], img):
                viol = j
                break
        if viol is None:
            if flag:
                # the top step maps into the whole module exactly when the
                # cleared image is polynomial, which this call asserts
                _nabla_image(con, flag[-1])
            stable = True
            break
        img = _nabla_image(con, flag[viol])
        gens = [list(c) for c in flag[viol + 1]] + [list(v) for v in img]
        flag[viol + 1] = polymat.saturate(_cols_mat(gens, r))
        for k in range(viol + 2, len(flag)):
            if not _contains_all(flag[k], flag[k - 1]):
                gens = [list(c) for c in flag[k]] + \
                       [list(c) for c in flag[k - 1]]
                flag[k] = polymat.saturate(_cols_mat(gens, r))
        flag = [F for i, F in enumerate(flag)
                if len(F) < r and (i + 1 == len(flag)
                                   or F != flag[i + 1])]
    steps = tuple(SimpsonStep(len(F), _step_degree(b, F),
                              tuple(tuple(c) for c in F))
                  for F in reversed(flag))
    if not stable:
        return SimpsonReport("unresolved", steps, None, its, False)
    hs = _graded_of_flag(con, flag)
    alts = (_alternative_filtrations(con, flag)
            if probe_alternatives else ())
    return SimpsonReport("ok", steps, hs, its, r <= 2, alts)


# -- flow states ----------------------------------------------------------------

@dataclass(frozen=True)
class FlowState:
    index: int
    higgs: LogHiggsBundleP1
    connection: LogConnectionP1
    higgs_type: tuple
    conn_type: tuple
    level: int
    semistability: object
    simpson: SimpsonReport | None
    lifts: tuple

    @property
    def p(self) -> int:
        return self.higgs.p


def _resolve_lifts(divisor, lifts):
    if lifts is None:
        return (canonical_lift(divisor, 0), canonical_lift(divisor, 1))
    l0, l1 = lifts
    return (l0, l1)


def _make_state(index, hb, lifts, simpson, guard):
    v = inverse_cartier(hb, lifts[0], lifts[1])
    te, _, _ = birkhoff_split(hb.bundle)
    tv, _, _ = birkhoff_split(v.bundle)
    return FlowState(index, hb, v, te.entries, tv.entries,
                     nilpotency_level(hb), _graded_semistability(hb, guard),
                     simpson, lifts)


def flow_start(hb: LogHiggsBundleP1, lifts=None,
               guard: int = 10 ** 6) -> FlowState:
    lifts = _resolve_lifts(hb.divisor, lifts)
    return _make_state(0, hb, lifts, None, guard)


def flow_step(state: FlowState, lifts=None, guard: int = 50) -> FlowState:
    """One step: grade the Simpson filtration of the flat side and divide
    by Frobenius again.  The lifting pair is pinned at flow start."""
    if lifts is not None:
        lifts = _resolve_lifts(state.higgs.divisor, lifts)
        if lifts != state.lifts:
            raise ValueError("liftings are fixed along the whole flow")
    rep = simpson_filtration(state.connection, guard)
    if rep.status != "ok":
        raise ValueError(f"simpson filtration unresolved after "
                         f"{rep.iterations} refinements")
    nxt = rep.graded.higgs
    p = state.p
    d_e = degree_and_slope(state.higgs.bundle)[0]
    d_v = degree_and_slope(state.connection.bundle)[0]
    d_n = degree_and_slope(nxt.bundle)[0]
    if d_v != p * d_e or d_n != d_v:
        raise AssertionError("degree scaling failed along the step")
    if nxt.rank != state.higgs.rank:
        raise AssertionError("rank changed along the step")
    return _make_state(state.index + 1, nxt, state.lifts, rep, 10 ** 6)


def splitting_bound(rank: int, divisor) -> Fraction:
    """Half of (rank - 1) times the log degree: splitting types of a
    degree-0 semistable flow stay inside [-bound, bound]."""
    return Fraction((rank - 1) * (len(divisor.points) - 2), 2)


# -- isomorphism of Higgs bundles and periodicity --------------------------------

def _split_frame_field(hb: LogHiggsBundleP1, V):
    Vr = rmat_from_lmat(V)
    return rmat_mul(rmat_mul(rmat_inverse(Vr),
                             [list(row) for row in hb.theta0]), Vr)


def higgs_isomorphic(h1: LogHiggsBundleP1, h2: LogHiggsBundleP1,
                     enum_guard: int = 200000):
    """True / False exactly, or None when the intertwiner search would
    exceed the enumeration guard.

    Both bundles are put in Birkhoff frames; an isomorphism is then a
    degree-bounded polynomial matrix g with g theta1 = theta2 g and
    constant nonzero determinant, and the set of intertwining g is a linear
    space searched exhaustively.
    """
    if h1.p != h2.p or h1.rank != h2.rank or h1.divisor != h2.divisor:
        return False
    if h1 == h2:
        return True
    p, r = h1.p, h1.rank
    F = Fp(p)
    t1, _, V1 = birkhoff_split(h1.bundle)
    t2, _, V2 = birkhoff_split(h2.bundle)
    if t1.entries != t2.entries:
        return False
    for pt in h1.divisor.points:
        r1 = fp_rank(F, residue(h1, pt))
        r2 = fp_rank(F, residue(h2, pt))
        if r1 != r2:
            return False
    a = t1.entries
    bnd = RatFun(h1.divisor.boundary_poly())
    P1m = []
    P2m = []
    for src, dst in ((_split_frame_field(h1, V1), P1m),
                     (_split_frame_field(h2, V2), P2m)):
        for row in src:
            got = []
            for e in row:
                f = bnd * e
                if not f.den.is_one():
                    raise AssertionError("split-frame field has a pole off "
                                         "the divisor")
                got.append(f.num)
            dst.append(got)
    if P1m == P2m:
        return True  # the identity intertwines
    # unknown coefficients of g: entry (i, j) has degree <= a_i - a_j
    slots = []
    for i in range(r):
        for j in range(r):
            for k in range(a[i] - a[j] + 1):
                slots.append((i, j, k))
    nslots = len(slots)
    pdeg = max((e.degree for row in P1m + P2m for e in row
                if not e.is_zero()), default=0)
    gdeg = max(a) - min(a)
    rows = []
    for i in range(r):
        for j in range(r):
            for dcoef in range(pdeg + gdeg + 1):
                row = [0] * nslots
                for s, (si, sj, sk) in enumerate(slots):
                    if si == i:  # g[i][sj] P1[sj][j], pick x^(dcoef-sk)
                        row[s] = (row[s] + P1m[sj][j][dcoef - sk]) % p
                    if sj == j:  # P2[i][si] g[si][j]
                        row[s] = (row[s] - P2m[i][si][dcoef - sk]) % p
                if any(row):
                    rows.append(row)
    if not rows:
        basis = [[1 if t == s else 0 for t in range(nslots)]
                 for s in range(nslots)]
    else:
        basis = kernel_basis(F, rows)
    w = len(basis)
    if w == 0:
        return False

    def g0_of(coeffs):
        g = [[0] * r for _ in range(r)]
        for t, c in enumerate(coeffs):
            if c:
                for s, (si, sj, sk) in enumerate(slots):
                    if sk == 0 and basis[t][s]:
                        g[si][sj] = (g[si][sj] + c * basis[t][s]) % p
        return g

    # the determinant of a degree-bounded endomorphism is constant, so
    # invertibility is decided at x = 0
    for t in range(w):
        cand = [0] * w
        cand[t] = 1
        if fp_det(F, g0_of(cand)) != 0:
            return True
    if p ** w - 1 > enum_guard:
        return None
    for coeffs in product(range(p), repeat=w):
        if not any(coeffs):
            continue
        if fp_det(F, g0_of(coeffs)) != 0:
            return True
    return False


@dataclass(frozen=True)
class PeriodReport:
    status: str              # "periodic" | "no period" | "undecided"
    period: int | None
    preperiod: int | None
    orbit: tuple             # splitting types per step, initial first
    states: tuple
    reason: str
    bound: Fraction
    bound_ok: bool


def detect_periodicity(initial: LogHiggsBundleP1, lifts=None,
                       max_iter: int = 10,
                       enum_guard: int = 200000) -> PeriodReport:
    """Run the flow and report the first recurrence up to isomorphism."""
    bound = splitting_bound(initial.rank, initial.divisor)
    deg, _ = degree_and_slope(initial.bundle)
    t0, _, _ = birkhoff_split(initial.bundle)
    if deg != 0:
        return PeriodReport(
            "no period", None, None, (t0.entries,), (),
            f"degree diverges: deg E = {deg} is multiplied by p at every "
            f"step", bound,
            all(abs(e) <= bound for e in t0.entries))
    states = [flow_start(initial, lifts)]
    undecided = []
    verdict = None
    for i in range(1, max_iter + 1):
        nxt = flow_step(states[-1])
        for j, old in enumerate(states):
            iso = higgs_isomorphic(old.higgs, nxt.higgs, enum_guard)
            if iso is True:
                states.append(nxt)
                verdict = ("periodic", i - j, j,
                           f"state {i} is isomorphic to state {j}")
                break
            if iso is None:
                undecided.append((j, i))
        else:
            states.append(nxt)
            continue
        break
    orbit = tuple(st.higgs_type for st in states)
    ok = all(abs(e) <= bound for t in orbit for e in t)
    if verdict is not None:
        status, period, pre, reason = verdict
        return PeriodReport(status, period, pre, orbit, tuple(states),
                            reason, bound, ok)
    if undecided:
        return PeriodReport(
            "undecided", None, None, orbit, tuple(states),
            f"isomorphism search exceeded the guard for state pairs "
            f"{undecided}", bound, ok)
    return PeriodReport(
        "no period", None, None, orbit, tuple(states),
        f"no recurrence within {max_iter} steps", bound, ok)
