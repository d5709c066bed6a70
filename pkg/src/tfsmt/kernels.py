"""Array kernels: CDCL search, batched simulation, conformance and model counting.

Each kernel has a numba-compiled path and a numpy (or plain Python) path.
The compiled path is used unless ``TFSMT_DISABLE_JIT`` is set; pass
``jit=False`` to force the fallback for one call.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import chain

import numpy as np

from ._jit import JIT_ENABLED, njit

# -- CNF arrays ------------------------------------------------------------------


def cnf_arrays(clauses):
    """Flatten signed-int clauses to literal codes ``2v + (x < 0)``."""
    lens = np.fromiter((len(c) for c in clauses), dtype=np.int32, count=len(clauses))
    flat = np.fromiter(chain.from_iterable(clauses), dtype=np.int64, count=int(lens.sum()))
    codes = (2 * np.abs(flat) + (flat < 0)).astype(np.int32)
    starts = np.zeros(len(lens), dtype=np.int64)
    if len(lens) > 1:
        np.cumsum(lens[:-1], out=starts[1:])
    return codes, starts, lens


def clauses_satisfied(codes, starts, lens, values) -> bool:
    """``values[v]`` is the truth value of variable ``v`` (index 0 unused)."""
    if len(lens) == 0:
        return True
    if (lens == 0).any():
        return False
    truth = values[codes >> 1] != (codes & 1).astype(bool)
    return bool(np.logical_or.reduceat(truth, starts).all())


def _cdcl_loop(n, codes, starts, lens):
    m = lens.shape[0]
    cap_lits = codes.shape[0] * 2 + 1024
    lits = np.empty(cap_lits, np.int32)
    lits[: codes.shape[0]] = codes
    nlits = codes.shape[0]
    cap_cl = 2 * m + 1024
    cstart = np.empty(cap_cl, np.int64)
    clen = np.empty(cap_cl, np.int32)
    cstart[:m] = starts
    clen[:m] = lens
    ncl = m
    wnext = np.full(2 * cap_cl, -1, np.int64)
    whead = np.full(2 * n + 2, -1, np.int64)
    litval = np.zeros(2 * n + 2, np.int8)
    level = np.zeros(n + 1, np.int32)
    reason = np.full(n + 1, -1, np.int64)
    trail = np.empty(n + 1, np.int32)
    lim = np.empty(n + 1, np.int64)
    seen = np.zeros(n + 1, np.uint8)
    learnt = np.empty(n + 1, np.int32)
    model = np.zeros(n + 1, np.bool_)
    tsz = 0
    nlim = 0

    for c in range(m):
        if clen[c] == 0:
            return False, model
        if clen[c] == 1:
            p = lits[cstart[c]]
            if litval[p] == -1:
                return False, model
            if litval[p] == 0:
                litval[p] = 1
                litval[p ^ 1] = -1
                level[p >> 1] = 0
                reason[p >> 1] = -1
                trail[tsz] = p
                tsz += 1
        else:
            for slot in range(2):
                key = lits[cstart[c] + slot] ^ 1
                wnext[2 * c + slot] = whead[key]
                whead[key] = 2 * c + slot

    qhead = 0
    next_var = 1
    while True:
        confl = -1
        while qhead < tsz and confl == -1:
            p = trail[qhead]
            qhead += 1
            prev = -1
            node = whead[p]
            while node != -1:
                nxt = wnext[node]
                c = node >> 1
                slot = node & 1
                base = cstart[c]
                other = lits[base + 1 - slot]
                if litval[other] == 1:
                    prev = node
                    node = nxt
                    continue
                moved = False
                for k in range(2, clen[c]):
                    q = lits[base + k]
                    if litval[q] != -1:
                        lits[base + k] = lits[base + slot]
                        lits[base + slot] = q
                        if prev == -1:
                            whead[p] = nxt
                        else:
                            wnext[prev] = nxt
                        key = q ^ 1
                        wnext[node] = whead[key]
                        whead[key] = node
                        moved = True
                        break
                if moved:
                    node = nxt
                    continue
                if litval[other] == -1:
                    confl = c
                    break
                litval[other] = 1
                litval[other ^ 1] = -1
                level[other >> 1] = nlim
                reason[other >> 1] = c
                trail[tsz] = other
                tsz += 1
                prev = node
                node = nxt

        if confl != -1:
            if nlim == 0:
                return False, model
            # first-UIP analysis
            nl = 1
            path = 0
            p = -1
            idx = tsz - 1
            c = confl
            while True:
                base = cstart[c]
                for j in range(clen[c]):
                    q = lits[base + j]
                    if q == p:
                        continue
                    v = q >> 1
                    if seen[v] == 0 and level[v] > 0:
                        seen[v] = 1
                        if level[v] >= nlim:
                            path += 1
                        else:
                            learnt[nl] = q
                            nl += 1
                while seen[trail[idx] >> 1] == 0:
                    idx -= 1
                p = trail[idx]
                idx -= 1
                seen[p >> 1] = 0
                path -= 1
                if path == 0:
                    break
                c = reason[p >> 1]
            learnt[0] = p ^ 1
            for j in range(1, nl):
                seen[learnt[j] >> 1] = 0
            back = 0
            if nl > 1:
                best = 1
                for j in range(2, nl):
                    if level[learnt[j] >> 1] > level[learnt[best] >> 1]:
                        best = j
                tmp = learnt[1]
                learnt[1] = learnt[best]
                learnt[best] = tmp
                back = level[learnt[1] >> 1]
            # backtrack
            start = lim[back]
            for j in range(start, tsz):
                v = trail[j] >> 1
                litval[2 * v] = 0
                litval[2 * v + 1] = 0
                reason[v] = -1
            tsz = start
            nlim = back
            qhead = tsz
            p = learnt[0]
            if nl == 1:
                reason[p >> 1] = -1
            else:
                if ncl >= cap_cl:
                    cap_cl *= 2
                    a = np.empty(cap_cl, np.int64)
                    a[:ncl] = cstart[:ncl]
                    cstart = a
                    b = np.empty(cap_cl, np.int32)
                    b[:ncl] = clen[:ncl]
                    clen = b
                    w = np.full(2 * cap_cl, -1, np.int64)
                    w[: 2 * ncl] = wnext[: 2 * ncl]
                    wnext = w
                if nlits + nl > cap_lits:
                    cap_lits = 2 * cap_lits + nl
                    a2 = np.empty(cap_lits, np.int32)
                    a2[:nlits] = lits[:nlits]
                    lits = a2
                c = ncl
                ncl += 1
                cstart[c] = nlits
                clen[c] = nl
                for j in range(nl):
                    lits[nlits + j] = learnt[j]
                nlits += nl
                for slot in range(2):
                    key = learnt[slot] ^ 1
                    wnext[2 * c + slot] = whead[key]
                    whead[key] = 2 * c + slot
                reason[p >> 1] = c
            litval[p] = 1
            litval[p ^ 1] = -1
            level[p >> 1] = nlim
            trail[tsz] = p
            tsz += 1
            next_var = 1
            continue

        while next_var <= n and litval[2 * next_var] != 0:
            next_var += 1
        if next_var > n:
            for v in range(1, n + 1):
                model[v] = litval[2 * v] == 1
            return True, model
        lim[nlim] = tsz
        nlim += 1
        p = 2 * next_var + 1  # branch on False
        litval[p] = 1
        litval[p ^ 1] = -1
        level[next_var] = nlim
        reason[next_var] = -1
        trail[tsz] = p
        tsz += 1


_cdcl_jit = njit(_cdcl_loop)


def cdcl_arrays(n: int, codes, starts, lens, jit: bool | None = None):
    """Array CDCL; returns ``(sat, values)`` with ``values[v]`` for ``v`` in ``1..n``."""
    fn = _cdcl_jit if (jit is not False and _cdcl_jit is not None) else _cdcl_loop
    sat, values = fn(np.int64(n), codes, starts, lens)
    return bool(sat), values


# -- machine tables ----------------------------------------------------------------


class MachineTables:
    """Dense transition tables of ``K`` deterministic machines over a common state set.

    ``to_val`` holds ``-1`` for an infinite timeout.  States a machine does not
    reach get inert entries (self loops, output ``-1``).
    """

    def __init__(self, machines):
        machines = list(machines)
        if not machines:
            raise ValueError("need at least one machine")
        root = machines[0].root
        K, S, I = len(machines), len(root.states), len(root.inputs)
        self.io_dst = np.tile(np.arange(S, dtype=np.int32)[None, :, None], (K, 1, I))
        self.io_out = np.full((K, S, I), -1, dtype=np.int32)
        self.to_val = np.full((K, S), -1, dtype=np.int64)
        self.to_dst = np.tile(np.arange(S, dtype=np.int32), (K, 1))
        self.initial = root.initial
        for k, sel in enumerate(machines):
            for t in sel.transitions:
                if t.kind == "io":
                    self.io_dst[k, t.src, t.inp] = t.dst
                    self.io_out[k, t.src, t.inp] = t.out
                else:
                    self.to_val[k, t.src] = -1 if t.timeout == math.inf else int(t.timeout)
                    self.to_dst[k, t.src] = t.dst

    def __len__(self):
        return self.io_dst.shape[0]

    @property
    def max_timeout(self) -> int:
        finite = self.to_val[self.to_val >= 0]
        return int(finite.max()) if finite.size else 0


def scaled_test(machine, test):
    """Input indices, integer times and scale factor for a timed sequence."""
    delays = [Fraction(d) for d in test.delays]
    scale = 1
    for d in delays:
        scale = scale * d.denominator // math.gcd(scale, d.denominator)
    inp = np.array([machine.input_index[s] for s in test.symbols], dtype=np.int64)
    times = np.array([int(d * scale) for d in delays], dtype=np.int64)
    return inp, times, scale


def _outputs_loop(io_dst, io_out, to_val, to_dst, init, inp, times, scale):
    K = io_dst.shape[0]
    L = inp.shape[0]
    out = np.empty((K, L), np.int32)
    for k in range(K):
        s = init
        t0 = 0
        for j in range(L):
            T = times[j]
            while True:
                d = to_val[k, s]
                if d < 0 or t0 + d * scale > T:
                    break
                t0 += d * scale
                s = to_dst[k, s]
            out[k, j] = io_out[k, s, inp[j]]
            s = io_dst[k, s, inp[j]]
            t0 = T
    return out


_outputs_jit = njit(_outputs_loop)


def _outputs_numpy(io_dst, io_out, to_val, to_dst, init, inp, times, scale):
    K = io_dst.shape[0]
    rows = np.arange(K)
    s = np.full(K, init, dtype=np.int64)
    t0 = np.zeros(K, dtype=np.int64)
    out = np.empty((K, len(inp)), np.int32)
    for j, (i, T) in enumerate(zip(inp, times)):
        while True:
            d = to_val[rows, s]
            fire = (d >= 0) & (t0 + d * scale <= T)
            if not fire.any():
                break
            t0 = np.where(fire, t0 + d * scale, t0)
            s = np.where(fire, to_dst[rows, s], s)
        out[:, j] = io_out[rows, s, i]
        s = io_dst[rows, s, i].astype(np.int64)
        t0[:] = T
    return out


def batch_outputs(tables: MachineTables, inp, times, scale, jit: bool | None = None):
    """Output symbol indices, shape ``(K, len(test))``."""
    args = (tables.io_dst, tables.io_out, tables.to_val, tables.to_dst, np.int64(tables.initial),
            np.asarray(inp, np.int64), np.asarray(times, np.int64), np.int64(scale))
    if jit is not False and _outputs_jit is not None:
        return _outputs_jit(*args)
    return _outputs_numpy(*args)


def batch_detects(spec_tables: MachineTables, tables: MachineTables, machine, test, jit: bool | None = None):
    """Boolean mask: which of the ``K`` machines ``test`` tells apart from the reference machine."""
    inp, times, scale = scaled_test(machine, test)
    if len(inp) == 0:
        return np.zeros(len(tables), dtype=bool)
    expected = batch_outputs(spec_tables, inp, times, scale, jit)[0]
    got = batch_outputs(tables, inp, times, scale, jit)
    return (got != expected[None, :]).any(axis=1)


# -- conformance -----------------------------------------------------------------


def _conforms_loop(s_io_dst, s_io_out, s_to_val, s_to_dst, io_dst, io_out, to_val, to_dst, init, tmax):
    K, S, I = io_dst.shape
    C = tmax + 2
    INFC = tmax + 1
    BIG = 1 << 40
    N = S * S * C * C
    res = np.ones(K, np.bool_)
    visited = np.zeros(N, np.uint8)
    queue = np.empty(N, np.int64)
    for k in range(K):
        visited[:] = 0
        head = 0
        tail = 0
        start = (init * S + init) * C * C
        visited[start] = 1
        queue[tail] = start
        tail += 1
        ok = True
        while head < tail and ok:
            code = queue[head]
            head += 1
            xm = code % C
            r = code // C
            xs = r % C
            r //= C
            m = r % S
            s = r // S
            for i in range(I):
                if s_io_out[s, i] != io_out[k, m, i]:
                    ok = False
                    break
                nxt = (s_io_dst[s, i] * S + io_dst[k, m, i]) * C * C
                if visited[nxt] == 0:
                    visited[nxt] = 1
                    queue[tail] = nxt
                    tail += 1
            if not ok:
                break
            ds = s_to_val[s]
            dm = to_val[k, m]
            rs = BIG if ds < 0 else ds - xs
            rm = BIG if dm < 0 else dm - xm
            if rs == BIG and rm == BIG:
                continue
            if rs == rm:
                ns, nm, nxs, nxm = s_to_dst[s], to_dst[k, m], 0, 0
            elif rm < rs:
                ns, nm, nxm = s, to_dst[k, m], 0
                nxs = INFC if ds < 0 else xs + rm
            else:
                ns, nm, nxs = s_to_dst[s], m, 0
                nxm = INFC if dm < 0 else xm + rs
            nxt = ((ns * S + nm) * C + nxs) * C + nxm
            if visited[nxt] == 0:
                visited[nxt] = 1
                queue[tail] = nxt
                tail += 1
        res[k] = ok
    return res


_conforms_jit = njit(_conforms_loop)


def _conforms_numpy(s_io_dst, s_io_out, s_to_val, s_to_dst, io_dst, io_out, to_val, to_dst, init, tmax,
                    chunk=256):
    K, S, I = io_dst.shape
    C = tmax + 2
    INFC = tmax + 1
    BIG = 1 << 40
    N = S * S * C * C
    g = np.arange(N)
    xm = g % C
    xs = (g // C) % C
    m = (g // (C * C)) % S
    s = g // (C * C * S)
    ds = s_to_val[s]
    rs = np.where(ds < 0, BIG, ds - xs)
    start = (init * S + init) * C * C
    res = np.ones(K, dtype=bool)
    for lo in range(0, K, chunk):
        ks = np.arange(lo, min(K, lo + chunk))
        B = len(ks)
        bad = np.zeros((B, N), dtype=bool)
        succ = []
        for i in range(I):
            bad |= s_io_out[s, i][None, :] != io_out[ks][:, m, i]
            succ.append((s_io_dst[s, i][None, :] * S + io_dst[ks][:, m, i]) * C * C)
        dm = to_val[ks][:, m]
        rm = np.where(dm < 0, BIG, dm - xm[None, :])
        rs_b = np.broadcast_to(rs, (B, N))
        tdm = to_dst[ks][:, m]
        sdst = np.broadcast_to(s_to_dst[s], (B, N))
        eq = rs_b == rm
        mfirst = rm < rs_b
        ns = np.where(mfirst, s[None, :], sdst)
        nm = np.where(eq | mfirst, tdm, m[None, :])
        nxs = np.where(mfirst, np.where(ds[None, :] < 0, INFC, xs[None, :] + rm), 0)
        nxm = np.where(eq | mfirst, 0, np.where(dm < 0, INFC, xm[None, :] + rs_b))
        nxs = np.minimum(nxs, INFC)
        nxm = np.minimum(nxm, INFC)
        to_next = ((ns * S + nm) * C + nxs) * C + nxm
        to_next = np.where((rs_b == BIG) & (rm == BIG), -1, to_next)
        succ.append(to_next)
        reach = np.zeros((B, N), dtype=bool)
        reach[:, start] = True
        frontier = reach.copy()
        while frontier.any():
            b, c = np.nonzero(frontier)
            new = np.zeros_like(reach)
            for sc in succ:
                t = sc[b, c]
                ok = t >= 0
                new[b[ok], t[ok]] = True
            frontier = new & ~reach
            reach |= new
        res[ks] = ~(reach & bad).any(axis=1)
    return res


def batch_conforms(spec_tables: MachineTables, tables: MachineTables, jit: bool | None = None):
    """Boolean mask: which machines are timed-output equivalent to the reference machine."""
    tmax = max(spec_tables.max_timeout, tables.max_timeout)
    args = (spec_tables.io_dst[0], spec_tables.io_out[0], spec_tables.to_val[0], spec_tables.to_dst[0],
            tables.io_dst, tables.io_out, tables.to_val, tables.to_dst,
            np.int64(tables.initial), np.int64(tmax))
    if jit is not False and _conforms_jit is not None:
        return _conforms_jit(*args)
    return _conforms_numpy(*args)


# -- brute-force model counting ---------------------------------------------------


def _clause_masks(clauses):
    pos = np.zeros(len(clauses), dtype=np.int64)
    neg = np.zeros(len(clauses), dtype=np.int64)
    for k, c in enumerate(clauses):
        for x in c:
            if x > 0:
                pos[k] |= 1 << (x - 1)
            else:
                neg[k] |= 1 << (-x - 1)
    return pos, neg


def _count_loop(pos, neg, n, stop):
    total = 0
    for a in range(1 << n):
        na = ~a
        ok = True
        for c in range(pos.shape[0]):
            if (a & pos[c]) == 0 and (na & neg[c]) == 0:
                ok = False
                break
        if ok:
            total += 1
            if stop:
                break
    return total


_count_jit = njit(_count_loop)


def _count_numpy(pos, neg, n, stop):
    total = 0
    m = max(1, len(pos))
    chunk = max(1, min(1 << n, 4_000_000 // m))
    for lo in range(0, 1 << n, chunk):
        a = np.arange(lo, min(1 << n, lo + chunk), dtype=np.int64)[:, None]
        ok = (((a & pos[None, :]) != 0) | ((~a & neg[None, :]) != 0)).all(axis=1)
        total += int(ok.sum())
        if stop and total:
            return 1
    return total


def count_models(formula, num_vars: int | None = None, stop_at_first: bool = False,
                 jit: bool | None = None) -> int:
    """Number of satisfying assignments over variables ``1..n`` by exhaustive evaluation."""
    n = max(formula.num_vars, num_vars or 0)
    if n > 40:
        raise ValueError(f"{n} variables is too many for exhaustive counting")
    clauses = list(formula.clauses)
    if any(len(c) == 0 for c in clauses):
        return 0
    pos, neg = _clause_masks(clauses)
    if jit is not False and _count_jit is not None:
        return int(_count_jit(pos, neg, np.int64(n), stop_at_first))
    return _count_numpy(pos, neg, n, stop_at_first)


def backend() -> str:
    return "numba" if JIT_ENABLED else "numpy"
