"""Pure-Python orbit kernels.

Same contracts as the compiled ``_kernels`` extension; used when the
extension is not built or ``BETAFREQ_PURE_PYTHON`` is set. Both kernels stop
and hand control back to the caller whenever a branch decision cannot be
certified, so the caller can settle it exactly.
"""

DONE = 0
AMBIG_DIGIT = 1
AMBIG_BOUND = 2
OVERFLOW = 3
INFEASIBLE = 4

NAME = "python"


def lattice_run(Y, D, rec, bpow, cut_lo, cut_hi, h_lo, h_hi, forced, out,
                start, stop, skip_check, hist, hist_scale, errf, limit):
    """Iterate ``y -> beta*y - k`` on ``y = sum(Y[j] * beta**j) / D``.

    ``Y`` is a list of ints, updated in place; ``rec`` holds the coefficients
    of ``beta**d`` in the power basis. Digits are chosen by the cut enclosures
    ``[cut_lo[j], cut_hi[j]]`` unless ``forced`` supplies them. Returns
    ``(position, status)``; on a non-DONE status ``Y`` is the state at
    ``position`` and no digit has been written there.
    """
    d = len(Y)
    ncut = len(cut_lo)
    inv_d = 1.0 / D
    i = start
    check = not skip_check
    while True:
        s = 0.0
        a = 0.0
        for j in range(d):
            t = Y[j] * bpow[j]
            s += t
            a += abs(t)
        yv = s * inv_d
        err = errf * a * inv_d
        if check:
            if yv + err < 0.0 or yv - err > h_hi:
                return i, INFEASIBLE
            if forced is not None and (yv - err < 0.0 or yv + err > h_lo):
                return i, AMBIG_BOUND
        check = True
        if i == stop:
            return i, DONE
        if limit:
            for v in Y:
                if v > limit or -v > limit:
                    return i, OVERFLOW
        if hist is not None:
            b = int(yv * hist_scale)
            if b < 0:
                b = 0
            elif b >= len(hist):
                b = len(hist) - 1
            hist[b] += 1
        if forced is None:
            lo = yv - err
            hi = yv + err
            k = 0
            while k < ncut and cut_hi[k] <= lo:
                k += 1
            if k < ncut and cut_lo[k] <= hi:
                return i, AMBIG_DIGIT
        else:
            k = forced[i]
        top = Y[d - 1]
        for j in range(d - 1, 0, -1):
            Y[j] = Y[j - 1] + rec[j] * top
        Y[0] = rec[0] * top - k * D
        out[i] = k
        i += 1


def window_run(lo, hi, W, P, Q, cl, ch, hl, hh, forced, out, start, stop, skip_check):
    """Iterate ``y -> (P/Q)*y - k`` on the enclosure ``[lo, hi] / 2**W``.

    ``cl``/``ch`` are integer enclosures of the cut points at scale
    ``2**W``, ``hl``/``hh`` of the interval's right end. Returns
    ``(position, status, lo, hi)``.
    """
    ncut = len(cl)
    i = start
    check = not skip_check
    while True:
        if check:
            if hi < 0 or lo > hh:
                return i, INFEASIBLE, lo, hi
            if forced is not None and (lo < 0 or hi > hl):
                return i, AMBIG_BOUND, lo, hi
        check = True
        if i == stop:
            return i, DONE, lo, hi
        if forced is None:
            k = 0
            while k < ncut and ch[k] <= lo:
                k += 1
            if k < ncut and cl[k] <= hi:
                return i, AMBIG_DIGIT, lo, hi
        else:
            k = forced[i]
        shift = k << W
        lo = (P * lo) // Q - shift
        hi = -((-P * hi) // Q) - shift
        out[i] = k
        i += 1
