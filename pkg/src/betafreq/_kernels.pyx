# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled orbit kernels; contracts match ``betafreq._pykernels``."""

from libc.math cimport fabs

DEF MAX_CUTS = 256

cdef extern from *:
    """
    typedef __int128 i128_t;
    static inline i128_t bf_make128(long long hi, unsigned long long lo) {
        return (i128_t)(((unsigned __int128)(i128_t)hi << 64) | (unsigned __int128)lo);
    }
    static inline long long bf_hi64(i128_t v) { return (long long)(v >> 64); }
    static inline unsigned long long bf_lo64(i128_t v) { return (unsigned long long)v; }
    static inline i128_t bf_floordiv(i128_t a, i128_t b) {
        i128_t q = a / b;
        if ((a % b != 0) && ((a < 0) != (b < 0))) q -= 1;
        return q;
    }
    """
    ctypedef long long i128_t
    i128_t bf_make128(long long hi, unsigned long long lo)
    long long bf_hi64(i128_t v)
    unsigned long long bf_lo64(i128_t v)
    i128_t bf_floordiv(i128_t a, i128_t b)

DONE = 0
AMBIG_DIGIT = 1
AMBIG_BOUND = 2
OVERFLOW = 3
INFEASIBLE = 4

NAME = "cython"

#: Largest bit width a window value may have in ``window_run``.
WINDOW_BITS = 126

cdef object _MASK64 = (1 << 64) - 1


cdef inline i128_t _to128(object v):
    return bf_make128(<long long>(v >> 64), <unsigned long long>(v & _MASK64))


cdef inline object _from128(i128_t v):
    return (<object>bf_hi64(v) << 64) | <object>bf_lo64(v)


def lattice_run(long long[::1] Y, long long D, long long[::1] rec, double[::1] bpow,
                double[::1] cut_lo, double[::1] cut_hi, double h_lo, double h_hi,
                const unsigned char[::1] forced, unsigned char[::1] out,
                Py_ssize_t start, Py_ssize_t stop, bint skip_check,
                long long[::1] hist, double hist_scale, double errf, long long limit):
    cdef Py_ssize_t d = Y.shape[0]
    cdef Py_ssize_t ncut = cut_lo.shape[0]
    cdef Py_ssize_t nbins = 0
    cdef bint has_forced = forced is not None
    cdef bint has_hist = hist is not None
    cdef double inv_d = 1.0 / <double>D
    cdef Py_ssize_t i = start, j, b
    cdef bint check = not skip_check
    cdef double s, a, t, yv, err, lo, hi
    cdef long long top, v
    cdef int k
    if has_hist:
        nbins = hist.shape[0]
    while True:
        s = 0.0
        a = 0.0
        for j in range(d):
            t = <double>Y[j] * bpow[j]
            s += t
            a += fabs(t)
        yv = s * inv_d
        err = errf * a * inv_d
        if check:
            if yv + err < 0.0 or yv - err > h_hi:
                return i, INFEASIBLE
            if has_forced and (yv - err < 0.0 or yv + err > h_lo):
                return i, AMBIG_BOUND
        check = True
        if i == stop:
            return i, DONE
        for j in range(d):
            v = Y[j]
            if v > limit or -v > limit:
                return i, OVERFLOW
        if has_hist:
            b = <Py_ssize_t>(yv * hist_scale)
            if b < 0:
                b = 0
            elif b >= nbins:
                b = nbins - 1
            hist[b] += 1
        if not has_forced:
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
        out[i] = <unsigned char>k
        i += 1


def window_run(object lo_o, object hi_o, int W, long long P, long long Q,
               list cl_o, list ch_o, object hl_o, object hh_o,
               const unsigned char[::1] forced, unsigned char[::1] out,
               Py_ssize_t start, Py_ssize_t stop, bint skip_check):
    """128-bit window iteration. Callers guarantee ``P * 2**(W+2) < 2**126``."""
    cdef i128_t cl[MAX_CUTS]
    cdef i128_t ch[MAX_CUTS]
    cdef Py_ssize_t ncut = len(cl_o)
    cdef Py_ssize_t i = start, j
    cdef bint has_forced = forced is not None
    cdef bint check = not skip_check
    cdef i128_t lo = _to128(lo_o), hi = _to128(hi_o)
    cdef i128_t hl = _to128(hl_o), hh = _to128(hh_o)
    cdef i128_t p = <i128_t>P, q = <i128_t>Q, shift
    cdef int k
    cdef int status
    if ncut > MAX_CUTS:
        raise ValueError("too many cut points for the compiled kernel")
    for j in range(ncut):
        cl[j] = _to128(cl_o[j])
        ch[j] = _to128(ch_o[j])
    while True:
        if check:
            if hi < 0 or lo > hh:
                status = INFEASIBLE
                break
            if has_forced and (lo < 0 or hi > hl):
                status = AMBIG_BOUND
                break
        check = True
        if i == stop:
            status = DONE
            break
        if not has_forced:
            k = 0
            while k < ncut and ch[k] <= lo:
                k += 1
            if k < ncut and cl[k] <= hi:
                status = AMBIG_DIGIT
                break
        else:
            k = forced[i]
        shift = (<i128_t>k) << W
        lo = bf_floordiv(p * lo, q) - shift
        hi = -bf_floordiv(-p * hi, q) - shift
        out[i] = <unsigned char>k
        i += 1
    return i, status, _from128(lo), _from128(hi)
