# cython: language_level=3, boundscheck=False, wraparound=False
"""Reduced row echelon form over the rationals backed by GMP mpq_t."""

from fractions import Fraction
from libc.stdlib cimport malloc, free

cdef extern from "gmp.h":
    ctypedef struct __mpz_struct:
        pass
    ctypedef struct __mpq_struct:
        pass
    ctypedef __mpz_struct* mpz_ptr
    ctypedef __mpq_struct* mpq_ptr
    void mpq_init(mpq_ptr)
    void mpq_clear(mpq_ptr)
    void mpq_set(mpq_ptr, mpq_ptr)
    void mpq_set_si(mpq_ptr, long, unsigned long)
    int mpq_set_str(mpq_ptr, const char*, int)
    void mpq_canonicalize(mpq_ptr)
    void mpq_mul(mpq_ptr, mpq_ptr, mpq_ptr)
    void mpq_sub(mpq_ptr, mpq_ptr, mpq_ptr)
    void mpq_inv(mpq_ptr, mpq_ptr)
    int mpq_sgn(mpq_ptr)
    int mpq_cmp_si(mpq_ptr, long, unsigned long)
    mpz_ptr mpq_numref(mpq_ptr)
    mpz_ptr mpq_denref(mpq_ptr)
    int mpz_fits_slong_p(mpz_ptr)
    long mpz_get_si(mpz_ptr)
    char* mpz_get_str(char*, int, mpz_ptr)

_SMALL = 1 << 62


cdef inline void _load(mpq_ptr dst, object x) except *:
    cdef object num, den
    if isinstance(x, int):
        num, den = x, 1
    else:
        num, den = x.numerator, x.denominator
    if -_SMALL < num < _SMALL and den < _SMALL:
        mpq_set_si(dst, num, den)
    else:
        s = (str(num) + "/" + str(den)).encode()
        mpq_set_str(dst, s, 10)
        mpq_canonicalize(dst)


cdef object _zint(mpz_ptr z):
    cdef char* buf
    if mpz_fits_slong_p(z):
        return mpz_get_si(z)
    buf = mpz_get_str(NULL, 10, z)
    try:
        return int(buf.decode())
    finally:
        free(buf)


cdef object _store(mpq_ptr src):
    return Fraction(_zint(mpq_numref(src)), _zint(mpq_denref(src)))


def rref(rows, Py_ssize_t ncols):
    """Gauss-Jordan elimination; same contract as the pure-Python kernel."""
    rows = [row_ for row_ in rows if any(row_)]
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t total = nrows * ncols
    cdef Py_ssize_t i, j, c, r, piv, pr, ri
    if nrows == 0 or ncols == 0:
        return [], []
    cdef __mpq_struct* a = <__mpq_struct*>malloc(total * sizeof(__mpq_struct))
    cdef Py_ssize_t* perm = <Py_ssize_t*>malloc(nrows * sizeof(Py_ssize_t))
    cdef __mpq_struct tmp_s
    cdef __mpq_struct inv_s
    cdef mpq_ptr tmp = &tmp_s
    cdef mpq_ptr inv = &inv_s
    if a == NULL or perm == NULL:
        free(a)
        free(perm)
        raise MemoryError()
    for i in range(total):
        mpq_init(&a[i])
    mpq_init(tmp)
    mpq_init(inv)
    pivots = []
    try:
        for i in range(nrows):
            perm[i] = i
            row = rows[i]
            for j in range(ncols):
                x = row[j]
                if x:
                    _load(&a[i * ncols + j], x)
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            piv = -1
            for i in range(r, nrows):
                if mpq_sgn(&a[perm[i] * ncols + c]) != 0:
                    piv = i
                    break
            if piv < 0:
                continue
            perm[r], perm[piv] = perm[piv], perm[r]
            pr = perm[r] * ncols
            if mpq_cmp_si(&a[pr + c], 1, 1) != 0:
                mpq_inv(inv, &a[pr + c])
                for j in range(c, ncols):
                    if mpq_sgn(&a[pr + j]) != 0:
                        mpq_mul(&a[pr + j], &a[pr + j], inv)
            for i in range(nrows):
                if i == r:
                    continue
                ri = perm[i] * ncols
                if mpq_sgn(&a[ri + c]) == 0:
                    continue
                mpq_set(inv, &a[ri + c])
                for j in range(c, ncols):
                    if mpq_sgn(&a[pr + j]) != 0:
                        mpq_mul(tmp, inv, &a[pr + j])
                        mpq_sub(&a[ri + j], &a[ri + j], tmp)
            pivots.append(c)
            r += 1
        out = []
        zero = Fraction(0)
        for i in range(r):
            pr = perm[i] * ncols
            out_row = [zero] * ncols
            for j in range(ncols):
                if mpq_sgn(&a[pr + j]) != 0:
                    out_row[j] = _store(&a[pr + j])
            out.append(out_row)
        return out, pivots
    finally:
        for i in range(total):
            mpq_clear(&a[i])
        mpq_clear(tmp)
        mpq_clear(inv)
        free(a)
        free(perm)
