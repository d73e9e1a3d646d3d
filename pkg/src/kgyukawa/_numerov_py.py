"""Pure-Python Numerov kernels (fallback for the compiled core).

The recurrence is written in terms of the weights ``w_i = 1 - h**2 f_i / 12``
for ``u'' = f u``::

    w_{i+1} u_{i+1} = (12 - 10 w_i) u_i - w_{i-1} u_{i-1}

If a value exceeds 1e150 the whole prefix is divided by 1e150, so only the
shape of the solution (not its absolute scale) is meaningful.
"""
import numpy as np

_BIG = 1e150


def numerov_propagate(f, h, u0, u1):
    f = np.asarray(f, dtype=np.float64)
    m = f.shape[0]
    out = np.empty(m, dtype=np.float64)
    if m == 0:
        return out
    out[0] = u0
    if m == 1:
        return out
    out[1] = u1
    u = out.tolist()
    w = (1.0 - (h * h / 12.0) * f).tolist()
    for i in range(1, m - 1):
        nxt = ((12.0 - 10.0 * w[i]) * u[i] - w[i - 1] * u[i - 1]) / w[i + 1]
        u[i + 1] = nxt
        if abs(nxt) > _BIG:
            for j in range(i + 2):
                u[j] /= _BIG
    out[:] = u
    return out


def count_sign_changes(u):
    last = 0
    count = 0
    for x in np.asarray(u, dtype=np.float64).tolist():
        if x > 0.0:
            s = 1
        elif x < 0.0:
            s = -1
        else:
            continue
        if last and s != last:
            count += 1
        last = s
    return count
