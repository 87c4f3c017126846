# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled tick loop.

Mirrors ``simulation._step_python`` operation for operation so both backends
produce bit-identical state. Any change here must be made there too.
"""

from libc.math cimport sqrt
from libc.stdint cimport uint64_t, int32_t, int8_t, uint8_t
from libc.stdlib cimport malloc, free

cdef enum:
    SEARCHER = 0
    RESCUER = 1
    NO_TARGET = -1

cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _splitmix(uint64_t *state) nogil:
    cdef uint64_t z
    state[0] = state[0] + <uint64_t>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline double _uniform(uint64_t *state) nogil:
    return <double>(_splitmix(state) >> 11) * INV_2_53


def run_ticks(
    int8_t[::1] kind,
    double[:, ::1] pos,
    int32_t[::1] carrying,
    double[:, ::1] rw_heading,
    int32_t[::1] rw_left,
    uint64_t[::1] rng_state,
    int8_t[::1] state_out,
    double[:, ::1] vel_out,
    double[:, ::1] tpos,
    uint8_t[::1] alive,
    double[:, ::1] cpos,
    double[::1] chalf,
    double width,
    double height,
    double d_cl,
    double d_ts,
    double d_tl,
    double d_c,
    double max_speed,
    double dt,
    double margin,
    int rw_persistence,
    bint cross_kind,
    bint rescuer_hears_rescuers,
    bint rescuer_long_range,
    int n_ticks,
    int retrieved,
    int pickups,
    int32_t[::1] counts,
):
    cdef Py_ssize_t n = kind.shape[0]
    cdef Py_ssize_t nt = tpos.shape[0]
    cdef Py_ssize_t nc = cpos.shape[0]
    cdef Py_ssize_t i, j, k, t, tick
    cdef double cl2 = d_cl * d_cl, ts2 = d_ts * d_ts, tl2 = d_tl * d_tl, c2 = d_c * d_c
    cdef double xi, yi, dx, dy, d2, best, vx, vy, gate, norm, sx, sy, px, py, u, v, hx, hy
    cdef int hit, best_k, n_alive

    cdef int *alive_idx = <int *> malloc(max(nt, 1) * sizeof(int))
    cdef int *p_cl = <int *> malloc(n * sizeof(int))
    cdef int *p_ts = <int *> malloc(n * sizeof(int))
    cdef int *p_tl = <int *> malloc(n * sizeof(int))
    cdef int *p_c = <int *> malloc(n * sizeof(int))
    cdef int *short_id = <int *> malloc(n * sizeof(int))
    cdef int *tx = <int *> malloc(n * sizeof(int))
    cdef double *vcl = <double *> malloc(2 * n * sizeof(double))
    cdef double *vt = <double *> malloc(2 * n * sizeof(double))
    cdef double *vc = <double *> malloc(2 * n * sizeof(double))
    cdef double *nv = <double *> malloc(2 * n * sizeof(double))
    if not (alive_idx and p_cl and p_ts and p_tl and p_c and short_id and tx and vcl and vt and vc and nv):
        free(alive_idx); free(p_cl); free(p_ts); free(p_tl); free(p_c); free(short_id)
        free(tx); free(vcl); free(vt); free(vc); free(nv)
        raise MemoryError()

    n_alive = 0
    for t in range(nt):
        if alive[t]:
            alive_idx[n_alive] = <int>t
            n_alive += 1

    try:
        with nogil:
            for tick in range(n_ticks):
                # target sensors (nearest alive target serves short and long range)
                for i in range(n):
                    xi = pos[i, 0]
                    yi = pos[i, 1]
                    best = 0.0
                    best_k = -1
                    for k in range(n_alive):
                        t = alive_idx[k]
                        dx = tpos[t, 0] - xi
                        dy = tpos[t, 1] - yi
                        d2 = dx * dx + dy * dy
                        if best_k < 0 or d2 < best:
                            best = d2
                            best_k = <int>t
                    p_ts[i] = 0
                    p_tl[i] = 0
                    short_id[i] = NO_TARGET
                    vt[2 * i] = 0.0
                    vt[2 * i + 1] = 0.0
                    if best_k >= 0 and best <= ts2:
                        p_ts[i] = 1
                        short_id[i] = best_k
                    elif best_k >= 0 and best <= tl2 and carrying[i] == NO_TARGET and (
                        kind[i] == SEARCHER or rescuer_long_range
                    ):
                        p_tl[i] = 1
                        vt[2 * i] = tpos[best_k, 0] - xi
                        vt[2 * i + 1] = tpos[best_k, 1] - yi
                    tx[i] = p_tl[i] or (kind[i] == SEARCHER and p_ts[i])

                # collision and communication
                for i in range(n):
                    xi = pos[i, 0]
                    yi = pos[i, 1]
                    hit = 0
                    vx = 0.0
                    vy = 0.0
                    for j in range(n):
                        if j == i or (not cross_kind and kind[j] != kind[i]):
                            continue
                        dx = pos[j, 0] - xi
                        dy = pos[j, 1] - yi
                        if dx * dx + dy * dy <= cl2:
                            vx += dx
                            vy += dy
                            hit = 1
                    if xi <= d_cl:
                        vx += 0.0 - xi
                        hit = 1
                    if width - xi <= d_cl:
                        vx += width - xi
                        hit = 1
                    if yi <= d_cl:
                        vy += 0.0 - yi
                        hit = 1
                    if height - yi <= d_cl:
                        vy += height - yi
                        hit = 1
                    p_cl[i] = hit
                    vcl[2 * i] = vx if hit else 0.0
                    vcl[2 * i + 1] = vy if hit else 0.0

                    p_c[i] = 0
                    vc[2 * i] = 0.0
                    vc[2 * i + 1] = 0.0
                    if p_ts[i] or p_tl[i] or carrying[i] != NO_TARGET:
                        continue
                    best = 0.0
                    best_k = -1
                    for j in range(n):
                        if j == i or not tx[j]:
                            continue
                        if kind[i] == RESCUER and not rescuer_hears_rescuers and kind[j] != SEARCHER:
                            continue
                        dx = pos[j, 0] - xi
                        dy = pos[j, 1] - yi
                        d2 = dx * dx + dy * dy
                        if best_k < 0 or d2 < best:
                            best = d2
                            best_k = <int>j
                            sx = dx
                            sy = dy
                    if best_k >= 0 and best <= c2:
                        p_c[i] = 1
                        vc[2 * i] = sx
                        vc[2 * i + 1] = sy

                # control
                for i in range(n):
                    hx = 0.0
                    hy = 0.0
                    if p_ts[i] or p_tl[i] or p_c[i] or p_cl[i] or carrying[i] != NO_TARGET:
                        rw_left[i] = 0
                    else:
                        if rw_left[i] == 0:
                            while True:
                                u = _uniform(&rng_state[i])
                                v = _uniform(&rng_state[i])
                                rw_heading[i, 0] = -1000.0 + 2000.0 * u
                                rw_heading[i, 1] = -1000.0 + 2000.0 * v
                                if rw_heading[i, 0] != 0.0 or rw_heading[i, 1] != 0.0:
                                    break
                            rw_left[i] = rw_persistence
                        rw_left[i] -= 1
                        hx = rw_heading[i, 0]
                        hy = rw_heading[i, 1]

                    px = 0.0
                    py = 0.0
                    if kind[i] == RESCUER and carrying[i] != NO_TARGET:
                        best = 0.0
                        best_k = -1
                        for k in range(nc):
                            dx = cpos[k, 0] - pos[i, 0]
                            dy = cpos[k, 1] - pos[i, 1]
                            d2 = dx * dx + dy * dy
                            if best_k < 0 or d2 < best:
                                best = d2
                                best_k = <int>k
                        px = cpos[best_k, 0] - pos[i, 0]
                        py = cpos[best_k, 1] - pos[i, 1]

                    gate = 1.0 - p_cl[i]
                    vx = (vt[2 * i] + vc[2 * i] + px + hx) * gate - vcl[2 * i]
                    vy = (vt[2 * i + 1] + vc[2 * i + 1] + py + hy) * gate - vcl[2 * i + 1]
                    norm = sqrt(vx * vx + vy * vy)
                    if norm == 0.0:
                        nv[2 * i] = 0.0
                        nv[2 * i + 1] = 0.0
                    else:
                        nv[2 * i] = vx / norm * max_speed
                        nv[2 * i + 1] = vy / norm * max_speed

                    if carrying[i] != NO_TARGET:
                        state_out[i] = 4
                    elif p_ts[i] and kind[i] == SEARCHER:
                        state_out[i] = 3
                    elif p_c[i]:
                        state_out[i] = 2
                    elif p_tl[i]:
                        state_out[i] = 1
                    else:
                        state_out[i] = 0

                # movement
                for i in range(n):
                    vel_out[i, 0] = nv[2 * i]
                    vel_out[i, 1] = nv[2 * i + 1]
                    vx = pos[i, 0] + nv[2 * i] * dt
                    vy = pos[i, 1] + nv[2 * i + 1] * dt
                    pos[i, 0] = min(max(vx, margin), width - margin)
                    pos[i, 1] = min(max(vy, margin), height - margin)

                # pickups, lowest id wins a contested target
                for i in range(n):
                    if kind[i] != RESCUER or carrying[i] != NO_TARGET or not p_ts[i]:
                        continue
                    t = short_id[i]
                    if alive[t]:
                        alive[t] = 0
                        carrying[i] = <int32_t>t
                        pickups += 1
                        for k in range(n_alive):
                            if alive_idx[k] == t:
                                break
                        n_alive -= 1
                        while k < n_alive:
                            alive_idx[k] = alive_idx[k + 1]
                            k += 1

                # deliveries
                for i in range(n):
                    if carrying[i] == NO_TARGET:
                        continue
                    for k in range(nc):
                        if (cpos[k, 0] - chalf[k] <= pos[i, 0] <= cpos[k, 0] + chalf[k]
                                and cpos[k, 1] - chalf[k] <= pos[i, 1] <= cpos[k, 1] + chalf[k]):
                            carrying[i] = NO_TARGET
                            retrieved += 1
                            break

                counts[tick] = retrieved
    finally:
        free(alive_idx); free(p_cl); free(p_ts); free(p_tl); free(p_c); free(short_id)
        free(tx); free(vcl); free(vt); free(vc); free(nv)

    return retrieved, pickups
