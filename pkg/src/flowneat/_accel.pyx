# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; operation order mirrors ``_purepy`` exactly."""

import numpy as np
from libc.math cimport exp, sin, cos, sqrt, fabs

BACKEND = "cython"

ctypedef long long idx_t


cdef inline idx_t[::1] _idx(a):
    return np.ascontiguousarray(a, dtype=np.int64)


cdef inline double[::1] _dbl(a):
    return np.ascontiguousarray(a, dtype=np.float64)


cdef void _bfs(idx_t src, idx_t n, idx_t[::1] indptr, idx_t[::1] indices,
               idx_t[::1] dist, idx_t[::1] queue) noexcept nogil:
    cdef idx_t j, head = 0, tail = 0, u, v, e, du
    for j in range(n):
        dist[j] = -1
    dist[src] = 0
    queue[tail] = src
    tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        du = dist[u] + 1
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if dist[v] < 0:
                dist[v] = du
                queue[tail] = v
                tail += 1


def bfs_distances(idx_t n, indptr, indices):
    cdef idx_t[::1] ip = _idx(indptr), ix = _idx(indices)
    out = np.empty((n, n), dtype=np.int64)
    cdef idx_t[:, ::1] o = out
    cdef idx_t[::1] queue = np.empty(max(n, 1), dtype=np.int64)
    cdef idx_t i
    for i in range(n):
        _bfs(i, n, ip, ix, o[i], queue)
    return out


cdef double _efficiency_sum(idx_t n, idx_t[::1] indptr, idx_t[::1] indices,
                            idx_t[::1] dist, idx_t[::1] queue) noexcept nogil:
    cdef double total = 0.0
    cdef idx_t i, j
    for i in range(n):
        _bfs(i, n, indptr, indices, dist, queue)
        for j in range(n):
            if j != i and dist[j] > 0:
                total += 1.0 / dist[j]
    return total


def global_efficiency(idx_t n, indptr, indices):
    if n < 2:
        return 0.0
    cdef idx_t[::1] ip = _idx(indptr), ix = _idx(indices)
    cdef idx_t[::1] dist = np.empty(n, dtype=np.int64)
    cdef idx_t[::1] queue = np.empty(n, dtype=np.int64)
    cdef double total
    with nogil:
        total = _efficiency_sum(n, ip, ix, dist, queue)
    return total / (n * (n - 1.0))


def local_efficiency(idx_t n, indptr, indices):
    if n == 0:
        return 0.0
    cdef idx_t[::1] ip = _idx(indptr), ix = _idx(indices)
    cdef idx_t m = ix.shape[0]
    cdef idx_t[::1] local = np.full(n, -1, dtype=np.int64)
    cdef idx_t[::1] sub_ptr = np.empty(n + 1, dtype=np.int64)
    cdef idx_t[::1] sub_idx = np.empty(max(m, 1), dtype=np.int64)
    cdef idx_t[::1] dist = np.empty(n, dtype=np.int64)
    cdef idx_t[::1] queue = np.empty(n, dtype=np.int64)
    cdef double acc = 0.0
    cdef idx_t i, k, pos, v, e, w, fill
    with nogil:
        for i in range(n):
            k = ip[i + 1] - ip[i]
            if k < 2:
                continue
            for pos in range(k):
                local[ix[ip[i] + pos]] = pos
            fill = 0
            sub_ptr[0] = 0
            for pos in range(k):
                v = ix[ip[i] + pos]
                for e in range(ip[v], ip[v + 1]):
                    w = ix[e]
                    if local[w] >= 0:
                        sub_idx[fill] = local[w]
                        fill += 1
                sub_ptr[pos + 1] = fill
            for pos in range(k):
                local[ix[ip[i] + pos]] = -1
            acc += _efficiency_sum(k, sub_ptr, sub_idx, dist, queue) / (k * (k - 1.0))
    return acc / n


def eigenvector_power(idx_t n, indptr, indices, double tol, idx_t max_iter):
    cdef idx_t[::1] ip = _idx(indptr), ix = _idx(indices)
    xa = np.full(n, 1.0 / sqrt(<double>n))
    cdef double[::1] x = xa
    cdef double[::1] y = np.zeros(n)
    cdef double s, norm, diff, v
    cdef idx_t it, i, e
    cdef int status = 0
    with nogil:
        for it in range(1, max_iter + 1):
            norm = 0.0
            for i in range(n):
                s = x[i]
                for e in range(ip[i], ip[i + 1]):
                    s += x[ix[e]]
                y[i] = s
                norm += s * s
            norm = sqrt(norm)
            if norm == 0.0:
                status = 2
                break
            diff = 0.0
            for i in range(n):
                v = y[i] / norm
                diff += fabs(v - x[i])
                x[i] = v
            if diff < tol:
                status = 1
                break
    if status == 0:
        it = max_iter
    return xa.tolist(), status == 1, it


cdef inline double _sigmoid(double s) noexcept nogil:
    cdef double e
    if s >= 0.0:
        return 1.0 / (1.0 + exp(-s))
    e = exp(s)
    return e / (1.0 + e)


cdef void _forward(idx_t n, idx_t[::1] is_input, double[::1] biases, idx_t[::1] in_ptr,
                   idx_t[::1] in_src, double[::1] in_w, double[::1] act) noexcept nogil:
    cdef idx_t k, e
    cdef double s
    for k in range(n):
        if is_input[k]:
            continue
        s = biases[k]
        for e in range(in_ptr[k], in_ptr[k + 1]):
            s += in_w[e] * act[in_src[e]]
        act[k] = _sigmoid(s)


def forward_batch(idx_t n, is_input, input_nodes, output_nodes, biases, in_ptr, in_src, in_w, X):
    cdef idx_t[::1] isin = _idx(is_input), inn = _idx(input_nodes), outn = _idx(output_nodes)
    cdef idx_t[::1] ptr = _idx(in_ptr), src = _idx(in_src)
    cdef double[::1] b = _dbl(biases), w = _dbl(in_w)
    cdef double[:, ::1] xs = np.ascontiguousarray(X, dtype=np.float64).reshape(-1, inn.shape[0])
    cdef idx_t rows = xs.shape[0], n_in = inn.shape[0], n_out = outn.shape[0]
    out = np.empty((rows, n_out), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double[::1] act = np.zeros(max(n, 1))
    cdef idx_t r, slot
    with nogil:
        for r in range(rows):
            for slot in range(n_in):
                act[inn[slot]] = xs[r, slot]
            _forward(n, isin, b, ptr, src, w, act)
            for slot in range(n_out):
                o[r, slot] = act[outn[slot]]
    return out


cdef inline void _step(double* st, double force, double gravity, double cart_mass,
                       double pole_mass, double half_length, double dt) noexcept nogil:
    cdef double total_mass = cart_mass + pole_mass
    cdef double s = sin(st[2])
    cdef double c = cos(st[2])
    cdef double theta_dot = st[3]
    cdef double temp = (force + pole_mass * half_length * theta_dot * theta_dot * s) / total_mass
    cdef double theta_acc = (gravity * s - c * temp) / (
        half_length * (4.0 / 3.0 - pole_mass * c * c / total_mass))
    cdef double x_acc = (force + pole_mass * half_length * (theta_dot * theta_dot * s - theta_acc * c)) / total_mass
    st[1] = st[1] + dt * x_acc
    st[0] = st[0] + dt * st[1]
    st[3] = st[3] + dt * theta_acc
    st[2] = st[2] + dt * st[3]


def cartpole_step(double x, double x_dot, double theta, double theta_dot, double force, params):
    cdef double st[4]
    st[0] = x
    st[1] = x_dot
    st[2] = theta
    st[3] = theta_dot
    _step(st, force, params[0], params[1], params[2], params[3], params[5])
    return st[0], st[1], st[2], st[3]


def cartpole_run(idx_t n, is_input, input_nodes, output_nodes, biases, in_ptr, in_src, in_w,
                 init_states, params, idx_t max_steps):
    cdef idx_t[::1] isin = _idx(is_input), inn = _idx(input_nodes)
    cdef idx_t out_node = int(output_nodes[0])
    cdef idx_t[::1] ptr = _idx(in_ptr), src = _idx(in_src)
    cdef double[::1] b = _dbl(biases), w = _dbl(in_w)
    cdef double[:, ::1] init = np.ascontiguousarray(init_states, dtype=np.float64).reshape(-1, 4)
    cdef double gravity = params[0], cart_mass = params[1], pole_mass = params[2]
    cdef double half_length = params[3], force_mag = params[4], dt = params[5]
    cdef double angle_limit = params[6], position_limit = params[7]
    cdef double[::1] act = np.zeros(max(n, 1))
    cdef idx_t episodes = init.shape[0], ep, t, steps
    survived = np.zeros(episodes, dtype=np.int64)
    cdef idx_t[::1] sv = survived
    cdef double st[4]
    cdef double obs[4]
    cdef double force
    cdef idx_t slot
    with nogil:
        for ep in range(episodes):
            for slot in range(4):
                st[slot] = init[ep, slot]
            steps = 0
            for t in range(max_steps):
                obs[0] = st[0] / position_limit
                obs[1] = st[1] / 3.0
                obs[2] = st[2] / angle_limit
                obs[3] = st[3] / 3.0
                for slot in range(inn.shape[0]):
                    act[inn[slot]] = obs[slot]
                _forward(n, isin, b, ptr, src, w, act)
                force = force_mag if act[out_node] >= 0.5 else -force_mag
                _step(st, force, gravity, cart_mass, pole_mass, half_length, dt)
                if fabs(st[0]) > position_limit or fabs(st[2]) > angle_limit:
                    break
                steps += 1
            sv[ep] = steps
    return survived.tolist()
