"""Pure-Python kernels.

Every function here has a twin in ``_accel.pyx`` with the same signature and
the same floating-point operation order, so both backends return bit-identical
results. Array arguments may be numpy arrays or sequences.
"""

from collections import deque
from math import exp, sin, cos, sqrt

BACKEND = "python"


def _as_list(a):
    return a.tolist() if hasattr(a, "tolist") else list(a)


def _bfs(src, n, indptr, indices, dist):
    for j in range(n):
        dist[j] = -1
    dist[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if dist[v] < 0:
                dist[v] = du
                queue.append(v)


def bfs_distances(n, indptr, indices):
    """All-pairs hop counts; -1 marks unreachable pairs."""
    indptr, indices = _as_list(indptr), _as_list(indices)
    out = []
    for i in range(n):
        dist = [0] * n
        _bfs(i, n, indptr, indices, dist)
        out.append(dist)
    return out


def _efficiency_sum(n, indptr, indices):
    total = 0.0
    dist = [0] * n
    for i in range(n):
        _bfs(i, n, indptr, indices, dist)
        for j in range(n):
            if j != i and dist[j] > 0:
                total += 1.0 / dist[j]
    return total


def global_efficiency(n, indptr, indices):
    if n < 2:
        return 0.0
    total = _efficiency_sum(n, _as_list(indptr), _as_list(indices))
    return total / (n * (n - 1.0))


def local_efficiency(n, indptr, indices):
    if n == 0:
        return 0.0
    indptr, indices = _as_list(indptr), _as_list(indices)
    local = [-1] * n
    acc = 0.0
    for i in range(n):
        start, stop = indptr[i], indptr[i + 1]
        k = stop - start
        if k < 2:
            continue
        nbrs = indices[start:stop]
        for pos, v in enumerate(nbrs):
            local[v] = pos
        # induced subgraph on the neighbours of i, in CSR form
        sub_ptr = [0] * (k + 1)
        sub_idx = []
        for pos, v in enumerate(nbrs):
            for e in range(indptr[v], indptr[v + 1]):
                w = indices[e]
                if local[w] >= 0:
                    sub_idx.append(local[w])
            sub_ptr[pos + 1] = len(sub_idx)
        for v in nbrs:
            local[v] = -1
        acc += _efficiency_sum(k, sub_ptr, sub_idx) / (k * (k - 1.0))
    return acc / n


def eigenvector_power(n, indptr, indices, tol, max_iter):
    """Power iteration on (A + I) from a uniform start.

    Returns ``(vector, converged, iterations)``.
    """
    indptr, indices = _as_list(indptr), _as_list(indices)
    x = [1.0 / sqrt(n)] * n
    y = [0.0] * n
    for it in range(1, max_iter + 1):
        norm = 0.0
        for i in range(n):
            s = x[i]
            for e in range(indptr[i], indptr[i + 1]):
                s += x[indices[e]]
            y[i] = s
            norm += s * s
        norm = sqrt(norm)
        if norm == 0.0:
            return x, False, it
        diff = 0.0
        for i in range(n):
            v = y[i] / norm
            diff += abs(v - x[i])
            x[i] = v
        if diff < tol:
            return x, True, it
    return x, False, max_iter


def _sigmoid(s):
    if s >= 0.0:
        return 1.0 / (1.0 + exp(-s))
    e = exp(s)
    return e / (1.0 + e)


def _forward(n, is_input, biases, in_ptr, in_src, in_w, act):
    for k in range(n):
        if is_input[k]:
            continue
        s = biases[k]
        for e in range(in_ptr[k], in_ptr[k + 1]):
            s += in_w[e] * act[in_src[e]]
        act[k] = _sigmoid(s)


def forward_batch(n, is_input, input_nodes, output_nodes, biases, in_ptr, in_src, in_w, X):
    """Evaluate a compiled network on every row of ``X``."""
    is_input, input_nodes, output_nodes = _as_list(is_input), _as_list(input_nodes), _as_list(output_nodes)
    biases, in_ptr, in_src, in_w = _as_list(biases), _as_list(in_ptr), _as_list(in_src), _as_list(in_w)
    act = [0.0] * n
    out = []
    for row in _as_list(X):
        for slot, k in enumerate(input_nodes):
            act[k] = row[slot]
        _forward(n, is_input, biases, in_ptr, in_src, in_w, act)
        out.append([act[k] for k in output_nodes])
    return out


def cartpole_step(x, x_dot, theta, theta_dot, force, params):
    gravity, cart_mass, pole_mass, half_length, _, dt = params[:6]
    total_mass = cart_mass + pole_mass
    st = sin(theta)
    ct = cos(theta)
    temp = (force + pole_mass * half_length * theta_dot * theta_dot * st) / total_mass
    theta_acc = (gravity * st - ct * temp) / (
        half_length * (4.0 / 3.0 - pole_mass * ct * ct / total_mass)
    )
    x_acc = (force + pole_mass * half_length * (theta_dot * theta_dot * st - theta_acc * ct)) / total_mass
    x_dot = x_dot + dt * x_acc
    x = x + dt * x_dot
    theta_dot = theta_dot + dt * theta_acc
    theta = theta + dt * theta_dot
    return x, x_dot, theta, theta_dot


def cartpole_run(n, is_input, input_nodes, output_nodes, biases, in_ptr, in_src, in_w,
                 init_states, params, max_steps):
    """Steps survived per initial state under the network's bang-bang policy."""
    is_input, input_nodes = _as_list(is_input), _as_list(input_nodes)
    out_node = _as_list(output_nodes)[0]
    biases, in_ptr, in_src, in_w = _as_list(biases), _as_list(in_ptr), _as_list(in_src), _as_list(in_w)
    force_mag, angle_limit, position_limit = params[4], params[6], params[7]
    act = [0.0] * n
    survived = []
    for state in _as_list(init_states):
        x, x_dot, theta, theta_dot = state
        steps = 0
        for _ in range(max_steps):
            obs = (x / position_limit, x_dot / 3.0, theta / angle_limit, theta_dot / 3.0)
            for slot, k in enumerate(input_nodes):
                act[k] = obs[slot]
            _forward(n, is_input, biases, in_ptr, in_src, in_w, act)
            force = force_mag if act[out_node] >= 0.5 else -force_mag
            x, x_dot, theta, theta_dot = cartpole_step(x, x_dot, theta, theta_dot, force, params)
            if abs(x) > position_limit or abs(theta) > angle_limit:
                break
            steps += 1
        survived.append(steps)
    return survived
