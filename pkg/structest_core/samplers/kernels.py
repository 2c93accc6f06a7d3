"""
Compiled single-site heat-bath (Glauber) sweeps.

The kernels consume pre-drawn uniforms (and, for random scan, pre-drawn
site indices) so that every chain is a deterministic function of its
numpy Generator stream.
"""

import numba
import numpy as np


@numba.jit(nopython=True, cache=True)
def _ising_energy(spins, indptr, indices, beta, h):
    pair_sum = 0
    total = 0
    for i in range(spins.shape[0]):
        local = 0
        for k in range(indptr[i], indptr[i + 1]):
            local += spins[indices[k]]
        pair_sum += spins[i] * local
        total += spins[i]
    return 0.5 * beta * pair_sum + h * total


@numba.jit(nopython=True, cache=True)
def ising_sweeps(spins, indptr, indices, sites, uniforms, systematic, beta, h, trace):
    n = spins.shape[0]
    for t in range(uniforms.shape[0]):
        if systematic:
            i = t % n
        else:
            i = sites[t]
        field = 0
        for k in range(indptr[i], indptr[i + 1]):
            field += spins[indices[k]]
        p_plus = 1.0 / (1.0 + np.exp(-2.0 * (beta * field + h)))
        if uniforms[t] < p_plus:
            spins[i] = 1
        else:
            spins[i] = -1
        if trace.shape[0] > 0 and (t + 1) % n == 0:
            trace[(t + 1) // n - 1] = _ising_energy(spins, indptr, indices, beta, h)


@numba.jit(nopython=True, cache=True)
def ergm_sweeps(adj, deg, pair_u, pair_v, sites, uniforms, systematic,
                beta1, wedge_weight, counts, trace):
    # counts = [edge count, wedge count], updated in place
    N = pair_u.shape[0]
    for t in range(uniforms.shape[0]):
        if systematic:
            e = t % N
        else:
            e = sites[t]
        u = pair_u[e]
        v = pair_v[e]
        present = np.int64(adj[u, v])
        # wedges through {u, v} formed with the rest of the graph
        w = deg[u] + deg[v] - 2 * present
        p_on = 1.0 / (1.0 + np.exp(-(2.0 * beta1 + wedge_weight * w)))
        if uniforms[t] < p_on:
            if present == 0:
                adj[u, v] = 1
                adj[v, u] = 1
                deg[u] += 1
                deg[v] += 1
                counts[0] += 1
                counts[1] += w
        elif present == 1:
            adj[u, v] = 0
            adj[v, u] = 0
            deg[u] -= 1
            deg[v] -= 1
            counts[0] -= 1
            counts[1] -= w
        if trace.shape[0] > 0 and (t + 1) % N == 0:
            trace[(t + 1) // N - 1] = 2.0 * beta1 * counts[0] + wedge_weight * counts[1]
