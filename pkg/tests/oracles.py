"""Slow reference implementations used only as test oracles."""

import itertools

import numpy as np


def naive_partial_trace(mat, dims, keep):
    """Sum <i_keep j|rho|i'_keep j> over traced indices j, entry by entry."""
    dims = list(dims)
    traced = [k for k in range(len(dims)) if k not in keep]
    kept_ranges = [range(dims[k]) for k in keep]
    traced_ranges = [range(dims[k]) for k in traced]
    strides = [int(np.prod(dims[k + 1 :])) for k in range(len(dims))]

    def flat(assign):
        return sum(assign[k] * strides[k] for k in range(len(dims)))

    rows = list(itertools.product(*kept_ranges))
    out = np.zeros((len(rows), len(rows)), dtype=complex)
    for a, row in enumerate(rows):
        for b, col in enumerate(rows):
            total = 0j
            for env in itertools.product(*traced_ranges):
                ra, ca = {}, {}
                for k, v in zip(keep, row):
                    ra[k] = v
                for k, v in zip(keep, col):
                    ca[k] = v
                for k, v in zip(traced, env):
                    ra[k] = ca[k] = v
                total += mat[flat(ra), flat(ca)]
            out[a, b] = total
    return out


def keep_subsets(n):
    for size in range(1, n + 1):
        yield from itertools.combinations(range(n), size)


def dims_with_product_at_most(limit, min_dim=1):
    """Every dims tuple with entries >= min_dim, at least one entry >= 2, product <= limit.

    Entries of 1 are allowed but a tuple is never all ones; length is capped by
    the product so the enumeration is finite when min_dim = 1 by limiting to
    four subsystems.
    """
    out = []
    for length in range(1, 5):
        for dims in itertools.product(range(min_dim, limit + 1), repeat=length):
            if int(np.prod(dims)) <= limit and max(dims) >= 2:
                out.append(dims)
    return out
