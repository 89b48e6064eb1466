"""Seeded random-state samplers used by the property tests.

Biseparable and k-separable mixtures are built the only way their
definitions allow: convex combinations of pure states, each of which
factorises across its own (randomly chosen) partition.
"""

from __future__ import annotations

import numpy as np

from .partitions import unique_k_partitions
from .states import random_pure_state
from .tensor import DensityMatrix, SystemShape


def random_density_matrix(shape, rng, rank=None):
    """Mixture of Haar-random pure states with Dirichlet weights."""
    if not isinstance(shape, SystemShape):
        shape = SystemShape(shape)
    total = shape.total
    rank = total if rank is None else rank
    weights = rng.dirichlet(np.ones(rank))
    mat = np.zeros((total, total), dtype=complex)
    for w in weights:
        v = random_pure_state(total, rng)
        mat += w * np.outer(v, v.conj())
    return DensityMatrix(shape, mat, validate=False)


def random_product_pure(shape, partition, rng):
    """Haar-random pure state on each block of the partition, stitched
    together in site order."""
    n = shape.n
    block_states = {}
    for block in partition.blocks:
        dim = int(np.prod([shape.dims[s] for s in block]))
        block_states[block] = random_pure_state(dim, rng).reshape(
            [shape.dims[s] for s in block]
        )
    # assemble a site-ordered amplitude tensor: outer product, then move
    # each block's axes to its sites
    tensor = np.array(1.0 + 0j)
    order = []
    for block in partition.blocks:
        tensor = np.tensordot(tensor, block_states[block], axes=0)
        order.extend(block)
    perm = np.argsort(order)
    tensor = tensor.transpose(perm)
    return tensor.reshape(-1)


def random_ksep_dm(shape, k, rng, terms=6):
    """Random k-separable mixed state: each pure term factorises across
    its own random canonical k-partition."""
    if not isinstance(shape, SystemShape):
        shape = SystemShape(shape)
    parts = unique_k_partitions(shape.n, k)
    weights = rng.dirichlet(np.ones(terms))
    mat = np.zeros((shape.total, shape.total), dtype=complex)
    for w in weights:
        part = parts[rng.integers(0, len(parts))]
        v = random_product_pure(shape, part, rng)
        mat += w * np.outer(v, v.conj())
    return DensityMatrix(shape, mat, validate=False)


def random_biseparable_dm(shape, rng, terms=6):
    return random_ksep_dm(shape, 2, rng, terms=terms)
