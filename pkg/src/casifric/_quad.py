"""Gauss-Legendre tables and panel helpers shared by all kernels."""

import numpy as np

GL4_X, GL4_W = np.polynomial.legendre.leggauss(4)
GL6_X, GL6_W = np.polynomial.legendre.leggauss(6)
GL8_X, GL8_W = np.polynomial.legendre.leggauss(8)
GL16_X, GL16_W = np.polynomial.legendre.leggauss(16)


def panel_nodes(edges, glx, glw):
    """Map GL nodes onto consecutive panels of a sorted edge array.

    Zero-width panels (repeated edges) get zero weight, so edge arrays may
    contain duplicates or clipped values without special casing.

    Returns (nodes, weights) flattened over panels, shape (npanel * order,).
    """
    a = edges[:-1]
    b = edges[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    nodes = mid[:, None] + half[:, None] * glx[None, :]
    weights = half[:, None] * glw[None, :]
    return nodes.ravel(), weights.ravel()


def panel_nodes_2d(edges, glx, glw):
    """Vectorized panel_nodes for a batch of edge rows, shape (n, nedge).

    Returns (nodes, weights) of shape (n, (nedge-1) * order).
    """
    a = edges[:, :-1]
    b = edges[:, 1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    nodes = mid[:, :, None] + half[:, :, None] * glx[None, None, :]
    weights = half[:, :, None] * glw[None, None, :]
    n = edges.shape[0]
    return nodes.reshape(n, -1), weights.reshape(n, -1)
