#!/usr/bin/env python3
"""Smoke test for the qdist Python extension module.

Build and stage the module first:

    cargo build --release -p qdist-py
    cp target/release/libqdist_py.so python/qdist.so

then run `python3 python/smoke_test.py`.
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import qdist  # noqa: E402


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def main():
    # Gaussian family: closed metric and its quadrature recomputation
    g = qdist.gauss_metric(1.0, 0.0)
    assert g == [[2.0, 0.0], [0.0, 1.0]], g
    gq = qdist.fr_metric("gauss", (2.0, 5.0))
    assert close(gq[0][0], 0.5, 1e-8) and close(gq[1][1], 0.25, 1e-8), gq

    # distance formula vs geodesic shooting
    formula, shooting, ratio = qdist.gauss_distance((1.0, 0.0), (1.0, 2.0))
    assert close(formula, 2.0 * math.log(1.0 + math.sqrt(2.0)), 1e-12), formula
    assert close(ratio, formula / shooting, 1e-12)
    assert shooting > formula  # the formula underweights the scale direction

    # hyperbolic oracle
    d = qdist.hyperbolic_distance((1.0, 0.0), (1.0, 1.0))
    assert close(d, math.acosh(1.5), 1e-12), d

    # oscillator parameter manifold
    m = qdist.oscillator_metric(0, 1.0, 1.0)
    assert m == [[0.5, 0.25], [0.25, 0.5]], m
    assert close(qdist.oscillator_eta(0), 3.0 / 8.0, 1e-15)
    assert close(qdist.oscillator_eta(2), -91.0 / 40.0, 1e-15)
    u, v = qdist.oscillator_uv(0, math.e**2, 1.0)
    assert close(u, 1.0, 1e-12) and close(v, 2.0, 1e-12), (u, v)
    table = qdist.oscillator_signature_table(2)
    assert [row[3] for row in table] == ["riemannian", "lorentzian", "negative-definite"]
    dist, klass = qdist.oscillator_state_distance(2, (1.0, 1.0), (2.0, 1.5))
    assert dist > 0.0 and klass == "lorentzian-timelike", (dist, klass)

    # entropies
    s = qdist.von_neumann_entropy([[0.7, 0.0], [0.0, 0.3]])
    assert close(s, -(0.7 * math.log(0.7) + 0.3 * math.log(0.3)), 1e-12), s
    srel = qdist.relative_entropy([[0.5, 0.0], [0.0, 0.5]], [[0.7, 0.0], [0.0, 0.3]])
    assert close(srel, 0.5 * math.log(0.5 / 0.7) + 0.5 * math.log(0.5 / 0.3), 1e-12)
    inf = qdist.relative_entropy([[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 1.0]])
    assert math.isinf(inf)

    # thermal states
    probs = qdist.gibbs_probabilities([0.0, 1.0], math.log(3.0))
    assert close(probs[0], 0.75, 1e-12) and close(probs[1], 0.25, 1e-12), probs
    energies = [(n + 0.5) for n in range(51)]
    srel_t = qdist.two_thermal_relative_entropy(energies, 1.3, 0.7)
    assert srel_t > 0.0

    # thermal field geometry
    assert qdist.scalar_field_rel_entropy(1.0, 0.8, 0.8) == 0.0
    d12 = qdist.scalar_field_distance(1.0, 2.0)
    d23 = qdist.scalar_field_distance(2.0, 3.0)
    d13 = qdist.scalar_field_distance(1.0, 3.0)
    assert close(d12 + d23, d13, 1e-12)

    # amplitude sphere
    p = qdist.sphere_probability("free", 1.0, 0.0, 0.0, [1.0, 1.0], math.pi / 3.0)
    assert close(p, (1.0 + math.cos(math.pi / 3.0)) / (2.0 * math.pi), 1e-12), p
    h_re, h_im, m_re, m_im = qdist.sphere_metric("ho", 1.0, 1.0, 0.4, [0.7**0.5, 0.3**0.5])
    assert len(h_re) == 2 and len(m_re) == 2
    # mixed block is Hermitian: real part symmetric, imaginary antisymmetric
    assert close(m_re[0][1], m_re[1][0], 1e-7)
    assert close(m_im[0][1], -m_im[1][0], 1e-7)

    norm, closed = qdist.mode_overlap_norm(1.0, 1.0, 0.3, 1)
    assert close(norm, closed, 1e-8), (norm, closed)
    assert close(closed, 2.0 * math.pi * math.sin(0.3), 1e-12)

    print("qdist python smoke test: all checks passed")


if __name__ == "__main__":
    main()
