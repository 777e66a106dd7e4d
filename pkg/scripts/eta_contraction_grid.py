#!/usr/bin/env python3
"""Strong data-processing constants of binary symmetric kernels.

Sweeps the crossover probability, printing the scalar divergence
contraction (d = 1, equal to the classical constant (1 - 2 delta)^2 in
the small-perturbation limit) next to the qubit-ensemble search value.
"""

import argparse

import numpy as np

from matphi.holevo import MarkovKernel, eta_phi


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--restarts", type=int, default=10)
    args = parser.parse_args()

    mu = np.array([0.5, 0.5])
    print("delta   (1-2d)^2   eta_hat(d=1)   eta_hat(d=2)")
    for delta in (0.05, 0.1, 0.2, 0.3, 0.4):
        kernel = MarkovKernel.binary_symmetric(delta)
        scalar = eta_phi(mu, kernel, d=1, grid_resolution=0.05,
                         restarts=args.restarts, seed=args.seed)
        qubit = eta_phi(mu, kernel, d=2, grid_resolution=0.05,
                        restarts=args.restarts, hill_steps=80, seed=args.seed)
        print(
            f"{delta:.2f}    {(1 - 2 * delta) ** 2:.4f}     "
            f"{scalar.eta_hat:.6f}       {qubit.eta_hat:.6f}"
        )


if __name__ == "__main__":
    main()
