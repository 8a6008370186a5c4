# symbols.py

import sympy as sp

# Activation argument
z = sp.Symbol("z", real=True)

# Architecture and loss constants
C, L, b, m, p, d, H = sp.symbols("C L b m p d H", real=True, positive=True)

# Decision set, stream and teacher
R, T, D, eps = sp.symbols("R T D epsilon", real=True, nonnegative=True)
G, kappa = sp.symbols("G kappa", real=True, positive=True)

# Episodic control
K, L_c = sp.symbols("K L_c", real=True, positive=True)
