"""hdrflow: exact computations for logarithmic Higgs bundles on P^1 over
prime fields -- Chern-class discriminants, weight-monodromy filtrations,
Birkhoff splittings, inverse Cartier transforms with explicit Frobenius
liftings, nearby-cycle local models and the Higgs-de Rham flow."""

__version__ = "0.1.0"
