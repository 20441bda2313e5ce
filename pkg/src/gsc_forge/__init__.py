"""Generalized-Shor-code toolkit.

Stabilizer-code-generic logical gates mediated by GSC/GSCH helper
registers, with lookup-table decoding of the combined two-partition code,
Monte-Carlo logical-error-rate experiments, exact state-vector gate
verification, and closed-form resource accounting.
"""

__version__ = "0.1.0"
