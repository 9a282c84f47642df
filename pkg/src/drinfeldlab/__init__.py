"""drinfeldlab: exact arithmetic for Drinfeld modules over F_q(t) and F_q(s),
Frobenius characteristic polynomials, character evaluations, congruence
audits, and the construction/verification of explicit module families."""

__version__ = "0.1.0"
