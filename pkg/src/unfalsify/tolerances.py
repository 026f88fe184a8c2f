"""Shared numerical tolerances.

Kept in one place so the solvers, the model layer and the test suite agree on
what "exact" means in floating point.
"""

# Numerical-rank cutoff, relative to the largest singular value.
TOL_RANK = 1e-9

# Absolute infinity-norm tolerance on equality constraints (exact data
# reproduction demands zero prediction error; this is its float stand-in).
TOL_EQ = 1e-8

# Absolute slack on set membership: boundary witnesses produced by the
# solvers land within solver accuracy of the boundary.
TOL_MEM = 1e-9

# Optimality gap targets for the minimax solver.
TOL_OPT_REL = 1e-6
TOL_OPT_ABS = 1e-8

# Violation threshold below which the scenario-generation loop stops.
TOL_SIP = 1e-6

# Scenario budget and random probe directions per uncertainty block in the
# pessimistic inner oracle.
SCENARIO_BUDGET = 200
PROBE_DIRECTIONS = 16

# Relative singular-value cutoff used when factoring constraint matrices
# (particular solution + null-space basis).
RCOND_LSTSQ = 1e-11
