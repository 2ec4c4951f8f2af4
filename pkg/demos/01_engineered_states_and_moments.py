#!/usr/bin/env python3
# ------------------------------------------------------------------
# Engineered states and their moments
#
# Two ways to shuffle photons in and out of a state:
#   add-then-subtract  A = a^p a'^q   ("PAS")
#   subtract-then-add  B = a'^q a^p   ("PSA")
# The two do NOT commute, and the difference shows up directly in the
# normalized moments <a'^m a^n>. Every closed form in the package has a
# brute-force twin in a truncated Fock basis; this script walks through
# both routes side by side.
# ------------------------------------------------------------------

import math

from fockwitness import oracle
from fockwitness.states import (
    EngineeringOp,
    StateSpec,
    moment,
    normalization_past_thermal,
    normalization_psat_thermal,
    photon_prob,
)

rbar = 1.0
past = StateSpec.thermal(rbar, EngineeringOp.pas(1, 1))
psat = StateSpec.thermal(rbar, EngineeringOp.psa(1, 1))

print("thermal state, mean photon number", rbar)
print("normalization constants:")
print("  add-then-subtract (1,1):", normalization_past_thermal(rbar, 1, 1), "(= 1/6)")
print("  subtract-then-add (1,1):", normalization_psat_thermal(rbar, 1, 1), "(= 1/3)")

print("\nmean photon number after engineering:")
for spec, label in ((past, "PAS(1,1)"), (psat, "PSA(1,1)")):
    closed = moment(spec, 1, 1).real
    state = oracle.build_truncated(spec)
    brute = oracle.oracle_moment(state, 1, 1).real
    print(f"  {label}: closed form {closed:.12f}   truncated basis (D={state.cutoff}) {brute:.12f}")
print("  exact values are 10/3 and 13/3: same photons moved, different states.")

# The even coherent state |alpha> + |-alpha> only holds even photon
# numbers, so any moment with m + n odd vanishes identically.
ecs = StateSpec.even_coherent(1.0)
print("\neven coherent state, alpha = 1:")
print("  <a'a>  =", moment(ecs, 1, 1).real, " (= tanh 1 =", math.tanh(1.0), ")")
print("  <a'^2> =", moment(ecs, 2, 0), " (eigenstate of a^2: equals conj(alpha)^2)")
print("  <a'>   =", moment(ecs, 1, 0), " (odd moment, exactly zero)")

# Photon-number distributions follow the same pattern: closed form vs
# diagonal of the truncated state.
spec = StateSpec.thermal(rbar, EngineeringOp.pas(2, 1))
state = oracle.build_truncated(spec)
print("\nphoton-number distribution of PAS(2,1) on the thermal state:")
print("  m    closed form      truncated basis")
for m in range(6):
    print(f"  {m}    {photon_prob(spec, m):.12f}   {oracle.oracle_photon_prob(state, m):.12f}")
print("  (level 0 keeps 5% of the weight: subtracting twice after adding once")
print("   cannot empty a thermal state)")
