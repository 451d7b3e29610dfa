"""
Where two designs swap places
=============================

Two designs for five treatments in seven blocks of three.  One is binary
but unbalanced, the other repeats a treatment in one block and is
variance-balanced.  Neither Laplacian dominates the other, so the Phi_p
family must disagree somewhere.
"""

from blockopt.bounds import e_optimality_certificates
from blockopt.design import classify
from blockopt.families import figure
from blockopt.graphs import concurrence_laplacian
from blockopt.spectral import criteria, dominates, phi_crossover

a, b = figure("fig2a"), figure("fig2b")
ra, rb = criteria(a), criteria(b)

print("binary design blocks:    ", a.blocks)
print("non-binary design blocks:", b.blocks)
print()
print("Laplacian of the binary design:")
print(concurrence_laplacian(a))
print("Laplacian of the other one:")
print(concurrence_laplacian(b))

print("\neigenvalues:", ra.spectrum.nontrivial.round(6), "vs", rb.spectrum.nontrivial.round(6))
print("A: %.6f vs %.6f" % (ra.A_value, rb.A_value))
print("D: %.6f vs %.6f" % (ra.D_value, rb.D_value))
print("E: %.6f vs %.6f" % (ra.E_value, rb.E_value))
print("dominance:", dominates(concurrence_laplacian(a), concurrence_laplacian(b)).value)

print("\nPhi_p (smaller is better):")
for p in (0.5, 1, 2, 4, 5, 5.3, 5.33, 6, 10, 50):
    pa, pb = ra.phi_p(p), rb.phi_p(p)
    print("  p=%-5g %.8f %.8f  %s" % (p, pa, pb, "binary" if pa < pb else "non-binary"))

lo, hi = phi_crossover(ra, rb)
print("\ncrossover bracket, width 1e-3: [%.6f, %.6f]" % (lo, hi))
lo, hi = phi_crossover(ra, rb, width=1e-10)
print("refined:                        %.10f" % ((lo + hi) / 2))

# spectra {9,10,10,13} and {10,10,10,10}: the root solves 9^-p + 13^-p = 2 * 10^-p
f = lambda p: 9.0 ** -p + 13.0 ** -p - 2 * 10.0 ** -p
print("residual of the closed equation there: %.2e" % f((lo + hi) / 2))

print("\nE-certificates for the variance-balanced design:")
for line in e_optimality_certificates(b).lines(b.v):
    print("  ", line)
print("binary design is variance-balanced:", classify(a).variance_balanced)
