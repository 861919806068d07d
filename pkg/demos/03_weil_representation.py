"""
The finite Weil representation, exactly
=======================================

The discriminant form L'/L carries a representation of the metaplectic
group generated by two matrices: T (diagonal, phases e(Q(mu))) and S (a
normalized finite Fourier transform).  All entries live in a cyclotomic
field, so the generator relations, unitarity, and the invariant subspace
can be checked with no floating point at all.
"""

from vveis import (
    discriminant_form,
    invariants,
    is_unitary,
    new_lattice,
    verify_relations,
    weil_matrices,
)

for name, gram in [
    ("<-2>  (one negative line)", [[-2]]),
    ("A1 + A1", [[2, 0], [0, 2]]),
    ("<2> + <-2>  (split torsor)", [[2, 0], [0, -2]]),
    ("U (hyperbolic plane, trivial group)", [[0, 1], [1, 0]]),
]:
    disc = discriminant_form(new_lattice(gram))
    w = weil_matrices(disc)
    print(f"{name}: |disc| = {disc.size}")
    print(f"  relations hold: {verify_relations(w)}")
    print(f"  S unitary:      {is_unitary(w)}")
    vecs = invariants(w)
    if vecs:
        for v in vecs:
            print(f"  invariant vector: {tuple(str(x) for x in v)}")
    else:
        print("  invariant subspace is zero")
    print()

# the split four-element group has an isotropic subgroup of order 2; its
# characteristic function is the classical invariant, and the exact
# kernel computation finds it with rational coordinates
disc = discriminant_form(new_lattice([[2, 0], [0, -2]]))
(vec,) = invariants(weil_matrices(disc))
support = [mu for mu, x in zip(disc.elements(), vec) if x != 0]
print(f"split case: invariant supported on {support} (isotropic subgroup)")
