"""Cech cohomology tables for P^n and for the blowup of affine space at the origin.

    python demos/cohomology_tables.py
"""

from modcoh import (
    Box,
    blowup_bundle,
    blowup_cover,
    cech_cohomology,
    projective_box,
    projective_bundle,
)


def projective_table(n, degrees=range(-6, 7)):
    print(f"h^q(P^{n}, O(d))")
    print("   d  " + "  ".join(f"q={q}" for q in range(n + 1)))
    for d in degrees:
        rep = cech_cohomology(projective_bundle(n, d), projective_box(n, d))
        print(f"{d:>4}  " + "  ".join(f"{rep.dim(q):>3}" for q in range(n + 1)))


def blowup_table(n, radius=4):
    space = blowup_cover(n)
    box = Box.symmetric(n + 1, radius)
    print(f"\nR^q f_* O(i) on Bl_0 A^{n + 1}, dimensions inside the box {box}")
    for i in range(-n - 2, 4):
        rep = cech_cohomology(blowup_bundle(n, i, space), box)
        dims = [rep.dim(q) for q in range(rep.top_degree + 1)]
        note = ""
        if i == -n - 1:
            note = f"  <- first nonvanishing twist, class {rep.basis(n)[0]}"
        print(f"  i={i:>2}  {dims}{note}")


if __name__ == "__main__":
    for n in (1, 2):
        projective_table(n)
        print()
    rep = cech_cohomology(projective_bundle(2, -3), projective_box(2, -3))
    print(rep.to_text())
    blowup_table(1)
    blowup_table(2, radius=3)
