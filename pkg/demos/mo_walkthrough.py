"""Generators and membership in MO(A, f), then the extension and shift checks.

    python demos/mo_walkthrough.py
"""

from modcoh import (
    AffineModulusPair,
    RingMap,
    check_divisor_shift,
    check_poly_extension,
    mo_contains,
    mo_generator,
    mo_pullback,
)


def main():
    pair = AffineModulusPair.parse("x,y", "x^3*y^2")
    print(f"MO for {pair}: {mo_generator(pair)}")
    for text in ("1/(x^2*y)", "1/(x^3*y)", "x/(x^3*y^2)", "1/y"):
        elem = pair.parse_element(text)
        print(f"  {text:>12}  member: {mo_contains(pair, elem)}")

    # a non-monomial modulus with declared irreducible factors
    pair = AffineModulusPair.parse("x,y", "(x + y)^2*(x*y + 1)")
    print(f"\nMO for {pair}: {mo_generator(pair)}")

    # functoriality along u -> t^2: the generator goes to 1/t^2, not to the target's 1/t^3
    src = AffineModulusPair.parse("u", "u^2")
    dst = AffineModulusPair.parse("t", "t^4")
    phi = RingMap(src.ring, dst.ring, (dst.ring("t^2"),))
    image = mo_pullback(phi, src, dst, mo_generator(src).generator)
    print(f"\nimage of 1/u under u -> t^2: {image}; target generator {mo_generator(dst).generator}")

    print()
    print(check_poly_extension(AffineModulusPair.parse("x,y", "x^2*y^3"), 3).summary())
    print(check_divisor_shift(AffineModulusPair.parse("x", "x^2"), 4).summary())
    # over the dual numbers the shift lemma breaks
    print(check_divisor_shift(AffineModulusPair.parse("", "1", coeffs="dual"), 2).summary())


if __name__ == "__main__":
    main()
