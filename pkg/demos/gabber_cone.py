"""The cone over a plane cubic: cohomology of E = {F = 0} from the sequence
0 -> O(i-3) -> O(i) -> O_E(i) -> 0 on P^2.

    python demos/gabber_cone.py ["t0^3 + t1^3 + t2^3"]
"""

import sys

from modcoh import counterexample_gabber


def main(argv):
    cubic = argv[0] if argv else "t0^3 + t1^3 + t2^3"
    v = counterexample_gabber(cubic, (-3, 4))
    print(f"E = {{{v.parameters['cubic']} = 0}}")
    print("   i  h0(O_E(i))  h1(O_E(i))")
    for i, row in v.details["table"].items():
        print(f"{i:>4}  {row['h0']:>10}  {row['h1']:>10}")
    print(f"\nH^1(E, O_E) is spanned by the image of {v.witness} in H^2(P^2, O(-3))")
    print(v.summary())


if __name__ == "__main__":
    main(sys.argv[1:])
