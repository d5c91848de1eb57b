"""Oracle for the duality-rotation group law.

The rational circle points (cos, sin) = ((1-t^2)/(1+t^2), 2t/(1+t^2))
compose exactly: the angle-addition formulas keep the composed point
rational, so composing the rotation for t1 with the rotation for t2
must match the single rotation at the summed angle.  This script
measures the float-arithmetic deviation of that group law on 2x2
rotation matrices to justify the 1e-13 test tolerance (the exact
Fraction composition is zero by construction and asserted here).

Run:  python3 oracles/rotation_group_law.py
"""

from fractions import Fraction


def point(t):
    t = Fraction(t)
    den = 1 + t * t
    return (1 - t * t) / den, 2 * t / den


def compose(p1, p2):
    c1, s1 = p1
    c2, s2 = p2
    return c1 * c2 - s1 * s2, s1 * c2 + c1 * s2


def rot(c, s):
    return ((c, s), (-s, c))


def matmul(m1, m2):
    return tuple(
        tuple(sum(m1[i][k] * m2[k][j] for k in range(2)) for j in range(2))
        for i in range(2)
    )


def main():
    ts = [Fraction(1), Fraction(2), Fraction(1, 3), Fraction(-5, 7)]
    worst = 0.0
    for t1 in ts:
        for t2 in ts:
            p1, p2 = point(t1), point(t2)
            c12, s12 = compose(p1, p2)
            assert c12 * c12 + s12 * s12 == 1  # exact group law
            exact = rot(c12, s12)
            composed = matmul(rot(*p1), rot(*p2))
            assert composed == exact  # exact matrix composition
            # float shadow
            f1 = rot(float(p1[0]), float(p1[1]))
            f2 = rot(float(p2[0]), float(p2[1]))
            ff = matmul(f1, f2)
            dev = max(
                abs(ff[i][j] - float(exact[i][j]))
                for i in range(2)
                for j in range(2)
            )
            worst = max(worst, dev)
            print(f"t1={t1} t2={t2}: float deviation {dev:.2e}")
    print(f"worst float deviation: {worst:.2e}  (tolerance 1e-13 is generous)")


if __name__ == "__main__":
    main()
