"""Independent oracle for circular-plane-wave observables.

Defines the wave by its E and B fields directly (no potentials, no
package imports) and evaluates

    chi  = E . curl E + B . curl B      (optical chirality density)
    u    = (|E|^2 + |B|^2) / 2          (energy density)
    |E|, |B|, E.B at the origin

from hand-differentiated closed forms, cross-checked inside this script
against 8th-order central finite differences.  Values printed here are
frozen into the test suite; the package must reproduce them.

Wave definition (c = 1, propagation along unit vector n, orthonormal
frame (e1, e2, n) right-handed, phase theta = w*(t - n.x)):

    E = a*w * ( e1 cos(theta) + sigma e2 sin(theta) )
    B = n x E

Run:  python3 oracles/chirality_oracle.py
"""

import math

H = 1e-3  # FD step for the internal cross-check
FD8 = ((1, 4 / 5), (2, -1 / 5), (3, 4 / 105), (4, -1 / 280))


def wave(a, w, sigma, n, e1):
    """Return closed-form E(t, x), B(t, x) callables."""
    e2 = cross(n, e1)

    def efield(t, x):
        th = w * (t - dot(n, x))
        return [
            a * w * (e1[i] * math.cos(th) + sigma * e2[i] * math.sin(th))
            for i in range(3)
        ]

    def bfield(t, x):
        return cross(n, efield(t, x))

    return efield, bfield


def dot(u, v):
    return sum(ui * vi for ui, vi in zip(u, v))


def cross(u, v):
    return [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]


def curl_closed_form(a, w, sigma, n, e1, t, x):
    """Hand-differentiated curls.  d/dx_j theta = -w n_j, so for
    V = a*w*(p cos + sigma q sin) the gradient of each component is
    grad V_i = a*w^2 * n * (p_i sin - sigma q_i cos), and the curl is
    assembled component by component."""
    e2 = cross(n, e1)
    th = w * (t - dot(n, x))

    def grad_component(p_i, q_i):
        # dV_i/dx_j = a*w * (-p_i sin(th) + sigma q_i cos(th)) * (-w n_j)
        s = a * w * w * (p_i * math.sin(th) - sigma * q_i * math.cos(th))
        return [s * n[j] for j in range(3)]

    def curl_of(p, q):
        gE = [grad_component(p[i], q[i]) for i in range(3)]
        return [
            gE[2][1] - gE[1][2],
            gE[0][2] - gE[2][0],
            gE[1][0] - gE[0][1],
        ]

    # E uses (p, q) = (e1, e2); B = n x E uses (n x e1, n x e2)
    curl_e = curl_of(e1, e2)
    curl_b = curl_of(cross(n, e1), cross(n, e2))
    return curl_e, curl_b


def curl_fd(field, t, x):
    out = [0.0, 0.0, 0.0]
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        dk_j = 0.0  # d field_k / d x_j
        dj_k = 0.0
        for step, cf in FD8:
            xp = list(x)
            xm = list(x)
            xp[j] += step * H
            xm[j] -= step * H
            dk_j += cf * (field(t, xp)[k] - field(t, xm)[k]) / H
            xp = list(x)
            xm = list(x)
            xp[k] += step * H
            xm[k] -= step * H
            dj_k += cf * (field(t, xp)[j] - field(t, xm)[j]) / H
        out[i] = dk_j - dj_k
    return out


def report(a, w, sigma, n, e1, events):
    ef, bf = wave(a, w, sigma, n, e1)
    e0 = ef(0.0, [0.0, 0.0, 0.0])
    b0 = bf(0.0, [0.0, 0.0, 0.0])
    print(f"a={a} w={w} sigma={sigma:+d} n={n}")
    print(f"  |E(0)| = {math.sqrt(dot(e0, e0)):.15g}   (a*w = {a * w:.15g})")
    print(f"  |B(0)| = {math.sqrt(dot(b0, b0)):.15g}")
    print(f"  E.B(0) = {dot(e0, b0):.3e}")
    worst_fd = 0.0
    for t, x in events:
        ce, cb = curl_closed_form(a, w, sigma, n, e1, t, x)
        ce_fd = curl_fd(ef, t, x)
        cb_fd = curl_fd(bf, t, x)
        worst_fd = max(
            worst_fd,
            max(abs(p - q) for p, q in zip(ce, ce_fd)),
            max(abs(p - q) for p, q in zip(cb, cb_fd)),
        )
        e = ef(t, x)
        b = bf(t, x)
        chi = dot(e, ce) + dot(b, cb)
        u = 0.5 * (dot(e, e) + dot(b, b))
        print(
            f"  event t={t} x={x}: chi = {chi:.15g}"
            f"  (2*sigma*a^2*w^3 = {2 * sigma * a * a * w ** 3:.15g})"
            f"  u = {u:.15g}  (a^2 w^2 = {a * a * w * w:.15g})"
        )
    print(f"  closed-form vs FD8 curl max deviation: {worst_fd:.2e}")
    print()


def main():
    z = [0.0, 0.0, 1.0]
    x_hat = [1.0, 0.0, 0.0]
    tilted_n = [2 / 3, 1 / 3, 2 / 3]  # exact unit vector
    tilted_e1 = [1 / math.sqrt(5), -2 / math.sqrt(5), 0.0]  # orthogonal to n
    events = [
        (0.0, [0.0, 0.0, 0.0]),
        (0.3, [0.1, -0.7, 0.25]),
        (-1.2, [2.0, 0.5, -0.4]),
    ]
    for a, w, sigma in ((1.0, 1.0, +1), (1.0, 1.0, -1), (2.0, 3.0, +1), (0.7, 2.0, -1)):
        report(a, w, sigma, z, x_hat, events)
    print("tilted axis:")
    report(1.3, 2.5, +1, tilted_n, tilted_e1, events)


if __name__ == "__main__":
    main()
