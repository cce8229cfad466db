"""Independent oracle values frozen into the C++ unit tests.

Brute-force path sums in mpmath (80 digits), exact integer arithmetic for
digits and binomials, and closed forms. Run: python3 oracles.py
"""
import itertools
import math

import mpmath as mp

mp.mp.dps = 80


def path_sum(moves, N, T, potential, initial, x, sign):
    """sum over all move sequences of prod(w) * exp(sign*t*sum V) * initial(x + S tau).

    moves: list of (weight, displacement); step k uses time (N-k+1) t.
    """
    T = mp.mpf(T)
    t = T / N
    tau = mp.sqrt(T / (2 * N))
    total = mp.mpc(0)
    for seq in itertools.product(range(len(moves)), repeat=N):
        w = mp.mpc(1)
        s = 0
        acc = mp.mpf(0)
        for k, c in enumerate(seq, start=1):
            w *= moves[c][0]
            s += moves[c][1]
            acc += potential(x + s * tau, (N - k + 1) * t)
        total += w * mp.exp(sign * t * acc) * initial(x + s * tau)
    return total


def main():
    diff = [(mp.mpf(1) / 2, -1), (mp.mpf(1) / 2, 1)]
    tdse = [(mp.mpc(1, -2), 0), (mp.mpc(0, 1), 1), (mp.mpc(0, 1), -1)]
    gauss = lambda y: mp.exp(-y * y)
    harmonic = lambda y, s: y * y / 2

    v = path_sum(tdse, 6, 1, harmonic, gauss, mp.mpf("0.3"), mp.mpc(0, -1))
    print("tdse harmonic N=6 T=1 x=0.3:", mp.nstr(v.real, 17), mp.nstr(v.imag, 17))

    v = path_sum(diff, 8, 1, harmonic, gauss, mp.mpf("0.3"), 1)
    print("diffusion harmonic N=8 T=1 x=0.3:", mp.nstr(v.real, 17))

    tv = lambda y, s: mp.sin(y) * s
    v = path_sum(diff, 5, mp.mpf("0.7"), tv, lambda y: mp.cos(y), mp.mpf("-0.4"), 1)
    print("diffusion sin(x)*t N=5 T=0.7 x=-0.4 cos init:", mp.nstr(v.real, 17))

    # E_M for the M = 11 diffusion path (prefix shifts sum to 7) with V = x at x = 0: exp(7 t tau)
    N, T = 5, mp.mpf(1)
    t, tau = T / N, mp.sqrt(T / (2 * N))
    print("E_11 (V=x, x=0, N=5, T=1):", mp.nstr(mp.exp(7 * t * tau), 17))

    print("C(100,50) =", math.comb(100, 50))
    dm = mp.mpf(2) ** 100 / mp.sqrt(50 * mp.pi)
    print("deMoivre(100,50) =", mp.nstr(dm, 17), "rel", mp.nstr(abs(dm - math.comb(100, 50)) / math.comb(100, 50), 6))
    dm16 = mp.mpf(2) ** 16 / mp.sqrt(8 * mp.pi)
    print("deMoivre(16,8) rel", mp.nstr(abs(dm16 - math.comb(16, 8)) / math.comb(16, 8), 6))
    for n in (1, 20, 170):
        r = mp.factorial(n) / (mp.sqrt(2 * mp.pi * n) * mp.mpf(n) ** n * mp.exp(-n))
        print(f"stirling ratio N={n}:", mp.nstr(r, 17), "bound", mp.nstr(mp.exp(mp.mpf(1) / (12 * n)), 17))
    print("20! =", math.factorial(20), "approx", mp.nstr(mp.sqrt(40 * mp.pi) * mp.mpf(20) ** 20 * mp.exp(-20), 17))
    print("5^5/5! =", mp.nstr(mp.mpf(5) ** 5 / 120, 17))

    # Gauss-Hermite checks: free diffusion of exp(-x^2) is exp(-x^2/(1+T))/sqrt(1+T)
    for xx, TT in ((0.5, 1.0), (-1.25, 0.3)):
        print(f"heat gaussian x={xx} T={TT}:", mp.nstr(mp.exp(-mp.mpf(xx) ** 2 / (1 + TT)) / mp.sqrt(1 + TT), 17))

    def digits(M, b):
        out = []
        while M:
            out.append(M % b)
            M //= b
        return out

    print("57 base 3:", digits(57, 3), " 13 base 2:", digits(13, 2))

    # TDSE prefactor sums and path-count table for N = 6
    print("shift counts N=6:", {s: math.comb(6, (6 - s) // 2) for s in range(-6, 7, 2)})


if __name__ == "__main__":
    main()
