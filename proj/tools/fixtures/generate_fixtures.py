#!/usr/bin/env python3
"""Regenerate the committed newform fixtures with PARI/GP (via cypari2).

The engine never calls this script; it only documents where the numbers in
fixtures/*.json come from. Each form is located by (level, weight, Conrey
character) and its Hecke field is Q(zeta_4) = Q(sqrt(-1)) or Q(sqrt(-2)).

    pip install cypari2
    python3 tools/fixtures/generate_fixtures.py fixtures/
"""
import json
import sys
from fractions import Fraction

import cypari2

pari = cypari2.Pari()
pari.allocatemem(2 * 10**9, silent=True)

BOUND = 1000

# name, level, weight, conrey index, Hecke field disc d (E = Q(sqrt d)),
# variable used by PARI for the generator, inner twist by complex conjugation
FORMS = [
    ("20.3", 20, 3, 13, -1, {"modulus": 5, "conrey": 2}),
    ("36.5", 36, 5, 17, -2, {"modulus": 3, "conrey": 2}),
    ("24.3", 24, 3, 17, -2, {"modulus": 3, "conrey": 2}),
]


def rat(x):
    f = Fraction(int(pari.numerator(x)), int(pari.denominator(x)))
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def coords(a, d):
    """Coordinates of a in the basis (1, sqrt d).

    For d = -1 PARI expresses coefficients in t = zeta_4 = sqrt(-1); for
    d = -2 the relative field is y^2 + 2 with y = sqrt(-2)."""
    a = pari.lift(pari.lift(a))
    var = "t" if d == -1 else "y"
    c0 = pari.polcoef(a, 0, var)
    c1 = pari.polcoef(a, 1, var)
    return [rat(c0), rat(c1)]


def main(outdir):
    for name, N, k, conrey, d, twist in FORMS:
        mf = pari(f"mfinit([{N},{k},Mod({conrey},{N})],0)")
        forms = [F for F in pari.mfeigenbasis(mf)]
        assert len(forms) == 1, name
        F = forms[0]
        assert int(pari.mfisCM(F)) == 0, name
        co = pari.mfcoefs(F, BOUND)
        an = [{"n": n, "a": coords(co[n], d)} for n in range(1, BOUND + 1)]
        fixture = {
            "label": name,
            "level": N,
            "weight": k,
            "char": {"modulus": N, "conrey": conrey},
            "hecke_field": {"degree": 2, "disc": d},
            "an": an,
            "coeff_bound": BOUND,
            "inner_twists": [
                {"auto": "id", "char": {"modulus": 1, "conrey": 1}, "ramified": False},
                {"auto": "conj", "char": twist, "ramified": True},
            ],
            "F": {"degree": 1, "disc": 1},
            "is_cm": False,
            "is_p_minimal": {"2": True},
        }
        with open(f"{outdir}/{name}.json", "w") as fh:
            json.dump(fixture, fh, indent=1)
            fh.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
