"""Enumerate reduced positive definite binary quadratic forms of a negative
discriminant; their number is the class number of Q(sqrt(D)). Used to
produce the provenance records of the class-module fixtures."""

import json
import sys


def reduced_forms(disc):
    forms = []
    a = 1
    while 3 * a * a <= -disc:
        for b in range(-a + 1, a + 1):
            num = b * b - disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            forms.append([a, b, c])
        a += 1
    return forms


if __name__ == "__main__":
    disc = int(sys.argv[1])
    forms = reduced_forms(disc)
    print(json.dumps({"D": disc, "forms": forms, "class_number": len(forms)}))
