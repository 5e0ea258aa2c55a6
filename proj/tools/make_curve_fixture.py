#!/usr/bin/env python3
"""Build the curve table fixture from Cremona's tables as packaged in PARI's elldata.

Usage: make_curve_fixture.py ELLDATA_DIR MAX_CONDUCTOR > curves.txt

Each elldata file ellK holds conductors in [1000K, 1000K+999]. The rank is the
number of stored Mordell-Weil generators. Torsion orders are not part of
elldata and are filled in with PARI's elltors (requires the cypari module).
"""
import os
import re
import sys

from cypari import pari


def main():
    root, max_n = sys.argv[1], int(sys.argv[2])
    print("# N label curve_index a1 a2 a3 a4 a6 rank torsion")
    print("# Source: J. E. Cremona's elliptic curve tables (PARI elldata package),")
    print(f"# all curves of conductor <= {max_n}. Torsion computed with PARI elltors.")
    for k in range(max_n // 1000 + 1):
        data = pari(open(os.path.join(root, f"ell{k}")).read())
        for block in data:
            n = int(block[0])
            if n > max_n:
                continue
            for entry in block[1:]:
                label = str(entry[0])
                m = re.fullmatch(r"(\d+)([a-z]+)(\d+)", label)
                assert m and int(m.group(1)) == n, label
                a = [int(x) for x in entry[1]]
                rank = len(entry[2])
                tors = int(pari.elltors(pari.ellinit(a))[0])
                print(n, m.group(2), m.group(3), *a, rank, tors)


if __name__ == "__main__":
    main()
