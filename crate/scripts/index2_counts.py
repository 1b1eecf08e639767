"""Counts index-2 family instances per family by brute-force enumeration of
slot patterns, independently of the Rust enumerator.

Writes crates/core/fixtures/index2_counts.json.
"""

import itertools
import json
from pathlib import Path

# (catalog id, dim of L, carries an invariant complex structure)
FACTORS = {
    "so:2": (2, True),
    "so:3": (3, False),
    "so:4": (4, False),
    "u:2": (4, True),
}

CASES = [
    (0, []),
    (2, ["so:2"]),
    (3, ["so:3"]),
    (4, ["so:2", "so:2"]),
    (4, ["u:2"]),
]


def counts(n, ids):
    dims = [FACTORS[i][0] for i in ids]
    cplx = [FACTORS[i][1] for i in ids]
    assert sum(dims) == n
    t = len(ids)
    out = {str(f): 0 for f in range(1, 8)}

    # Family 1: keep a subset S of the factors, the rest merges into so(1, l+1);
    # so(1,1) is not irreducible, so l >= 1.
    for keep in itertools.product([False, True], repeat=t):
        l = n - sum(d for d, k in zip(dims, keep) if k)
        if l >= 1:
            out["1"] += 1

    if t == 0:
        out["6"] = 1
        out["7"] = 1
        return out

    out["2"] = 1

    # Family 3: each N_alpha is a non-zero gl(1,C)+h_alpha submodule of C (x) L_alpha.
    subs = []
    for c in cplx:
        subs.append(["full", "L", "Lbar"] if c else ["full"])
    out["3"] = sum(1 for _ in itertools.product(*subs))

    # Families 4 and 5: N_{i,alpha} in {0, L}; not both zero.
    slots = [p for p in itertools.product([0, 1], repeat=2) if p != (0, 0)]
    out["4"] = sum(1 for _ in itertools.product(slots, repeat=t))
    # f_12 maps N_2 into N_1, and Lambda^2 must be present, so N_1 = L.
    out["5"] = sum(1 for pat in itertools.product(slots, repeat=t) if all(a == 1 for a, _ in pat))
    return out


def main():
    rows = [{"n": n, "h": ids, "counts": counts(n, ids)} for n, ids in CASES]
    target = Path(__file__).resolve().parent.parent / "crates/core/fixtures/index2_counts.json"
    target.write_text(json.dumps(rows, indent=2) + "\n")
    print(target)


if __name__ == "__main__":
    main()
